"""Independent reference computations: plain Python, fractions and floats, no whakit tensors."""
import cmath
from fractions import Fraction
from itertools import permutations

import numpy as np


def root(n, k=1):
    return cmath.exp(2j * cmath.pi * k / n)


def cyclo_value(coeffs, n):
    """complex value of sum_k coeffs[k] zeta_n^k."""
    return sum(float(c) * root(n, k) for k, c in enumerate(coeffs))


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def dense_einsum(spec, *arrays):
    """numpy einsum over object arrays of Fractions."""
    return np.einsum(spec, *[np.asarray(a, dtype=object) for a in arrays])


# -- groupoids as composition tables

def pair_table(n):
    mor = [(i, j) for i in range(n) for j in range(n)]          # (target, source)
    comp = {((i, j), (j2, k)): (i, k) for (i, j) in mor for (j2, k) in mor if j == j2}
    return mor, comp


def groupoid_product(mor, comp, x, y):
    """x, y: dicts morphism -> Fraction."""
    out = {}
    for g, a in x.items():
        for h, b in y.items():
            c = comp.get((g, h))
            if c is not None:
                out[c] = out.get(c, 0) + a * b
    return {k: v for k, v in out.items() if v}


def is_normalized_left_integral(mor, comp, l):
    """g l = eps_t(g) l for every morphism and eps_t(l) = 1, with eps_t(g) = id_{target(g)}."""
    ident = {g[0]: g for g in mor if g[0] == g[1]}
    for g in mor:
        lhs = groupoid_product(mor, comp, {g: Fraction(1)}, l)
        rhs = groupoid_product(mor, comp, {ident[g[0]]: Fraction(1)}, l)
        if lhs != rhs:
            return False
    et = {}
    for g, a in l.items():
        e = ident[g[0]]
        et[e] = et.get(e, 0) + a
    return et == {e: Fraction(1) for e in ident.values()}


# -- modular data of D(Z_n) for abelian Z_n

def double_cyclic_s(n):
    """S[(a, chi), (b, psi)] = chi(b) psi(a) over labels a, chi in Z_n (unnormalized)."""
    labels = [(a, c) for a in range(n) for c in range(n)]
    return [[root(n, c * b + d * a) for (b, d) in labels] for (a, c) in labels]


def equal_up_to_relabel(S, O, tol=1e-9):
    """S = P O P^T for some permutation P, by backtracking over partial assignments."""
    k = len(O)
    if len(S) != k:
        return False

    def extend(p, used):
        i = len(p)
        if i == k:
            return True
        for c in range(k):
            if c in used:
                continue
            if all(close(S[i][j], O[c][p[j]], tol) and close(S[j][i], O[p[j]][c], tol) for j in range(i)) \
                    and close(S[i][i], O[c][c], tol):
                if extend(p + [c], used | {c}):
                    return True
        return False

    return extend([], frozenset())


# -- bipartite graphs

def star_inclusion(ell):
    """inclusion matrix of k inside k^ell."""
    return [[1] * ell]


def bipartite_isomorphic(M, N):
    if len(M) != len(N) or (M and len(M[0]) != len(N[0])):
        return False
    r = len(M)
    c = len(M[0]) if M else 0
    for pr in permutations(range(r)):
        for pc in permutations(range(c)):
            if all(M[i][j] == N[pr[i]][pc[j]] for i in range(r) for j in range(c)):
                return True
    return False

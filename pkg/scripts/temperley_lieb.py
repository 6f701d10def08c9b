"""The 13-dimensional Temperley-Lieb quantum groupoid: axioms, counital subalgebras, antipode."""
from whakit.constructors import temperley_lieb_wha
from whakit.core import verify_axioms
from whakit.exactmath import SparseTensor, einsum, rank


def main(bound=24):
    H = temperley_lieb_wha(2)
    print(f"{H.name}: dim {H.dim} over Q(zeta_{H.order})")
    print(verify_axioms(H).text())
    print(f"dim H_t = {rank(H.eps_t_matrix)}, dim H_s = {rank(H.eps_s_matrix)}")
    I = SparseTensor.identity(H.dim, H.order)
    P = H.antipode
    for k in range(1, bound + 1):
        if P == I:
            print(f"S^{k} = id")
            return
        P = einsum("ab,bc->ac", P, H.antipode)
    print(f"S^k != id for k <= {bound}")


if __name__ == "__main__":
    main()

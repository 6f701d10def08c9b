"""Command line: whakit {verify, analyze, double, twist, modular, graph, make}."""
import argparse
import json
import os
import sys

from . import config
from .core import StructureError, verify_axioms
from .exactmath import format_scalar
from . import io as wio

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, text, data):
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=1))
    else:
        print(text)


def _log(msg):
    print(msg, file=sys.stderr, flush=True)


def _load(args, path=None):
    return wio.load(path or args.file, skip_verify=args.skip_verify, quiet=not args.verbose)


def _parent(L):
    return wio.content_hash(L.doc)


def _out(args, default):
    return args.out or default


# ---------------------------------------------------------------- commands

def cmd_verify(args):
    from .qtriang import verify_qt
    from .twisting import verify_twist
    L = wio.load(args.file, skip_verify=True)
    reports = {"axioms": verify_axioms(L.H, quiet=not args.verbose)}
    if L.qt is not None:
        reports["r_matrix"] = verify_qt(L.H, L.qt)
    if L.twist is not None:
        reports["twist"] = verify_twist(L.H, L.twist)
    ok = all(r.passed for r in reports.values())
    text = []
    for k, r in reports.items():
        text.append(f"[{k}] strategy={r.strategy}")
        text.append(r.text())
    text.append(f"verdict: {'pass' if ok else 'FAIL'}")
    _emit(args, "\n".join(text), {"passed": ok, **{k: r.to_json() for k, r in reports.items()}})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_analyze(args):
    from .integrals import analyze
    L = _load(args)
    rep = analyze(L.H)
    data = rep.to_json()
    lines = [f"{L.H.name}: dim {L.H.dim}",
             f"left integrals: {rep.left_basis.dims[0]}  right integrals: {rep.right_basis.dims[0]}",
             f"semisimple: {str(rep.semisimple).lower()}",
             f"Haar integral: {'none' if rep.haar is None else ' '.join(wio.vec_json(rep.haar))}",
             f"chi nondegenerate: {str(rep.chi_nondegenerate).lower()}",
             f"S^2 implementers: {rep.g_space.dims[0]}",
             f"canonical g: {'none' if rep.canonical_g is None else ' '.join(wio.vec_json(rep.canonical_g))}"]
    lines += [c.line() for c in rep.checks]
    _emit(args, "\n".join(lines), data)
    return EXIT_OK if all(c.passed for c in rep.checks) else EXIT_FAIL


def cmd_double(args):
    from .qtriang import drinfeld_double
    L = _load(args)
    D = drinfeld_double(L.H)
    out = _out(args, "double.wha.json")
    h = wio.save(out, D.H, D.qt.with_bar(D.H), recipe="double", parent=_parent(L))
    _emit(args, f"wrote {out} (dim {D.H.dim}, hash {h[:16]})", {"path": out, "dim": D.H.dim, "hash": h})
    return EXIT_OK


def cmd_twist(args):
    from .twisting import apply_twist, twist_r_matrix
    L = _load(args)
    t = wio.load_twist(args.twist_file, L.H)
    Ht = apply_twist(L.H, t)
    qt = twist_r_matrix(L.H, L.qt, t) if L.qt is not None else None
    out = _out(args, "twisted.wha.json")
    h = wio.save(out, Ht, qt, recipe="twist", parent=_parent(L))
    _emit(args, f"wrote {out} (dim {Ht.dim}, hash {h[:16]})", {"path": out, "dim": Ht.dim, "hash": h})
    return EXIT_OK


def cmd_modular(args):
    from .repcat import s_matrix
    L = _load(args)
    if L.qt is None:
        raise StructureError("file has no r_matrix section")
    rep = s_matrix(L.H, L.qt)
    rows = [" ".join(f"{format_scalar(x):>6}" for x in r) for r in rep.table]
    lines = ["S ="] + ["  " + r for r in rows]
    lines += [f"block dims: {rep.dims}", f"factorizable: {str(rep.factorizable).lower()}",
              f"normalized two-sided integral: {str(rep.normalized_integral).lower()}",
              f"modular: {str(rep.is_modular).lower()}"]
    if not rep.split:
        lines.append("note: some blocks do not split over the base field; characters are summed over Galois orbits")
    _emit(args, "\n".join(lines), rep.to_json())
    return EXIT_OK


def cmd_graph(args):
    from .repcat import principal_graph_depth2
    L = _load(args)
    g = principal_graph_depth2(L.H)
    if args.dot:
        print(g.to_dot(), end="")
    else:
        _emit(args, f"bottom {g.bottom}\ntop {g.top}\nmatrix {g.matrix}", g.to_json())
    return EXIT_OK


def cmd_make(args):
    from . import constructors as C
    kind = args.kind
    qt = None
    recipe = {"make": kind}
    if kind == "groupoid":
        if args.source:
            with open(args.source) as fh:
                G = C.groupoid_from_dict(json.load(fh))
        elif args.cyclic:
            G = C.cyclic_group(args.cyclic)
        elif args.objects:
            G = C.pair_groupoid(args.objects) if args.full else C.discrete_groupoid(args.objects)
        else:
            raise UsageError("make groupoid needs --objects, --cyclic or --from")
        H = C.groupoid_function_algebra(G) if args.dual else C.groupoid_algebra(G)
        recipe.update(groupoid=G.name, dual=args.dual)
    elif kind == "uqsl2-dynamical":
        from .dynamical import build_dynamical_wha
        D = build_dynamical_wha(args.ell, args.lam, check=True, quiet=not args.verbose)
        H, qt = D.HJ, D.qt
        recipe.update(ell=args.ell, **{"lambda": args.lam})
    elif kind == "elementary":
        B = C.matrix_algebra(args.n) if args.algebra == "matrix" else C.split_commutative(args.n)
        q = None
        if args.q is not None:
            if args.algebra != "matrix" or args.n != 2:
                raise UsageError("--q is only available for the 2x2 matrix algebra")
            q = C.diag_q(args.q)
        H = C.elementary_wha(B, q)
        recipe.update(algebra=args.algebra, n=args.n, q=args.q)
    elif kind == "temperley-lieb":
        if not hasattr(C, "temperley_lieb_wha"):
            raise StructureError("Temperley-Lieb construction is not available in this build")
        H = C.temperley_lieb_wha(args.n)
        recipe.update(n=args.n)
    else:
        raise UsageError(f"unknown kind {kind!r}")
    out = _out(args, f"{kind}.wha.json")
    h = wio.save(out, H, qt, recipe=recipe)
    _emit(args, f"wrote {out} (dim {H.dim}, hash {h[:16]})", {"path": out, "dim": H.dim, "hash": h})
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "analyze": cmd_analyze, "double": cmd_double, "twist": cmd_twist,
            "modular": cmd_modular, "graph": cmd_graph, "make": cmd_make}


# ---------------------------------------------------------------- parsing

def _budget(text):
    keys = {"degree": "max_degree", "dim": "max_dim", "order": "max_order", "chunk": "chunk_pairs",
            "tl": "tl_max_n"}
    for part in filter(None, text.split(",")):
        k, _, v = part.partition("=")
        if k not in keys or not v.isdigit():
            raise argparse.ArgumentTypeError(f"bad budget item {part!r}")
        setattr(config.DEFAULT, keys[k], int(v))
    return text


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("--skip-verify", action="store_true", help="load without running the axiom check")
    common.add_argument("--threads", type=int, help="worker threads (default WHAKIT_THREADS or 1)")
    common.add_argument("--budget", type=_budget, help="limits, e.g. degree=64,dim=4096")
    common.add_argument("-o", "--out", help="output file")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    p = argparse.ArgumentParser(prog="whakit", description="weak Hopf algebra toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("verify", "analyze", "double", "modular"):
        sub.add_parser(name, parents=[common]).add_argument("file")
    g = sub.add_parser("graph", parents=[common])
    g.add_argument("file")
    g.add_argument("--dot", action="store_true")
    t = sub.add_parser("twist", parents=[common])
    t.add_argument("file")
    t.add_argument("twist_file")
    m = sub.add_parser("make", parents=[common])
    m.add_argument("kind", choices=["groupoid", "uqsl2-dynamical", "elementary", "temperley-lieb"])
    m.add_argument("--objects", type=int)
    m.add_argument("--full", action="store_true", help="pair groupoid on the objects")
    m.add_argument("--cyclic", type=int)
    m.add_argument("--from", dest="source")
    m.add_argument("--dual", action="store_true", help="function algebra instead of groupoid algebra")
    m.add_argument("--ell", type=int, default=3)
    m.add_argument("--lambda", dest="lam", type=int, default=2)
    m.add_argument("--algebra", choices=["matrix", "commutative"], default="matrix")
    m.add_argument("--n", type=int, default=2)
    m.add_argument("--q", type=int)
    return p


def main(argv=None):
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.threads:
        os.environ["WHAKIT_THREADS"] = str(config.threads(args.threads))
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        _log(f"usage error: {exc}")
        return EXIT_USAGE
    except (wio.ParseError, StructureError, ArithmeticError, OSError, ValueError) as exc:
        kind = type(exc).__name__
        if args.json:
            data = {"error": str(exc), "kind": kind}
            rep = getattr(exc, "report", None)
            if rep is not None:
                data["report"] = rep.to_json()
            print(json.dumps(data, sort_keys=True, indent=1))
        _log(f"error ({kind}): {exc}")
        return EXIT_FAIL


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()

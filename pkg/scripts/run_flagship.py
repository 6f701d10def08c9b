"""Build the twisted sl2 quantum groupoid H_J, check it and write it to disk."""
import argparse
import time

from whakit import io as wio
from whakit.core import verify_axioms
from whakit.dynamical import build_dynamical_wha
from whakit.qtriang import verify_qt


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--lam", type=int, default=2, help="integer value of the dynamical parameter")
    p.add_argument("-o", "--out", default="HJ.wha.json")
    p.add_argument("-v", "--verbose", action="store_true")
    args = p.parse_args()

    t0 = time.time()
    D = build_dynamical_wha(args.ell, args.lam, check=True, quiet=not args.verbose)
    print(f"built {D.HJ.name}: dim {D.HJ.dim}, field order {D.HJ.order} ({time.time() - t0:.1f}s)")
    rep = verify_axioms(D.HJ, strategy="generators", quiet=not args.verbose)
    print(rep.text())
    qrep = verify_qt(D.HJ, D.qt)
    print(qrep.text())
    h = wio.save(args.out, D.HJ, D.qt.with_bar(D.HJ), recipe={"ell": args.ell, "lambda": args.lam})
    print(f"wrote {args.out} ({h[:16]}), total {time.time() - t0:.1f}s")
    return 0 if rep.passed and qrep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())

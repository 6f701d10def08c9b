"""Write the small example quantum groupoids used by the tests to tests/fixtures/."""
import argparse
import os

from whakit import io as wio
from whakit.constructors import (kG2, kZ, sweedler, elementary_wha, matrix_algebra, split_commutative,
                                 diag_q, cyclic_r_matrix, pair_groupoid, cyclic_group, disjoint_union,
                                 groupoid_algebra)
from whakit.core import dual
from whakit.qtriang import drinfeld_double

HERE = os.path.dirname(os.path.abspath(__file__))


def examples():
    yield "kG2", kG2(), None
    yield "kG2_dual", dual(kG2()), None
    yield "kZ2", kZ(2), None
    yield "kZ3", kZ(3), None
    yield "kZ2xkZ2", groupoid_algebra(disjoint_union(cyclic_group(2), cyclic_group(2))), None
    yield "kG3", groupoid_algebra(pair_groupoid(3)), None
    yield "sweedler", sweedler(), None
    yield "Hq_k2", elementary_wha(split_commutative(2)), None
    yield "Hq_M2", elementary_wha(matrix_algebra(2)), None
    yield "Hq_M2_q2", elementary_wha(matrix_algebra(2), diag_q(2)), None
    for name, H in (("DkZ2", kZ(2)), ("DkG2", kG2())):
        D = drinfeld_double(H)
        yield name, D.H, D.qt.with_bar(D.H)
    H, qt = cyclic_r_matrix(3)
    yield "kZ3_R", H, qt.with_bar(H)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=os.path.join(HERE, "..", "tests", "fixtures"))
    args = p.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name, H, qt in examples():
        path = os.path.join(args.out, f"{name}.wha.json")
        h = wio.save(path, H, qt, recipe={"fixture": name})
        print(f"{name:10s} dim {H.dim:3d}  {h[:16]}")


if __name__ == "__main__":
    main()

"""S-matrices of a few quasitriangular examples: Drinfeld doubles and cyclic R-matrices."""
from whakit.constructors import kZ, kG2, cyclic_r_matrix
from whakit.exactmath import format_scalar
from whakit.qtriang import drinfeld_double
from whakit.repcat import s_matrix


def examples():
    # kZ3 is read over Q(zeta_3) so that its double splits
    for name, H in (("D(kZ2)", kZ(2)), ("D(kZ3)", kZ(3).over(3)), ("D(kG2)", kG2())):
        D = drinfeld_double(H)
        yield name, D.H, D.qt
    for n in (2, 3, 4):
        H, qt = cyclic_r_matrix(n)
        yield f"kZ{n} cyclic R", H, qt


def main():
    for name, H, qt in examples():
        rep = s_matrix(H, qt)
        note = "" if rep.split else " (not split over the base field)"
        print(f"{name}: dim {H.dim}, {len(rep.dims)} simple modules, modular {rep.is_modular}{note}")
        for row in rep.table:
            print("   " + " ".join(f"{format_scalar(x):>10}" for x in row))


if __name__ == "__main__":
    main()

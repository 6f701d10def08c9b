from .field import Scalar, FieldError, zeta, scalar, parse_scalar, format_scalar, phi
from .sparse import SparseTensor, einsum, contract, outer
from .linalg import (AffineSolutionSpace, solve_affine, nullspace, rank, rref, inverse,
                     span, in_span, intersect, vstack, hstack, rows,
                     coord_matrix, quotient)
from .poly import factor_minpoly, minpoly

__all__ = [
    "Scalar", "FieldError", "zeta", "scalar", "parse_scalar", "format_scalar", "phi",
    "SparseTensor", "einsum", "contract", "outer",
    "AffineSolutionSpace", "solve_affine", "nullspace", "rank", "rref", "inverse",
    "span", "in_span", "intersect", "vstack", "hstack", "rows", "coord_matrix", "quotient",
    "factor_minpoly", "minpoly",
]

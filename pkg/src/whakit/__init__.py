"""Exact computations with finite-dimensional weak Hopf algebras over cyclotomic fields."""
from .core import QuantumGroupoid, StructureError, AxiomReport, verify_axioms, dual, tensor, connectivity
from .qtriang import QTStructure, verify_qt, drinfeld_double, drinfeld_u, ribbon, factorizability
from .twisting import Twist, verify_twist, apply_twist, gauge_twist
from .integrals import analyze, haar_integral, is_semisimple
from .repcat import wedderburn, s_matrix, principal_graph_depth2, inclusion_matrix
from .io import load, save

__version__ = "0.1.0"

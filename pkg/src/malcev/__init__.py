"""Computable pieces of relative Malcev completion.

Exact rational linear algebra, free and presented graded Lie algebras with
their truncated enveloping algebras, reduced bar constructions on finite DGA
models, Chen iterated integrals and parallel transport, finite-group
representation theory, and the KZ holonomy of braid groups.
"""
from .bar import BarComplex, DGAModel, CoefficientCoalgebra, h0, bar_differential, shuffle_product
from .braid_kz import BraidWord, braid_holonomy, drinfeld_kohno, kz_system
from .envelope import Envelope, TruncatedSeries, exp, log, is_grouplike
from .exactla import RatMatrix, rank, kernel_basis
from .free_lie import FreeLieAlgebra, LiePresentation, nilpotent_quotient, witt_dimension
from .groups import FiniteGroup, symmetric_group, cyclic_group
from .relcomp import Irrep, young_irreps, peter_weyl_check, SemidirectElement, relative_rep
from .transport import PiecewisePath, PolynomialSegment, ArcSegment, DlogForm, PolyForm, LieValuedOneForm, transport

__version__ = "0.1.0"

__all__ = [
    "BarComplex",
    "DGAModel",
    "CoefficientCoalgebra",
    "h0",
    "bar_differential",
    "shuffle_product",
    "BraidWord",
    "braid_holonomy",
    "drinfeld_kohno",
    "kz_system",
    "Envelope",
    "TruncatedSeries",
    "exp",
    "log",
    "is_grouplike",
    "RatMatrix",
    "rank",
    "kernel_basis",
    "FreeLieAlgebra",
    "LiePresentation",
    "nilpotent_quotient",
    "witt_dimension",
    "FiniteGroup",
    "symmetric_group",
    "cyclic_group",
    "Irrep",
    "young_irreps",
    "peter_weyl_check",
    "SemidirectElement",
    "relative_rep",
    "PiecewisePath",
    "PolynomialSegment",
    "ArcSegment",
    "DlogForm",
    "PolyForm",
    "LieValuedOneForm",
    "transport",
]

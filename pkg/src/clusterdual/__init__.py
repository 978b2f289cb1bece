"""Exact cluster mutation, tropical points and duality maps for polygon cluster varieties."""

from .errors import DomainError
from .exact import LaurentPoly, OmegaScalar, SFRat, sfr_equal
from .polygon import DiskLamination, MarkedArcSet, Triangulation
from .quantum import QTElem, ia_classical, ia_q, id_classical, id_q
from .seed import CompatiblePair, Seed

__all__ = [
    "CompatiblePair",
    "DiskLamination",
    "DomainError",
    "LaurentPoly",
    "MarkedArcSet",
    "OmegaScalar",
    "QTElem",
    "SFRat",
    "Seed",
    "Triangulation",
    "ia_classical",
    "ia_q",
    "id_classical",
    "id_q",
    "sfr_equal",
]

__version__ = "0.1.0"

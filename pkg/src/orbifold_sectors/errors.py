"""Exception hierarchy.

Every error may carry a ``witness``: a small JSON-friendly mapping that pins
down the offending element, arrow or block so reports can show it verbatim.
"""

from __future__ import annotations

from typing import Any


class SectorError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


# group-core
class CapExceeded(SectorError):
    pass


class NotABijection(SectorError):
    pass


class NotAHomomorphism(SectorError):
    pass


# groupoid-core
class NotAFunctor(SectorError):
    pass


class ComponentOutOfPlace(SectorError):
    pass


# linear-rep
class NotFiniteOrder(SectorError):
    pass


class RoundingResidualExceeded(SectorError):
    pass


class NegativeMultiplicity(SectorError):
    pass


class OddElementHasNoAge(SectorError):
    pass


class NotComplexLinear(SectorError):
    pass


# orientifold-lagrangian
class NotAdjointInvariant(SectorError):
    pass


class EmptyLagrangian(SectorError):
    pass


# dihedral-sector
class DihedralMismatch(SectorError):
    pass


# diagonal-correspondence
class NotWellDefined(SectorError):
    pass


class NotInjective(SectorError):
    pass


class NotSurjective(SectorError):
    pass


# model files
class ParseError(SectorError):
    pass


class SchemaError(SectorError):
    pass


class InconsistentBlocks(SectorError):
    pass


class MissingBlock(SectorError):
    pass

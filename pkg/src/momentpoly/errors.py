"""Semantic exception hierarchy shared by all momentpoly modules."""


class MomentPolyError(Exception):
    """Base error for this package."""


class LengthMismatch(MomentPolyError, ValueError):
    """A table or vector does not have the expected length."""


class DimensionMismatch(MomentPolyError, ValueError):
    """Operands live in different ambient dimensions."""


class UnitMismatch(MomentPolyError, ValueError):
    """Operands carry incompatible unit tags (plain vs 4pi)."""


class Empty(MomentPolyError, ValueError):
    """An operation received an empty point set."""


class InvalidM(MomentPolyError, ValueError):
    """Simplex dimension must be a positive integer."""


class InvalidN(MomentPolyError, ValueError):
    """Builtin family size must be a positive integer."""


class RankDeficient(MomentPolyError, ValueError):
    """The functions 1, F_1, ..., F_n are linearly dependent: the
    parameterization is not minimal."""


class NonIntegralF(MomentPolyError, ValueError):
    """The canonical torification convention needs integer differences
    F(x_m) - F(x_k); supply torification data explicitly instead."""


class NonRationalWeights(MomentPolyError, ValueError):
    """An exact identity check needs a distribution with rational weights."""


class ChartSingular(MomentPolyError, ValueError):
    """The requested affine chart is singular at this projective point."""


class FormatError(MomentPolyError, ValueError):
    """A serialized family, rational, or config value cannot be parsed.

    The message names the offending field.
    """

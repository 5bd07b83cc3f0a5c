"""Exact rational vectors, matrices and linear algebra over Fraction.

Everything here is plumbing for the exact layers (polytope, moment): parsing
and formatting of ``"a/b"`` strings, tuple-based vectors/matrices, and
fraction-exact Gaussian elimination for ranks and invertibility tests.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, FormatError

RationalVector = tuple[Fraction, ...]
RationalMatrix = tuple[RationalVector, ...]

RationalLike = Union[Fraction, int, str]


def to_fraction(value: RationalLike, field: str = "value") -> Fraction:
    """Coerce an exact input (Fraction, int, or 'a/b' / 'a' string) to Fraction.

    Floats are rejected on purpose: they are not exact inputs.  NaN and
    infinity strings are rejected as non-rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FormatError(f"{field}: booleans are not rational values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        lowered = text.lower()
        if lowered in {"nan", "inf", "-inf", "+inf", "infinity", "-infinity"}:
            raise FormatError(f"{field}: {value!r} is not a rational number")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"{field}: cannot parse {value!r} as a rational") from exc
    raise FormatError(f"{field}: expected rational string or integer, got {type(value).__name__}")


def format_fraction(q: Fraction) -> str:
    """Render a Fraction as 'a' or 'a/b' (reduced, denominator positive)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vector(entries: Iterable[RationalLike], field: str = "vector") -> RationalVector:
    return tuple(to_fraction(e, field) for e in entries)


def matrix(rows: Iterable[Iterable[RationalLike]], field: str = "matrix") -> RationalMatrix:
    out = tuple(vector(row, field) for row in rows)
    widths = {len(row) for row in out}
    if len(widths) > 1:
        raise DimensionMismatch(f"{field}: rows have unequal lengths {sorted(widths)}")
    return out


def zeros(n: int) -> RationalVector:
    return (Fraction(0),) * n


def identity(n: int) -> RationalMatrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def vec_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> RationalVector:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths {len(a)} and {len(b)} differ")
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> RationalVector:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths {len(a)} and {len(b)} differ")
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c: Fraction, a: Sequence[Fraction]) -> RationalVector:
    return tuple(c * x for x in a)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> RationalVector:
    if m and len(m[0]) != len(v):
        raise DimensionMismatch(f"matrix width {len(m[0])} does not match vector length {len(v)}")
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch(f"inner dimensions {len(a[0])} and {len(b)} differ")
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a_row[k] * b[k][j] for k in range(len(b))) for j in range(cols)) for a_row in a
    )


def transpose(m: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    if not m:
        return ()
    return tuple(tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank via fraction Gaussian elimination."""
    work = [list(row) for row in rows if any(row)]
    if not work:
        return 0
    cols = len(work[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return r


def is_invertible(m: Sequence[Sequence[Fraction]]) -> bool:
    return bool(m) and len(m) == len(m[0]) and rank(m) == len(m)


def all_integral(v: Sequence[Fraction]) -> bool:
    return all(x.denominator == 1 for x in v)

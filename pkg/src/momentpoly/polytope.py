"""Exact rational convex-polytope kernel.

V-representations with minimal, canonically sorted vertex sets; membership,
hulls and relative-interior tests run through the exact simplex solver, so
every answer is a theorem about the input rationals rather than a float
estimate.  Momentum-side polytopes carry a '4pi' unit tag: coordinates are
stored divided by 4*pi, which keeps the whole theorem layer rational.

Scale target is small: dimension <= ~6 and at most a couple hundred points.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import rational
from .errors import DimensionMismatch, Empty, InvalidM, UnitMismatch
from .linprog import INFEASIBLE, OPTIMAL, solve_lp
from .rational import RationalMatrix, RationalVector


class Units(str, Enum):
    PLAIN = "plain"
    FOUR_PI = "4pi"


def _canonical_key(v: RationalVector) -> tuple:
    # Design convention: lexicographic on reduced (numerator, denominator) pairs.
    return tuple((e.numerator, e.denominator) for e in v)


@dataclass(frozen=True)
class Polytope:
    """Convex polytope given by its minimal vertex set, canonically sorted.

    Build instances with :func:`hull`; the dataclass itself does not reprove
    minimality.
    """

    ambient_dim: int
    vertices: tuple[RationalVector, ...]
    units: Units = Units.PLAIN

    def with_units(self, units: Units) -> "Polytope":
        return Polytope(self.ambient_dim, self.vertices, units)

    def __repr__(self) -> str:
        vs = ", ".join("(" + ", ".join(map(rational.format_fraction, v)) + ")" for v in self.vertices)
        return f"Polytope(dim={self.ambient_dim}, units={self.units.value}, vertices=[{vs}])"


@dataclass(frozen=True)
class AffineMap:
    """x -> linear @ x + offset with exact rational coefficients."""

    linear: RationalMatrix
    offset: RationalVector

    def __post_init__(self) -> None:
        if self.linear and any(len(row) != len(self.linear[0]) for row in self.linear):
            raise DimensionMismatch("affine map rows have unequal lengths")
        if len(self.linear) != len(self.offset):
            raise DimensionMismatch(
                f"affine map has {len(self.linear)} output rows but offset of length {len(self.offset)}"
            )

    @property
    def dim_in(self) -> int:
        return len(self.linear[0]) if self.linear else 0

    @property
    def dim_out(self) -> int:
        return len(self.offset)

    def apply(self, x: Sequence[Fraction]) -> RationalVector:
        return rational.vec_add(rational.mat_vec(self.linear, x), self.offset)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner: (self.compose(inner))(x) = self(inner(x))."""
        if self.dim_in != inner.dim_out:
            raise DimensionMismatch(
                f"cannot compose: inner output dim {inner.dim_out} != outer input dim {self.dim_in}"
            )
        return AffineMap(
            linear=rational.mat_mul(self.linear, inner.linear),
            offset=rational.vec_add(rational.mat_vec(self.linear, inner.offset), self.offset),
        )

    def is_invertible(self) -> bool:
        return rational.is_invertible(self.linear)

    @staticmethod
    def identity(n: int, offset: Optional[Sequence[Fraction]] = None) -> "AffineMap":
        return AffineMap(rational.identity(n), tuple(offset) if offset is not None else rational.zeros(n))


def hull(points: Iterable[Sequence[Fraction]], units: Units = Units.PLAIN) -> Polytope:
    """Minimal V-representation of conv(points), exactly.

    Redundancy removal: a point is dropped iff it is a convex combination of
    the remaining points (rational feasibility LP).  Duplicates are removed
    first; a single point yields a 0-dimensional polytope.
    """
    pts = [tuple(Fraction(e) for e in p) for p in points]
    if not pts:
        raise Empty("hull of an empty point set")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise DimensionMismatch("hull: points of mixed dimension")
    # Dedup, keep deterministic order.
    seen: dict[RationalVector, None] = {}
    for p in pts:
        seen.setdefault(p, None)
    work = list(seen.keys())
    i = 0
    while i < len(work):
        others = work[:i] + work[i + 1 :]
        if others and _in_hull(work[i], others):
            work.pop(i)
        else:
            i += 1
    work.sort(key=_canonical_key)
    return Polytope(ambient_dim=dim, vertices=tuple(work), units=units)


def _in_hull(x: RationalVector, points: Sequence[RationalVector]) -> bool:
    """Feasibility of x = sum l_i p_i, sum l_i = 1, l >= 0."""
    dim = len(x)
    lhs = [[p[j] for p in points] for j in range(dim)]
    lhs.append([Fraction(1)] * len(points))
    rhs = list(x) + [Fraction(1)]
    res = solve_lp([Fraction(0)] * len(points), lhs, rhs)
    return res.status == OPTIMAL


def contains(p: Polytope, x: Sequence[Fraction], units: Optional[Units] = None) -> bool:
    """Exact membership test."""
    if len(x) != p.ambient_dim:
        raise DimensionMismatch(f"point of dim {len(x)} vs polytope of dim {p.ambient_dim}")
    if units is not None and units != p.units:
        raise UnitMismatch(f"point in {units.value} units vs polytope in {p.units.value} units")
    return _in_hull(tuple(Fraction(e) for e in x), p.vertices)


def interior_coefficient(p: Polytope, x: Sequence[Fraction]) -> Optional[Fraction]:
    """Largest t with x = sum l_i v_i, sum l_i = 1, l_i >= t >= 0; None if x outside.

    t > 0 characterizes the relative interior (a point of conv(V) is in the
    relative interior iff it is a strictly positive convex combination of all
    vertices), so this doubles as an exact interior-margin measure.
    """
    if len(x) != p.ambient_dim:
        raise DimensionMismatch(f"point of dim {len(x)} vs polytope of dim {p.ambient_dim}")
    verts = p.vertices
    k = len(verts)
    xf = tuple(Fraction(e) for e in x)
    # Substitute l_i = s_i + t: rows are sum_i s_i v_i + t*(sum_i v_i) = x and
    # sum_i s_i + k t = 1, variables (s_1..s_k, t) >= 0, maximize t.
    col_sum = [sum(v[j] for v in verts) for j in range(p.ambient_dim)]
    lhs = [[v[j] for v in verts] + [col_sum[j]] for j in range(p.ambient_dim)]
    lhs.append([Fraction(1)] * k + [Fraction(k)])
    rhs = list(xf) + [Fraction(1)]
    objective = [Fraction(0)] * k + [Fraction(-1)]
    res = solve_lp(objective, lhs, rhs)
    if res.status == INFEASIBLE:
        return None
    assert res.status == OPTIMAL and res.value is not None
    return -res.value


def relative_interior_contains(
    p: Polytope, x: Sequence[Fraction], margin: Fraction = Fraction(0)
) -> bool:
    t = interior_coefficient(p, x)
    return t is not None and t > margin


def affine_image(p: Polytope, a: AffineMap, units: Optional[Units] = None) -> Polytope:
    """Hull of {A(v)}; minimality is re-established since A may collapse vertices."""
    if a.dim_in != p.ambient_dim:
        raise DimensionMismatch(f"map expects dim {a.dim_in}, polytope has dim {p.ambient_dim}")
    return hull((a.apply(v) for v in p.vertices), units=units if units is not None else p.units)


def equals(p: Polytope, q: Polytope) -> bool:
    """Exact equality; valid as list comparison because both are canonical."""
    if p.units != q.units:
        raise UnitMismatch(f"{p.units.value} vs {q.units.value}")
    if p.ambient_dim != q.ambient_dim:
        return False
    return p.vertices == q.vertices


def simplex(m: int) -> Polytope:
    """Standard simplex conv{0, e_1, ..., e_m} in plain units."""
    if m < 1:
        raise InvalidM(f"simplex dimension must be >= 1, got {m}")
    pts = [rational.zeros(m)] + [
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(m)) for i in range(m)
    ]
    return hull(pts)


def dim(p: Polytope) -> int:
    """Affine dimension: exact rank of vertex differences."""
    if len(p.vertices) <= 1:
        return 0
    v0 = p.vertices[0]
    return rational.rank([rational.vec_sub(v, v0) for v in p.vertices[1:]])


def vertex_diffs_integral(p: Polytope) -> bool:
    """True iff every pairwise vertex difference is an integer vector.

    Only meaningful in 4pi units, where '4pi Z^n' becomes 'Z^n'.
    """
    if p.units != Units.FOUR_PI:
        raise UnitMismatch("vertex_diffs_integral expects a polytope in 4pi units")
    verts = p.vertices
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if not rational.all_integral(rational.vec_sub(verts[i], verts[j])):
                return False
    return True


def vertex_diff_witnesses(p: Polytope) -> list[tuple[str, RationalVector]]:
    """All pairwise differences v_i - v_j (i < j), with labels, for reports."""
    out = []
    verts = p.vertices
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            out.append((f"v{i} - v{j}", rational.vec_sub(verts[i], verts[j])))
    return out


def to_json_dict(p: Polytope) -> dict:
    return {
        "units": p.units.value,
        "vertices": [[rational.format_fraction(e) for e in v] for v in p.vertices],
    }


def to_csv(p: Polytope) -> str:
    """Decimal vertex table (12 significant digits) for plotting."""
    header = ",".join(f"x{j + 1}" for j in range(p.ambient_dim))
    lines = [header]
    for v in p.vertices:
        lines.append(",".join(f"{float(e):.12g}" for e in v))
    return "\n".join(lines) + "\n"

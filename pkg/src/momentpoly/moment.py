"""Marginal polytopes, torification data, and the exact theorem-level checks.

The moment polytope of the torified family is represented two independent
ways: as the image -T(simplex) + c of the standard simplex, and as the image
A(marginal polytope) of the statistic hull.  Both live in '4pi units'
(momentum coordinates divided by 4*pi), so their equality, the vertex
difference integrality, and the pointwise identity -T p + c = A(E_p F) are
all decided with exact rational arithmetic.

Canonical convention used throughout: T's column k is F(x_m) - F(x_k) and
A (in 4pi units) is y -> (y - F(x_m)) + c, which is what the point-mass
correspondences force and what reproduces the binomial row [n, n-1, ..., 1].
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import polytope as poly
from . import rational
from .errors import DimensionMismatch, NonIntegralF, NonRationalWeights
from .expfam import ExponentialFamily, ProbabilityDistribution, is_full, mean_params, pdf_exact
from .polytope import AffineMap, Polytope, Units
from .rational import RationalVector
from .report import VerificationReport, Witness, make_report

INTERIOR_MARGIN = Fraction(1, 10**9)  # numeric fallback margin for interior tests


@dataclass(frozen=True)
class TorificationData:
    """Integer matrix T, offset c, and affine map A, all in 4pi units.

    The type accepts user-supplied conventions; use
    :func:`torification_consistent` to check them against a family.
    """

    t_matrix: tuple[tuple[int, ...], ...]
    c_offset: RationalVector
    a_map: AffineMap

    def __post_init__(self) -> None:
        n = len(self.c_offset)
        if len(self.t_matrix) != n:
            raise DimensionMismatch(
                f"T has {len(self.t_matrix)} rows but c_offset has length {n}"
            )
        widths = {len(row) for row in self.t_matrix}
        if len(widths) > 1:
            raise DimensionMismatch("T rows have unequal lengths")
        for row in self.t_matrix:
            for e in row:
                if not isinstance(e, int) or isinstance(e, bool):
                    raise NonIntegralF(f"T entries must be integers, got {e!r}")
        if self.a_map.dim_out != n or self.a_map.dim_in != n:
            raise DimensionMismatch("A must be a square map matching c_offset")
        if not self.a_map.is_invertible():
            raise DimensionMismatch("A must be bijective (invertible linear part)")

    @property
    def n(self) -> int:
        return len(self.c_offset)

    @property
    def m(self) -> int:
        return len(self.t_matrix[0]) if self.t_matrix else 0

    def t_fractions(self) -> rational.RationalMatrix:
        return tuple(tuple(Fraction(e) for e in row) for row in self.t_matrix)


def _fmt_vec(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(rational.format_fraction(e) for e in v) + ")"


def _fmt_vertices(p: Polytope) -> str:
    return "[" + ", ".join(_fmt_vec(v) for v in p.vertices) + "]"


def marginal_polytope(fam: ExponentialFamily) -> Polytope:
    """Hull of the statistic images {F(x)}, in plain units."""
    return poly.hull(fam.f_table, units=Units.PLAIN)


def mean_in_interior(
    fam: ExponentialFamily,
    theta: Optional[Sequence[float]] = None,
    theta_exp: Optional[Sequence[Fraction]] = None,
) -> bool:
    """Is eta(theta) in the relative interior of the marginal polytope?

    With ``theta_exp`` (theta_i = log of the given positive rationals) the
    density weights are exact and the test is exact.  With a float ``theta``
    the mean vector is rationalized bit-exactly and tested with margin 1e-9
    on the minimal barycentric coordinate.
    """
    mp = marginal_polytope(fam)
    if theta_exp is not None:
        p = pdf_exact(fam, theta_exp)
        eta = _expectation_vector(fam, p)
        return poly.relative_interior_contains(mp, eta)
    if theta is None:
        raise NonRationalWeights("provide either theta or theta_exp")
    eta_float = mean_params(fam, theta)
    eta = tuple(Fraction(float(x)) for x in eta_float)
    t = poly.interior_coefficient(mp, eta)
    return t is not None and t >= INTERIOR_MARGIN


def canonical_torification(
    fam: ExponentialFamily, c_offset: Optional[Sequence[Fraction]] = None
) -> TorificationData:
    """Build the canonical (T, c, A) for a family with integral F-differences.

    Column k of T is F(x_m) - F(x_k); A in 4pi units is y -> (y - F(x_m)) + c.
    Momentum maps are defined up to a constant, so c defaults to 0.
    """
    m = fam.space.m
    n = fam.n
    fm = fam.f_table[m]
    c = rational.zeros(n) if c_offset is None else rational.vector(c_offset, "c_offset")
    if len(c) != n:
        raise DimensionMismatch(f"c_offset has length {len(c)}, family dimension is {n}")
    columns = []
    for k in range(m):
        diff = rational.vec_sub(fm, fam.f_table[k])
        if not rational.all_integral(diff):
            raise NonIntegralF(
                f"F(x_m) - F(x_{k}) = {_fmt_vec(diff)} is not an integer vector; "
                "the canonical convention does not apply"
            )
        columns.append(tuple(int(e) for e in diff))
    t_matrix = tuple(tuple(columns[k][i] for k in range(m)) for i in range(n))
    a_map = AffineMap.identity(n, rational.vec_sub(c, fm))
    data = TorificationData(t_matrix=t_matrix, c_offset=c, a_map=a_map)
    check = torification_consistent(fam, data)
    if not check.passed:  # holds by construction; re-checked on principle
        raise AssertionError(f"canonical torification failed its own consistency check: {check}")
    return data


def torification_consistent(fam: ExponentialFamily, data: TorificationData) -> VerificationReport:
    """Exact check of the defining correspondences A(F(x_k)) = -T e_{k+1} + c
    and A(F(x_m)) = c."""
    m = fam.space.m
    witnesses = []
    t = data.t_fractions()
    for k in range(m):
        lhs = data.a_map.apply(fam.f_table[k])
        col = tuple(t[i][k] for i in range(data.n))
        rhs = rational.vec_sub(data.c_offset, col)
        witnesses.append(
            Witness(f"A(F(x_{k})) = -T e_{k + 1} + c", _fmt_vec(rhs), _fmt_vec(lhs), lhs == rhs)
        )
    lhs = data.a_map.apply(fam.f_table[m])
    witnesses.append(
        Witness(f"A(F(x_{m})) = c", _fmt_vec(data.c_offset), _fmt_vec(lhs), lhs == data.c_offset)
    )
    return make_report("torification_consistency", witnesses)


def t_from_rho(rho_star: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """T as the transpose of the torus homomorphism derivative rho_*."""
    rows = [tuple(row) for row in rho_star]
    for row in rows:
        for e in row:
            if not isinstance(e, int) or isinstance(e, bool):
                raise NonIntegralF(f"rho_* entries must be integers, got {e!r}")
    if not rows:
        return ()
    return tuple(tuple(rows[i][j] for i in range(len(rows))) for j in range(len(rows[0])))


def moment_polytope(data: TorificationData, m: int) -> Polytope:
    """-T(simplex_m) + c, tagged 4pi units."""
    if data.m != m:
        raise DimensionMismatch(f"T has {data.m} columns, expected m={m}")
    t = data.t_fractions()
    neg_t = tuple(tuple(-e for e in row) for row in t)
    image_map = AffineMap(linear=neg_t, offset=data.c_offset)
    return poly.affine_image(poly.simplex(m), image_map, units=Units.FOUR_PI)


def moment_polytope_from_family(
    fam: ExponentialFamily, c_offset: Optional[Sequence[Fraction]] = None
) -> Polytope:
    """A(marginal polytope) with the canonical A, tagged 4pi units.

    This route never needs integrality of F-differences, which makes it the
    right one for exercising the vertex-difference test on families where the
    canonical T does not exist.
    """
    n = fam.n
    fm = fam.f_table[fam.space.m]
    c = rational.zeros(n) if c_offset is None else rational.vector(c_offset, "c_offset")
    a_map = AffineMap.identity(n, rational.vec_sub(c, fm))
    return poly.affine_image(marginal_polytope(fam), a_map, units=Units.FOUR_PI)


def verify_theorem(fam: ExponentialFamily, data: TorificationData) -> VerificationReport:
    """Exact equality of A(marginal polytope) and -T(simplex) + c.

    The fullness hypothesis is tested numerically and recorded as a note;
    a non-full family still gets compared.
    """
    m = fam.space.m
    full, rank = is_full(fam)
    lhs = poly.affine_image(marginal_polytope(fam), data.a_map, units=Units.FOUR_PI)
    rhs = moment_polytope(data, m)
    ok = poly.equals(lhs, rhs)
    witnesses = [
        Witness(
            "vertex lists: A(marginal polytope) vs -T(simplex)+c",
            _fmt_vertices(rhs),
            _fmt_vertices(lhs),
            ok,
        )
    ]
    notes = [f"fullness: rank {rank} of m={m} -> {'full' if full else 'NOT full'}"]
    if not full:
        msg = "family is not full; the moment-polytope identity hypothesis fails"
        notes.append(f"warning: {msg}")
        warnings.warn(msg, UserWarning, stacklevel=2)
    return make_report("theorem_moment_polytope", witnesses, tuple(notes))


def verify_identity(
    fam: ExponentialFamily, data: TorificationData, p: ProbabilityDistribution
) -> VerificationReport:
    """Exact pointwise identity -T (p(x_0)..p(x_{m-1})) + c = A(E_p F), 4pi units."""
    if not p.exact:
        raise NonRationalWeights("verify_identity needs a distribution with rational weights")
    m = fam.space.m
    if p.space.size != fam.space.size:
        raise DimensionMismatch("distribution and family live on different sample spaces")
    t = data.t_fractions()
    head = [Fraction(w) for w in p.weights[:m]]
    lhs = rational.vec_sub(data.c_offset, rational.mat_vec(t, head))
    rhs = data.a_map.apply(_expectation_vector(fam, p))
    witness = Witness("-T p_head + c = A(E_p F)", _fmt_vec(rhs), _fmt_vec(lhs), lhs == rhs)
    return make_report("pointwise_identity", [witness])


def _expectation_vector(fam: ExponentialFamily, p: ProbabilityDistribution) -> RationalVector:
    acc = rational.zeros(fam.n)
    for w, row in zip(p.weights, fam.f_table):
        acc = rational.vec_add(acc, rational.vec_scale(Fraction(w), row))
    return acc


def verify_corollary(data: TorificationData, m: int) -> VerificationReport:
    """All pairwise vertex differences of the moment polytope integral (4pi units)."""
    mp = moment_polytope(data, m)
    return corollary_report(mp)


def corollary_report(mp: Polytope) -> VerificationReport:
    """Vertex-difference integrality report for an already-built 4pi polytope."""
    overall = poly.vertex_diffs_integral(mp)
    witnesses = []
    for label, diff in poly.vertex_diff_witnesses(mp):
        ok = rational.all_integral(diff)
        witnesses.append(Witness(f"{label} integral", "integer vector", _fmt_vec(diff), ok))
    if not witnesses:  # single-vertex polytope: nothing to compare
        witnesses.append(Witness("no vertex pairs", "-", "-", True))
    rep = make_report("corollary_vertex_differences", witnesses)
    assert rep.passed == overall  # per-pair witnesses refine the same predicate
    return rep

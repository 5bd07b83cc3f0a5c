"""Exponential families on finite sample spaces and their statistical geometry.

A family is pinned down by exact rational tables: a base function C and a
statistic map F on the sample points, with densities proportional to
exp(C(x) + <F(x), theta>).  The log-normalizer psi, the mean parameters
(= grad psi) and the Fisher information (= Hess psi = Cov F) are computed in
floating point; the tables themselves stay rational so the convex-geometry
layer can work exactly.

C values that are logarithms of rationals (the binomial coefficients case)
are stored symbolically as :class:`LogRational`, which keeps densities exactly
rational whenever theta is itself a vector of logs of rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import rational
from .errors import FormatError, InvalidN, LengthMismatch, RankDeficient
from .rational import RationalVector

FD_STEP = 1e-4            # central-difference step for gradient/Hessian oracles
FULLNESS_SEED = 0xC0FFEE  # fixed seed for the numeric fullness rank test
FULLNESS_PIVOT_TOL = 1e-9


@dataclass(frozen=True)
class SampleSpace:
    """Ordered finite sample space; the LAST point is the distinguished one."""

    labels: tuple

    def __post_init__(self) -> None:
        if len(self.labels) < 2:
            raise LengthMismatch("sample space needs at least two points")
        if len(set(self.labels)) != len(self.labels):
            raise FormatError("labels: sample point names must be pairwise distinct")

    @property
    def m(self) -> int:
        return len(self.labels) - 1

    @property
    def size(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class LogRational:
    """A value log(q) for an exact positive rational q, kept symbolic."""

    value: Fraction

    def __post_init__(self) -> None:
        if self.value <= 0:
            raise FormatError(f"C_log_of: log argument must be positive, got {self.value}")

    def __float__(self) -> float:
        return math.log(self.value.numerator) - math.log(self.value.denominator)


CEntry = Union[Fraction, LogRational]


def c_float(entry: CEntry) -> float:
    return float(entry)


def c_exp_rational(entry: CEntry) -> Optional[Fraction]:
    """exp(C(x)) as an exact rational when that is possible, else None."""
    if isinstance(entry, LogRational):
        return entry.value
    return Fraction(1) if entry == 0 else None


@dataclass(frozen=True)
class ExponentialFamily:
    space: SampleSpace
    c_table: tuple[CEntry, ...]
    f_table: tuple[RationalVector, ...]
    n: int

    def f_float(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.f_table], dtype=float)

    def c_float(self) -> np.ndarray:
        return np.array([c_float(c) for c in self.c_table], dtype=float)


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Point of the probability simplex over a sample space.

    ``exact`` distributions carry Fraction weights summing to exactly 1;
    numeric ones carry floats summing to 1 within 1e-12.
    """

    space: SampleSpace
    weights: tuple
    exact: bool

    def __post_init__(self) -> None:
        if len(self.weights) != self.space.size:
            raise LengthMismatch(
                f"{len(self.weights)} weights for {self.space.size} sample points"
            )
        if self.exact:
            if any(not isinstance(w, Fraction) for w in self.weights):
                raise FormatError("weights: exact distribution needs Fraction weights")
            if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
                raise FormatError("weights: must be nonnegative and sum to exactly 1")
        else:
            ws = [float(w) for w in self.weights]
            if any(not math.isfinite(w) or w < -1e-15 for w in ws):
                raise FormatError("weights: must be finite and nonnegative")
            if abs(sum(ws) - 1.0) > 1e-12:
                raise FormatError(f"weights: sum {sum(ws)!r} is not 1 within 1e-12")

    def float_weights(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights], dtype=float)


def new_family(
    space: SampleSpace,
    c_table: Sequence[CEntry],
    f_table: Sequence[Sequence[Fraction]],
) -> ExponentialFamily:
    """Validate tables and the minimality rank condition, exactly.

    The (m+1) x (n+1) matrix with rows (1, F(x)) must have rank n+1, i.e.
    1, F_1, ..., F_n linearly independent over the sample space.
    """
    size = space.size
    if len(c_table) != size:
        raise LengthMismatch(f"C table has {len(c_table)} entries for {size} sample points")
    if len(f_table) != size:
        raise LengthMismatch(f"F table has {len(f_table)} rows for {size} sample points")
    c_entries: list[CEntry] = []
    for i, c in enumerate(c_table):
        if isinstance(c, LogRational):
            c_entries.append(c)
        else:
            c_entries.append(rational.to_fraction(c, f"C[{i}]"))
    rows = [rational.vector(row, f"F[{i}]") for i, row in enumerate(f_table)]
    n = len(rows[0])
    if n < 1:
        raise LengthMismatch("F table needs at least one statistic per point")
    if any(len(row) != n for row in rows):
        raise LengthMismatch("F rows have unequal lengths")
    lifted = [(Fraction(1),) + row for row in rows]
    if rational.rank(lifted) != n + 1:
        raise RankDeficient(
            "functions 1, F_1, ..., F_n are linearly dependent on the sample space"
        )
    return ExponentialFamily(space=space, c_table=tuple(c_entries), f_table=tuple(rows), n=n)


def _as_theta(fam: ExponentialFamily, theta: Sequence[float]) -> np.ndarray:
    th = np.asarray(theta, dtype=float).reshape(-1)
    if th.shape != (fam.n,):
        raise LengthMismatch(f"theta has length {th.size}, family has dimension {fam.n}")
    if not np.all(np.isfinite(th)):
        raise FormatError("theta: entries must be finite")
    return th


def _log_weights(fam: ExponentialFamily, theta: Sequence[float]) -> np.ndarray:
    th = _as_theta(fam, theta)
    return fam.c_float() + fam.f_float() @ th


def log_partition(fam: ExponentialFamily, theta: Sequence[float]) -> float:
    """psi(theta) = log sum_x exp(C(x) + <F(x), theta>), max-shifted."""
    a = _log_weights(fam, theta)
    shift = float(np.max(a))
    return shift + math.log(float(np.sum(np.exp(a - shift))))


def pdf(fam: ExponentialFamily, theta: Sequence[float]) -> ProbabilityDistribution:
    a = _log_weights(fam, theta)
    a -= np.max(a)
    w = np.exp(a)
    w /= w.sum()
    return ProbabilityDistribution(space=fam.space, weights=tuple(float(x) for x in w), exact=False)


def pdf_exact(fam: ExponentialFamily, theta_exp: Sequence[Fraction]) -> ProbabilityDistribution:
    """Exact density for theta_i = log(u_i), u_i the given positive rationals.

    Needs every exp(C(x)) rational (LogRational or zero entries) and an
    integer-valued F, so each weight exp(C(x)) * prod u_i^{F_i(x)} is an exact
    rational.  This is the path that keeps the binomial pipeline exact.
    """
    us = [rational.to_fraction(u, f"theta_exp[{i}]") for i, u in enumerate(theta_exp)]
    if len(us) != fam.n:
        raise LengthMismatch(f"theta_exp has length {len(us)}, family has dimension {fam.n}")
    if any(u <= 0 for u in us):
        raise FormatError("theta_exp: entries must be positive rationals")
    raw: list[Fraction] = []
    for x in range(fam.space.size):
        ec = c_exp_rational(fam.c_table[x])
        if ec is None:
            raise FormatError(
                "pdf_exact needs exp(C(x)) rational for every sample point"
            )
        w = ec
        for i, u in enumerate(us):
            f = fam.f_table[x][i]
            if f.denominator != 1:
                raise FormatError("pdf_exact needs an integer-valued F table")
            w *= u ** f.numerator
        raw.append(w)
    total = sum(raw)
    return ProbabilityDistribution(
        space=fam.space, weights=tuple(w / total for w in raw), exact=True
    )


def expectation(p: ProbabilityDistribution, x_table: Sequence[float]) -> float:
    """E_p(X) = sum_x X(x) p(x)."""
    if len(x_table) != p.space.size:
        raise LengthMismatch(f"{len(x_table)} values for {p.space.size} sample points")
    return float(np.dot(p.float_weights(), np.asarray(x_table, dtype=float)))


def mean_params(fam: ExponentialFamily, theta: Sequence[float]) -> np.ndarray:
    """eta(theta) = E_{p_theta}(F) = grad psi(theta)."""
    w = pdf(fam, theta).float_weights()
    return w @ fam.f_float()


def fisher(fam: ExponentialFamily, theta: Sequence[float]) -> np.ndarray:
    """Fisher information = Cov_{p_theta}(F) = Hess psi(theta); symmetric PD."""
    w = pdf(fam, theta).float_weights()
    f = fam.f_float()
    eta = w @ f
    second = f.T @ (w[:, None] * f)
    return second - np.outer(eta, eta)


def _numeric_rank(rows: np.ndarray, tol: float) -> int:
    """Row-echelon rank with pivot tolerance."""
    work = np.array(rows, dtype=float)
    nrows, ncols = work.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = r + int(np.argmax(np.abs(work[r:, c])))
        if abs(work[pivot, c]) <= tol:
            continue
        work[[r, pivot]] = work[[pivot, r]]
        work[r] = work[r] / work[r, c]
        for i in range(nrows):
            if i != r:
                work[i] -= work[i, c] * work[r]
        r += 1
    return r


def is_full(
    fam: ExponentialFamily,
    num_samples: Optional[int] = None,
    tol: float = FULLNESS_PIVOT_TOL,
) -> tuple[bool, int]:
    """Numeric fullness test: sampled densities must span the simplex hyperplane.

    Draws seeded Gaussian thetas, forms the differences p_theta - p_0 (which
    live in the sum-zero hyperplane) and reports their numeric rank; the
    family is full iff that rank is m.  Reproducible by construction.
    """
    m = fam.space.m
    if num_samples is None:
        num_samples = 4 * (m + 1)
    if num_samples < m + 1:
        raise LengthMismatch(f"need at least m+1={m + 1} samples, got {num_samples}")
    rng = np.random.default_rng(FULLNESS_SEED)
    base = pdf(fam, np.zeros(fam.n)).float_weights()
    rows = np.empty((num_samples, m + 1), dtype=float)
    for k in range(num_samples):
        theta = rng.standard_normal(fam.n)
        rows[k] = pdf(fam, theta).float_weights() - base
    r = _numeric_rank(rows, tol)
    return r == m, r


def binomial_family(n: int) -> ExponentialFamily:
    """Binomial distributions on {0..n}: C(k) = log binom(n,k), F(k) = (k).

    The natural parameter is the log-odds of the success probability.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"binomial family needs integer n >= 1, got {n!r}")
    space = SampleSpace(labels=tuple(range(n + 1)))
    c_table = tuple(LogRational(Fraction(math.comb(n, k))) for k in range(n + 1))
    f_table = tuple((Fraction(k),) for k in range(n + 1))
    return new_family(space, c_table, f_table)


def point_mass(space: SampleSpace, index: int) -> ProbabilityDistribution:
    """Exact delta mass at sample point index."""
    weights = tuple(Fraction(1 if i == index else 0) for i in range(space.size))
    return ProbabilityDistribution(space=space, weights=weights, exact=True)


# --- family file format -----------------------------------------------------


def family_from_dict(data: dict) -> ExponentialFamily:
    """Parse the JSON family format.

    Shape: {"labels": [...], "F": [["0"], ["1"]], and exactly one of
    "C": ["0", ...] (plain rational values) or "C_log_of": ["1", "2", ...]
    (meaning C(x) = log(value))}.  Rationals are strings 'a/b' or 'a', or
    integers; anything non-rational (floats, NaN, Inf) is rejected.
    """
    if not isinstance(data, dict):
        raise FormatError("family: expected a JSON object")
    labels = data.get("labels")
    if not isinstance(labels, list) or len(labels) < 2:
        raise FormatError("labels: expected a list of at least two sample point names")
    for i, lab in enumerate(labels):
        if isinstance(lab, bool) or not isinstance(lab, (str, int)):
            raise FormatError(f"labels[{i}]: expected string or integer name")
    space = SampleSpace(labels=tuple(labels))

    f_rows = data.get("F")
    if not isinstance(f_rows, list):
        raise FormatError("F: expected a list of rational vectors")
    f_table = []
    for i, row in enumerate(f_rows):
        if not isinstance(row, list):
            raise FormatError(f"F[{i}]: expected a list of rationals")
        f_table.append([rational.to_fraction(e, f"F[{i}][{j}]") for j, e in enumerate(row)])

    has_c = "C" in data
    has_log = "C_log_of" in data
    if has_c == has_log:
        raise FormatError("C: provide exactly one of 'C' or 'C_log_of'")
    if has_c:
        c_raw = data["C"]
        if not isinstance(c_raw, list):
            raise FormatError("C: expected a list of rationals")
        c_table: list[CEntry] = [rational.to_fraction(e, f"C[{i}]") for i, e in enumerate(c_raw)]
    else:
        c_raw = data["C_log_of"]
        if not isinstance(c_raw, list):
            raise FormatError("C_log_of: expected a list of positive rationals")
        c_table = [
            LogRational(rational.to_fraction(e, f"C_log_of[{i}]")) for i, e in enumerate(c_raw)
        ]
    return new_family(space, c_table, f_table)


def family_to_dict(fam: ExponentialFamily) -> dict:
    out: dict = {
        "labels": list(fam.space.labels),
        "F": [[rational.format_fraction(e) for e in row] for row in fam.f_table],
    }
    if any(isinstance(c, LogRational) for c in fam.c_table):
        logs = []
        for i, c in enumerate(fam.c_table):
            if isinstance(c, LogRational):
                logs.append(rational.format_fraction(c.value))
            elif c == 0:
                logs.append("1")
            else:
                raise FormatError(
                    f"C[{i}]: cannot serialize a nonzero plain value next to log entries"
                )
        out["C_log_of"] = logs
    else:
        out["C"] = [rational.format_fraction(c) for c in fam.c_table]
    return out

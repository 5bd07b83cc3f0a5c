"""Numeric differential geometry: the Kahler tube, projective space, Veronese.

The tangent bundle of the family carries the metric diag(h, h) in the complex
coordinates theta + i r (h = Fisher matrix); quotienting the fibers by a
parallel lattice gives a tube with a torus action.  This module evaluates
that structure pointwise in binary64 and checks the momentum-map identity
omega(xi_N, u) = d mu^xi(u) by central finite differences, both on the tube
and on complex projective space with the scaled Fubini-Study metric, together
with the equivariance and isometry checks for the Veronese immersion of the
binomial family.

Sign and scale conventions are frozen here once: the Kahler form is
[[0, h], [-h, 0]] in (q, r) block order, and the calibrated lattice frame is
TUBE_FRAME_SCALE times the transpose of A's linear part (4pi units), i.e.
-4pi * I for the canonical A.  A regression test pins the calibration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ChartSingular, DimensionMismatch, FormatError, InvalidN
from .expfam import ExponentialFamily, ProbabilityDistribution, SampleSpace, fisher, mean_params
from .moment import TorificationData
from .report import VerificationReport, Witness, make_report

FD_STEP = 1e-4
KAHLER_SEED = 0xA11CE
FOUR_PI = 4.0 * math.pi
TUBE_FRAME_SCALE = -FOUR_PI  # calibrated once against the Bernoulli family


@dataclass(frozen=True)
class TubePoint:
    """Point of the tube: base theta plus fiber coordinate r (a representative)."""

    theta: tuple[float, ...]
    r: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.theta) != len(self.r):
            raise DimensionMismatch("theta and r must have equal lengths")
        if not all(math.isfinite(v) for v in self.theta + self.r):
            raise FormatError("tube point: entries must be finite")

    def reduced(self, fr: "Frame") -> "TubePoint":
        """Representative with frame coordinates of r in [0, 1)."""
        b = fr.b_matrix
        coeffs = np.linalg.solve(b, np.asarray(self.r))
        r_new = b @ (coeffs - np.floor(coeffs))
        return TubePoint(theta=self.theta, r=tuple(float(v) for v in r_new))


def tube_point(theta: Sequence[float], r: Sequence[float]) -> TubePoint:
    return TubePoint(theta=tuple(float(v) for v in theta), r=tuple(float(v) for v in r))


@dataclass(frozen=True)
class Frame:
    """Parallel frame, columns in the d/dtheta basis; must be invertible."""

    b_matrix: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.b_matrix, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise DimensionMismatch("frame matrix must be square")
        if abs(np.linalg.det(b)) < 1e-12:
            raise FormatError("frame matrix must be invertible")
        object.__setattr__(self, "b_matrix", b)


def calibration_frame(data: TorificationData) -> Frame:
    """The frame the momentum identity singles out: -4pi * (A linear part)^T."""
    lin = np.array([[float(e) for e in row] for row in data.a_map.linear])
    return Frame(b_matrix=TUBE_FRAME_SCALE * lin.T)


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates, canonicalized: unit norm, first significant
    entry real positive."""

    z: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.z) - 1


def projective_point(coords: Sequence[complex]) -> ProjectivePoint:
    z = np.asarray(coords, dtype=complex).reshape(-1)
    if z.size < 2:
        raise DimensionMismatch("projective point needs at least two homogeneous coordinates")
    if not (np.all(np.isfinite(z.real)) and np.all(np.isfinite(z.imag))):
        raise FormatError("projective point: coordinates must be finite")
    norm = float(np.linalg.norm(z))
    if norm == 0.0:
        raise FormatError("projective point: coordinates must not all be zero")
    z = z / norm
    mags = np.abs(z)
    lead = int(np.argmax(mags > 1e-12 * float(mags.max())))
    phase = z[lead] / abs(z[lead])
    z = z * np.conj(phase)
    z.setflags(write=False)
    return ProjectivePoint(z=z)


def projective_distance(a: ProjectivePoint, b: ProjectivePoint) -> float:
    """Euclidean distance of canonical representatives."""
    return float(np.linalg.norm(a.z - b.z))


# --- tube geometry -----------------------------------------------------------


def dombrowski_metric(fam: ExponentialFamily, theta: Sequence[float]) -> np.ndarray:
    """diag(h, h) in (q, r) block order; depends on the base point only."""
    h = fisher(fam, theta)
    n = h.shape[0]
    g = np.zeros((2 * n, 2 * n))
    g[:n, :n] = h
    g[n:, n:] = h
    return g


def kahler_form(fam: ExponentialFamily, theta: Sequence[float]) -> np.ndarray:
    """[[0, h], [-h, 0]] in (q, r) block order (antisymmetric)."""
    h = fisher(fam, theta)
    n = h.shape[0]
    w = np.zeros((2 * n, 2 * n))
    w[:n, n:] = h
    w[n:, :n] = -h
    return w


def closedness_check(
    fam: ExponentialFamily,
    theta: Sequence[float],
    tol: float,
    step: float = FD_STEP,
    metric_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> VerificationReport:
    """d omega = 0, reduced to symmetry of the metric derivatives.

    For omega = sum h_ij dq_i ^ dr_j closedness is exactly
    dh_ij/dq_k = dh_kj/dq_i; with h the Hessian of the log-partition this is
    third-derivative symmetry.  An injected non-Hessian metric_fn breaks it.
    """
    th = np.asarray(theta, dtype=float)
    h_of = metric_fn if metric_fn is not None else (lambda q: fisher(fam, q))
    n = h_of(th).shape[0]
    dh = np.empty((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = step
        dh[:, :, k] = (h_of(th + e) - h_of(th - e)) / (2 * step)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                worst = max(worst, abs(dh[i, j, k] - dh[k, j, i]))
    witness = Witness(
        "max |dh_ij/dq_k - dh_kj/dq_i|", f"<= {tol!r}", repr(worst), worst <= tol
    )
    return make_report("kahler_closedness", [witness])


def tube_action(point: TubePoint, fr: Frame, t: Sequence[float]) -> TubePoint:
    """Translate the fiber coordinate by B t; the base point is unchanged."""
    shift = fr.b_matrix @ np.asarray(t, dtype=float)
    return TubePoint(
        theta=point.theta, r=tuple(float(a + b) for a, b in zip(point.r, shift))
    )


def tube_momentum(
    fam: ExponentialFamily, data: TorificationData, point: TubePoint
) -> np.ndarray:
    """A applied to the mean parameters at the base point, in true units.

    Independent of the fiber coordinate by construction.
    """
    eta = mean_params(fam, point.theta)
    lin = np.array([[float(e) for e in row] for row in data.a_map.linear])
    off = np.array([float(e) for e in data.a_map.offset])
    return FOUR_PI * (lin @ eta + off)


def hamiltonian_check_tube(
    fam: ExponentialFamily,
    data: TorificationData,
    point: TubePoint,
    fr: Frame,
    tol: float,
    step: float = FD_STEP,
) -> VerificationReport:
    """omega(xi_N, u) = d mu^xi(u) on the tube, by central differences.

    Checked for every torus generator xi and all 2n coordinate directions u.
    """
    n = fam.n
    theta = np.asarray(point.theta, dtype=float)
    r = np.asarray(point.r, dtype=float)
    omega = kahler_form(fam, theta)
    b = fr.b_matrix

    def mu(x: np.ndarray) -> np.ndarray:
        pt = TubePoint(theta=tuple(x[:n]), r=tuple(x[n:]))
        return tube_momentum(fam, data, pt)

    x0 = np.concatenate([theta, r])
    grad = np.empty((n, 2 * n))  # grad[i] = FD gradient of mu^{e_i}
    for a in range(2 * n):
        e = np.zeros(2 * n)
        e[a] = step
        diff = (mu(x0 + e) - mu(x0 - e)) / (2 * step)
        grad[:, a] = diff
    witnesses = []
    for i in range(n):
        xi = np.concatenate([np.zeros(n), b[:, i]])
        lhs = xi @ omega  # row of omega(xi_N, .) against coordinate directions
        err = float(np.max(np.abs(lhs - grad[i])))
        witnesses.append(
            Witness(
                f"generator {i}: max |omega(xi,u) - d mu^xi(u)|",
                f"<= {tol!r}",
                repr(err),
                err <= tol,
            )
        )
    return make_report("hamiltonian_tube", witnesses)


# --- projective space --------------------------------------------------------


def k_map(z: ProjectivePoint, space: Optional[SampleSpace] = None) -> ProbabilityDistribution:
    """Squared-modulus weights |z_k|^2 / |z|^2 as a probability function."""
    w = np.abs(z.z) ** 2
    w = w / w.sum()
    if space is None:
        space = SampleSpace(labels=tuple(f"x{k}" for k in range(len(w))))
    elif space.size != len(w):
        raise DimensionMismatch(
            f"projective point on P^{len(w) - 1} vs sample space of size {space.size}"
        )
    return ProbabilityDistribution(space=space, weights=tuple(float(v) for v in w), exact=False)


def alpha_map(p: ProbabilityDistribution) -> np.ndarray:
    """-4pi (p(x_0), ..., p(x_{m-1})): the last coordinate is dropped."""
    w = p.float_weights()
    return -FOUR_PI * w[:-1]


def mu_prime(z: ProjectivePoint) -> np.ndarray:
    """Momentum map of the torus action on P^m: alpha after the K map.

    The image lies in -4pi * simplex; that containment is re-checked here.
    """
    out = alpha_map(k_map(z))
    if np.any(out > 1e-12) or np.any(out < -FOUR_PI - 1e-12) or out.sum() < -FOUR_PI - 1e-12:
        raise AssertionError(f"mu' value {out} escaped -4pi * simplex")
    return out


def torus_action_pm(t: Sequence[float], z: ProjectivePoint) -> ProjectivePoint:
    """Phase rotation by exp(2 pi i t_j) on the first m coordinates."""
    ts = np.asarray(t, dtype=float).reshape(-1)
    if ts.size != z.dim:
        raise DimensionMismatch(f"t has length {ts.size}, expected {z.dim}")
    phases = np.exp(2j * np.pi * ts)
    return projective_point(np.concatenate([z.z[:-1] * phases, z.z[-1:]]))


@dataclass(frozen=True)
class ChartMetric:
    """Scaled Fubini-Study metric in one affine chart, as a real bilinear form.

    ``matrix`` acts on stacked (Re w, Im w) tangent vectors; ``omega()`` is
    the matching symplectic form G(J., .).
    """

    chart: int
    w: np.ndarray
    matrix: np.ndarray
    curvature: float

    def bilinear(self, u: Sequence[float], v: Sequence[float]) -> float:
        return float(np.asarray(u) @ self.matrix @ np.asarray(v))

    def omega(self) -> np.ndarray:
        mc = len(self.w)
        p = self.matrix[:mc, :mc]
        q = self.matrix[:mc, mc:]
        out = np.zeros_like(self.matrix)
        out[:mc, :mc] = -q
        out[:mc, mc:] = p
        out[mc:, :mc] = -p
        out[mc:, mc:] = -q
        return out


def _chart_index(z: ProjectivePoint, chart: Optional[int]) -> int:
    mags = np.abs(z.z)
    if chart is None:
        return int(np.argmax(mags))
    if not 0 <= chart < len(z.z):
        raise ChartSingular(f"chart index {chart} out of range")
    if mags[chart] <= 1e-9 * float(mags.max()):
        raise ChartSingular(f"coordinate {chart} vanishes at this point")
    return chart


def _chart_coords(z: np.ndarray, chart: int) -> np.ndarray:
    keep = [j for j in range(len(z)) if j != chart]
    return z[keep] / z[chart]


def fs_metric(z: ProjectivePoint, c: float, chart: Optional[int] = None) -> ChartMetric:
    """Fubini-Study metric with holomorphic sectional curvature c, one chart.

    Normalized so a projective line has area 4pi/c and the momentum identity
    holds for the phase torus action; complex form (4/c) * H with
    H = I/(1+|w|^2) - conj(w) w^T / (1+|w|^2)^2.
    """
    if c <= 0:
        raise FormatError(f"curvature must be positive, got {c}")
    k0 = _chart_index(z, chart)
    w = _chart_coords(z.z, k0)
    mc = len(w)
    s = float(np.sum(np.abs(w) ** 2))
    h = np.eye(mc, dtype=complex) / (1 + s) - np.outer(np.conj(w), w) / (1 + s) ** 2
    p = h.real
    q = h.imag
    g = np.zeros((2 * mc, 2 * mc))
    g[:mc, :mc] = p
    g[:mc, mc:] = q
    g[mc:, :mc] = -q
    g[mc:, mc:] = p
    return ChartMetric(chart=k0, w=w, matrix=(4.0 / c) * g, curvature=c)


def mu_c_p1(c: float, z: ProjectivePoint) -> float:
    """Momentum value -(4pi/c) |z_0|^2 / (|z_0|^2 + |z_1|^2) on the line."""
    if len(z.z) != 2:
        raise DimensionMismatch("mu_c_p1 expects a point on the projective line")
    if c <= 0:
        raise FormatError(f"curvature must be positive, got {c}")
    mags = np.abs(z.z) ** 2
    return float(-(FOUR_PI / c) * mags[0] / mags.sum())


def hamiltonian_check_pm(
    m: int,
    c: float,
    z: ProjectivePoint,
    tol: float,
    step: float = FD_STEP,
    metric_curvature: Optional[float] = None,
) -> VerificationReport:
    """Momentum identity on P^m for the phase action, metric scaled by c.

    The momentum components are (1/c) times the alpha-after-K values; for
    m = 1 this is exactly the curvature-c line formula.  ``metric_curvature``
    lets a test misdeclare the metric scale against the momentum scale.
    """
    if z.dim != m:
        raise DimensionMismatch(f"point lives on P^{z.dim}, expected P^{m}")
    k0 = _chart_index(z, None)
    keep = [j for j in range(m + 1) if j != k0]
    w0 = _chart_coords(z.z, k0)

    def embed(x: np.ndarray) -> np.ndarray:
        w = x[:m] + 1j * x[m:]
        zz = np.empty(m + 1, dtype=complex)
        zz[k0] = 1.0
        for slot, j in enumerate(keep):
            zz[j] = w[slot]
        return zz

    def mu_component(x: np.ndarray, i: int) -> float:
        zz = embed(x)
        mags = np.abs(zz) ** 2
        return float(-(FOUR_PI / c) * mags[i] / mags.sum())

    x0 = np.concatenate([w0.real, w0.imag])
    metric = fs_metric(z, metric_curvature if metric_curvature is not None else c, chart=k0)
    omega = metric.omega()
    witnesses = []
    for i in range(m):
        grad = np.empty(2 * m)
        for a in range(2 * m):
            e = np.zeros(2 * m)
            e[a] = step
            grad[a] = (mu_component(x0 + e, i) - mu_component(x0 - e, i)) / (2 * step)
        rate = np.array(
            [2j * np.pi * ((1.0 if j == i else 0.0) - (1.0 if k0 == i else 0.0)) * w0[slot]
             for slot, j in enumerate(keep)]
        )
        xi = np.concatenate([rate.real, rate.imag])
        lhs = xi @ omega
        err = float(np.max(np.abs(lhs - grad)))
        witnesses.append(
            Witness(
                f"generator {i}: max |omega(xi,u) - d mu^xi(u)|",
                f"<= {tol!r}",
                repr(err),
                err <= tol,
            )
        )
    return make_report("hamiltonian_pm", witnesses)


# --- Veronese immersion of the binomial family -------------------------------


def _veronese_raw(n: int, z0: complex, z1: complex) -> np.ndarray:
    return np.array(
        [math.sqrt(math.comb(n, k)) * z0 ** (n - k) * z1 ** k for k in range(n + 1)],
        dtype=complex,
    )


def veronese(n: int, z: ProjectivePoint) -> ProjectivePoint:
    """Degree-n Veronese image of a point on the projective line."""
    if n < 1:
        raise InvalidN(f"veronese needs n >= 1, got {n}")
    if len(z.z) != 2:
        raise DimensionMismatch("veronese expects a point on the projective line")
    return projective_point(_veronese_raw(n, z.z[0], z.z[1]))


def rho_binomial(n: int, t: float) -> np.ndarray:
    """Torus homomorphism of the Veronese immersion: t -> (n t, ..., 2 t, t)."""
    if n < 1:
        raise InvalidN(f"rho_binomial needs n >= 1, got {n}")
    return np.array([(n - k) * t for k in range(n)], dtype=float)


def verify_equivariance(n: int, t: float, z: ProjectivePoint, tol: float) -> VerificationReport:
    """f(phase_t . z) equals phase_{rho(t)} . f(z) as projective points."""
    lhs = veronese(n, torus_action_pm([t], z))
    rhs = torus_action_pm(rho_binomial(n, t), veronese(n, z))
    d = projective_distance(lhs, rhs)
    witness = Witness(
        f"n={n}, t={t!r}: canonical representative distance", f"<= {tol!r}", repr(d), d <= tol
    )
    return make_report("veronese_equivariance", [witness])


def kf_binomial_error(n: int, z: ProjectivePoint) -> float:
    """Max deviation of K(veronese(z)) from the binomial law with
    q = |z_1|^2 / (|z_0|^2 + |z_1|^2)."""
    weights = k_map(veronese(n, z)).float_weights()
    mags = np.abs(z.z) ** 2
    q = float(mags[1] / mags.sum())
    law = np.array([math.comb(n, k) * q**k * (1 - q) ** (n - k) for k in range(n + 1)])
    return float(np.max(np.abs(weights - law)))


def verify_momentum_factorization_binomial(
    n: int,
    z: ProjectivePoint,
    c_offset: Optional[Sequence[Fraction]] = None,
    tol: float = 1e-9,
) -> VerificationReport:
    """T mu'(f(z)) + C matches the curvature-1/n line momentum up to the
    constant fixed at [0, 1]."""
    from .expfam import binomial_family
    from .moment import canonical_torification

    fam = binomial_family(n)
    data = canonical_torification(fam, c_offset)
    t_row = np.array([float(e) for e in data.t_fractions()[0]])
    c_true = FOUR_PI * float(data.c_offset[0])

    def lhs(point: ProjectivePoint) -> float:
        return float(t_row @ mu_prime(veronese(n, point))) + c_true

    anchor = projective_point([0.0, 1.0])
    constant = lhs(anchor) - mu_c_p1(1.0 / n, anchor)
    left = lhs(z)
    right = mu_c_p1(1.0 / n, z) + constant
    err = abs(left - right)
    witness = Witness(
        f"n={n}: |T mu'(f(z)) + C - (mu_{{1/n}}(z) + const)|", f"<= {tol!r}", repr(err), err <= tol
    )
    return make_report("momentum_factorization", [witness])


def pullback_isometry_check(
    n: int, z: ProjectivePoint, tol: float, step: float = FD_STEP
) -> VerificationReport:
    """FD pullback of the curvature-1 metric through the Veronese map equals
    the curvature-1/n metric on the line."""
    if len(z.z) != 2:
        raise DimensionMismatch("pullback check expects a point on the projective line")
    k0b = _chart_index(z, None)
    other = 1 - k0b
    image0 = _veronese_raw(n, z.z[0], z.z[1])
    k0t = int(np.argmax(np.abs(image0)))
    keep_t = [j for j in range(n + 1) if j != k0t]

    w0 = z.z[other] / z.z[k0b]

    def chart_map(x: np.ndarray) -> np.ndarray:
        zz = np.empty(2, dtype=complex)
        zz[k0b] = 1.0
        zz[other] = x[0] + 1j * x[1]
        img = _veronese_raw(n, zz[0], zz[1])
        if abs(img[k0t]) == 0.0:
            raise ChartSingular("veronese image left the target chart")
        w = img[keep_t] / img[k0t]
        return np.concatenate([w.real, w.imag])

    x0 = np.array([w0.real, w0.imag])
    jac = np.empty((2 * n, 2))
    for a in range(2):
        e = np.zeros(2)
        e[a] = step
        jac[:, a] = (chart_map(x0 + e) - chart_map(x0 - e)) / (2 * step)

    target = fs_metric(veronese(n, z), 1.0, chart=k0t)
    pulled = jac.T @ target.matrix @ jac
    source = fs_metric(z, 1.0 / n, chart=k0b).matrix
    scale = float(np.max(np.abs(source)))
    rel_err = float(np.max(np.abs(pulled - source)) / scale)
    witness = Witness(
        f"n={n}: rel. deviation of pulled-back metric", f"<= {tol!r}", repr(rel_err), rel_err <= tol
    )
    return make_report("veronese_pullback_isometry", [witness])

"""Seeded verification suites: reusable by the service, the CLI and the tests.

Each suite runs one kind of check at a batch of seeded sample points and
merges the outcomes into a single report, so identical (config, seed) pairs
produce identical output byte for byte.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kahler, moment, polytope, rational
from .expfam import ExponentialFamily, ProbabilityDistribution, SampleSpace, binomial_family
from .kahler import FD_STEP, KAHLER_SEED, ProjectivePoint, projective_point
from .moment import TorificationData
from .polytope import Polytope, Units
from .report import VerificationReport, Witness, make_report

DEFAULT_CHECK_TOL = 1e-5


def random_projective_point(rng: np.random.Generator, m: int) -> ProjectivePoint:
    z = rng.standard_normal(m + 1) + 1j * rng.standard_normal(m + 1)
    return projective_point(z)


def random_rational_distribution(
    rng: np.random.Generator, size: int, space: Optional[SampleSpace] = None
) -> ProbabilityDistribution:
    """Exact random point of the probability simplex (small integer weights)."""
    if space is None:
        space = SampleSpace(labels=tuple(f"x{k}" for k in range(size)))
    while True:
        raw = rng.integers(0, 20, size=size)
        if raw.sum() > 0:
            break
    total = int(raw.sum())
    weights = tuple(Fraction(int(v), total) for v in raw)
    return ProbabilityDistribution(space=space, weights=weights, exact=True)


def _merge(name: str, labeled: list[tuple[str, VerificationReport]]) -> VerificationReport:
    witnesses = []
    notes: list[str] = []
    for label, rep in labeled:
        for w in rep.witnesses:
            witnesses.append(Witness(f"{label}: {w.description}", w.expected, w.actual, w.ok))
        notes.extend(f"{label}: {note}" for note in rep.notes)
    return make_report(name, witnesses, tuple(notes))


def closedness_suite(
    fam: ExponentialFamily,
    count: int = 10,
    seed: int = KAHLER_SEED,
    tol: float = DEFAULT_CHECK_TOL,
    step: float = FD_STEP,
) -> VerificationReport:
    rng = np.random.default_rng(seed)
    labeled = []
    for k in range(count):
        theta = rng.standard_normal(fam.n)
        labeled.append((f"point {k}", kahler.closedness_check(fam, theta, tol, step)))
    return _merge("kahler_closedness", labeled)


def tube_suite(
    fam: ExponentialFamily,
    data: TorificationData,
    count: int = 10,
    seed: int = KAHLER_SEED,
    tol: float = DEFAULT_CHECK_TOL,
    step: float = FD_STEP,
) -> VerificationReport:
    rng = np.random.default_rng(seed)
    fr = kahler.calibration_frame(data)
    labeled = []
    for k in range(count):
        point = kahler.tube_point(rng.standard_normal(fam.n), rng.standard_normal(fam.n))
        labeled.append(
            (f"point {k}", kahler.hamiltonian_check_tube(fam, data, point, fr, tol, step))
        )
    return _merge("hamiltonian_tube", labeled)


def pm_suite(
    m: int,
    c: float = 1.0,
    count: int = 10,
    seed: int = KAHLER_SEED,
    tol: float = DEFAULT_CHECK_TOL,
    step: float = FD_STEP,
    name: str = "hamiltonian_pm",
) -> VerificationReport:
    rng = np.random.default_rng(seed)
    labeled = []
    for k in range(count):
        z = random_projective_point(rng, m)
        labeled.append((f"point {k}", kahler.hamiltonian_check_pm(m, c, z, tol, step)))
    return _merge(name, labeled)


def identity_suite(
    fam: ExponentialFamily,
    data: TorificationData,
    samples: int = 100,
    seed: int = KAHLER_SEED,
) -> VerificationReport:
    """Exact pointwise identity at seeded random rational distributions."""
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(samples):
        p = random_rational_distribution(rng, fam.space.size, fam.space)
        rep = moment.verify_identity(fam, data, p)
        if not rep.passed:
            failures.append((f"sample {k}", rep))
    witnesses = [
        Witness(
            f"exact identity at {samples} seeded rational distributions",
            f"{samples}/{samples} exact",
            f"{samples - len(failures)}/{samples} exact",
            not failures,
        )
    ]
    for label, rep in failures:
        for w in rep.witnesses:
            witnesses.append(Witness(f"{label}: {w.description}", w.expected, w.actual, w.ok))
    return make_report("pointwise_identity", witnesses)


def veronese_suite(
    n: int,
    count: int = 10,
    seed: int = KAHLER_SEED,
    tol_equivariance: float = 1e-10,
    tol_kf: float = 1e-12,
    tol_factorization: float = 1e-9,
    tol_isometry: float = DEFAULT_CHECK_TOL,
    step: float = FD_STEP,
) -> list[VerificationReport]:
    """Equivariance, K-after-f law, momentum factorization and isometry checks."""
    rng = np.random.default_rng(seed)
    equi = []
    for k in range(count):
        z = random_projective_point(rng, 1)
        t = float(rng.uniform(-1.0, 1.0))
        equi.append((f"pair {k}", kahler.verify_equivariance(n, t, z, tol_equivariance)))
    kf_witnesses = []
    for k in range(count):
        z = random_projective_point(rng, 1)
        err = kahler.kf_binomial_error(n, z)
        kf_witnesses.append(
            Witness(f"point {k}: max |K(f(z)) - binomial law|", f"<= {tol_kf!r}", repr(err), err <= tol_kf)
        )
    fact = []
    iso = []
    for k in range(count):
        z = random_projective_point(rng, 1)
        rep = kahler.verify_momentum_factorization_binomial(n, z, tol=tol_factorization)
        fact.append((f"point {k}", rep))
        iso.append((f"point {k}", kahler.pullback_isometry_check(n, z, tol_isometry, step)))
    return [
        _merge("veronese_equivariance", equi),
        make_report("veronese_k_map_law", kf_witnesses),
        _merge("momentum_factorization", fact),
        _merge("veronese_pullback_isometry", iso),
    ]


def segment_report(
    mp: Polytope, n: int, c_offset: Optional[Sequence[Fraction]] = None
) -> VerificationReport:
    """Moment polytope of the size-n binomial pipeline equals [-n, 0] + c (4pi units)."""
    c = Fraction(0) if not c_offset else Fraction(c_offset[0])
    expected = polytope.hull([(c - n,), (c,)], units=Units.FOUR_PI)

    def fmt(p: Polytope) -> str:
        return "[" + ", ".join(rational.format_fraction(v[0]) for v in p.vertices) + "]"

    ok = polytope.equals(mp, expected)
    witness = Witness(
        "moment polytope equals the segment [-n, 0] + c (4pi units)",
        fmt(expected),
        fmt(mp),
        ok,
    )
    return make_report("moment_polytope_segment", [witness])


def canonical_t_report(data: TorificationData, n: int) -> VerificationReport:
    expected = tuple(range(n, 0, -1))
    actual = data.t_matrix[0] if data.t_matrix else ()
    ok = len(data.t_matrix) == 1 and actual == expected
    witness = Witness("canonical T equals [n, n-1, ..., 1]", str(list(expected)), str(list(actual)), ok)
    return make_report("canonical_t_matrix", [witness])


def mu_c_endpoint_report(n: int, tol: float = 1e-12) -> VerificationReport:
    c = 1.0 / n
    lo = kahler.mu_c_p1(c, projective_point([1.0, 0.0]))
    hi = kahler.mu_c_p1(c, projective_point([0.0, 1.0]))
    w1 = Witness("mu_c([1,0]) = -4pi/c", repr(-4.0 * math.pi / c), repr(lo), abs(lo + 4.0 * math.pi / c) <= tol)
    w2 = Witness("mu_c([0,1]) = 0", "0.0", repr(hi), abs(hi) <= tol)
    return make_report("line_momentum_endpoints", [w1, w2])


def binomial_pipeline(
    n: int,
    c_offset: Optional[Sequence[Fraction]] = None,
    seed: int = KAHLER_SEED,
    samples: int = 100,
    count: int = 10,
    tol_check: float = DEFAULT_CHECK_TOL,
    step: float = FD_STEP,
) -> tuple[Polytope, list[VerificationReport]]:
    """End-to-end binomial run: exact theorem layer plus the numeric suites."""
    fam = binomial_family(n)
    data = moment.canonical_torification(fam, c_offset)
    mp = moment.moment_polytope(data, fam.space.m)
    reports = [
        canonical_t_report(data, n),
        segment_report(mp, n, c_offset),
        moment.verify_theorem(fam, data),
        moment.verify_corollary(data, fam.space.m),
        identity_suite(fam, data, samples=samples, seed=seed),
        closedness_suite(fam, count=count, seed=seed, tol=tol_check, step=step),
        tube_suite(fam, data, count=count, seed=seed, tol=tol_check, step=step),
        pm_suite(1, 1.0 / n, count=count, seed=seed, tol=tol_check, step=step,
                 name="hamiltonian_pm_line"),
        pm_suite(fam.space.m, 1.0, count=count, seed=seed, tol=tol_check, step=step,
                 name="hamiltonian_pm_target"),
        mu_c_endpoint_report(n),
    ]
    reports.extend(veronese_suite(n, count=count, seed=seed, tol_isometry=tol_check, step=step))
    return mp, reports


def mu_prime_samples_csv(m: int, count: int = 50, seed: int = KAHLER_SEED) -> str:
    """CSV of seeded (z, mu'(z)) samples for external plotting."""
    rng = np.random.default_rng(seed)
    header = (
        [f"re_z{k}" for k in range(m + 1)]
        + [f"im_z{k}" for k in range(m + 1)]
        + [f"mu_{k + 1}" for k in range(m)]
    )
    lines = [",".join(header)]
    for _ in range(count):
        z = random_projective_point(rng, m)
        mu = kahler.mu_prime(z)
        row = (
            [f"{v:.12g}" for v in z.z.real]
            + [f"{v:.12g}" for v in z.z.imag]
            + [f"{v:.12g}" for v in mu]
        )
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"

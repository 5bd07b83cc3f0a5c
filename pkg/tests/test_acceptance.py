"""Acceptance gate: every criterion at its stated tolerance, one line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
PASS/FAIL lines.  All randomness is seeded; the whole module is desk scale.
"""

from fractions import Fraction

import numpy as np

from momentpoly import kahler, polytope as poly
from momentpoly.expfam import binomial_family, fisher, mean_params
from momentpoly.kahler import FOUR_PI, calibration_frame, mu_c_p1, projective_point, tube_point
from momentpoly.moment import (
    TorificationData,
    canonical_torification,
    moment_polytope,
    verify_corollary,
    verify_identity,
    verify_theorem,
)
from momentpoly.polytope import AffineMap, Units
from momentpoly.suites import random_projective_point

from _helpers import (
    corpus_families,
    fd_gradient,
    fd_hessian,
    oracle_vertices,
    psi_fn,
    random_point_sets,
    random_rational_p,
)


def criterion(num: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    print(f"ACCEPTANCE {num}: {status} - {description}{suffix}")
    assert ok, f"criterion {num} failed: {description}{suffix}"


def test_criterion_1_binomial_pipeline():
    ok = True
    for n in range(1, 9):
        fam = binomial_family(n)
        data = canonical_torification(fam)
        ok &= data.t_matrix == (tuple(range(n, 0, -1)),)
        mp = moment_polytope(data, n)
        segment = poly.hull([(Fraction(-n),), (Fraction(0),)], units=Units.FOUR_PI)
        ok &= poly.equals(mp, segment)
        ok &= verify_theorem(fam, data).passed
    criterion(1, "binomial pipeline n=1..8: canonical T, segment [-n,0] (4pi), exact theorem", ok)


def test_criterion_2_corollary_corpus():
    fams = corpus_families(20) + [binomial_family(n) for n in range(1, 9)]
    ok = True
    for fam in fams:
        data = canonical_torification(fam)
        ok &= verify_corollary(data, fam.space.m).passed
    criterion(2, "vertex differences integral (4pi units) on 20-family corpus + binomials", ok,
              f"{len(fams)} families")


def test_criterion_3_identity_corpus():
    rng = np.random.default_rng(0x1DE17)
    fams = corpus_families(20)
    checked = 0
    ok = True
    for fam in fams:
        data = canonical_torification(fam)
        for _ in range(100):
            p = random_rational_p(rng, fam.space)
            ok &= verify_identity(fam, data, p).passed
            checked += 1
    criterion(3, "pointwise identity exact (zero tolerance) at 100 rational p per family", ok,
              f"{checked} checks")


def test_criterion_4_theorem_corpus_and_mutations():
    fams = corpus_families(20)
    ok = all(verify_theorem(fam, canonical_torification(fam)).passed for fam in fams)
    rng = np.random.default_rng(0x3A7)
    detected = 0
    for fam in fams:
        data = canonical_torification(fam)
        i = int(rng.integers(0, len(data.t_matrix)))
        j = int(rng.integers(0, fam.space.m))
        # One altered entry, pushed beyond the polytope's spread in coordinate i
        # so the altered vertex provably leaves the hull.
        delta = 1 + sum(abs(e) for e in data.t_matrix[i])
        mutated_rows = [list(row) for row in data.t_matrix]
        mutated_rows[i][j] += delta
        mutated = TorificationData(
            t_matrix=tuple(tuple(r) for r in mutated_rows),
            c_offset=data.c_offset,
            a_map=data.a_map,
        )
        rep = verify_theorem(fam, mutated)
        if not rep.passed and "vertex" in rep.witnesses[0].description:
            detected += 1
    ok &= detected == len(fams)
    criterion(4, "theorem exact on corpus; 20/20 single-entry T mutations caught with vertex witness",
              ok, f"{detected}/{len(fams)} mutations detected")


def test_criterion_5_statistical_geometry_oracles():
    rng = np.random.default_rng(0xFD0)
    fams = corpus_families(10)
    worst_grad = 0.0
    worst_hess = 0.0
    for k in range(50):
        fam = fams[k % len(fams)]
        theta = rng.standard_normal(fam.n)
        psi = psi_fn(fam)
        g = fd_gradient(psi, theta)
        h = fd_hessian(psi, theta)
        grad_err = float(np.max(np.abs(mean_params(fam, theta) - g))) / max(1.0, float(np.max(np.abs(g))))
        hess_err = float(np.max(np.abs(fisher(fam, theta) - h))) / max(1.0, float(np.max(np.abs(h))))
        worst_grad = max(worst_grad, grad_err)
        worst_hess = max(worst_hess, hess_err)
    ok = worst_grad <= 1e-6 and worst_hess <= 1e-5
    criterion(5, "mean params vs FD gradient <= 1e-6; Fisher vs FD Hessian <= 1e-5 (50 pairs)",
              ok, f"worst {worst_grad:.2e} / {worst_hess:.2e}")


def test_criterion_6_kahler_suite():
    rng = np.random.default_rng(kahler.KAHLER_SEED)
    fams = corpus_families(10)
    ok = True
    for k in range(20):
        fam = fams[k % len(fams)]
        ok &= kahler.closedness_check(fam, rng.standard_normal(fam.n), 1e-5).passed
    for k in range(10):
        fam = fams[k % len(fams)]
        data = canonical_torification(fam)
        fr = calibration_frame(data)
        pt = tube_point(rng.standard_normal(fam.n), rng.standard_normal(fam.n))
        ok &= kahler.hamiltonian_check_tube(fam, data, pt, fr, 1e-5).passed
    for k in range(10):
        m = 1 if k < 5 else 2
        z = random_projective_point(rng, m)
        ok &= kahler.hamiltonian_check_pm(m, 1.0, z, 1e-5).passed
    lo = mu_c_p1(1.0, projective_point([1.0, 0.0]))
    hi = mu_c_p1(1.0, projective_point([0.0, 1.0]))
    ok &= abs(lo + FOUR_PI) <= 1e-12 and abs(hi) <= 1e-12
    criterion(6, "closedness (20 pts), tube + P^m Hamiltonian (10 pts each) <= 1e-5; "
                 "mu_c endpoints to 1e-12", ok)


def test_criterion_7_veronese_suite():
    rng = np.random.default_rng(0xE36)
    ok = True
    for _ in range(25):
        n = int(rng.integers(1, 6))
        t = float(rng.uniform(-1, 1))
        z = random_projective_point(rng, 1)
        ok &= kahler.verify_equivariance(n, t, z, 1e-10).passed
    for _ in range(50):
        n = int(rng.integers(1, 6))
        z = random_projective_point(rng, 1)
        ok &= kahler.kf_binomial_error(n, z) <= 1e-12
    for n in range(1, 7):
        for _ in range(5):
            z = random_projective_point(rng, 1)
            ok &= kahler.verify_momentum_factorization_binomial(n, z, tol=1e-9).passed
    for n in range(1, 5):
        for _ in range(5):
            z = random_projective_point(rng, 1)
            ok &= kahler.pullback_isometry_check(n, z, 1e-5).passed
    criterion(7, "equivariance <= 1e-10, K after f = binomial law <= 1e-12, "
                 "factorization <= 1e-9 (n<=6), pullback isometry <= 1e-5 (n<=4)", ok)


def test_criterion_8_hull_kernel_property_suite():
    instances = random_point_sets(200, seed=0x8011, max_points=25, max_dim=3)
    ok = True
    for pts in instances:
        hull = poly.hull(pts)
        ok &= set(hull.vertices) == oracle_vertices(pts)
        ok &= poly.equals(hull, poly.hull(hull.vertices))
    rng = np.random.default_rng(0xC0B0)
    for pts in instances[:25]:
        dim = len(pts[0])
        p = poly.hull(pts)
        a = AffineMap(
            linear=tuple(tuple(Fraction(int(v)) for v in row) for row in rng.integers(-3, 4, (dim, dim))),
            offset=tuple(Fraction(int(v)) for v in rng.integers(-2, 3, dim)),
        )
        b = AffineMap(
            linear=tuple(tuple(Fraction(int(v)) for v in row) for row in rng.integers(-3, 4, (dim, dim))),
            offset=tuple(Fraction(int(v)) for v in rng.integers(-2, 3, dim)),
        )
        ok &= poly.equals(
            poly.affine_image(poly.affine_image(p, a), b),
            poly.affine_image(p, b.compose(a)),
        )
    criterion(8, "hull = brute-force LP oracle on 200 instances; idempotence and "
                 "affine composition exact", ok)

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from momentpoly import polytope as poly
from momentpoly.errors import FormatError, InvalidN, LengthMismatch, RankDeficient
from momentpoly.expfam import (
    LogRational,
    ProbabilityDistribution,
    SampleSpace,
    binomial_family,
    expectation,
    family_from_dict,
    family_to_dict,
    fisher,
    is_full,
    log_partition,
    mean_params,
    new_family,
    pdf,
    pdf_exact,
    point_mass,
)
from momentpoly.moment import marginal_polytope
from momentpoly.rational import rank

from _helpers import corpus_families, fd_gradient, fd_hessian, psi_fn


def bernoulli():
    space = SampleSpace(labels=("x0", "x1"))
    return new_family(space, [Fraction(0), Fraction(0)], [(Fraction(0),), (Fraction(1),)])


# --- construction ----------------------------------------------------------------


def test_bernoulli_is_valid_rank_two():
    fam = bernoulli()
    assert fam.n == 1
    assert rank([(Fraction(1), Fraction(0)), (Fraction(1), Fraction(1))]) == 2


def test_constant_statistic_is_rank_deficient():
    space = SampleSpace(labels=("a", "b", "c"))
    with pytest.raises(RankDeficient):
        new_family(space, [Fraction(0)] * 3, [(Fraction(1),), (Fraction(1),), (Fraction(1),)])


def test_binomial_table_is_valid():
    fam = binomial_family(2)
    assert fam.n == 1
    assert fam.f_table == ((Fraction(0),), (Fraction(1),), (Fraction(2),))
    assert [c.value for c in fam.c_table] == [1, 2, 1]


def test_table_length_mismatch():
    space = SampleSpace(labels=("a", "b"))
    with pytest.raises(LengthMismatch):
        new_family(space, [Fraction(0)], [(Fraction(0),), (Fraction(1),)])
    with pytest.raises(LengthMismatch):
        new_family(space, [Fraction(0)] * 2, [(Fraction(0),)])


# --- log partition -----------------------------------------------------------------


def test_log_partition_bernoulli_at_zero():
    assert log_partition(bernoulli(), [0.0]) == pytest.approx(math.log(2), abs=1e-14)


def test_log_partition_binomial_direct_summation_oracle():
    # Independent oracle: direct summation of the 8 weights at theta = 0.
    oracle = math.log(sum(math.comb(3, k) * math.exp(0.0 * k) for k in range(4)))
    assert oracle == pytest.approx(3 * math.log(2), abs=1e-14)
    assert log_partition(binomial_family(3), [0.0]) == pytest.approx(oracle, abs=1e-12)


def test_log_partition_bernoulli_large_theta():
    # Direct summation: log(1 + e^10) = 10.000045398899218
    oracle = math.log(1.0 + math.exp(10.0))
    assert oracle == pytest.approx(10.0000454, abs=1e-7)
    assert log_partition(bernoulli(), [10.0]) == pytest.approx(oracle, abs=1e-12)


def test_log_partition_overflow_guard():
    # Without the max shift this would overflow; with it the value is exact.
    val = log_partition(bernoulli(), [800.0])
    assert val == pytest.approx(800.0, abs=1e-9)


def test_binomial_log_partition_closed_form_sweep():
    for n in (1, 2, 5):
        fam = binomial_family(n)
        for theta in np.linspace(-10, 10, 21):
            expected = n * math.log(1 + math.exp(theta))
            assert abs(log_partition(fam, [theta]) - expected) < 1e-10


# --- pdf ---------------------------------------------------------------------------


def test_pdf_bernoulli_symmetry():
    w = pdf(bernoulli(), [0.0]).weights
    assert w == pytest.approx((0.5, 0.5), abs=1e-15)


def test_pdf_binomial_quarters():
    # [DERIVED]: binom(2,k) / 4
    w = pdf(binomial_family(2), [0.0]).weights
    assert w == pytest.approx((0.25, 0.5, 0.25), abs=1e-14)


def test_pdf_bernoulli_log3():
    # [DERIVED]: e^{log 3} / (1 + e^{log 3}) = 3/4
    w = pdf(bernoulli(), [math.log(3)]).weights
    assert w == pytest.approx((0.25, 0.75), abs=1e-14)


def test_pdf_exact_bernoulli_log3_is_rational():
    p = pdf_exact(bernoulli(), [Fraction(3)])
    assert p.exact and p.weights == (Fraction(1, 4), Fraction(3, 4))


def test_pdf_exact_binomial():
    p = pdf_exact(binomial_family(2), [Fraction(1)])
    assert p.weights == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
    p = pdf_exact(binomial_family(2), [Fraction(3)])
    # weights prop to (1, 2*3, 9)
    assert p.weights == (Fraction(1, 16), Fraction(6, 16), Fraction(9, 16))


def test_pdf_sums_to_one_for_corpus():
    for fam in corpus_families(6):
        for theta in np.random.default_rng(1).standard_normal((4, fam.n)):
            assert abs(sum(pdf(fam, theta).weights) - 1.0) <= 1e-12


def test_pdf_weights_strictly_positive():
    fam = binomial_family(5)
    assert all(w > 0 for w in pdf(fam, [25.0]).weights)


# --- expectation ---------------------------------------------------------------------


def test_expectation_examples():
    space = SampleSpace(labels=("x0", "x1"))
    uniform = ProbabilityDistribution(space, (0.5, 0.5), exact=False)
    assert expectation(uniform, [0.0, 1.0]) == pytest.approx(0.5)
    delta = point_mass(space, 0)
    assert expectation(delta, [7.0, 9.0]) == pytest.approx(7.0)
    space3 = SampleSpace(labels=("a", "b", "c"))
    p = ProbabilityDistribution(space3, (0.25, 0.5, 0.25), exact=False)
    assert expectation(p, [0.0, 1.0, 2.0]) == pytest.approx(1.0)
    with pytest.raises(LengthMismatch):
        expectation(delta, [1.0])


# --- mean parameters and Fisher -------------------------------------------------------


def test_mean_params_examples():
    assert mean_params(bernoulli(), [0.0]) == pytest.approx([0.5], abs=1e-14)
    # [DERIVED]: binomial(4, 1/2) has mean nq = 2
    assert mean_params(binomial_family(4), [0.0]) == pytest.approx([2.0], abs=1e-12)
    # [DERIVED]: q = 3/4 at theta = log 3, mean nq = 3/2
    assert mean_params(binomial_family(2), [math.log(3)]) == pytest.approx([1.5], abs=1e-12)


def test_fisher_examples():
    assert fisher(bernoulli(), [0.0])[0, 0] == pytest.approx(0.25, abs=1e-14)
    # [DERIVED]: nq(1-q) = 4 * 1/4 = 1
    assert fisher(binomial_family(4), [0.0])[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_fisher_matches_fd_hessian_random_two_parameter_family():
    space = SampleSpace(labels=("a", "b", "c", "d"))
    fam = new_family(
        space,
        [Fraction(0), Fraction(1, 2), Fraction(-1, 3), Fraction(0)],
        [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
         (Fraction(0), Fraction(1)), (Fraction(2), Fraction(1))],
    )
    rng = np.random.default_rng(42)
    theta = rng.standard_normal(2)
    h = fisher(fam, theta)
    h_fd = fd_hessian(psi_fn(fam), theta)
    assert np.max(np.abs(h - h_fd)) / max(1.0, np.max(np.abs(h_fd))) <= 1e-6


def test_gradient_and_hessian_oracles_on_corpus():
    rng = np.random.default_rng(3)
    for fam in corpus_families(8):
        theta = rng.standard_normal(fam.n)
        eta = mean_params(fam, theta)
        g_fd = fd_gradient(psi_fn(fam), theta)
        assert np.max(np.abs(eta - g_fd)) / max(1.0, np.max(np.abs(g_fd))) <= 1e-6
        h = fisher(fam, theta)
        h_fd = fd_hessian(psi_fn(fam), theta)
        assert np.max(np.abs(h - h_fd)) / max(1.0, np.max(np.abs(h_fd))) <= 1e-5


def test_fisher_symmetric_positive_definite():
    rng = np.random.default_rng(9)
    for fam in corpus_families(6):
        theta = rng.standard_normal(fam.n)
        h = fisher(fam, theta)
        assert np.allclose(h, h.T)
        assert np.all(np.linalg.eigvalsh(h) > 0)


# --- fullness --------------------------------------------------------------------------


def test_is_full_binomial_two():
    full, r = is_full(binomial_family(2))
    assert (full, r) == (True, 2)


def test_is_full_binomial_two_symbolic_cross_check():
    # Exact oracle: rank of differences of rational curve points on the
    # binomial curve ((1-q)^2, 2q(1-q), q^2).
    def curve(q: Fraction):
        return ((1 - q) ** 2, 2 * q * (1 - q), q * q)

    base = curve(Fraction(1, 5))
    rows = [
        tuple(a - b for a, b in zip(curve(q), base))
        for q in (Fraction(2, 5), Fraction(3, 5), Fraction(4, 5))
    ]
    assert rank(rows) == 2


def test_is_full_bernoulli():
    assert is_full(bernoulli()) == (True, 1)


def test_not_full_degenerate_curve():
    # F = (0, 1, 0) on three points: densities always have p(x0) = p(x2),
    # so the curve spans only one direction of the two-dimensional hyperplane.
    space = SampleSpace(labels=("a", "b", "c"))
    fam = new_family(space, [Fraction(0)] * 3, [(Fraction(0),), (Fraction(1),), (Fraction(0),)])
    full, r = is_full(fam)
    assert (full, r) == (False, 1)


def test_is_full_rejects_too_few_samples():
    with pytest.raises(LengthMismatch):
        is_full(binomial_family(2), num_samples=2)


# --- binomial builtin --------------------------------------------------------------------


def test_binomial_one_is_bernoulli_shape():
    fam = binomial_family(1)
    assert fam.f_table == ((Fraction(0),), (Fraction(1),))
    assert all(isinstance(c, LogRational) and c.value == 1 for c in fam.c_table)


def test_binomial_five_pdf_direct_summation():
    # [DERIVED]: binom(5,k) / 32
    w = pdf(binomial_family(5), [0.0]).weights
    expected = [math.comb(5, k) / 32 for k in range(6)]
    assert w == pytest.approx(expected, abs=1e-14)


def test_binomial_invalid_n():
    with pytest.raises(InvalidN):
        binomial_family(0)


# --- mean stays interior (via the exact polytope layer) -----------------------------------


def test_mean_params_interior_of_marginal_polytope():
    from momentpoly.moment import mean_in_interior

    rng = np.random.default_rng(17)
    for fam in corpus_families(5):
        mp = marginal_polytope(fam)
        for _ in range(3):
            theta = rng.standard_normal(fam.n)
            assert mean_in_interior(fam, theta)
            eta = tuple(Fraction(float(v)) for v in mean_params(fam, theta))
            assert poly.contains(mp, eta)


# --- family file format --------------------------------------------------------------------


BERNOULLI_JSON = {"labels": ["x0", "x1"], "C": ["0", "0"], "F": [["0"], ["1"]]}


def test_family_from_dict_bernoulli():
    fam = family_from_dict(BERNOULLI_JSON)
    assert fam.n == 1 and fam.space.labels == ("x0", "x1")
    assert log_partition(fam, [0.0]) == pytest.approx(math.log(2))


def test_family_from_dict_log_of():
    d = {"labels": [0, 1, 2], "C_log_of": ["1", "2", "1"], "F": [["0"], ["1"]], }
    d["F"] = [["0"], ["1"], ["2"]]
    fam = family_from_dict(d)
    assert isinstance(fam.c_table[1], LogRational)
    assert fam.c_table[1].value == 2


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda d: d.update(C=["nan", "0"]), "C[0]"),
        (lambda d: d.update(C=["inf", "0"]), "C[0]"),
        (lambda d: d.update(F=[["zz"], ["1"]]), "F[0][0]"),
        (lambda d: d.pop("C"), "C"),
        (lambda d: d.update(C_log_of=["1", "1"]), "C"),
        (lambda d: d.update(labels=["x0", "x0"]), "labels"),
    ],
)
def test_family_from_dict_rejects_bad_input(mutate, field):
    d = json.loads(json.dumps(BERNOULLI_JSON))
    mutate(d)
    with pytest.raises(FormatError) as err:
        family_from_dict(d)
    assert field.split("[")[0].lower() in str(err.value).lower()


def test_family_dict_roundtrip():
    fam = binomial_family(3)
    again = family_from_dict(family_to_dict(fam))
    assert again.f_table == fam.f_table
    assert [c.value for c in again.c_table] == [c.value for c in fam.c_table]
    plain = bernoulli()
    d = family_to_dict(plain)
    assert d["C"] == ["0", "0"]

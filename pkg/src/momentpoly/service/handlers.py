"""Request -> response functions behind the HTTP routes.

The CLI calls these directly (in-process thin client); the FastAPI app wraps
them one-to-one, so both front ends share validation, seeds and output.
"""

from __future__ import annotations

import math

from .. import moment, polytope, rational, suites
from ..errors import FormatError, NonIntegralF
from ..expfam import (
    ExponentialFamily,
    binomial_family,
    family_from_dict,
    fisher,
    log_partition,
    mean_params,
)
from ..polytope import Polytope
from ..report import VerificationReport
from .models import (
    BinomialExampleRequest,
    FamilySelector,
    HullRequest,
    HullResponse,
    PolytopeModel,
    ReportModel,
    ShowRequest,
    ShowResponse,
    VerifyRequest,
    VerifyResponse,
    WitnessModel,
)


def resolve_family(selector: FamilySelector) -> ExponentialFamily:
    if (selector.family is None) == (selector.binomial_n is None):
        raise FormatError("input: provide exactly one of 'family' or 'binomial_n'")
    if selector.binomial_n is not None:
        return binomial_family(selector.binomial_n)
    return family_from_dict(selector.family.model_dump(exclude_none=True))


def polytope_model(p: Polytope, scale: float = 1.0) -> PolytopeModel:
    d = polytope.to_json_dict(p)
    decimal = [[float(e) * scale for e in v] for v in p.vertices]
    return PolytopeModel(units=d["units"], vertices=d["vertices"], decimal=decimal)


def report_model(rep: VerificationReport) -> ReportModel:
    return ReportModel(
        name=rep.name,
        passed=rep.passed,
        witnesses=[WitnessModel(**w.to_dict()) for w in rep.witnesses],
        notes=list(rep.notes),
    )


def _verify_response(reports: list[VerificationReport], mp: Polytope | None = None,
                     display: str | None = None) -> VerifyResponse:
    return VerifyResponse(
        passed=all(r.passed for r in reports),
        reports=[report_model(r) for r in reports],
        polytope=polytope_model(mp, scale=4.0 * math.pi) if mp is not None else None,
        display=display,
    )


def display_polytope(p: Polytope) -> str:
    """Momentum polytopes print as exact rationals in 4pi units plus decimals."""
    if p.ambient_dim == 1:
        vals = sorted(v[0] for v in p.vertices)
        exact = "[" + ", ".join(rational.format_fraction(v) for v in vals) + "]"
        approx = "[" + ", ".join(f"{float(v) * 4 * math.pi:.12g}" for v in vals) + "]"
    else:
        exact = "[" + ", ".join(
            "(" + ", ".join(rational.format_fraction(e) for e in v) + ")" for v in p.vertices
        ) + "]"
        approx = "[" + ", ".join(
            "(" + ", ".join(f"{float(e) * 4 * math.pi:.12g}" for e in v) + ")" for v in p.vertices
        ) + "]"
    return f"{exact} (×4π) ≈ {approx}"


def show(req: ShowRequest) -> ShowResponse:
    fam = resolve_family(req)
    theta = req.theta if req.theta else [0.0] * fam.n
    return ShowResponse(
        psi=log_partition(fam, theta),
        eta=[float(v) for v in mean_params(fam, theta)],
        fisher=[[float(v) for v in row] for row in fisher(fam, theta)],
    )


def marginal_hull(req: HullRequest) -> HullResponse:
    fam = resolve_family(req)
    return HullResponse(polytope=polytope_model(moment.marginal_polytope(fam)))


def _c_offset(req: VerifyRequest | BinomialExampleRequest, n: int):
    if not req.c_offset:
        return None
    if len(req.c_offset) != n:
        raise FormatError(f"c_offset: expected {n} entries, got {len(req.c_offset)}")
    return rational.vector(req.c_offset, "c_offset")


def verify_theorem(req: VerifyRequest) -> VerifyResponse:
    fam = resolve_family(req)
    data = moment.canonical_torification(fam, _c_offset(req, fam.n))
    mp = moment.moment_polytope(data, fam.space.m)
    reports = [moment.torification_consistent(fam, data), moment.verify_theorem(fam, data)]
    return _verify_response(reports, mp, display_polytope(mp))


def verify_corollary(req: VerifyRequest) -> VerifyResponse:
    fam = resolve_family(req)
    c = _c_offset(req, fam.n)
    try:
        data = moment.canonical_torification(fam, c)
        mp = moment.moment_polytope(data, fam.space.m)
        reports = [moment.verify_corollary(data, fam.space.m)]
    except NonIntegralF:
        # No integer T exists; fall back to the A(marginal) route, which is the
        # same polytope whenever the theorem applies.
        mp = moment.moment_polytope_from_family(fam, c)
        rep = moment.corollary_report(mp)
        reports = [VerificationReport(
            name=rep.name,
            passed=rep.passed,
            witnesses=rep.witnesses,
            notes=rep.notes + ("canonical T is non-integral; used the A(marginal polytope) route",),
        )]
    return _verify_response(reports, mp, display_polytope(mp))


def verify_identity(req: VerifyRequest) -> VerifyResponse:
    fam = resolve_family(req)
    data = moment.canonical_torification(fam, _c_offset(req, fam.n))
    rep = suites.identity_suite(fam, data, samples=req.samples, seed=req.seed)
    return _verify_response([rep])


def verify_kahler(req: VerifyRequest) -> VerifyResponse:
    fam = resolve_family(req)
    data = moment.canonical_torification(fam, _c_offset(req, fam.n))
    reports = [
        suites.closedness_suite(fam, count=req.count, seed=req.seed, tol=req.tol_check,
                                step=req.fd_step),
        suites.tube_suite(fam, data, count=req.count, seed=req.seed, tol=req.tol_check,
                          step=req.fd_step),
        suites.pm_suite(fam.space.m, 1.0, count=req.count, seed=req.seed, tol=req.tol_check,
                        step=req.fd_step),
    ]
    if req.binomial_n is not None:
        n = req.binomial_n
        reports.append(suites.pm_suite(1, 1.0 / n, count=req.count, seed=req.seed,
                                       tol=req.tol_check, step=req.fd_step))
        reports.append(suites.mu_c_endpoint_report(n))
        reports.extend(suites.veronese_suite(n, count=req.count, seed=req.seed,
                                             tol_isometry=req.tol_check, step=req.fd_step))
    return _verify_response(reports)


def example_binomial(req: BinomialExampleRequest) -> VerifyResponse:
    mp, reports = suites.binomial_pipeline(
        req.n,
        c_offset=_c_offset(req, 1),
        seed=req.seed,
        samples=req.samples,
        count=req.count,
        tol_check=req.tol_check,
        step=req.fd_step,
    )
    return _verify_response(reports, mp, display_polytope(mp))


__all__ = [
    "example_binomial",
    "marginal_hull",
    "resolve_family",
    "show",
    "verify_corollary",
    "verify_identity",
    "verify_kahler",
    "verify_theorem",
]

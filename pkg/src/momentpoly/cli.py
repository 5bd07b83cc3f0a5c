"""Command-line front end: a thin client of the verification service.

Every subcommand builds the same request model the HTTP API accepts and
renders the response model; by default the service handlers run in-process
(no server needed, fully deterministic), while --url sends the identical
request to a running instance instead.

Exit codes: 0 all checks passed, 1 a verification failed (witnesses printed),
2 parse/validation errors (diagnostic names the offending field).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Optional

from .errors import MomentPolyError
from .service import handlers
from .service.models import (
    BinomialExampleRequest,
    FamilyPayload,
    HullRequest,
    HullResponse,
    ShowRequest,
    ShowResponse,
    VerifyRequest,
    VerifyResponse,
)

_ROUTES: dict[str, tuple[Callable, type]] = {
    "/family/show": (handlers.show, ShowResponse),
    "/family/hull": (handlers.marginal_hull, HullResponse),
    "/verify/theorem": (handlers.verify_theorem, VerifyResponse),
    "/verify/corollary": (handlers.verify_corollary, VerifyResponse),
    "/verify/identity": (handlers.verify_identity, VerifyResponse),
    "/verify/kahler": (handlers.verify_kahler, VerifyResponse),
    "/example/binomial": (handlers.example_binomial, VerifyResponse),
}


def _call(path: str, req, url: Optional[str]):
    handler, resp_model = _ROUTES[path]
    if url is None:
        return handler(req)
    import httpx

    resp = httpx.post(url.rstrip("/") + path, json=req.model_dump(mode="json"), timeout=120.0)
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        raise MomentPolyError(str(detail))
    resp.raise_for_status()
    return resp_model.model_validate(resp.json())


def _load_family_payload(path: str) -> FamilyPayload:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MomentPolyError(f"family: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MomentPolyError(f"family: {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MomentPolyError("family: expected a JSON object")
    return FamilyPayload(
        labels=data.get("labels", []),
        F=data.get("F", []),
        C=data.get("C"),
        C_log_of=data.get("C_log_of"),
    )


def _selector_kwargs(args) -> dict:
    family_path = getattr(args, "family", None)
    n = getattr(args, "n", None)
    if (family_path is None) == (n is None):
        raise MomentPolyError("input: provide exactly one of --family FILE or --n N")
    if family_path is not None:
        return {"family": _load_family_payload(family_path)}
    return {"binomial_n": n}


def _split_floats(text: str, field: str) -> list[float]:
    if not text:
        return []
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise MomentPolyError(f"{field}: expected comma-separated numbers, got {text!r}") from exc


def _split_rationals(text: Optional[str]) -> list[str]:
    if not text:
        return []
    return [tok.strip() for tok in text.split(",")]


def _json_out(model) -> str:
    return json.dumps(model.model_dump(), sort_keys=True, indent=2) + "\n"


def _render_verify(resp: VerifyResponse, fmt: str, out) -> int:
    if fmt == "json":
        out.write(_json_out(resp))
    else:
        if resp.display is not None:
            out.write(f"moment polytope: {resp.display}\n")
        for rep in resp.reports:
            mark = "PASS" if rep.passed else "FAIL"
            out.write(f"{mark}  {rep.name}\n")
            if not rep.passed:
                for w in rep.witnesses:
                    if not w.ok:
                        out.write(f"      {w.description}: expected {w.expected}, got {w.actual}\n")
            for note in rep.notes:
                if "warning" in note:
                    out.write(f"      note: {note}\n")
    return 0 if resp.passed else 1


def _verify_request(args) -> VerifyRequest:
    return VerifyRequest(
        **_selector_kwargs(args),
        c_offset=_split_rationals(getattr(args, "c_offset", None)),
        samples=getattr(args, "samples", 100),
        seed=args.seed,
        count=getattr(args, "count", 10),
        tol_check=args.tol_check,
        fd_step=args.tol_fd,
    )


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="path to a family JSON file")
    p.add_argument("--n", type=int, help="builtin binomial family size")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--seed", type=int, default=0xA11CE)
    p.add_argument("--tol-fd", dest="tol_fd", type=float, default=1e-4,
                   help="finite-difference step")
    p.add_argument("--tol-check", dest="tol_check", type=float, default=1e-5,
                   help="numeric check tolerance")
    p.add_argument("--c-offset", dest="c_offset", help="rational offset vector, e.g. '1/3,0'")
    p.add_argument("--url", help="send the request to a running service instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momentpoly",
                                     description="moment-polytope verification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_family = sub.add_parser("family", help="family-level queries")
    fam_sub = p_family.add_subparsers(dest="subcommand", required=True)
    p_show = fam_sub.add_parser("show", help="psi, mean parameters and Fisher matrix at theta")
    _add_family_args(p_show)
    p_show.add_argument("--theta", default="", help="comma-separated natural parameter")
    _add_common(p_show)

    p_hull = sub.add_parser("hull", help="marginal polytope of the family")
    _add_family_args(p_hull)
    _add_common(p_hull)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    ver_sub = p_verify.add_subparsers(dest="subcommand", required=True)
    for name, help_text in [
        ("theorem", "exact moment-polytope identity"),
        ("corollary", "vertex differences integral in 4pi units"),
        ("identity", "pointwise identity at seeded rational distributions"),
        ("kahler", "closedness, Hamiltonian, equivariance, factorization, isometry"),
    ]:
        p = ver_sub.add_parser(name, help=help_text)
        _add_family_args(p)
        if name == "identity":
            p.add_argument("--samples", type=int, default=100)
        if name == "kahler":
            p.add_argument("--count", type=int, default=10, help="seeded points per check")
        _add_common(p)

    p_example = sub.add_parser("example", help="end-to-end pipelines")
    ex_sub = p_example.add_subparsers(dest="subcommand", required=True)
    p_binom = ex_sub.add_parser("binomial", help="full binomial pipeline")
    p_binom.add_argument("--n", type=int, required=True)
    p_binom.add_argument("--samples", type=int, default=100)
    p_binom.add_argument("--count", type=int, default=10)
    _add_common(p_binom)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: Optional[list[str]] = None, out=None) -> int:
    from pydantic import ValidationError

    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args, out)
    except (MomentPolyError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, out) -> int:
    url = getattr(args, "url", None)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("momentpoly.service.app:app", host=args.host, port=args.port)
        return 0

    if args.command == "family" and args.subcommand == "show":
        req = ShowRequest(**_selector_kwargs(args), theta=_split_floats(args.theta, "theta"))
        resp = _call("/family/show", req, url)
        if args.format == "json":
            out.write(_json_out(resp))
        elif args.format == "csv":
            raise MomentPolyError("format: csv is not available for 'family show'")
        else:
            out.write(f"psi = {resp.psi!r}\n")
            out.write("eta = [" + ", ".join(repr(v) for v in resp.eta) + "]\n")
            out.write("fisher =\n")
            for row in resp.fisher:
                out.write("  [" + ", ".join(repr(v) for v in row) + "]\n")
        return 0

    if args.command == "hull":
        req = HullRequest(**_selector_kwargs(args))
        resp = _call("/family/hull", req, url)
        if args.format == "json":
            out.write(_json_out(resp))
        elif args.format == "csv":
            lines = [",".join(f"x{j + 1}" for j in range(len(resp.polytope.vertices[0])))]
            for v in resp.polytope.decimal:
                lines.append(",".join(f"{e:.12g}" for e in v))
            out.write("\n".join(lines) + "\n")
        else:
            out.write(f"marginal polytope ({resp.polytope.units} units), "
                      f"{len(resp.polytope.vertices)} vertices:\n")
            for v in resp.polytope.vertices:
                out.write("  (" + ", ".join(v) + ")\n")
        return 0

    if args.command == "verify":
        if args.subcommand == "kahler" and args.format == "csv":
            from . import suites

            fam_kwargs = _selector_kwargs(args)
            if "binomial_n" in fam_kwargs:
                m = fam_kwargs["binomial_n"]
            else:
                req = HullRequest(**fam_kwargs)
                m = len(handlers.resolve_family(req).space.labels) - 1
            out.write(suites.mu_prime_samples_csv(m, count=50, seed=args.seed))
            return 0
        if args.format == "csv":
            raise MomentPolyError(f"format: csv is not available for 'verify {args.subcommand}'")
        req = _verify_request(args)
        resp = _call(f"/verify/{args.subcommand}", req, url)
        return _render_verify(resp, args.format, out)

    if args.command == "example":
        if args.format == "csv":
            raise MomentPolyError("format: csv is not available for 'example binomial'")
        req = BinomialExampleRequest(
            n=args.n,
            c_offset=_split_rationals(args.c_offset),
            samples=args.samples,
            seed=args.seed,
            count=args.count,
            tol_check=args.tol_check,
            fd_step=args.tol_fd,
        )
        resp = _call("/example/binomial", req, url)
        return _render_verify(resp, args.format, out)

    raise MomentPolyError(f"command: unknown command {args.command!r}")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

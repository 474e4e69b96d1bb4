"""Command-line front end.

Every subcommand reads one tensor (``--model SPEC``, ``--input FILE`` or a
positional FILE), runs one computation and writes a JSON report to stdout or
``-o``. Exit status: 0 on success, 1 when a hypothesis fails (no uniform
positivity, Ric_k of both signs, an identity check out of band), 2 on bad
input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import zoo
from .extremal import HypothesisViolatedError, verify_uniform_from_rick
from .functionals import sample_summary
from .grassmann import DEFAULT_RESTARTS, KINDS, certify
from .io import TensorFileError, dumps_report, dumps_tensor, load_tensor
from .spherical import moment_suite
from .tensor import CurvatureTensor
from .vanishing import NotUniformlyPositiveError, compute_constants, region_table

EXIT_OK, EXIT_HYPOTHESIS, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("rcpositivity")


class InputError(Exception):
    pass


def _tensor(model: str | None, path: str | None, what: str = "tensor") -> CurvatureTensor:
    if (model is None) == (path is None):
        raise InputError(f"give exactly one of a model spec or an input file for the {what}")
    if model is not None:
        try:
            return zoo.from_spec(model)
        except ValueError as exc:
            raise InputError(f"--model {model!r}: {exc}") from None
    try:
        return load_tensor(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _main_tensor(args) -> CurvatureTensor:
    path = args.input or args.file
    if args.input and args.file:
        raise InputError("input file given twice")
    return _tensor(args.model, path)


def _points(args) -> list[CurvatureTensor]:
    if not args.points:
        return []
    return [_tensor(None, p.strip()) for p in args.points.split(",") if p.strip()]


def _cmd_analyze(args) -> tuple[dict, int]:
    R = _main_tensor(args)
    k = args.k or 1
    report = {"n": R.n, "r": R.r, "ckl": R.ckl, "k": k, "samples": args.samples, "seed": args.seed}
    report.update(sample_summary(R, k, args.samples, args.seed))
    return report, EXIT_OK


def _cmd_certify(args) -> tuple[dict, int]:
    R = _main_tensor(args)
    cert = certify(
        R, args.kind, args.k or 1, args.l or 1, points=_points(args), restarts=args.restarts, seed=args.seed, tol=args.tol
    )
    return cert.to_dict(), EXIT_OK


def _cmd_vanishing(args) -> tuple[dict, int]:
    E = [_main_tensor(args)] + _points(args)
    F = None
    if args.aux_model or args.aux_input:
        if len(E) > 1:
            raise InputError("an auxiliary bundle needs one point per base point; use a single point with --aux-*")
        F = [_tensor(args.aux_model, args.aux_input, "auxiliary bundle")]
    k = args.k or 1
    try:
        consts = compute_constants(E, F, k=k, restarts=args.restarts, seed=args.seed, tol=args.tol)
    except NotUniformlyPositiveError as exc:
        return {"error": "not-uniformly-positive", "message": str(exc)}, EXIT_HYPOTHESIS
    report = consts.to_dict()
    report["region"] = region_table(consts)
    report["seed"] = args.seed
    report["restarts"] = args.restarts
    return report, EXIT_OK


def _cmd_extremal(args) -> tuple[dict, int]:
    R = _main_tensor(args)
    if not R.ckl:
        raise InputError("extremal needs a CKL tensor (\"ckl\": true)")
    try:
        rep = verify_uniform_from_rick(R, args.k or 1, restarts=args.restarts, seed=args.seed, tol=args.tol)
    except HypothesisViolatedError as exc:
        return {"error": "hypothesis-violated", "message": str(exc)}, EXIT_HYPOTHESIS
    report = rep.to_dict()
    report["seed"] = args.seed
    return report, EXIT_OK if rep.chain_margin >= -1e-8 else EXIT_HYPOTHESIS


def _cmd_verify(args) -> tuple[dict, int]:
    checks = moment_suite(max_k=args.k or 4, samples=args.samples, seed=args.seed)
    rows = [
        {
            "order": c.order,
            "k": c.k,
            "indices": list(c.indices),
            "exact": c.exact,
            "estimate": [c.estimate.real, c.estimate.imag],
            "stderr": c.stderr,
            "ok": c.ok,
        }
        for c in checks
    ]
    ok = all(c.ok for c in checks)
    report = {"samples": args.samples, "seed": args.seed, "all_ok": ok, "checks": rows}
    return report, EXIT_OK if ok else EXIT_HYPOTHESIS


def _cmd_gen(args) -> tuple[str, int]:
    if not args.model:
        raise InputError("gen needs --model")
    return dumps_tensor(_tensor(args.model, None)), EXIT_OK


COMMANDS = {
    "analyze": _cmd_analyze,
    "certify": _cmd_certify,
    "vanishing": _cmd_vanishing,
    "extremal": _cmd_extremal,
    "verify-identities": _cmd_verify,
    "gen": _cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcpositivity", description="Curvature positivity certificates and checks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log restart values and progress")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file", nargs="?", help="tensor file (same as --input)")
        p.add_argument("--model", help="zoo spec, e.g. fs:n=3,c=2 or random-ckl:n=3,seed=7")
        p.add_argument("--input", help="tensor file")
        p.add_argument("--k", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--kind", choices=KINDS, default="uniform-rc")
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--points", help="comma-separated tensor files for extra sample points")
        p.add_argument("--aux-model", help="auxiliary bundle F as a zoo spec (vanishing only)")
        p.add_argument("--aux-input", help="auxiliary bundle F as a tensor file (vanishing only)")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.samples < 1 or args.restarts < 1 or not args.tol > 0:
        print("error: --samples and --restarts must be positive and --tol > 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        out, status = COMMANDS[args.command](args)
    except (InputError, TensorFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:  # shape and range errors from the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = out if isinstance(out, str) else dumps_report(out)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())

"""Command-line front end: a thin client over the service handlers.

Every subcommand emits a single JSON document on standard output (keys
sorted, so output is byte-for-byte reproducible for fixed flags) except
``selftest`` without ``--json``, which prints one verdict line per item.

Exit codes: 0 success (for ``count``, a verified result; for
``selftest``, all items green), 2 invalid input, 3 computation failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import AgmliftError, ComputationError, InvalidInputError
from .service import ops
from .service.models import (
    AgmRequest,
    CountBatchRequest,
    CountRequest,
    CurveIn,
    LiftRequest,
    SelftestRequest,
    VerifyRequest,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="agmlift",
        description="2-adic AGM, canonical theta lifting, and binary-field point counting",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count points on an ordinary curve")
    c.add_argument("--d", type=int, required=True, help="field degree of F_(2^d)")
    c.add_argument("--a2", help="hex bitmask of a2")
    c.add_argument("--a6", help="hex bitmask of a6")
    c.add_argument("--random", action="store_true", help="draw a random ordinary curve")
    c.add_argument("--batch", help="JSON file with a list of {d, a2, a6} curves")
    c.add_argument("--rng-seed", type=int, default=0)

    l = sub.add_parser("lift", help="lift a canonical theta null vector")
    l.add_argument("--g", type=int, required=True)
    l.add_argument("--d", type=int, required=True)
    l.add_argument("--seed", required=True, help="comma-separated hex residues")
    l.add_argument("--precision", type=int, required=True)
    l.add_argument("--f", help="hex bitmask of the defining polynomial mod 2")

    a = sub.add_parser("agm", help="run the mean recursion and report convergence")
    a.add_argument("--g", type=int, required=True)
    a.add_argument("--d", type=int, required=True)
    a.add_argument("--start", required=True, help="comma-separated integer coordinates")
    a.add_argument("--steps", type=int, required=True)
    a.add_argument("--precision", type=int, default=40)
    a.add_argument("--f", help="hex bitmask of the defining polynomial mod 2")

    v = sub.add_parser("verify", help="residual-check a user-supplied vector")
    v.add_argument("--file", required=True, help="JSON document path, or - for stdin")

    s = sub.add_parser("selftest", help="replay the built-in reference checks")
    s.add_argument("--json", action="store_true", dest="as_json")
    s.add_argument("--only", help="comma-separated item names")
    s.add_argument("--rng-seed", type=int, default=0)

    r = sub.add_parser("serve", help="run the HTTP service")
    r.add_argument("--host", default="127.0.0.1")
    r.add_argument("--port", type=int, default=8000)
    return p


def _cmd_count(args) -> int:
    if args.batch:
        with open(args.batch, "r", encoding="utf-8") as fh:
            curves = json.load(fh)
        req = CountBatchRequest(
            curves=[CurveIn(**c) for c in curves], rng_seed=args.rng_seed
        )
        resp = ops.run_count_batch(req)
        _emit(resp.model_dump())
        return EXIT_OK
    req = CountRequest(
        d=args.d, a2=args.a2, a6=args.a6, random=args.random, rng_seed=args.rng_seed
    )
    resp = ops.run_count(req)
    _emit(resp.model_dump())
    return EXIT_OK if resp.verified else EXIT_FAILED


def _cmd_lift(args) -> int:
    req = LiftRequest(
        g=args.g,
        d=args.d,
        seed=[s.strip() for s in args.seed.split(",")],
        precision=args.precision,
        f=args.f,
    )
    resp = ops.run_lift(req)
    _emit(resp.model_dump())
    return EXIT_OK


def _cmd_agm(args) -> int:
    try:
        start = [int(s.strip()) for s in args.start.split(",")]
    except ValueError:
        raise InvalidInputError("start must be a comma-separated integer list")
    req = AgmRequest(
        g=args.g, d=args.d, start=start, steps=args.steps,
        precision=args.precision, f=args.f,
    )
    resp = ops.run_agm(req)
    _emit(resp.model_dump())
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.file == "-":
        doc = json.load(sys.stdin)
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    resp = ops.run_verify(VerifyRequest(**doc))
    _emit(resp.model_dump())
    return EXIT_OK


def _cmd_selftest(args) -> int:
    names = [s.strip() for s in args.only.split(",")] if args.only else None
    resp = ops.run_selftest(SelftestRequest(only=names, rng_seed=args.rng_seed))
    if args.as_json:
        _emit(resp.model_dump())
    else:
        for item in resp.items:
            verdict = "PASS" if item.passed else "FAIL"
            sys.stdout.write(f"{verdict} {item.name}: {item.detail}\n")
        sys.stdout.write("all passed\n" if resp.passed else "FAILURES present\n")
    return EXIT_OK if resp.passed else EXIT_FAILED


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "count": _cmd_count,
    "lift": _cmd_lift,
    "agm": _cmd_agm,
    "verify": _cmd_verify,
    "selftest": _cmd_selftest,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InvalidInputError as exc:
        _emit({"error": str(exc)})
        return EXIT_INVALID
    except ComputationError as exc:
        _emit({"error": str(exc)})
        return EXIT_FAILED
    except AgmliftError as exc:
        _emit({"error": str(exc)})
        return EXIT_INVALID
    except FileNotFoundError as exc:
        _emit({"error": str(exc)})
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

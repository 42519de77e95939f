"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 hypothesis failure or a negative
check (invalid certificate, failed bound), 64 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import counterexamples as cx
from .core import Angle, Certificate, CoefficientSet, to_complex
from .engines import EngineParams, approximate, verify_certificate
from .errors import HypothesisFailure, RestrictedSeriesError
from .geometry import classify_lambda, descent_radius, find_delta_quadruple
from .oracle import best_prefix_error
from .region import Disk, RegionSpec, parse_piece
from .sampler import sample_image

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_HYPOTHESIS = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def jsonable(obj: Any) -> Any:
    """Convert complex numbers, numpy scalars and fractions for ``json.dumps``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    return obj


def _emit(obj: Any, out=None) -> None:
    print(json.dumps(jsonable(obj)), file=out or sys.stdout)


# --------------------------------------------------------------------------
# Argument parsing helpers
# --------------------------------------------------------------------------


def _load_json(text: str) -> Any:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return json.loads(text)


def parse_lambda(text: str) -> CoefficientSet:
    data = _load_json(text)
    if not isinstance(data, list):
        raise UsageError("--lambda must be a JSON list")
    return CoefficientSet(to_complex(x) for x in data)


def parse_complex(text: str) -> complex:
    data = _load_json(text)
    return to_complex(data)


def parse_values(text: str) -> list[complex]:
    data = _load_json(text)
    if not isinstance(data, list):
        raise UsageError("expected a JSON list")
    return [to_complex(x) for x in data]


def parse_zeta(tokens: Sequence[str]) -> Angle:
    return Angle.parse(" ".join(tokens))


def build_region(pieces: Sequence[str] | None, zeta: Angle) -> RegionSpec:
    if not pieces:
        return RegionSpec.default_disk(zeta)
    return RegionSpec(tuple(parse_piece(p) for p in pieces), zeta)


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_approximate(args) -> int:
    lam = parse_lambda(args.lam)
    zeta = parse_zeta(args.zeta)
    region = build_region(args.region, zeta)
    w = parse_complex(args.target)
    prefix = parse_values(args.prefix)
    params = EngineParams(delta_cap=args.delta_cap, horizon_cap=args.horizon, seed=args.seed)
    cert = approximate(lam, region, prefix, w, args.eps, params, args.theorem)
    text = json.dumps(cert.to_json())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.diagnostics:
        with open(args.diagnostics, "w") as fh:
            json.dump(jsonable(dict(cert.info, margin=cert.margin)), fh, indent=2)
    return EXIT_OK


def cmd_classify(args) -> int:
    lam = parse_lambda(args.lam)
    cls = classify_lambda(lam)
    out = cls.to_json()
    if cls.kind == "spanning":
        q = find_delta_quadruple(lam)
        out["quadruple"] = q.to_json()
        out["descent_radius"] = descent_radius(lam)
    _emit(out)
    return EXIT_OK


def cmd_wedge(args) -> int:
    if args.alpha is not None:
        _emit(cx.wedge_diagnostics(args.k, args.alpha, args.n))
        return EXIT_OK
    _emit(cx.build_wedge(args.k, args.side).to_json())
    return EXIT_OK


def cmd_check_evasion(args) -> int:
    lam = parse_values(args.lam)
    real = all(abs(z.imag) <= 1e-12 for z in lam)
    side = args.side or (cx.AT_MINUS_ONE if real else cx.AT_PLUS_ONE)
    wedge = cx.build_wedge(args.k, side)
    check = cx.imag_bound_check if side == cx.AT_MINUS_ONE else cx.real_bound_check
    report = check(lam, wedge, args.trials, args.z_samples, args.prefix_len, args.seed)
    if args.csv:
        report.write_csv(args.csv)
    _emit(dict(report.to_json(), wedge=wedge.to_json()))
    return EXIT_OK if report.passed else EXIT_HYPOTHESIS


def cmd_oracle(args) -> int:
    lam = parse_lambda(args.lam)
    tau = parse_complex(args.tau)
    w = parse_complex(args.target)
    res = best_prefix_error(lam, tau, w, args.length, args.method, args.start)
    _emit(res.to_json())
    return EXIT_OK


def cmd_sample(args) -> int:
    lam = parse_lambda(args.lam)
    zeta = parse_zeta(args.zeta)
    region = build_region(args.region, zeta)
    grid = parse_piece(args.grid)
    if not isinstance(grid, Disk):
        raise UsageError("--grid must be a disk")
    cloud = sample_image(lam, region, args.prefix_len, args.trials, grid, args.resolution, args.seed)
    if args.csv:
        cloud.write_csv(args.csv)
    if args.json:
        cloud.write_json(args.json)
    _emit(cloud.summary())
    return EXIT_OK


def cmd_verify(args) -> int:
    lam = parse_lambda(args.lam)
    if args.certificate_file == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.certificate_file) as fh:
            data = json.load(fh)
    cert = Certificate.from_json(data)
    region = None
    if args.zeta:
        region = build_region(args.region, parse_zeta(args.zeta))
    elif args.region:
        raise UsageError("--region needs --zeta")
    report = verify_certificate(lam, cert, region)
    _emit(report.to_json())
    return EXIT_OK if report.valid else EXIT_HYPOTHESIS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="restricted-series", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lam_arg(sp, required=True):
        sp.add_argument("--lambda", dest="lam", required=required, help="JSON list of [re, im] pairs, or @file")

    def zeta_arg(sp, required=True):
        sp.add_argument("--zeta", nargs="+", required=required, help="turns:<value> [exact], e.g. 'turns:1/4 exact'")

    def region_arg(sp):
        sp.add_argument(
            "--region", action="append",
            help="disk:re,im,r or wedge:re_lo,re_hi,arg_center,half_angle (repeatable; default disk around 0.95*zeta)",
        )

    a = sub.add_parser("approximate", help="emit a certificate")
    lam_arg(a)
    zeta_arg(a)
    region_arg(a)
    a.add_argument("--target", required=True, help="[re, im] or a number")
    a.add_argument("--eps", type=float, required=True)
    a.add_argument("--prefix", default="[]", help="JSON list of prefix coefficients")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--theorem", choices=["auto", "1", "2", "3"], default="auto")
    a.add_argument("--delta-cap", type=float, default=0.4)
    a.add_argument("--horizon", type=int, default=1 << 16)
    a.add_argument("--out", help="write the certificate here instead of stdout")
    a.add_argument("--diagnostics", help="write engine diagnostics JSON here")
    a.set_defaults(func=cmd_approximate)

    c = sub.add_parser("classify", help="line / half-plane / spanning")
    lam_arg(c)
    c.set_defaults(func=cmd_classify)

    w = sub.add_parser("wedge", help="build a wedge region")
    w.add_argument("--k", type=int, required=True)
    w.add_argument("--side", choices=list(cx.SIDES), default=cx.AT_MINUS_ONE)
    w.add_argument("--alpha", type=float, help="diagnostic: evaluate a forced angle instead of searching")
    w.add_argument("--n", type=int, help="with --alpha, the N to test")
    w.set_defaults(func=cmd_wedge)

    e = sub.add_parser("check-evasion", help="sampled half-plane bound on a wedge")
    lam_arg(e)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--side", choices=list(cx.SIDES))
    e.add_argument("--trials", type=int, default=10_000)
    e.add_argument("--z-samples", type=int, default=100)
    e.add_argument("--prefix-len", type=int, default=512)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--csv")
    e.set_defaults(func=cmd_check_evasion)

    o = sub.add_parser("oracle", help="exhaustive best prefix")
    lam_arg(o)
    o.add_argument("--tau", required=True)
    o.add_argument("--target", required=True)
    o.add_argument("--length", type=int, required=True)
    o.add_argument("--method", choices=["auto", "direct", "mitm"], default="auto")
    o.add_argument("--start", type=int, default=0)
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("sample", help="image cloud and coverage")
    lam_arg(s)
    zeta_arg(s)
    region_arg(s)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--grid", default="disk:0,0,2")
    s.add_argument("--resolution", type=int, default=100)
    s.add_argument("--prefix-len", type=int, default=512)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--csv")
    s.add_argument("--json")
    s.set_defaults(func=cmd_sample)

    v = sub.add_parser("verify", help="re-check a certificate")
    v.add_argument("--certificate-file", required=True, help="path or - for stdin")
    lam_arg(v)
    zeta_arg(v, required=False)
    region_arg(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except HypothesisFailure as exc:
        _emit({"error": type(exc).__name__, "reason": exc.reason, "message": str(exc)})
        return EXIT_HYPOTHESIS
    except (UsageError, ValueError, KeyError, TypeError, json.JSONDecodeError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RestrictedSeriesError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - last resort
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 ok, 2 parse error, 3 domain error (vacuum, invalid state, ...),
4 search exhausted, 5 verification failed. Payloads go to ``--output`` or
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import io as dio
from .gas import DomainError
from .patching import Case, PatchConfig, assemble, case_dispatch, normalize
from .riemann1d import DEFAULT_TOL_CLS, classify, evaluate_selfsimilar, solve_middle, wave_curve, waves
from .subsolution import NotFoundError, SearchConfig, estimate_threshold, find
from .verifier import DEFAULT_TOL_EQ, verify_subsolution

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_NOT_FOUND, EXIT_VERIFY = 0, 2, 3, 4, 5


class _Fail(Exception):
    def __init__(self, code: int, message: str, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read input: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_PARSE, f"invalid JSON: {exc}") from None


def _load_data(args):
    return dio.data_from_doc(_read_json(args.input))


def _search(args) -> SearchConfig:
    return SearchConfig(h0=args.h0, tol_eq=args.tol_eq)


def cmd_classify(args) -> tuple[int, str]:
    data = _load_data(args)
    return EXIT_OK, dio.dumps(dio.pattern_to_doc(classify(data, args.tol_cls)))


def cmd_solve1d(args) -> tuple[int, str]:
    data = _load_data(args)
    pattern = classify(data, args.tol_cls)
    fan = waves(data, pattern)
    if fan:
        lo = min(w.speed_lo for w in fan)
        hi = max(w.speed_hi for w in fan)
    else:
        lo = hi = data.left.v
    pad = max(1.0, 0.25 * (hi - lo))
    xs = np.linspace(lo - pad, hi + pad, args.samples)
    rows = []
    for xi in xs:
        s = evaluate_selfsimilar(data, pattern, float(xi))
        rows.append((xi, s.rho, s.u, s.v, s.p))
    return EXIT_OK, dio.write_table(("xi", "rho", "u", "v", "p"), rows)


def cmd_curves(args) -> tuple[int, str]:
    data = _load_data(args)
    gas, L, R = data.gas, data.left, data.right
    p_M = solve_middle(data).p_M
    ps = np.geomspace(p_M / 10.0, 10.0 * p_M, args.samples)
    rows = [(p, L.v - wave_curve(gas, L.rho, L.p, p), R.v + wave_curve(gas, R.rho, R.p, p)) for p in ps]
    return EXIT_OK, dio.write_table(("p", "v_shock1", "v_wave3"), rows)


def cmd_subsolution_find(args) -> tuple[int, str]:
    nz = normalize(_load_data(args))
    if nz.degenerate:
        raise DomainError("p_- == p_+: the fan construction needs p_- < p_+")
    try:
        sub = find(nz.normalized, _search(args))
    except NotFoundError as exc:
        raise _Fail(EXIT_NOT_FOUND, str(exc), {"found": False, "best": exc.best}) from None
    doc = dio.subsolution_to_doc(sub)
    doc["found"] = True
    doc["normalization"] = {"reflected": nz.reflected, "shift": list(nz.shift)}
    return EXIT_OK, dio.dumps(doc)


def cmd_subsolution_verify(args) -> tuple[int, str]:
    q, gas = dio.quintuple_from_doc(_read_json(args.input))
    report = verify_subsolution(q, gas, args.tol_eq)
    text = dio.dumps(dio.report_to_doc(report))
    if not report.passed:
        raise _Fail(EXIT_VERIFY, "violated: " + ", ".join(report.violations), text)
    return EXIT_OK, text


def cmd_patch(args) -> tuple[int, str]:
    data = _load_data(args)
    config = PatchConfig(search=_search(args), tol_cls=args.tol_cls, tol_eq=args.tol_eq, delta0=args.delta0)
    # equal pressures never give a one-shock pattern, so dispatch is safe here
    dispatch = case_dispatch(normalize(data).normalized, config)
    if dispatch.case not in (Case.CASE2, Case.CASE3, Case.CASE4):
        doc = {"case": dispatch.case.value, "row": dispatch.pattern.row, "assembled": False}
        return EXIT_OK, dio.dumps(doc)
    try:
        ps = assemble(data, config)
    except NotFoundError as exc:
        raise _Fail(EXIT_NOT_FOUND, str(exc), {"assembled": False, "best": exc.best}) from None
    doc = dio.patched_to_doc(ps)
    doc["assembled"] = True
    text = dio.dumps(doc)
    if not ps.verified:
        raise _Fail(EXIT_VERIFY, "composite failed verification", text)
    return EXIT_OK, text


def cmd_threshold(args) -> tuple[int, str]:
    nz = normalize(_load_data(args))
    L, R = nz.normalized.left, nz.normalized.right
    w = estimate_threshold(nz.normalized.gas, L.rho, L.p, R.p, _search(args))
    doc = dio.window_to_doc(w)
    doc["rho_v2"] = L.rho * L.v * L.v
    return EXIT_OK, dio.dumps(doc)


def _positive(x: str) -> float:
    v = float(x)
    if not (v > 0.0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {x}")
    return v


def _samples(x: str) -> int:
    n = int(x)
    if n < 2:
        raise argparse.ArgumentTypeError("need at least 2 samples")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, help="input JSON document ('-' for stdin)")
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--tol-eq", type=_positive, default=DEFAULT_TOL_EQ)
    common.add_argument("--tol-cls", type=_positive, default=DEFAULT_TOL_CLS)
    common.add_argument("--samples", type=_samples, default=201)
    common.add_argument("--delta0", type=_positive, default=None)
    common.add_argument("--h0", type=_positive, default=0.5)

    parser = argparse.ArgumentParser(prog="eulerfan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common]).set_defaults(func=cmd_classify)
    sub.add_parser("solve1d", parents=[common]).set_defaults(func=cmd_solve1d)
    sub.add_parser("curves", parents=[common]).set_defaults(func=cmd_curves)
    sub.add_parser("patch", parents=[common]).set_defaults(func=cmd_patch)
    sub.add_parser("threshold", parents=[common]).set_defaults(func=cmd_threshold)
    subsol = sub.add_parser("subsolution").add_subparsers(dest="mode", required=True)
    subsol.add_parser("find", parents=[common]).set_defaults(func=cmd_subsolution_find)
    subsol.add_parser("verify", parents=[common]).set_defaults(func=cmd_subsolution_verify)
    return parser


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except _Fail as exc:
        print(f"eulerfan: {exc}", file=sys.stderr)
        if exc.payload is not None:
            _emit(exc.payload if isinstance(exc.payload, str) else dio.dumps(exc.payload), args.output)
        return exc.code
    except dio.ParseError as exc:
        print(f"eulerfan: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"eulerfan: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())

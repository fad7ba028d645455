"""JSON documents for data, subsolutions, reports and patched composites,
plus the delimiter-separated curve and profile tables."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Sequence

from .gas import GasModel, PrimState
from .riemann1d import RiemannData, WavePattern
from .verifier import Condition, FanQuintuple, Region, ResidualReport, lift

__all__ = [
    "ParseError",
    "dumps",
    "state_to_doc",
    "state_from_doc",
    "data_to_doc",
    "data_from_doc",
    "pattern_to_doc",
    "report_to_doc",
    "report_from_doc",
    "subsolution_to_doc",
    "quintuple_to_doc",
    "quintuple_from_doc",
    "patched_to_doc",
    "window_to_doc",
    "write_table",
    "read_table",
]

STATE_KEYS = ("rho", "u", "v", "p")
REGION_KEYS = ("rho", "alpha", "beta", "gamma", "delta", "C", "p")


class ParseError(ValueError):
    """Malformed input document; the message names the offending field."""


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _number(doc: Any, key: str, where: str) -> float:
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing field '{where}{key}'")
    x = doc[key]
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"field '{where}{key}' must be a number, got {x!r}")
    return float(x)


def _object(doc: Any, key: str, where: str = "") -> dict:
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing field '{where}{key}'")
    if not isinstance(doc[key], dict):
        raise ParseError(f"field '{where}{key}' must be an object")
    return doc[key]


def state_to_doc(s: PrimState) -> dict:
    return {"rho": s.rho, "u": s.u, "v": s.v, "p": s.p}


def state_from_doc(doc: dict, where: str = "") -> PrimState:
    return PrimState(*(_number(doc, k, where) for k in STATE_KEYS))


def data_to_doc(data: RiemannData) -> dict:
    return {"c_v": data.gas.c_v, "left": state_to_doc(data.left), "right": state_to_doc(data.right)}


def data_from_doc(doc: Any) -> RiemannData:
    """Parse ``{"c_v": .., "left": {rho,u,v,p}, "right": {...}}``.

    Structural problems raise :class:`ParseError`; physically invalid values
    (``c_v <= 1/2``, non-positive density or pressure) raise
    :class:`~eulerfan.gas.DomainError` from the constructors.
    """
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    c_v = _number(doc, "c_v", "")
    left = _object(doc, "left")
    right = _object(doc, "right")
    for where, part in (("left.", left), ("right.", right)):
        for k in STATE_KEYS:
            _number(part, k, where)
    return RiemannData(GasModel(c_v), state_from_doc(left, "left."), state_from_doc(right, "right."))


def _describe(pattern: WavePattern) -> str:
    parts = []
    if pattern.left_wave.value != "none":
        parts.append(f"1-{pattern.left_wave.value}")
    if pattern.contact:
        parts.append("2-contact")
    if pattern.right_wave.value != "none":
        parts.append(f"3-{pattern.right_wave.value}")
    return ", ".join(parts) if parts else "nothing"


def pattern_to_doc(pattern: WavePattern) -> dict:
    m = pattern.middle
    return {
        "row": pattern.row,
        "description": _describe(pattern),
        "left_wave": pattern.left_wave.value,
        "contact": pattern.contact,
        "right_wave": pattern.right_wave.value,
        "middle": None
        if m is None
        else {
            "p_M": m.p_M,
            "v_M": m.v_M,
            "rho_Mminus": m.rho_Mminus,
            "rho_Mplus": m.rho_Mplus,
            "u_Mminus": m.u_Mminus,
            "u_Mplus": m.u_Mplus,
            "residual": m.residual,
        },
    }


def report_to_doc(report: ResidualReport) -> dict:
    return {
        "mode": report.mode,
        "tol_eq": report.tol_eq,
        "passed": report.passed,
        "violations": report.violations,
        "conditions": [
            {
                "id": c.id,
                "kind": c.kind,
                "value": c.value,
                "scale": c.scale,
                "relative": c.relative,
                "ok": c.ok(report.tol_eq),
            }
            for c in report.conditions
        ],
    }


def report_from_doc(doc: dict) -> ResidualReport:
    try:
        conds = tuple(Condition(c["id"], c["kind"], float(c["value"]), float(c["scale"])) for c in doc["conditions"])
        return ResidualReport(conds, float(doc["tol_eq"]), doc["mode"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed report: missing {exc}") from None


def _region_to_doc(r: Region) -> dict:
    return {k: getattr(r, k) for k in REGION_KEYS}


def quintuple_to_doc(q: FanQuintuple, gas: GasModel) -> dict:
    return {
        "c_v": gas.c_v,
        "left": state_to_doc(q.left),
        "right": state_to_doc(q.right),
        "mu": [q.mu0, q.mu1, q.mu2],
        "regions": [_region_to_doc(q.region1), _region_to_doc(q.region2)],
    }


def quintuple_from_doc(doc: Any) -> tuple[FanQuintuple, GasModel]:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    gas = GasModel(_number(doc, "c_v", ""))
    left = state_from_doc(_object(doc, "left"), "left.")
    right = state_from_doc(_object(doc, "right"), "right.")
    mu = doc.get("mu")
    if not isinstance(mu, list) or len(mu) != 3:
        raise ParseError("field 'mu' must be a list of three numbers")
    mus = [_number({"x": m}, "x", f"mu[{i}].") for i, m in enumerate(mu)]
    regions = doc.get("regions")
    if not isinstance(regions, list) or len(regions) != 2:
        raise ParseError("field 'regions' must be a list of two objects")
    rs = [Region(*(_number(r, k, f"regions[{i}].") for k in REGION_KEYS)) for i, r in enumerate(regions)]
    return FanQuintuple(mus[0], mus[1], mus[2], rs[0], rs[1], left, right), gas


def subsolution_to_doc(sub) -> dict:
    doc = quintuple_to_doc(lift(sub), sub.gas)
    doc.update(
        {
            "rho1": sub.rho1,
            "rho2": sub.rho2,
            "p1": sub.p1,
            "p2": sub.p2,
            "beta": sub.beta,
            "slacks": sub.slacks,
            "h": sub.h,
        }
    )
    if sub.report is not None:
        doc["report"] = report_to_doc(sub.report)
    return doc


def window_to_doc(w) -> dict:
    return {
        "upper": w.upper,
        "v_est": w.v_est,
        "empirical": w.empirical,
        "rho_minus": w.rho_minus,
        "p_minus": w.p_minus,
        "p_plus": w.p_plus,
        "evaluations": w.evaluations,
    }


def _wave_to_doc(w) -> dict:
    return {
        "kind": w.kind.value,
        "left": state_to_doc(w.left),
        "right": state_to_doc(w.right),
        "tail": w.tail,
        "head": w.head,
    }


def patched_to_doc(ps) -> dict:
    nz = ps.normalization
    doc = {
        "case": ps.case_id.value,
        "delta": ps.delta,
        "verified": ps.verified,
        "aux_state": None if ps.aux_state is None else state_to_doc(ps.aux_state),
        "compatibility": ps.compatibility,
        "frame_shift": list(ps.frame_shift),
        "normalization": {
            "reflected": nz.reflected,
            "shift": list(nz.shift),
            "original": data_to_doc(nz.original),
            "normalized": data_to_doc(nz.normalized),
        },
        "fan": subsolution_to_doc(ps.fan),
        "trailing_wave": None,
        "interfaces": {
            frame: [{"label": k, "speed": x} for k, x in ps.interfaces(frame)]
            for frame in ("working", "normalized", "original")
        },
        "wave_report": None,
    }
    if ps.trailing_wave is not None:
        doc["trailing_wave"] = {
            "working": _wave_to_doc(ps.trailing_wave),
            "original": _wave_to_doc(ps.trailing_wave_in("original")),
        }
        doc["wave_report"] = report_to_doc(ps.wave_report)
    return doc


def write_table(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def read_table(text: str) -> tuple[list[str], list[list[float]]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty table")
    try:
        return rows[0], [[float(x) for x in r] for r in rows[1:] if r]
    except ValueError as exc:
        raise ParseError(f"non-numeric table entry: {exc}") from None

"""JSON front end: one job document in, one report out (or arrays with ``--batch``).

Numbers may be JSON integers, decimal literals or strings, or ``"p/q"``
strings.  Decimals are read exactly.  Exact results are written as ``"p/q"``
strings with keys sorted, so exact-mode reports are reproducible byte for byte.

Exit codes: 0 success, 1 invalid input, 2 undefined geometric case.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from decimal import Decimal, InvalidOperation
from fractions import Fraction

import numpy as np

from . import numeric
from .camera import Camera, CameraPair, UndefinedError, camera_pair_from_form, joint_image, on_baseline
from .conjugate_maps import CurveTypeError, curve_type_conjugate_planes, curve_type_conjugate_quadric
from .criticality import (
    Configuration,
    conjugate_configuration,
    is_critical,
    one_view_critical,
    one_view_span_dim,
    verify_same_images,
)
from .fundamental import BilinearForm, epipole, fundamental_form
from .pencil import INFINITE, Quadric, classify_quadric, form_line_from_quadric, rank2_forms_on_line
from .projective import InvalidInputError, format_fraction

EXIT_OK, EXIT_INVALID, EXIT_UNDEFINED = 0, 1, 2


class JobError(Exception):
    def __init__(self, code: str, message: str, locus: str = "", exit_code: int = EXIT_INVALID):
        super().__init__(message)
        self.code, self.message, self.locus, self.exit_code = code, message, locus, exit_code

    def as_json(self) -> dict:
        return {"code": self.code, "message": self.message, "locus": self.locus}


# --------------------------------------------------------------------------
# input parsing
# --------------------------------------------------------------------------


def parse_number(value, locus: str) -> Fraction:
    if isinstance(value, bool) or value is None:
        raise JobError("bad-number", f"expected a number, got {value!r}", locus)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise JobError("bad-number", "non-finite number", locus)
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise JobError("bad-number", "non-finite number", locus)
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        try:
            if "/" in s:
                return Fraction(s)
            d = Decimal(s)
        except (ValueError, ZeroDivisionError, InvalidOperation):
            raise JobError("bad-number", f"cannot read {value!r} as a rational", locus) from None
        if not d.is_finite():
            raise JobError("bad-number", "non-finite number", locus)
        return Fraction(d)
    raise JobError("bad-number", f"expected a number, got {type(value).__name__}", locus)


def parse_matrix(value, rows: int, cols: int, locus: str):
    if not isinstance(value, list) or len(value) != rows:
        raise JobError("bad-shape", f"expected a {rows}x{cols} array", locus)
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise JobError("bad-shape", f"expected a {rows}x{cols} array", f"{locus}[{i}]")
        out.append(tuple(parse_number(v, f"{locus}[{i}][{j}]") for j, v in enumerate(row)))
    return tuple(out)


def parse_vector(value, n: int, locus: str):
    if not isinstance(value, list) or len(value) != n:
        raise JobError("bad-shape", f"expected {n} numbers", locus)
    return tuple(parse_number(v, f"{locus}[{j}]") for j, v in enumerate(value))


def parse_points(value, locus: str = "points"):
    if value is None:
        return ()
    if not isinstance(value, list):
        raise JobError("bad-shape", "expected a list of 4-vectors", locus)
    return tuple(parse_vector(p, 4, f"{locus}[{k}]") for k, p in enumerate(value))


def parse_camera(value, locus: str) -> Camera:
    m = parse_matrix(value, 3, 4, locus)
    try:
        return Camera(m)
    except InvalidInputError as exc:
        raise JobError("bad-camera", str(exc), locus) from None


def parse_pair(job: dict, key: str = "cameras") -> CameraPair:
    cams = job.get(key)
    if not isinstance(cams, list) or len(cams) != 2:
        raise JobError("bad-shape", "expected two cameras", key)
    first, second = (parse_camera(c, f"{key}[{i}]") for i, c in enumerate(cams))
    try:
        return CameraPair(first, second)
    except InvalidInputError as exc:
        raise JobError("bad-cameras", str(exc), key) from None


def parse_configuration(job: dict, locus: str) -> Configuration:
    pair = parse_pair(job, "cameras")
    try:
        return Configuration(pair, parse_points(job.get("points"), "points"))
    except InvalidInputError as exc:
        raise JobError("bad-points", str(exc), locus) from None


# --------------------------------------------------------------------------
# output formatting
# --------------------------------------------------------------------------


def jsonable(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (tuple, list)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    return x


def count_json(c: float):
    return "infinite" if c == INFINITE else int(c)


def verdict_json(v) -> dict | None:
    if v is None:
        return None
    return {
        "quadric_kind": v.quadric_kind.value,
        "conjugate_count": count_json(v.conjugate_count),
        "conjugate_kind": v.conjugate_kind.value if v.conjugate_kind else None,
        "critical": v.critical,
    }


def pair_json(p):
    if isinstance(p, CameraPair):
        return [p.first.matrix, p.second.matrix]
    return [np.asarray(m) for m in p]


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_fundamental(job, opts):
    pair = parse_pair(job)
    F = fundamental_form(pair)
    return {
        "form": F.matrix,
        "rank": F.rank,
        "epipoles": {
            "image1_center2": epipole(pair, 1, 2).point,
            "image2_center1": epipole(pair, 2, 1).point,
        },
    }


def _quadric(job):
    if "quadric" not in job:
        raise JobError("missing-field", "a quadric is required", "quadric")
    m = parse_matrix(job["quadric"], 4, 4, "quadric")
    try:
        return Quadric.from_any(m)
    except InvalidInputError as exc:
        raise JobError("bad-quadric", str(exc), "quadric") from None


def cmd_classify_quadric(job, opts):
    pair = parse_pair(job)
    S = _quadric(job)
    try:
        case, verdict = classify_quadric(S, pair)
    except InvalidInputError as exc:
        raise JobError("bad-quadric", str(exc), "quadric") from None
    return {
        "case": case.tag.value,
        "shared_kernels": sorted(case.shared_kernels),
        "verdict": verdict_json(verdict),
        "conjugate_count": count_json(verdict.conjugate_count),
    }


def cmd_is_critical(job, opts):
    config = parse_configuration(job, "points")
    report = is_critical(config, samples=opts["samples"], seed=opts["seed"], tolerance=opts["tolerance"])
    return {
        "status": report.status,
        "critical": report.critical,
        "verdict": verdict_json(report.verdict),
        "case": report.case.tag.value if report.case else None,
        "quadric": report.quadric.matrix if report.quadric else None,
        "family_dimension": report.family_dimension,
        "trivial_flag": report.trivial_flag,
        "conjugates": [
            {
                "mode": c.mode,
                "form": c.form.matrix if isinstance(c.form, BilinearForm) else c.form,
                "cameras": pair_json(c.pair),
                "points": c.points,
                "flags": c.flags,
                "residual": c.residual,
                "parameter": c.parameter,
            }
            for c in report.conjugates
        ],
        "warnings": report.warnings,
    }


def cmd_conjugates(job, opts):
    pair = parse_pair(job)
    S = _quadric(job)
    points = parse_points(job.get("points"))
    try:
        pencil = form_line_from_quadric(S, pair)
    except InvalidInputError as exc:
        raise JobError("bad-quadric", str(exc), "quadric") from None
    r2 = rank2_forms_on_line(pencil)
    if r2.family is not None:
        forms = [f for _, f in r2.family.sample(opts["samples"], opts["seed"])]
    else:
        forms = list(r2.forms)
    config = None
    if points:
        try:
            config = Configuration(pair, points)
        except InvalidInputError as exc:
            raise JobError("bad-points", str(exc), "points") from None
    out = []
    for f in forms:
        if isinstance(f, BilinearForm):
            entry = {"mode": "exact", "form": f.matrix, "cameras": pair_json(camera_pair_from_form(f))}
            if config is not None:
                conj = conjugate_configuration(config, f, strict=opts["strict"])
                entry["points"] = conj.points
                entry["flags"] = conj.flags
        else:
            F = numeric.realize_interval_form(f)
            entry = {"mode": "numeric", "form": F, "cameras": pair_json(numeric.camera_pair_from_form(F))}
            entry["interval"] = f.interval
            if config is not None:
                entry["points"] = _numeric_points(config, F)
        out.append(entry)
    return {
        "case": r2.case.tag.value,
        "conjugate_count": count_json(len(forms) if r2.family is None else INFINITE),
        "conjugates": out,
    }


def _numeric_points(config, F):
    q1, q2 = numeric.camera_pair_from_form(F)
    pts = []
    for x in config.points:
        if on_baseline(config.pair, x):
            pts.append(None)
            continue
        u, v = (np.array([float(c) for c in w]) for w in joint_image(config.pair, x))
        pts.append(numeric.triangulate(q1, q2, u, v))
    return pts


def _side(doc, locus: str):
    if not isinstance(doc, dict):
        raise JobError("bad-shape", "expected {cameras, points}", locus)
    cams = doc.get("cameras")
    pts = doc.get("points")
    if not isinstance(cams, list) or len(cams) != 2 or not isinstance(pts, list):
        raise JobError("bad-shape", "expected {cameras, points}", locus)
    # null points are allowed and skipped in the comparison
    points = [None if p is None else parse_vector(p, 4, f"{locus}.points[{k}]") for k, p in enumerate(pts)]
    pair = parse_pair(doc, "cameras")
    return pair, points


def cmd_verify_images(job, opts):
    confs = job.get("configurations")
    if not isinstance(confs, list) or len(confs) != 2:
        raise JobError("bad-shape", "expected two configurations", "configurations")
    a = _side(confs[0], "configurations[0]")
    b = _side(confs[1], "configurations[1]")
    mode = "exact" if opts["mode"] == "exact" else opts["tolerance"]
    try:
        report = verify_same_images(a, b, mode)
    except InvalidInputError as exc:
        raise JobError("bad-configurations", str(exc), "configurations") from None
    return {
        "mode": report.mode,
        "all_match": report.all_match,
        "matches": report.matches,
        "residuals": report.residuals,
        "mismatched": report.mismatched,
    }


def cmd_curve_map(job, opts):
    case = job.get("case")
    t = job.get("type")
    if not isinstance(t, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in t):
        raise JobError("bad-type", "type must be a list of integers", "type")
    try:
        if case == "quadric":
            if len(t) != 4:
                raise JobError("bad-type", "quadric types have four entries", "type")
            image = curve_type_conjugate_quadric(t)
        elif case == "planes":
            if len(t) != 5:
                raise JobError("bad-type", "plane-pair types have five entries", "type")
            image = curve_type_conjugate_planes(t)
        else:
            raise JobError("bad-case", "case must be 'quadric' or 'planes'", "case")
    except CurveTypeError as exc:
        raise JobError("type-outside-hypotheses", str(exc), "type") from None
    return {"type": list(image)}


def cmd_one_view(job, opts):
    P = parse_camera(job.get("camera"), "camera")
    points = parse_points(job.get("points"))
    try:
        critical = one_view_critical(P, points)
    except InvalidInputError as exc:
        raise JobError("bad-points", str(exc), "points") from None
    return {"critical": critical, "span_dim": one_view_span_dim(P, points)}


COMMANDS = {
    "fundamental": cmd_fundamental,
    "classify-quadric": cmd_classify_quadric,
    "is-critical": cmd_is_critical,
    "conjugates": cmd_conjugates,
    "verify-images": cmd_verify_images,
    "curve-map": cmd_curve_map,
    "one-view": cmd_one_view,
}


def job_options(job: dict, flags: dict) -> dict:
    doc = job.get("options") or {}
    if not isinstance(doc, dict):
        raise JobError("bad-options", "options must be an object", "options")
    mode = flags.get("mode") or doc.get("mode") or "exact"
    if mode not in ("exact", "float"):
        raise JobError("bad-options", "mode must be 'exact' or 'float'", "options.mode")
    tol = flags.get("tolerance") if flags.get("tolerance") is not None else doc.get("tolerance", numeric.DEFAULT_TOLERANCE)
    try:
        tol = float(tol)
    except (TypeError, ValueError):
        raise JobError("bad-options", "tolerance must be a number", "options.tolerance") from None
    samples = flags.get("samples") if flags.get("samples") is not None else doc.get("samples", 5)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        raise JobError("bad-options", "samples must be a positive integer", "options.samples")
    seed = flags.get("seed") if flags.get("seed") is not None else doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise JobError("bad-options", "seed must be an integer", "options.seed")
    # strict: undefined conjugates raise (exit 2) instead of being flagged
    strict = doc.get("strict", False)
    if not isinstance(strict, bool):
        raise JobError("bad-options", "strict must be a boolean", "options.strict")
    return {"mode": mode, "tolerance": tol, "samples": samples, "seed": seed, "strict": strict}


def run(job, flags: dict | None = None) -> tuple[dict, int]:
    """Execute one job document; returns ``(report, exit_code)``."""
    flags = flags or {}
    try:
        if not isinstance(job, dict):
            raise JobError("bad-document", "a job is a JSON object", "")
        command = job.get("command")
        if command not in COMMANDS:
            raise JobError("unknown-command", f"unknown command {command!r}", "command")
        opts = job_options(job, flags)
        result = COMMANDS[command](job, opts)
        result = {"command": command, "ok": True, **result}
        return jsonable(result), EXIT_OK
    except JobError as exc:
        err = exc
    except UndefinedError as exc:
        err = JobError("undefined", str(exc), "", EXIT_UNDEFINED)
    except InvalidInputError as exc:
        err = JobError("invalid-input", str(exc), "")
    command = job.get("command") if isinstance(job, dict) else None
    return {"command": command, "ok": False, "error": err.as_json()}, err.exit_code


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="critical-configs", description=__doc__.splitlines()[0])
    p.add_argument("command", nargs="?", choices=sorted(COMMANDS), help="overrides the document's command field")
    p.add_argument("--input", default="-", help="job file, or - for stdin")
    p.add_argument("--output", default="-", help="report file, or - for stdout")
    p.add_argument("--mode", choices=("exact", "float"))
    p.add_argument("--tolerance", type=float, help="image residual tolerance in float mode (default 1e-9)")
    p.add_argument("--samples", type=int, help="conjugates to sample when there are infinitely many (default 5)")
    p.add_argument("--seed", type=int, help="seed for randomized sampling")
    p.add_argument("--batch", action="store_true", help="input is a JSON array of jobs")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    flags = {"mode": args.mode, "tolerance": args.tolerance, "samples": args.samples, "seed": args.seed}
    text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        report, code = {"ok": False, "error": JobError("bad-json", str(exc), "").as_json()}, EXIT_INVALID
    else:
        if args.batch:
            if not isinstance(doc, list):
                report, code = {"ok": False, "error": JobError("bad-batch", "--batch expects a JSON array", "").as_json()}, EXIT_INVALID
            else:
                results = [run(_with_command(j, args.command), flags) for j in doc]
                report = [r for r, _ in results]
                code = max((c for _, c in results), default=EXIT_OK)
        else:
            report, code = run(_with_command(doc, args.command), flags)
    out = dumps(report)
    if args.output == "-":
        sys.stdout.write(out)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    return code


def _with_command(job, command):
    if command and isinstance(job, dict):
        return {**job, "command": command}
    return job


if __name__ == "__main__":
    sys.exit(main())

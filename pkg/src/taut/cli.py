"""Command line front end.

Exit codes: 0 all identities hold, 1 an identity failed, 2 schema or
configuration error, 3 budget exceeded.  When cases end in several error
classes the code is the first of 2, 3, 1 that occurred.
"""
import argparse
import copy
import json
import os
import sys
import time
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from .errors import BudgetError, ConfigError, TautError
from .cyclotomic import CycNum
from .linalg import point_from_index, point_index
from .tautsys import (TautConfig, _cyc_json, gkz_check,
                      homogeneity_report, hyp_check, parse_field, parse_mult, parse_point,
                      parse_psi, point_json, remark_check, taut_bang, taut_star, triangle_check,
                      verify_theorem, weight_scan)
from .transform import (external_product, fourier, fourier_inverse_check, plancherel_check,
                        pullback_linear, random_root_function)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3

OPS = ("compute", "gkz", "hyp", "remark", "verify", "triangle", "weights",
       "fourier-properties", "homogeneity")

CASE_SCHEMA = {
    "type": "object",
    "required": ["op"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "op": {"enum": list(OPS)},
        "description": {"type": "string"},
        "config": {"type": ["string", "object"]},
        "phis": {"anyOf": [{"const": "all"}, {"type": "array", "items": {"type": "array"}}]},
        "points": {"anyOf": [{"const": "all"}, {"type": "array", "items": {"type": "array"}},
                             {"type": "object", "required": ["random"]}]},
        "variants": {"type": "array", "items": {"enum": ["*", "!"]}, "minItems": 1},
        "variant": {"enum": ["*", "!"]},
        "mmax": {"type": "integer", "minimum": 1},
        "phi": {"type": "array"},
        "tolerance": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "expect": {"type": "object"},
    },
}

RUN_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "fields": {"type": "object", "additionalProperties": {"type": "object"}},
        "configs": {"type": "object", "additionalProperties": {"type": "object"}},
        "workers": {"type": "integer", "minimum": 1},
        "tolerance": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "budget": {"type": "object",
                   "properties": {"points": {"type": "integer", "minimum": 1}},
                   "additionalProperties": False},
        "out": {"type": "string"},
        "cases": {"type": "array", "items": CASE_SCHEMA},
    },
    "additionalProperties": False,
}


# ---------------------------------------------------------------- case discovery

def bundled_dir():
    return Path(__file__).resolve().parent / "cases"


def case_dirs():
    dirs = [bundled_dir()]
    for p in os.environ.get("TAUT_CASE_PATH", "").split(os.pathsep):
        if p:
            dirs.append(Path(p))
    return dirs


def list_cases():
    """Sorted (name, description, path) for every discoverable case file."""
    found = {}
    for d in case_dirs():
        if not d.is_dir():
            continue
        for path in sorted(d.glob("*.json")):
            try:
                with open(path) as fh:
                    doc = json.load(fh)
            except (OSError, json.JSONDecodeError):
                continue
            name = doc.get("name", path.stem) if isinstance(doc, dict) else path.stem
            desc = doc.get("description", "") if isinstance(doc, dict) else ""
            found.setdefault(name, (name, desc, path))
    return [found[k] for k in sorted(found)]


def find_case(name):
    for n, _, path in list_cases():
        if n == name:
            return path
    raise ConfigError(f"no case named {name!r}; see 'taut list'")


# ---------------------------------------------------------------- config loading

def load_run_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return validate_run_config(doc)


def validate_run_config(doc):
    try:
        jsonschema.validate(doc, RUN_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path)
        raise ConfigError(f"schema violation at '{where}': {exc.message}") from None
    doc = copy.deepcopy(doc)
    names = set()
    for i, case in enumerate(doc.get("cases", [])):
        case.setdefault("name", f"case{i}")
        if case["name"] in names:
            raise ConfigError(f"duplicate case name {case['name']!r}")
        names.add(case["name"])
        ref = case.get("config")
        if isinstance(ref, str) and ref not in doc.get("configs", {}):
            raise ConfigError(f"case {case['name']!r} references unknown config {ref!r}")
    return doc


# ---------------------------------------------------------------- case execution

def _tconfig(case, ctx):
    ref = case.get("config")
    if ref is None:
        raise ConfigError(f"case {case['name']!r} needs a config")
    spec = ctx["configs"][ref] if isinstance(ref, str) else ref
    return TautConfig.from_spec(spec, ctx["fields"], name=case["name"])


def _phis(cfg, sel):
    if sel is None or sel == "all":
        return None
    return [parse_point(cfg.field, p, cfg.N) for p in sel]


def _identity_result(rep):
    return {"ok": rep.ok, "report": rep.to_json()}, _rows_csv(rep)


def _rows_csv(rep):
    import csv
    import io
    fh = io.StringIO()
    w = csv.writer(fh, lineterminator="\n")
    extra = sorted({k for r in rep.rows for k in r} - {"phi", "lhs", "rhs", "equal"})
    w.writerow(["phi", "lhs", "rhs", "equal"] + extra)
    for r in rep.rows:
        w.writerow([" ".join(map(str, r["phi"])), r["lhs"].format(), r["rhs"].format(),
                    r["equal"]] + [_csv_cell(r.get(k)) for k in extra])
    return fh.getvalue()


def _csv_cell(v):
    if hasattr(v, "format") and not isinstance(v, str):
        return v.format()
    return "" if v is None else str(v)


def _op_compute(case, ctx):
    cfg = _tconfig(case, ctx)
    variant = case.get("variant", "!")
    T = taut_star(cfg) if variant == "*" else taut_bang(cfg)
    checks = homogeneity_report(cfg)
    values = [{"phi": point_json(cfg.field, point_from_index(i, cfg.q, cfg.N)),
               "trace": _cyc_json(T.effective(i))} for i in range(T.npoints)]
    mismatches = _expected_mismatches(cfg, T, case.get("expect", {}).get("values", []))
    ok = all(c.ok for c in checks) and not mismatches
    report = {"config": cfg.describe(), "variant": variant, "shift": T.shift,
              "values": values, "checks": [c.to_json() for c in checks]}
    if "expect" in case:
        report["expect_mismatches"] = mismatches
    return {"ok": ok, "report": report}, T.to_csv()


def _expected_mismatches(cfg, T, expected):
    """Expected entries are {"phi": point, "trace": int | fraction string | cyclotomic JSON}."""
    bad = []
    for e in expected:
        if not isinstance(e, dict) or "phi" not in e or "trace" not in e:
            raise ConfigError("expect.values entries need phi and trace")
        pt = parse_point(cfg.field, e["phi"], cfg.N)
        want = e["trace"]
        try:
            want = CycNum.from_json(want) if isinstance(want, dict) else Fraction(want)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad expected trace {e['trace']!r}: {exc}") from None
        got = T.effective(point_index(pt, cfg.q))
        if got != want:
            bad.append({"phi": e["phi"], "expected": e["trace"], "got": _cyc_json(got)})
    return bad


def _op_gkz(case, ctx):
    F = parse_field(case.get("field"), ctx["fields"])
    W = case.get("W")
    if not isinstance(W, list) or not W:
        raise ConfigError("gkz case needs a weight matrix W")
    chis = [parse_mult(F, c) for c in case.get("chis", [0] * len(W))]
    psi = parse_psi(F, case.get("psi"))
    N = len(W[0])
    pts = case.get("points", "all")
    pts = None if pts == "all" else [parse_point(F, p, N) for p in pts]
    return _identity_result(gkz_check(F, W, chis, psi, pts, name=case["name"]))


def _op_hyp(case, ctx):
    cfg = _tconfig(case, ctx)
    sel = case.get("points", "all")
    if isinstance(sel, dict):
        rng = np.random.default_rng(sel.get("seed", 0))
        idx = rng.choice(cfg.q ** cfg.N, size=min(int(sel["random"]), cfg.q ** cfg.N), replace=False)
        pts = [point_from_index(int(i), cfg.q, cfg.N) for i in sorted(idx)]
    else:
        pts = _phis(cfg, sel)
    return _identity_result(hyp_check(cfg, pts, name=case["name"]))


def _op_remark(case, ctx):
    cfg = _tconfig(case, ctx)
    return _identity_result(remark_check(cfg, _phis(cfg, case.get("phis")),
                                         tuple(case.get("variants", ["*"]))))


def _op_verify(case, ctx):
    cfg = _tconfig(case, ctx)
    return _identity_result(verify_theorem(cfg, _phis(cfg, case.get("phis"))))


def _op_triangle(case, ctx):
    cfg = _tconfig(case, ctx)
    return _identity_result(triangle_check(cfg, _phis(cfg, case.get("phis"))))


def _op_weights(case, ctx):
    cfg = _tconfig(case, ctx)
    phi = parse_point(cfg.field, case.get("phi", [0] * cfg.N), cfg.N)
    mmax = int(ctx.get("mmax") or case.get("mmax", 3))
    tol = case.get("tolerance", ctx["tolerance"])
    scan = weight_scan(cfg, phi, mmax, tol)
    rows = [{"m": r["m"], "trace": _cyc_json(r["trace"]), "abs2": r["abs2"],
             "exponent": r["exponent"], "ok": r["ok"]} for r in scan["rows"]]
    csv_text = "m,abs2,exponent,bound,ok\n" + "".join(
        f"{r['m']},{r['abs2']:.12g},{'' if r['exponent'] is None else format(r['exponent'], '.12g')},"
        f"{scan['bound'] + tol:.12g},{r['ok']}\n" for r in scan["rows"])
    return ({"ok": scan["ok"], "report": {"bound": scan["bound"], "tolerance": tol, "rows": rows,
                                          "config": cfg.describe()}}, csv_text)


def _op_fourier_properties(case, ctx):
    F = parse_field(case.get("field", {"p": 3}), ctx["fields"])
    psi = parse_psi(F, case.get("psi"))
    rng = np.random.default_rng(case.get("seed", 0))
    dims = case.get("dims", [1, 2])
    samples = int(case.get("samples", 5))
    order = F.q - 1 if F.q > 2 else 2
    counts = {"inversion": 0, "plancherel": 0, "equivariance": 0, "kunneth": 0, "paths": 0}
    failures = []
    from .linalg import inverse, is_invertible, transpose
    for N in dims:
        for _ in range(samples):
            f = random_root_function(F, N, order, rng)
            h = random_root_function(F, N, order, rng)
            checks = {"inversion": fourier_inverse_check(f, psi).ok,
                      "plancherel": plancherel_check(f, h, psi).ok,
                      "paths": fourier(f, psi, path="factored") == fourier(f, psi, path="naive")}
            while True:
                A = tuple(tuple(int(a) for a in r) for r in rng.integers(0, F.q, (N, N)))
                if is_invertible(F, A):
                    break
            lhs = fourier(pullback_linear(f, A), psi)
            rhs = pullback_linear(fourier(f, psi), inverse(F, transpose(A)))
            checks["equivariance"] = lhs == rhs
            g = random_root_function(F, 1, order, rng)
            checks["kunneth"] = fourier(external_product(f, g), psi) == external_product(
                fourier(f, psi), fourier(g, psi))
            for k, v in checks.items():
                counts[k] += 1
                if not v:
                    failures.append({"property": k, "dim": N})
    return ({"ok": not failures, "report": {"field": F.descriptor(), "dims": dims,
                                            "checked": counts, "failures": failures}}, None)


def _op_homogeneity(case, ctx):
    cfg = _tconfig(case, ctx)
    checks = homogeneity_report(cfg)
    return ({"ok": all(c.ok for c in checks),
             "report": {"config": cfg.describe(), "checks": [c.to_json() for c in checks]}}, None)


_DISPATCH = {"compute": _op_compute, "gkz": _op_gkz, "hyp": _op_hyp, "remark": _op_remark,
             "verify": _op_verify, "triangle": _op_triangle, "weights": _op_weights,
             "fourier-properties": _op_fourier_properties, "homogeneity": _op_homogeneity}


def run_case(case, ctx):
    """Run one case; never raises for configuration or budget problems."""
    t0 = time.perf_counter()
    csv_text = None
    try:
        res, csv_text = _DISPATCH[case["op"]](case, ctx)
        res["status"] = "pass" if res["ok"] else "fail"
    except BudgetError as exc:
        res = {"ok": False, "status": "budget_error", "error": {"message": str(exc)}}
    except ConfigError as exc:
        res = {"ok": False, "status": "config_error",
               "error": {"message": str(exc), "witness": getattr(exc, "witness", None)}}
    res["name"] = case["name"]
    res["op"] = case["op"]
    return res, csv_text, time.perf_counter() - t0


def _run_case_star(args):
    return run_case(*args)


def exit_code(results):
    statuses = [r["status"] for r in results]
    if "config_error" in statuses:
        return EXIT_CONFIG
    if "budget_error" in statuses:
        return EXIT_BUDGET
    if "fail" in statuses:
        return EXIT_FAIL
    return EXIT_OK


def execute(doc, workers=None, mmax=None):
    """Run every case of a validated run config; returns (report, csv tables)."""
    # TAUT_BUDGET from the environment wins over the config's budget
    points = doc.get("budget", {}).get("points")
    if points is not None and not os.environ.get("TAUT_BUDGET"):
        os.environ["TAUT_BUDGET"] = str(points)
        try:
            return _execute(doc, workers, mmax)
        finally:
            del os.environ["TAUT_BUDGET"]
    return _execute(doc, workers, mmax)


def _execute(doc, workers, mmax):
    ctx = {"fields": doc.get("fields", {}), "configs": doc.get("configs", {}),
           "tolerance": doc.get("tolerance", 0.15), "mmax": mmax}
    cases = doc.get("cases", [])
    workers = workers or doc.get("workers", 1)
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_case_star, [(c, ctx) for c in cases]))
    else:
        outcomes = [run_case(c, ctx) for c in cases]
    results = [o[0] for o in outcomes]
    code = exit_code(results)
    report = {
        "name": doc.get("name", ""),
        "config": doc,
        "backend": _backend(),
        "cases": results,
        "summary": {"cases": len(results),
                    "passed": sum(r["status"] == "pass" for r in results),
                    "failed": sum(r["status"] == "fail" for r in results),
                    "errors": sum(r["status"].endswith("error") for r in results),
                    "exit_code": code},
        "timings": {r["name"]: round(o[2], 6) for r, o in zip(results, outcomes)},
    }
    tables = {r["name"]: o[1] for r, o in zip(results, outcomes) if o[1] is not None}
    return report, tables


def _backend():
    from . import kernels
    return kernels.BACKEND


def write_outputs(report, tables, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    # timings vary between runs; everything else is deterministic
    stable = {k: v for k, v in report.items() if k != "timings"}
    stable["backend"] = "n/a"
    with open(out / "report.json", "w") as fh:
        json.dump(stable, fh, sort_keys=True, indent=2)
        fh.write("\n")
    with open(out / "timings.json", "w") as fh:
        json.dump({"backend": report["backend"], "timings": report["timings"]}, fh,
                  sort_keys=True, indent=2)
        fh.write("\n")
    for name, text in tables.items():
        with open(out / f"{_safe(name)}.csv", "w") as fh:
            fh.write(text)


def _safe(name):
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


def _print_summary(report, stream=None):
    stream = stream or sys.stdout
    for r in report["cases"]:
        line = f"{r['status'].upper():13s} {r['name']} ({r['op']})"
        if r.get("error"):
            line += f": {r['error']['message']}"
        print(line, file=stream)
    s = report["summary"]
    print(f"{s['passed']}/{s['cases']} cases passed; exit code {s['exit_code']}", file=stream)


def _run_doc(doc, base_dir, out, workers=None, mmax=None, quiet=False):
    report, tables = execute(doc, workers=workers, mmax=mmax)
    out_dir = out or doc.get("out")
    if out_dir:
        out_path = Path(out_dir)
        if not out_path.is_absolute():
            out_path = Path(base_dir) / out_path
        write_outputs(report, tables, out_path)
    if not quiet:
        _print_summary(report)
    return report["summary"]["exit_code"]


def _single_case_doc(path, op):
    """A verb file holds one case (optionally with fields/configs alongside)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("case file must hold a JSON object")
    if "cases" in doc:
        cases = [c for c in doc["cases"] if c.get("op") == op]
        doc = dict(doc, cases=cases)
    else:
        shared = {k: doc.pop(k) for k in ("fields", "configs", "tolerance", "budget", "out")
                  if k in doc}
        case = dict(doc, op=op)
        case.setdefault("name", Path(path).stem)
        if op != "gkz" and op != "fourier-properties" and "config" not in case:
            cfg_keys = ("field", "group", "action", "v", "beta", "psi", "dimQ", "stabilizer",
                        "scaling", "proper", "pairing", "q_subgroup")
            cfg = {k: case.pop(k) for k in cfg_keys if k in case}
            case["config"] = cfg
        doc = dict(shared, cases=[case])
    return validate_run_config(doc)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="taut", description="Exact trace-function computations "
                                 "for tautological and hypergeometric exponential sums.")
    sub = ap.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("run", help="run every case of a config file")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--mmax", type=int)
    sub.add_parser("list", help="list bundled and user cases")
    p = sub.add_parser("verify", help="run a bundled or user case by name")
    p.add_argument("--case", required=True)
    p.add_argument("--out")
    for verb in ("compute", "gkz", "hyp", "triangle", "weights"):
        p = sub.add_parser(verb, help=f"run a single {verb} case file")
        p.add_argument("config")
        p.add_argument("--out")
        if verb == "weights":
            p.add_argument("--mmax", type=int)
    args = ap.parse_args(argv)
    try:
        if args.verb == "list":
            for name, desc, _ in list_cases():
                print(f"{name:22s} {desc}")
            return EXIT_OK
        if args.verb == "run":
            doc = load_run_config(args.config)
            return _run_doc(doc, Path(args.config).resolve().parent, args.out, mmax=args.mmax)
        if args.verb == "verify":
            path = find_case(args.case)
            doc = load_run_config(path)
            return _run_doc(doc, Path.cwd(), args.out)
        op = args.verb
        doc = _single_case_doc(args.config, op)
        if op == "weights" and args.mmax:
            for c in doc["cases"]:
                c["mmax"] = args.mmax
        return _run_doc(doc, Path(args.config).resolve().parent, args.out)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TautError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


__all__ = ["main", "list_cases", "execute", "run_case", "validate_run_config",
           "load_run_config", "exit_code"]


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``knead <command> [maps...] [options]``.

Maps are JSON files or names of bundled examples; with no maps the whole
bundled corpus is used.  Exit codes: 0 ok, 1 identity violation, 2 input
error, 3 lap budget exceeded.
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from fractions import Fraction
import io
import json
import numbers
import sys

from . import __version__
from .config import RunConfig
from .errors import InputError, KneadError, LapBudgetExceeded
from .finite_rank import selftest
from .kneading import kneading_matrices
from .mapfile import bundled_maps, load_map
from .spectra import (artin_mazur_oracle, correction_factor_H, entropy,
                      fix_counts, lap_statistics, zeta_lefschetz, zeta_minus)
from .verify import verify_map, verify_selftest

SCHEMA = "knead.report/1"
COMMANDS = ("check", "laps", "fix", "kneading", "zeta", "entropy", "verify",
            "appendix-selftest")
EXIT_OK, EXIT_IDENTITY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def exit_code_for(exc):
    if isinstance(exc, InputError):
        return EXIT_INPUT
    if isinstance(exc, LapBudgetExceeded):
        return EXIT_BUDGET
    return EXIT_IDENTITY


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Rational):
        return str(Fraction(int(x.numerator), int(x.denominator)))
    if isinstance(x, complex):
        return [x.real, x.imag]
    return str(x)


def _series(s, degree=None):
    s = s if degree is None else s.truncate(min(degree, s.degree))
    return s.to_strings()


# -- per-command workers -----------------------------------------------------

def run_check(defn, config):
    f = defn.induced_map()
    return {"valid": True, "laps_of_F": len(f.F.branches),
            "critical": [str(c) for c in f.F.critical], "graph": f.graph.summary(),
            "h0": f.h0_matrix(), "h1": f.h1_matrix()}


def run_laps(defn, config):
    f = defn.induced_map()
    st = lap_statistics(f.F, config.n_max, config.lap_budget)
    return {"rows": [{"n": n + 1, "laps": st.laps[n], "variation": st.variation[n],
                      "fix_neg_lift": st.fix_neg[n]} for n in range(config.n_max)]}


def run_fix(defn, config):
    f = defn.induced_map()
    counts = fix_counts(f, config.n_max, config.lap_budget)
    rows = counts.rows()
    try:
        fix = artin_mazur_oracle(f, config.n_max, config.lap_budget)
        oracle = {"fix": fix}
    except KneadError as exc:
        if isinstance(exc, LapBudgetExceeded):
            raise
        fix = [None] * config.n_max
        oracle = {"fix": None, "diagnostic": str(exc)}
    for row, v in zip(rows, fix):
        row["fix"] = v
    return {"rows": rows, "artin_mazur": oracle}


def run_kneading(defn, config):
    F = defn.pm_map()
    data = kneading_matrices(F, config.degree)
    return {"index": data.labels(), "degree": data.degree,
            "M": data.M.to_strings(), "N": data.N.to_strings(),
            "D": _series(data.D), "L": _series(data.L)}


def run_zeta(defn, config):
    f = defn.induced_map()
    N = config.degree
    data = kneading_matrices(f.F, N)
    counts = fix_counts(f, config.n_max, config.lap_budget, data=data, upto=N)
    zl = zeta_lefschetz(f, N)
    zm = zeta_minus(f, N, counts)
    zmt = zm / zl.series
    H = correction_factor_H(f, N, zmt, data.D, counts)
    return {"degree": N, "zeta_minus": _series(zm),
            "zeta_lefschetz": {"closed_form": zl.closed_form(),
                               "series": _series(zl.series),
                               "matches_trace_expansion": zl.consistent},
            "zeta_mt": _series(zmt), "H": _series(H.H),
            "zeta_mt_times_D_equals_H": H.identity_first_failure is None,
            "count_sources": {"laps": counts.source.count("laps"),
                              "traces": counts.source.count("traces")}}


def run_entropy(defn, config):
    return entropy(defn.induced_map(), config).as_dict()


def run_verify(defn, config):
    rep = verify_map(defn.induced_map(), config, defn.name)
    out = rep.as_dict()
    if not rep.ok:
        out["exit"] = EXIT_IDENTITY
    return out


WORKERS = {"check": run_check, "laps": run_laps, "fix": run_fix,
           "kneading": run_kneading, "zeta": run_zeta, "entropy": run_entropy,
           "verify": run_verify}


def run_one(command, source, config):
    """Run one command on one map; never raises library errors."""
    try:
        defn = load_map(source)
        body = WORKERS[command](defn, config)
        code = body.pop("exit", EXIT_OK) if isinstance(body, dict) else EXIT_OK
        return {"map": defn.name, "source": str(source), "ok": code == EXIT_OK,
                **_jsonable(body)}, code
    except KneadError as exc:
        diag = {"map": str(source), "source": str(source), "ok": False,
                "error": type(exc).__name__, "message": str(exc)}
        cause = getattr(exc, "cause", None)
        if cause is not None:
            diag["cause"] = type(cause).__name__
        for attr in ("line", "column", "field"):
            if getattr(exc, attr, None) is not None:
                diag[attr] = getattr(exc, attr)
        return diag, exit_code_for(exc)


def _worker(args):
    return run_one(*args)


def _config_block(config):
    """Run settings in the report; parallelism is left out so reports do not
    depend on it."""
    d = config.as_dict()
    d.pop("jobs")
    return d


def run(command, sources, config):
    """Report dictionary and exit code; results keep the input order."""
    if command == "appendix-selftest":
        results = selftest(50, config.seed, 10, 32)
        rows = [{"pair": r.index, "traces_ok": r.traces_ok,
                 "duality_ok": r.duality_ok, "first_failure": r.first_failure}
                for r in results]
        ok = all(r.traces_ok and r.duality_ok for r in results)
        report = {"schema": SCHEMA, "version": __version__, "command": command,
                  "config": _config_block(config), "results": rows, "ok": ok}
        return report, EXIT_OK if ok else EXIT_IDENTITY
    jobs = [(command, s, config) for s in sources]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(_worker, jobs))
    else:
        outcomes = [_worker(j) for j in jobs]
    results = [r for r, _ in outcomes]
    codes = [c for _, c in outcomes]
    report = {"schema": SCHEMA, "version": __version__, "command": command,
              "config": _config_block(config), "results": results}
    if command == "verify":
        st = verify_selftest(config)
        report["appendix_selftest"] = st.as_dict()
        if not st.ok:
            codes.append(EXIT_IDENTITY)
    report["ok"] = not any(codes)
    return report, max(codes, default=EXIT_OK)


# -- output formats -----------------------------------------------------------

def _flatten(prefix, x, out):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(x, list) and x and all(isinstance(v, dict) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, json.dumps(x) if isinstance(x, list) else x))


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        rows_mode = all("rows" in r for r in report.get("results", []) if isinstance(r, dict)) \
            and report.get("results")
        if rows_mode:
            header = ["map"] + list(report["results"][0]["rows"][0])
            w.writerow(header)
            for r in report["results"]:
                for row in r.get("rows", []):
                    w.writerow([r["map"]] + [row.get(k) for k in header[1:]])
        else:
            w.writerow(["key", "value"])
            flat = []
            _flatten("", report, flat)
            w.writerows(flat)
        return buf.getvalue()
    flat = []
    _flatten("", report, flat)
    width = max((len(k) for k, _ in flat), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in flat)


def build_parser():
    p = argparse.ArgumentParser(
        prog="knead",
        description="Kneading determinants, zeta functions and entropy of "
                    "piecewise monotone graph maps, with exact identity checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("maps", nargs="*",
                   help="map files (JSON) or bundled example names; default: all bundled")
    d = RunConfig()
    p.add_argument("--degree", type=int, default=d.degree, help="series truncation degree N")
    p.add_argument("--max-iter", "--n", dest="n_max", type=int, default=d.n_max,
                   help="largest iterate enumerated by laps")
    p.add_argument("--tolerance", type=float, default=d.root_tolerance,
                   help="tolerance for root-based entropy values")
    p.add_argument("--fit-tolerance", type=float, default=d.fit_tolerance,
                   help="tolerance for growth-rate fits")
    p.add_argument("--budget", type=int, default=d.lap_budget, help="lap budget per iterate")
    p.add_argument("--format", choices=("json", "csv", "text"), default=d.format)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--jobs", type=int, default=d.jobs, help="parallel map workers")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(degree=args.degree, n_max=args.n_max, lap_budget=args.budget,
                           root_tolerance=args.tolerance,
                           fit_tolerance=args.fit_tolerance, format=args.format,
                           jobs=args.jobs, seed=args.seed)
    except ValueError as exc:
        print(f"knead: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sources = args.maps or list(bundled_maps())
    report, code = run(args.command, sources, config)
    text = render(report, config.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``morcamp <command> [options]``.

Commands: check, target, domain-norm, table, witness, selftest.  Reports
are JSON documents with every number written as a decimal string, or CSV
with 17 significant digits.  Exit codes for ``check``: 0 holds, 1 fails,
2 inconclusive; 64 is a usage error for every command.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Optional

import numpy as np

from . import asymptotics as AS
from . import criteria as CR
from . import witnesses as W
from .core import InvalidInput, rearrange
from .specs import SpecError, parse_space, parse_weight

EXIT_HOLDS, EXIT_FAILS, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
VERDICT_CODES = {"holds": EXIT_HOLDS, "fails": EXIT_FAILS,
                 "inconclusive": EXIT_INCONCLUSIVE}
CONFIG_KEYS = {"space", "weight", "n", "m", "k", "grid_eps", "grid_density",
               "window", "format", "seed", "only", "vanishing",
               "critical_form", "profile", "r", "kind"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dec(x) -> str:
    return CR._dec(x)


def _g17(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return _dec(x)
    return format(x, ".17g")


# ------------------------------------------------------------------ config


def _window(text: str):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--window expects lo:hi, got {text!r}")
    return lo, hi


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}")
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(doc) - CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return doc


def _merge(args, config: dict):
    for key, value in config.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _grid(args):
    eps = CR.GRID_EPS if args.grid_eps is None else float(args.grid_eps)
    dens = CR.GRID_DENSITY if args.grid_density is None \
        else int(args.grid_density)
    return CR.criterion_grid(eps, dens)


def _fit_window(args):
    if args.window is None:
        return AS.FIT_WINDOW
    return args.window if isinstance(args.window, tuple) else \
        _window(str(args.window))


# ---------------------------------------------------------------- emitters


def _emit_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _emit_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else _g17(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def cmd_check(args):
    _need(args, "space", "weight", "n", "m")
    X = parse_space(args.space)
    phi = parse_weight(args.weight)
    n, m = int(args.n), int(args.m)
    grid = _grid(args)
    if args.k is None:
        rep = CR.check_morrey(X, n, m, phi, grid=grid,
                              vanishing=bool(args.vanishing))
    else:
        rep = CR.check_campanato(X, n, m, int(args.k), phi, grid=grid,
                                 vanishing=bool(args.vanishing),
                                 critical_form=args.critical_form or
                                 "standard")
    code = VERDICT_CODES[rep.verdict]
    if args.format == "csv":
        return _emit_csv(["r", "value"], zip(rep.r, rep.values)), code
    return _emit_json(rep.to_dict()), code


def _matching_row(kind, X, n, m, k):
    """Table row for the same family and case branch, re-targeted to the
    requested parameters (expected exponents recomputed for them)."""
    if X.family not in ("lebesgue", "zygmund"):
        return None
    fam = X.family + "-" + kind
    alpha = X.alpha if X.family == "zygmund" else None
    try:
        expected, case = AS.expected_exponents(
            fam, n, m, k, Fraction(X.p).limit_denominator(1000),
            None if alpha is None else Fraction(alpha).limit_denominator(1000))
    except (InvalidInput, ZeroDivisionError):
        return None
    for row in AS.load_table().rows:
        if row.family == fam and row.case == case:
            return replace(row, n=n, m=m, k=k,
                           p=Fraction(X.p).limit_denominator(1000),
                           alpha=None if alpha is None else
                           Fraction(alpha).limit_denominator(1000),
                           expected=expected)
    return None


def cmd_target(args):
    _need(args, "kind", "space", "n", "m")
    X = parse_space(args.space)
    n, m = int(args.n), int(args.m)
    window = _fit_window(args)
    r = _grid(args)
    if args.kind == "morrey":
        phi = CR.optimal_morrey_target(X, n, m, grid=r)
        k = None
    elif args.kind == "campanato":
        _need(args, "k")
        k = int(args.k)
        phi = CR.optimal_campanato_target(X, n, m, k, grid=r)
    else:
        raise UsageError("target kind must be morrey or campanato")
    rs, vals = phi.samples
    fit = AS.fit_log_power(np.column_stack((rs, vals)), window)
    row = _matching_row(args.kind, X, n, m, k)
    match = None
    if row is not None:
        res = AS.verify_corollary(row, np.column_stack((rs, vals)), window)
        match = {"key": row.key, "status": res.status,
                 "expected": [_dec(x) for x in res.expected],
                 "deltas": [_dec(x) for x in res.deltas]}
    if args.format == "csv":
        return _emit_csv(["r", "phi", "fit_residual"],
                         [(a, b, fit.residual) for a, b in zip(rs, vals)]), 0
    doc = {"target": args.kind, "params": {"space": X.spec, "n": str(n),
                                           "m": str(m),
                                           **({"k": str(k)} if k is not None
                                              else {})},
           "samples": [[_dec(a), _dec(b)] for a, b in zip(rs, vals)],
           "fit": _fit_doc(fit), "table_row": match}
    return _emit_json(doc), 0


def _fit_doc(fit: AS.LogPowerFit):
    return {"a": _dec(fit.a), "b": _dec(fit.b), "c": _dec(fit.c),
            "residual": _dec(fit.residual),
            "window": [_dec(fit.window[0]), _dec(fit.window[1])],
            "regressors": list(fit.regressors), "pinned": fit.pinned}


def _profile(text):
    try:
        pairs = [tuple(float(x) for x in item.split("/"))
                 for item in str(text).split(",")]
        return rearrange(pairs)
    except (ValueError, InvalidInput) as exc:
        raise UsageError(f"bad --profile {text!r}: {exc}")


def cmd_domain_norm(args):
    _need(args, "kind", "weight", "n", "profile")
    phi = parse_weight(args.weight)
    f = _profile(args.profile)
    n = int(args.n)
    if args.kind == "marcinkiewicz":
        val = CR.marcinkiewicz_norm(phi, n, f)
    elif args.kind == "morrey":
        _need(args, "m")
        val = CR.optimal_morrey_domain_norm(phi, n, int(args.m), f)
    elif args.kind == "campanato":
        _need(args, "m", "k")
        val = CR.optimal_campanato_domain_norm(phi, n, int(args.m),
                                               int(args.k), f)
    else:
        raise UsageError("domain-norm kind must be morrey, campanato or "
                         "marcinkiewicz")
    if args.format == "csv":
        return _emit_csv(["kind", "value"], [(args.kind, val)]), 0
    return _emit_json({"domain_norm": args.kind, "weight": phi.spec,
                       "n": str(n), "value": _dec(val)}), 0


def run_table(only=None, window=AS.FIT_WINDOW):
    out = []
    for row in AS.load_table().select(only):
        out.append((row, AS.run_row(row, window)))
    return out


def cmd_table(args):
    results = run_table(args.only, _fit_window(args))
    bad = [res for _, res in results if res.status == "fail"]
    code = EXIT_FAILS if bad else 0
    if args.format == "csv":
        rows = []
        for row, res in results:
            f = res.fit
            rows.append((row.key, res.status, f.a, f.b, f.c,
                         *res.expected, f.residual))
        return _emit_csv(["key", "status", "a", "b", "c", "a_expected",
                          "b_expected", "c_expected", "residual"], rows), code
    doc = {"table": AS.TABLE_FILE, "rows": []}
    for row, res in results:
        doc["rows"].append({
            "key": row.key, "family": row.family, "case": row.case,
            "tag": row.tag, "status": res.status, "reason": res.reason,
            "expected": [_dec(x) for x in res.expected],
            "fit": _fit_doc(res.fit),
            "deltas": [_dec(x) for x in res.deltas]})
    doc["summary"] = {s: sum(1 for _, r in results if r.status == s)
                      for s in ("pass", "fail", "inconclusive")}
    return _emit_json(doc), code


def cmd_witness(args):
    _need(args, "space", "weight", "n", "m")
    X = parse_space(args.space)
    phi = parse_weight(args.weight)
    n, m = int(args.n), int(args.m)
    levels = [1e-8, 1e-6, 1e-4, 1e-2, 0.1] if args.r is None else \
        [float(x) for x in str(args.r).split(",")]
    rows = W.morrey_lower_witness(X, n, m, phi, levels)
    prof = _profile(args.profile or "4/0.05,2/0.2,1/0.75")
    u = W.RadialProfile(prof)
    radial = W.radial_morrey_norm(u, phi, n)
    marc = W.marcinkiewicz_of_profile(u, phi, n)
    if args.format == "csv":
        return _emit_csv(["t", "witness", "kernel", "lower", "ratio"],
                         [(w.t, w.witness, w.kernel, w.lower, w.ratio)
                          for w in rows]), 0
    doc = {"witness": {"space": X.spec, "weight": phi.spec, "n": str(n),
                       "m": str(m)},
           "extremal": [{"t": _dec(w.t), "witness": _dec(w.witness),
                         "kernel": _dec(w.kernel), "lower": _dec(w.lower),
                         "ratio": _dec(w.ratio), "best": w.best}
                        for w in rows],
           "lower_constant": _dec(2.0 ** (-m)),
           "upper_constant": _dec(W.UPPER_CONSTANT),
           "radial": {"morrey": _dec(radial), "marcinkiewicz": _dec(marc)}}
    return _emit_json(doc), 0


SELFTEST_CASES = (
    ["check", "--space", "L:2", "--n", "3", "--m", "1", "--weight", "pow:-0.5"],
    ["check", "--space", "L:2", "--n", "3", "--m", "1", "--weight", "pow:0"],
    ["check", "--space", "Linf", "--n", "2", "--m", "2", "--weight", "one"],
    ["check", "--space", "L:2", "--n", "3", "--m", "1", "--weight",
     "pow:-0.75", "--vanishing"],
    ["check", "--space", "L:3", "--n", "3", "--m", "1", "--k", "0",
     "--weight", "one"],
    ["check", "--space", "Lw:1.5", "--n", "3", "--m", "2", "--k", "0",
     "--weight", "one"],
    ["target", "morrey", "--space", "L:1", "--n", "3", "--m", "1"],
    ["target", "campanato", "--space", "L:4", "--n", "2", "--m", "1", "--k",
     "0"],
    ["target", "morrey", "--space", "Zyg:2:1", "--n", "2", "--m", "1"],
    ["domain-norm", "marcinkiewicz", "--weight", "pow:-1", "--n", "2",
     "--profile", "3/0.1,1/0.4,0.5/0.5"],
    ["witness", "--space", "L:2", "--n", "3", "--m", "1", "--weight",
     "pow:-0.5"],
    ["table"],
)


def _selftest_once(seed: int) -> str:
    rng = np.random.default_rng(seed)
    parts = [f"seed {seed}\n"]
    for argv in SELFTEST_CASES:
        out, code = _dispatch(list(argv))
        parts.append(f"$ {' '.join(argv)}\nexit {code}\n{out}")
    # a seeded batch of random profiles through the domain functionals
    for _ in range(5):
        vals = np.sort(rng.uniform(0.0, 5.0, 6))[::-1]
        meas = rng.dirichlet(np.ones(6))
        f = rearrange(list(zip(vals, meas)))
        parts.append(_g17(CR.optimal_morrey_domain_norm(
            CR.Weight.power(0.0), 3, 1, f)) + "\n")
    return "".join(parts)


def cmd_selftest(args):
    seed = 20240601 if args.seed is None else int(args.seed)
    first = _selftest_once(seed)
    second = _selftest_once(seed)
    same = first == second
    head = (f"selftest seed={seed} runs=2 bytes={len(first)} "
            f"identical={'yes' if same else 'no'}\n")
    return head + first, 0 if same else EXIT_FAILS


COMMANDS = {"check": cmd_check, "target": cmd_target,
            "domain-norm": cmd_domain_norm, "table": cmd_table,
            "witness": cmd_witness, "selftest": cmd_selftest}


def build_parser():
    p = _Parser(prog="morcamp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config")
        sp.add_argument("--format", choices=("json", "csv"))
        sp.add_argument("--grid-eps", type=float, dest="grid_eps")
        sp.add_argument("--grid-density", type=int, dest="grid_density")
        sp.add_argument("--window", type=_window)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--space")
        sp.add_argument("--weight")
        sp.add_argument("--n", type=int)
        sp.add_argument("--m", type=int)
        sp.add_argument("--k", type=int)
        return sp

    common(sub.add_parser("check")).add_argument(
        "--vanishing", action="store_true", default=None)
    sub.choices["check"].add_argument(
        "--critical-form", choices=("standard", "small-ball"),
        dest="critical_form")
    common(sub.add_parser("target")).add_argument(
        "kind", nargs="?", choices=("morrey", "campanato"))
    common(sub.add_parser("domain-norm")).add_argument(
        "kind", nargs="?", choices=("morrey", "campanato", "marcinkiewicz"))
    sub.choices["domain-norm"].add_argument("--profile")
    common(sub.add_parser("table")).add_argument("--only")
    common(sub.add_parser("witness")).add_argument("--r")
    sub.choices["witness"].add_argument("--profile")
    common(sub.add_parser("selftest"))
    return p


_DEFAULTS = ("vanishing", "critical_form", "only", "profile", "r", "kind")


def _dispatch(argv):
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError("missing command")
    for name in _DEFAULTS:
        if not hasattr(args, name):
            setattr(args, name, None)
    _merge(args, _load_config(args.config))
    if args.format is None:
        args.format = "json"
    if args.format not in ("json", "csv"):
        raise UsageError("--format must be json or csv")
    if isinstance(args.window, str):
        args.window = _window(args.window)
    return COMMANDS[args.command](args)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        out, code = _dispatch(list(argv))
    except (UsageError, SpecError) as exc:
        sys.stderr.write(f"morcamp: usage error: {exc}\n")
        return EXIT_USAGE
    except InvalidInput as exc:
        sys.stderr.write(f"morcamp: invalid input: {exc}\n")
        return EXIT_USAGE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())

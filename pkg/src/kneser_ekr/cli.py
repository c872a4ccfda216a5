"""Command-line front end: ``kneser-ekr <command> [flags]``.

Exit status: 0 success, 1 a theorem-backed check failed, 2 usage or I/O
error, 3 a size or time budget was exhausted.
"""

from __future__ import annotations

import argparse
import math
import os
import random
import sys
import time

from . import bounds as bl
from .combinatorics import binomial
from .errors import DomainError, ResourceError
from .johnson import check_alon_milman, log_sobolev_ratio, spectrum_report
from .kneser import SearchLimits, kneser_params, near_star_candidate_count
from .montecarlo import estimate_pc, format_trend, near_star_rate, pc_trend_report, wilson_interval
from .report import build_report, emit_report

COMMANDS = ("params", "spectrum", "verify-identities", "verify-bounds", "theta-scan",
            "union-bound", "estimate-pc", "trend", "near-star")

# flag name -> (type, default)
FIELDS = {
    "n": (int, 5), "k": (int, 2), "m": (int, None), "c": (int, None),
    "p": (float, 0.9), "theta": (float, 0.05), "gamma": (float, 0.3),
    "epsilon": (float, 0.01), "bigC": (float, 100.0), "zeta": (float, None),
    "bigK": (float, 1.0), "trials": (int, 1000), "seed": (int, 0), "tol": (float, 0.01),
    "time-budget": (float, None), "output": (str, "-"), "format": (str, "json"),
}
EXHAUSTIVE_FAMILY_LIMIT = 10**5
SLACK = bl.THEOREM_SLACK


class UsageError(Exception):
    pass


def read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-")
        if key not in FIELDS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _convert(key: str, raw):
    typ, _ = FIELDS[key]
    if raw is None or raw == "None" or raw == "":
        return None
    try:
        return typ(raw)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kneser-ekr", description=__doc__.splitlines()[0],
                                     allow_abbrev=False)
    parser.add_argument("command", choices=COMMANDS)
    for key in FIELDS:
        parser.add_argument(f"--{key}", dest=key.replace("-", "_"), default=None)
    parser.add_argument("--config", default=None, help="flat key=value file")
    return parser


def resolve_config(ns: argparse.Namespace) -> dict:
    cfg = {key: default for key, (_, default) in FIELDS.items()}
    if os.environ.get("EKR_SEED"):
        cfg["seed"] = _convert("seed", os.environ["EKR_SEED"])
    if ns.config:
        for key, raw in read_config_file(ns.config).items():
            cfg[key] = _convert(key, raw)
    for key in FIELDS:
        raw = getattr(ns, key.replace("-", "_"))
        if raw is not None:
            cfg[key] = _convert(key, raw)
    if cfg["format"] not in ("json", "csv", "text"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    return cfg


def _bound_config(cfg: dict) -> bl.BoundConfig:
    return bl.BoundConfig(theta=cfg["theta"], gamma=cfg["gamma"], epsilon=cfg["epsilon"],
                          bigC=cfg["bigC"], bigK=cfg["bigK"], zeta=cfg["zeta"])


def _families(params, cfg):
    """Every non-star M-family when that is small enough, otherwise random ones."""
    total = binomial(params.vertex_count, params.M)
    if total <= EXHAUSTIVE_FAMILY_LIMIT:
        return bl.iter_nonstar_families(params), "exhaustive"
    rng = random.Random(cfg["seed"])
    return (bl.random_nonstar_family(params, rng) for _ in range(cfg["trials"])), "sampled"


# ---------------------------------------------------------------------------
# suites: each returns (rows, failures)

def cmd_params(cfg):
    P = kneser_params(cfg["n"], cfg["k"])
    return [{"n": P.n, "k": P.k, "c": P.c, "m": P.m, "M": P.M, "N": P.N,
             "vertex_count": P.vertex_count, "p0": P.p_zero}], []


def cmd_spectrum(cfg):
    m = cfg["m"] if cfg["m"] is not None else cfg["n"] - 1
    c = cfg["c"] if cfg["c"] is not None else max(1, cfg["n"] - 2 * cfg["k"])
    rep = spectrum_report(m, cfg["k"], c)
    rows = []
    for j, (lam, mult, res) in enumerate(zip(rep.formula_eigenvalues, rep.multiplicities, rep.residuals)):
        rows.append({"j": j, "eigenvalue": lam, "multiplicity": mult, "residual": res,
                     "S": list(rep.s_table[j])})
    rows.append({"j": "gap", "formula": rep.laplacian_gap_formula, "numeric": rep.laplacian_gap_numeric,
                 "proven_regime": rep.proven_regime, "numeric_spectrum": list(rep.numeric_eigenvalues)})
    failures = []
    if rep.multiset_error > 1e-8:
        failures.append(f"formula spectrum differs from dense solve by {rep.multiset_error:.3g}")
    if rep.proven_regime and abs(rep.laplacian_gap_formula - rep.laplacian_gap_numeric) > 1e-8:
        failures.append("gap formula disagrees with numeric gap in the proven regime")
    return rows, failures


def cmd_verify_identities(cfg):
    P = kneser_params(cfg["n"], cfg["k"])
    fams, how = _families(P, cfg)
    stats = {name: [0, 0, 0] for name in ("mo1", "gle", "mo2")}   # checked, nonzero, max |r|
    for F in fams:
        ctx = bl.apex_context(F, P)
        for name, r in (("mo1", bl.verify_mo1(ctx)), ("gle", bl.verify_gle(ctx)),
                        ("mo2", bl.verify_mo2(P.m, P.k, P.c, ctx.A))):
            s = stats[name]
            s[0] += 1
            if r:
                s[1] += 1
                s[2] = max(s[2], abs(r))
    rows = [{"identity": k, "families": how, "checked": v[0], "nonzero": v[1], "max_abs_residual": v[2]}
            for k, v in stats.items()]
    failures = [f"{r['identity']}: {r['nonzero']} nonzero residuals" for r in rows if r["nonzero"]]
    return rows, failures


def cmd_verify_bounds(cfg):
    P = kneser_params(cfg["n"], cfg["k"])
    bc = _bound_config(cfg)
    fams, how = _families(P, cfg)
    names = ("mainobs", "mainobs2-term1", "mainobs2-term2", "alon-milman", "das-tran")
    stats = {k: {"check": k, "families": how, "checked": 0, "violations": 0, "min_margin": math.inf}
             for k in names}

    def record(name, margin, theorem=True):
        s = stats[name]
        s["checked"] += 1
        s["min_margin"] = min(s["min_margin"], margin)
        if theorem and margin < -SLACK:
            s["violations"] += 1

    for F in fams:
        ctx = bl.apex_context(F, P)
        lam = bl.lambda_count(ctx.A, ctx.B_bar)
        record("mainobs", float(lam - bl.betaprop_bound(ctx)))
        terms = bl.mainobs2_bound(ctx, bc)
        record("mainobs2-term1", F.internal_edges - terms.term1)
        if bc.gamma <= log_sobolev_ratio(P.m, P.k, ctx.A):
            record("mainobs2-term2", F.internal_edges - terms.term2)
        am = check_alon_milman(P.m, P.k, P.c, ctx.A)
        record("alon-milman", am.margin)
        dt = bl.dt_bound(P, bc, F)
        if dt.applicable:
            record("das-tran", F.internal_edges - dt.bound, theorem=False)
            if not dt.holds:
                stats["das-tran"]["violations"] += 1
    rows = list(stats.values())
    failures = [f"{r['check']}: {r['violations']} violations" for r in rows if r["violations"]]
    return rows, failures


def cmd_theta_scan(cfg):
    P = kneser_params(cfg["n"], cfg["k"])
    if binomial(P.vertex_count, P.M) <= EXHAUSTIVE_FAMILY_LIMIT:
        scan = bl.exhaustive_theta(P)
    else:
        scan = bl.sampled_theta(P, cfg["trials"], cfg["seed"])
    failures = []
    if not scan.theta_star > 0:
        failures.append("minimum ratio is not positive")
    if scan.min_edges < 1:
        failures.append("a non-star M-family has no internal edge")
    return [{"n": P.n, "k": P.k, "theta_star": scan.theta_star, "families": scan.families,
             "exhaustive": scan.exhaustive, "min_edges": scan.min_edges,
             "argmin": [list(s.elements) for s in scan.argmin.sorted_members()],
             "argmin_a_F": scan.argmin.a_F}], failures


def cmd_union_bound(cfg):
    P = kneser_params(cfg["n"], cfg["k"])
    bc = _bound_config(cfg)
    value = bl.union_bound_value(P, cfg["p"], bc)
    eps_max, c_min = bl.sufficient_constants(bc.theta)
    return [{"n": P.n, "k": P.k, "p": cfg["p"], "xi": bc.xi_for(P, cfg["p"]), "theta": bc.theta,
             "value": value, "a_max": P.max_a, "epsilon_sufficient_below": eps_max,
             "C_sufficient_above": c_min}], []


def _limits(cfg):
    return SearchLimits(time_budget=cfg["time-budget"]) if cfg["time-budget"] else None


def cmd_estimate_pc(cfg):
    P = kneser_params(cfg["n"], cfg["k"])
    est = estimate_pc(P, cfg["trials"], cfg["tol"], cfg["seed"], budget=_limits(cfg))
    if est.timed_out:
        raise ResourceError(f"{est.timed_out} trial searches timed out")
    rows = [{"probe_p": p, "pr_ekr": f} for p, f in est.probes]
    rows.append({"p_hat": est.p_hat, "p_lo": est.bracket[0], "p_hi": est.bracket[1],
                 "pr_at_p_hat": est.pr_at_p_hat, "wilson_lo": est.wilson_ci[0],
                 "wilson_hi": est.wilson_ci[1], "p0_reference": est.p0_reference,
                 "trials": est.trials_used})
    return rows, []


def cmd_trend(cfg):
    ks = list(range(2, max(2, cfg["k"]) + 1))
    rows = pc_trend_report(ks, cfg["trials"], cfg["tol"], cfg["seed"])
    print(format_trend(rows), file=sys.stderr)
    return rows, []


def cmd_near_star(cfg):
    P = kneser_params(cfg["n"], cfg["k"])
    rate = near_star_rate(P, cfg["p"], cfg["trials"], cfg["seed"])
    lo, hi = wilson_interval(round(rate * cfg["trials"]), cfg["trials"])
    return [{"n": P.n, "k": P.k, "p": cfg["p"], "trials": cfg["trials"], "rate": rate,
             "wilson_lo": lo, "wilson_hi": hi, "candidates": near_star_candidate_count(P)}], []


SUITES = {
    "params": cmd_params, "spectrum": cmd_spectrum, "verify-identities": cmd_verify_identities,
    "verify-bounds": cmd_verify_bounds, "theta-scan": cmd_theta_scan,
    "union-bound": cmd_union_bound, "estimate-pc": cmd_estimate_pc, "trend": cmd_trend,
    "near-star": cmd_near_star,
}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = resolve_config(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        rows, failures = SUITES[ns.command](cfg)
    except ResourceError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = build_report(ns.command, cfg, rows, failures, time.perf_counter() - t0)
    try:
        emit_report(report, cfg["format"], cfg["output"])
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2
    for f in failures:
        print(f"FAIL: {f}", file=sys.stderr)
    return 1 if failures else 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()

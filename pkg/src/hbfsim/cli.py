"""Command-line front end: figure data, sweeps, simulations, decisions.

Every command is deterministic given its flags and seed; data goes to stdout
(or the --out file) as CSV with a reproducibility header line, diagnostics go
to stderr, and the exit code is 0 exactly when no error occurred.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from dataclasses import dataclass

import numpy as np
import yaml

from . import __version__
from .closed_form import (a_quantity, eta_f, full_multiplexing_ratio,
                          invert_eta_f, proposition1, proposition2,
                          ratio_approx, ratio_exact_common_gap)
from .monte_carlo import SimulationPlan, run
from .precoding import RankDeficiencyError
from .scenario import ScenarioConfig, config_digest, validate
from .closed_form import g_full, g_partial

__all__ = ["SweepResult", "main", "load_scenario", "write_csv",
           "cmd_fig2", "cmd_fig3", "cmd_fig4", "cmd_fig5",
           "cmd_simulate", "cmd_decide", "cmd_sweep"]

D_DEFAULT = 0.5

# Sweep grids for the figure commands (kappa = normalized angle separation).
FIG2_MS = (4, 8, 16, 32)
FIG2_KAPPAS = np.arange(0.02, 7.99, 0.02)       # kappa = 8 excluded: the M=4
                                                # partial gain vanishes there
FIG3_LBS = (2, 4, 8, 16)
FIG3_KAPPAS = np.arange(0.01, 4.0001, 0.01)
FIG4_LBS = (16, 32, 128)
FIG4_ETAS = np.arange(-0.21, 0.9901, 0.01)
FIG5_KS = (8, 16)
FIG5_LBS = 16
FIG5_KAPPAS = np.arange(0.2, 4.0001, 0.01)
M_P_FIGS = 16                                    # subarray size in figs 3-5


@dataclass
class SweepResult:
    """Ordered sweep rows plus the reproducibility metadata header."""

    meta: dict          # scenario, seed, version
    columns: list
    rows: list


def _params_digest(**params) -> str:
    canon = ";".join(f"{k}={params[k]!r}" for k in sorted(params))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def write_csv(result: SweepResult, out: str | None) -> None:
    lines = [f"# scenario={result.meta['scenario']} seed={result.meta['seed']} "
             f"version={result.meta['version']}"]
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _meta(seed: int, **params) -> dict:
    return {"scenario": _params_digest(**params), "seed": seed,
            "version": __version__}


def cmd_fig2(seed: int = 0) -> SweepResult:
    """Exact gain ratio vs kappa for K = l_bs = 2 and M in {4, 8, 16, 32}."""
    columns = ["kappa"] + [f"ratio_M{m}" for m in FIG2_MS]
    rows = []
    for kappa in FIG2_KAPPAS:
        row = [kappa]
        for m in FIG2_MS:
            row.append(ratio_exact_common_gap(m, 2, D_DEFAULT, 2, float(kappa))[0])
        rows.append(tuple(row))
    return SweepResult(_meta(seed, fig=2, ms=FIG2_MS, d=D_DEFAULT), columns, rows)


def cmd_fig3(seed: int = 0) -> SweepResult:
    """Exact vs simplified-approximation ratio over kappa, K = l_bs, M_P = 16."""
    columns = ["kappa"]
    for l_bs in FIG3_LBS:
        columns += [f"exact_lbs{l_bs}", f"approx_lbs{l_bs}"]
    rows = []
    for kappa in FIG3_KAPPAS:
        row = [kappa]
        for l_bs in FIG3_LBS:
            m = M_P_FIGS * l_bs
            row.append(ratio_exact_common_gap(m, l_bs, D_DEFAULT, l_bs,
                                              float(kappa))[0])
            row.append(ratio_approx(float(kappa), D_DEFAULT, l_bs, l_bs,
                                    "simplified")[0])
        rows.append(tuple(row))
    return SweepResult(_meta(seed, fig=3, lbs=FIG3_LBS, m_p=M_P_FIGS,
                             d=D_DEFAULT), columns, rows)


def cmd_fig4(seed: int = 0) -> SweepResult:
    """Exact vs full-multiplexing approximation as a function of eta_f.

    The exact column inverts eta_f back to kappa on the first monotone
    branch of the sinc (d kappa in (0, 1.43), covering eta_f down to -0.217);
    the approximate column evaluates the eta-parameterized ratio directly.
    """
    columns = ["eta_f"]
    for l_bs in FIG4_LBS:
        columns += [f"exact_lbs{l_bs}", f"approx_lbs{l_bs}"]
    rows = []
    for eta in FIG4_ETAS:
        row = [eta]
        kappa = invert_eta_f(float(eta), D_DEFAULT) if eta != 1.0 else 0.0
        for l_bs in FIG4_LBS:
            m = M_P_FIGS * l_bs
            row.append(ratio_exact_common_gap(m, l_bs, D_DEFAULT, l_bs, kappa)[0])
            row.append(full_multiplexing_ratio(float(eta), l_bs))
        rows.append(tuple(row))
    return SweepResult(_meta(seed, fig=4, lbs=FIG4_LBS, m_p=M_P_FIGS,
                             d=D_DEFAULT), columns, rows)


def cmd_fig5(seed: int = 0) -> SweepResult:
    """Exact vs loading-ratio approximation, reported against A.

    Grids kappa and emits the regime quantity A alongside both ratios for
    K = 8 and K = 16 at l_bs = 16 (rho = 0.5 and 1).
    """
    columns = ["kappa"]
    for k_ues in FIG5_KS:
        columns += [f"A_K{k_ues}", f"exact_K{k_ues}", f"approx_K{k_ues}"]
    m = M_P_FIGS * FIG5_LBS
    rows = []
    for kappa in FIG5_KAPPAS:
        row = [kappa]
        for k_ues in FIG5_KS:
            rho = k_ues / FIG5_LBS
            ef = float(eta_f(float(kappa), D_DEFAULT))
            row.append(a_quantity(float(kappa), D_DEFAULT, rho, ef))
            row.append(ratio_exact_common_gap(m, FIG5_LBS, D_DEFAULT, k_ues,
                                              float(kappa))[0])
            row.append(ratio_approx(float(kappa), D_DEFAULT, k_ues, FIG5_LBS,
                                    "general_K")[0])
        rows.append(tuple(row))
    return SweepResult(_meta(seed, fig=5, ks=FIG5_KS, l_bs=FIG5_LBS,
                             m_p=M_P_FIGS, d=D_DEFAULT), columns, rows)


_SCENARIO_KEYS = {"M", "l_bs", "K", "d", "P_t", "noise_var",
                  "ue_angles", "spreads", "num_paths", "pathloss"}
_REQUIRED_KEYS = {"M", "l_bs", "K", "ue_angles"}


def load_scenario(path: str) -> ScenarioConfig:
    """Parse a YAML scenario file whose keys map 1:1 onto ScenarioConfig."""
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping of scenario fields")
    unknown = sorted(set(data) - _SCENARIO_KEYS)
    if unknown:
        raise ValueError(f"{path}: unknown keys {unknown}")
    missing = sorted(_REQUIRED_KEYS - set(data))
    if missing:
        raise ValueError(f"{path}: missing required keys {missing}")
    try:
        config = ScenarioConfig(
            M=int(data["M"]), l_bs=int(data["l_bs"]), K=int(data["K"]),
            ue_angles=tuple(float(a) for a in data["ue_angles"]),
            d=float(data.get("d", 0.5)),
            P_t=float(data.get("P_t", 1.0)),
            noise_var=float(data.get("noise_var", 1.0)),
            spreads=tuple(float(s) for s in data.get("spreads", ())),
            num_paths=tuple(int(n) for n in data.get("num_paths", ())),
            pathloss=tuple(float(a) for a in data.get("pathloss", ())),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from exc
    try:
        validate(config)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    return config


def cmd_simulate(scenario_path: str, n: int, seed: int,
                 structure: str, workers: int = 1) -> SweepResult:
    """Monte Carlo summary rows with closed-form columns for comparison."""
    config = load_scenario(scenario_path)
    plan = SimulationPlan(config=config, structure=structure,
                          n_realizations=n, seed=seed)
    summaries = run(plan, workers=workers)
    gains_cf = {"full": g_full(config.M, config.d, config.ue_angles),
                "partial": g_partial(config.M, config.l_bs, config.d,
                                     config.ue_angles)}
    columns = ["structure", "ue", "mean_gain", "stderr_gain",
               "mean_gain_normalized", "closed_form_g", "mean_sum_rate",
               "stderr_sum_rate", "mean_power_scale", "lemma1_violations"]
    rows = []
    for name in sorted(summaries):
        s = summaries[name]
        for ue in range(config.K):
            rows.append((
                name, ue + 1,
                s.mean_gain[ue], s.stderr_gain[ue],
                s.mean_gain[ue] * config.pathloss[ue],
                gains_cf[name][ue],
                s.mean_sum_rate, s.stderr_sum_rate, s.mean_power_scale,
                s.lemma1_violations,
            ))
    meta = {"scenario": config_digest(config), "seed": seed,
            "version": __version__}
    return SweepResult(meta, columns, rows)


def cmd_decide(M: int, l_bs: int, K: int, d: float, kappa: float) -> str:
    """Textual operating-region verdict with the quantities behind it."""
    ef = float(eta_f(kappa, d))
    rho = K / l_bs
    if K == l_bs:
        res = proposition1(l_bs, ef)
    else:
        res = proposition2(l_bs, rho, kappa, d)
    lines = [
        f"M = {M}, l_bs = {l_bs}, K = {K}, d = {d}, kappa = {kappa}",
        f"eta_f = {ef:.6f}",
        f"rho = {rho:.6f}",
    ]
    if res.a_value is not None:
        lines.append(f"A = {res.a_value:.6f}")
    if res.verdict == "boundary":
        lines.append("verdict = boundary (ratio = 1 for every l_bs)")
    elif res.threshold is None and res.verdict == "full_wins":
        lines.append("verdict = full_wins (any l_bs)")
        lines.append("l_bs_threshold = none (full-connection wins for any l_bs)")
    elif res.threshold is None:
        lines.append("verdict = partial_wins_or_ties")
        lines.append("l_bs_threshold = infeasible (no l_bs favors full-connection)")
    else:
        lines.append(f"verdict = {res.verdict}")
        min_l = math.floor(res.threshold) + 1 if K == l_bs \
            else math.ceil(res.threshold)
        lines.append(f"l_bs_threshold = {res.threshold:.6f} "
                     f"(full-connection requires l_bs >= {max(min_l, 1)})")
    return "\n".join(lines) + "\n"


def cmd_sweep(M: int, l_bs: int, K: int, d: float, kappa_start: float,
              kappa_stop: float, kappa_step: float, seed: int = 0) -> SweepResult:
    """Generic kappa sweep: regime quantities, both ratios, and the verdict."""
    if kappa_start <= 0:
        raise ValueError("kappa sweep must start above 0")
    rho = K / l_bs
    columns = ["kappa", "eta_f", "A", "ratio_exact", "ratio_approx",
               "full_wins"]
    rows = []
    for kappa in np.arange(kappa_start, kappa_stop + kappa_step * 0.5,
                           kappa_step):
        kappa = float(kappa)
        ef = float(eta_f(kappa, d))
        res = proposition2(l_bs, rho, kappa, d)
        rows.append((
            kappa, ef, res.a_value,
            ratio_exact_common_gap(M, l_bs, d, K, kappa)[0],
            ratio_approx(kappa, d, K, l_bs, "general_K")[0],
            res.verdict == "full_wins",
        ))
    meta = _meta(seed, sweep=(M, l_bs, K, d, kappa_start, kappa_stop, kappa_step))
    return SweepResult(meta, columns, rows)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbfsim",
        description="Full- vs partial-connection hybrid beamforming toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    for fig in (2, 3, 4, 5):
        p = sub.add_parser(f"fig{fig}", help=f"emit the data behind figure {fig}")
        p.add_argument("--out", default=None, help="output CSV path (default stdout)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("simulate", help="Monte Carlo run for a scenario file")
    p.add_argument("--scenario", required=True, help="YAML scenario file")
    p.add_argument("--n", type=int, default=1000, help="number of realizations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--structure", choices=("full", "partial", "both"),
                   default="both")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("decide", help="operating-region verdict for one point")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--l-bs", type=int, required=True, dest="l_bs")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--d", type=float, default=D_DEFAULT)
    p.add_argument("--kappa", type=float, required=True)

    p = sub.add_parser("sweep", help="kappa sweep of ratios and verdicts")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--l-bs", type=int, required=True, dest="l_bs")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--d", type=float, default=D_DEFAULT)
    p.add_argument("--kappa-start", type=float, default=0.1)
    p.add_argument("--kappa-stop", type=float, default=4.0)
    p.add_argument("--kappa-step", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command in ("fig2", "fig3", "fig4", "fig5"):
            builder = {"fig2": cmd_fig2, "fig3": cmd_fig3,
                       "fig4": cmd_fig4, "fig5": cmd_fig5}[args.command]
            write_csv(builder(seed=args.seed), args.out)
        elif args.command == "simulate":
            result = cmd_simulate(args.scenario, args.n, args.seed,
                                  args.structure, args.workers)
            write_csv(result, args.out)
        elif args.command == "decide":
            sys.stdout.write(cmd_decide(args.M, args.l_bs, args.K, args.d,
                                        args.kappa))
        elif args.command == "sweep":
            result = cmd_sweep(args.M, args.l_bs, args.K, args.d,
                               args.kappa_start, args.kappa_stop,
                               args.kappa_step, args.seed)
            write_csv(result, args.out)
    except (OSError, ValueError, RankDeficiencyError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver: ``memsim couplings|simulate|oracle``.

Each command evaluates one or more independent tasks (sweep points, atom
numbers), optionally on a process pool, and writes a CSV table plus a
gnuplot script that plots it. Exit codes: 0 success, 1 configuration
error, 2 physics-domain error (e.g. a Raman resonance or a Hilbert space
beyond the size guard).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import channels as ch
from . import couplings as cp
from . import oracle as orc
from .config import RunConfig, Sweep, load_config
from .errors import ConfigError, DimensionError, DomainError
from .gaussian import apply_transform, epr_variance, product_state, squeezed_state, vacuum_state

SCENARIOS = ("qnd", "swap", "entangle", "multichannel")
STUDIES = ("commutator", "bosonization", "gaussian-check")


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "pass" if v else "fail"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if v == 0.0:
            return "0.0"
        return format(v, ".17g")
    return str(v)


# --- couplings -------------------------------------------------------------------

COUPLING_COLUMNS = [
    "m", "branch", "g1", "m4_over_mu0_4", "delta_prime", "g2", "kappa", "kappa2",
    "regime", "omega_c_balance", "doppler_floor", "doppler_ok",
]


def couplings_rows(cfg: RunConfig) -> list[list]:
    p = cfg.params
    species = p.species
    kappa = cp.kappa1(p)
    kappa2 = cp.kappa2(p)
    regime = cp.classify_regime(p).regime.value
    floor = cp.doppler_floor(species)
    rows = []
    for m in range(-species.F, species.F + 1):
        for s in (-1, 1):
            dp = cp.stark_detuning(m, s, p)
            try:
                balance = cp.balance_rabi(p.detuning, dp)
            except DomainError:
                balance = float("nan")
            rows.append([
                m, "+" if s > 0 else "-", cp.g1(m, p), cp.m4(m, species), dp, cp.g2(m, s, p),
                kappa, kappa2, regime, balance, floor, abs(dp) > cp.DOPPLER_MARGIN * floor,
            ])
    return rows


# --- simulate --------------------------------------------------------------------

def _default_theta(cfg: RunConfig, scenario: str) -> float:
    theta = cfg.get("scenario", "theta")
    if theta is not None:
        return theta
    p = cfg.params
    if scenario == "qnd":
        return cp.kappa1(p) * p.duration
    branch = -1 if scenario == "entangle" else 1
    return abs(cp.kappa2(p, branch)) * p.duration


def _theta_qnd(cfg: RunConfig) -> float:
    t = cfg.get("scenario", "theta_qnd")
    return cp.kappa1(cfg.params) * cfg.params.duration if t is None else t


def _input_state(cfg: RunConfig, label: str, role: str | None = None):
    alpha = complex(cfg.get("scenario", "alpha_re"), cfg.get("scenario", "alpha_im"))
    return squeezed_state(label, cfg.get("scenario", "squeeze_r"), alpha=alpha, role=role)


SIM_COLUMNS = {
    "qnd": ["theta"] + [f"{m}_{q}" for m in ch.QND_MODES for q in ("mean_x", "mean_p", "var_x", "var_p")],
    "swap": ["theta", "out_mean_x", "out_mean_p", "out_var_x", "out_var_p", "fidelity"],
    "entangle": ["theta", "n_field", "n_atom", "epr_variance"],
    "multichannel": ["theta", "theta_qnd", "epr_input", "epr_stored", "epr_retrieved", "var_x_yC"],
}


def simulate_rows(cfg: RunConfig, scenario: str) -> list[list]:
    theta = _default_theta(cfg, scenario)
    if scenario == "qnd":
        s0 = product_state(_input_state(cfg, "yC"), vacuum_state(["yS", "A1"]))
        s = apply_transform(ch.qnd_generator(theta), s0)
        row = [theta]
        for m in ch.QND_MODES:
            mu, c = s.mean(m), s.block(m)
            row += [mu[0], mu[1], c[0, 0], c[1, 1]]
        return [row]
    if scenario == "swap":
        inp = _input_state(cfg, "in", role="aux")
        out, fid = ch.store_retrieve(inp, theta, theta)
        return [[theta, out.means[0], out.means[1], out.cov[0, 0], out.cov[1, 1], fid]]
    if scenario == "entangle":
        s = apply_transform(ch.sq_transform(theta), vacuum_state(["y2-", "A2"]))
        return [[theta, s.photon_number("y2-"), s.photon_number("A2"), epr_variance(s, "y2-", "A2")]]
    if scenario == "multichannel":
        tq = _theta_qnd(cfg)
        r = ch.store_retrieve_entangled(cfg.get("scenario", "epr_r"), theta, tq)
        return [[theta, tq, r.epr_input, r.epr_stored, r.epr_retrieved, r.final.block("yC")[0, 0]]]
    raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")


# --- oracle ----------------------------------------------------------------------

ORACLE_COLUMNS = {
    "commutator": ["n_atoms", "cutoff", "dim", "comm_norm", "h1_norm", "h2_norm", "raw_ratio", "ratio", "fitted_slope"],
    "bosonization": ["n_atoms", "n_excited", "commutator_re", "commutator_im", "closed_form_im"],
    "gaussian-check": ["n_atoms", "alpha", "theta", "cutoff", "max_deviation"],
}


def oracle_rows_for(cfg: RunConfig, study: str, n_atoms: int) -> list[list]:
    o = cfg.values["oracle"]
    if study == "commutator":
        r = orc.commutator_ratio(n_atoms, o["cutoff"])
        return [[r.n_atoms, r.cutoff, r.dim, r.comm_norm, r.h1_norm, r.h2_norm, r.raw_ratio, r.ratio]]
    if study == "bosonization":
        rows = []
        for n in range(n_atoms + 1):
            c = orc.commutator_expectation(n_atoms, n)
            rows.append([n_atoms, n, c.real, c.imag, 1 - 2 * n / n_atoms])
        return rows
    if study == "gaussian-check":
        rep = orc.compare_to_gaussian(orc.GaussianCheck(n_atoms, o["alpha"], o["theta"], o["cutoff"]))
        return [[n_atoms, o["alpha"], o["theta"], o["cutoff"], rep.max_deviation]]
    raise ConfigError(f"unknown study {study!r}; choose from {', '.join(STUDIES)}")


def _finish_oracle(study: str, rows: list[list]) -> list[list]:
    if study != "commutator":
        return rows
    slope = orc.fit_loglog_slope([r[0] for r in rows], [r[7] for r in rows]) if len(rows) > 1 else float("nan")
    return [r + [slope] for r in rows]


# --- task dispatch -----------------------------------------------------------------

def _task(args):
    command, cfg, extra = args
    if command == "couplings":
        return couplings_rows(cfg)
    if command == "simulate":
        return simulate_rows(cfg, extra)
    study, n_atoms = extra
    return oracle_rows_for(cfg, study, n_atoms)


def run_tasks(tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(_task, tasks))


def sweep_points(cfg: RunConfig, prefer: str) -> list[tuple[float | None, RunConfig]]:
    if cfg.sweep is None:
        return [(None, cfg)]
    return [(float(v), cfg.with_value(cfg.sweep.param, v, prefer)) for v in cfg.sweep.values()]


def build_table(command: str, cfg: RunConfig, target: str | None, jobs: int) -> tuple[list[str], list[list]]:
    """Header and rows for one command; rows are ordered by sweep index, then task order."""
    if command == "couplings":
        columns, prefer = COUPLING_COLUMNS, "beam"
    elif command == "simulate":
        if target not in SCENARIOS:
            raise ConfigError(f"unknown scenario {target!r}; choose from {', '.join(SCENARIOS)}")
        columns, prefer = SIM_COLUMNS[target], "scenario"
    else:
        if target not in STUDIES:
            raise ConfigError(f"unknown study {target!r}; choose from {', '.join(STUDIES)}")
        columns, prefer = ORACLE_COLUMNS[target], "oracle"

    points = sweep_points(cfg, prefer)
    tasks, owner = [], []
    for k, (_, pcfg) in enumerate(points):
        if command == "oracle":
            for n in pcfg.get("oracle", "n_atoms"):
                tasks.append((command, pcfg, (target, n)))
                owner.append(k)
        else:
            tasks.append((command, pcfg, target))
            owner.append(k)
    results = run_tasks(tasks, jobs)

    rows = []
    for k, (value, _) in enumerate(points):
        chunk = [r for o, res in zip(owner, results) if o == k for r in res]
        if command == "oracle":
            chunk = _finish_oracle(target, chunk)
        rows += [([value] if value is not None else []) + r for r in chunk]
    header = ([f"sweep:{cfg.sweep.param}"] if cfg.sweep is not None else []) + list(columns)
    return header, rows


def write_outputs(out_dir: Path, stem: str, header: list[str], rows: list[list]) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(fmt(v) for v in r) + "\n")
    (out_dir / f"{stem}.gp").write_text(plot_script(csv_path.name, header), encoding="utf-8")
    return csv_path


def plot_script(csv_name: str, header: list[str]) -> str:
    """gnuplot script plotting every numeric column against the first one."""
    lines = [
        "# gnuplot script; run with: gnuplot -p " + csv_name.replace(".csv", ".gp"),
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{header[0]}'",
        "set grid",
    ]
    ycols = [i + 1 for i in range(1, len(header)) if header[i] not in ("branch", "regime", "doppler_ok")]
    if ycols:
        lines.append("plot " + ", \\\n     ".join(f"'{csv_name}' using 1:{c} with linespoints" for c in ycols))
    return "\n".join(lines) + "\n"


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="memsim", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="path to the run configuration")
        p.add_argument("--sweep", help="override the sweep block: key=start:stop:steps")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $MEMSIM_JOBS or 1)")
        p.add_argument("--out", help="output directory (default: [output] dir)")

    common(sub.add_parser("couplings", help="tabulate coupling constants and the regime"))
    p = sub.add_parser("simulate", help="run a Gaussian channel scenario")
    common(p)
    p.add_argument("--scenario", default="swap", help="one of: " + ", ".join(SCENARIOS))
    p = sub.add_parser("oracle", help="run an exact few-atom study")
    common(p)
    p.add_argument("--study", default="commutator", help="one of: " + ", ".join(STUDIES))
    return parser


def _jobs(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("MEMSIM_JOBS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise ConfigError(f"MEMSIM_JOBS must be an integer, got {env!r}") from None


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.sweep:
            cfg = RunConfig(cfg.values, Sweep.parse(args.sweep))
        target = getattr(args, "scenario", None) or getattr(args, "study", None)
        header, rows = build_table(args.command, cfg, target, _jobs(args.jobs))
        stem = args.command if target is None else f"{args.command}_{target.replace('-', '_')}"
        out_dir = Path(args.out or cfg.get("output", "dir"))
        path = write_outputs(out_dir, stem, header, rows)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front door.

Subcommands: `matrix` (payoff/cooperation matrix dump), `analytic`
(well-mixed stationary distribution, fixation table, transition
directions, risk conditions), `simulate` (replicated network runs),
`sweep` (grid over gamma, gamma_s, b; agent-based or analytic), and
`cluster` (neighborhood-composition snapshots).  All outputs are
fixed-schema CSVs plus a manifest.json that fully determines them.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .abm import RunResult, SimConfig, run
from .game import (
    STRATEGIES,
    STRATEGY_NAMES,
    DonationParams,
    GameSpec,
    GuiltParams,
    Strategy,
    coop_matrix,
    donation_payoffs,
    payoff_matrix,
)
from .networks import BaSpec, build_complete, build_lattice, build_scale_free
from .wellmixed import (
    EvoParams,
    build_markov,
    closed_form_conditions,
    transition_directions,
)

__all__ = ["main", "ConfigError", "Params"]

TOPOLOGIES = ("wellmixed", "lattice", "scalefree")
SUBCOMMANDS = ("matrix", "analytic", "simulate", "sweep", "cluster")
FREQ_COLUMNS = tuple(f"freq_{n}" for n in STRATEGY_NAMES)
FRAC_COLUMNS = tuple(f"frac_{n}" for n in STRATEGY_NAMES)
SCALEFREE_NETWORK_COUNT = 10


class ConfigError(ValueError):
    """Invalid configuration (exit code 2)."""


@dataclass(frozen=True, slots=True)
class Params:
    """Fully resolved CLI parameters (defaults < config file < flags)."""

    topology: str = "wellmixed"
    L: int = 30
    N: int = 100
    m: int = 2
    b: float = 2.0
    c: float = 1.0
    gamma: float = 1.0
    gamma_s: float = 0.0
    omega: int = 10
    beta: float = 1.0
    steps: int = 1_000_000
    window: int = 100_000
    replicates: int | None = None
    seed: int = 1
    jobs: int = 1
    out: str = "out"
    update: str = "sync"
    strategies: tuple[Strategy, ...] = STRATEGIES
    mode: str = "abm"
    gamma_grid: tuple[float, ...] = tuple(float(g) for g in range(9))
    gamma_s_grid: tuple[float, ...] = (0.0, 0.1, 0.5, 1.0)
    b_grid: tuple[float, ...] = (2.0, 4.0)
    snapshot_steps: tuple[int, ...] = ()
    timeseries: bool = False


# ---------------------------------------------------------------------------
# value parsing


def _parse_choice(options: tuple[str, ...]):
    def parse(raw: str) -> str:
        if raw not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return raw

    return parse


def _parse_strategies(raw: str) -> tuple[Strategy, ...]:
    names = [s.strip() for s in raw.split(",") if s.strip()]
    if not names:
        raise ValueError("strategy list is empty")
    out = []
    for name in names:
        try:
            out.append(Strategy[name])
        except KeyError:
            raise ValueError(
                f"unknown strategy {name!r}; valid: {', '.join(STRATEGY_NAMES)}"
            ) from None
    return tuple(dict.fromkeys(out))


def _parse_float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.split(",") if tok.strip())


def _parse_int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in raw.split(",") if tok.strip())


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


_PARSERS = {
    "topology": _parse_choice(TOPOLOGIES),
    "L": int,
    "N": int,
    "m": int,
    "b": float,
    "c": float,
    "gamma": float,
    "gamma_s": float,
    "omega": int,
    "beta": float,
    "steps": int,
    "window": int,
    "replicates": int,
    "seed": int,
    "jobs": int,
    "out": str,
    "update": _parse_choice(("sync", "async")),
    "strategies": _parse_strategies,
    "mode": _parse_choice(("abm", "analytic")),
    "gamma_grid": _parse_float_list,
    "gamma_s_grid": _parse_float_list,
    "b_grid": _parse_float_list,
    "snapshot_steps": _parse_int_list,
    "timeseries": _parse_bool,
}


def _parse_value(key: str, raw: str):
    try:
        return _PARSERS[key](raw)
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key!r}: {raw!r} ({exc})") from None


def _load_config(path: str, command: str) -> dict[str, str]:
    """Read a flat key=value INI file; [common] plus per-subcommand sections."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keep key case (e.g. L vs l)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from None

    for section in parser.sections():
        if section != "common" and section not in SUBCOMMANDS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _PARSERS:
                raise ConfigError(f"unknown config key {key!r} in [{section}]")

    merged: dict[str, str] = {}
    for section in ("common", command):
        if parser.has_section(section):
            merged.update(parser[section])
    return merged


def _resolve_params(args: argparse.Namespace) -> Params:
    file_vals = _load_config(args.config, args.command) if args.config else {}
    vals: dict[str, object] = {}
    for f in fields(Params):
        raw = getattr(args, f.name, None)
        if raw is None and f.name in file_vals:
            raw = file_vals[f.name]
        if raw is None:
            continue
        vals[f.name] = _parse_value(f.name, raw) if isinstance(raw, str) else raw
    p = replace(Params(), **vals)
    if p.seed < 0:
        raise ConfigError(f"seed must be >= 0, got {p.seed}")
    if p.jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {p.jobs}")
    return p


# ---------------------------------------------------------------------------
# shared helpers


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return "" if math.isnan(v) else format(v, ".15g")
    return str(value)


def _write_csv(path: Path, header: tuple[str, ...] | list[str], rows) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _derive_seed(master: int, stream: str, index: int) -> int:
    """Counter-based expansion of the master seed into independent streams."""
    stream_ids = {"replicate": 1, "network": 2}
    ss = np.random.SeedSequence([int(master), stream_ids[stream], int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def _game_spec(p: Params) -> tuple[DonationParams, GameSpec]:
    donation = DonationParams(b=p.b, c=p.c)
    spec = GameSpec(
        payoffs=donation_payoffs(donation),
        omega=p.omega,
        guilt=GuiltParams(gamma=p.gamma, gamma_s=p.gamma_s),
    )
    return donation, spec


def _default_replicates(p: Params) -> int:
    if p.replicates is not None:
        return p.replicates
    return 20 if p.topology == "scalefree" else 30


def _network_seeds(p: Params) -> list[int]:
    if p.topology != "scalefree":
        return []
    return [p.seed + i for i in range(SCALEFREE_NETWORK_COUNT)]


def _make_network(topology: str, p: Params, net_seed: int | None):
    if topology == "lattice":
        return build_lattice(p.L)
    if topology == "wellmixed":
        return build_complete(p.N)
    return build_scale_free(BaSpec(n=p.N, m=p.m, seed=int(net_seed)))


def _params_echo(p: Params) -> dict:
    echo = {}
    for f in fields(Params):
        v = getattr(p, f.name)
        if f.name == "strategies":
            v = [s.name for s in v]
        elif isinstance(v, tuple):
            v = list(v)
        echo[f.name] = v
    return echo


def _write_manifest(
    outdir: Path,
    command: str,
    p: Params,
    replicate_seeds: list[int],
    network_seeds: list[int],
) -> None:
    echo = _params_echo(p)
    blob = json.dumps({"command": command, "config": echo}, sort_keys=True)
    manifest = {
        "command": command,
        "config": echo,
        "content_hash": hashlib.sha256(blob.encode("ascii")).hexdigest(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "replicate_seeds": replicate_seeds,
        "network_seeds": network_seeds,
    }
    with open(outdir / "manifest.json", "w", encoding="ascii") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sim_config(p: Params, rep_seed: int, snapshot_steps: tuple[int, ...] = ()) -> SimConfig:
    return SimConfig(
        steps=p.steps,
        measure_window=p.window,
        replicates=None,
        beta=p.beta,
        update_rule="synchronous" if p.update == "sync" else "asynchronous",
        allowed_strategies=p.strategies,
        rng_seed=rep_seed,
        record_timeseries=p.timeseries,
        snapshot_steps=snapshot_steps,
    )


def _replicate_job(payload: tuple) -> RunResult:
    topology, p, net_seed, config = payload
    net = _make_network(topology, p, net_seed)
    return run(net, _game_spec(p)[1], config)


def _run_jobs(payloads: list[tuple], jobs: int) -> list[RunResult]:
    if jobs <= 1 or len(payloads) <= 1:
        return [_replicate_job(pl) for pl in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_replicate_job, payloads))


def _aggregate(results: list[RunResult]) -> tuple[np.ndarray, np.ndarray, float, float]:
    freqs = np.array([r.frequencies for r in results])
    coops = np.array([r.coop_level for r in results])
    if len(results) > 1:
        freq_sd = freqs.std(axis=0, ddof=1)
        coop_sd = float(coops.std(ddof=1))
    else:
        freq_sd = np.zeros(6)
        coop_sd = 0.0
    return freqs.mean(axis=0), freq_sd, float(coops.mean()), coop_sd


# ---------------------------------------------------------------------------
# subcommands


def cmd_matrix(p: Params) -> int:
    _, spec = _game_spec(p)
    pay = payoff_matrix(spec)
    coop = coop_matrix(p.omega)
    outdir = Path(p.out)
    outdir.mkdir(parents=True, exist_ok=True)
    header = ("strategy", *STRATEGY_NAMES)
    for name, matrix in (("payoff_matrix.csv", pay), ("coop_matrix.csv", coop)):
        _write_csv(
            outdir / name,
            header,
            ([STRATEGY_NAMES[i], *matrix[i]] for i in range(6)),
        )
    _write_manifest(outdir, "matrix", p, [], [])
    return 0


def cmd_analytic(p: Params) -> int:
    donation, spec = _game_spec(p)
    matrix = payoff_matrix(spec)
    model = build_markov(STRATEGIES, EvoParams(N=p.N, beta=p.beta), matrix)
    edges = transition_directions(model)
    report = closed_form_conditions(spec, donation)

    outdir = Path(p.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        outdir / "stationary.csv",
        ("strategy", "frequency"),
        zip(STRATEGY_NAMES, model.stationary),
    )
    _write_csv(
        outdir / "fixation.csv",
        ("resident", "mutant", "rho"),
        (
            (res.name, mut.name, model.fixation[i, j])
            for i, res in enumerate(model.strategies)
            for j, mut in enumerate(model.strategies)
            if i != j
        ),
    )
    _write_csv(
        outdir / "directions.csv",
        ("from", "to"),
        ((a.name, b.name) for a, b in edges),
    )
    _write_csv(outdir / "risk_conditions.csv", ("condition", "holds"), report.rows())
    _write_manifest(outdir, "analytic", p, [], [])
    return 0


def cmd_simulate(p: Params) -> int:
    reps = _default_replicates(p)
    if reps < 1:
        raise ConfigError(f"replicates must be >= 1, got {reps}")
    rep_seeds = [_derive_seed(p.seed, "replicate", r) for r in range(reps)]
    net_seeds = _network_seeds(p)
    payloads = []
    for r in range(reps):
        net_seed = net_seeds[r % len(net_seeds)] if net_seeds else None
        payloads.append((p.topology, p, net_seed, _sim_config(p, rep_seeds[r])))
    results = _run_jobs(payloads, p.jobs)

    outdir = Path(p.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        outdir / "run_summary.csv",
        ("replicate", "seed", *FREQ_COLUMNS, "coop_level"),
        (
            (r, rep_seeds[r], *results[r].frequencies, results[r].coop_level)
            for r in range(reps)
        ),
    )
    freq_mean, freq_sd, coop_mean, coop_sd = _aggregate(results)
    agg_header = []
    agg_row = []
    for i, col in enumerate(FREQ_COLUMNS):
        agg_header += [f"{col}_mean", f"{col}_sd"]
        agg_row += [freq_mean[i], freq_sd[i]]
    agg_header += ["coop_mean", "coop_sd", "replicates"]
    agg_row += [coop_mean, coop_sd, reps]
    _write_csv(outdir / "aggregate.csv", agg_header, [agg_row])

    if p.timeseries:
        def ts_rows():
            for r, res in enumerate(results):
                ts = res.timeseries
                for k in range(ts.steps.size):
                    yield (r, ts.steps[k], *ts.frequencies[k], ts.coop[k])

        _write_csv(
            outdir / "timeseries.csv",
            ("replicate", "step", *FREQ_COLUMNS, "coop_level"),
            ts_rows(),
        )
    _write_manifest(outdir, "simulate", p, rep_seeds, net_seeds)
    return 0


def cmd_sweep(p: Params) -> int:
    if not (p.gamma_grid and p.gamma_s_grid and p.b_grid):
        raise ConfigError("sweep grids (gamma_grid, gamma_s_grid, b_grid) must be non-empty")
    cells = [
        (b, gs, g) for b in p.b_grid for gs in p.gamma_s_grid for g in p.gamma_grid
    ]
    rows = []
    rep_seeds: list[int] = []
    net_seeds: list[int] = []

    if p.mode == "analytic":
        if p.topology != "wellmixed":
            raise ConfigError("analytic sweep mode requires topology=wellmixed")
        coop_diag = np.diag(coop_matrix(p.omega))
        evo = EvoParams(N=p.N, beta=p.beta)
        for b, gs, g in cells:
            cell = replace(p, b=b, gamma=g, gamma_s=gs)
            matrix = payoff_matrix(_game_spec(cell)[1])
            stationary = build_markov(STRATEGIES, evo, matrix).stationary
            coop_mean = float(stationary @ coop_diag)
            rows.append(("wellmixed", b, g, gs, *stationary, coop_mean, 0.0, 0))
    else:
        reps = _default_replicates(p)
        rep_seeds = [_derive_seed(p.seed, "replicate", r) for r in range(reps)]
        net_seeds = _network_seeds(p)
        payloads = []
        for b, gs, g in cells:
            cell = replace(p, b=b, gamma=g, gamma_s=gs)
            for r in range(reps):
                net_seed = net_seeds[r % len(net_seeds)] if net_seeds else None
                payloads.append(
                    (p.topology, cell, net_seed, _sim_config(cell, rep_seeds[r]))
                )
        results = _run_jobs(payloads, p.jobs)
        for idx, (b, gs, g) in enumerate(cells):
            cell_results = results[idx * reps : (idx + 1) * reps]
            freq_mean, _, coop_mean, coop_sd = _aggregate(cell_results)
            rows.append((p.topology, b, g, gs, *freq_mean, coop_mean, coop_sd, reps))

    outdir = Path(p.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        outdir / "sweep.csv",
        ("topology", "b", "gamma", "gamma_s", *FREQ_COLUMNS, "coop_mean", "coop_sd", "replicates"),
        rows,
    )
    _write_manifest(outdir, "sweep", p, rep_seeds, net_seeds)
    return 0


def cmd_cluster(p: Params) -> int:
    if p.topology == "wellmixed":
        raise ConfigError(
            "cluster requires a structured topology (lattice or scalefree); "
            "neighborhood composition is degenerate in well-mixed populations"
        )
    snapshot_steps = p.snapshot_steps or (p.steps,)
    rep_seed = _derive_seed(p.seed, "replicate", 0)
    net_seeds = _network_seeds(p)
    net_seed = net_seeds[0] if net_seeds else None
    config = _sim_config(p, rep_seed, snapshot_steps=tuple(sorted(set(snapshot_steps))))
    result = _replicate_job((p.topology, p, net_seed, config))

    outdir = Path(p.out)
    outdir.mkdir(parents=True, exist_ok=True)
    header = ("focal_strategy", "population_share", *FRAC_COLUMNS)
    with open(outdir / "clusters.csv", "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for _, table in result.snapshots:
            writer.writerow(header)
            for s in range(6):
                writer.writerow(
                    [_fmt(v) for v in (STRATEGY_NAMES[s], table.shares[s], *table.fractions[s])]
                )
    _write_manifest(outdir, "cluster", p, [rep_seed], net_seeds[:1])
    return 0


_DISPATCH = {
    "matrix": cmd_matrix,
    "analytic": cmd_analytic,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "cluster": cmd_cluster,
}


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="PATH", help="INI config file")
    shared.add_argument("--topology", metavar="{wellmixed|lattice|scalefree}")
    shared.add_argument("--L", metavar="INT", help="lattice side length")
    shared.add_argument("--N", metavar="INT", help="population size (wellmixed/scalefree)")
    shared.add_argument("--m", metavar="INT", help="edges per new scale-free node")
    shared.add_argument("--b", metavar="FLOAT", help="benefit of cooperation")
    shared.add_argument("--c", metavar="FLOAT", help="cost of cooperation")
    shared.add_argument("--gamma", metavar="FLOAT", help="guilt cost per episode")
    shared.add_argument("--gamma-s", metavar="FLOAT", help="social assessment cost")
    shared.add_argument("--omega", metavar="INT", help="rounds per encounter")
    shared.add_argument("--beta", metavar="FLOAT", help="imitation strength")
    shared.add_argument("--steps", metavar="INT", help="evolution steps")
    shared.add_argument("--window", metavar="INT", help="trailing measurement window")
    shared.add_argument("--replicates", metavar="INT")
    shared.add_argument("--seed", metavar="INT", help="master seed")
    shared.add_argument("--jobs", metavar="INT", help="parallel worker bound")
    shared.add_argument("--out", metavar="DIR", help="output directory")
    shared.add_argument("--update", metavar="{sync|async}")
    shared.add_argument("--strategies", metavar="LIST", help="comma-separated subset")
    shared.add_argument("--mode", metavar="{abm|analytic}", help="sweep evaluation mode")
    shared.add_argument("--gamma-grid", metavar="LIST")
    shared.add_argument("--gamma-s-grid", metavar="LIST")
    shared.add_argument("--b-grid", metavar="LIST")
    shared.add_argument("--snapshot-steps", metavar="LIST")
    shared.add_argument(
        "--timeseries", action="store_const", const=True, help="emit timeseries.csv"
    )

    parser = argparse.ArgumentParser(
        prog="guiltsim",
        description="Evolution of guilt-prone strategies in the iterated "
        "donation game on well-mixed, lattice, and scale-free populations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("matrix", parents=[shared], help="dump payoff and cooperation matrices")
    sub.add_parser("analytic", parents=[shared], help="well-mixed Markov analytics")
    sub.add_parser("simulate", parents=[shared], help="replicated network simulation")
    sub.add_parser("sweep", parents=[shared], help="grid sweep over gamma, gamma_s, b")
    sub.add_parser("cluster", parents=[shared], help="neighborhood-composition snapshots")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        params = _resolve_params(args)
        return _DISPATCH[args.command](params)
    except ConfigError as exc:
        print(f"guiltsim: config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"guiltsim: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"guiltsim: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Stochastic evolutionary simulation on a network.

Each step every agent accumulates payoffs against its neighbors from the
per-round-average payoff matrix, then imitates a random neighbor with
Fermi probability.  Runs are deterministic given (network, game, config,
seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .game import STRATEGIES, GameSpec, Strategy, coop_matrix, payoff_matrix
from .networks import Network

__all__ = [
    "SimConfig",
    "PopulationState",
    "NeighborhoodTable",
    "TimeSeries",
    "RunResult",
    "init_population",
    "node_fitness",
    "evolution_step",
    "cooperation_level",
    "neighborhood_composition",
    "run",
]

UPDATE_RULES = ("synchronous", "asynchronous")


@dataclass(frozen=True, slots=True)
class SimConfig:
    """Simulation protocol parameters.

    `replicates` is None to let the caller pick the per-topology default
    (30 for lattice/well-mixed, 20 for scale-free).
    """

    steps: int = 1_000_000
    measure_window: int = 100_000
    replicates: int | None = None
    beta: float = 1.0
    update_rule: str = "synchronous"
    allowed_strategies: tuple[Strategy, ...] = STRATEGIES
    rng_seed: int = 0
    record_timeseries: bool = False
    timeseries_stride: int = 100
    snapshot_steps: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not 1 <= self.measure_window <= self.steps:
            raise ValueError(
                f"measure_window must be in [1, steps], got "
                f"window={self.measure_window}, steps={self.steps}"
            )
        if self.replicates is not None and self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.update_rule not in UPDATE_RULES:
            raise ValueError(
                f"update_rule must be one of {UPDATE_RULES}, got {self.update_rule!r}"
            )
        if not self.allowed_strategies:
            raise ValueError("allowed_strategies must be non-empty")
        if self.timeseries_stride < 1:
            raise ValueError("timeseries_stride must be >= 1")
        for s in self.snapshot_steps:
            if not 0 <= s <= self.steps:
                raise ValueError(f"snapshot step {s} outside [0, steps]")


@dataclass(frozen=True, slots=True, eq=False)
class PopulationState:
    """Per-node strategy codes (matrix row indices 0..5) plus step count."""

    codes: np.ndarray
    step: int = 0


@dataclass(frozen=True, slots=True, eq=False)
class NeighborhoodTable:
    """Mean neighbor-strategy fractions per focal strategy.

    `fractions[s]` is NaN for strategies absent from the population;
    `shares` always sums to 1.
    """

    shares: np.ndarray  # (6,)
    fractions: np.ndarray  # (6, 6)


@dataclass(frozen=True, slots=True, eq=False)
class TimeSeries:
    steps: np.ndarray
    frequencies: np.ndarray  # (k, 6)
    coop: np.ndarray


@dataclass(frozen=True, slots=True, eq=False)
class RunResult:
    """Window-averaged outcome of a single replicate."""

    frequencies: np.ndarray  # (6,) mean over the measure window
    coop_level: float
    neighborhood: NeighborhoodTable
    snapshots: tuple[tuple[int, NeighborhoodTable], ...]
    timeseries: TimeSeries | None
    seed: int
    config: SimConfig


def init_population(
    net: Network, allowed: tuple[Strategy, ...], rng: np.random.Generator
) -> PopulationState:
    """Assign each node a strategy drawn uniformly from `allowed`."""
    if not allowed:
        raise ValueError("allowed strategy set must be non-empty")
    pool = np.array(sorted({s.index for s in allowed}), dtype=np.int64)
    codes = pool[rng.integers(len(pool), size=net.n)]
    return PopulationState(codes=codes, step=0)


def _fitness(codes: np.ndarray, net: Network, payoff: np.ndarray) -> np.ndarray:
    """Sum of payoff-matrix entries against all neighbors, per node."""
    vals = payoff[codes[net.edge_src], codes[net.indices]]
    return np.bincount(net.edge_src, weights=vals, minlength=net.n)


def node_fitness(
    node: int, state: PopulationState, net: Network, payoff: np.ndarray
) -> float:
    nbrs = net.neighbors(node)
    return float(payoff[state.codes[node], state.codes[nbrs]].sum())


def _step_synchronous(
    codes: np.ndarray,
    net: Network,
    payoff: np.ndarray,
    beta: float,
    rng: np.random.Generator,
) -> np.ndarray:
    fit = _fitness(codes, net, payoff)
    deg = net.degrees
    u = rng.random(net.n)  # neighbor pick
    v = rng.random(net.n)  # adoption draw
    if deg.min() > 0:
        pick = net.indptr[:-1] + np.minimum((u * deg).astype(np.int64), deg - 1)
        nbr = net.indices[pick]
        adopt = v < expit(beta * (fit[nbr] - fit))
        return np.where(adopt, codes[nbr], codes)
    # isolated nodes (possible only in imported graphs) keep their strategy
    idx = np.flatnonzero(deg > 0)
    pick = net.indptr[idx] + np.minimum((u[idx] * deg[idx]).astype(np.int64), deg[idx] - 1)
    nbr = net.indices[pick]
    adopt = v[idx] < expit(beta * (fit[nbr] - fit[idx]))
    out = codes.copy()
    out[idx[adopt]] = codes[nbr[adopt]]
    return out


def _step_asynchronous(
    codes: np.ndarray,
    net: Network,
    payoff: np.ndarray,
    beta: float,
    rng: np.random.Generator,
) -> np.ndarray:
    codes = codes.copy()
    for _ in range(net.n):
        i = int(rng.integers(net.n))
        nbrs_i = net.neighbors(i)
        if nbrs_i.size == 0:
            continue
        j = int(nbrs_i[rng.integers(nbrs_i.size)])
        f_i = payoff[codes[i], codes[nbrs_i]].sum()
        f_j = payoff[codes[j], codes[net.neighbors(j)]].sum()
        if rng.random() < expit(beta * (f_j - f_i)):
            codes[i] = codes[j]
    return codes


def evolution_step(
    state: PopulationState,
    net: Network,
    payoff: np.ndarray,
    config: SimConfig,
    rng: np.random.Generator,
) -> PopulationState:
    """Advance the population by one step under the configured update rule.

    Synchronous: all agents simultaneously compare against one random
    neighbor using fitnesses frozen at the start of the step.
    Asynchronous: N sequential single-agent updates with fitnesses
    recomputed on demand.
    """
    if config.update_rule == "synchronous":
        codes = _step_synchronous(state.codes, net, payoff, config.beta, rng)
    else:
        codes = _step_asynchronous(state.codes, net, payoff, config.beta, rng)
    return PopulationState(codes=codes, step=state.step + 1)


def cooperation_level(
    state: PopulationState, coop: np.ndarray, net: Network
) -> float:
    """Mean cooperation fraction over all ordered adjacent pairs."""
    return float(coop[state.codes[net.edge_src], state.codes[net.indices]].mean())


def neighborhood_composition(
    state: PopulationState, net: Network
) -> NeighborhoodTable:
    """Average neighbor-strategy fractions per focal strategy, plus each
    strategy's share of the population."""
    codes = state.codes
    flat = net.edge_src * 6 + codes[net.indices]
    per_node = np.bincount(flat, minlength=net.n * 6).reshape(net.n, 6).astype(float)
    deg = net.degrees
    per_node[deg > 0] /= deg[deg > 0, None]

    shares = np.bincount(codes, minlength=6) / net.n
    fractions = np.full((6, 6), np.nan)
    for s in range(6):
        mask = codes == s
        if mask.any():
            fractions[s] = per_node[mask].mean(axis=0)
    return NeighborhoodTable(shares=shares, fractions=fractions)


def _freqs(codes: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(codes, minlength=6) / n


def run(net: Network, spec: GameSpec, config: SimConfig) -> RunResult:
    """Execute one replicate and average frequencies and cooperation over
    the trailing measure window.

    Fitness sums the *total* payoff of each neighbor encounter (per-round
    average times the number of rounds), so longer games sharpen
    selection at fixed beta.
    """
    payoff = payoff_matrix(spec) * spec.omega
    coop = coop_matrix(spec.omega)
    rng = np.random.default_rng(config.rng_seed)
    state = init_population(net, config.allowed_strategies, rng)

    window_start = config.steps - config.measure_window
    freq_acc = np.zeros(6)
    coop_acc = 0.0
    wanted_snapshots = set(config.snapshot_steps)
    snapshots: list[tuple[int, NeighborhoodTable]] = []
    ts_steps: list[int] = []
    ts_freqs: list[np.ndarray] = []
    ts_coop: list[float] = []

    def maybe_record(step: int) -> None:
        if step in wanted_snapshots:
            snapshots.append((step, neighborhood_composition(state, net)))
        if config.record_timeseries and step % config.timeseries_stride == 0:
            ts_steps.append(step)
            ts_freqs.append(_freqs(state.codes, net.n))
            ts_coop.append(cooperation_level(state, coop, net))

    maybe_record(0)
    for step in range(1, config.steps + 1):
        state = evolution_step(state, net, payoff, config, rng)
        if step > window_start:
            freq_acc += _freqs(state.codes, net.n)
            coop_acc += cooperation_level(state, coop, net)
        maybe_record(step)

    timeseries = None
    if config.record_timeseries:
        timeseries = TimeSeries(
            steps=np.array(ts_steps, dtype=np.int64),
            frequencies=np.array(ts_freqs),
            coop=np.array(ts_coop),
        )
    return RunResult(
        frequencies=freq_acc / config.measure_window,
        coop_level=coop_acc / config.measure_window,
        neighborhood=neighborhood_composition(state, net),
        snapshots=tuple(snapshots),
        timeseries=timeseries,
        seed=config.rng_seed,
        config=config,
    )

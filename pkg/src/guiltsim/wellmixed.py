"""Exact finite-population analytics for well-mixed populations.

Pairwise-comparison (Fermi) imitation dynamics in the small-mutation
limit: fixation probabilities of a single mutant, the induced Markov
chain over monomorphic states with its stationary distribution, and
risk-dominance orderings including closed-form conditions for the
donation game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.special import expit, logsumexp

from .game import DonationParams, GameSpec, Strategy, donation_payoffs

__all__ = [
    "EvoParams",
    "MarkovModel",
    "RiskConditionReport",
    "fermi_probability",
    "group_payoff",
    "step_probabilities",
    "fixation_probability",
    "build_markov",
    "transition_directions",
    "risk_dominant",
    "closed_form_conditions",
]

# Relative tolerance below which two fixation probabilities are treated as
# tied (no transition-direction edge).
_TIE_RTOL = 1e-12


@dataclass(frozen=True, slots=True)
class EvoParams:
    """Population size and imitation strength."""

    N: int
    beta: float

    def __post_init__(self) -> None:
        if not (isinstance(self.N, int) and self.N >= 2):
            raise ValueError(f"N must be an integer >= 2, got {self.N}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")


@dataclass(frozen=True, slots=True, eq=False)
class MarkovModel:
    """Small-mutation-limit chain over monomorphic states.

    `fixation[i, j]` is the probability that a single strategy-j mutant
    fixates in a strategy-i resident population (diagonal is NaN).
    """

    strategies: tuple[Strategy, ...]
    transition: np.ndarray
    stationary: np.ndarray
    fixation: np.ndarray


def fermi_probability(f_a: float, f_b: float, beta: float) -> float:
    """Probability that an agent with fitness f_a imitates one with f_b."""
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return float(expit(beta * (f_b - f_a)))


def group_payoff(
    a: Strategy, b: Strategy, k: int, params: EvoParams, matrix: np.ndarray
) -> float:
    """Average payoff of an `a`-strategist when k of N agents play `a` and
    the rest play `b` (self-interaction excluded)."""
    if not 1 <= k <= params.N - 1:
        raise ValueError(f"k must be in [1, N-1] = [1, {params.N - 1}], got {k}")
    pi_aa = matrix[a.index, a.index]
    pi_ab = matrix[a.index, b.index]
    return ((k - 1) * pi_aa + (params.N - k) * pi_ab) / (params.N - 1)


def step_probabilities(
    k: int, a: Strategy, b: Strategy, params: EvoParams, matrix: np.ndarray
) -> tuple[float, float]:
    """Probabilities that the count of `a`-strategists moves k -> k+1 and
    k -> k-1 in one imitation step."""
    if not 0 <= k <= params.N:
        raise ValueError(f"k must be in [0, N] = [0, {params.N}], got {k}")
    if k == 0 or k == params.N:
        return 0.0, 0.0
    diff = group_payoff(a, b, k, params, matrix) - group_payoff(
        b, a, params.N - k, params, matrix
    )
    pre = (params.N - k) / params.N * k / params.N
    return float(pre * expit(params.beta * diff)), float(
        pre * expit(-params.beta * diff)
    )


def fixation_probability(
    mutant: Strategy, resident: Strategy, params: EvoParams, matrix: np.ndarray
) -> float:
    """Probability that a single `mutant` fixates among N-1 `resident`s.

    The product of backward/forward step ratios telescopes to
    exp(-beta * cumulative payoff advantage); the sum over chain lengths
    is evaluated in log space so large beta*N payoff gaps cannot
    overflow.
    """
    n = params.N
    k = np.arange(1, n)
    pi_aa = matrix[mutant.index, mutant.index]
    pi_ab = matrix[mutant.index, resident.index]
    pi_ba = matrix[resident.index, mutant.index]
    pi_bb = matrix[resident.index, resident.index]
    adv = ((k - 1) * pi_aa + (n - k) * pi_ab) / (n - 1) - (
        k * pi_ba + (n - k - 1) * pi_bb
    ) / (n - 1)
    log_terms = np.concatenate(([0.0], -params.beta * np.cumsum(adv)))
    return float(np.exp(-logsumexp(log_terms)))


def build_markov(
    strategies: list[Strategy] | tuple[Strategy, ...],
    params: EvoParams,
    matrix: np.ndarray,
) -> MarkovModel:
    """Assemble the monomorphic-state transition matrix and its stationary
    distribution.

    The stationary vector solves the linear stationarity system and is
    cross-checked against damped power iteration.
    """
    strategies = tuple(strategies)
    q = len(strategies)
    if q < 2 or len(set(strategies)) != q:
        raise ValueError("need at least two distinct strategies")

    rho = np.full((q, q), np.nan)
    for i, res in enumerate(strategies):
        for j, mut in enumerate(strategies):
            if i != j:
                rho[i, j] = fixation_probability(mut, res, params, matrix)

    trans = rho / (q - 1)
    np.fill_diagonal(trans, 0.0)
    np.fill_diagonal(trans, 1.0 - trans.sum(axis=1))

    # stationarity system (M^T - I) pi = 0 with sum(pi) = 1
    a = trans.T - np.eye(q)
    a[-1, :] = 1.0
    rhs = np.zeros(q)
    rhs[-1] = 1.0
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > 1e12:
        raise RuntimeError(
            f"stationarity system numerically singular (cond estimate {cond:.3e})"
        )
    stationary = np.linalg.solve(a, rhs)

    # damped power iteration; (M + I)/2 has the same stationary vector and
    # is aperiodic even if M itself is periodic
    damped = (trans + np.eye(q)) / 2.0
    vec = np.full(q, 1.0 / q)
    for _ in range(1_000_000):
        nxt = vec @ damped
        if np.max(np.abs(nxt - vec)) < 1e-14:
            vec = nxt
            break
        vec = nxt
    if np.max(np.abs(stationary - vec)) > 1e-8:
        raise RuntimeError("stationary distribution cross-check failed")

    stationary = np.clip(stationary, 0.0, None)
    stationary /= stationary.sum()
    return MarkovModel(
        strategies=strategies, transition=trans, stationary=stationary, fixation=rho
    )


def transition_directions(model: MarkovModel) -> list[tuple[Strategy, Strategy]]:
    """Directed edges A -> B where a B mutant fixates in an A population
    more easily than the reverse; ties yield no edge."""
    edges = []
    q = len(model.strategies)
    for i in range(q):
        for j in range(i + 1, q):
            r_ij = model.fixation[i, j]  # j fixating among i
            r_ji = model.fixation[j, i]
            if math.isclose(r_ij, r_ji, rel_tol=_TIE_RTOL, abs_tol=1e-300):
                continue
            if r_ij > r_ji:
                edges.append((model.strategies[i], model.strategies[j]))
            else:
                edges.append((model.strategies[j], model.strategies[i]))
    return edges


def risk_dominant(
    a: Strategy, b: Strategy, matrix: np.ndarray
) -> Strategy | None:
    """Which of two strategies is favored in the large-population limit.

    Returns the risk-dominant strategy, or None when
    pi_AA + pi_AB = pi_BA + pi_BB (neutrality).
    """
    lhs = matrix[a.index, a.index] + matrix[a.index, b.index]
    rhs = matrix[b.index, a.index] + matrix[b.index, b.index]
    if lhs > rhs:
        return a
    if rhs > lhs:
        return b
    return None


@dataclass(frozen=True, slots=True)
class RiskConditionReport:
    """Closed-form risk-dominance verdicts for the donation game."""

    dgcs_over_dgds: bool
    dgcs_over_c: bool
    dgcs_over_dgdn: bool
    dgcs_over_d: bool
    dgcn_over_dgcs: bool
    d_over_dgcn: bool
    cyclic_dgcs_dgcn_d: bool

    def rows(self) -> list[tuple[str, bool]]:
        return [(f.name, getattr(self, f.name)) for f in fields(self)]


def closed_form_conditions(
    spec: GameSpec, donation: DonationParams
) -> RiskConditionReport:
    """Evaluate the donation-game risk-dominance inequalities for DGCS
    against each rival, plus the DGCS -> DGCN -> D cycle flag.

    Each boolean matches `risk_dominant` applied to the payoff matrix away
    from equality boundaries.
    """
    if spec.payoffs != donation_payoffs(donation):
        raise ValueError("spec payoffs do not match the donation parameters")
    b, c = donation.b, donation.c
    ga, gs = spec.guilt.gamma, spec.guilt.gamma_s
    om = spec.omega

    dgcs_over_dgds = ga + gs > c
    dgcs_over_c = ga + gs < c
    dgcs_over_dgdn = (om - 1) * ga - gs > (om - 1) * c
    dgcs_over_d = ga + (om + 1) * gs < (om - 1) * (b - c)
    dgcn_over_dgcs = gs > 0
    d_over_dgcn = ga + (om - 1) * c > 0
    return RiskConditionReport(
        dgcs_over_dgds=dgcs_over_dgds,
        dgcs_over_c=dgcs_over_c,
        dgcs_over_dgdn=dgcs_over_dgdn,
        dgcs_over_d=dgcs_over_d,
        dgcn_over_dgcs=dgcn_over_dgcs,
        d_over_dgcn=d_over_dgcn,
        cyclic_dgcs_dgcn_d=dgcs_over_d and dgcn_over_dgcs and d_over_dgcn,
    )

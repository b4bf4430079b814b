"""Six-strategy iterated donation/PD game.

Defines the strategy types (unemotional C/D plus four guilt-prone
defector variants), validates game parameters, and derives the 6x6
per-round-average payoff matrix two independent ways: a closed-form
builder and a round-by-round encounter engine that serves as its oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Strategy",
    "STRATEGIES",
    "STRATEGY_NAMES",
    "PayoffEntries",
    "DonationParams",
    "GuiltParams",
    "GameSpec",
    "EncounterRound",
    "EncounterTrace",
    "donation_payoffs",
    "guilt_trigger",
    "simulate_encounter",
    "payoff_matrix",
    "coop_matrix",
]


class Strategy(enum.IntEnum):
    """The six strategies, numbered in fixed matrix row/column order."""

    C = 1  # unemotional cooperator
    D = 2  # unemotional defector
    DGDN = 3  # guilt-prone defector, non-adaptive, non-social
    DGCN = 4  # guilt-prone defector, adaptive, non-social
    DGDS = 5  # guilt-prone defector, non-adaptive, social
    DGCS = 6  # guilt-prone defector, adaptive, social

    @property
    def index(self) -> int:
        """Zero-based row/column index into 6x6 strategy matrices."""
        return self.value - 1

    @property
    def guilt_prone(self) -> bool:
        return self.value >= Strategy.DGDN

    @property
    def guilt_threshold(self) -> float:
        """Wrongdoings tolerated before guilt must be alleviated (0 or inf)."""
        return 0.0 if self.guilt_prone else math.inf

    @property
    def adaptive(self) -> bool:
        """Switches permanently from D to C after its first guilt episode."""
        return self is Strategy.DGCN or self is Strategy.DGCS

    @property
    def social(self) -> bool:
        """Feels guilt only when the co-player is not a pure defector."""
        return self is Strategy.DGDS or self is Strategy.DGCS

    @property
    def initial_action(self) -> str:
        return "C" if self is Strategy.C else "D"


STRATEGIES: tuple[Strategy, ...] = tuple(Strategy)
STRATEGY_NAMES: tuple[str, ...] = tuple(s.name for s in STRATEGIES)


@dataclass(frozen=True, slots=True)
class PayoffEntries:
    """Single-round PD payoffs: temptation, reward, punishment, sucker."""

    T: float
    R: float
    P: float
    S: float

    def __post_init__(self) -> None:
        if not (self.T > self.R > self.P > self.S):
            raise ValueError(
                f"PD ordering violated: need T > R > P > S, got "
                f"T={self.T}, R={self.R}, P={self.P}, S={self.S}"
            )
        if not 2 * self.R > self.T + self.S:
            raise ValueError(
                f"iterated-game condition violated: need 2R > T + S, got "
                f"2R={2 * self.R}, T+S={self.T + self.S}"
            )


@dataclass(frozen=True, slots=True)
class DonationParams:
    """Donation-game parameterization: benefit b, cost c of cooperation."""

    b: float
    c: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError(f"donation game requires c > 0, got c={self.c}")
        if not self.b > self.c:
            raise ValueError(
                f"donation game requires b > c, got b={self.b}, c={self.c}"
            )


@dataclass(frozen=True, slots=True)
class GuiltParams:
    """Costs of guilt: gamma per alleviated episode, gamma_s per defecting
    round spent assessing the co-player (social strategies only)."""

    gamma: float
    gamma_s: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.gamma_s < 0:
            raise ValueError(f"gamma_s must be >= 0, got {self.gamma_s}")


@dataclass(frozen=True, slots=True)
class GameSpec:
    """Full parameterization of the iterated game."""

    payoffs: PayoffEntries
    omega: int
    guilt: GuiltParams

    def __post_init__(self) -> None:
        if not (isinstance(self.omega, int) and self.omega >= 1):
            raise ValueError(f"omega must be an integer >= 1, got {self.omega}")


def donation_payoffs(p: DonationParams) -> PayoffEntries:
    """Map donation-game (b, c) to PD entries T=b, R=b-c, P=0, S=-c."""
    return PayoffEntries(T=p.b, R=p.b - p.c, P=0.0, S=-p.c)


def guilt_trigger(focal: Strategy, opponent: Strategy) -> bool:
    """Whether a defection by `focal` produces a guilt episode.

    Non-social guilt-prone strategies feel guilt after every own
    defection; social ones only when the opponent is not a pure
    defector (a cooperator or itself guilt-prone).
    """
    if not focal.guilt_prone:
        raise ValueError(f"{focal.name} never evaluates guilt")
    if focal.social:
        return opponent is not Strategy.D
    return True


@dataclass(frozen=True, slots=True)
class EncounterRound:
    """Focal-side record of one round."""

    round: int
    focal_action: str
    opponent_action: str
    focal_base_payoff: float
    g_before: int
    g_after: int
    gamma_paid: float
    gamma_s_paid: float


@dataclass(frozen=True, slots=True)
class EncounterTrace:
    """Round-by-round outcome of one pairing over all rounds."""

    rounds: tuple[EncounterRound, ...]
    focal_total: float
    opponent_total: float
    focal_average: float
    opponent_average: float
    focal_coop_fraction: float
    opponent_coop_fraction: float


def simulate_encounter(
    focal: Strategy, opponent: Strategy, spec: GameSpec
) -> EncounterTrace:
    """Play all rounds between two strategies, applying guilt costs as they
    arise.

    Each round both sides act (C or D), receive base payoffs, and any
    guilt-prone side that defected pays gamma_s if social (assessment of
    the co-player, every defecting round) and gamma if its guilt
    triggered; an adaptive side switches permanently to C at its first
    guilt episode.  State does not carry over between encounters.
    """
    pay = spec.payoffs
    base = {
        ("C", "C"): pay.R,
        ("C", "D"): pay.S,
        ("D", "C"): pay.T,
        ("D", "D"): pay.P,
    }
    gamma, gamma_s = spec.guilt.gamma, spec.guilt.gamma_s

    strat = (focal, opponent)
    switched = [False, False]
    g = [0, 0]
    base_parts: tuple[list[float], list[float]] = ([], [])
    gamma_parts: tuple[list[float], list[float]] = ([], [])
    gamma_s_parts: tuple[list[float], list[float]] = ([], [])
    coop_count = [0, 0]
    records: list[EncounterRound] = []

    for rnd in range(1, spec.omega + 1):
        acts = tuple(
            "C" if s is Strategy.C or (s.adaptive and sw) else "D"
            for s, sw in zip(strat, switched)
        )
        g_before = g[0]
        round_gamma = [0.0, 0.0]
        round_gamma_s = [0.0, 0.0]
        for side in (0, 1):
            s = strat[side]
            if acts[side] == "C":
                coop_count[side] += 1
            base_parts[side].append(base[(acts[side], acts[1 - side])])
            if acts[side] == "D" and s.guilt_prone:
                if s.social:
                    round_gamma_s[side] = gamma_s
                    gamma_s_parts[side].append(gamma_s)
                if guilt_trigger(s, strat[1 - side]):
                    # wrongdoing pushes g past the zero threshold; alleviation
                    # pays gamma and restores it immediately
                    g[side] += 1
                    g[side] -= 1
                    round_gamma[side] = gamma
                    gamma_parts[side].append(gamma)
                    if s.adaptive:
                        switched[side] = True
        records.append(
            EncounterRound(
                round=rnd,
                focal_action=acts[0],
                opponent_action=acts[1],
                focal_base_payoff=base_parts[0][-1],
                g_before=g_before,
                g_after=g[0],
                gamma_paid=round_gamma[0],
                gamma_s_paid=round_gamma_s[0],
            )
        )

    totals = [
        math.fsum(base_parts[i])
        - math.fsum(gamma_parts[i])
        - math.fsum(gamma_s_parts[i])
        for i in (0, 1)
    ]
    return EncounterTrace(
        rounds=tuple(records),
        focal_total=totals[0],
        opponent_total=totals[1],
        focal_average=totals[0] / spec.omega,
        opponent_average=totals[1] / spec.omega,
        focal_coop_fraction=coop_count[0] / spec.omega,
        opponent_coop_fraction=coop_count[1] / spec.omega,
    )


def payoff_matrix(spec: GameSpec) -> np.ndarray:
    """6x6 per-round-average payoff matrix for the row player.

    Row/column order follows `STRATEGIES`.  Entries are closed forms in
    T, R, P, S, gamma, gamma_s and the number of rounds; `simulate_encounter`
    reproduces every entry independently.
    """
    T, R, P, S = spec.payoffs.T, spec.payoffs.R, spec.payoffs.P, spec.payoffs.S
    ga, gs = spec.guilt.gamma, spec.guilt.gamma_s
    om = float(spec.omega)
    th = om - 1.0  # rounds after the first

    return np.array(
        [
            [R, S, S, (S + R * th) / om, S, (S + R * th) / om],
            [T, P, P, (P + T * th) / om, P, P],
            [
                T - ga,
                P - ga,
                P - ga,
                (P + T * th) / om - ga,
                P - ga,
                (P + T * th) / om - ga,
            ],
            [
                (T - ga + R * th) / om,
                (P - ga + S * th) / om,
                (P - ga + S * th) / om,
                (P - ga + R * th) / om,
                (P - ga + S * th) / om,
                (P - ga + R * th) / om,
            ],
            [
                T - ga - gs,
                P - gs,
                P - ga - gs,
                (P + T * th) / om - ga - gs,
                P - ga - gs,
                (P + T * th) / om - ga - gs,
            ],
            [
                (T - ga - gs + R * th) / om,
                P - gs,
                (P - ga - gs + S * th) / om,
                (P - ga - gs + R * th) / om,
                (P - ga - gs + S * th) / om,
                (P - ga - gs + R * th) / om,
            ],
        ]
    )


def coop_matrix(omega: int) -> np.ndarray:
    """6x6 matrix of the fraction of rounds the row strategy cooperates.

    Action choices depend only on the strategy pair, never on payoff
    values, so the matrix is obtained by replaying encounters under a
    placeholder parameterization.
    """
    spec = GameSpec(
        payoffs=PayoffEntries(T=2.0, R=1.0, P=0.0, S=-1.0),
        omega=omega,
        guilt=GuiltParams(gamma=0.0, gamma_s=0.0),
    )
    out = np.empty((6, 6))
    for a in STRATEGIES:
        for b in STRATEGIES:
            out[a.index, b.index] = simulate_encounter(a, b, spec).focal_coop_fraction
    return out

"""Evolutionary dynamics of guilt-prone strategies in the iterated
donation game, on well-mixed, lattice, and scale-free populations."""

from .abm import (
    NeighborhoodTable,
    PopulationState,
    RunResult,
    SimConfig,
    TimeSeries,
    cooperation_level,
    evolution_step,
    init_population,
    neighborhood_composition,
    node_fitness,
    run,
)
from .game import (
    STRATEGIES,
    STRATEGY_NAMES,
    DonationParams,
    EncounterRound,
    EncounterTrace,
    GameSpec,
    GuiltParams,
    PayoffEntries,
    Strategy,
    coop_matrix,
    donation_payoffs,
    guilt_trigger,
    payoff_matrix,
    simulate_encounter,
)
from .networks import (
    BaSpec,
    DegreeSummary,
    Network,
    build_complete,
    build_lattice,
    build_scale_free,
    degree_summary,
    load_edgelist,
    save_edgelist,
)
from .wellmixed import (
    EvoParams,
    MarkovModel,
    RiskConditionReport,
    build_markov,
    closed_form_conditions,
    fermi_probability,
    fixation_probability,
    group_payoff,
    risk_dominant,
    step_probabilities,
    transition_directions,
)

__version__ = "0.1.0"

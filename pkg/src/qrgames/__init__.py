"""Hidden-matching quantum retrieval games.

Matching families and independence certificates, selective and physical game
values, coherent-state protocols with detector imperfections, and seeded
Monte Carlo simulation of the honest strategy.
"""

from .coherent import (
    CoherentGameParams,
    cheating_value,
    curve,
    curve_to_csv,
    ideal_winning,
    imperfect_winning,
)
from .game import (
    GameValues,
    HiddenMatchingGame,
    honest_success_probability,
    selective_value,
    selective_value_sampled,
)
from .matchings import (
    Matching,
    canonical_family,
    is_independent,
    load_family,
    save_family,
    sextet_family,
)
from .montecarlo import EstimateReport, adjudicate_p1, run_trials, simulate_trial
from .sdp import DiscriminationProblem, SDPSolution, physical_value

__all__ = [
    "CoherentGameParams",
    "DiscriminationProblem",
    "EstimateReport",
    "GameValues",
    "HiddenMatchingGame",
    "Matching",
    "SDPSolution",
    "adjudicate_p1",
    "canonical_family",
    "cheating_value",
    "curve",
    "curve_to_csv",
    "honest_success_probability",
    "ideal_winning",
    "imperfect_winning",
    "is_independent",
    "load_family",
    "physical_value",
    "run_trials",
    "save_family",
    "selective_value",
    "selective_value_sampled",
    "sextet_family",
    "simulate_trial",
]

__version__ = "0.1.0"

"""Randomised finite-memory strategies for stochastic Muller games."""
from .arena import Arena, attractor, subarena, validate
from .condition import MullerCondition, all_conditions
from .players import ADAM, EVE, RANDOM, Owner
from .solver import solve, synthesize, synthesize_on_region
from .strategy import StrategyTransducer, SupportStrategy, product
from .verifier import Verdict, check_almost_sure, check_sure_win, enumerate_support_strategies
from .zielonka import (
    build_zielonka_dag,
    build_zielonka_tree,
    memory_number_m,
    memory_number_mU,
    memory_number_r,
)

__version__ = "0.1.0"

__all__ = [
    "ADAM", "EVE", "RANDOM", "Owner",
    "Arena", "attractor", "subarena", "validate",
    "MullerCondition", "all_conditions",
    "solve", "synthesize", "synthesize_on_region",
    "StrategyTransducer", "SupportStrategy", "product",
    "Verdict", "check_almost_sure", "check_sure_win", "enumerate_support_strategies",
    "build_zielonka_dag", "build_zielonka_tree",
    "memory_number_m", "memory_number_mU", "memory_number_r",
]

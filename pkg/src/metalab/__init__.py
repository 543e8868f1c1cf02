"""Metaheuristic optimization laboratory."""
from .core import (Budget, BudgetExhausted, ConfigError, ContractError, Individual,
                   Population, SearchSpace, evaluate, init_population, repair,
                   run_population_loop, run_single_solution_loop)
from .kernels import BACKEND
from .rng import RngStream, mix64

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Budget", "BudgetExhausted", "ConfigError", "ContractError", "Individual",
    "Population", "RngStream", "SearchSpace", "evaluate", "init_population", "mix64",
    "repair", "run_population_loop", "run_single_solution_loop",
]

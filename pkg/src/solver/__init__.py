"""
UVC Voltage Risk - Solver Module Initialization
In-repo LP and binary MILP solvers for the risk-management problems
"""

from .problem import (INF, LpBuilder, LpProblem, MilpProblem, SolveResult, SolveStatus, lp_text,
                      write_lp)
from .simplex import SolverOptions, solve_lp
from .branch_bound import solve_milp

__all__ = [
    "INF", "LpBuilder", "LpProblem", "MilpProblem", "SolveResult", "SolveStatus", "lp_text",
    "write_lp", "SolverOptions", "solve_lp", "solve_milp",
]

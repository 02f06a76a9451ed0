"""Exact maximum-weight assignment (Boolean MPE) and weighted model counting
for XOR-CNF formulas.

The pipeline has two phases: plan a project-join tree over the clauses, then
valuate it with algebraic decision diagrams, recording derivative signs so a
maximizing assignment can be reconstructed afterwards.
"""

from .benchgen import ChainSpec, gen_chain, gen_random
from .diagram import DerivativeSign, DiagramManager, Function
from .errors import GuardError, InternalError
from .executor import (
    CheckpointFailure,
    SolveResult,
    SolveStats,
    count,
    solve,
    solve_monolithic,
    valuate,
    verify_checkpoints,
)
from .formula import (
    Assignment,
    Clause,
    ClauseKind,
    Formula,
    Literal,
    ParseError,
    WeightFunction,
    evaluate_clause,
    evaluate_formula,
    evaluate_weight,
    format_formula,
    parse_formula,
)
from .oracle import OracleResult, brute_solve
from .planner import (
    Heuristic,
    PjtNode,
    ProjectJoinTree,
    Violation,
    heuristic_order,
    plan,
    validate,
)
from .wcnf import ExportError, WcnfExport, export_wcnf, format_wcnf

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "ChainSpec",
    "CheckpointFailure",
    "Clause",
    "ClauseKind",
    "DerivativeSign",
    "DiagramManager",
    "ExportError",
    "Formula",
    "Function",
    "GuardError",
    "Heuristic",
    "InternalError",
    "Literal",
    "OracleResult",
    "ParseError",
    "PjtNode",
    "ProjectJoinTree",
    "SolveResult",
    "SolveStats",
    "Violation",
    "WcnfExport",
    "WeightFunction",
    "brute_solve",
    "count",
    "evaluate_clause",
    "evaluate_formula",
    "evaluate_weight",
    "export_wcnf",
    "format_formula",
    "format_wcnf",
    "gen_chain",
    "gen_random",
    "heuristic_order",
    "parse_formula",
    "plan",
    "solve",
    "solve_monolithic",
    "validate",
    "valuate",
    "verify_checkpoints",
]

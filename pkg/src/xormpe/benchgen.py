"""Random instance generators.

All randomness comes from Python's Mersenne Twister (random.Random) seeded
explicitly, so outputs are reproducible across runs and platforms. Draw
order is part of the contract: chain instances draw each clause's kind then
its literal polarities (variables ascending), clause by clause, then one
weight-orientation coin per variable, variables ascending.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .formula import Clause, ClauseKind, Formula, Literal, WeightFunction


@dataclass(frozen=True)
class ChainSpec:
    n: int
    k: int
    seed: int

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")


def chain_filename(spec: ChainSpec) -> str:
    return f"chain_n{spec.n}_k{spec.k}_s{spec.seed}.xcnf"


def gen_chain(spec: ChainSpec) -> tuple[Formula, WeightFunction]:
    """Sliding-window instance: clause i covers variables i..i+k-1, each
    clause a fair coin between xor and disjunction, polarities uniform, and
    every variable weighted (10, 100) or (100, 10) by a fair coin."""
    rng = random.Random(spec.seed)
    clauses = []
    for start in range(1, spec.n - spec.k + 2):
        kind = ClauseKind.XOR if rng.random() < 0.5 else ClauseKind.DISJUNCTION
        lits = tuple(
            Literal(var, rng.random() < 0.5)
            for var in range(start, start + spec.k)
        )
        clauses.append(Clause(kind, lits))
    weights = WeightFunction()
    for var in range(1, spec.n + 1):
        if rng.random() < 0.5:
            weights.set_literal(-var, 10.0)
            weights.set_literal(var, 100.0)
        else:
            weights.set_literal(-var, 100.0)
            weights.set_literal(var, 10.0)
    return Formula(spec.n, clauses), weights


def gen_random(n: int, m: int, max_len: int, xor_prob: float, seed: int) -> tuple[Formula, WeightFunction]:
    """Fuzzing corpus generator: m clauses of uniform length in [1, max_len]
    over distinct variables, xor with probability xor_prob, weights uniform
    in [0, 1] rounded to 3 decimals."""
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    if not (1 <= max_len <= n):
        raise ValueError(f"need 1 <= max_len <= n, got max_len={max_len}, n={n}")
    if not (0.0 <= xor_prob <= 1.0):
        raise ValueError("xor_prob must be in [0, 1]")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        length = rng.randint(1, max_len)
        variables = rng.sample(range(1, n + 1), length)
        kind = ClauseKind.XOR if rng.random() < xor_prob else ClauseKind.DISJUNCTION
        lits = tuple(Literal(var, rng.random() < 0.5) for var in variables)
        clauses.append(Clause(kind, lits))
    weights = WeightFunction()
    for var in range(1, n + 1):
        weights.set_literal(-var, round(rng.random(), 3))
        weights.set_literal(var, round(rng.random(), 3))
    return Formula(n, clauses), weights

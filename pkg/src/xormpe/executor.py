"""Tree-guided solving: valuation, maximizer reconstruction, and counting.

A solve walks a project-join tree bottom-up. Each leaf turns into the clause's
indicator diagram; each internal node joins its children's results and then,
variable by variable (ascending index), joins the variable's weight function,
records the derivative sign of the weighted partial product, and projects the
variable out. The root's valuation is a constant holding the maximum; the
recorded signs are popped in reverse to rebuild a maximizing assignment. The
sign must be taken after the weight joins in: it has to cover every remaining
factor that depends on the variable, or unconstrained variables would tie and
lose their weight preference.

`verify_checkpoints` reruns a solve under instrumentation that maintains the
set of eliminated variables and the multiset of active functions, checking at
every step - by exhaustive enumeration, so only small instances - that the
active product equals the projected master function and that each recorded
sign extends maximizers correctly.
"""

from __future__ import annotations

import math
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .diagram import DerivativeSign, DiagramManager, Function
from .errors import GuardError, InternalError
from .formula import Assignment, ClauseKind, Formula, WeightFunction
from .planner import ProjectJoinTree

MONOLITHIC_LIMIT = 20
VERIFY_LIMIT = 16

_NEG_INF = float("-inf")


@dataclass
class SolveStats:
    width: int = 0
    peak_nodes: int = 0
    exec_seconds: float = 0.0
    plan_seconds: float = 0.0
    largest_dot: str | None = None


@dataclass
class SolveResult:
    maximum: float
    maximizer: dict[int, bool]
    no_model: bool
    mode: str
    stats: SolveStats

    def maximizer_literals(self) -> list[int]:
        return [var if self.maximizer[var] else -var for var in sorted(self.maximizer)]


class _Fault:
    """Test-only corruption switches threaded through a solve."""

    KINDS = ("skip_weight_join", "push_after_project", "tie_break_low")

    def __init__(self, kind: str | None):
        if kind is not None and kind not in self.KINDS:
            raise ValueError(f"unknown fault {kind!r}")
        self.kind = kind
        self._skip_armed = kind == "skip_weight_join"

    def take_skip_weight(self) -> bool:
        # only the first weight join is skipped
        if self._skip_armed:
            self._skip_armed = False
            return True
        return False

    @property
    def swap_push_project(self) -> bool:
        return self.kind == "push_after_project"

    @property
    def tie_low(self) -> bool:
        return self.kind == "tie_break_low"


class _SizeTracker:
    def __init__(self, manager: DiagramManager, keep_largest: bool):
        self.manager = manager
        self.peak = 0
        self.keep_largest = keep_largest
        self.largest: Function | None = None

    def note(self, f: Function) -> None:
        size = self.manager.size(f)
        if size > self.peak:
            self.peak = size
            if self.keep_largest:
                self.largest = f


@contextmanager
def _deep_recursion(extra: int):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, extra))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def valuate(
    manager: DiagramManager,
    formula: Formula,
    tree: ProjectJoinTree,
    weights: WeightFunction,
    node: int | None = None,
    stack: list[DerivativeSign] | None = None,
) -> Function:
    """Valuation of one tree node (the root by default). Derivative signs are
    pushed onto `stack`, one per projected variable, before each projection."""
    if node is None:
        node = tree.root
    with _deep_recursion(4 * len(tree.nodes) + 200):
        return _valuate(manager, formula, tree, weights, node, stack,
                        project="exists", fault=_Fault(None), observer=None,
                        tracker=None)


def _valuate(manager, formula, tree, weights, node_id, stack, project, fault,
             observer, tracker):
    if observer:
        observer.enter(node_id)
    node = tree.nodes[node_id]
    if node.is_leaf:
        f = manager.from_clause(formula.clauses[node.clause_index])
        if tracker:
            tracker.note(f)
    else:
        f = manager.one()
        if observer:
            observer.internal_start(node_id, f)
        for child in node.children:
            h = _valuate(manager, formula, tree, weights, child, stack, project,
                         fault, observer, tracker)
            previous = f
            f = manager.join(previous, h)
            if tracker:
                tracker.note(f)
            if observer:
                observer.child_joined(node_id, h, previous, f)
        if observer:
            observer.joins_done(node_id, f)
        for x in sorted(node.pi):
            weight_func = manager.literal_weight(x, *weights.pair(x))
            # the weight joins in before the sign is recorded: the sign must
            # cover every remaining factor that depends on x, and at this
            # point that is exactly the partial product times the weight
            weighted = f if fault.take_skip_weight() else manager.join(f, weight_func)
            if fault.swap_push_project:
                previous = f
                f = _project_step(manager, weighted, x, project)
                if stack is not None:
                    sign = manager.derivative_sign(f, x)
                    stack.append(sign)
                    if observer:
                        observer.sign_pushed(node_id, x, sign)
            else:
                if stack is not None:
                    sign = manager.derivative_sign(weighted, x,
                                                   prefer_high_on_tie=not fault.tie_low)
                    stack.append(sign)
                    if observer:
                        observer.sign_pushed(node_id, x, sign)
                previous = f
                f = _project_step(manager, weighted, x, project)
            if tracker:
                tracker.note(f)
            if observer:
                observer.projected(node_id, x, previous, weight_func, f)
    if observer:
        observer.exit(node_id, f)
    return f


def _project_step(manager, weighted, x, project):
    if project == "exists":
        return manager.exists_project(weighted, x)
    return manager.add_project(weighted, x)


def solve(
    formula: Formula,
    weights: WeightFunction,
    tree: ProjectJoinTree,
    mode: str = "linear",
    var_order: list[int] | None = None,
    want_dot: bool = False,
    _fault: str | None = None,
    _observer=None,
) -> SolveResult:
    """Maximum of the weighted formula plus one maximizing assignment.

    mode "linear" works on raw weights; mode "log10" stores log10 weights in
    the terminals (the maximum comes back as a log10 value), which keeps huge
    weight products representable.
    """
    if mode not in ("linear", "log10"):
        raise ValueError(f"unknown mode {mode!r}")
    started = time.perf_counter()
    manager = DiagramManager(var_order or list(formula.variables),
                             log_mode=(mode == "log10"))
    stack: list[DerivativeSign] = []
    tracker = _SizeTracker(manager, want_dot)
    fault = _Fault(_fault)
    if _observer:
        _observer.setup(manager)
    with _deep_recursion(4 * len(tree.nodes) + 200):
        root_value = _valuate(manager, formula, tree, weights, tree.root, stack,
                              "exists", fault, _observer, tracker)
    if root_value.support:
        raise InternalError("root valuation is not constant")
    maximum = root_value.constant_value()

    if len(stack) != formula.var_count:
        raise InternalError(
            f"sign stack holds {len(stack)} entries for {formula.var_count} variables")
    if len({sign.var for sign in stack}) != len(stack):
        raise InternalError("sign stack repeats a variable")
    if _observer:
        _observer.after_valuate(maximum)

    maximizer: dict[int, bool] = {}
    while stack:
        sign = stack.pop()
        if sign.var in maximizer:
            raise InternalError(f"variable {sign.var} assigned twice")
        try:
            maximizer[sign.var] = sign.choose(maximizer)
        except KeyError as exc:
            raise InternalError(f"sign condition not ready: {exc}") from exc
        if _observer:
            _observer.popped(sign.var, maximizer)

    no_model = maximum == (_NEG_INF if mode == "log10" else 0.0)
    stats = SolveStats(
        width=tree.width(),
        peak_nodes=tracker.peak,
        exec_seconds=time.perf_counter() - started,
    )
    if want_dot and tracker.largest is not None:
        stats.largest_dot = manager.to_dot(tracker.largest)
    return SolveResult(maximum, maximizer, no_model, mode, stats)


def count(formula: Formula, weights: WeightFunction, tree: ProjectJoinTree) -> float:
    """Weighted model count via the same tree, with additive projection in
    place of existential. Linear domain only."""
    manager = DiagramManager(list(formula.variables), log_mode=False)
    with _deep_recursion(4 * len(tree.nodes) + 200):
        root_value = _valuate(manager, formula, tree, weights, tree.root, None,
                              "add", _Fault(None), None, None)
    if root_value.support:
        raise InternalError("root valuation is not constant")
    return root_value.constant_value()


def solve_monolithic(
    formula: Formula,
    weights: WeightFunction,
    mode: str = "linear",
    limit: int = MONOLITHIC_LIMIT,
) -> SolveResult:
    """Reference path: join every clause and weight into one diagram, then
    eliminate variables highest index first, keeping each intermediate so the
    maximizer can be rebuilt lowest index first."""
    if mode not in ("linear", "log10"):
        raise ValueError(f"unknown mode {mode!r}")
    n = formula.var_count
    if n > limit:
        raise GuardError(f"monolithic limit exceeded: {n} > {limit} variables")
    started = time.perf_counter()
    manager = DiagramManager(list(formula.variables), log_mode=(mode == "log10"))
    tracker = _SizeTracker(manager, False)

    f = manager.one()
    for clause in formula.clauses:
        f = manager.join(f, manager.from_clause(clause))
        tracker.note(f)
    for var in formula.variables:
        f = manager.join(f, manager.literal_weight(var, *weights.pair(var)))
        tracker.note(f)

    chain: dict[int, Function] = {n: f}
    for var in range(n, 0, -1):
        f = manager.exists_project(f, var)
        tracker.note(f)
        chain[var - 1] = f
    if chain[0].support:
        raise InternalError("fully projected function is not constant")
    maximum = chain[0].constant_value()

    maximizer: dict[int, bool] = {}
    for var in range(1, n + 1):
        sign = manager.derivative_sign(chain[var], var)
        maximizer[var] = sign.choose(maximizer)

    no_model = maximum == (_NEG_INF if mode == "log10" else 0.0)
    stats = SolveStats(width=n, peak_nodes=tracker.peak,
                       exec_seconds=time.perf_counter() - started)
    return SolveResult(maximum, maximizer, no_model, mode, stats)


# --------------------------------------------------------------- verification


@dataclass
class CheckpointFailure:
    checkpoint: str
    message: str
    node: int | None = None
    variable: int | None = None


class _CheckFailed(Exception):
    def __init__(self, failure: CheckpointFailure):
        super().__init__(failure.message)
        self.failure = failure


class _Verifier:
    """Instrumentation mirroring the annotated execution: E is the eliminated
    set, A the multiset of active functions (by node id). All checks compare
    against a dense enumeration of the weighted formula."""

    def __init__(self, formula: Formula, weights: WeightFunction, rtol: float = 1e-9):
        self.formula = formula
        self.weights = weights
        self.rtol = rtol
        self.n = formula.var_count
        self.size = 1 << self.n
        indices = np.arange(self.size, dtype=np.int64)
        self.bits = {
            var: ((indices >> (var - 1)) & 1) == 1
            for var in formula.variables
        }
        master = np.ones(self.size, dtype=np.float64)
        for var in formula.variables:
            w_neg, w_pos = weights.pair(var)
            master *= np.where(self.bits[var], w_pos, w_neg)
        for clause in formula.clauses:
            value = np.zeros(self.size, dtype=bool)
            for lit in clause.literals:
                if clause.kind is ClauseKind.DISJUNCTION:
                    value |= self.bits[lit.var] == lit.positive
                else:
                    value ^= self.bits[lit.var] == lit.positive
            master *= value
        self.master = master
        self.manager: DiagramManager | None = None
        self.eliminated: set[int] = set()
        self.active: dict[int, int] = {}  # node id -> multiplicity
        self._grids: dict[int, np.ndarray] = {}

    # -- bookkeeping ------------------------------------------------------

    def setup(self, manager: DiagramManager) -> None:
        if manager.log_mode:
            raise ValueError("verification runs in the linear domain only")
        self.manager = manager
        for clause in self.formula.clauses:
            self._insert(manager.from_clause(clause))
        for var in self.formula.variables:
            self._insert(manager.literal_weight(var, *self.weights.pair(var)))

    def _insert(self, f: Function) -> None:
        self.active[f.node] = self.active.get(f.node, 0) + 1

    def _remove(self, f: Function) -> None:
        count = self.active.get(f.node, 0)
        if count <= 0:
            raise InternalError(f"active multiset misses node {f.node}")
        if count == 1:
            del self.active[f.node]
        else:
            self.active[f.node] = count - 1

    def _grid(self, node: int) -> np.ndarray:
        cached = self._grids.get(node)
        if cached is not None:
            return cached
        manager = self.manager
        if manager.is_terminal(node):
            grid = np.full(self.size, manager._value[node], dtype=np.float64)
        else:
            var = manager._order[manager._level[node]]
            grid = np.where(self.bits[var],
                            self._grid(manager._high[node]),
                            self._grid(manager._low[node]))
        self._grids[node] = grid
        return grid

    def _active_product(self) -> np.ndarray:
        product = np.ones(self.size, dtype=np.float64)
        for node, multiplicity in self.active.items():
            grid = self._grid(node)
            for _ in range(multiplicity):
                product = product * grid
        return product

    def _reduce_max(self, grid: np.ndarray, variables) -> np.ndarray:
        shaped = grid.reshape((2,) * self.n) if self.n else grid
        for var in variables:
            axis = self.n - var
            shaped = np.broadcast_to(
                shaped.max(axis=axis, keepdims=True), (2,) * self.n)
        return np.asarray(shaped).reshape(-1)

    def _close(self, a: np.ndarray, b: np.ndarray) -> bool:
        return np.allclose(a, b, rtol=self.rtol, atol=0.0)

    def _check_active(self, checkpoint: str, node: int | None, variable: int | None = None):
        expected = self._reduce_max(self.master, self.eliminated)
        got = self._active_product()
        if not self._close(got, expected):
            raise _CheckFailed(CheckpointFailure(
                checkpoint,
                f"active product deviates from the projected master at node {node}",
                node=node, variable=variable))

    # -- events from the executor ------------------------------------------

    def enter(self, node: int) -> None:
        self._check_active("pre-condition", node)

    def internal_start(self, node: int, f: Function) -> None:
        self._insert(f)

    def child_joined(self, node: int, h: Function, previous: Function, joined: Function) -> None:
        self._remove(h)
        self._remove(previous)
        self._insert(joined)

    def joins_done(self, node: int, f: Function) -> None:
        self._check_active("join-condition", node)

    def sign_pushed(self, node: int, var: int, sign: DerivativeSign) -> None:
        # if t maximizes the (var + eliminated)-projection, t extended by the
        # recorded sign must maximize the eliminated-projection
        c_after = self._reduce_max(self.master, self.eliminated | {var})
        c_before = self._reduce_max(self.master, self.eliminated)
        overall = c_after.max()
        maximizers = c_after == overall
        condition = self._grid(sign.condition.node) == 1.0
        shaped = c_before.reshape((2,) * self.n)
        axis = self.n - var
        hi = np.broadcast_to(shaped.take([1], axis=axis), (2,) * self.n).reshape(-1)
        lo = np.broadcast_to(shaped.take([0], axis=axis), (2,) * self.n).reshape(-1)
        chosen = np.where(condition, hi, lo)
        if not np.allclose(chosen[maximizers], overall, rtol=self.rtol, atol=0.0):
            raise _CheckFailed(CheckpointFailure(
                "maximizer-push",
                f"sign for variable {var} fails to extend maximizers at node {node}",
                node=node, variable=var))

    def projected(self, node: int, var: int, previous: Function,
                  weight_func: Function, result: Function) -> None:
        self._remove(previous)
        self._remove(weight_func)
        self._insert(result)
        self.eliminated.add(var)
        self._check_active("project-condition", node, variable=var)

    def exit(self, node: int, f: Function) -> None:
        self._check_active("post-condition", node)

    def after_valuate(self, maximum: float) -> None:
        if self.eliminated != set(self.formula.variables):
            raise _CheckFailed(CheckpointFailure(
                "maximizer-const", "not all variables were eliminated"))
        overall = self.master.max() if self.size else self.master
        if not math.isclose(maximum, float(overall), rel_tol=self.rtol, abs_tol=0.0):
            raise _CheckFailed(CheckpointFailure(
                "maximizer-const",
                f"root value {maximum} deviates from enumerated maximum {overall}"))

    def popped(self, var: int, assignment: Assignment) -> None:
        self.eliminated.discard(var)
        mask = np.ones(self.size, dtype=bool)
        for v, value in assignment.items():
            mask &= self.bits[v] == value
        reachable = self.master[mask].max()
        overall = self.master.max()
        if not math.isclose(float(reachable), float(overall),
                            rel_tol=self.rtol, abs_tol=0.0):
            raise _CheckFailed(CheckpointFailure(
                "maximizer-pop",
                f"after assigning variable {var}, best completion {reachable} "
                f"deviates from maximum {overall}",
                variable=var))


def verify_checkpoints(
    formula: Formula,
    weights: WeightFunction,
    tree: ProjectJoinTree,
    limit: int = VERIFY_LIMIT,
    _fault: str | None = None,
) -> CheckpointFailure | None:
    """Run a linear-mode solve under full instrumentation.

    Returns None when every checkpoint holds, else the first failure. Only
    feasible for small variable counts (exhaustive enumeration inside)."""
    if formula.var_count > limit:
        raise GuardError(
            f"verification limit exceeded: {formula.var_count} > {limit} variables")
    verifier = _Verifier(formula, weights)
    try:
        solve(formula, weights, tree, mode="linear", _fault=_fault,
              _observer=verifier)
    except _CheckFailed as failed:
        return failed.failure
    return None

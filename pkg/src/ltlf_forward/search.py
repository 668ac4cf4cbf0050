"""Forward AND-OR search for LTLf realizability.

The search is a depth-first traversal of the game graph induced by formula
progression.  OR nodes are agent states; the AND level is walked inline
through :func:`~ltlf_forward.expansion.get_and_arcs`.  States are keyed by
the configured equivalence: the interned formula itself (hash consing) or
its propositional diagram (BDD).

Loops make a node provisionally false.  Every failure remembers the set of
on-path nodes whose provisional answer it relied on (``deps``).  When such a
node finishes, its dependents are updated: a final failure discharges the
dependency, a conditional failure passes its own dependencies on, and a
success reopens the dependents and searches them again (back-propagation).

The traversal uses an explicit stack so that long progression chains do not
hit the interpreter's recursion limit.
"""
from __future__ import annotations

import enum
import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable

from . import formula as fm
from .equivalence import BddEncoder, bdd_eq, hash_eq
from .expansion import FF, BranchPolicy, Move, complete, get_and_arcs, get_or_arcs, restrict
from .formula import Formula, Problem
from .preprocess import Preprocessor
from .transforms import defossilize, propositionalize, xnf

log = logging.getLogger(__name__)


class Mode(enum.Enum):
    HASH = "hash"
    BDD = "bdd"
    HASH_RESTART = "hash-restart"


class Status(enum.Enum):
    UNKNOWN = 0
    SUCCESS = 1
    FAILURE = 2


class StepLimitExceeded(RuntimeError):
    pass


class TimeLimitExceeded(RuntimeError):
    pass


class _ThresholdExceeded(Exception):
    def __init__(self, formula: Formula):
        self.formula = formula


@dataclass(frozen=True)
class SolveConfig:
    mode: Mode = Mode.HASH_RESTART
    policy: BranchPolicy = FF
    threshold_multiplier: int = 3
    preprocess: bool = True
    step_limit: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", Mode(self.mode))
        if self.threshold_multiplier < 1:
            raise ValueError("threshold multiplier must be at least 1")
        if self.mode is Mode.HASH and self.step_limit is None:
            raise ValueError("pure hash-consing mode needs a step limit")


@dataclass
class SearchNode:
    state: Formula
    key: Hashable
    status: Status = Status.UNKNOWN
    loop_tag: bool = False
    depth: int | None = None          # position on the current path, if on it
    cond_deps: frozenset = frozenset()  # non-empty: failed, conditional on these path nodes
    dependents: list = field(default_factory=list)
    move: Move | None = None
    arcs: list = field(default_factory=list)  # (env cube, successor key) under ``move``
    accepting: bool = False

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        return f"SearchNode({self.state}, {self.status.name})"


@dataclass(frozen=True)
class LoopEvent:
    """A successor that was already on the search path."""

    target: Formula
    source: Formula
    agent_move: tuple
    env_move: tuple


@dataclass
class Strategy:
    """Finite-state controller: state ids map to completed agent moves."""

    initial: int
    states: dict[int, Formula]
    moves: dict[int, Move]
    accepting: set[int]
    transitions: dict[int, list[tuple[Move, int]]]
    mode: str
    agent_vars: tuple[str, ...] = ()
    env_vars: tuple[str, ...] = ()

    def next_state(self, state: int, env: dict) -> int | None:
        for cube, succ in self.transitions.get(state, ()):
            if all(env.get(k, False) == v for k, v in cube.items()):
                return succ
        return None

    def to_text(self) -> str:
        lines = [f"initial {self.initial}"]
        for sid in sorted(self.states):
            move = " ".join(f"{v}={int(b)}" for v, b in self.moves[sid].items())
            lines.append(f"state {sid} {fm.to_string(self.states[sid])} move {move}".rstrip())
        for sid in sorted(self.transitions):
            for cube, succ in self.transitions[sid]:
                for bits in _expand_cube(cube, self.env_vars):
                    lines.append(f"next {sid} {bits} {succ}")
        return "\n".join(lines) + "\n"


def _expand_cube(cube: dict, env_vars) -> list[str]:
    if not env_vars:
        return ["-"]
    out = [""]
    for x in env_vars:
        if x in cube:
            out = [s + ("1" if cube[x] else "0") for s in out]
        else:
            out = [s + b for s in out for b in "01"]
    return out


@dataclass
class Verdict:
    realizable: bool
    strategy: Strategy | None
    nodes_expanded: int = 0
    restarts: int = 0
    wall_time: float = 0.0
    mode: str = ""
    loops: list = field(default_factory=list)

    def __bool__(self):
        return self.realizable

    def diagnostics(self) -> dict:
        return {
            "realizable": self.realizable,
            "nodes_expanded": self.nodes_expanded,
            "restarts": self.restarts,
            "mode": self.mode,
            "loops": len(self.loops),
        }


class _Frame:
    """Iteration state of one OR node: the current agent move and its responses."""

    __slots__ = ("node", "or_arcs", "act", "and_arcs", "arcs", "deps", "child", "resp")

    def __init__(self, node, or_arcs):
        self.node = node
        self.or_arcs = or_arcs
        self.act = None
        self.and_arcs = None
        self.arcs = []
        self.deps = set()
        self.child = None
        self.resp = None


class _BackProp:
    """Re-search of the nodes reopened by a success; then reports that success."""

    __slots__ = ("todo",)

    def __init__(self, todo):
        self.todo = deque(todo)


_NO_DEPS = frozenset()


class Solver:
    """One search session over a fixed problem and equivalence mode."""

    def __init__(self, problem: Problem, config: SolveConfig, mode: Mode, encoder: BddEncoder | None = None):
        self.problem = problem
        self.config = config
        self.mode = mode
        self.policy = config.policy
        self.rng = config.policy.rng()
        self.encoder = encoder if encoder is not None else BddEncoder(problem)
        self.pre = Preprocessor(problem, self.encoder) if config.preprocess else None
        self.table: dict[Hashable, SearchNode] = {}
        self.path: list[SearchNode] = []
        self.frames: list = []
        self.loops: list[LoopEvent] = []
        self.expanded = 0
        self.threshold = config.threshold_multiplier * fm.size(problem.formula)
        self.deadline = None

    # -- equivalence ----------------------------------------------------------

    def key(self, psi: Formula) -> Hashable:
        if self.mode is Mode.BDD:
            return self.encoder.state_key(psi)
        return psi

    def equivalent(self, psi1: Formula, psi2: Formula) -> bool:
        return self.key(psi1) == self.key(psi2)

    def node(self, psi: Formula) -> SearchNode:
        k = self.key(psi)
        n = self.table.get(k)
        if n is None:
            n = SearchNode(psi, k)
            self.table[k] = n
        return n

    def _successor(self, psi: Formula) -> SearchNode:
        if self.mode is Mode.HASH_RESTART and psi.size > self.threshold:
            raise _ThresholdExceeded(psi)
        return self.node(psi)

    # -- top level ---------------------------------------------------------------

    def solve(self) -> bool:
        if self.config.time_limit is not None:
            self.deadline = time.monotonic() + self.config.time_limit
        root = self.node(self.problem.formula)
        if fm.is_accepting(root.state):
            self._succeed(root, {}, [], accepting=True)
            return True
        return self.search(root)

    def search(self, start: SearchNode) -> bool:
        """Depth-first search from ``start``, using the current path as context."""
        base = len(self.frames)
        r = self._enter(start)
        if r is not None:
            return r[0]
        return self._run(base)[0]

    # -- the search proper ------------------------------------------------------------

    def _enter(self, n: SearchNode, fr: _Frame | None = None):
        """Immediate answer ``(found, deps)`` for ``n``, or ``None`` after pushing its frame."""
        if n.status is Status.SUCCESS:
            return True, _NO_DEPS
        if n.status is Status.FAILURE:
            return False, _NO_DEPS
        if n.depth is not None:
            n.loop_tag = True
            if fr is not None:
                self.loops.append(LoopEvent(n.state, fr.node.state, tuple(fr.act.items()), tuple(fr.resp.items())))
            return False, frozenset((n,))
        if n.cond_deps:
            return False, n.cond_deps
        psi = n.state
        if fm.is_accepting(psi):
            self._succeed(n, {}, [], accepting=True)
            return True, _NO_DEPS
        if psi is fm.F:
            n.status = Status.FAILURE
            return False, _NO_DEPS
        self._check_limits()
        if self.pre is not None:
            move = self.pre.one_step_realizable(psi)
            if move is not None:
                self._one_step_win(n, move)
                return True, _NO_DEPS
            if self.pre.one_step_unrealizable(psi):
                n.status = Status.FAILURE
                return False, _NO_DEPS
        self.expanded += 1
        n.depth = len(self.path)
        self.path.append(n)
        self.frames.append(_Frame(n, get_or_arcs(psi, self.problem, self.policy, self.rng)))
        return None

    def _check_limits(self):
        limit = self.config.step_limit
        if limit is not None and self.expanded >= limit:
            raise StepLimitExceeded(f"step limit {limit} reached")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeLimitExceeded(f"time limit {self.config.time_limit}s reached")

    def _one_step_win(self, n: SearchNode, move: Move):
        p = restrict(propositionalize(xnf(n.state), self.problem), move)
        arcs = []
        for resp, succ in get_and_arcs(defossilize(p), self.problem, self.policy, self.rng):
            child = self._successor(succ)
            if child.status is not Status.SUCCESS:
                self._succeed(child, {}, [], accepting=True)
            arcs.append((resp, child.key))
        self._succeed(n, move, arcs)

    def _succeed(self, n: SearchNode, move: Move, arcs, accepting=False):
        n.status = Status.SUCCESS
        n.move = complete(move, self.problem.agent_vars)
        n.arcs = arcs
        n.accepting = accepting
        n.cond_deps = _NO_DEPS

    def _run(self, base: int):
        frames = self.frames
        result = None
        while len(frames) > base:
            fr = frames[-1]
            if type(fr) is _BackProp:
                # outcomes of re-searched nodes are recorded in their tags
                result = None
                while fr.todo:
                    d = fr.todo.popleft()
                    if d.status is Status.UNKNOWN and not d.cond_deps and d.depth is None:
                        if self._enter(d) is None:
                            break
                else:
                    frames.pop()
                    result = (True, _NO_DEPS)
                continue
            if result is not None:
                self._deliver(fr, result)
                result = None
            done = self._advance(fr)
            if done is None:
                continue
            frames.pop()
            n = fr.node
            self.path.pop()
            n.depth = None
            if done:
                self._succeed(n, fr.act, fr.arcs)
                reopened = self._reopen(n)
                if reopened:
                    frames.append(_BackProp(reopened))
                    continue
                result = (True, _NO_DEPS)
            else:
                result = self._fail(n, fr.deps)
        return result

    def _deliver(self, fr: _Frame, result):
        found, deps = result
        if found:
            fr.arcs.append((fr.resp, fr.child.key))
        else:
            fr.deps |= deps
            fr.and_arcs = None  # Break: this agent move is refuted

    def _advance(self, fr: _Frame):
        """Step ``fr`` to its next pending child (``None``) or to its verdict."""
        while True:
            if fr.and_arcs is None:
                nxt = next(fr.or_arcs, None)
                if nxt is None:
                    return False
                fr.act, and_node = nxt
                fr.arcs = []
                fr.and_arcs = get_and_arcs(and_node, self.problem, self.policy, self.rng)
            arc = next(fr.and_arcs, None)
            if arc is None:
                return True
            fr.resp, succ = arc
            fr.child = self._successor(succ)
            r = self._enter(fr.child, fr)
            if r is None:
                return None
            self._deliver(fr, r)

    def _fail(self, n: SearchNode, deps) -> tuple[bool, frozenset]:
        deps = frozenset(d for d in deps if d is not n)
        dependents, n.dependents = n.dependents, []
        if not deps:
            n.status = Status.FAILURE
            for d in dependents:
                if n in d.cond_deps:
                    d.cond_deps = d.cond_deps - {n}
                    if not d.cond_deps:
                        d.status = Status.FAILURE
            return False, _NO_DEPS
        n.cond_deps = deps
        for t in deps:
            t.dependents.append(n)
        for d in dependents:
            if n in d.cond_deps:
                d.cond_deps = (d.cond_deps - {n}) | deps
                for t in deps:
                    t.dependents.append(d)
        return False, deps

    def _reopen(self, n: SearchNode) -> list[SearchNode]:
        """Clear the conditional failures that assumed ``n`` was false."""
        out = []
        dependents, n.dependents = n.dependents, []
        for d in dependents:
            if n in d.cond_deps:
                d.cond_deps = _NO_DEPS
                out.append(d)
        return out

    # -- strategy extraction -------------------------------------------------------------

    def strategy(self) -> Strategy:
        root = self.table[self.key(self.problem.formula)]
        ids = {root.key: 0}
        order = [root]
        i = 0
        while i < len(order):
            n = order[i]
            i += 1
            for _, k in n.arcs:
                if k not in ids:
                    ids[k] = len(order)
                    order.append(self.table[k])
        states, moves, accepting, transitions = {}, {}, set(), {}
        for n in order:
            sid = ids[n.key]
            states[sid] = n.state
            moves[sid] = complete(n.move or {}, self.problem.agent_vars)
            if n.accepting:
                accepting.add(sid)
            else:
                transitions[sid] = [(dict(c), ids[k]) for c, k in n.arcs]
        return Strategy(0, states, moves, accepting, transitions, self.mode.value,
                        self.problem.agent_vars, self.problem.env_vars)


def solve(problem: Problem, config: SolveConfig | None = None, encoder: BddEncoder | None = None) -> Verdict:
    """Decide realizability of ``problem`` and extract a strategy when one exists."""
    config = config or SolveConfig()
    start = time.perf_counter()
    restarts = expanded = 0
    loops: list[LoopEvent] = []
    mode = config.mode
    while True:
        solver = Solver(problem, config, mode, encoder)
        try:
            found = solver.solve()
            break
        except _ThresholdExceeded as exc:
            log.info("size %d exceeds threshold %d; restarting with BDD equivalence",
                     fm.size(exc.formula), solver.threshold)
            expanded += solver.expanded
            loops += solver.loops
            restarts += 1
            mode = Mode.BDD
    expanded += solver.expanded
    loops += solver.loops
    strategy = solver.strategy() if found else None
    return Verdict(found, strategy, expanded, restarts, time.perf_counter() - start, mode.value, loops)


def equivalent(psi1: Formula, psi2: Formula, config: SolveConfig, problem: Problem | None = None) -> bool:
    """The equivalence check used by ``config``'s mode (hash consing or BDD)."""
    if config.mode is Mode.BDD:
        return bdd_eq(psi1, psi2, problem)
    return hash_eq(psi1, psi2)

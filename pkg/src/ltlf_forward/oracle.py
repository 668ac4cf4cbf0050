"""Explicit-automaton ground truth.

The DFA of a formula is built by breadth-first progression over every full
step in ``2^(Y ∪ X)``, merging states whose diagrams (and empty-trace
verdicts) coincide.  Realizability is then a backward attractor computation
in which the agent picks its outputs before seeing the inputs.

:class:`GameGraph` accepts several initial formulas over one variable
partition and shares their state space, which is how the test-suite checks
large formula families; :func:`build_dfa` is the single-formula view.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from . import formula as fm
from .equivalence import BddEncoder
from .formula import Formula, Problem
from .transforms import progress, trim_progress_cache

# progression memo entries kept across GameGraph.add calls
_PROGRESS_CACHE_LIMIT = 200_000


class DfaLimitExceeded(RuntimeError):
    pass


def full_steps(variables: Sequence[str]) -> list[frozenset]:
    """All ``2^n`` steps, in bit-vector order (first variable is the most significant bit)."""
    return [frozenset(v for v, b in zip(variables, bits) if b) for bits in product((0, 1), repeat=len(variables))]


class GameGraph:
    """Shared explicit state space for formulas over one agent/env partition."""

    def __init__(self, agent_vars: Sequence[str], env_vars: Sequence[str], max_vars: int = 8, max_states: int = 4096):
        self.agent_vars = tuple(agent_vars)
        self.env_vars = tuple(env_vars)
        if len(self.agent_vars) + len(self.env_vars) > max_vars:
            raise DfaLimitExceeded(f"{len(self.agent_vars) + len(self.env_vars)} variables exceed the limit {max_vars}")
        self.max_states = max_states
        self.problem = Problem(fm.T, self.agent_vars, self.env_vars)
        self.encoder = BddEncoder(self.problem)
        self.agent_steps = full_steps(self.agent_vars)
        self.env_steps = full_steps(self.env_vars)
        # successor table: delta[s][i * len(env_steps) + j] for agent step i, env step j
        self.states: list[Formula] = []
        self.accepting: list[bool] = []
        self.delta: list[list[int]] = []
        self._ids: dict = {}
        self._win: list[bool] | None = None
        self._win_move: list[int] = []
        self.layers: list[int] = []

    def state_id(self, f: Formula) -> int:
        return self._ids.get(self.encoder.state_key(f), -1)

    def add(self, f: Formula) -> int:
        """Add ``f`` and everything reachable from it; returns its state id."""
        key = self.encoder.state_key(f)
        sid = self._ids.get(key)
        if sid is not None:
            return sid
        root = self._new(key, f)
        queue = [root]
        while queue:
            s = queue.pop()
            rep = self.states[s]
            row = []
            for y in self.agent_steps:
                for x in self.env_steps:
                    g = progress(rep, y | x)
                    k = self.encoder.state_key(g)
                    t = self._ids.get(k)
                    if t is None:
                        t = self._new(k, g)
                        queue.append(t)
                    row.append(t)
            self.delta[s] = row
        trim_progress_cache(_PROGRESS_CACHE_LIMIT)
        self._win = None
        return root

    def _new(self, key, f: Formula) -> int:
        if len(self.states) >= self.max_states:
            raise DfaLimitExceeded(f"more than {self.max_states} states")
        sid = len(self.states)
        self._ids[key] = sid
        self.states.append(f)
        self.accepting.append(fm.is_accepting(f))
        self.delta.append([])
        return sid

    def successor(self, s: int, step: frozenset) -> int:
        i = self.agent_steps.index(step & frozenset(self.agent_vars))
        j = self.env_steps.index(step & frozenset(self.env_vars))
        return self.delta[s][i * len(self.env_steps) + j]

    def solve(self) -> list[bool]:
        """Least fixpoint of the agent's attractor to the accepting states.

        Counter-based: ``pending[s][i]`` counts the responses to agent step
        ``i`` whose successor is not yet winning.  Rounds are processed in
        order so ``layers`` records the winning-set size after each one.
        """
        if self._win is not None:
            return self._win
        n = len(self.states)
        na, ne = len(self.agent_steps), len(self.env_steps)
        preds: list[list[int]] = [[] for _ in range(n)]
        for s in range(n):
            for pos, t in enumerate(self.delta[s]):
                preds[t].append(s * na * ne + pos)
        pending = [[ne] * na for _ in range(n)]
        win = list(self.accepting)
        move = [-1] * n
        frontier = [s for s in range(n) if win[s]]
        sizes = [len(frontier)]
        while frontier:
            nxt = []
            for t in frontier:
                for code in preds[t]:
                    s, pos = divmod(code, na * ne)
                    if win[s]:
                        continue
                    i = pos // ne
                    pending[s][i] -= 1
                    if pending[s][i] == 0:
                        win[s] = True
                        move[s] = i
                        nxt.append(s)
            frontier = nxt
            if nxt:
                sizes.append(sizes[-1] + len(nxt))
        self._win = win
        self._win_move = move
        self.layers = sizes
        return win

    def winning(self, f: Formula) -> bool:
        sid = self.add(f)
        return self.solve()[sid]

    def winning_move(self, s: int) -> dict:
        self.solve()
        i = self._win_move[s]
        step = self.agent_steps[max(i, 0)]
        return {y: y in step for y in self.agent_vars}


@dataclass
class Dfa:
    """Explicit automaton of one formula, read off a :class:`GameGraph`."""

    problem: Problem
    graph: GameGraph
    initial: int
    states: list[int] = field(default_factory=list)

    @property
    def accepting(self) -> set[int]:
        return {s for s in self.states if self.graph.accepting[s]}

    def transition(self, s: int, step) -> int:
        return self.graph.successor(s, frozenset(step))

    def accepts(self, trace) -> bool:
        s = self.initial
        for step in trace:
            s = self.transition(s, step)
        return self.graph.accepting[s]

    def to_text(self) -> str:
        variables = self.problem.agent_vars + self.problem.env_vars
        lines = [f"initial {self.initial}"]
        for s in self.states:
            lines.append(f"state {s} {'accepting' if self.graph.accepting[s] else 'rejecting'}")
        for s in self.states:
            for bits in product((0, 1), repeat=len(variables)):
                step = frozenset(v for v, b in zip(variables, bits) if b)
                vec = "".join(map(str, bits)) or "-"
                lines.append(f"trans {s} {vec} {self.transition(s, step)}")
        return "\n".join(lines) + "\n"


def build_dfa(problem: Problem, max_vars: int = 8, max_states: int = 4096, graph: GameGraph | None = None) -> Dfa:
    """BFS closure of progression from ``problem.formula`` over all full steps."""
    if graph is None:
        graph = GameGraph(problem.agent_vars, problem.env_vars, max_vars, max_states)
    root = graph.add(problem.formula)
    seen = {root}
    order = [root]
    for s in order:
        for t in graph.delta[s]:
            if t not in seen:
                seen.add(t)
                order.append(t)
    return Dfa(problem, graph, root, sorted(order))


def backward_win(dfa: Dfa) -> tuple[bool, dict[int, dict]]:
    """Attractor verdict for the initial state plus a positional strategy on the winning region."""
    win = dfa.graph.solve()
    strategy = {s: dfa.graph.winning_move(s) for s in dfa.states if win[s] and not dfa.graph.accepting[s]}
    return win[dfa.initial], strategy


def win_layers(dfa: Dfa) -> list[int]:
    """Size of the winning set after each fixpoint round (over the whole graph)."""
    dfa.graph.solve()
    return list(dfa.graph.layers)


def validate_strategy(dfa: Dfa, strategy, max_turns: int | None = None) -> bool:
    """Check that every play from the initial state under ``strategy`` is accepted.

    The controller is run alongside the automaton: at each turn its move and
    every environment response drive both, and the play must reach an
    accepting automaton state before a controller/automaton pair repeats
    (or within ``max_turns`` turns when given).
    """
    g = dfa.graph
    env_vars = dfa.problem.env_vars
    envs = [dict(zip(env_vars, bits)) for bits in product((False, True), repeat=len(env_vars))]
    on_stack: set = set()
    done: set = set()

    def ok(s: int, q: int, depth: int) -> bool:
        if g.accepting[q]:
            return True
        if max_turns is not None and depth >= max_turns:
            return False
        if (s, q) in done:
            return True
        if (s, q) in on_stack or s in strategy.accepting:
            return False
        on_stack.add((s, q))
        move = strategy.moves[s]
        ys = {y for y, b in move.items() if b}
        for env in envs:
            step = frozenset(ys | {x for x, b in env.items() if b})
            t = strategy.next_state(s, env)
            if t is None or not ok(t, g.successor(q, step), depth + 1):
                on_stack.discard((s, q))
                return False
        on_stack.discard((s, q))
        if max_turns is None:
            done.add((s, q))
        return True

    return ok(strategy.initial, dfa.initial, 0)


def oracle_solve(problem: Problem, max_vars: int = 8, max_states: int = 4096) -> bool:
    return backward_win(build_dfa(problem, max_vars, max_states))[0]

"""DPLL-style lazy expansion of search nodes into (move, successor) arcs.

An OR node branches on agent literals of ``xnf(ψ)^p`` and yields the
residual formula as the AND node; an AND node branches on environment
literals and strips the ○/● wrappers of what remains.  Both are
generators: the second branch of a literal is only substituted once the
consumer has exhausted the first.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .formula import Formula, Problem
from .transforms import (
    ANDP,
    FALSE_P,
    TRUE_P,
    VAR,
    Prop,
    defossilize,
    pand,
    por,
    propositionalize,
    rm_next,
    xnf,
)

Move = dict  # variable name -> bool; missing names are don't-cares

# Substitution counters, for checking laziness in tests.
stats: Counter = Counter()


@dataclass(frozen=True)
class BranchPolicy:
    """Polarity tried first when branching: ``"tf"``, ``"ff"`` or ``"rand"``."""

    kind: str = "ff"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("tf", "ff", "rand"):
            raise ValueError(f"unknown branch policy {self.kind!r}")

    @classmethod
    def parse(cls, kind: str, seed: int = 0) -> BranchPolicy:
        return cls(kind.lower(), seed)

    def rng(self) -> random.Random | None:
        return random.Random(self.seed) if self.kind == "rand" else None

    def __str__(self):
        return f"rand({self.seed})" if self.kind == "rand" else self.kind


TF = BranchPolicy("tf")
FF = BranchPolicy("ff")


_replace_memo: dict = {}


def replace(p: Prop, name: str, value: bool) -> Prop:
    """Assign ``name := value`` in ``p`` (the negated literal gets ``not value``) and fold."""
    if name not in p.names:
        return p
    key = (p, name, value)
    hit = _replace_memo.get(key)
    if hit is not None:
        return hit
    stats["replace"] += 1
    if p.kind == VAR:
        truth = value if p.var.positive else not value
        r = TRUE_P if truth else FALSE_P
    elif p.kind == ANDP:
        r = pand(*(replace(c, name, value) for c in p.children))
    else:
        r = por(*(replace(c, name, value) for c in p.children))
    _replace_memo[key] = r
    return r


def clear_caches() -> None:
    _replace_memo.clear()


def restrict(p: Prop, assignment: Mapping[str, bool]) -> Prop:
    """Apply several assignments in sequence."""
    for name, value in assignment.items():
        p = replace(p, name, value)
    return p


def get_branching_literal(
    p: Prop,
    player_vars: Sequence[str],
    policy: BranchPolicy = FF,
    rng: random.Random | None = None,
) -> tuple[str, bool]:
    """First declared player variable occurring in ``p``, with the policy's polarity."""
    for name in player_vars:
        if name in p.names:
            break
    else:
        raise ValueError("no player variable occurs in the formula")
    if policy.kind == "tf":
        return name, True
    if policy.kind == "ff":
        return name, False
    if rng is None:
        raise ValueError("the random policy needs a generator")
    return name, rng.random() < 0.5


def _dpll(p: Prop, player_vars, player_set, policy, rng, ass) -> Iterator[tuple[Move, Prop]]:
    if not (p.names & player_set):
        yield ass, p
        return
    name, value = get_branching_literal(p, player_vars, policy, rng)
    first = replace(p, name, value)
    yield from _dpll(first, player_vars, player_set, policy, rng, {**ass, name: value})
    second = replace(p, name, not value)
    yield from _dpll(second, player_vars, player_set, policy, rng, {**ass, name: not value})


def get_or_arcs(
    psi: Formula, problem: Problem, policy: BranchPolicy = FF, rng: random.Random | None = None
) -> Iterator[tuple[Move, Formula]]:
    """Lazily yield ``(agent move, AND-node formula)`` pairs for the OR node ``psi``."""
    if rng is None:
        rng = policy.rng()
    p = propositionalize(xnf(psi), problem)
    ys = problem.agent_vars
    for move, rest in _dpll(p, ys, frozenset(ys), policy, rng, {}):
        yield move, defossilize(rest)


def get_and_arcs(
    phi: Formula, problem: Problem, policy: BranchPolicy = FF, rng: random.Random | None = None
) -> Iterator[tuple[Move, Formula]]:
    """Lazily yield ``(env move, OR-node formula)`` pairs for the AND node ``phi``."""
    if rng is None:
        rng = policy.rng()
    p = propositionalize(xnf(phi), problem)
    if p.names - frozenset(problem.env_vars):
        raise ValueError("AND node still mentions agent variables")
    xs = problem.env_vars
    for move, rest in _dpll(p, xs, frozenset(xs), policy, rng, {}):
        yield move, rm_next(rest)


def complete(move: Mapping[str, bool], variables: Sequence[str]) -> Move:
    """Fill don't-cares with false, in declaration order."""
    return {v: bool(move.get(v, False)) for v in variables}


def cube_matches(move: Mapping[str, bool], full: Mapping[str, bool]) -> bool:
    return all(full.get(k, False) == v for k, v in move.items())

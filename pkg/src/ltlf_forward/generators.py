"""Formula and instance generators: exhaustive enumeration, random sampling,
and the GF(n) / U(n) pattern families."""
from __future__ import annotations

import random
from typing import Iterator, Sequence

from . import formula as fm
from .formula import Formula, Problem
from .instance import format_instance


def enumerate_nnf(atoms: Sequence[str], max_size: int) -> list[Formula]:
    """All distinct interned NNF formulas with a syntax tree of at most ``max_size`` nodes.

    Trees are built bottom-up over the NNF grammar (constants, literals,
    ∧, ∨, ○, ●, U, R) and then interned, so commutative or folded variants
    collapse into one formula.  Returned in order of first appearance.
    """
    by_size: list[list[Formula]] = [[] for _ in range(max_size + 1)]
    seen: dict[Formula, None] = {}

    def add(s: int, f: Formula):
        by_size[s].append(f)
        seen.setdefault(f, None)

    leaves = [fm.T, fm.F] + [fm.atom(a) for a in atoms] + [fm.not_atom(a) for a in atoms]
    for f in leaves:
        add(1, f)
    for s in range(2, max_size + 1):
        level = {}
        for f in by_size[s - 1]:
            level.setdefault(fm.next_(f), None)
            level.setdefault(fm.wnext(f), None)
        for ls in range(1, s - 1):
            rs = s - 1 - ls
            for a in by_size[ls]:
                for b in by_size[rs]:
                    level.setdefault(fm.until(a, b), None)
                    level.setdefault(fm.release(a, b), None)
                    if ls <= rs:
                        level.setdefault(fm.conj(a, b), None)
                        level.setdefault(fm.disj(a, b), None)
        for f in level:
            add(s, f)
    return list(seen)


def random_formula(rng: random.Random, atoms: Sequence[str], max_size: int) -> Formula:
    """A random NNF formula whose syntax tree has at most ``max_size`` nodes."""
    target = rng.randint(1, max_size)
    return _random_tree(rng, atoms, target)


def _random_tree(rng: random.Random, atoms, budget: int) -> Formula:
    if budget <= 1:
        r = rng.random()
        if r < 0.06:
            return fm.T
        if r < 0.12:
            return fm.F
        name = rng.choice(atoms)
        return fm.atom(name) if rng.random() < 0.6 else fm.not_atom(name)
    if budget == 2 or rng.random() < 0.2:
        body = _random_tree(rng, atoms, budget - 1)
        return fm.next_(body) if rng.random() < 0.5 else fm.wnext(body)
    left = rng.randint(1, budget - 2)
    a = _random_tree(rng, atoms, left)
    b = _random_tree(rng, atoms, budget - 1 - left)
    op = rng.choice((fm.conj, fm.disj, fm.until, fm.release))
    return op(a, b)


def random_family(seed: int, count: int, agent: Sequence[str], env: Sequence[str], max_size: int) -> list[Problem]:
    rng = random.Random(seed)
    atoms = list(agent) + list(env)
    return [Problem(random_formula(rng, atoms, max_size), agent, env) for _ in range(count)]


def exhaustive_family(agent: Sequence[str], env: Sequence[str], max_size: int) -> Iterator[Problem]:
    for f in enumerate_nnf(list(agent) + list(env), max_size):
        yield Problem(f, agent, env)


def gf_pattern(n: int) -> Problem:
    """G(p1) ∧ F(q2) ∧ … ∧ F(qn); p1 is an input, the rest alternate output/input."""
    if n < 2:
        raise ValueError("pattern size must be at least 2")
    names = ["p1"] + [f"q{i}" for i in range(2, n + 1)]
    f = fm.conj(fm.always(fm.atom("p1")), *(fm.eventually(fm.atom(q)) for q in names[1:]))
    agent, env = [], ["p1"]
    for i, q in enumerate(names[1:]):
        (agent if i % 2 == 0 else env).append(q)
    return Problem(f, tuple(agent), tuple(env))


def u_pattern(n: int) -> Problem:
    """p1 U (p2 U (… U pn)); pn is an output, the rest alternate input/output."""
    if n < 2:
        raise ValueError("pattern size must be at least 2")
    names = [f"p{i}" for i in range(1, n + 1)]
    f = fm.atom(names[-1])
    for p in reversed(names[:-1]):
        f = fm.until(fm.atom(p), f)
    agent, env = [names[-1]], []
    for i, p in enumerate(names[:-1]):
        (env if i % 2 == 0 else agent).append(p)
    return Problem(f, tuple(sorted(agent, key=names.index)), tuple(env))


def _gf_source(n: int) -> str:
    return " && ".join(["G(p1)"] + [f"F(q{i})" for i in range(2, n + 1)])


def _u_source(n: int) -> str:
    text = f"p{n}"
    for i in range(n - 1, 0, -1):
        text = f"p{i} U {text}" if i == n - 1 else f"p{i} U ({text})"
    return text


def pattern_text(family: str, n: int) -> str:
    """Instance file text for ``gf`` or ``u`` of size ``n``."""
    if family == "gf":
        return format_instance(gf_pattern(n), _gf_source(n))
    if family == "u":
        return format_instance(u_pattern(n), _u_source(n))
    raise ValueError(f"unknown family {family!r}")

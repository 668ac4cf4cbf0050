"""Hash-consed LTLf formulas.

Every formula is built through :class:`Formula.make` (or the smart
constructors below) and lives exactly once in a process-wide table, so
structural equality is object identity and ``f is g`` is a constant-time
equivalence test.

NNF formulas use the kinds ``TRUE FALSE ATOM NOT_ATOM AND OR NEXT WNEXT
UNTIL RELEASE``.  Raw parse trees may additionally contain ``NOT
EVENTUALLY ALWAYS`` and binary, unsorted ``AND``/``OR`` nodes; :func:`to_nnf`
removes them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

TRUE = "true"
FALSE = "false"
ATOM = "atom"
NOT_ATOM = "not_atom"
AND = "and"
OR = "or"
NEXT = "next"
WNEXT = "wnext"
UNTIL = "until"
RELEASE = "release"
# raw-only kinds
NOT = "not"
EVENTUALLY = "eventually"
ALWAYS = "always"

NNF_KINDS = frozenset({TRUE, FALSE, ATOM, NOT_ATOM, AND, OR, NEXT, WNEXT, UNTIL, RELEASE})
TEMPORAL_KINDS = frozenset({NEXT, WNEXT, UNTIL, RELEASE, EVENTUALLY, ALWAYS})


class Formula:
    """An interned formula node.  Never instantiate directly; use :meth:`make`."""

    __slots__ = ("kind", "name", "children", "id", "size", "atoms", "is_nnf", "_accepting")

    _table: dict = {}

    def __init__(self, kind, name, children, ident):
        self.kind = kind
        self.name = name
        self.children = children
        self.id = ident
        # tree size with multiplicity, computed once per DAG node
        self.size = 1 + sum(c.size for c in children)
        atoms = frozenset((name,)) if name is not None else frozenset()
        for c in children:
            atoms |= c.atoms
        self.atoms = atoms
        self.is_nnf = kind in NNF_KINDS and all(c.is_nnf for c in children)
        self._accepting = None

    @classmethod
    def make(cls, kind: str, children: Sequence[Formula] = (), name: str | None = None) -> Formula:
        children = tuple(children)
        key = (kind, name, tuple(c.id for c in children))
        node = cls._table.get(key)
        if node is None:
            node = cls(kind, name, children, len(cls._table))
            cls._table[key] = node
        return node

    def __hash__(self):
        return self.id

    def __eq__(self, other):
        return self is other

    def __lt__(self, other):
        return self.id < other.id

    def __repr__(self):
        return f"Formula({to_string(self)!r})"

    def __str__(self):
        return to_string(self)

    @property
    def left(self) -> Formula:
        return self.children[0]

    @property
    def right(self) -> Formula:
        return self.children[-1]

    def is_literal(self) -> bool:
        return self.kind in (ATOM, NOT_ATOM)

    def is_temporal(self) -> bool:
        return self.kind in TEMPORAL_KINDS


def interned_count() -> int:
    """Number of distinct formula nodes created so far."""
    return len(Formula._table)


# -- constructors -------------------------------------------------------------

T = Formula.make(TRUE)
F = Formula.make(FALSE)
EVENTUALLY_TRUE = Formula.make(UNTIL, (T, T))   # ◇true: "the trace has not ended"
ALWAYS_FALSE = Formula.make(RELEASE, (F, F))    # □false: "the trace has ended"


def atom(name: str) -> Formula:
    return Formula.make(ATOM, name=name)


def not_atom(name: str) -> Formula:
    return Formula.make(NOT_ATOM, name=name)


def _nary(kind: str, unit: Formula, zero: Formula, args: Iterable[Formula]) -> Formula:
    flat = set()
    for a in args:
        if a is zero:
            return zero
        if a is unit:
            continue
        if a.kind == kind:
            flat.update(a.children)
        else:
            flat.add(a)
    if not flat:
        return unit
    if len(flat) == 1:
        return next(iter(flat))
    return Formula.make(kind, sorted(flat))


def conj(*args: Formula) -> Formula:
    """Flattened, deduplicated, id-sorted conjunction with constant folding."""
    return _nary(AND, T, F, args)


def disj(*args: Formula) -> Formula:
    """Flattened, deduplicated, id-sorted disjunction with constant folding."""
    return _nary(OR, F, T, args)


def next_(f: Formula) -> Formula:
    return Formula.make(NEXT, (f,))


def wnext(f: Formula) -> Formula:
    return Formula.make(WNEXT, (f,))


def until(a: Formula, b: Formula) -> Formula:
    return Formula.make(UNTIL, (a, b))


def release(a: Formula, b: Formula) -> Formula:
    return Formula.make(RELEASE, (a, b))


def eventually(f: Formula) -> Formula:
    """◇f as the NNF term ``true U f``."""
    return until(T, f)


def always(f: Formula) -> Formula:
    """□f as the NNF term ``false R f``."""
    return release(F, f)


# raw (pre-NNF) constructors used by the parser; no normalization at all

def raw_not(f: Formula) -> Formula:
    return Formula.make(NOT, (f,))


def raw_and(a: Formula, b: Formula) -> Formula:
    return Formula.make(AND, (a, b))


def raw_or(a: Formula, b: Formula) -> Formula:
    return Formula.make(OR, (a, b))


def raw_eventually(f: Formula) -> Formula:
    return Formula.make(EVENTUALLY, (f,))


def raw_always(f: Formula) -> Formula:
    return Formula.make(ALWAYS, (f,))


# -- NNF ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _nnf(f: Formula, negate: bool) -> Formula:
    k = f.kind
    if k == TRUE:
        return F if negate else T
    if k == FALSE:
        return T if negate else F
    if k == ATOM:
        return not_atom(f.name) if negate else f
    if k == NOT_ATOM:
        return atom(f.name) if negate else f
    if k == NOT:
        return _nnf(f.children[0], not negate)
    if k in (AND, OR):
        parts = [_nnf(c, negate) for c in f.children]
        return (disj if (k == AND) == negate else conj)(*parts)
    if k in (NEXT, WNEXT):
        body = _nnf(f.children[0], negate)
        return wnext(body) if (k == NEXT) == negate else next_(body)
    if k in (UNTIL, RELEASE):
        a, b = (_nnf(c, negate) for c in f.children)
        return release(a, b) if (k == UNTIL) == negate else until(a, b)
    if k == EVENTUALLY:
        body = _nnf(f.children[0], negate)
        return always(body) if negate else eventually(body)
    if k == ALWAYS:
        body = _nnf(f.children[0], negate)
        return eventually(body) if negate else always(body)
    raise ValueError(f"unknown formula kind {k!r}")


def to_nnf(f: Formula) -> Formula:
    """Push negations to the atoms and expand F/G; the result is interned NNF."""
    return _nnf(f, False)


def negate(f: Formula) -> Formula:
    """NNF of ¬f."""
    return _nnf(f, True)


# -- structural queries -------------------------------------------------------

def size(f: Formula) -> int:
    """Number of syntax-tree nodes, counting shared subterms every time they occur."""
    return f.size


def pa(f: Formula) -> frozenset[Formula]:
    """Literals and temporal formulas reachable from ``f`` through And/Or only."""
    if f.kind in (AND, OR):
        out = set()
        for c in f.children:
            out |= pa(c)
        return frozenset(out)
    return frozenset((f,))


def subformulas(f: Formula) -> set[Formula]:
    """All DAG nodes reachable from ``f`` (including ``f``)."""
    seen = set()
    todo = [f]
    while todo:
        g = todo.pop()
        if g in seen:
            continue
        seen.add(g)
        todo.extend(g.children)
    return seen


def is_accepting(f: Formula) -> bool:
    """Whether the empty trace satisfies ``f``; structural, cached per node."""
    if f._accepting is None:
        k = f.kind
        if k in (TRUE, RELEASE, WNEXT, ALWAYS):
            f._accepting = True
        elif k == AND:
            f._accepting = all(is_accepting(c) for c in f.children)
        elif k == OR:
            f._accepting = any(is_accepting(c) for c in f.children)
        elif k == NOT:
            f._accepting = not is_accepting(f.children[0])
        else:
            f._accepting = False
    return f._accepting


# -- semantics ----------------------------------------------------------------

Trace = Sequence[frozenset]


def eval_trace(f: Formula, trace: Trace, alphabet: Iterable[str] | None = None) -> bool:
    """Decide ``trace, 0 |= f`` under finite-trace semantics (empty trace allowed).

    Positions run over ``0..len(trace)``; position ``len(trace)`` stands for the
    empty suffix, where only true, Release and Weak-Next formulas hold.
    """
    trace = [frozenset(s) for s in trace]
    if alphabet is not None:
        alphabet = set(alphabet)
        unknown = f.atoms - alphabet
        for step in trace:
            unknown |= step - alphabet
        if unknown:
            raise ValueError(f"atoms outside the alphabet: {sorted(unknown)}")
    n = len(trace)
    memo: dict = {}

    def sat(g: Formula, i: int) -> bool:
        key = (g.id, i)
        hit = memo.get(key)
        if hit is not None:
            return hit
        k = g.kind
        if k == TRUE:
            r = True
        elif k == FALSE:
            r = False
        elif k == AND:
            r = all(sat(c, i) for c in g.children)
        elif k == OR:
            r = any(sat(c, i) for c in g.children)
        elif k == NOT:
            r = not sat(g.children[0], i)
        elif i == n:
            r = k in (RELEASE, WNEXT, ALWAYS)
        elif k == ATOM:
            r = g.name in trace[i]
        elif k == NOT_ATOM:
            r = g.name not in trace[i]
        elif k == NEXT:
            r = i + 1 < n and sat(g.children[0], i + 1)
        elif k == WNEXT:
            r = i + 1 == n or sat(g.children[0], i + 1)
        elif k in (UNTIL, EVENTUALLY):
            a, b = (T, g.children[0]) if k == EVENTUALLY else g.children
            r = False
            for j in range(i, n):
                if sat(b, j):
                    r = True
                    break
                if not sat(a, j):
                    break
        elif k in (RELEASE, ALWAYS):
            a, b = (F, g.children[0]) if k == ALWAYS else g.children
            r = True
            for j in range(i, n):
                if not sat(b, j):
                    r = False
                    break
                if sat(a, j):
                    break
        else:
            raise ValueError(f"unknown formula kind {k!r}")
        memo[key] = r
        return r

    return sat(f, 0)


# -- printing -----------------------------------------------------------------

def to_string(f: Formula) -> str:
    """Render in the concrete grammar accepted by :func:`ltlf_forward.parser.parse`."""
    k = f.kind
    if k == TRUE:
        return "true"
    if k == FALSE:
        return "false"
    if k == ATOM:
        return f.name
    if k == NOT_ATOM:
        return "!" + f.name
    if k == NOT:
        return "!" + _wrap(f.children[0])
    if k in (AND, OR):
        op = " && " if k == AND else " || "
        return "(" + op.join(to_string(c) for c in f.children) + ")"
    if k == UNTIL and f.children[0] is T:
        return "F" + _wrap(f.children[1])
    if k == RELEASE and f.children[0] is F:
        return "G" + _wrap(f.children[1])
    if k in (UNTIL, RELEASE):
        op = " U " if k == UNTIL else " R "
        return "(" + to_string(f.children[0]) + op + to_string(f.children[1]) + ")"
    prefix = {NEXT: "X", WNEXT: "N", EVENTUALLY: "F", ALWAYS: "G"}[k]
    return prefix + _wrap(f.children[0])


def _wrap(f: Formula) -> str:
    s = to_string(f)
    if s.startswith("(") or f.kind == NOT_ATOM:
        return s
    return "(" + s + ")"


# -- synthesis problems -------------------------------------------------------

@dataclass(frozen=True)
class Problem:
    """An LTLf synthesis instance: formula plus the agent/environment partition."""

    formula: Formula
    agent_vars: tuple[str, ...]
    env_vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "agent_vars", tuple(self.agent_vars))
        object.__setattr__(self, "env_vars", tuple(self.env_vars))
        overlap = set(self.agent_vars) & set(self.env_vars)
        if overlap:
            raise ValueError(f"variables controlled by both players: {sorted(overlap)}")
        if len(set(self.agent_vars)) != len(self.agent_vars) or len(set(self.env_vars)) != len(self.env_vars):
            raise ValueError("duplicate variable declaration")
        stray = self.formula.atoms - set(self.agent_vars) - set(self.env_vars)
        if stray:
            raise ValueError(f"atoms not assigned to a player: {sorted(stray)}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.agent_vars + self.env_vars

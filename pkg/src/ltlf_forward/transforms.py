"""XNF, propositionalization, formula progression and next-removal.

Propositional terms (:class:`Prop`) are hash-consed like formulas, so every
transformation here can be memoized on node identity.  That sharing is what
keeps repeated progression of growing state formulas cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import formula as fm
from .formula import Formula, Problem

AGENT = "agent"
ENV = "env"
NEG_AGENT = "neg_agent"
NEG_ENV = "neg_env"
STATE = "state"

TRUEP = "truep"
FALSEP = "falsep"
VAR = "var"
ANDP = "andp"
ORP = "orp"


@dataclass(frozen=True)
class PropVar:
    """A propositional variable: a player literal or a state variable z_α.

    ``name`` is set for player literals, ``formula`` for state variables
    (which wrap ○-, ●-formulas, ◇true or □false).
    """

    kind: str
    name: str | None = None
    formula: Formula | None = None

    @property
    def is_state(self) -> bool:
        return self.kind == STATE

    @property
    def positive(self) -> bool:
        return self.kind in (AGENT, ENV)

    def __str__(self):
        if self.kind == STATE:
            return f"z[{self.formula}]"
        return self.name if self.positive else "!" + self.name


class Prop:
    """Interned positive boolean term over :class:`PropVar` leaves."""

    __slots__ = ("kind", "var", "children", "id", "names", "states")

    _table: dict = {}

    def __init__(self, kind, var, children, ident):
        self.kind = kind
        self.var = var
        self.children = children
        self.id = ident
        names = set()
        states = set()
        if var is not None:
            if var.kind == STATE:
                states.add(var)
            else:
                names.add(var.name)
        for c in children:
            names |= c.names
            states |= c.states
        # player atom names and state variables occurring below this node
        self.names = frozenset(names)
        self.states = frozenset(states)

    @classmethod
    def make(cls, kind, children=(), var=None) -> Prop:
        children = tuple(children)
        key = (kind, var, tuple(c.id for c in children))
        node = cls._table.get(key)
        if node is None:
            node = cls(kind, var, children, len(cls._table))
            cls._table[key] = node
        return node

    def __hash__(self):
        return self.id

    def __eq__(self, other):
        return self is other

    def __lt__(self, other):
        return self.id < other.id

    def __repr__(self):
        return f"Prop({self})"

    def __str__(self):
        if self.kind == TRUEP:
            return "true"
        if self.kind == FALSEP:
            return "false"
        if self.kind == VAR:
            return str(self.var)
        op = " & " if self.kind == ANDP else " | "
        return "(" + op.join(str(c) for c in self.children) + ")"


TRUE_P = Prop.make(TRUEP)
FALSE_P = Prop.make(FALSEP)


def pvar(v: PropVar) -> Prop:
    return Prop.make(VAR, var=v)


def _pnary(kind, unit, zero, args: Iterable[Prop]) -> Prop:
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
    return Prop.make(kind, sorted(flat))


def pand(*args: Prop) -> Prop:
    return _pnary(ANDP, TRUE_P, FALSE_P, args)


def por(*args: Prop) -> Prop:
    return _pnary(ORP, FALSE_P, TRUE_P, args)


# -- XNF ----------------------------------------------------------------------

_xnf_memo: dict = {}


def xnf(f: Formula) -> Formula:
    """Rewrite ``f`` (NNF) so its propositional surface holds only literals,
    ○/● formulas, ◇true and □false.  Linear in the DAG size (memoized)."""
    hit = _xnf_memo.get(f)
    if hit is not None:
        return hit
    k = f.kind
    if f is fm.EVENTUALLY_TRUE or f is fm.ALWAYS_FALSE:
        r = f
    elif k in (fm.TRUE, fm.FALSE, fm.ATOM, fm.NOT_ATOM, fm.NEXT, fm.WNEXT):
        r = f
    elif k == fm.AND:
        r = fm.conj(*(xnf(c) for c in f.children))
    elif k == fm.OR:
        r = fm.disj(*(xnf(c) for c in f.children))
    elif k == fm.UNTIL:
        a, b = f.children
        r = fm.disj(fm.conj(xnf(b), fm.EVENTUALLY_TRUE), fm.conj(xnf(a), fm.next_(f)))
    elif k == fm.RELEASE:
        a, b = f.children
        r = fm.conj(fm.disj(xnf(b), fm.ALWAYS_FALSE), fm.disj(xnf(a), fm.wnext(f)))
    else:
        raise ValueError(f"xnf expects an NNF formula, got kind {k!r}")
    _xnf_memo[f] = r
    return r


# -- propositionalization -------------------------------------------------------

_prop_memo: dict = {}


def _player_kinds(problem: Problem):
    kinds = {}
    for y in problem.agent_vars:
        kinds[y] = (AGENT, NEG_AGENT)
    for x in problem.env_vars:
        kinds[x] = (ENV, NEG_ENV)
    return kinds


def propositionalize(f: Formula, problem: Problem) -> Prop:
    """φ ↦ φ^p for an XNF formula: literals become player variables, temporal
    surface formulas become state variables."""
    kinds = _player_kinds(problem)
    key_ns = (problem.agent_vars, problem.env_vars)
    return _propositionalize(f, kinds, key_ns)


def _propositionalize(f: Formula, kinds, key_ns) -> Prop:
    key = (f, key_ns)
    hit = _prop_memo.get(key)
    if hit is not None:
        return hit
    k = f.kind
    if k == fm.TRUE:
        r = TRUE_P
    elif k == fm.FALSE:
        r = FALSE_P
    elif k in (fm.ATOM, fm.NOT_ATOM):
        if f.name not in kinds:
            raise ValueError(f"atom {f.name!r} is not declared for either player")
        pos, neg = kinds[f.name]
        r = pvar(PropVar(pos if k == fm.ATOM else neg, name=f.name))
    elif k == fm.AND:
        r = pand(*(_propositionalize(c, kinds, key_ns) for c in f.children))
    elif k == fm.OR:
        r = por(*(_propositionalize(c, kinds, key_ns) for c in f.children))
    elif k in (fm.NEXT, fm.WNEXT) or f is fm.EVENTUALLY_TRUE or f is fm.ALWAYS_FALSE:
        r = pvar(PropVar(STATE, formula=f))
    else:
        raise ValueError(f"propositionalize expects an XNF formula, found {f}")
    _prop_memo[key] = r
    return r


_defoss_memo: dict = {}


def defossilize(p: Prop) -> Formula:
    """Inverse of :func:`propositionalize` (the ·^tf map)."""
    hit = _defoss_memo.get(p)
    if hit is not None:
        return hit
    if p.kind == TRUEP:
        r = fm.T
    elif p.kind == FALSEP:
        r = fm.F
    elif p.kind == VAR:
        v = p.var
        if v.kind == STATE:
            r = v.formula
        elif v.positive:
            r = fm.atom(v.name)
        else:
            r = fm.not_atom(v.name)
    elif p.kind == ANDP:
        r = fm.conj(*(defossilize(c) for c in p.children))
    else:
        r = fm.disj(*(defossilize(c) for c in p.children))
    _defoss_memo[p] = r
    return r


# -- progression ----------------------------------------------------------------

_fp_memo: dict = {}


def progress(f: Formula, step: Iterable[str]) -> Formula:
    """One step of formula progression: ``trace, i |= f`` iff
    ``trace, i+1 |= progress(f, trace[i])``.  Constants are folded."""
    if not isinstance(step, frozenset):
        step = frozenset(step)
    return _fp(f, step)


def _fp(f: Formula, step: frozenset) -> Formula:
    key = (f, step)
    hit = _fp_memo.get(key)
    if hit is not None:
        return hit
    k = f.kind
    if k in (fm.TRUE, fm.FALSE):
        r = f
    elif f is fm.EVENTUALLY_TRUE:
        r = fm.T
    elif f is fm.ALWAYS_FALSE:
        r = fm.F
    elif k == fm.ATOM:
        r = fm.T if f.name in step else fm.F
    elif k == fm.NOT_ATOM:
        r = fm.F if f.name in step else fm.T
    elif k == fm.AND:
        r = fm.conj(*(_fp(c, step) for c in f.children))
    elif k == fm.OR:
        r = fm.disj(*(_fp(c, step) for c in f.children))
    elif k == fm.NEXT:
        r = fm.conj(f.children[0], fm.EVENTUALLY_TRUE)
    elif k == fm.WNEXT:
        r = fm.disj(f.children[0], fm.ALWAYS_FALSE)
    elif k == fm.UNTIL:
        a, b = f.children
        r = fm.disj(_fp(b, step), fm.conj(_fp(a, step), f, fm.EVENTUALLY_TRUE))
    elif k == fm.RELEASE:
        a, b = f.children
        r = fm.conj(_fp(b, step), fm.disj(_fp(a, step), f, fm.ALWAYS_FALSE))
    else:
        raise ValueError(f"progress expects an NNF formula, got kind {k!r}")
    _fp_memo[key] = r
    return r


def trim_progress_cache(limit: int) -> None:
    """Drop the progression memo once it holds more than ``limit`` entries."""
    if len(_fp_memo) > limit:
        _fp_memo.clear()


def progress_trace(f: Formula, trace: Iterable[Iterable[str]]) -> Formula:
    """Left fold of :func:`progress` over ``trace`` (identity on the empty trace)."""
    for step in trace:
        f = progress(f, step)
    return f


# -- next removal -----------------------------------------------------------------

_rm_memo: dict = {}


def rm_next(p: Prop) -> Formula:
    """Strip the ○/● wrappers of a propositional formula over state variables,
    giving the successor state formula."""
    hit = _rm_memo.get(p)
    if hit is not None:
        return hit
    if p.kind == TRUEP:
        r = fm.T
    elif p.kind == FALSEP:
        r = fm.F
    elif p.kind == VAR:
        v = p.var
        if v.kind != STATE:
            raise ValueError(f"rm_next: residual player variable {v}")
        g = v.formula
        if g is fm.EVENTUALLY_TRUE:
            r = fm.T
        elif g is fm.ALWAYS_FALSE:
            r = fm.F
        elif g.kind == fm.NEXT:
            r = fm.conj(g.children[0], fm.EVENTUALLY_TRUE)
        else:
            r = fm.disj(g.children[0], fm.ALWAYS_FALSE)
    elif p.kind == ANDP:
        r = fm.conj(*(rm_next(c) for c in p.children))
    else:
        r = fm.disj(*(rm_next(c) for c in p.children))
    _rm_memo[p] = r
    return r


_subst_memo: dict = {}


def substitute_states(p: Prop, value) -> Prop:
    """Replace every state variable ``z`` by the constant ``value(z)``.

    Results are memoized per ``value`` function, so pass a module-level
    function rather than a fresh lambda.
    """
    memo = _subst_memo.setdefault(value, {})

    def go(q: Prop) -> Prop:
        if not q.states:
            return q
        hit = memo.get(q)
        if hit is not None:
            return hit
        if q.kind == VAR:
            r = TRUE_P if value(q.var) else FALSE_P
        elif q.kind == ANDP:
            r = pand(*(go(c) for c in q.children))
        else:
            r = por(*(go(c) for c in q.children))
        memo[q] = r
        return r

    return go(p)


def accepts_empty_successor(v: PropVar) -> bool:
    """Value of state variable ``v`` such that the successor state accepts ε."""
    g = v.formula
    if g is fm.EVENTUALLY_TRUE:
        return True
    if g is fm.ALWAYS_FALSE:
        return False
    return g.kind == fm.WNEXT


def clear_caches() -> None:
    """Forget every memoized transformation (interned terms are kept)."""
    for memo in (_xnf_memo, _prop_memo, _defoss_memo, _fp_memo, _rm_memo, _subst_memo):
        memo.clear()

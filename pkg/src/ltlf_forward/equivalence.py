"""State equivalence: structural (hash consing) and propositional (BDD).

Propositional keys are ROBDDs of ``xnf(ψ)^p``.  An atom and its negation
share one BDD variable, so positive formulas over literals behave as real
boolean functions.  Because that pairing makes ``a | !a`` and ``true``
collide even though only ``true`` accepts the empty trace, search-node
keys also carry the empty-trace verdict (see :meth:`BddEncoder.state_key`).
"""
from __future__ import annotations

from typing import Callable, Hashable

from . import formula as fm
from .bdd import BDD, FALSE, TRUE
from .formula import Formula, Problem
from .transforms import ANDP, FALSEP, TRUEP, VAR, Prop, PropVar, propositionalize, xnf


class VarOrder:
    """Injective, append-only map from variable keys to BDD levels."""

    def __init__(self):
        self.index: dict[Hashable, int] = {}

    def level(self, key: Hashable) -> int:
        lvl = self.index.get(key)
        if lvl is None:
            lvl = len(self.index)
            self.index[key] = lvl
        return lvl

    def __len__(self):
        return len(self.index)


class BddEncoder:
    """Builds diagrams of propositionalized formulas for one problem.

    Agent variables take the first levels, then environment variables, then
    state variables in order of first sight.  Several encoders may share a
    store and an order; ``tag`` keeps their variables apart.
    """

    def __init__(self, problem: Problem, bdd: BDD | None = None, order: VarOrder | None = None, tag: str = ""):
        self.problem = problem
        self.bdd = bdd if bdd is not None else BDD()
        self.order = order if order is not None else VarOrder()
        self.tag = tag
        self.agent_levels = [self.order.level((tag, "atom", y)) for y in problem.agent_vars]
        self.env_levels = [self.order.level((tag, "atom", x)) for x in problem.env_vars]
        self.state_levels: dict[Formula, int] = {}
        self._memo: dict[Prop, int] = {}
        self._keys: dict[Formula, int] = {}

    def atom_level(self, name: str) -> int:
        return self.order.level((self.tag, "atom", name))

    def state_level(self, f: Formula) -> int:
        lvl = self.state_levels.get(f)
        if lvl is None:
            lvl = self.order.level((self.tag, "state", f))
            self.state_levels[f] = lvl
        return lvl

    def literal(self, v: PropVar) -> int:
        if v.is_state:
            return self.bdd.var(self.state_level(v.formula))
        lvl = self.atom_level(v.name)
        return self.bdd.var(lvl) if v.positive else self.bdd.nvar(lvl)

    def build(self, p: Prop) -> int:
        """Canonical diagram of the positive term ``p``."""
        return self.build_with(p, self.literal, self._memo)

    def build_with(self, p: Prop, leaf: Callable[[PropVar], int], memo: dict) -> int:
        """Like :meth:`build` but with a custom leaf translation."""
        hit = memo.get(p)
        if hit is not None:
            return hit
        if p.kind == TRUEP:
            r = TRUE
        elif p.kind == FALSEP:
            r = FALSE
        elif p.kind == VAR:
            r = leaf(p.var)
        elif p.kind == ANDP:
            r = self.bdd.conjoin(self.build_with(c, leaf, memo) for c in p.children)
        else:
            r = self.bdd.disjoin(self.build_with(c, leaf, memo) for c in p.children)
        memo[p] = r
        return r

    def key(self, psi: Formula) -> int:
        """BDD of ``xnf(psi)^p``."""
        r = self._keys.get(psi)
        if r is None:
            r = self.build(propositionalize(xnf(psi), self.problem))
            self._keys[psi] = r
        return r

    def state_key(self, psi: Formula) -> tuple[int, bool]:
        """Search-node key: propositional class plus empty-trace acceptance."""
        return self.key(psi), fm.is_accepting(psi)

    def node_count(self) -> int:
        return len(self.bdd)


def _default_problem(*formulas: Formula) -> Problem:
    names = sorted(set().union(*(f.atoms for f in formulas)))
    return Problem(fm.conj(*formulas) if formulas else fm.T, tuple(names), ())


def bdd_eq(psi1: Formula, psi2: Formula, problem: Problem | None = None, encoder: BddEncoder | None = None) -> bool:
    """True iff ``xnf(psi1)^p`` and ``xnf(psi2)^p`` are the same boolean function."""
    if encoder is None:
        encoder = BddEncoder(problem if problem is not None else _default_problem(psi1, psi2))
    return encoder.key(psi1) == encoder.key(psi2)


def hash_eq(psi1: Formula, psi2: Formula) -> bool:
    """Structural equality of interned formulas."""
    return psi1 is psi2

"""One-step realizability and unrealizability checks.

* Realizable in one step: some agent move makes every environment response
  land in a state accepting the empty trace.  The acceptance of a successor
  only depends on which state variables are true, and ``z`` contributes
  exactly ``is_accepting(RmNext(z))``; so we substitute those constants and
  decide ``∃Y ∀X`` on the diagram.
* Unrealizable in one step: for every agent move some response makes the
  successor propositionally false.  The arcs of the node already group full
  moves into cubes with a common successor, so it is enough that every agent
  cube has one environment cube whose successor diagram is the 0 terminal.
  Responses are tried false-first, which is how such refutations usually go.
"""
from __future__ import annotations

from .bdd import FALSE
from .equivalence import BddEncoder
from .expansion import FF, Move, get_and_arcs, get_or_arcs
from .formula import Formula, Problem
from .transforms import accepts_empty_successor, propositionalize, substitute_states, xnf


class Preprocessor:
    """Holds the diagram store shared by repeated checks on one problem."""

    def __init__(self, problem: Problem, encoder: BddEncoder | None = None):
        self.problem = problem
        self.cur = encoder if encoder is not None else BddEncoder(problem)

    def one_step_realizable(self, psi: Formula) -> Move | None:
        bdd = self.cur.bdd
        p = substitute_states(propositionalize(xnf(psi), self.problem), accepts_empty_successor)
        u = self.cur.build(p)
        v = bdd.forall(u, self.cur.env_levels)
        if bdd.exists(v, self.cur.agent_levels) == FALSE:
            return None
        cube = bdd.pick_cube(v)
        return {y: cube.get(lvl, False) for y, lvl in zip(self.problem.agent_vars, self.cur.agent_levels)}

    def one_step_unrealizable(self, psi: Formula) -> bool:
        for _, phi in get_or_arcs(psi, self.problem, FF):
            if not any(self.cur.key(succ) == FALSE for _, succ in get_and_arcs(phi, self.problem, FF)):
                return False
        return True


def one_step_realizable(psi: Formula, problem: Problem) -> Move | None:
    """An agent move after which every environment response is accepting, if any."""
    return Preprocessor(problem).one_step_realizable(psi)


def one_step_unrealizable(psi: Formula, problem: Problem) -> bool:
    """True iff every agent move admits a response whose successor is equivalent to false."""
    return Preprocessor(problem).one_step_unrealizable(psi)

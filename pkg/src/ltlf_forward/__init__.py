"""Forward LTLf realizability and synthesis by AND-OR search.

The main entry points::

    >>> from ltlf_forward import parse_nnf, Problem, solve
    >>> p = Problem(parse_nnf("p1 U p2"), agent_vars=("p2",), env_vars=("p1",))
    >>> solve(p).realizable
    True
"""
from .bdd import BDD
from .equivalence import BddEncoder, VarOrder, bdd_eq, hash_eq
from .expansion import FF, TF, BranchPolicy, get_and_arcs, get_branching_literal, get_or_arcs, replace
from .formula import (
    ALWAYS_FALSE,
    EVENTUALLY_TRUE,
    Formula,
    Problem,
    eval_trace,
    is_accepting,
    pa,
    size,
    to_nnf,
    to_string,
)
from .instance import format_instance, parse_instance, parse_strategy, read_instance
from .oracle import Dfa, GameGraph, backward_win, build_dfa, validate_strategy
from .parser import ParseError, parse, parse_nnf
from .preprocess import one_step_realizable, one_step_unrealizable
from .search import (
    Mode,
    SolveConfig,
    StepLimitExceeded,
    Strategy,
    TimeLimitExceeded,
    Verdict,
    equivalent,
    solve,
)
from .transforms import defossilize, progress, progress_trace, propositionalize, rm_next, xnf

__version__ = "0.1.0"


def clear_caches() -> None:
    """Release the global memo tables of the transformation layer."""
    from . import expansion, transforms

    transforms.clear_caches()
    expansion.clear_caches()


import pytest

from ltlf_forward import formula as fm
from ltlf_forward.bdd import FALSE
from ltlf_forward.equivalence import BddEncoder
from ltlf_forward.formula import Problem
from ltlf_forward.generators import enumerate_nnf
from ltlf_forward.parser import parse_nnf
from ltlf_forward.preprocess import Preprocessor, one_step_realizable, one_step_unrealizable
from ltlf_forward.search import solve
from ltlf_forward.transforms import progress
from support import full_moves, step_of

Y, X = ("y1", "y2"), ("x1", "x2")


def brute_realizable(f, prob):
    """Agent moves after which every response leaves an accepting state."""
    wins = []
    for y in full_moves(prob.agent_vars):
        if all(fm.is_accepting(progress(f, step_of(y, x))) for x in full_moves(prob.env_vars)):
            wins.append(y)
    return wins


def brute_unrealizable(f, prob, enc):
    return all(
        any(enc.key(progress(f, step_of(y, x))) == FALSE for x in full_moves(prob.env_vars))
        for y in full_moves(prob.agent_vars)
    )


@pytest.mark.parametrize(
    "text, agent, env, move",
    [
        ("y", ("y",), (), {"y": True}),
        ("x", (), ("x",), None),
        ("b && F true", ("b",), (), {"b": True}),
        ("X y", ("y",), (), None),
        ("N y", ("y",), (), {"y": False}),
        ("y U x", ("y",), ("x",), None),
    ],
)
def test_one_step_realizable_examples(text, agent, env, move):
    f = parse_nnf(text)
    prob = Problem(f, agent, env)
    assert one_step_realizable(f, prob) == move


def test_eventually_true_conjunct():
    # ◇true asks for a step, and the step taken is the one under test, so one step suffices
    f = parse_nnf("b && F true")
    prob = Problem(f, ("b",), ())
    assert brute_realizable(f, prob) == [{"b": True}]


@pytest.mark.parametrize(
    "text, agent, env, expected",
    [
        ("false", (), (), True),
        ("x", (), ("x",), True),
        ("y", ("y",), (), False),
        ("G x", (), ("x",), True),
        ("X false", ("y",), (), True),
        ("F x", ("y",), ("x",), False),
    ],
)
def test_one_step_unrealizable_examples(text, agent, env, expected):
    f = parse_nnf(text)
    assert one_step_unrealizable(f, Problem(f, agent, env)) is expected


def test_exact_against_enumeration():
    enc = BddEncoder(Problem(fm.T, Y, X))
    pre = Preprocessor(enc.problem, enc)
    for f in enumerate_nnf(Y + X, 5):
        prob = Problem(f, Y, X)
        wins = brute_realizable(f, prob)
        move = pre.one_step_realizable(f)
        assert (move is not None) == bool(wins)
        if move is not None:
            assert move in wins
        assert pre.one_step_unrealizable(f) == brute_unrealizable(f, prob, enc)


def test_sound_against_oracle(exhaustive_family):
    fam = exhaustive_family
    pre = Preprocessor(fam.graph.problem, fam.graph.encoder)
    for f, win in zip(fam.formulas, fam.verdicts):
        if pre.one_step_realizable(f) is not None:
            assert win, f
        # an accepting state is won before any step, whatever its successors
        if pre.one_step_unrealizable(f) and not fm.is_accepting(f):
            assert not win, f


def test_accepting_state_with_dead_successors():
    f = fm.ALWAYS_FALSE
    prob = Problem(f, ("y",), ())
    assert one_step_unrealizable(f, prob)
    assert solve(prob).realizable

"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The summary lines are printed at the end of the pytest run by the
``acceptance_report`` hook in ``conftest.py``.
"""
import logging
import random
import time

import pytest

from ltlf_forward import clear_caches
from ltlf_forward import formula as fm
from ltlf_forward.equivalence import BddEncoder
from ltlf_forward.expansion import BranchPolicy, restrict
from ltlf_forward.formula import Problem
from ltlf_forward.generators import enumerate_nnf, gf_pattern, u_pattern
from ltlf_forward.oracle import Dfa, build_dfa, oracle_solve, validate_strategy
from ltlf_forward.parser import parse_nnf
from ltlf_forward.search import LoopEvent, Mode, SolveConfig, StepLimitExceeded, solve
from ltlf_forward.transforms import (
    AGENT,
    ANDP,
    ENV,
    NEG_AGENT,
    NEG_ENV,
    ORP,
    STATE,
    PropVar,
    pand,
    por,
    progress,
    propositionalize,
    pvar,
    rm_next,
    xnf,
)
from support import TraceSpace, expansion_violations, prop_table

POLICIES = [BranchPolicy("tf"), BranchPolicy("ff"), BranchPolicy("rand", 7)]
GRID = [SolveConfig(m, p) for m in (Mode.BDD, Mode.HASH_RESTART) for p in POLICIES]

EXAMPLE = Problem(parse_nnf("(a U b) && F true"), ("a",), ("b",))
GROWING = Problem(parse_nnf("G a U F b"), ("a",), ("b",))


@pytest.fixture(scope="module")
def grid_run(exhaustive_family, random_family):
    """Solve both families in every configuration, validating each winning strategy."""
    out = {"mismatches": [], "invalid": [], "solved": 0, "validated": 0, "solve_time": 0.0, "check_time": 0.0}
    out["build_time"] = exhaustive_family.build_time + random_family.build_time
    for fam in (exhaustive_family, random_family):
        enc = fam.graph.encoder
        for f, sid, expected in zip(fam.formulas, fam.ids, fam.verdicts):
            prob = Problem(f, fam.agent_vars, fam.env_vars)
            for config in GRID:
                start = time.perf_counter()
                v = solve(prob, config, encoder=enc)
                out["solve_time"] += time.perf_counter() - start
                out["solved"] += 1
                if v.realizable != expected:
                    out["mismatches"].append((f, config))
                elif v.realizable:
                    start = time.perf_counter()
                    if not validate_strategy(Dfa(prob, fam.graph, sid), v.strategy):
                        out["invalid"].append((f, config))
                    out["check_time"] += time.perf_counter() - start
                    out["validated"] += 1
        clear_caches()
    return out


def test_criterion_1_oracle_equivalence(grid_run, acceptance_report):
    total = grid_run["build_time"] + grid_run["solve_time"]
    ok = not grid_run["mismatches"] and total < 300
    acceptance_report(
        1,
        ok,
        f"{grid_run['solved']} solves, {len(grid_run['mismatches'])} mismatches, "
        f"oracle {grid_run['build_time']:.0f}s + search {grid_run['solve_time']:.0f}s = {total:.0f}s (limit 300s)",
    )
    assert not grid_run["mismatches"], grid_run["mismatches"][:5]
    assert total < 300


def test_criterion_2_running_example(acceptance_report):
    expected = [LoopEvent(EXAMPLE.formula, EXAMPLE.formula, (("a", True),), (("b", False),))]
    configs = [SolveConfig(m, p, preprocess=pre) for m in (Mode.BDD, Mode.HASH_RESTART) for p in POLICIES for pre in (True, False)]
    configs += [SolveConfig(Mode.HASH, p, step_limit=10_000, preprocess=pre) for p in POLICIES for pre in (True, False)]
    verdicts = [solve(EXAMPLE, c) for c in configs]
    unrealizable = sum(not v.realizable for v in verdicts)
    exact_loop = sum(v.loops == expected for v in verdicts)
    ok = unrealizable == exact_loop == len(configs)
    acceptance_report(2, ok, f"{unrealizable}/{len(configs)} unrealizable, {exact_loop}/{len(configs)} with exactly the a / !b loop")
    assert ok


def test_criterion_3_hash_incompleteness(caplog, acceptance_report):
    limited = 0
    for p in POLICIES:
        try:
            solve(GROWING, SolveConfig(Mode.HASH, p, step_limit=10_000))
        except StepLimitExceeded:
            limited += 1

    chain = [GROWING.formula]
    for _ in range(11):
        chain.append(progress(chain[-1], {"a"}))
    sizes = [fm.size(f) for f in chain]
    growing = all(a < b for a, b in zip(sizes, sizes[1:]))
    nested = all(xnf(chain[n]) in fm.subformulas(xnf(chain[n + 1])) for n in range(1, 11))

    threshold = 3 * fm.size(GROWING.formula)
    agree = 0
    with caplog.at_level(logging.INFO, logger="ltlf_forward.search"):
        for p in POLICIES:
            caplog.clear()
            v = solve(GROWING, SolveConfig(Mode.HASH_RESTART, p))
            restarted = v.restarts == 1 and any(f"threshold {threshold};" in r.getMessage() for r in caplog.records)
            agree += restarted and v.realizable == oracle_solve(GROWING)
    ok = limited == 3 and growing and nested and agree == 3
    acceptance_report(
        3,
        ok,
        f"hash step limit hit {limited}/3, chain sizes {sizes[0]}..{sizes[-1]} increasing={growing} nested={nested}, "
        f"restart at {threshold} with oracle verdict {agree}/3",
    )
    assert ok


@pytest.fixture(scope="module")
def patterns():
    rows = []
    for n in range(2, 16):
        for family, gen, expected in (("GF", gf_pattern, False), ("U", u_pattern, True)):
            prob = gen(n)
            start = time.perf_counter()
            v = solve(prob)
            rows.append((family, n, prob, v, expected, time.perf_counter() - start))
    return rows


def test_criterion_4_pattern_families(patterns, acceptance_report):
    wrong = [(fam, n) for fam, n, _, v, expected, _ in patterns if v.realizable != expected]
    slow = [(fam, n, round(t, 3)) for fam, n, _, _, _, t in patterns if t >= 1.0]
    worst = max(t for *_, t in patterns)
    ok = not wrong and not slow
    acceptance_report(4, ok, f"{len(patterns)} instances, wrong {wrong}, slowest {worst:.3f}s (gate 1s)")
    assert not wrong and not slow


def test_criterion_5_strategies(grid_run, patterns, acceptance_report):
    invalid = [(fam, n) for fam, n, prob, v, _, _ in patterns if v.realizable and not validate_strategy(build_dfa(prob, max_vars=16, max_states=10**6), v.strategy)]
    checked = grid_run["validated"] + sum(v.realizable for *_, v, _, _ in patterns)
    ok = not invalid and not grid_run["invalid"]
    acceptance_report(5, ok, f"{checked} strategies checked, {len(grid_run['invalid']) + len(invalid)} rejected")
    assert ok, (grid_run["invalid"][:5], invalid)


def test_criterion_6_transform_laws(exhaustive_family, acceptance_report):
    fam = exhaustive_family
    enc = fam.graph.encoder
    problem = fam.graph.problem
    failures = {"xnf": 0, "progression": 0, "expansion": 0, "congruence": 0}
    classes: dict = {}
    chunk = 20_000
    for lo in range(0, len(fam.formulas), chunk):
        space = TraceSpace(problem.variables, 3)
        for f in fam.formulas[lo : lo + chunk]:
            sem = space.sem(f)
            failures["xnf"] += sem != space.sem(xnf(f))
            failures["progression"] += sem != space.progressed(f)
            p = propositionalize(xnf(f), problem)
            for step in space.steps:
                assignment = {v: v in step for v in problem.variables}
                failures["expansion"] += enc.key(progress(f, step)) != enc.key(rm_next(restrict(p, assignment)))
            classes.setdefault(enc.key(f), []).append(f)
        clear_caches()
    for members in classes.values():
        if len(members) > 1:
            for step in space.steps:
                failures["congruence"] += len({enc.key(progress(g, step)) for g in members}) > 1
    ok = not any(failures.values())
    acceptance_report(6, ok, f"{len(fam.formulas)} formulas, traces up to length 3, failures {failures}")
    assert ok, failures


def test_criterion_7_expansion_laws(acceptance_report):
    checked = bad = 0
    for ny in range(4):
        for nx in range(4):
            ys = tuple(f"y{i}" for i in range(1, ny + 1))
            xs = tuple(f"x{i}" for i in range(1, nx + 1))
            bound = 5 if ny + nx <= 4 else 4
            formulas = enumerate_nnf(ys + xs, bound) if ys + xs else [fm.T, fm.F]
            enc = BddEncoder(Problem(fm.T, ys, xs))
            for f in formulas:
                for policy in POLICIES:
                    bad += len(expansion_violations(f, Problem(f, ys, xs), policy, enc))
                    checked += 1
            clear_caches()
    acceptance_report(7, bad == 0, f"|Y|,|X| in 0..3, formulas of size <= 5 (<= 4 past 4 atoms), {checked} expansions, {bad} violations")
    assert bad == 0


def _random_prop(rng, leaves, depth):
    if depth == 0 or rng.random() < 0.2:
        return rng.choice(leaves)
    parts = [_random_prop(rng, leaves, depth - 1) for _ in range(rng.randint(2, 3))]
    return pand(*parts) if rng.random() < 0.5 else por(*parts)


def _mutate(rng, p, leaves):
    """Swap one leaf or flip one connective."""
    if p.kind in (ANDP, ORP) and rng.random() < 0.7:
        children = list(p.children)
        i = rng.randrange(len(children))
        children[i] = _mutate(rng, children[i], leaves)
        return pand(*children) if p.kind == ANDP else por(*children)
    if p.kind in (ANDP, ORP):
        return por(*p.children) if p.kind == ANDP else pand(*p.children)
    return rng.choice(leaves)


def test_criterion_8_bdd_canonicity(acceptance_report):
    rng = random.Random(8)
    counts = {"equal": 0, "different": 0}
    bad = 0
    for i in range(1000):
        na = rng.randint(1, 4)
        ne = rng.randint(0, 3)
        ns = rng.randint(0, 10 - na - ne)
        agent = tuple(f"y{j}" for j in range(na))
        env = tuple(f"x{j}" for j in range(ne))
        states = [fm.next_(fm.atom(f"s{j}")) for j in range(ns)]
        leaves = [pvar(PropVar(AGENT, y)) for y in agent] + [pvar(PropVar(NEG_AGENT, y)) for y in agent]
        leaves += [pvar(PropVar(ENV, x)) for x in env] + [pvar(PropVar(NEG_ENV, x)) for x in env]
        leaves += [pvar(PropVar(STATE, formula=s)) for s in states]
        p = _random_prop(rng, leaves, 4)
        kind = i % 3
        if kind == 0:
            v = rng.choice(agent)
            q = por(pand(pvar(PropVar(AGENT, v)), restrict(p, {v: True})), pand(pvar(PropVar(NEG_AGENT, v)), restrict(p, {v: False})))
        elif kind == 1:
            q = _mutate(rng, p, leaves)
        else:
            q = _random_prop(rng, leaves, 4)
        variables = [("atom", a) for a in agent + env] + [("state", s) for s in states]
        same_table = prop_table(p, variables) == prop_table(q, variables)
        enc = BddEncoder(Problem(fm.T, agent, env))
        bad += (enc.build(p) == enc.build(q)) != same_table
        counts["equal" if same_table else "different"] += 1
    acceptance_report(8, bad == 0, f"1000 pairs over <= 10 variables ({counts['equal']} equal, {counts['different']} different), {bad} disagreements")
    assert bad == 0

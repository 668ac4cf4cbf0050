"""
Why syntactic state matching is not enough
==========================================

Progressing ``G a U F b`` on ``{a}`` yields ever larger formulas that are all
the same state.  Matching states by identity then never closes the loop;
matching them by their boolean structure does, and the restart mode switches
over once a formula grows past three times the input.
"""

import logging

from ltlf_forward import Mode, Problem, SolveConfig, StepLimitExceeded, bdd_eq, parse_nnf, progress, size, solve

logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")

phi = parse_nnf("G a U F b")
problem = Problem(phi, agent_vars=("a",), env_vars=("b",))

chain = [phi]
for _ in range(5):
    chain.append(progress(chain[-1], {"a"}))
print("sizes:", [size(f) for f in chain])
print("phi1 ~ phi5:", bdd_eq(chain[1], chain[5]), " identical:", chain[1] is chain[5])

try:
    solve(problem, SolveConfig(Mode.HASH, step_limit=10_000))
except StepLimitExceeded as exc:
    print("hash mode:", exc)

v = solve(problem, SolveConfig(Mode.HASH_RESTART))
print("hash-restart:", v.diagnostics())

v = solve(problem, SolveConfig(Mode.BDD))
print("bdd:", v.diagnostics())

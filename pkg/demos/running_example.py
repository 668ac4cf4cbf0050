"""
A small game lost by looping
============================

The agent controls ``a``, the environment controls ``b``, and the agent must
make ``(a U b) && F true`` true.  Waiting for ``b`` never helps, because the
environment can withhold it forever.
"""

from ltlf_forward import FF, Problem, build_dfa, backward_win, get_and_arcs, get_or_arcs, parse_nnf, solve, xnf
from ltlf_forward.formula import to_string

phi = parse_nnf("(a U b) && F true")
problem = Problem(phi, agent_vars=("a",), env_vars=("b",))

# neXt normal form: only ○, ● and the two constants are left on the surface
print("xnf:", to_string(xnf(phi)))

# agent choices come from splitting the formula on a, responses on b
for move, node in get_or_arcs(phi, problem, FF):
    print("agent", move, "->", to_string(node))
    for response, succ in get_and_arcs(node, problem, FF):
        print("    env", response, "->", to_string(succ))

# the search sees phi again on its own path after a, !b and records the loop
verdict = solve(problem)
print("realizable:", verdict.realizable)
for loop in verdict.loops:
    print("loop:", dict(loop.agent_move), dict(loop.env_move), "back to", to_string(loop.target))

# the explicit automaton agrees
dfa = build_dfa(problem)
print("automaton states:", len(dfa.states), "agent wins:", backward_win(dfa)[0])

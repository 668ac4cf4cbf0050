"""
Two scalable pattern families
=============================

``GF(n)`` asks the agent to keep an environment signal on forever, which it
cannot.  ``U(n)`` nests Untils the agent can end at once by raising ``p_n``.
Both are settled by the one-step checks before any search.
"""

import time

from ltlf_forward import build_dfa, solve, validate_strategy
from ltlf_forward.formula import to_string
from ltlf_forward.generators import gf_pattern, u_pattern

print(to_string(gf_pattern(3).formula))
print(to_string(u_pattern(3).formula))

for n in (2, 5, 10, 15):
    for make in (gf_pattern, u_pattern):
        start = time.perf_counter()
        v = solve(make(n))
        print(f"{make.__name__:10s} n={n:2d}  realizable={v.realizable!s:5s}  "
              f"expanded={v.nodes_expanded}  {time.perf_counter() - start:.4f}s")

# a winning strategy is a tiny controller; check it against the automaton
prob = u_pattern(4)
v = solve(prob)
print(v.strategy.to_text())
print("valid:", validate_strategy(build_dfa(prob), v.strategy))

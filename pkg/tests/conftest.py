import os
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=150,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

Y2, X2 = ("y1", "y2"), ("x1", "x2")
Y3, X3 = ("y1", "y2", "y3"), ("x1", "x2", "x3")


class Family:
    """Formulas over one partition with their oracle verdicts from a shared game graph."""

    def __init__(self, formulas, agent_vars, env_vars):
        from ltlf_forward.oracle import GameGraph

        start = time.perf_counter()
        self.formulas = list(formulas)
        self.agent_vars, self.env_vars = agent_vars, env_vars
        self.graph = GameGraph(agent_vars, env_vars, max_states=10**7)
        self.ids = [self.graph.add(f) for f in self.formulas]
        win = self.graph.solve()
        self.verdicts = [win[i] for i in self.ids]
        self.build_time = time.perf_counter() - start


@pytest.fixture(scope="session")
def exhaustive_family():
    """Every NNF formula of size <= 6 over y1, y2 (agent) and x1, x2 (env)."""
    from ltlf_forward import clear_caches
    from ltlf_forward.generators import enumerate_nnf

    start = time.perf_counter()
    fam = Family(enumerate_nnf(Y2 + X2, 6), Y2, X2)
    clear_caches()
    fam.build_time = time.perf_counter() - start
    return fam


@pytest.fixture(scope="session")
def random_family():
    """500 seeded random formulas of size <= 12 over three agent and three env atoms."""
    import random

    from ltlf_forward.generators import random_formula

    rng = random.Random(2024)
    return Family([random_formula(rng, Y3 + X3, 12) for _ in range(500)], Y3, X3)


_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def acceptance_report():
    """``report(n, ok, detail)`` records the outcome of acceptance criterion ``n``."""

    def report(n: int, ok: bool, detail: str = ""):
        _ACCEPTANCE[n] = (ok, detail)

    return report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")

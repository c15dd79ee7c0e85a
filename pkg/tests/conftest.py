import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def table5():
    from circjacobi.loop_engine import compute_table

    return compute_table(5)


@pytest.fixture(scope="session")
def table6():
    from circjacobi.loop_engine import compute_table

    return compute_table(6)


@pytest.fixture(scope="session")
def state5():
    from circjacobi.loop_engine import solve_hierarchy

    return solve_hierarchy(5)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, failed = mod.RESULTS[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {mod.DESCRIPTIONS[n]}"
        if failed:
            line += f"  [failed: {', '.join(failed)}]"
        terminalreporter.write_line(line)

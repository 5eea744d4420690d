from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from plumbseries.graph_model import ResolutionGraph, validate

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
GRAPHS = ROOT / "golden" / "graphs"


@st.composite
def trees(draw, max_size=6, euler=(-5, -1)):
    """Random negative definite plumbing trees (rejection sampled)."""
    s = draw(st.integers(1, max_size))
    eul = tuple(draw(st.lists(st.integers(*euler), min_size=s, max_size=s)))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, s)]
    g = ResolutionGraph(tuple(f"v{i}" for i in range(s)), eul, tuple((p, i + 1) for i, p in enumerate(parents)))
    from hypothesis import assume

    assume(validate(g).negative_definite)
    return g


@pytest.fixture
def graphs_dir():
    return GRAPHS


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        ok, what = mod.RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {what}")

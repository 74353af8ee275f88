import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from morcamp.core import StepFunction, rearrange

SEED = int(os.environ.get("MORCAMP_TEST_SEED", "20240601"))

settings.register_profile(
    "morcamp", derandomize=True, max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("morcamp")


def pytest_report_header(config):
    return f"morcamp test seed: {SEED} (hypothesis derandomized)"


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_step(rng, cells=None, *, log_edges=False, zero_tail=False):
    """Random rearranged step function; log-spaced edges reach far into 0."""
    cells = cells or int(rng.integers(1, 12))
    if log_edges:
        inner = np.sort(10.0 ** rng.uniform(-12, -0.01, cells - 1))
    else:
        inner = np.sort(rng.uniform(0, 1, cells - 1))
    edges = np.unique(np.concatenate(([0.0], inner, [1.0])))
    vals = np.sort(rng.lognormal(0.0, 1.5, edges.size - 1))[::-1]
    if zero_tail and vals.size > 1:
        vals[-1] = 0.0
    return StepFunction(edges, vals, rearranged=True)


@st.composite
def step_functions(draw, max_cells=8):
    k = draw(st.integers(1, max_cells))
    cuts = draw(st.lists(st.floats(1e-6, 1 - 1e-6), min_size=k - 1,
                         max_size=k - 1, unique=True))
    edges = np.concatenate(([0.0], np.sort(cuts), [1.0]))
    if np.any(np.diff(edges) < 1e-9):
        edges = np.linspace(0.0, 1.0, k + 1)
    vals = draw(st.lists(st.floats(0.0, 1e3), min_size=k, max_size=k))
    return StepFunction(edges, np.sort(vals)[::-1], rearranged=True)


@st.composite
def sample_sets(draw, max_items=8):
    k = draw(st.integers(1, max_items))
    vals = draw(st.lists(st.floats(0.0, 1e3), min_size=k, max_size=k))
    w = np.asarray(draw(st.lists(st.floats(0.05, 1.0), min_size=k,
                                 max_size=k)))
    return list(zip(vals, w / w.sum()))


__all__ = ["SEED", "random_step", "step_functions", "sample_sets",
           "rearrange"]

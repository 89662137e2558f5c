from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st


def random_pure(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pure_states():
    return seeds.map(lambda s: random_pure(np.random.default_rng(s)))


def pytest_terminal_summary(terminalreporter):
    # one verdict line per acceptance criterion
    results = getattr(terminalreporter.config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(results):
        checks = results[criterion]
        passed = sum(checks)
        verdict = "PASS" if passed == len(checks) else "FAIL"
        terminalreporter.write_line(f"criterion {criterion:2d}: {verdict} ({passed}/{len(checks)} checks)")

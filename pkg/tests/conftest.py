import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hermg1.hermite import PatchGeometry  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20131018)


@pytest.fixture
def planar_patch():
    """Unit square in z=0 with axis tangents and zero twists: p(u, v) = (u, v, 0)."""
    pos = np.array([[[0, 0, 0], [0, 1, 0]], [[1, 0, 0], [1, 1, 0]]], dtype=float)
    tu = np.broadcast_to([1.0, 0.0, 0.0], (2, 2, 3))
    tv = np.broadcast_to([0.0, 1.0, 0.0], (2, 2, 3))
    return PatchGeometry.from_blocks(pos, tu, tv)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

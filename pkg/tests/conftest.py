import numpy as np
import pytest

from aotoc.channels import QubitChannel
from aotoc.circuits import sample_haar_unitary


def random_unital_channel(rng, n_kraus=3, strict=True):
    """Random mixed-unitary channel, or a unital non-TP map when ``strict`` is false."""
    if strict:
        w = rng.dirichlet(np.ones(n_kraus))
        return QubitChannel([np.sqrt(x) * sample_haar_unitary(2, rng) for x in w])
    g = 0.37
    amp_damp = [np.array([[1, 0], [0, np.sqrt(1 - g)]]), np.array([[0, np.sqrt(g)], [0, 0]])]
    # the adjoint of amplitude damping is unital but not trace preserving
    return QubitChannel([k.conj().T for k in amp_damp], strict=False, name="adjoint amplitude damping")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from aotoc.channels import (
    ChannelError,
    QubitChannel,
    adjoint_channel,
    channel_kraus_rank,
    channel_moments,
    identity_channel,
    make_depolarizing,
    make_rotation,
    natural_rep,
    parse_channel_spec,
)
from aotoc.tensor import I2, PAULIS, kron

from conftest import random_unital_channel


def test_depolarizing_endpoints():
    c0 = make_depolarizing(0.0)
    assert c0.is_identity and channel_kraus_rank(c0) == 1
    assert channel_moments(make_depolarizing(1.0)).m8 == pytest.approx(1.0, abs=1e-12)
    assert channel_moments(make_depolarizing(0.5)).t1.real / 4 == pytest.approx(0.625, abs=1e-12)


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_depolarizing_natural_rep_in_pauli_basis(p):
    expected = (1 - 3 * p / 4) * np.eye(4) + p / 4 * sum(np.kron(s, s.conj().T) for s in PAULIS)
    np.testing.assert_allclose(natural_rep(make_depolarizing(p)), expected, atol=1e-12)
    m = channel_moments(make_depolarizing(p))
    assert m.m8 == pytest.approx(4 - 6 * p + 3 * p * p, abs=1e-12)
    assert m.t1.real == pytest.approx(4 * (1 - 3 * p / 4), abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.1, np.pi / 2, 2.9])
def test_rotation_moments(theta):
    axis = np.array([0.3, -0.5, 0.81])
    axis /= np.linalg.norm(axis)
    c = make_rotation(axis, theta)
    v = c.kraus[0]
    np.testing.assert_allclose(natural_rep(c), np.kron(v, v.conj().T), atol=1e-12)
    m = channel_moments(c)
    assert m.m8 / 4 == pytest.approx(1.0, abs=1e-12)
    assert m.t1.real == pytest.approx(4 * np.cos(theta) ** 2, abs=1e-12)


def test_rotation_zero_is_identity():
    assert make_rotation((0, 0, 1), 0.0).is_identity


def test_identity_rep():
    np.testing.assert_allclose(natural_rep(identity_channel()), np.eye(4))


def test_adjoint_of_rotation_is_inverse_rotation():
    c = adjoint_channel(make_rotation((0, 0, 1), 0.4))
    np.testing.assert_allclose(natural_rep(c), natural_rep(make_rotation((0, 0, 1), -0.4)), atol=1e-12)


def test_depolarizing_self_adjoint():
    c = make_depolarizing(0.3)
    np.testing.assert_allclose(natural_rep(adjoint_channel(c)), natural_rep(c), atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_natural_rep_gauge_invariance(seed, n):
    rng = np.random.default_rng(seed)
    c = random_unital_channel(rng, n)
    w = unitary_group.rvs(n, random_state=rng) if n > 1 else np.array([[np.exp(1j * rng.uniform(0, 6))]])
    mixed = [sum(w[i, j] * c.kraus[j] for j in range(n)) for i in range(n)]
    np.testing.assert_allclose(natural_rep(QubitChannel(mixed)), natural_rep(c), atol=1e-12)


def test_strictly_tp_channels_have_trivial_extra_moments(rng):
    for _ in range(5):
        m = channel_moments(random_unital_channel(rng))
        assert m.m5 == pytest.approx(m.t1, abs=1e-12)
        assert m.m9 == pytest.approx(0.5, abs=1e-12)


def test_non_tp_map_separates_invariants(rng):
    m = channel_moments(random_unital_channel(rng, strict=False))
    assert abs(m.m5 - m.t1) > 1e-3
    assert abs(m.m9 - 0.5) > 1e-3


def test_rejects_non_unital_and_non_tp():
    amp = [np.array([[1, 0], [0, 0.6]]), np.array([[0, 0.8], [0, 0]])]
    with pytest.raises(ChannelError):
        QubitChannel(amp)
    with pytest.raises(ChannelError):
        QubitChannel([np.array([[1, 0], [0, 0.5]])])
    with pytest.raises(ChannelError):
        QubitChannel([np.eye(3)])


def test_parse_specs(tmp_path):
    assert channel_moments(parse_channel_spec("type=depolarizing p=0.3")).m8 == pytest.approx(
        channel_moments(make_depolarizing(0.3)).m8
    )
    c = parse_channel_spec("type=rotation nx=0 ny=0 nz=1 theta=1.5707963")
    assert c.is_unitary
    f = tmp_path / "k.txt"
    f.write_text("0.6 0\n0 0.6\n\n0 0.8\n0.8 0\n")
    k = parse_channel_spec(f"type=kraus file={f}")
    np.testing.assert_allclose(k(np.eye(2)), np.eye(2))


@pytest.mark.parametrize(
    "spec, col",
    [("type=depolarizing p=abc", 19), ("type=bogus", 6), ("type=depolarizing junk", 19)],
)
def test_parse_errors_report_column(spec, col):
    with pytest.raises(ChannelError, match=f"line 1, column {col}"):
        parse_channel_spec(spec)

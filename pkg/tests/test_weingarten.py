import itertools
from collections import Counter

import numpy as np
import pytest

from aotoc.channels import identity_channel, make_depolarizing, make_rotation
from aotoc.closed_form import CircuitParams, g_finite
from aotoc.weingarten import (
    PARTITIONS_OF_4,
    dense_four_copy_g,
    haar_averaged_g_exact,
    haar_mc_average_g,
    irrep_dim,
    perm_operator,
    projector_trace,
    s4_character,
    s4_elements,
    weingarten_character_sum,
    weingarten_class_values,
    weingarten_table,
)

from conftest import random_unital_channel


def test_s4_census():
    els = s4_elements()
    assert len(els) == 24
    census = Counter(p.cycle_type for p in els)
    assert census == {(1, 1, 1, 1): 1, (2, 1, 1): 6, (2, 2): 3, (3, 1): 8, (4,): 6}


def test_character_orthogonality():
    els = s4_elements()
    for a, b in itertools.product(PARTITIONS_OF_4, repeat=2):
        inner = sum(s4_character(a, p) * s4_character(b, p) for p in els)
        assert inner == (24 if a == b else 0)
    assert sum(irrep_dim(s) ** 2 for s in PARTITIONS_OF_4) == 24


def test_projector_traces():
    assert projector_trace((1, 1, 1, 1), 2) == 0
    assert projector_trace((4,), 2) == 5
    for d in (2, 3, 5):
        assert sum(projector_trace(s, d) for s in PARTITIONS_OF_4) == d**4


def test_permutation_representation_is_homomorphism():
    els = s4_elements()
    for p, q in itertools.product(els, repeat=2):
        np.testing.assert_allclose(perm_operator(p) @ perm_operator(q), perm_operator(p * q), atol=1e-12)


def test_weingarten_inverts_gram():
    t = weingarten_table(16)
    np.testing.assert_allclose(t.wg @ t.gram, np.eye(24), atol=1e-10)


@pytest.mark.parametrize("d", [4, 8, 16, 64])
def test_character_sum_matches_gram_solve(d):
    assert weingarten_character_sum(d) == weingarten_class_values(d)


def test_small_dimension_rejected():
    with pytest.raises(ValueError):
        weingarten_class_values(2)


@pytest.mark.parametrize("L, k", [(2, 1), (4, 2), (6, 1)])
def test_identity_is_zero(L, k):
    assert haar_averaged_g_exact(identity_channel(), CircuitParams(L, k)) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize(
    "chan, L, k",
    [(make_depolarizing(0.3), 4, 1), (make_rotation((0, 0, 1), 1.0), 6, 2), (make_depolarizing(0.9), 8, 3)],
)
def test_oracle_equals_closed_form(chan, L, k):
    p = CircuitParams(L, k)
    assert haar_averaged_g_exact(chan, p) == pytest.approx(g_finite(chan, p), abs=1e-9)


def test_factorized_matches_dense_at_L2(rng):
    for _ in range(3):
        c = random_unital_channel(rng, n_kraus=int(rng.integers(1, 5)))
        p = CircuitParams(2, 1)
        assert haar_averaged_g_exact(c, p) == pytest.approx(dense_four_copy_g(c, p), abs=1e-10)


def test_mc_identity_is_exact_zero():
    est = haar_mc_average_g(identity_channel(), CircuitParams(4, 1), 5, seed=3)
    assert est.value == pytest.approx(0, abs=1e-12) and est.stderr == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("chan", [make_depolarizing(0.3), make_rotation((0, 0, 1), np.pi / 2)])
def test_mc_within_three_sigma(chan):
    p = CircuitParams(4, 1)
    est = haar_mc_average_g(chan, p, 20, seed=11)
    assert abs(est.value - haar_averaged_g_exact(chan, p)) <= 3 * est.stderr

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snideal import cb
from snideal.mcn import oh_norm
from snideal.seqnorm import INF, evaluate, kyfan, schatten


def test_cb_from_row_examples():
    for p in (1, 2, 3):
        assert cb.cb_from_row([1, 1], schatten(p), schatten(p)) == pytest.approx(2 ** (1 / (2 * p)))
    assert cb.cb_from_row([1], kyfan(2), kyfan(2)) == pytest.approx(1.0)
    assert cb.cb_from_row([1, 1], kyfan(2), kyfan(2)) == pytest.approx(math.sqrt(2))


def test_oh_index_cases():
    assert cb.oh_index(4) == 8
    assert cb.oh_index(2) == INF
    assert cb.oh_index(1.5, 3) == INF
    assert cb.oh_index(1, 1.5) == pytest.approx(12.0)
    with pytest.raises(ValueError):
        cb.oh_index(3, 2)


def test_oh_witness_examples():
    assert cb.cb_oh_witness([1, 1], 4) == pytest.approx(2 ** (1 / 8), abs=1e-12)
    assert cb.cb_oh_witness([1], 7) == 1.0
    assert cb.cb_oh_witness([3, 1], 2) == 3.0
    lam = [1, 2, 0.5]
    assert cb.cb_oh_witness(lam, 1e6) == pytest.approx(evaluate(schatten(4), lam), rel=1e-5)
    with pytest.raises(ValueError):
        cb.cb_oh_witness(lam, 1.5)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(0.05, 3), min_size=1, max_size=3), st.sampled_from([3.0, 4.0, 10.0]))
def test_oh_witness_grid_matches_closed(lam, p):
    assert cb.cb_oh_witness(lam, p, mode="grid") == pytest.approx(cb.cb_oh_witness(lam, p), abs=1e-6)


def test_oh_witness_tuple_norm():
    b = np.array([1.0, 0.5, 0.25])
    assert oh_norm(cb.oh_witness_tuple(b)) == pytest.approx(np.sum(b**4) ** 0.25)


@pytest.mark.parametrize("m", range(1, 8))
def test_spin_system(m):
    U = cb.spin_system(m)
    assert U.n == 2 ** max(1, (m + 1) // 2)
    assert cb.anticommutation_residual(U) <= 1e-12
    rng = np.random.default_rng(m)
    for _ in range(20):
        eta = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        assert cb.spin_combination_norm(U, eta) <= math.sqrt(2) * np.linalg.norm(eta) * (1 + 1e-12)
        real = rng.standard_normal(m)
        assert cb.spin_combination_norm(U, real) == pytest.approx(np.linalg.norm(real))


def test_spin_pauli_pair():
    U = cb.spin_system(2)
    assert np.array_equal(U[0], np.array([[0, 1], [1, 0]]))
    assert np.array_equal(U[1], np.array([[0, -1j], [1j, 0]]))


def test_spin_identity_is_sum():
    for m in range(1, 6):
        ident = cb.classify_spin_identity(cb.spin_system(m), 50, seed=m)
        assert ident.reading == "sum"
        assert ident.max_dev_sum < 1e-12


def test_spin_size_guard():
    with pytest.raises(ValueError):
        cb.spin_system(13)

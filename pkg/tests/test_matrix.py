import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snideal.matrix import (
    IdealElement,
    adjoint,
    cmatrix_from_json,
    cmatrix_to_json,
    direct_sum,
    ideal_norm,
    is_hermitian,
    kron,
    op_norm,
    partition_inequality,
    random_psd,
    random_unitary,
    s_numbers,
    trace_pair,
    unit,
)
from snideal.seqnorm import INF, kyfan, lorentz, schatten, tensor_seq


def test_s_numbers_diag():
    assert s_numbers(np.diag([3, -4])).tolist() == [4.0, 3.0]
    assert s_numbers(np.zeros((2, 2))).tolist() == [0.0, 0.0]


def test_s_numbers_clamp():
    s = s_numbers(np.diag([1.0, 1e-14]))
    assert s.tolist() == [1.0, 0.0]


def test_kron_spectrum_is_tensor_seq():
    rng = np.random.default_rng(0)
    A, B = rng.standard_normal((3, 3)), rng.standard_normal((2, 2))
    got = s_numbers(kron(A, B)).values
    want = tensor_seq(s_numbers(A), s_numbers(B)).values
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


def test_direct_sum_norm():
    A, B = np.diag([1.0, 2.0]), np.array([[3.0]])
    assert ideal_norm(kyfan(2), direct_sum(A, B)) == 5.0
    assert op_norm(direct_sum(A, B)) == 3.0


def test_random_unitary_and_psd():
    U = random_unitary(4, 1)
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-12)
    for spec in (schatten(2), kyfan(2), lorentz(3, 2), schatten(INF)):
        P = random_psd(3, spec, 2)
        assert is_hermitian(P)
        assert np.linalg.eigvalsh(P).min() >= -1e-12
        assert ideal_norm(spec, P) == pytest.approx(1.0, rel=1e-10)


def test_unit_and_trace_pair():
    assert unit(1, 2, 2)[0, 1] == 1 and unit(1, 2, 2).sum() == 1
    A = np.arange(6).reshape(2, 3)
    B = np.arange(6).reshape(3, 2)
    assert trace_pair(A, B) == np.trace(A @ B)
    with pytest.raises(ValueError):
        trace_pair(A, A)


def test_adjoint_and_errors():
    A = np.array([[1, 2j], [0, 1]])
    assert np.array_equal(adjoint(A), A.conj().T)
    with pytest.raises(ValueError):
        s_numbers(np.ones(3))
    with pytest.raises(ValueError):
        s_numbers(np.array([[np.inf]]))


def test_json_roundtrip_and_diagnostics():
    A = np.array([[1 + 2j, 0], [3, -1j]])
    assert np.array_equal(cmatrix_from_json(cmatrix_to_json(A)), A)
    assert np.array_equal(cmatrix_from_json({"rows": 1, "cols": 2, "data": [1, [0, 1]]}), np.array([[1, 1j]]))
    with pytest.raises(ValueError, match="m.data\\[1\\]"):
        cmatrix_from_json({"rows": 1, "cols": 2, "data": [1, [0]]}, "m")
    with pytest.raises(ValueError, match="missing key"):
        cmatrix_from_json({"rows": 1, "data": []})


def test_ideal_element_cache():
    e = IdealElement(np.diag([3.0, 4.0]))
    assert e.norm(schatten(2)) == 5.0
    assert e.spectrum.tolist() == [4.0, 3.0]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.sampled_from([1.0, 1.5, 2.0]))
def test_partition_inequality_q_star(n, seed, p):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n))
    lhs, rhs = partition_inequality(schatten(p), Z + Z.conj().T)
    assert lhs <= rhs * (1 + 1e-12)


def test_partition_inequality_fails_for_operator_norm():
    lhs, rhs = partition_inequality(schatten(INF), np.eye(2))
    assert lhs == 2.0 and rhs == 1.0

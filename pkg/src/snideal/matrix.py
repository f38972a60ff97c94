"""Dense complex matrix kernel: s-numbers, ideal norms, tensor and direct sums."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .seqnorm import SnSpec, Spectrum, evaluate

CLAMP_RTOL = 1e-12


class SNumberError(ArithmeticError):
    """SVD failed to converge."""


def as_cmatrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def s_numbers(A) -> Spectrum:
    """Singular values, nonincreasing; those below 1e-12 * s_1 are set to 0."""
    A = as_cmatrix(A)
    if A.size == 0:
        return Spectrum([])
    try:
        s = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(A) if A.shape[0] == A.shape[1] else float("nan")
        raise SNumberError(f"SVD did not converge for {A.shape} matrix (cond ~ {cond:.3g})") from exc
    if s.size and s[0] > 0:
        s = np.where(s < CLAMP_RTOL * s[0], 0.0, s)
    return Spectrum(s)


def ideal_norm(spec: SnSpec, A) -> float:
    return evaluate(spec, s_numbers(A))


def op_norm(A) -> float:
    return float(s_numbers(A)[0]) if np.asarray(A).size else 0.0


def kron(A, B) -> np.ndarray:
    return np.kron(as_cmatrix(A), as_cmatrix(B))


def direct_sum(A, B) -> np.ndarray:
    A, B = as_cmatrix(A), as_cmatrix(B)
    out = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]), dtype=complex)
    out[: A.shape[0], : A.shape[1]] = A
    out[A.shape[0] :, A.shape[1] :] = B
    return out


def adjoint(A) -> np.ndarray:
    return as_cmatrix(A).conj().T


def trace_pair(A, B) -> complex:
    """tr(AB) without forming the product."""
    A, B = as_cmatrix(A), as_cmatrix(B)
    if A.shape[1] != B.shape[0] or A.shape[0] != B.shape[1]:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    return complex(np.sum(A * B.T))


def unit(i: int, j: int, n: int) -> np.ndarray:
    """Matrix unit e_ij (1-based indices) in M_n."""
    e = np.zeros((n, n), dtype=complex)
    e[i - 1, j - 1] = 1.0
    return e


def hermitian_part(A) -> np.ndarray:
    A = np.asarray(A)
    return (A + A.conj().T) / 2


def is_hermitian(A, rtol: float = 1e-12) -> bool:
    A = as_cmatrix(A)
    scale = max(op_norm(A), 1e-300)
    return op_norm(A - A.conj().T) <= rtol * scale


def eigh_desc(H) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (nonincreasing) and eigenvectors of a Hermitian matrix."""
    w, U = np.linalg.eigh(hermitian_part(H))
    return w[::-1], U[:, ::-1]


def from_eig(U: np.ndarray, vals) -> np.ndarray:
    X = (U * np.asarray(vals)) @ U.conj().T
    return hermitian_part(X)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with the phase fix."""
    if n <= 0:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_psd(n: int, spec: SnSpec, seed=None) -> np.ndarray:
    """Haar-rotated PSD matrix with a random spectrum normalized to ideal norm 1."""
    if n <= 0:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    U = random_unitary(n, rng)
    lam = -np.sort(-rng.random(n))
    lam[0] = max(lam[0], 1e-3)
    lam /= evaluate(spec, lam)
    return from_eig(U, lam)


def random_matrix(shape, seed=None) -> np.ndarray:
    rng = _rng(seed)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def partition_inequality(spec: SnSpec, y) -> tuple[float, float]:
    """(sum_i ||y_i||^2, ||y||^2) for the 2x2 block partition of a 2n x 2n matrix."""
    y = as_cmatrix(y)
    m = y.shape[0]
    if m % 2 or y.shape[1] != m:
        raise ValueError("expected an even square matrix")
    n = m // 2
    blocks = (y[:n, :n], y[:n, n:], y[n:, :n], y[n:, n:])
    lhs = sum(ideal_norm(spec, b) ** 2 for b in blocks)
    return lhs, ideal_norm(spec, y) ** 2


@dataclass
class IdealElement:
    """A matrix together with its cached s-numbers."""

    matrix: np.ndarray
    spectrum: Spectrum = field(init=False)

    def __post_init__(self):
        self.matrix = as_cmatrix(self.matrix)
        self.spectrum = s_numbers(self.matrix)

    def norm(self, spec: SnSpec) -> float:
        return evaluate(spec, self.spectrum)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def cmatrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    flat = A.ravel()
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def cmatrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: expected an object with rows/cols/data")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise ValueError(f"{where}: missing key {exc.args[0]!r}") from None
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise ValueError(f"{where}: rows/cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ValueError(f"{where}: data must hold rows*cols = {rows * cols} entries")
    out = np.empty(rows * cols, dtype=complex)
    for k, entry in enumerate(data):
        if isinstance(entry, (int, float)):
            out[k] = entry
            continue
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ValueError(f"{where}.data[{k}]: expected [re, im]")
        out[k] = complex(float(entry[0]), float(entry[1]))
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{where}: non-finite entries")
    return out.reshape(rows, cols)

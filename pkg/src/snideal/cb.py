"""Completely bounded norms of diagonal maps, and spin-system witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .mcn import MatrixTuple
from .seqnorm import INF, MultiplicatorConfig, SnSpec, as_spectrum, multiplicator_norm

MAX_SPIN = 12


def cb_from_row(x, phi: SnSpec, psi: SnSpec, config: Optional[MultiplicatorConfig] = None) -> float:
    """||x||_{CB(R, H(phi, psi))} = sqrt of the multiplicator norm of x^2."""
    s = as_spectrum(x).values
    return math.sqrt(multiplicator_norm(s**2, phi, psi, config).value)


def oh_index(p: float, q: float = INF) -> float:
    """Schatten index r with CB(OH, H(S_p, S_q)) = S_r (INF means B(H))."""
    if p < 1 or q < p:
        raise ValueError(f"need 1 <= p <= q, got p={p}, q={q}")
    if p >= 2:
        return INF if p == 2 else 4 * p / (p - 2)
    if q >= 2:
        return INF
    return 4 * q / (2 - q)


def _lr(lam: np.ndarray, r: float) -> float:
    if r == INF:
        return float(lam.max(initial=0.0))
    top = lam.max(initial=0.0)
    if top == 0:
        return 0.0
    return float(top * np.sum((lam / top) ** r) ** (1 / r))


def cb_oh_norm(lam, p: float, q: float = INF) -> float:
    """||diag(lam)||_{CB(OH, H(S_p, S_q))} in closed form."""
    return _lr(as_spectrum(lam).values, oh_index(p, q))


def _witness_ratio(lam: np.ndarray, c: np.ndarray, p: float) -> float:
    num = np.sum(lam**4 * c**2) ** 0.25
    den = np.sum(c**p) ** (1 / (2 * p))
    return float(num / den) if den > 0 else 0.0


def cb_oh_witness(lam, p: float, mode: str = "closed", grid: int = 41) -> float:
    """Lower bound sup_c (sum lam^4 c^2)^(1/4) / (sum c^p)^(1/(2p)) from the b_i e_1i tuples.

    ``mode="closed"`` uses the Hoelder-optimal c and returns ||lam||_r with
    r = 4p/(p-2); ``mode="grid"`` searches c on a grid and polishes locally.
    """
    if p < 2:
        raise ValueError(f"witness bound needs p >= 2, got {p}")
    lam = as_spectrum(lam).values
    if mode == "closed":
        return _lr(lam, oh_index(p))
    if mode != "grid":
        raise ValueError(f"unknown mode {mode!r}")
    if lam.size == 0 or lam[0] == 0:
        return 0.0
    if p == 2:
        return float(lam[0])  # the sup is approached by c -> e_1
    k = lam.size
    axes = np.linspace(0.0, 1.0, grid)
    C = np.stack(np.meshgrid(*([axes] * k), indexing="ij"), axis=-1).reshape(-1, k)
    C = C[C.max(axis=1) > 0]
    num = np.sum(lam**4 * C**2, axis=1) ** 0.25
    den = np.sum(C**p, axis=1) ** (1 / (2 * p))
    c0 = C[int(np.argmax(num / den))]
    res = optimize.minimize(
        lambda c: -_witness_ratio(lam, c, p),
        np.maximum(c0, 1e-3),
        method="L-BFGS-B",
        bounds=[(1e-12, 1.0)] * k,
        options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 5000},
    )
    return max(float(np.max(num / den)), -float(res.fun))


def oh_witness_tuple(b) -> MatrixTuple:
    """T_{B,i} = b_i e_{1i}; its OH norm is (sum b_i^4)^(1/4)."""
    b = np.asarray(b, dtype=float)
    n = b.size
    mats = np.zeros((n, n, n), dtype=complex)
    mats[np.arange(n), 0, np.arange(n)] = b
    return MatrixTuple(mats)


# ---------------------------------------------------------------------------
# spin systems
# ---------------------------------------------------------------------------

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _chain(ops) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for A in ops:
        out = np.kron(out, A)
    return out


def spin_system(m: int) -> MatrixTuple:
    """m pairwise anticommuting self-adjoint unitaries (Jordan-Wigner), size 2^ceil(m/2)."""
    if not 1 <= m <= MAX_SPIN:
        raise ValueError(f"spin system size must be in 1..{MAX_SPIN}, got {m}")
    k = max(1, (m + 1) // 2)
    I2 = np.eye(2, dtype=complex)
    mats = []
    for i in range(m):
        j, which = divmod(i, 2)
        mats.append(_chain([_Z] * j + [_X if which == 0 else _Y] + [I2] * (k - j - 1)))
    return MatrixTuple(np.stack(mats))


def anticommutation_residual(U: MatrixTuple) -> float:
    """Largest entry-norm deviation from U_i U_j + U_j U_i = 2 delta_ij I and U_i = U_i^*."""
    M = U.matrices
    eye = np.eye(U.n)
    worst = 0.0
    for i in range(U.m):
        worst = max(worst, float(np.abs(M[i] - M[i].conj().T).max()))
        for j in range(i, U.m):
            target = 2 * eye if i == j else 0
            worst = max(worst, float(np.abs(M[i] @ M[j] + M[j] @ M[i] - target).max()))
    return worst


def spin_combination_norm(U: MatrixTuple, eta) -> float:
    """||sum eta_i U_i||."""
    eta = np.asarray(eta, dtype=complex)
    return float(np.linalg.norm(np.einsum("i,ijk->jk", eta, U.matrices), 2))


def spin_square_norm(U: MatrixTuple, lam) -> float:
    """||sum lam_i^2 U_i (x) U_i||."""
    lam = np.asarray(lam, dtype=float)
    S = sum(l**2 * np.kron(A, A) for l, A in zip(lam, U.matrices))
    return float(np.linalg.norm(S, 2))


@dataclass
class SpinIdentity:
    """Which closed form ||sum lam^2 U (x) U|| follows on the samples."""

    reading: str  # "sum" (= sum lam^2), "sqrt" (= (sum lam^2)^(1/2)), or "neither"
    max_dev_sum: float
    max_dev_sqrt: float
    samples: int


def classify_spin_identity(U: MatrixTuple, samples: int = 50, seed=0, tol: float = 1e-10) -> SpinIdentity:
    rng = np.random.default_rng(seed)
    dev_sum = dev_sqrt = 0.0
    for _ in range(samples):
        lam = rng.random(U.m) * 2
        v = spin_square_norm(U, lam)
        s = float(np.sum(lam**2))
        dev_sum = max(dev_sum, abs(v - s) / max(1.0, s))
        dev_sqrt = max(dev_sqrt, abs(v - math.sqrt(s)) / max(1.0, s))
    reading = "sum" if dev_sum <= tol else "sqrt" if dev_sqrt <= tol else "neither"
    return SpinIdentity(reading, dev_sum, dev_sqrt, samples)

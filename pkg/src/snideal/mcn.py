"""Matrix cross norms ||T||_{Phi,Psi} of finite tuples T = sum_i xi_i (x) T_i.

||T||_{Phi,Psi}^2 is the norm of rho_T(x) = sum_i T_i x T_i^* from S_Phi to
S_Psi, and equals sup tr(a rho_T(b)) over PSD a, b with ||a||_{Psi*} <= 1 and
||b||_Phi <= 1.  :func:`mcn_norm` maximizes that bilinear form by alternating
exact half-steps, so every estimate is a certified lower bound carried by its
witness pair (a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import optimize
from scipy.linalg import expm

from .estimate import APPROXIMATE, EXACT, LOWER_BOUND, NormEstimate
from .matrix import (
    cmatrix_from_json,
    cmatrix_to_json,
    eigh_desc,
    from_eig,
    hermitian_part,
    op_norm,
    random_psd,
    random_unitary,
    s_numbers,
    unit,
)
from .seqnorm import INF, SnSpec, ball_attainer, evaluate, kyfan_theta, schatten

MAX_AMPLIFIED_SIZE = 64  # (nN)^2 <= 4096


@dataclass
class MatrixTuple:
    """Finite family (T_1, ..., T_m) of n x n complex matrices."""

    matrices: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrices, dtype=complex)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected m >= 1 square matrices, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tuple entries must be finite")
        self.matrices = arr

    @property
    def m(self) -> int:
        return self.matrices.shape[0]

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return self.m

    def __getitem__(self, i):
        return self.matrices[i]

    def adjoint(self) -> "MatrixTuple":
        """T^* = sum_i xi_i (x) T_i^*."""
        return MatrixTuple(self.matrices.conj().transpose(0, 2, 1))

    def __add__(self, other: "MatrixTuple") -> "MatrixTuple":
        a, b = _pad_m(self, other.m), _pad_m(other, self.m)
        return MatrixTuple(a + b)

    def __mul__(self, c) -> "MatrixTuple":
        return MatrixTuple(self.matrices * c)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "matrices": [cmatrix_to_json(A) for A in self.matrices]}

    @classmethod
    def from_json(cls, obj, where: str = "tuple") -> "MatrixTuple":
        if not isinstance(obj, dict) or "matrices" not in obj:
            raise ValueError(f"{where}: expected an object with a 'matrices' list")
        mats = obj["matrices"]
        if not isinstance(mats, list) or not mats:
            raise ValueError(f"{where}.matrices: expected a nonempty list")
        arr = [cmatrix_from_json(A, f"{where}.matrices[{k}]") for k, A in enumerate(mats)]
        shapes = {A.shape for A in arr}
        if len(shapes) != 1 or arr[0].shape[0] != arr[0].shape[1]:
            raise ValueError(f"{where}: matrices must share one square shape, got {sorted(shapes)}")
        T = cls(np.stack(arr))
        for key, val in (("m", T.m), ("n", T.n)):
            if key in obj and obj[key] != val:
                raise ValueError(f"{where}: declared {key}={obj[key]} but found {val}")
        return T


def _pad_m(T: MatrixTuple, m: int) -> np.ndarray:
    if T.m >= m:
        return T.matrices
    pad = np.zeros((m - T.m, T.n, T.n), dtype=complex)
    return np.concatenate([T.matrices, pad])


def as_tuple(T) -> MatrixTuple:
    return T if isinstance(T, MatrixTuple) else MatrixTuple(T)


def random_tuple(m: int, n: int, seed=None) -> MatrixTuple:
    rng = np.random.default_rng(seed)
    return MatrixTuple((rng.standard_normal((m, n, n)) + 1j * rng.standard_normal((m, n, n))) / np.sqrt(2))


def simple_tensor(xi, A) -> MatrixTuple:
    """xi (x) A as the tuple (xi_1 A, ..., xi_m A)."""
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    A = np.asarray(A, dtype=complex)
    return MatrixTuple(xi[:, None, None] * A[None])


# ---------------------------------------------------------------------------
# rho maps and tuple algebra
# ---------------------------------------------------------------------------


def rho_apply(T, b) -> np.ndarray:
    """sum_i T_i b T_i^*."""
    T = as_tuple(T)
    b = np.asarray(b, dtype=complex)
    if b.shape != (T.n, T.n):
        raise ValueError(f"rho_T needs a {T.n}x{T.n} argument, got {b.shape}")
    M = T.matrices
    return np.sum(M @ b @ M.conj().transpose(0, 2, 1), axis=0)


def rho_adj_apply(T, a) -> np.ndarray:
    """sum_i T_i^* a T_i."""
    return rho_apply(as_tuple(T).adjoint(), a)


def pairing(T, a, b) -> float:
    """tr(a rho_T(b)) (real for PSD a, b)."""
    return float(np.real(np.sum(np.asarray(a) * rho_apply(T, b).T)))


def apply_coeff(x, T) -> MatrixTuple:
    """T'_j = sum_i x_ji T_i, the action of a scalar matrix on coefficients."""
    T = as_tuple(T)
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    if x.shape[1] != T.m:
        raise ValueError(f"coefficient matrix has {x.shape[1]} columns, tuple has {T.m} entries")
    return MatrixTuple(np.einsum("ji,ikl->jkl", x, T.matrices))


def left_mul(X, T) -> MatrixTuple:
    T = as_tuple(T)
    return MatrixTuple(np.asarray(X, dtype=complex)[None] @ T.matrices)


def right_mul(T, Y) -> MatrixTuple:
    T = as_tuple(T)
    return MatrixTuple(T.matrices @ np.asarray(Y, dtype=complex)[None])


def direct_sum_tuple(T, S) -> MatrixTuple:
    """(T_i (+) S_i)_i, padding the shorter tuple with zeros."""
    T, S = as_tuple(T), as_tuple(S)
    m = max(T.m, S.m)
    A, B = _pad_m(T, m), _pad_m(S, m)
    out = np.zeros((m, T.n + S.n, T.n + S.n), dtype=complex)
    out[:, : T.n, : T.n] = A
    out[:, T.n :, T.n :] = B
    return MatrixTuple(out)


def amplify(T, N: int) -> MatrixTuple:
    """(T_i (x) I_N)_i."""
    T = as_tuple(T)
    eye = np.eye(N)
    return MatrixTuple(np.stack([np.kron(A, eye) for A in T.matrices]))


def embed_amplified(b, n: int, N_old: int, N_new: int) -> np.ndarray:
    """Pad an operator on C^n (x) C^N_old into C^n (x) C^N_new."""
    b = np.asarray(b).reshape(n, N_old, n, N_old)
    out = np.zeros((n, N_new, n, N_new), dtype=complex)
    out[:, :N_old, :, :N_old] = b
    return out.reshape(n * N_new, n * N_new)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def row_norm(T) -> float:
    """||sum T_i T_i^*||^(1/2)."""
    M = as_tuple(T).matrices
    return math.sqrt(op_norm(np.sum(M @ M.conj().transpose(0, 2, 1), axis=0)))


def col_norm(T) -> float:
    """||sum T_i^* T_i||^(1/2)."""
    M = as_tuple(T).matrices
    return math.sqrt(op_norm(np.sum(M.conj().transpose(0, 2, 1) @ M, axis=0)))


def oh_norm(T) -> float:
    """||sum T_i (x) conj(T_i)||^(1/2)."""
    M = as_tuple(T).matrices
    return math.sqrt(op_norm(sum(np.kron(A, A.conj()) for A in M)))


# ---------------------------------------------------------------------------
# alternating ascent
# ---------------------------------------------------------------------------


@dataclass
class MCNConfig:
    restarts: int = 16
    max_iters: int = 500
    tol: float = 1e-10
    seed: int = 0
    kick_rounds: int = 0
    initial: tuple = ()


def aligned_attainer(spec: SnSpec, H) -> tuple[np.ndarray, float]:
    """PSD X with ||X||_spec <= 1 maximizing tr(X H), sharing H's eigenbasis."""
    w, U = eigh_desc(H)
    beta, val = ball_attainer(spec, np.clip(w, 0.0, None))
    return from_eig(U, beta.values), val


def _ascend(T, phi, psi_dual, b, max_iters, tol):
    trace = []
    prev = -INF
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        a, va = aligned_attainer(psi_dual, rho_apply(T, b))
        b, vb = aligned_attainer(phi, rho_adj_apply(T, a))
        trace += [va, vb]
        if vb - prev <= tol * max(abs(vb), 1e-300):
            converged = True
            break
        prev = vb
    return a, b, trace, it, converged


def _monotone(trace, rtol=1e-12) -> bool:
    t = np.asarray(trace)
    return bool(np.all(np.diff(t) >= -rtol * np.maximum(np.abs(t[1:]), 1e-300)))


def start_points(n: int, phi: SnSpec, config: MCNConfig) -> list:
    starts = [np.eye(n, dtype=complex) / phi.flat_norms(n)[-1]]
    starts += [unit(k, k, n) for k in range(1, n + 1)]
    starts += [random_psd(n, phi, np.random.default_rng([config.seed, r])) for r in range(config.restarts)]
    starts += [np.asarray(b, dtype=complex) for b in config.initial]
    return starts


def _closed_form_certificate(T, phi, psi):
    if phi.is_schatten(INF) and psi.is_schatten(INF):
        return row_norm(T), "row"
    if phi.is_schatten(1) and psi.is_schatten(1):
        return col_norm(T), "column"
    return None, None


def mcn_norm(T, phi: SnSpec, psi: SnSpec, config: Optional[MCNConfig] = None) -> NormEstimate:
    """Certified lower bound (exact for the row/column pairs) on ||T||_{phi,psi}."""
    config = config or MCNConfig()
    T = as_tuple(T)
    psi_dual = psi.dual()
    rng_kick = np.random.default_rng([config.seed, 1 << 20])
    best = None
    notes = []
    for r, b0 in enumerate(start_points(T.n, phi, config)):
        a, b, trace, iters, conv = _ascend(T, phi, psi_dual, b0, config.max_iters, config.tol)
        val = pairing(T, a, b)
        for _ in range(config.kick_rounds):
            U = random_unitary(T.n, rng_kick)
            a2, b2, tr2, it2, conv2 = _ascend(T, phi, psi_dual, U @ b @ U.conj().T, config.max_iters, config.tol)
            v2 = pairing(T, a2, b2)
            if v2 > val * (1 + config.tol):
                a, b, trace, iters, conv, val = a2, b2, tr2, it2, conv2, v2
        if not _monotone(trace):
            notes.append(f"restart {r}: objective decreased beyond rounding")
        if best is None or val > best[0] + config.tol * abs(best[0]):
            best = (val, a, b, trace, iters, conv, r)
    val, a, b, trace, iters, conv, r = best
    value = math.sqrt(max(val, 0.0))
    exactness = LOWER_BOUND
    cf, which = _closed_form_certificate(T, phi, psi)
    if cf is not None and abs(value - cf) <= 1e-9 * max(1.0, cf):
        exactness = EXACT
        notes.append(f"matches {which} closed form")
    elif not conv:
        exactness = APPROXIMATE
        notes.append(f"best restart {r} hit max_iters={config.max_iters}")
    return NormEstimate(
        value,
        exactness,
        witness_a=a,
        witness_b=b,
        method="alternating",
        iterations=iters,
        restarts_used=1 + T.n + config.restarts + len(config.initial),
        trace=list(trace),
        diagnostic="; ".join(notes),
    )


def certify(est: NormEstimate, T, phi: SnSpec, psi: SnSpec, rtol: float = 1e-9) -> dict:
    """Re-check a witness pair: norms inside the unit balls and tr(a rho(b)) = value^2."""
    a, b = est.witness_a, est.witness_b
    if a is None or b is None:
        raise ValueError("estimate carries no witness pair")
    na = evaluate(psi.dual(), s_numbers(a))
    nb = evaluate(phi, s_numbers(b))
    val = pairing(T, a, b)
    psd = min(np.linalg.eigvalsh(hermitian_part(a))[0], np.linalg.eigvalsh(hermitian_part(b))[0])
    ok = (
        na <= 1 + rtol
        and nb <= 1 + rtol
        and psd >= -rtol * max(1.0, op_norm(a), op_norm(b))
        and abs(val - est.value**2) <= rtol * max(1.0, est.value**2)
    )
    return {"ok": bool(ok), "norm_a": na, "norm_b": nb, "pairing": val, "min_eig": float(psd)}


# ---------------------------------------------------------------------------
# min norm: sup over unit v of ||sum v_i T_i||
# ---------------------------------------------------------------------------


def _min_ascent(M: np.ndarray, v: np.ndarray, iters: int, tol: float):
    prev = -INF
    x = y = None
    nw = 0.0
    for _ in range(iters):
        U, _s, Vh = np.linalg.svd(np.einsum("i,ijk->jk", v, M))
        y, x = U[:, 0], Vh[0].conj()
        w = np.einsum("j,ijk,k->i", y.conj(), M, x)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            break
        v = w.conj() / nw
        if nw - prev <= tol * nw:
            break
        prev = nw
    return v, x, y, nw


def min_norm(T, config: Optional[MCNConfig] = None, grid: int = 96) -> NormEstimate:
    """sup_{|v|=1} ||sum v_i T_i||, the smallest matrix cross norm.

    Witnesses are a = y y^*, b = x x^* for top singular vectors x, y of the
    optimal combination.  For m <= 2 a fine grid over the unit sphere seeds the
    ascent, which makes the value exact up to rounding.
    """
    config = config or MCNConfig()
    T = as_tuple(T)
    M = T.matrices
    rng = np.random.default_rng([config.seed, 2])
    starts = [np.eye(T.m, dtype=complex)[i] for i in range(T.m)]
    starts.append(np.ones(T.m, dtype=complex) / math.sqrt(T.m))
    for _ in range(config.restarts):
        z = rng.standard_normal(T.m) + 1j * rng.standard_normal(T.m)
        starts.append(z / np.linalg.norm(z))
    if T.m == 2:
        t = np.linspace(0, np.pi / 2, grid)
        ph = np.linspace(0, 2 * np.pi, 2 * grid, endpoint=False)
        tt, pp = np.meshgrid(t, ph, indexing="ij")
        V = np.stack([np.cos(tt).ravel(), (np.sin(tt) * np.exp(1j * pp)).ravel()], axis=1)
        norms = np.linalg.norm(np.einsum("gi,ijk->gjk", V, M), ord=2, axis=(1, 2))
        starts.append(V[int(np.argmax(norms))])
    best = None
    for v0 in starts:
        v, x, y, val = _min_ascent(M, v0, config.max_iters, config.tol)
        if best is None or val > best[3]:
            best = (v, x, y, val)
    v, x, y, val = best
    exact = T.m <= 2
    return NormEstimate(
        val,
        EXACT if exact else LOWER_BOUND,
        witness_a=np.outer(y, y.conj()),
        witness_b=np.outer(x, x.conj()),
        method="min_ascent" + ("+grid" if T.m == 2 else ""),
        restarts_used=len(starts),
        diagnostic="coefficient vector " + ", ".join(f"{z:.6g}" for z in v),
    )


# ---------------------------------------------------------------------------
# r_tilde: the norm H(Phi, Phi_inf), i.e. ||T||_{Phi, S_inf}
# ---------------------------------------------------------------------------


def _gram(M: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """G_ij = <T_i T_j^* xi, xi>."""
    W = np.einsum("iba,b->ia", M.conj(), xi)  # rows T_i^* xi
    return W.conj() @ W.T


def _mix(M: np.ndarray, A: np.ndarray) -> np.ndarray:
    """sum_ij A_ji T_i T_j^*."""
    return np.einsum("ji,iab,jcb->ac", A, M, M.conj())


def r_tilde_norm(T, phi: SnSpec, config: Optional[MCNConfig] = None) -> NormEstimate:
    """||T||_{phi, S_inf} by ascent on the unit sphere of C^n.

    For a unit vector xi the value is phi*(eig G(xi)) with the Gram matrix
    G_ij = <T_i T_j^* xi, xi>; given the aligned coefficient matrix A the
    next xi is the top eigenvector of sum_ij A_ji T_i T_j^*.
    """
    config = config or MCNConfig()
    T = as_tuple(T)
    M = T.matrices
    rng = np.random.default_rng([config.seed, 3])
    starts = [np.eye(T.n, dtype=complex)[k] for k in range(T.n)]
    for _ in range(config.restarts):
        z = rng.standard_normal(T.n) + 1j * rng.standard_normal(T.n)
        starts.append(z / np.linalg.norm(z))
    best = None
    for xi in starts:
        trace = []
        prev = -INF
        for it in range(1, config.max_iters + 1):
            A, val = aligned_attainer(phi, _gram(M, xi))
            trace.append(val)
            w, U = eigh_desc(_mix(M, A))
            xi = U[:, 0]
            if val - prev <= config.tol * max(val, 1e-300):
                break
            prev = val
        if best is None or val > best[0]:
            best = (val, xi, trace, it)
    val, xi, trace, it = best
    a = np.outer(xi, xi.conj())
    b, bval = aligned_attainer(phi, rho_adj_apply(T, a))
    return NormEstimate(
        math.sqrt(max(bval, 0.0)),
        LOWER_BOUND,
        witness_a=a,
        witness_b=b,
        method="sphere_ascent",
        iterations=it,
        restarts_used=len(starts),
        trace=trace,
    )


def r_tilde_frames(T, phi: SnSpec, config: Optional[MCNConfig] = None, samples: int = 256) -> NormEstimate:
    """Second route to ||T||_{phi, S_inf}: black-box maximization over frames.

    Maximizes ||sum_ij A_ij T_i T_j^*|| over A = V diag(a) V^*, V unitary and
    a >= 0 with phi(a) = 1, using random sampling and L-BFGS refinement.  No
    alternating step is shared with :func:`r_tilde_norm`.  ``witness_a`` holds
    the final coefficient matrix A.
    """
    config = config or MCNConfig()
    T = as_tuple(T)
    M = T.matrices
    m = T.m
    rng = np.random.default_rng([config.seed, 4])
    iu = np.triu_indices(m, 1)

    def build(p):
        H = np.diag(p[:m]).astype(complex)
        k = len(iu[0])
        H[iu] = p[m : m + k] + 1j * p[m + k : m + 2 * k]
        H = H + np.triu(H, 1).conj().T
        V = expm(1j * H)
        a = np.abs(p[m + 2 * k :])
        s = evaluate(phi, a)
        a = a / s if s > 0 else a
        return V @ np.diag(a) @ V.conj().T

    def f(p):
        A = build(p)
        X = np.einsum("ij,iab,jcb->ac", A, M, M.conj())
        return -float(np.linalg.eigvalsh(hermitian_part(X))[-1])

    dim = m + 2 * len(iu[0]) + m
    pts = [rng.standard_normal(dim) for _ in range(samples)]
    vals = [f(p) for p in pts]
    order = np.argsort(vals)[: max(4, config.restarts // 2)]
    best = None
    for j in order:
        res = optimize.minimize(f, pts[j], method="L-BFGS-B", options={"maxiter": 2000, "ftol": 1e-15, "gtol": 1e-10})
        if best is None or res.fun < best.fun:
            best = res
    A = build(best.x)
    return NormEstimate(
        math.sqrt(max(-best.fun, 0.0)),
        APPROXIMATE,
        witness_a=A,
        method="frames_lbfgs",
        iterations=int(best.nit),
        restarts_used=len(order),
    )


# ---------------------------------------------------------------------------
# H#(Phi_theta): closed form against truncations
# ---------------------------------------------------------------------------


@dataclass
class HSharpResult:
    theta: float
    closed_form: float
    rank_one_part: NormEstimate
    row: float
    truncated: list = field(default_factory=list)  # (N, NormEstimate)

    def values(self) -> list:
        return [est.value for _, est in self.truncated]


def hsharp_kyfan_theta(T, theta: float, levels=(1, 2, 3, 4), config: Optional[MCNConfig] = None) -> HSharpResult:
    """max(||T||_{S_1,Phi_theta}, ||T||_row) against ||T (x) I_N||_{Phi_theta,Phi_theta}.

    The truncated sequence is warm-started from the padded previous witness,
    so it is nondecreasing by construction.
    """
    config = config or MCNConfig()
    T = as_tuple(T)
    phi = kyfan_theta(theta)
    part = mcn_norm(T, schatten(1), phi, config)
    row = row_norm(T)
    out = HSharpResult(theta, math.sqrt(max(part.value**2, row**2)), part, row)
    prev_b, prev_N = None, None
    for N in sorted(levels):
        if T.n * N > MAX_AMPLIFIED_SIZE:
            raise ValueError(f"amplified size {T.n * N} exceeds {MAX_AMPLIFIED_SIZE}")
        init = () if prev_b is None else (embed_amplified(prev_b, T.n, prev_N, N),)
        est = mcn_norm(amplify(T, N), phi, phi, replace(config, initial=init))
        if out.truncated and est.value < out.truncated[-1][1].value:
            est.value = out.truncated[-1][1].value  # unreachable with the warm start, kept as a guard
        out.truncated.append((N, est))
        prev_b, prev_N = est.witness_b, N
    return out

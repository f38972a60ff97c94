"""Symmetric norming functions on finite nonincreasing sequences.

A symmetric norming function is stored as an :class:`SnSpec` descriptor and
evaluated on a :class:`Spectrum`, the nonincreasing rearrangement of the
absolute values of a finitely supported sequence.  Every supported family
has an exact adjoint, so ``evaluate(spec.dual(), s)`` is the adjoint norm.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
from scipy import optimize

from .estimate import EXACT, LOWER_BOUND, NormEstimate

INF = math.inf

FAMILIES = ("schatten", "kyfan", "kyfan_theta", "lorentz", "binorm")

# families whose norm is sum_j w_j a_j^* for a nonincreasing weight vector w
_WEIGHTED = ("kyfan", "kyfan_theta", "binorm")

# memory guard for anything that materializes O(n) weights or sequences
MAX_SEQUENCE_LENGTH = 1 << 24


class SpecError(ValueError):
    """Invalid symmetric norming function parameters or syntax."""


class BudgetError(ValueError):
    """A requested computation exceeds its configured size budget."""


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Finite nonincreasing sequence of nonnegative reals."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).ravel()
        if not np.all(np.isfinite(arr)):
            raise ValueError("spectrum entries must be finite")
        if arr.size and arr.min() < 0:
            raise ValueError("spectrum entries must be nonnegative")
        arr = -np.sort(-arr)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def of(cls, xs) -> "Spectrum":
        """Rearrange |xs| nonincreasingly (the only order a symmetric norm sees)."""
        if isinstance(xs, Spectrum):
            return xs
        return cls(np.abs(np.asarray(xs)).astype(float))

    @classmethod
    def flat(cls, n: int) -> "Spectrum":
        return cls(np.ones(int(n)))

    def __len__(self):
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = object.__hash__

    def __repr__(self):
        return f"Spectrum({self.values.tolist()})"

    def tolist(self):
        return [float(v) for v in self.values]

    def trimmed(self) -> "Spectrum":
        """Drop trailing zeros, keeping at least one entry."""
        nz = np.flatnonzero(self.values)
        k = nz[-1] + 1 if nz.size else min(1, self.values.size)
        return Spectrum(self.values[:k])


def as_spectrum(s) -> Spectrum:
    return Spectrum.of(s)


def tensor_seq(s, t) -> Spectrum:
    """Nonincreasing rearrangement of all pairwise products s_i t_j."""
    s, t = as_spectrum(s), as_spectrum(t)
    return Spectrum(np.outer(s.values, t.values).ravel())


# ---------------------------------------------------------------------------
# norm descriptors
# ---------------------------------------------------------------------------


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class SnSpec:
    """Descriptor of a symmetric norming function.

    ``params`` per family:

    * ``schatten``: ``(p,)`` with ``1 <= p <= inf``
    * ``kyfan``: ``(k,)``, sum of the k largest entries
    * ``kyfan_theta``: ``(theta,)``, ``a_1 + theta a_2``
    * ``lorentz``: ``(p, q)`` with ``1 <= q <= p < inf``
    * ``binorm``: ``("harmonic",)``, ``("pow", alpha)`` or ``("values", pi)``

    ``is_dual`` marks the adjoint norm of the described family.
    """

    family: str
    params: tuple = ()
    is_dual: bool = False
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}")
        _validate(self.family, self.params)
        if self.family == "schatten" and self.is_dual:
            raise SpecError("use schatten(conjugate p) instead of a dual flag")
        if not self.label:
            object.__setattr__(self, "label", format_spec(self))

    # -- structure ---------------------------------------------------------

    def dual(self) -> "SnSpec":
        if self.family == "schatten":
            return schatten(conjugate_exponent(self.params[0]))
        return SnSpec(self.family, self.params, not self.is_dual)

    def primal(self) -> "SnSpec":
        return self.dual() if self.is_dual else self

    @property
    def p(self) -> float:
        """Exponent of a Schatten spec."""
        if self.family != "schatten":
            raise AttributeError("only schatten specs carry a single exponent")
        return self.params[0]

    @property
    def is_flat(self) -> bool:
        """Unit ball of the positive cone is the hull of flat vectors 1_j/Phi(1_j)."""
        if self.is_dual:
            return False
        if self.family in _WEIGHTED:
            return True
        if self.family == "lorentz":
            return self.params[1] == 1
        return self.params[0] in (1, INF)

    @property
    def q_class(self) -> Optional[str]:
        """'Q', 'Q*', 'Q,Q*' (Schatten 2) or None when untagged."""
        if self.is_dual:
            return None
        if self.family == "schatten":
            p = self.params[0]
            if p == 2:
                return "Q,Q*"
            return "Q" if p > 2 else "Q*"
        if self.family == "lorentz" and self.params[1] >= 2:
            return "Q"
        return None

    def is_schatten(self, p=None) -> bool:
        return self.family == "schatten" and (p is None or self.params[0] == p)

    def weights(self, n: int) -> np.ndarray:
        """First n weights w_j of a primal weighted (or Lorentz) family."""
        n = int(n)
        if n > MAX_SEQUENCE_LENGTH:
            raise BudgetError(f"{n} weights exceed budget {MAX_SEQUENCE_LENGTH}")
        fam, prm = self.family, self.params
        if fam == "schatten":
            p = prm[0]
            if p == 1:
                return np.ones(n)
            if p == INF:
                return (np.arange(n) == 0).astype(float)
            raise SpecError("schatten(p) for 1<p<inf is not a weighted family")
        if fam == "kyfan":
            return (np.arange(n) < prm[0]).astype(float)
        if fam == "kyfan_theta":
            w = np.zeros(n)
            w[:1] = 1.0
            w[1:2] = prm[0]
            return w
        if fam == "lorentz":
            p, q = prm
            return np.arange(1, n + 1, dtype=float) ** (q / p - 1.0)
        kind = prm[0]
        if kind == "harmonic":
            return 1.0 / np.arange(1, n + 1, dtype=float)
        if kind == "pow":
            return np.arange(1, n + 1, dtype=float) ** (-prm[1])
        pi = np.asarray(prm[1], dtype=float)
        if n > pi.size:
            raise BudgetError(f"binormalizing sequence has only {pi.size} terms, {n} requested")
        return pi[:n].copy()

    def flat_norms(self, n: int) -> np.ndarray:
        """Phi(1_j) for j = 1..n."""
        n = int(n)
        if self.is_dual:
            j = np.arange(1, n + 1, dtype=float)
            return j / self.primal().flat_norms(n)
        if self.family == "schatten":
            p = self.params[0]
            if p == INF:
                return np.ones(n)
            return np.arange(1, n + 1, dtype=float) ** (1.0 / p)
        if self.family == "kyfan":
            return np.minimum(np.arange(1, n + 1, dtype=float), self.params[0])
        if self.family == "kyfan_theta":
            out = np.full(n, 1.0 + self.params[0])
            out[:1] = 1.0
            return out
        if self.family == "lorentz":
            return np.cumsum(self.weights(n)) ** (1.0 / self.params[1])
        return np.cumsum(self.weights(n))

    def __str__(self):
        return self.label


def _validate(family, params):
    if family == "schatten":
        if len(params) != 1:
            raise SpecError("schatten takes one exponent")
        p = float(params[0])
        if not (p >= 1):
            raise SpecError(f"schatten exponent must be >= 1, got {p}")
    elif family == "kyfan":
        if len(params) != 1 or int(params[0]) != params[0] or params[0] < 1:
            raise SpecError("kyfan takes a positive integer k")
    elif family == "kyfan_theta":
        if len(params) != 1 or not (0 < params[0] <= 1):
            raise SpecError("kyfan_theta takes theta in (0, 1]")
    elif family == "lorentz":
        if len(params) != 2:
            raise SpecError("lorentz takes (p, q)")
        p, q = params
        if not (1 <= q <= p < INF):
            raise SpecError(f"lorentz needs 1 <= q <= p < inf, got p={p}, q={q}")
    elif family == "binorm":
        kind = params[0] if params else None
        if kind == "harmonic" and len(params) == 1:
            return
        if kind == "pow" and len(params) == 2:
            if not (0 < params[1] <= 1):
                raise SpecError("binorm pow exponent must lie in (0, 1]")
            return
        if kind == "values" and len(params) == 2:
            pi = np.asarray(params[1], dtype=float)
            if pi.size == 0 or not np.all(np.isfinite(pi)):
                raise SpecError("binormalizing sequence must be nonempty and finite")
            if pi[0] != 1.0:
                raise SpecError("binormalizing sequence must start with 1")
            if np.any(pi < 0) or np.any(np.diff(pi) > 0):
                raise SpecError("binormalizing sequence must be nonnegative and nonincreasing")
            return
        raise SpecError(f"bad binorm parameters {params!r}")


def schatten(p) -> SnSpec:
    return SnSpec("schatten", (float(p),))


def kyfan(k: int) -> SnSpec:
    return SnSpec("kyfan", (int(k),))


def kyfan_theta(theta: float) -> SnSpec:
    return SnSpec("kyfan_theta", (float(theta),))


def lorentz(p: float, q: float) -> SnSpec:
    return SnSpec("lorentz", (float(p), float(q)))


def binorm_harmonic() -> SnSpec:
    return SnSpec("binorm", ("harmonic",))


def binorm_pow(alpha: float) -> SnSpec:
    """pi_j = j^-alpha; for 0 < alpha < 1 this is the Lorentz S_{1/(1-alpha),1} norm."""
    return SnSpec("binorm", ("pow", float(alpha)))


def binorm_values(pi: Iterable[float], label: str = "") -> SnSpec:
    return SnSpec("binorm", ("values", tuple(float(v) for v in pi)), label=label)


def binorm_file(path) -> SnSpec:
    path = Path(path)
    vals = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            vals.append(float(line))
        except ValueError:
            raise SpecError(f"{path}:{lineno}: not a number: {line!r}") from None
    return binorm_values(vals, label=f"binorm:file:{path}")


def _fmt_num(x) -> str:
    if x == INF:
        return "inf"
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def format_spec(spec: SnSpec) -> str:
    fam, prm = spec.family, spec.params
    if fam == "schatten":
        txt = f"schatten:{_fmt_num(prm[0])}"
    elif fam == "kyfan":
        txt = f"kyfan:{prm[0]}"
    elif fam == "kyfan_theta":
        txt = f"kyfan-theta:{_fmt_num(prm[0])}"
    elif fam == "lorentz":
        txt = f"lorentz:{_fmt_num(prm[0])},{_fmt_num(prm[1])}"
    elif prm[0] == "harmonic":
        txt = "binorm:harmonic"
    elif prm[0] == "pow":
        txt = f"binorm:pow:{_fmt_num(prm[1])}"
    else:
        txt = "binorm:values[" + ",".join(_fmt_num(v) for v in prm[1][:4]) + (",...]" if len(prm[1]) > 4 else "]")
    return txt + ("*" if spec.is_dual else "")


def _parse_num(txt: str) -> float:
    t = txt.strip().lower()
    if t in ("inf", "infinity", "∞"):
        return INF
    try:
        if "/" in t:
            a, b = t.split("/")
            return float(a) / float(b)
        return float(t)
    except ValueError:
        raise SpecError(f"not a number: {txt!r}") from None


def parse_spec(text: str) -> SnSpec:
    """Parse ``schatten:p``, ``kyfan:k``, ``kyfan-theta:t``, ``lorentz:p,q``,
    ``binorm:harmonic``, ``binorm:pow:a`` or ``binorm:file:<path>``.
    A trailing ``*`` selects the adjoint norm."""
    raw = text.strip()
    dual = raw.endswith("*")
    if dual:
        raw = raw[:-1]
    fam, _, rest = raw.partition(":")
    fam = fam.strip().lower()
    if fam == "schatten":
        spec = schatten(_parse_num(rest))
    elif fam == "kyfan":
        k = _parse_num(rest)
        if not float(k).is_integer():
            raise SpecError(f"kyfan needs an integer, got {rest!r}")
        spec = kyfan(int(k))
    elif fam in ("kyfan-theta", "kyfan_theta"):
        spec = kyfan_theta(_parse_num(rest))
    elif fam == "lorentz":
        parts = rest.split(",")
        if len(parts) != 2:
            raise SpecError(f"lorentz needs p,q: {text!r}")
        spec = lorentz(_parse_num(parts[0]), _parse_num(parts[1]))
    elif fam == "binorm":
        kind, _, arg = rest.partition(":")
        if kind == "harmonic" and not arg:
            spec = binorm_harmonic()
        elif kind == "pow":
            spec = binorm_pow(_parse_num(arg))
        elif kind == "file":
            spec = binorm_file(arg)
        else:
            raise SpecError(f"unknown binorm generator in {text!r}")
    else:
        raise SpecError(f"unknown norm spec {text!r}")
    return spec.dual() if dual else spec


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _lp(s: np.ndarray, p: float) -> float:
    if s.size == 0:
        return 0.0
    if p == INF:
        return float(s[0])
    top = s[0]
    if top == 0:
        return 0.0
    if p == 1:
        return float(s.sum())
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def _weighted_q(s: np.ndarray, w: np.ndarray, q: float) -> float:
    top = s[0]
    if top == 0:
        return 0.0
    if q == 1:
        return float(np.dot(w, s))
    return float(top * np.dot(w, (s / top) ** q) ** (1.0 / q))


def _primal_eval(spec: SnSpec, s: np.ndarray) -> float:
    if s.size == 0:
        return 0.0
    if spec.family == "schatten":
        return _lp(s, spec.params[0])
    if spec.family == "lorentz":
        return _weighted_q(s, spec.weights(s.size), spec.params[1])
    return float(np.dot(spec.weights(s.size), s))


def _decreasing_fit(y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Weighted least-squares nonincreasing fit of y (pool adjacent violators)."""
    sums, wts, counts = [], [], []
    for yi, wi in zip(y, w):
        sums.append(yi * wi)
        wts.append(wi)
        counts.append(1)
        while len(sums) > 1 and sums[-2] * wts[-1] < sums[-1] * wts[-2]:
            s, ww, c = sums.pop(), wts.pop(), counts.pop()
            sums[-1] += s
            wts[-1] += ww
            counts[-1] += c
    return np.repeat([s / ww for s, ww in zip(sums, wts)], counts)


def _lorentz_level(spec: SnSpec, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = spec.weights(s.size)
    return _decreasing_fit(s / w, w), w


def _adjoint_eval(primal: SnSpec, s: np.ndarray) -> float:
    """Phi*(s) for a primal spec Phi."""
    if s.size == 0:
        return 0.0
    if primal.family == "schatten":
        return _lp(s, conjugate_exponent(primal.params[0]))
    if primal.is_flat:
        return float(np.max(np.cumsum(s) / primal.flat_norms(s.size)))
    # Lorentz with q > 1: maximize <s, b> over nonincreasing b with sum w b^q <= 1;
    # the optimum is Hoelder-aligned with the level function of s/w.
    q = primal.params[1]
    r, w = _lorentz_level(primal, s)
    qc = q / (q - 1.0)
    return _weighted_q(r, w, qc) if r[0] > 0 else 0.0


def evaluate(spec: SnSpec, s) -> float:
    """Phi(s) for any sequence s (rearranged and made nonnegative first)."""
    s = as_spectrum(s).values
    if spec.is_dual:
        return _adjoint_eval(spec.primal(), s)
    return _primal_eval(spec, s)


def dual_evaluate(spec: SnSpec, s) -> float:
    """Phi*(s), the adjoint norm."""
    return evaluate(spec.dual(), s)


def convexify2(spec: SnSpec, s) -> float:
    """2-convexification Phi(s^2)^(1/2)."""
    s = as_spectrum(s).values
    return math.sqrt(evaluate(spec, s * s))


def ball_attainer(spec: SnSpec, c) -> tuple[Spectrum, float]:
    """Nonincreasing beta with evaluate(spec, beta) <= 1 maximizing <c, beta>.

    The returned value equals the adjoint norm evaluate(spec.dual(), c).
    """
    c = as_spectrum(c).values
    n = c.size
    if n == 0:
        return Spectrum([]), 0.0
    e1 = (np.arange(n) == 0).astype(float)
    if spec.family == "schatten":
        beta = _schatten_attainer(c, spec.params[0])
    elif spec.is_dual:
        beta = _subgradient(spec.primal(), c)
    elif spec.is_flat:
        ratios = np.cumsum(c) / spec.flat_norms(n)
        j = int(np.argmax(ratios))
        beta = np.where(np.arange(n) <= j, 1.0 / spec.flat_norms(j + 1)[-1], 0.0)
    else:
        r, _ = _lorentz_level(spec, c)
        if r[0] <= 0:
            beta = e1
        else:
            b = r ** (1.0 / (spec.params[1] - 1.0))
            beta = b / _primal_eval(spec, b)
    beta = np.maximum(beta, 0.0)
    return Spectrum(beta), float(np.dot(c, beta))


def _schatten_attainer(c: np.ndarray, p: float) -> np.ndarray:
    n = c.size
    if p == INF:
        return np.ones(n)
    if p == 1 or c[0] == 0:
        return (np.arange(n) == 0).astype(float)
    pc = conjugate_exponent(p)
    b = (c / c[0]) ** (pc - 1.0)
    return b / _lp(b, p)


def _subgradient(primal: SnSpec, c: np.ndarray) -> np.ndarray:
    """beta with primal-adjoint norm <= 1 and <c, beta> = primal(c)."""
    n = c.size
    if primal.family == "lorentz" and primal.params[1] > 1:
        val = _primal_eval(primal, c)
        if val == 0:
            return (np.arange(n) == 0).astype(float)
        q = primal.params[1]
        return primal.weights(n) * (c / val) ** (q - 1.0)
    return primal.weights(n)


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------


@dataclass
class SamplerConfig:
    samples: int = 200
    max_len: int = 6
    seed: int = 0


def structured_spectra(max_len: int) -> list[Spectrum]:
    """Deterministic candidates: flat vectors, geometric and power decays, two-level."""
    out = [Spectrum.flat(j) for j in range(1, max_len + 1)]
    k = np.arange(max_len, dtype=float)
    for r in (0.25, 0.5, 0.75, 0.9):
        out.append(Spectrum(r ** k))
    out.append(Spectrum(1.0 / (k + 1)))
    out.append(Spectrum((k + 1) ** -0.5))
    for t in (0.5, 0.1):
        out.append(Spectrum(np.r_[1.0, np.full(max_len - 1, t)]))
    return out


def random_spectra(rng: np.random.Generator, count: int, max_len: int) -> list[Spectrum]:
    out = []
    for i in range(count):
        n = int(rng.integers(1, max_len + 1))
        kind = i % 3
        if kind == 0:
            v = rng.random(n)
        elif kind == 1:
            v = rng.exponential(size=n) ** 2
        else:
            v = rng.random(n) * (rng.random(n) < 0.6)
            v[0] = max(v[0], 1e-3)
        out.append(Spectrum(v))
    return out


# ---------------------------------------------------------------------------
# tensor conditions (*) and (**)
# ---------------------------------------------------------------------------


@dataclass
class StarReport:
    """Outcome of checking ||x (x) y|| <= c ||x|| ||y|| (star) or >= (star_star)."""

    holds: bool
    constant: float
    witness: Optional[tuple]
    mode: str
    claimed: float = 1.0
    cases: int = 0
    max_sample_deviation: float = 0.0
    note: str = ""

    def ratio_at_witness(self, spec: SnSpec) -> float:
        x, y = self.witness
        return evaluate(spec, tensor_seq(x, y)) / (evaluate(spec, x) * evaluate(spec, y))


def _tensor_ratio(spec, x, y):
    return evaluate(spec, tensor_seq(x, y)) / (evaluate(spec, x) * evaluate(spec, y))


def partial_sum_ratios(spec: SnSpec, N: int) -> np.ndarray:
    """Matrix R[m-1, n-1] = S_{mn} / (S_m S_n) for m, n <= N."""
    if N * N > MAX_SEQUENCE_LENGTH:
        raise BudgetError(f"N={N} needs {N * N} partial sums; budget is {MAX_SEQUENCE_LENGTH}")
    S = np.cumsum(spec.weights(N * N))
    idx = np.arange(1, N + 1)
    return S[np.outer(idx, idx) - 1] / np.outer(S[:N], S[:N])


def check_star(
    spec: SnSpec,
    config: Optional[SamplerConfig] = None,
    *,
    mode: str = "auto",
    claimed: float = 1.0,
    N: int = 256,
    include_boundary: bool = True,
) -> StarReport:
    """Estimate the best constant in condition (*) (or (**) with mode="star_star").

    For weighted families the sup over all pairs reduces to flat pairs, so
    ``mode="binorm_partial_sums"`` (the default for them) computes the exact
    ``max_{m,n<=N} S_mn / (S_m S_n)``.  Other families are sampled.
    """
    config = config or SamplerConfig()
    if mode == "auto":
        mode = "binorm_partial_sums" if (spec.is_flat and spec.family != "schatten") else "star"
    if mode == "binorm_partial_sums":
        if not spec.is_flat:
            raise SpecError("partial-sum mode needs a weighted family")
        R = partial_sum_ratios(spec, N)
        if not include_boundary:
            R = R[1:, 1:]
        off = 0 if include_boundary else 1
        i, j = np.unravel_index(int(np.argmax(R)), R.shape)
        const = float(R[i, j])
        wit = (Spectrum.flat(i + 1 + off), Spectrum.flat(j + 1 + off))
        return StarReport(const <= claimed, const, wit, mode, claimed, R.size)
    if mode not in ("star", "star_star"):
        raise ValueError(f"unknown mode {mode!r}")

    rng = np.random.default_rng(config.seed)
    cands = structured_spectra(config.max_len)
    pairs = [(x, y) for x in cands for y in cands]
    rnd = random_spectra(rng, 2 * config.samples, config.max_len)
    pairs += list(zip(rnd[::2], rnd[1::2]))
    sign = 1.0 if mode == "star" else -1.0
    best, wit, dev = -INF, None, 0.0
    for x, y in pairs:
        r = _tensor_ratio(spec, x, y)
        dev = max(dev, abs(r - 1.0))
        if sign * r > best:
            best, wit = sign * r, (x, y)
    const = sign * best
    if spec.family == "schatten":
        # cross norm: every ratio is 1 up to rounding
        return StarReport(True, 1.0, wit, mode, claimed, len(pairs), dev, "closed form: schatten is a cross norm")
    tol = 1e-12 * max(1.0, abs(claimed))
    holds = const <= claimed + tol if mode == "star" else const >= claimed - tol
    return StarReport(holds, const, wit, mode, claimed, len(pairs), dev)


# ---------------------------------------------------------------------------
# cross-ratio inequality and domination
# ---------------------------------------------------------------------------


@dataclass
class CrossReport:
    """Search result for ||x(x)y||_Psi/||x||_Psi <= ||z(x)y||_Phi/||z||_Phi."""

    holds: bool
    tightest: float
    witness: Optional[tuple]
    left: float
    right: float
    cases: int
    dominated: bool = True

    def reevaluate(self, phi: SnSpec, psi: SnSpec) -> tuple[float, float]:
        x, y, z = self.witness
        return cross_sides(phi, psi, x, y, z)


def cross_sides(phi, psi, x, y, z) -> tuple[float, float]:
    left = evaluate(psi, tensor_seq(x, y)) / evaluate(psi, x)
    right = evaluate(phi, tensor_seq(z, y)) / evaluate(phi, z)
    return left, right


def check_os_cross(phi: SnSpec, psi: SnSpec, config: Optional[SamplerConfig] = None) -> CrossReport:
    """Look for a triple violating the cross-ratio inequality.

    The 0/1 grid up to length 4 is always scanned first; then structured and
    random triples.  Stops at the first violation.
    """
    config = config or SamplerConfig()
    dom = dominates(phi, psi, config)
    if not dom:
        warnings.warn(f"{psi} <= {phi} fails on samples; cross-ratio check is outside its hypothesis")
    grid = [Spectrum.flat(j) for j in range(1, 5)]
    triples = [(x, y, z) for x in grid for y in grid for z in grid]
    cands = structured_spectra(config.max_len)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.samples):
        x, y, z = (cands[int(rng.integers(len(cands)))] for _ in range(3))
        triples.append((x, y, z))
    rnd = random_spectra(rng, 3 * config.samples, config.max_len)
    triples += list(zip(rnd[0::3], rnd[1::3], rnd[2::3]))

    worst, wit, wl, wr = -INF, None, 0.0, 0.0
    for count, (x, y, z) in enumerate(triples, 1):
        left, right = cross_sides(phi, psi, x, y, z)
        ratio = left / right
        if ratio > worst:
            worst, wit, wl, wr = ratio, (x, y, z), left, right
        if left > right * (1 + 1e-12):
            return CrossReport(False, ratio, (x, y, z), left, right, count, dom)
    return CrossReport(True, worst, wit, wl, wr, len(triples), dom)


def domination_witness(phi: SnSpec, psi: SnSpec, config: Optional[SamplerConfig] = None) -> Optional[Spectrum]:
    """A sampled xi with psi(xi) > phi(xi), or None."""
    config = config or SamplerConfig()
    rng = np.random.default_rng(config.seed)
    for xi in structured_spectra(config.max_len) + random_spectra(rng, config.samples, config.max_len):
        if evaluate(psi, xi) > evaluate(phi, xi) * (1 + 1e-12):
            return xi
    return None


def dominates(phi: SnSpec, psi: SnSpec, config: Optional[SamplerConfig] = None) -> bool:
    """Heuristic sampled check of psi <= phi; a True answer is not a proof."""
    return domination_witness(phi, psi, config) is None


# ---------------------------------------------------------------------------
# Boyd-type index and tensor powers
# ---------------------------------------------------------------------------


@dataclass
class BoydEstimate:
    p_estimate: float
    raw_estimate: float
    series: list
    slopes: list
    trend: str


def boyd_estimate(spec: SnSpec, n_max: int) -> BoydEstimate:
    """Estimate lim log n / log Phi(1_n) on the grid n = 4, 8, ..., <= n_max.

    ``series`` holds the raw ratios.  ``p_estimate`` uses the log-log slope
    between the two largest grid points, which cancels the constant factor
    in Phi(1_n) ~ C n^(1/p) that makes the raw ratio converge slowly.
    """
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    ns = [1 << k for k in range(2, int(math.log2(n_max)) + 1)]
    if spec.family == "schatten":
        p = spec.params[0]
        return BoydEstimate(p, p, [(n, p) for n in ns], [(n, p) for n in ns[1:]], "exact")
    if not spec.is_dual and spec.family in ("kyfan", "kyfan_theta"):
        return BoydEstimate(INF, INF, [(n, INF) for n in ns], [(n, INF) for n in ns[1:]], "bounded")
    flat = spec.flat_norms(ns[-1])
    logs = [math.log(flat[n - 1]) for n in ns]
    series = [(n, math.log(n) / lf if lf > 0 else INF) for n, lf in zip(ns, logs)]
    slopes = []
    for k in range(1, len(ns)):
        d = (logs[k] - logs[k - 1]) / math.log(ns[k] / ns[k - 1])
        slopes.append((ns[k], 1.0 / d if d > 1e-12 else INF))
    if not slopes:
        return BoydEstimate(series[-1][1], series[-1][1], series, slopes, "short")
    est = slopes[-1][1]
    if est == INF:
        trend = "bounded"
    elif len(slopes) > 1 and abs(slopes[-1][1] - slopes[-2][1]) <= 1e-3 * est:
        trend = "converged"
    else:
        trend = "drifting"
    return BoydEstimate(est, series[-1][1], series, slopes, trend)


def _merge_runs(vals: np.ndarray, mults: np.ndarray, rtol: float = 1e-12):
    order = np.argsort(-vals, kind="stable")
    vals, mults = vals[order], mults[order]
    if vals.size == 0:
        return vals, mults
    tol = rtol * vals[0]
    new = np.r_[True, (vals[:-1] - vals[1:]) > tol]
    groups = np.cumsum(new) - 1
    out_v = vals[new]
    out_m = np.bincount(groups, weights=mults).astype(np.int64)
    return out_v, out_m


def tensor_power_runs(x, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values and multiplicities of the spectrum of x^(tensor n)."""
    xs = as_spectrum(x).values
    v1, m1 = _merge_runs(xs, np.ones(xs.size, dtype=np.int64))
    v, m = v1, m1
    for _ in range(n - 1):
        v, m = _merge_runs(np.outer(v, v1).ravel(), np.outer(m, m1).ravel())
    return v, m


def _eval_runs(spec: SnSpec, vals: np.ndarray, mults: np.ndarray, budget: int) -> float:
    if spec.family == "schatten":
        p = spec.params[0]
        if p == INF:
            return float(vals[0])
        top = vals[0]
        return float(top * np.dot(mults, (vals / top) ** p) ** (1.0 / p))
    total = int(mults.sum())
    if total > budget:
        raise BudgetError(f"tensor power has {total} s-numbers; budget is {budget}")
    return evaluate(spec, Spectrum(np.repeat(vals, mults)))


def tensor_power_trace(spec: SnSpec, x, n_max: int, budget: int = 1 << 22) -> list:
    """Series (n, ||x^(tensor n)||_Phi^(1/n)) for n = 1..n_max."""
    xs = as_spectrum(x)
    if len(set(xs.tolist())) > 6:
        raise BudgetError("tensor_power_trace supports at most 6 distinct values")
    out = []
    v1, m1 = _merge_runs(xs.values, np.ones(len(xs), dtype=np.int64))
    v, m = v1, m1
    for n in range(1, n_max + 1):
        if n > 1:
            v, m = _merge_runs(np.outer(v, v1).ravel(), np.outer(m, m1).ravel())
        if v.size > budget:
            raise BudgetError(f"{v.size} distinct products exceed budget {budget}")
        val = _eval_runs(spec, v, m, budget)
        out.append((n, val ** (1.0 / n)))
    return out


# ---------------------------------------------------------------------------
# multiplicator
# ---------------------------------------------------------------------------


@dataclass
class MultiplicatorConfig:
    flat_max: int = 512
    local_len: int = 6
    restarts: int = 6
    seed: int = 0


def multiplicator_norm(x, phi: SnSpec, psi: SnSpec, config: Optional[MultiplicatorConfig] = None) -> NormEstimate:
    """Norm of a -> x (x) a from S_phi to S_psi, i.e. sup_a psi(x(x)a)/phi(a).

    Exact for Schatten pairs with p <= q (value ||x||_q).  When phi has flat
    extreme points the sup is a max over flat a, scanned up to ``flat_max``;
    otherwise structured candidates are refined by a bounded local search.
    """
    config = config or MultiplicatorConfig()
    xs = as_spectrum(x).trimmed()
    if phi.family == "schatten" and psi.family == "schatten" and phi.params[0] <= psi.params[0]:
        val = evaluate(psi, xs)
        return NormEstimate(val, EXACT, witness_a=np.array([1.0]), method="closed_form_schatten")

    def ratio(a):
        fa = evaluate(phi, a)
        return evaluate(psi, tensor_seq(xs, a)) / fa if fa > 0 else 0.0

    best, best_a = -INF, None
    flat_cap = config.flat_max if phi.is_flat else max(config.local_len, 16)
    for j in range(1, flat_cap + 1):
        r = ratio(Spectrum.flat(j))
        if r > best * (1 + 1e-15):
            best, best_a = r, np.ones(j)
    method = "flat_scan"
    if not phi.is_flat:
        method = "flat_scan+local_search"
        rng = np.random.default_rng(config.seed)
        L = config.local_len
        starts = [s.values for s in structured_spectra(L)]
        starts += [s.values for s in random_spectra(rng, config.restarts, L)]
        scored = sorted(starts, key=lambda a: -ratio(a))[: config.restarts]
        for a0 in scored:
            a0 = np.r_[a0, np.zeros(L - a0.size)]
            d0 = np.r_[-np.diff(a0), a0[-1]]
            res = optimize.minimize(
                lambda d: -ratio(np.cumsum(np.maximum(d, 0)[::-1])[::-1]),
                d0,
                method="Powell",
                bounds=[(0, None)] * L,
                options={"xtol": 1e-10, "ftol": 1e-13, "maxfev": 4000},
            )
            a = np.cumsum(np.maximum(res.x, 0)[::-1])[::-1]
            r = ratio(a)
            if r > best * (1 + 1e-15):
                best, best_a = r, a
    wit = np.asarray(best_a, dtype=float)
    return NormEstimate(float(best), LOWER_BOUND, witness_a=wit / wit.max(), method=method)

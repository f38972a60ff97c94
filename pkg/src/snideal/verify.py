"""Named verification campaigns producing reproducible pass/fail reports.

Every campaign is a deterministic function of (name, params, seed).  Cases
draw from ``np.random.default_rng([seed, case_index])`` so they may run on a
thread pool (``SNIDEAL_THREADS``) without changing the report.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize
from scipy.linalg import expm

from . import cb
from .matrix import cmatrix_to_json, eigh_desc, from_eig, ideal_norm, op_norm, partition_inequality, random_unitary, s_numbers, unit
from .mcn import (
    MatrixTuple,
    MCNConfig,
    amplify,
    apply_coeff,
    as_tuple,
    col_norm,
    direct_sum_tuple,
    embed_amplified,
    hsharp_kyfan_theta,
    left_mul,
    mcn_norm,
    min_norm,
    oh_norm,
    pairing,
    r_tilde_frames,
    r_tilde_norm,
    random_tuple,
    rho_apply,
    right_mul,
    row_norm,
    simple_tensor,
)
from .seqnorm import (
    INF,
    SamplerConfig,
    SnSpec,
    Spectrum,
    boyd_estimate,
    check_os_cross,
    check_star,
    conjugate_exponent,
    convexify2,
    dominates,
    dual_evaluate,
    evaluate,
    format_spec,
    parse_spec,
    partial_sum_ratios,
    random_spectra,
    schatten,
    tensor_power_trace,
    tensor_seq,
)

PASS, FAIL, EXPLORATORY = "pass", "fail", "exploratory"


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------


def plain(obj):
    """Convert numpy/domain objects into JSON-ready values (inf as the string "inf")."""
    if isinstance(obj, SnSpec):
        return format_spec(obj)
    if isinstance(obj, Spectrum):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, MatrixTuple):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return cmatrix_to_json(obj)
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [plain(float(obj.real)), plain(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


# ---------------------------------------------------------------------------
# spec and report types
# ---------------------------------------------------------------------------


@dataclass
class Case:
    index: int
    inputs: dict
    values: dict
    passed: bool

    def to_dict(self):
        return {"index": self.index, "inputs": plain(self.inputs), "values": plain(self.values), "pass": bool(self.passed)}


@dataclass
class CampaignSpec:
    name: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.name not in CAMPAIGNS:
            raise ValueError(f"unknown campaign {self.name!r}; choose from {sorted(CAMPAIGNS)}")
        defaults = CAMPAIGNS[self.name].defaults
        unknown = set(self.params) - set(defaults) - {"time_budget"}
        if unknown:
            raise ValueError(f"campaign {self.name}: unknown params {sorted(unknown)}; allowed {sorted(defaults)}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 1 << 64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        merged = dict(defaults)
        merged.update(self.params)
        self.params = merged


@dataclass
class CampaignReport:
    spec: CampaignSpec
    statement: str
    verdict: str
    cases: list
    witnesses: list
    tolerances: dict
    summary: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    partial: bool = False
    wall_time: float = 0.0

    @property
    def cases_run(self) -> int:
        return len(self.cases)

    @property
    def cases_passed(self) -> int:
        return sum(1 for c in self.cases if c.passed)

    @property
    def failing(self) -> list:
        return [c for c in self.cases if not c.passed]

    def to_dict(self, with_cases: bool = True, with_timing: bool = False) -> dict:
        out = {
            "campaign": self.spec.name,
            "seed": self.spec.seed,
            "params": plain(self.spec.params),
            "statement": self.statement,
            "verdict": self.verdict,
            "partial": self.partial,
            "cases_run": self.cases_run,
            "cases_passed": self.cases_passed,
            "tolerances": plain(self.tolerances),
            "summary": plain(self.summary),
            "warnings": list(self.warnings),
            "witnesses": plain(self.witnesses),
        }
        if with_cases:
            out["cases"] = [c.to_dict() for c in self.cases]
        if with_timing:
            out["envelope"] = {"wall_time": self.wall_time}
        return out


@dataclass
class _Outcome:
    cases: list
    witnesses: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    verdict: Optional[str] = None  # override for exploratory campaigns
    partial: bool = False


@dataclass
class _Campaign:
    run: Callable
    statement: str
    defaults: dict
    exploratory: bool = False


CAMPAIGNS: dict = {}


def _campaign(name, statement, exploratory=False, **defaults):
    def deco(fn):
        CAMPAIGNS[name] = _Campaign(fn, statement, defaults, exploratory)
        return fn

    return deco


def threads() -> int:
    try:
        return max(1, int(os.environ.get("SNIDEAL_THREADS", "1")))
    except ValueError:
        return 1


class _Runner:
    """Runs case functions with per-case seeds, respecting an optional time budget."""

    def __init__(self, seed: int, budget: Optional[float]):
        self.seed = seed
        self.deadline = None if budget is None else time.monotonic() + float(budget)
        self.partial = False

    def rng(self, k: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, k])

    def map(self, fn, count: int, start: int = 0) -> list:
        idx = list(range(start, start + count))
        if threads() == 1:
            out = []
            for k in idx:
                if self.deadline is not None and time.monotonic() > self.deadline:
                    self.partial = True
                    break
                out.append(fn(k, self.rng(k)))
            return out
        with ThreadPoolExecutor(max_workers=threads()) as pool:
            futs = [pool.submit(fn, k, self.rng(k)) for k in idx]
            out = []
            for f in futs:
                if self.deadline is not None and time.monotonic() > self.deadline:
                    self.partial = True
                    f.cancel()
                    continue
                out.append(f.result())
        return sorted(out, key=lambda c: c.index)


def run_campaign(spec: CampaignSpec) -> CampaignReport:
    camp = CAMPAIGNS[spec.name]
    t0 = time.monotonic()
    runner = _Runner(spec.seed, spec.params.get("time_budget"))
    out: _Outcome = camp.run(spec.params, runner)
    out.cases.sort(key=lambda c: c.index)
    partial = out.partial or runner.partial
    if camp.exploratory:
        verdict = EXPLORATORY
    elif out.verdict is not None:
        verdict = out.verdict
    else:
        verdict = PASS if all(c.passed for c in out.cases) and not partial else FAIL
    warnings = list(out.warnings)
    if partial:
        warnings.append("time budget exceeded; report is partial")
    return CampaignReport(
        spec,
        camp.statement,
        verdict,
        out.cases,
        out.witnesses,
        out.tolerances,
        out.summary,
        warnings,
        partial,
        time.monotonic() - t0,
    )


# ---------------------------------------------------------------------------
# param parsing helpers
# ---------------------------------------------------------------------------


def _spec(x) -> SnSpec:
    return x if isinstance(x, SnSpec) else parse_spec(str(x))


def _specs(x) -> list:
    if isinstance(x, (list, tuple)):
        return [_spec(s) for s in x]
    return [_spec(s) for s in str(x).split(";") if s.strip()]


def _nums(x) -> list:
    if isinstance(x, (list, tuple)):
        return [float(v) for v in x]
    if isinstance(x, (int, float)):
        return [float(x)]
    return [INF if t.strip() in ("inf", "∞") else float(t) for t in str(x).split(",") if t.strip()]


def _ints(x) -> list:
    return [int(v) for v in _nums(x)]


def _cfg(p) -> MCNConfig:
    return MCNConfig(restarts=int(p.get("restarts", 16)), max_iters=int(p.get("max_iters", 500)), seed=0)


def _normalized(b, phi: SnSpec):
    nb = evaluate(phi, s_numbers(b))
    return b / nb if nb > 0 else b


def _close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


# ---------------------------------------------------------------------------
# matrix-level campaigns
# ---------------------------------------------------------------------------


@_campaign(
    "duality",
    "||T||_{Phi,Psi} equals ||T*||_{Psi*,Phi*}; both sides estimated independently",
    phi="schatten:3",
    psi="schatten:2",
    tuples=20,
    n=3,
    m=3,
    tol=1e-4,
    restarts=16,
)
def _c_duality(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    cfg, tol = _cfg(p), float(p["tol"])
    strict = phi.family == "schatten" and psi.family == "schatten"

    def case(k, rng):
        T = random_tuple(int(p["m"]), int(p["n"]), rng)
        a = mcn_norm(T, phi, psi, cfg)
        b = mcn_norm(T.adjoint(), psi.dual(), phi.dual(), cfg)
        agree = abs(a.value - b.value) <= tol
        return Case(k, {"tuple": T}, {"direct": a.value, "adjoint": b.value, "agree": agree}, agree or not strict)

    cases = run.map(case, int(p["tuples"]))
    warnings = []
    if not strict and any(not c.values["agree"] for c in cases):
        warnings.append("non-Schatten pair: estimates disagree; both are lower bounds of the same norm")
    wit = [c.to_dict() for c in cases if not c.passed]
    return _Outcome(cases, wit, {"agreement": tol}, warnings=warnings)


def _canonical_row_tuple() -> MatrixTuple:
    return MatrixTuple([unit(1, 1, 2), unit(1, 2, 2)])


@_campaign(
    "ruan_m1",
    "||T (+) S||_{Phi,Psi} <= max(||T||, ||S||) for block-diagonal sums",
    phi="schatten:2",
    psi="schatten:2",
    tuples=6,
    n=2,
    m=2,
    tol=1e-4,
    restarts=16,
)
def _c_ruan_m1(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    cfg, tol = _cfg(p), float(p["tol"])
    cases, witnesses = [], []

    # (e11, e12): rho_T(b) = tr(b) e11, so ||T||^2 = phi*(1, 1) exactly.
    T = _canonical_row_tuple()
    part = math.sqrt(dual_evaluate(phi, [1.0, 1.0]))
    b0 = np.eye(4) / phi.flat_norms(4)[-1]
    est = mcn_norm(direct_sum_tuple(T, T), phi, psi, MCNConfig(restarts=cfg.restarts, initial=(b0,)))
    ok = est.value <= part + 1e-9
    cases.append(Case(0, {"tuple": "(e11, e12) (+) itself"}, {"part_exact": part, "sum_lower_bound": est.value}, ok))
    if not ok:
        witnesses.append(
            {
                "tuple": T,
                "part_exact": part,
                "sum_lower_bound": est.value,
                "witness_a": est.witness_a,
                "witness_b": est.witness_b,
                "pairing": pairing(direct_sum_tuple(T, T), est.witness_a, est.witness_b),
            }
        )

    def case(k, rng):
        T = random_tuple(int(p["m"]), int(p["n"]), rng)
        S = random_tuple(int(p["m"]), int(p["n"]), rng)
        eT, eS = mcn_norm(T, phi, psi, cfg), mcn_norm(S, phi, psi, cfg)
        eTS = mcn_norm(direct_sum_tuple(T, S), phi, psi, cfg)
        bound = max(eT.value, eS.value)
        return Case(k, {"T": T, "S": S}, {"parts": [eT.value, eS.value], "sum": eTS.value}, eTS.value <= bound + tol)

    cases += run.map(case, int(p["tuples"]), start=1)
    witnesses += [c.to_dict() for c in cases[1:] if not c.passed]
    return _Outcome(cases, witnesses, {"random": tol, "canonical": 1e-9})


@_campaign(
    "m2_submul",
    "||X T Y||_{Phi,Psi} <= ||X|| ||T|| ||Y|| for scalar matrices acting on both sides",
    phi="schatten:2",
    psi="schatten:2",
    tuples=10,
    n=3,
    m=2,
    tol=1e-6,
    restarts=8,
)
def _c_m2(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    cfg, tol = _cfg(p), float(p["tol"])
    n = int(p["n"])

    def case(k, rng):
        T = random_tuple(int(p["m"]), n, rng)
        X = random_tuple(1, n, rng)[0]
        Y = random_tuple(1, n, rng)[0]
        lhs = mcn_norm(left_mul(X, right_mul(T, Y)), phi, psi, cfg)
        warm = _normalized(Y @ lhs.witness_b @ Y.conj().T, phi)
        rhs = mcn_norm(T, phi, psi, MCNConfig(restarts=cfg.restarts, initial=(warm,)))
        bound = op_norm(X) * op_norm(Y) * rhs.value
        return Case(k, {"T": T, "X": X, "Y": Y}, {"lhs": lhs.value, "bound": bound}, lhs.value <= bound * (1 + tol) + tol)

    cases = run.map(case, int(p["tuples"]))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"relative": tol})


@_campaign(
    "homogeneity",
    "||(x (x) I) T||_{Phi,Psi} <= ||x|| ||T||_{Phi,Psi} for coefficient maps x",
    phi="kyfan:2",
    psi="schatten:2",
    tuples=10,
    n=3,
    m=3,
    tol=1e-6,
    restarts=8,
)
def _c_homog(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    cfg, tol = _cfg(p), float(p["tol"])
    m = int(p["m"])

    def case(k, rng):
        T = random_tuple(m, int(p["n"]), rng)
        mp = int(rng.integers(1, m + 2))
        x = rng.standard_normal((mp, m)) + 1j * rng.standard_normal((mp, m))
        x *= rng.random() / op_norm(x)
        lhs = mcn_norm(apply_coeff(x, T), phi, psi, cfg)
        rhs = mcn_norm(T, phi, psi, MCNConfig(restarts=cfg.restarts, initial=(lhs.witness_b,)))
        bound = op_norm(x) * rhs.value
        return Case(k, {"T": T, "x": x}, {"lhs": lhs.value, "bound": bound}, lhs.value <= bound * (1 + tol) + tol)

    cases = run.map(case, int(p["tuples"]))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"relative": tol})


@_campaign(
    "cross_property",
    "simple tensors satisfy ||xi (x) A||_{Phi,Psi} = ||xi|| ||A|| when Psi <= Phi",
    phi="schatten:2",
    psi="schatten:3",
    samples=10,
    n=3,
    m=3,
    tol=1e-6,
    restarts=8,
)
def _c_cross(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    cfg, tol = _cfg(p), float(p["tol"])
    warnings = [] if dominates(phi, psi) else ["psi <= phi fails on samples; the cross property need not hold"]

    def case(k, rng):
        xi = rng.standard_normal(int(p["m"])) + 1j * rng.standard_normal(int(p["m"]))
        A = random_tuple(1, int(p["n"]), rng)[0]
        target = float(np.linalg.norm(xi)) * op_norm(A)
        est = mcn_norm(simple_tensor(xi, A), phi, psi, cfg)
        return Case(k, {"xi": xi, "A": A}, {"estimate": est.value, "target": target}, _close(est.value, target, tol))

    cases = run.map(case, int(p["samples"]))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"relative": tol}, warnings=warnings)


@_campaign(
    "basic_char",
    "||T||_{Phi,S_inf} via sphere ascent, via frames, and via the generic engine agree; "
    "Phi = S_1 gives the min norm and Phi = S_inf the row norm",
    phis="schatten:1;schatten:2;kyfan:2;schatten:inf",
    tuples=3,
    n=3,
    m=3,
    tol=1e-4,
    restarts=8,
)
def _c_basic(p, run):
    phis = _specs(p["phis"])
    cfg, tol = _cfg(p), float(p["tol"])

    def case(k, rng):
        T = random_tuple(int(p["m"]), int(p["n"]), rng)
        vals, ok = [], True
        for phi in phis:
            a = r_tilde_norm(T, phi, cfg).value
            b = r_tilde_frames(T, phi, cfg).value
            c = mcn_norm(T, phi, schatten(INF), cfg).value
            row = {"phi": phi, "sphere": a, "frames": b, "engine": c}
            good = abs(a - b) <= tol and abs(a - c) <= tol
            if phi.is_schatten(1):
                row["min"] = min_norm(T, cfg).value
                good &= abs(a - row["min"]) <= tol
            if phi.is_schatten(INF):
                row["row"] = row_norm(T)
                good &= abs(a - row["row"]) <= tol
            row["pass"] = good
            ok &= good
            vals.append(row)
        return Case(k, {"tuple": T}, {"by_phi": vals}, ok)

    cases = run.map(case, int(p["tuples"]))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"agreement": tol})


@_campaign(
    "min_twist",
    "sup over Hilbert-Schmidt unit coefficient maps x of ||(x (x) I) T||_{Phi,Psi} equals the min norm",
    phi="kyfan:2",
    psi="kyfan:2",
    tuples=4,
    n=2,
    m=3,
    samples=8,
    tol=1e-6,
    restarts=8,
)
def _c_min_twist(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    cfg, tol = _cfg(p), float(p["tol"])
    m = int(p["m"])

    def case(k, rng):
        T = random_tuple(m, int(p["n"]), rng)
        mn = min_norm(T, cfg)
        x_, y_ = eigh_desc(mn.witness_b)[1][:, 0], eigh_desc(mn.witness_a)[1][:, 0]
        w = np.array([y_.conj() @ Ti @ x_ for Ti in T])
        v = (w.conj() / np.linalg.norm(w))[None]
        at_opt = mcn_norm(apply_coeff(v, T), phi, psi, cfg).value
        worst = 0.0
        for _ in range(int(p["samples"])):
            mp = int(rng.integers(1, m + 1))
            x = rng.standard_normal((mp, m)) + 1j * rng.standard_normal((mp, m))
            x /= np.linalg.norm(x)
            worst = max(worst, mcn_norm(apply_coeff(x, T), phi, psi, cfg).value)
        ok = worst <= mn.value + tol and _close(at_opt, mn.value, tol)
        return Case(k, {"tuple": T}, {"min_norm": mn.value, "at_optimal_row": at_opt, "sampled_max": worst}, ok)

    cases = run.map(case, int(p["tuples"]))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"absolute": tol})


# ---------------------------------------------------------------------------
# sequence-level campaigns
# ---------------------------------------------------------------------------


@_campaign(
    "os_cross",
    "the cross-ratio inequality ||x(x)y||_Psi/||x||_Psi <= ||z(x)y||_Phi/||z||_Phi, needed for an operator space",
    phi="kyfan:2",
    psi="kyfan:2",
    samples=200,
    max_len=6,
)
def _c_os_cross(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    rep = check_os_cross(phi, psi, SamplerConfig(int(p["samples"]), int(p["max_len"]), run.seed))
    vals = {"holds": rep.holds, "tightest": rep.tightest, "left": rep.left, "right": rep.right, "triples": rep.cases}
    cases = [Case(0, {"phi": phi, "psi": psi}, vals, rep.holds)]
    witnesses = []
    if not rep.holds:
        x, y, z = rep.witness
        left, right = rep.reevaluate(phi, psi)
        witnesses.append({"x": x, "y": y, "z": z, "left": left, "right": right})
    warnings = [] if rep.dominated else ["psi <= phi fails; pair outside the usual setting"]
    return _Outcome(cases, witnesses, {"strict": 1e-12}, warnings=warnings)


@_campaign(
    "lorentz_star",
    "Lorentz norms are submultiplicative on tensor products of sequences",
    p=2.0,
    q=1.0,
    samples=1000,
    max_len=8,
    tol=1e-12,
)
def _c_lorentz(p, run):
    from .seqnorm import lorentz

    spec = lorentz(float(p["p"]), float(p["q"]))
    tol = float(p["tol"])

    def case(k, rng):
        x, y = random_spectra(rng, 2, int(p["max_len"]))
        lhs = evaluate(spec, tensor_seq(x, y))
        rhs = evaluate(spec, x) * evaluate(spec, y)
        return Case(k, {"x": x, "y": y}, {"ratio": lhs / rhs}, lhs <= rhs * (1 + tol))

    cases = run.map(case, int(p["samples"]))
    summary = {"spec": spec, "max_ratio": max(c.values["ratio"] for c in cases), "violations": sum(not c.passed for c in cases)}
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"relative": tol}, summary)


def binorm_star_oracle(spec: SnSpec, N: int) -> tuple:
    """Double loop in plain Python: (max S_mn/(S_m S_n), m, n) over m, n <= N."""
    if spec.family != "binorm" or spec.is_dual:
        raise ValueError("oracle expects a binormalizing sequence")
    kind = spec.params[0]
    if kind == "harmonic":
        w = [1.0 / j for j in range(1, N * N + 1)]
    elif kind == "pow":
        a = float(spec.params[1])
        w = [j ** (-a) for j in range(1, N * N + 1)]
    else:
        vals = list(spec.params[1])
        if len(vals) < N * N:
            raise ValueError(f"explicit sequence has {len(vals)} terms, oracle needs {N * N}")
        w = [float(v) for v in vals[: N * N]]
    S, acc = [], 0.0
    for x in w:
        acc += x
        S.append(acc)
    best, bm, bn = -math.inf, 0, 0
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            r = S[m * n - 1] / (S[m - 1] * S[n - 1])
            if r > best:
                best, bm, bn = r, m, n
    return best, bm, bn


@_campaign(
    "binorm_star",
    "for a weighted norm sum pi_j a_j*, sup_{m,n} S_mn/(S_m S_n) over partial sums S computed "
    "vectorized equals a plain double-loop oracle bit for bit",
    pi="binorm:pow:1/2",
    N=256,
)
def _c_binorm(p, run):
    spec = _spec(p["pi"])
    N = int(p["N"])
    R = partial_sum_ratios(spec, N)
    i, j = np.unravel_index(int(np.argmax(R)), R.shape)
    fast = (float(R[i, j]), int(i + 1), int(j + 1))
    slow = binorm_star_oracle(spec, N)
    same = fast[0] == slow[0] and fast[1:] == slow[1:]
    star = check_star(spec, N=N)
    vals = {"vectorized": fast[0], "oracle": slow[0], "argmax": list(fast[1:]), "oracle_argmax": list(slow[1:]), "star_holds": star.holds}
    case = Case(0, {"pi": spec, "N": N}, vals, same)
    return _Outcome([case], [] if same else [case.to_dict()], {"bitwise": 0.0}, {"constant": fast[0]})


@_campaign(
    "schatten_star",
    "Schatten norms are cross norms: ||x(x)y||_p = ||x||_p ||y||_p",
    ps="1,1.5,2,3,inf",
    samples=200,
    max_len=6,
    tol=1e-12,
)
def _c_schatten_star(p, run):
    ps = _nums(p["ps"])
    tol = float(p["tol"])

    def case(k, rng):
        x, y = random_spectra(rng, 2, int(p["max_len"]))
        devs = {}
        for q in ps:
            spec = schatten(q)
            lhs = evaluate(spec, tensor_seq(x, y))
            rhs = evaluate(spec, x) * evaluate(spec, y)
            devs[str(q)] = abs(lhs - rhs) / rhs
        return Case(k, {"x": x, "y": y}, {"rel_dev": devs}, max(devs.values()) <= tol)

    cases = run.map(case, int(p["samples"]))
    consts = {str(q): check_star(schatten(q)).constant for q in ps}
    ok_const = all(c == 1.0 for c in consts.values())
    cases.append(Case(len(cases), {"check": "check_star constant"}, {"constants": consts}, ok_const))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"relative": tol}, {"constants": consts})


def _trend(vals) -> str:
    d = np.diff(vals)
    if np.all(d >= -1e-12 * np.abs(vals[1:])):
        return "nondecreasing"
    if np.all(d <= 1e-12 * np.abs(vals[1:])):
        return "nonincreasing"
    return "mixed"


@_campaign(
    "tensor_power",
    "||x^(tensor n)||_Phi^(1/n) stays below c_1 ||x||_Phi where c_1 is the submultiplicativity constant",
    spec="binorm:pow:1/2",
    x="1,1",
    n_max=10,
    tol=1e-9,
)
def _c_tensor(p, run):
    spec = _spec(p["spec"])
    x = Spectrum(_nums(p["x"]))
    tol = float(p["tol"])
    series = tensor_power_trace(spec, x, int(p["n_max"]))
    star = check_star(spec)
    c1 = max(star.constant, 1.0)
    base = evaluate(spec, x)
    vals = [v for _, v in series]
    ok = vals[-1] <= c1 * base + tol
    boyd = boyd_estimate(spec, 1 << 20).p_estimate
    limit_guess = evaluate(schatten(boyd), x) if boyd != INF else float(x[0])
    values = {"series": series, "c1": c1, "eval": base, "trend": _trend(np.array(vals)), "lp_at_boyd_index": limit_guess}
    case = Case(0, {"spec": spec, "x": x}, values, ok)
    return _Outcome([case], [] if ok else [case.to_dict()], {"absolute": tol}, {"trend": values["trend"], "last": vals[-1]})


def expected_boyd(spec: SnSpec) -> float:
    """Index predicted for the built-in families (Phi(1_n) ~ C n^(1/p))."""
    if spec.is_dual:
        return conjugate_exponent(expected_boyd(spec.primal()))
    fam = spec.family
    if fam == "schatten":
        return spec.params[0]
    if fam == "lorentz":
        return spec.params[0]
    if fam in ("kyfan", "kyfan_theta"):
        return INF
    if fam == "binorm":
        if spec.params[0] == "harmonic":
            return 1.0
        if spec.params[0] == "pow":
            return 1.0 / (1.0 - spec.params[1]) if spec.params[1] < 1 else 1.0
    raise ValueError(f"no predicted index for {format_spec(spec)}")


@_campaign(
    "boyd",
    "log n / log Phi(1_n) converges to the Schatten exponent the norm resembles",
    spec="binorm:pow:1/2",
    n_max=10**6,
    tol=0.04,
)
def _c_boyd(p, run):
    spec = _spec(p["spec"])
    est = boyd_estimate(spec, int(p["n_max"]))
    target = expected_boyd(spec)
    tol = float(p["tol"])
    if target == INF:
        ok = est.p_estimate == INF
    else:
        ok = abs(est.p_estimate - target) <= tol
    vals = {"p_estimate": est.p_estimate, "raw_ratio": est.raw_estimate, "expected": target, "trend": est.trend, "series": est.series}
    case = Case(0, {"spec": spec, "n_max": int(p["n_max"])}, vals, ok)
    return _Outcome([case], [] if ok else [case.to_dict()], {"absolute": tol})


@_campaign(
    "q_partition",
    "for Schatten p <= 2, sum of squared block norms of a 2x2 partition is at most the squared norm",
    ps="1,1.5,2",
    samples=500,
    max_n=3,
    tol=1e-12,
)
def _c_qpart(p, run):
    ps = _nums(p["ps"])
    tol = float(p["tol"])

    def case(k, rng):
        n = int(rng.integers(1, int(p["max_n"]) + 1))
        Z = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n))
        y = (Z + Z.conj().T) / 2
        res, ok = {}, True
        for q in ps:
            lhs, rhs = partition_inequality(schatten(q), y)
            res[str(q)] = lhs / rhs
            ok &= lhs <= rhs * (1 + tol)
        return Case(k, {"y": y}, {"ratio": res}, ok)

    cases = run.map(case, int(p["samples"]))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"relative": tol}, {"violations": sum(not c.passed for c in cases)})


# ---------------------------------------------------------------------------
# cb-norm campaigns
# ---------------------------------------------------------------------------


@_campaign(
    "cb_row_formula",
    "the cb norm from the row space into H(S_p, S_p) of diag(x) equals ||x||_{2p}",
    ps="1,2,3,inf",
    samples=100,
    max_len=6,
    tol=1e-6,
)
def _c_cb_row(p, run):
    ps = _nums(p["ps"])
    tol = float(p["tol"])

    def case(k, rng):
        (x,) = random_spectra(rng, 1, int(p["max_len"]))
        res, ok = {}, True
        for q in ps:
            spec = schatten(q)
            v = cb.cb_from_row(x, spec, spec)
            c2 = convexify2(spec, x)
            direct = evaluate(schatten(2 * q), x)
            res[str(q)] = {"cb": v, "convexified": c2, "l_2p": direct}
            ok &= _close(v, c2, tol) and _close(v, direct, tol)
        return Case(k, {"x": x}, res, ok)

    cases = run.map(case, int(p["samples"]))
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"relative": tol})


@_campaign(
    "oh_cb",
    "the OH witness bound sup_c (sum lam^4 c^2)^(1/4)/(sum c^p)^(1/(2p)) has closed form ||lam||_{4p/(p-2)}",
    ps="3,4,10",
    samples=10,
    max_len=4,
    tol=1e-6,
)
def _c_oh_cb(p, run):
    ps = _nums(p["ps"])
    tol = float(p["tol"])
    anchor = cb.cb_oh_witness([1, 1], 4)
    cases = [Case(0, {"lam": [1, 1], "p": 4}, {"closed": anchor, "expected": 2 ** (1 / 8)}, abs(anchor - 2 ** (1 / 8)) <= 1e-9)]

    def case(k, rng):
        n = int(rng.integers(1, int(p["max_len"]) + 1))
        lam = Spectrum(rng.random(n) + 0.05)
        res, ok = {}, True
        for q in ps:
            a, b = cb.cb_oh_witness(lam, q), cb.cb_oh_witness(lam, q, mode="grid", grid=25 if n == 4 else 41)
            res[str(q)] = {"closed": a, "grid": b}
            ok &= abs(a - b) <= tol
        return Case(k, {"lam": lam}, res, ok)

    cases += run.map(case, int(p["samples"]), start=1)
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"closed_vs_grid": tol, "anchor": 1e-9})


@_campaign(
    "spin",
    "Jordan-Wigner spin systems anticommute, satisfy ||sum eta_i U_i|| <= sqrt2 ||eta||_2, "
    "and ||sum lam_i^2 U_i (x) U_i|| follows one closed form",
    ms="1,2,3,4,5",
    samples=100,
    identity_samples=50,
)
def _c_spin(p, run):
    ms = _ints(p["ms"])
    readings = {}

    def case(k, rng):
        m = ms[k]
        U = cb.spin_system(m)
        res = cb.anticommutation_residual(U)
        worst = 0.0
        for _ in range(int(p["samples"])):
            eta = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            worst = max(worst, cb.spin_combination_norm(U, eta) / (math.sqrt(2) * np.linalg.norm(eta)))
        ident = cb.classify_spin_identity(U, int(p["identity_samples"]), rng)
        mn = min_norm(U).value
        ok = res <= 1e-12 and worst <= 1 + 1e-12 and ident.reading != "neither" and mn <= math.sqrt(2) + 1e-9
        vals = {
            "dimension": U.n,
            "anticommutation_residual": res,
            "max_ratio_to_sqrt2": worst,
            "identity": ident.reading,
            "dev_sum": ident.max_dev_sum,
            "dev_sqrt": ident.max_dev_sqrt,
            "min_norm": mn,
        }
        return Case(k, {"m": m}, vals, ok)

    cases = run.map(case, len(ms))
    readings = sorted({c.values["identity"] for c in cases})
    consistent = len(readings) == 1 and readings[0] != "neither"
    warnings = [] if consistent else [f"spin identity readings differ across m: {readings}"]
    verdict = None if consistent else FAIL
    summary = {"identity_reading": readings[0] if consistent else readings}
    return _Outcome(cases, [c.to_dict() for c in cases if not c.passed], {"anticommutation": 1e-12, "identity": 1e-10}, summary, warnings, verdict)


# ---------------------------------------------------------------------------
# exploratory campaigns
# ---------------------------------------------------------------------------


@_campaign(
    "hsharp",
    "truncations ||T (x) I_N||_{Phi_theta} for Phi_theta = a1 + theta a2 against "
    "max(||T||_{S_1,Phi_theta}, ||T||_row)",
    exploratory=True,
    tuples=20,
    n=2,
    m=2,
    thetas="0.5,1",
    levels="1,2,3,4",
    tol=1e-4,
    restarts=8,
)
def _c_hsharp(p, run):
    thetas, levels = _nums(p["thetas"]), _ints(p["levels"])
    cfg, tol = _cfg(p), float(p["tol"])

    def case(k, rng):
        T = random_tuple(int(p["m"]), int(p["n"]), rng)
        rows, ok, gap = [], True, -INF
        for th in thetas:
            h = hsharp_kyfan_theta(T, th, levels, cfg)
            vals = h.values()
            mono = all(b >= a for a, b in zip(vals, vals[1:]))
            bounded = max(vals) <= h.closed_form + tol
            gap = max(gap, max(vals) - h.closed_form)
            ok &= mono and bounded
            rows.append({"theta": th, "closed_form": h.closed_form, "truncated": list(zip(levels, vals)), "nondecreasing": mono, "bounded": bounded})
        return Case(k, {"tuple": T}, {"by_theta": rows, "max_gap": gap}, ok)

    cases = run.map(case, int(p["tuples"]))
    ranked = sorted(cases, key=lambda c: -c.values["max_gap"])[:5]
    cands = [{"index": c.index, "max_gap": c.values["max_gap"]} for c in ranked]
    return _Outcome(cases, cands, {"bound": tol}, {"all_consistent": all(c.passed for c in cases)})


@_campaign(
    "os_cross_converse_search",
    "search for block-diagonal violations among pairs that satisfy the cross-ratio inequality",
    exploratory=True,
    phi="lorentz:2,1",
    psi="lorentz:3,2",
    tuples=8,
    n=2,
    m=2,
    restarts=8,
)
def _c_converse(p, run):
    phi, psi = _spec(p["phi"]), _spec(p["psi"])
    cfg = _cfg(p)
    rep = check_os_cross(phi, psi, SamplerConfig(seed=run.seed))
    if not rep.holds:
        case = Case(0, {"phi": phi, "psi": psi}, {"cross_ratio_holds": False}, True)
        return _Outcome([case], [], {}, warnings=["pair violates the cross-ratio inequality; outside the converse's scope"])

    def case(k, rng):
        T = random_tuple(int(p["m"]), int(p["n"]), rng)
        S = random_tuple(int(p["m"]), int(p["n"]), rng)
        parts = max(mcn_norm(T, phi, psi, cfg).value, mcn_norm(S, phi, psi, cfg).value)
        whole = mcn_norm(direct_sum_tuple(T, S), phi, psi, cfg).value
        return Case(k, {"T": T, "S": S}, {"ratio": whole / parts}, True)

    cases = run.map(case, int(p["tuples"]))
    ranked = sorted(cases, key=lambda c: -c.values["ratio"])[:5]
    return _Outcome(cases, [{"index": c.index, "ratio": c.values["ratio"]} for c in ranked], {}, {"max_ratio": ranked[0].values["ratio"]})


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


def _spectrum_grid(n: int, grid: int) -> np.ndarray:
    axes = np.linspace(0.0, 1.0, grid)
    pts = np.stack(np.meshgrid(*([axes] * n), indexing="ij"), axis=-1).reshape(-1, n)
    pts = pts[np.all(np.diff(pts, axis=1) <= 0, axis=1) & (pts[:, 0] == 1.0)]
    return pts


def oracle_mcn_bruteforce(T, phi: SnSpec, psi: SnSpec, grid: int = 9, unitaries: int = 32, refine: int = 3, seed: int = 0) -> float:
    """Grid over spectra of b times sampled unitaries, then quasi-Newton refinement.

    Evaluates sup_b psi(s(rho_T(b))) / phi(s(b)) with no alternating steps.
    Small instances only (n, m <= 3).
    """
    T = as_tuple(T)
    n = T.n
    if n > 3 or T.m > 3:
        raise ValueError("oracle is limited to n, m <= 3")
    rng = np.random.default_rng(seed)
    spectra = _spectrum_grid(n, grid)
    Us = [np.eye(n, dtype=complex)] + [random_unitary(n, rng) for _ in range(unitaries)]

    def value(U, beta):
        b = (U * beta) @ U.conj().T
        nb = evaluate(phi, beta)
        if nb <= 0:
            return 0.0
        return evaluate(psi, s_numbers(rho_apply(T, b))) / nb

    scored = []
    for ui, U in enumerate(Us):
        for beta in spectra:
            scored.append((value(U, beta), ui, tuple(beta)))
    scored.sort(key=lambda t: -t[0])
    best = scored[0][0]
    # refine with b = Z Z^*, an unconstrained smooth parametrization of PSD b
    def g(z):
        Z = (z[: n * n] + 1j * z[n * n :]).reshape(n, n)
        b = Z @ Z.conj().T
        nb = evaluate(phi, s_numbers(b))
        return -evaluate(psi, s_numbers(rho_apply(T, b))) / nb if nb > 0 else 0.0

    seen = set()
    for val, ui, beta in scored:
        if len(seen) >= refine:
            break
        if ui in seen:
            continue
        seen.add(ui)
        Z0 = Us[ui] * np.sqrt(np.array(beta))
        z0 = np.r_[Z0.real.ravel(), Z0.imag.ravel()]
        res = optimize.minimize(g, z0, method="L-BFGS-B", options={"maxiter": 400, "ftol": 1e-15, "gtol": 1e-11})
        best = max(best, -res.fun)
    return math.sqrt(max(best, 0.0))

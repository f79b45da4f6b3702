"""GHZ-diagonal bound-entangled family with exact REE and its certificate.

The family mixes an N-party GHZ projector with the flip-pair projectors
P_k = |0..1_k..0><..| and their complements. Its REE equals the GHZ weight x
for N >= 4, with a closest separable state obtained by dephasing the GHZ
block; the optimality certificate is the nonnegativity of 1 - g over product
states with nonnegative real amplitudes, which holds for N >= 4 and fails
for N = 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import (
    DensityOperator,
    HilbertLayout,
    ProductPureState,
    PureStateVector,
    ValidationError,
)
from . import reesolver

__all__ = [
    "DurParams",
    "ghz_state",
    "dur_state",
    "dur_closest_separable",
    "dur_ree",
    "dur_e_log",
    "closed_form_gradient",
    "g_function",
    "g_max",
    "DurCertificate",
    "verify_closest",
]


@dataclass(frozen=True)
class DurParams:
    """Party count N >= 3 and GHZ weight x in [0, 1]; the GHZ phase is 0.

    N = 3 is admitted only so the g certificate can demonstrate where the
    exact-REE theorem stops; a nonzero phase exists solely for testing local
    unitary invariance of the computed measures.
    """

    n_parties: int
    weight: float
    phase: float = 0.0

    def __post_init__(self):
        if self.n_parties < 3:
            raise ValidationError("the family needs at least 3 parties")
        if not 0.0 <= self.weight <= 1.0:
            raise ValidationError("weight must lie in [0, 1]")


def ghz_state(n: int, phase: float = 0.0) -> PureStateVector:
    dim = 2**n
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0 / math.sqrt(2.0)
    amps[-1] = np.exp(1j * phase) / math.sqrt(2.0)
    return PureStateVector(HilbertLayout.qubits(n), amps)


def _flip_pair_indices(n: int) -> list[tuple[int, int]]:
    """Basis indices of |0..1_k..0> and |1..0_k..1| for k = 0..n-1."""
    full = 2**n - 1
    out = []
    for k in range(n):
        u = 1 << (n - 1 - k)
        out.append((u, full ^ u))
    return out


def dur_state(p: DurParams) -> DensityOperator:
    """x |GHZ><GHZ| + (1-x)/(2N) sum_k (P_k + Pbar_k)."""
    n, x = p.n_parties, p.weight
    dim = 2**n
    ghz = ghz_state(n, p.phase).amplitudes
    mat = x * np.outer(ghz, ghz.conj())
    w = (1.0 - x) / (2 * n)
    for u, v in _flip_pair_indices(n):
        mat[u, u] += w
        mat[v, v] += w
    return DensityOperator(HilbertLayout.qubits(n), mat, validate=False)


def dur_closest_separable(p: DurParams) -> DensityOperator:
    """Dephase the GHZ block: (x/2)(|GHZ><GHZ| + |GHZ-><GHZ-|) + flip pairs."""
    n, x = p.n_parties, p.weight
    ghz_p = ghz_state(n, p.phase).amplitudes
    ghz_m = ghz_p.copy()
    ghz_m[-1] *= -1.0
    mat = 0.5 * x * (np.outer(ghz_p, ghz_p.conj()) + np.outer(ghz_m, ghz_m.conj()))
    w = (1.0 - x) / (2 * n)
    for u, v in _flip_pair_indices(n):
        mat[u, u] += w
        mat[v, v] += w
    return DensityOperator(HilbertLayout.qubits(n), mat, validate=False)


def dur_ree(p: DurParams) -> float:
    """Exact REE of the family: the GHZ weight x, proved for N >= 4 only."""
    if p.n_parties < 4:
        raise ValidationError("the exact REE formula is established for N >= 4")
    return float(p.weight)


def dur_e_log(p: DurParams) -> float:
    """Convex-roof geometric quantity log2(2 / (2 - x))."""
    return math.log2(2.0 / (2.0 - p.weight))


def closed_form_gradient(p: DurParams) -> np.ndarray:
    """The gradient operator at the closest separable state, in closed form:
    2 |GHZ><GHZ| + sum_k (P_k + Pbar_k)."""
    n = p.n_parties
    ghz = ghz_state(n, p.phase).amplitudes
    mat = 2.0 * np.outer(ghz, ghz.conj())
    for u, v in _flip_pair_indices(n):
        mat[u, u] += 1.0
        mat[v, v] += 1.0
    return mat


def g_function(angles) -> float:
    """(prod c + prod s)^2 + sum_k [(c..s_k..c)^2 + (s..c_k..s)^2]."""
    th = np.asarray(angles, dtype=float)
    if th.ndim != 1 or len(th) < 1:
        raise ValidationError("expected a vector of angles")
    if th.min() < -1e-12 or th.max() > math.pi / 2 + 1e-12:
        raise ValidationError("angles must lie in [0, pi/2]")
    c = np.cos(th)
    s = np.sin(th)
    pc = np.prod(c)
    ps = np.prod(s)
    total = (pc + ps) ** 2
    for k in range(len(th)):
        ck = c.copy()
        sk = s.copy()
        ck[k], sk[k] = s[k], c[k]
        total += np.prod(ck) ** 2 + np.prod(sk) ** 2
    return float(total)


def _g_batch(theta: np.ndarray) -> np.ndarray:
    """g over a (samples, N) matrix of angles, vectorized."""
    c = np.cos(theta)
    s = np.sin(theta)
    pc = np.prod(c, axis=1)
    ps = np.prod(s, axis=1)
    out = (pc + ps) ** 2
    # leave-one-out products via prefix/suffix scans (stable at zeros)
    n = theta.shape[1]
    pref_c = np.ones_like(c)
    pref_s = np.ones_like(s)
    for i in range(1, n):
        pref_c[:, i] = pref_c[:, i - 1] * c[:, i - 1]
        pref_s[:, i] = pref_s[:, i - 1] * s[:, i - 1]
    suf_c = np.ones_like(c)
    suf_s = np.ones_like(s)
    for i in range(n - 2, -1, -1):
        suf_c[:, i] = suf_c[:, i + 1] * c[:, i + 1]
        suf_s[:, i] = suf_s[:, i + 1] * s[:, i + 1]
    loo_c = pref_c * suf_c
    loo_s = pref_s * suf_s
    out += np.sum((loo_c * s) ** 2 + (loo_s * c) ** 2, axis=1)
    return out


def g_max(
    n: int,
    samples: int = 100_000,
    seed: int = 0,
    sweeps: int = 50,
    tol: float = 1e-12,
) -> tuple[float, np.ndarray]:
    """Numeric maximum of g: uniform angle sampling plus coordinate ascent.

    Each coordinate update is exact: at fixed other angles, g is a quadratic
    form in (cos t, sin t), maximized in closed form from three evaluations.
    """
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, math.pi / 2, size=(samples, n))
    vals = _g_batch(theta)
    order = np.argsort(vals)[::-1]
    best_val = float(vals[order[0]])
    best_theta = theta[order[0]].copy()
    for idx in order[:16]:
        th = theta[idx].copy()
        val = float(vals[idx])
        for _ in range(sweeps):
            improved = 0.0
            for k in range(n):
                base = th.copy()
                base[k] = 0.0
                g0 = g_function(base)
                base[k] = math.pi / 2
                g1 = g_function(base)
                base[k] = math.pi / 4
                gq = g_function(base)
                a, b = g0, g1
                cc = gq - 0.5 * (a + b)
                # max over t of a cos^2 t + b sin^2 t + 2 cc sin t cos t;
                # cc >= 0 in range, so the stationary angle lands in [0, pi/2]
                if cc == 0.0:
                    t_star = 0.0 if a >= b else math.pi / 2
                else:
                    t_star = 0.5 * math.atan2(2.0 * cc, a - b)
                    t_star = min(max(t_star, 0.0), math.pi / 2)
                cand = th.copy()
                cand[k] = t_star
                g_cand = g_function(cand)
                pick = max((g0, 0.0), (g1, math.pi / 2), (g_cand, t_star), (val, th[k]))
                improved = max(improved, pick[0] - val)
                th[k] = pick[1]
                val = pick[0]
            if improved < tol:
                break
        if val > best_val:
            best_val = val
            best_theta = th
    return best_val, best_theta


@dataclass(frozen=True)
class DurCertificate:
    """Outcome of the closest-separable-state verification."""

    n_parties: int
    weight: float
    samples: int
    gradient_mismatch: float
    min_gap_sampled: float
    min_gap_polished: float
    passed: bool
    worst_angles: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "N": self.n_parties,
            "x": self.weight,
            "samples": self.samples,
            "gradient_mismatch": float(self.gradient_mismatch),
            "min_gap_sampled": float(self.min_gap_sampled),
            "min_gap_polished": float(self.min_gap_polished),
            "passed": bool(self.passed),
            "worst_angles": [float(t) for t in self.worst_angles],
        }


def verify_closest(p: DurParams, samples: int = 10_000, seed: int = 0) -> DurCertificate:
    """Certify the dephased state as closest separable for N >= 4.

    Checks (a) the numerically computed gradient operator against its closed
    form and (b) nonnegativity of the stationarity gap 1 - <Phi|T|Phi> over
    Haar-random product states and over the polished oracle maximizer. For
    real nonnegative amplitudes the gap reduces to 1 - g, so the random
    sampling is evaluated through the g function after stripping phases.
    """
    if p.n_parties < 4:
        raise ValidationError("certificate applies to N >= 4")
    n = p.n_parties
    rho = dur_state(p)
    sigma = dur_closest_separable(p)
    T_closed = closed_form_gradient(p)
    T_num = reesolver.gradient_operator(rho, sigma)
    mismatch = float(np.abs(T_num - T_closed).max())

    # Haar product states: per-party amplitudes (a, b); phases drop out of g
    rng = np.random.default_rng([seed, 1])
    z = rng.standard_normal((samples, n, 2, 2))
    amp = z[..., 0] + 1j * z[..., 1]
    amp /= np.linalg.norm(amp, axis=2, keepdims=True)
    theta = np.arctan2(np.abs(amp[..., 1]), np.abs(amp[..., 0]))
    gaps = 1.0 - _g_batch(theta)
    min_gap = float(gaps.min())
    worst = theta[int(np.argmin(gaps))]

    phi, val = reesolver.best_product_direction(
        T_closed, rho.layout, reesolver.SolverConfig(seed=seed)
    )
    min_gap_polished = 1.0 - val

    passed = mismatch <= 1e-10 and min_gap >= -1e-9 and min_gap_polished >= -1e-9
    return DurCertificate(
        n_parties=n,
        weight=p.weight,
        samples=samples,
        gradient_mismatch=mismatch,
        min_gap_sampled=min_gap,
        min_gap_polished=min_gap_polished,
        passed=passed,
        worst_angles=tuple(float(t) for t in worst),
    )

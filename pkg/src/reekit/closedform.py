"""Analytic evaluators for the solved entanglement quantities.

Covers entanglement eigenvalues of (qudit) Dicke states, the per-mixture
functional F whose lower convex envelope is the relative entropy of
entanglement for symmetric diagonal mixtures, the dephased separable states
that realize it, and the pure-superposition eigenvalue used for the
convex-roof measure.

Envelopes along two-component segments are exact (bridge endpoints refined
to 1e-8 in s); envelopes over larger support faces are grid LP
approximations and are flagged as such in the returned metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import linprog

from .dicke import (
    DickeIndex,
    DickeMixture,
    QuditComposition,
    QuditDickeMixture,
    compositions,
)
from .qcore import LN2, ValidationError

__all__ = [
    "AngleTheta",
    "FCurve",
    "ConvexEnvelope",
    "lambda_max_dicke",
    "lambda_max_qudit",
    "pure_dicke_ree",
    "theta_star",
    "u_bar",
    "f_value",
    "f_value_qudit",
    "dephased_separable_sigma",
    "dephased_separable_sigma_qudit",
    "convex_envelope_1d",
    "two_component_curve",
    "qudit_segment_curve",
    "ree_two_component",
    "ree_qudit_two_component",
    "e_log_curve",
    "e_log_mixture",
    "mixture_ree",
    "closest_separable_dicke",
    "entanglement_eigenvalue_superposition",
    "curve_csv",
]

DEFAULT_CURVE_POINTS = 1001
_BRIDGE_DEPTH_TOL = 1e-9      # dips shallower than this are treated as convex
_BRIDGE_REFINE_TOL = 1e-8     # endpoint refinement tolerance in s


def lambda_max_dicke(idx: DickeIndex) -> float:
    """Entanglement eigenvalue sqrt(C^n_k) (k/n)^(k/2) ((n-k)/n)^((n-k)/2)."""
    n, k = idx.n, idx.k
    val = math.sqrt(math.comb(n, k))
    if k:
        val *= (k / n) ** (k / 2)
    if n - k:
        val *= ((n - k) / n) ** ((n - k) / 2)
    return val


def lambda_max_qudit(c: QuditComposition) -> float:
    val = math.sqrt(c.multinomial)
    for k_i in c.counts:
        if k_i:
            val *= (k_i / c.n) ** (k_i / 2)
    return val


def pure_dicke_ree(obj: DickeIndex | QuditComposition) -> float:
    """-2 log2 Lambda_max; equals the logarithmic robustness and the REE."""
    lam = lambda_max_dicke(obj) if isinstance(obj, DickeIndex) else lambda_max_qudit(obj)
    return -2.0 * math.log2(lam)


@dataclass(frozen=True)
class AngleTheta:
    """Mixing angle of the dephased product family, theta in [0, pi/2]."""

    theta: float

    def __post_init__(self):
        if not -1e-12 <= self.theta <= math.pi / 2 + 1e-12:
            raise ValidationError("theta must lie in [0, pi/2]")

    @property
    def cos2(self) -> float:
        return math.cos(self.theta) ** 2

    @property
    def sin2(self) -> float:
        return math.sin(self.theta) ** 2


def theta_star(m: DickeMixture) -> AngleTheta:
    """Stationary angle: cos^2 theta = alpha / n with alpha = sum_k p_k k.

    The degenerate mixtures (alpha = 0 or alpha = n) land on the boundary
    angles pi/2 and 0 as the limits of the stationarity condition.
    """
    alpha = float(np.dot(m.weights, np.arange(m.n + 1)))
    cos2 = min(max(alpha / m.n, 0.0), 1.0)
    return AngleTheta(math.acos(math.sqrt(cos2)))


def u_bar(m: QuditDickeMixture) -> np.ndarray:
    """Stationary level populations u_j = (1/n) sum p_kvec k_j."""
    K = np.asarray(compositions(m.n, m.d), dtype=float)
    return (m.weights @ K) / m.n


def f_value(m: DickeMixture) -> float:
    """F = sum_k p_k log2 [ p_k n^n / (C^n_k alpha^k (n-alpha)^(n-k)) ], in bits."""
    n = m.n
    p = m.weights
    alpha = float(np.dot(p, np.arange(n + 1)))
    total = 0.0
    for k in range(n + 1):
        if p[k] <= 0.0:
            continue
        term = math.log(p[k]) + n * math.log(n) - math.log(math.comb(n, k))
        if k:
            term -= k * math.log(alpha)
        if n - k:
            term -= (n - k) * math.log(n - alpha)
        total += p[k] * term
    return max(total / LN2, 0.0)


def f_value_qudit(m: QuditDickeMixture) -> float:
    """F = sum p_kvec log2 [ p_kvec / (C^n_kvec prod_j ubar_j^(k_j)) ], in bits."""
    ub = u_bar(m)
    comps = compositions(m.n, m.d)
    total = 0.0
    for i, counts in enumerate(comps):
        p = m.weights[i]
        if p <= 0.0:
            continue
        term = math.log(p) - math.log(QuditComposition(m.n, m.d, counts).multinomial)
        for j, k_j in enumerate(counts):
            if k_j:
                term -= k_j * math.log(ub[j])
        total += p * term
    return max(total / LN2, 0.0)


def dephased_separable_sigma(theta: AngleTheta, n: int) -> DickeMixture:
    """Phase average of (cos t |0> + e^(i phi) sin t |1>)^n: binomial Dicke weights."""
    q = theta.cos2
    r = np.array([math.comb(n, k) * q**k * (1.0 - q) ** (n - k) for k in range(n + 1)])
    r /= r.sum()
    return DickeMixture(n, r)


def dephased_separable_sigma_qudit(u, n: int, d: int) -> QuditDickeMixture:
    u = np.asarray(u, dtype=float)
    if u.shape != (d,) or u.min() < -1e-12 or abs(u.sum() - 1.0) > 1e-9:
        raise ValidationError("u must be a probability vector of length d")
    u = np.clip(u, 0.0, None)
    comps = compositions(n, d)
    r = np.empty(len(comps))
    for i, counts in enumerate(comps):
        w = float(QuditComposition(n, d, counts).multinomial)
        for j, k_j in enumerate(counts):
            if k_j:
                w *= u[j] ** k_j
        r[i] = w
    r /= r.sum()
    return QuditDickeMixture(n, d, r)


# ---------------------------------------------------------------------------
# curves and 1-D convex envelopes


@dataclass(frozen=True)
class FCurve:
    """A sampled curve on [0, 1] together with its exact evaluator."""

    label: str
    s: np.ndarray
    values: np.ndarray
    evaluator: Callable[[float], float]

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if s.ndim != 1 or s.shape != v.shape or len(s) < 3:
            raise ValidationError("curve needs >= 3 aligned samples")
        if not (np.all(np.diff(s) > 0) and s[0] == 0.0 and s[-1] == 1.0):
            raise ValidationError("samples must increase from 0 to 1")
        if not np.all(np.isfinite(v)):
            raise ValidationError("curve samples must be finite")
        s.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_evaluator(cls, label: str, evaluator, points: int = DEFAULT_CURVE_POINTS) -> "FCurve":
        s = np.linspace(0.0, 1.0, points)
        return cls(label, s, np.array([evaluator(x) for x in s]), evaluator)


@dataclass(frozen=True)
class ConvexEnvelope:
    """Lower convex envelope of an FCurve: the curve outside bridge chords."""

    curve: FCurve
    bridges: tuple[tuple[float, float, float, float], ...]  # (a, b, f(a), f(b))

    def value(self, s: float) -> float:
        for a, b, fa, fb in self.bridges:
            if a <= s <= b:
                return fa + (fb - fa) * (s - a) / (b - a)
        return self.curve.evaluator(s)

    __call__ = value

    @property
    def equals_curve(self) -> bool:
        return not self.bridges

    @property
    def breakpoints(self) -> tuple[float, ...]:
        out = []
        for a, b, _, _ in self.bridges:
            out.extend((a, b))
        return tuple(sorted(out))


def _lower_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    hull: list[int] = []
    for i in range(len(x)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _golden_min(f, lo: float, hi: float, tol: float) -> float:
    """Argmin of a unimodal scalar function by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _grid_golden_min(f, lo: float, hi: float, tol: float, coarse: int = 200) -> float:
    """Global 1-D minimization: coarse scan then golden polish around the best."""
    if hi <= lo:
        return lo
    xs = np.linspace(lo, hi, coarse)
    vals = [f(x) for x in xs]
    i = int(np.argmin(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, coarse - 1)]
    if b <= a:
        return xs[i]
    return _golden_min(f, a, b, tol)


def _refine_bridge(evaluator, lo_a, hi_a, lo_b, hi_b, anchor, tol=_BRIDGE_REFINE_TOL):
    """Common-tangent endpoints of one bridge.

    The envelope value at an interior anchor is min over chords through it;
    alternating exact 1-D minimizations over the two endpoints recover the
    tangency points of the supporting chord.
    """

    def chord_at_anchor(a: float, b: float) -> float:
        if b - a < 1e-15:
            return evaluator(anchor)
        fa, fb = evaluator(a), evaluator(b)
        return fa + (fb - fa) * (anchor - a) / (b - a)

    a = 0.5 * (lo_a + hi_a)
    b = 0.5 * (lo_b + hi_b)
    for _ in range(60):
        new_a = _grid_golden_min(lambda x: chord_at_anchor(x, b), lo_a, min(hi_a, anchor - 1e-12), tol * 0.1)
        new_b = _grid_golden_min(lambda x: chord_at_anchor(new_a, x), max(lo_b, anchor + 1e-12), hi_b, tol * 0.1)
        moved = max(abs(new_a - a), abs(new_b - b))
        a, b = new_a, new_b
        if moved < tol:
            break
    # snap to the domain ends where the tangency is constrained
    if a < tol:
        a = 0.0
    if b > 1.0 - tol:
        b = 1.0
    return a, b, evaluator(a), evaluator(b)


def convex_envelope_1d(curve: FCurve) -> ConvexEnvelope:
    """Lower convex envelope of a sampled curve, refined near bridge endpoints."""
    s, v = curve.s, curve.values
    hull = _lower_hull(s, v)
    candidates = []
    for h in range(len(hull) - 1):
        i, j = hull[h], hull[h + 1]
        if j == i + 1:
            continue
        # depth of the dip above the chord over the skipped samples
        span = slice(i + 1, j)
        chord = v[i] + (v[j] - v[i]) * (s[span] - s[i]) / (s[j] - s[i])
        if np.max(v[span] - chord) > _BRIDGE_DEPTH_TOL:
            candidates.append((i, j))
    bridges = []
    for i, j in candidates:
        lo_a = s[i - 1] if i > 0 else 0.0
        hi_a = s[i + 1]
        lo_b = s[j - 1]
        hi_b = s[j + 1] if j < len(s) - 1 else 1.0
        anchor = 0.5 * (s[i] + s[j])
        bridges.append(_refine_bridge(curve.evaluator, lo_a, hi_a, lo_b, hi_b, anchor))
    # merge overlapping refinements (adjacent dips separated by noise)
    bridges.sort()
    merged: list[tuple[float, float, float, float]] = []
    for br in bridges:
        if merged and br[0] <= merged[-1][1] + 1e-9:
            a = merged[-1][0]
            b = br[1]
            merged[-1] = (a, b, curve.evaluator(a), curve.evaluator(b))
        else:
            merged.append(br)
    return ConvexEnvelope(curve, tuple(merged))


def two_component_curve(n: int, k1: int, k2: int, points: int = DEFAULT_CURVE_POINTS) -> FCurve:
    """F along the segment s |S(n,k1)><..| + (1-s) |S(n,k2)><..|."""
    if k1 == k2:
        raise ValidationError("need two distinct components")

    def ev(s: float) -> float:
        return f_value(DickeMixture.two_component(n, k1, k2, s))

    return FCurve.from_evaluator(f"F[{n};{k1},{k2}]", ev, points)


def qudit_segment_curve(n: int, d: int, ca, cb, points: int = DEFAULT_CURVE_POINTS) -> FCurve:
    ca = tuple(ca)
    cb = tuple(cb)
    if ca == cb:
        raise ValidationError("need two distinct components")

    def ev(s: float) -> float:
        m = QuditDickeMixture.from_weights(n, d, {ca: s, cb: 1.0 - s})
        return f_value_qudit(m)

    return FCurve.from_evaluator(f"F[{n};{ca},{cb}]", ev, points)


@lru_cache(maxsize=None)
def _two_component_envelope(n: int, k1: int, k2: int) -> ConvexEnvelope:
    return convex_envelope_1d(two_component_curve(n, k1, k2))


@lru_cache(maxsize=None)
def _qudit_segment_envelope(n: int, d: int, ca: tuple, cb: tuple) -> ConvexEnvelope:
    return convex_envelope_1d(qudit_segment_curve(n, d, ca, cb))


def ree_two_component(n: int, k1: int, k2: int, s: float) -> float:
    """REE of s |S(n,k1)><..| + (1-s) |S(n,k2)><..|: co F along the segment."""
    if not 0.0 <= s <= 1.0:
        raise ValidationError("s must lie in [0, 1]")
    return _two_component_envelope(n, k1, k2).value(s)


def ree_qudit_two_component(n: int, d: int, ca, cb, s: float) -> float:
    if not 0.0 <= s <= 1.0:
        raise ValidationError("s must lie in [0, 1]")
    return _qudit_segment_envelope(n, d, tuple(ca), tuple(cb)).value(s)


# ---------------------------------------------------------------------------
# pure-superposition entanglement eigenvalue and the convex-roof measure


def _lambda_superposition_qubit(q: np.ndarray, n: int) -> float:
    amp = np.sqrt(q)
    coeff = amp * np.sqrt([math.comb(n, k) for k in range(n + 1)])
    ks = np.arange(n + 1)

    def neg_val(theta: float) -> float:
        c, s_ = math.cos(theta), math.sin(theta)
        return -float(np.dot(coeff, c**ks * s_ ** (n - ks)))

    best = _grid_golden_min(neg_val, 0.0, math.pi / 2, 1e-10, coarse=512)
    return -neg_val(best)


def _lambda_superposition_qudit(q: np.ndarray, n: int, d: int, restarts: int, seed: int) -> float:
    comps = np.asarray(compositions(n, d), dtype=float)
    coeff = np.sqrt(q) * np.sqrt(
        [QuditComposition(n, d, tuple(int(x) for x in c)).multinomial for c in comps]
    )

    def value(v: np.ndarray) -> float:
        return float(coeff @ np.prod(v[None, :] ** comps, axis=1))

    def gradient(v: np.ndarray) -> np.ndarray:
        g = np.zeros(d)
        for l in range(d):
            exps = comps.copy()
            k_l = exps[:, l].copy()
            exps[:, l] = np.maximum(k_l - 1.0, 0.0)
            g[l] = float((coeff * k_l) @ np.prod(v[None, :] ** exps, axis=1))
        return g

    # v = sqrt(u) maps the simplex to the nonnegative unit sphere; gradient
    # steps followed by renormalization are projected-gradient ascent there
    best = 0.0
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        u0 = rng.dirichlet(np.ones(d))
        v = np.sqrt(u0)
        val = value(v)
        for _ in range(400):
            g = gradient(v)
            step = 0.5
            improved = False
            while step > 1e-13:
                cand = np.clip(v + step * g, 0.0, None)
                nrm = np.linalg.norm(cand)
                if nrm == 0.0:
                    break
                cand /= nrm
                cval = value(cand)
                if cval > val + 1e-15:
                    v, val = cand, cval
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
        best = max(best, val)
    # level vertices are the degenerate optima for single-term superpositions
    for l in range(d):
        e = np.zeros(d)
        e[l] = 1.0
        best = max(best, value(e))
    return best


def entanglement_eigenvalue_superposition(
    q,
    n: int | None = None,
    d: int = 2,
    restarts: int = 50,
    seed: int = 0,
) -> tuple[float, float]:
    """Eigenvalue Lambda of sum_k sqrt(q_k)|S(n,k)> and the value -2 log2 Lambda.

    Qubit weights index k = 0..n; qudit weights follow the composition order.
    The qubit case is a scanned 1-D maximization over the mixing angle, the
    qudit case a seeded projected-gradient ascent over level populations.
    """
    q = np.asarray(q, dtype=float)
    if q.min() < -1e-12 or abs(q.sum() - 1.0) > 1e-9:
        raise ValidationError("q must be a probability vector")
    q = np.clip(q, 0.0, None)
    if d == 2:
        if n is None:
            n = len(q) - 1
        if len(q) != n + 1:
            raise ValidationError("qubit weights must have length n + 1")
        lam = _lambda_superposition_qubit(q, n)
    else:
        if n is None:
            raise ValidationError("qudit weights need an explicit n")
        if len(q) != len(compositions(n, d)):
            raise ValidationError("qudit weights must follow the composition order")
        lam = _lambda_superposition_qudit(q, n, d, restarts, seed)
    return lam, -2.0 * math.log2(lam)


def e_log_curve(n: int, k1: int, k2: int, points: int = DEFAULT_CURVE_POINTS) -> FCurve:
    """Pure-superposition quantity along a two-component segment."""

    def ev(s: float) -> float:
        q = np.zeros(n + 1)
        q[k1] += s
        q[k2] += 1.0 - s
        return -2.0 * math.log2(_lambda_superposition_qubit(q, n))

    return FCurve.from_evaluator(f"E[{n};{k1},{k2}]", ev, points)


@lru_cache(maxsize=None)
def _e_log_envelope(n: int, k1: int, k2: int) -> ConvexEnvelope:
    # 201 points suffice: the refinement step restores 1e-8 endpoint accuracy
    return convex_envelope_1d(e_log_curve(n, k1, k2, points=201))


def _qudit_e_log_evaluator(n: int, d: int, ca: tuple, cb: tuple):
    from .dicke import _composition_positions  # local import, fixed ordering

    pos = _composition_positions(n, d)

    def ev(s: float) -> float:
        q = np.zeros(len(pos))
        q[pos[ca]] += s
        q[pos[cb]] += 1.0 - s
        return -2.0 * math.log2(_lambda_superposition_qudit(q, n, d, restarts=12, seed=7))

    return ev


@lru_cache(maxsize=None)
def _qudit_e_log_envelope(n: int, d: int, ca: tuple, cb: tuple) -> ConvexEnvelope:
    ev = _qudit_e_log_evaluator(n, d, ca, cb)
    return convex_envelope_1d(FCurve.from_evaluator(f"E[{n};{ca},{cb}]", ev, points=101))


def e_log_mixture(m: DickeMixture | QuditDickeMixture) -> float:
    """Convex roof of -2 log2 Lambda over the mixture's support face."""
    if isinstance(m, DickeMixture):
        support = m.support()
        if len(support) <= 1:
            k = support[0] if support else m.n
            return pure_dicke_ree(DickeIndex(m.n, k))
        if len(support) == 2:
            k1, k2 = support
            return _e_log_envelope(m.n, k1, k2).value(float(m.weights[k1]))

        def values_fn(p):
            q = np.zeros(m.n + 1)
            q[list(support)] = p
            return -2.0 * math.log2(_lambda_superposition_qubit(q, m.n))

        val, _ = _co_on_face(values_fn, np.asarray(m.weights)[list(support)])
        return val
    if isinstance(m, QuditDickeMixture):
        support = m.support()
        if len(support) <= 1:
            return pure_dicke_ree(support[0])
        if len(support) == 2:
            ca, cb = support[0].counts, support[1].counts
            from .dicke import _composition_positions

            s = float(m.weights[_composition_positions(m.n, m.d)[ca]])
            return _qudit_e_log_envelope(m.n, m.d, ca, cb).value(s)
        raise ValidationError("qudit convex roof implemented for support size <= 2")
    raise TypeError("expected a DickeMixture or QuditDickeMixture")


# ---------------------------------------------------------------------------
# envelopes over larger support faces (grid LP, documented approximate)


def _co_on_face(values_fn, p_face: np.ndarray, resolution: int = 24):
    """Approximate lower convex envelope at one point of a simplex face.

    Grid points q on the face (plus the query point itself) become LP atoms;
    minimizing sum w_i f(q_i) subject to sum w_i q_i = p is the envelope
    restricted to that grid. Returns (value, [(weight, q_i), ...]).
    """
    m = len(p_face)
    grid = [np.asarray(c, dtype=float) / resolution for c in compositions(resolution, m)]
    grid.append(np.asarray(p_face, dtype=float))
    A = np.stack(grid, axis=1)
    costs = np.array([values_fn(q) for q in grid])
    res = linprog(costs, A_eq=A, b_eq=np.asarray(p_face, dtype=float), method="highs")
    if not res.success:
        raise RuntimeError(f"face envelope LP failed: {res.message}")
    atoms = [(float(w), grid[i]) for i, w in enumerate(res.x) if w > 1e-12]
    return float(res.fun), atoms


def mixture_ree(m: DickeMixture | QuditDickeMixture) -> tuple[float, dict]:
    """REE of a diagonal symmetric mixture: co F over its support face.

    Two-component support is exact; wider support uses the grid LP envelope
    and reports method "face-lp-approx".
    """
    if isinstance(m, DickeMixture):
        support = m.support()
        if len(support) <= 1:
            k = support[0] if support else m.n
            return pure_dicke_ree(DickeIndex(m.n, k)), {"method": "closed-form"}
        if len(support) == 2:
            k1, k2 = support
            env = _two_component_envelope(m.n, k1, k2)
            s = float(m.weights[k1])
            method = "closed-form" if env.equals_curve else "envelope"
            return env.value(s), {"method": method, "bridges": env.bridges}

        def values_fn(p):
            q = np.zeros(m.n + 1)
            q[list(support)] = p
            return f_value(DickeMixture(m.n, q))

        p_face = np.asarray(m.weights)[list(support)]
        val, atoms = _co_on_face(values_fn, p_face)
        direct = f_value(m)
        if direct <= val + 1e-9:
            return direct, {"method": "closed-form", "note": "locally convex at p"}
        return val, {"method": "face-lp-approx", "atoms": atoms}
    if isinstance(m, QuditDickeMixture):
        support = m.support()
        if len(support) <= 1:
            return pure_dicke_ree(support[0]), {"method": "closed-form"}
        if len(support) == 2:
            ca, cb = support[0].counts, support[1].counts
            from .dicke import _composition_positions

            env = _qudit_segment_envelope(m.n, m.d, ca, cb)
            s = float(m.weights[_composition_positions(m.n, m.d)[ca]])
            method = "closed-form" if env.equals_curve else "envelope"
            return env.value(s), {"method": method, "bridges": env.bridges}

        from .dicke import composition_index

        support_idx = [composition_index(c) for c in support]

        def values_fn(p):
            w = np.zeros(len(m.weights))
            w[support_idx] = p
            return f_value_qudit(QuditDickeMixture(m.n, m.d, w))

        p_face = np.asarray(m.weights)[support_idx]
        val, atoms = _co_on_face(values_fn, p_face)
        direct = f_value_qudit(m)
        if direct <= val + 1e-9:
            return direct, {"method": "closed-form", "note": "locally convex at p"}
        return val, {"method": "face-lp-approx", "atoms": atoms}
    raise TypeError("expected a DickeMixture or QuditDickeMixture")


def closest_separable_dicke(m: DickeMixture | QuditDickeMixture):
    """Closest separable diagonal state realizing co F, plus envelope metadata.

    A single dephased state sigma(theta*) when F is locally convex at the
    mixture, otherwise the convex combination of dephased states at the
    supporting segment's endpoints.
    """
    if isinstance(m, DickeMixture):
        n = m.n
        support = m.support()
        if len(support) == 2:
            k1, k2 = support
            env = _two_component_envelope(n, k1, k2)
            s = float(m.weights[k1])
            for a, b, fa, fb in env.bridges:
                if a < s < b:
                    wa = (b - s) / (b - a)
                    atoms = []
                    sigma_w = np.zeros(n + 1)
                    for w_at, point in ((wa, a), (1.0 - wa, b)):
                        comp = DickeMixture.two_component(n, k1, k2, point)
                        th = theta_star(comp)
                        sig = dephased_separable_sigma(th, n)
                        sigma_w += w_at * sig.weights
                        atoms.append({"weight": w_at, "theta": th.theta, "s": point})
                    info = {"method": "envelope-bridge", "atoms": atoms, "value": env.value(s)}
                    return DickeMixture(n, sigma_w), info
            th = theta_star(m)
            info = {"method": "stationary-point", "theta": th.theta, "value": env.value(s)}
            return dephased_separable_sigma(th, n), info
        if len(support) <= 1:
            th = theta_star(m)
            return dephased_separable_sigma(th, n), {
                "method": "stationary-point",
                "theta": th.theta,
                "value": f_value(m),
            }
        value, info = mixture_ree(m)
        if info["method"] == "face-lp-approx":
            sigma_w = np.zeros(n + 1)
            atoms = []
            for w_at, q_face in info["atoms"]:
                q = np.zeros(n + 1)
                q[list(support)] = q_face
                th = theta_star(DickeMixture(n, q))
                sigma_w += w_at * dephased_separable_sigma(th, n).weights
                atoms.append({"weight": w_at, "theta": th.theta})
            sigma_w /= sigma_w.sum()
            return DickeMixture(n, sigma_w), {
                "method": "face-lp-approx",
                "atoms": atoms,
                "value": value,
            }
        th = theta_star(m)
        return dephased_separable_sigma(th, n), {
            "method": "stationary-point",
            "theta": th.theta,
            "value": value,
        }

    if isinstance(m, QuditDickeMixture):
        from .dicke import _composition_positions

        support = m.support()
        if len(support) == 2:
            ca, cb = support[0].counts, support[1].counts
            env = _qudit_segment_envelope(m.n, m.d, ca, cb)
            s = float(m.weights[_composition_positions(m.n, m.d)[ca]])
            for a, b, fa, fb in env.bridges:
                if a < s < b:
                    wa = (b - s) / (b - a)
                    weights = np.zeros(len(m.weights))
                    atoms = []
                    for w_at, point in ((wa, a), (1.0 - wa, b)):
                        comp = QuditDickeMixture.from_weights(
                            m.n, m.d, {ca: point, cb: 1.0 - point}
                        )
                        u = u_bar(comp)
                        sig = dephased_separable_sigma_qudit(u, m.n, m.d)
                        weights += w_at * sig.weights
                        atoms.append({"weight": w_at, "u": u.tolist(), "s": point})
                    info = {"method": "envelope-bridge", "atoms": atoms, "value": env.value(s)}
                    return QuditDickeMixture(m.n, m.d, weights), info
            u = u_bar(m)
            info = {"method": "stationary-point", "u": u.tolist(), "value": env.value(s)}
            return dephased_separable_sigma_qudit(u, m.n, m.d), info
        u = u_bar(m)
        return dephased_separable_sigma_qudit(u, m.n, m.d), {
            "method": "stationary-point",
            "u": u.tolist(),
            "value": f_value_qudit(m),
        }
    raise TypeError("expected a DickeMixture or QuditDickeMixture")


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def curve_csv(curve: FCurve, envelope: ConvexEnvelope | None = None, extra: dict | None = None) -> str:
    """CSV export (s, F, coF, extra columns), 9 significant digits."""
    if envelope is None:
        envelope = convex_envelope_1d(curve)
    header = ["s", "F", "coF"] + (list(extra) if extra else [])
    lines = [",".join(header)]
    for i, s in enumerate(curve.s):
        row = [_fmt(float(s)), _fmt(float(curve.values[i])), _fmt(envelope.value(float(s)))]
        if extra:
            row.extend(_fmt(float(col[i])) for col in extra.values())
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"

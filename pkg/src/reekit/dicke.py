"""Symmetric (Dicke) states for qubits and qudits, and compact diagonal mixtures.

Convention: ``DickeIndex(n, k)`` labels the equal-amplitude symmetrization of
k zeros and n-k ones, so the three-qubit W state is ``DickeIndex(3, 2)``.
Qudit compositions are enumerated in lexicographically descending order; that
order fixes the indexing of ``QuditDickeMixture`` weights and of every
serialized weight vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .qcore import (
    DensityOperator,
    HilbertLayout,
    ProductPureState,
    PureStateVector,
    ValidationError,
)

__all__ = [
    "DickeIndex",
    "QuditComposition",
    "DickeMixture",
    "QuditDickeMixture",
    "SymmetricPureState",
    "compositions",
    "composition_index",
    "dicke_state_vector",
    "qudit_dicke_state_vector",
    "mixture_density",
    "partial_trace_dicke",
    "collapse_copies",
    "product_overlap",
    "symmetric_overlaps",
    "mixture_to_json",
    "mixture_from_json",
]

_WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class DickeIndex:
    """Index (n, k) of the symmetric state with k zeros among n qubits."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("party count must be positive")
        if not 0 <= self.k <= self.n:
            raise ValidationError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def count(self) -> int:
        return math.comb(self.n, self.k)


@dataclass(frozen=True)
class QuditComposition:
    """Occupation numbers of the d levels among n parties, summing to n."""

    n: int
    d: int
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if self.d < 2:
            raise ValidationError("local dimension must be >= 2")
        if len(counts) != self.d:
            raise ValidationError(f"composition needs {self.d} entries, got {len(counts)}")
        if any(c < 0 for c in counts):
            raise ValidationError("composition entries must be nonnegative")
        if sum(counts) != self.n:
            raise ValidationError(f"composition entries must sum to n={self.n}")
        object.__setattr__(self, "counts", counts)

    @property
    def multinomial(self) -> int:
        out = math.factorial(self.n)
        for c in self.counts:
            out //= math.factorial(c)
        return out


@lru_cache(maxsize=None)
def compositions(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All length-d compositions of n, lexicographically descending."""
    if d == 1:
        return ((n,),)
    out = []
    for first in range(n, -1, -1):
        for rest in compositions(n - first, d - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _composition_positions(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {c: i for i, c in enumerate(compositions(n, d))}


def composition_index(c: QuditComposition) -> int:
    """Position of a composition in the fixed enumeration order."""
    return _composition_positions(c.n, c.d)[c.counts]


@dataclass(frozen=True)
class DickeMixture:
    """Diagonal mixture sum_k p_k |S(n,k)><S(n,k)|, weights indexed by k."""

    n: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.n + 1,):
            raise ValidationError(f"need {self.n + 1} weights, got shape {w.shape}")
        if w.min() < -1e-12:
            raise ValidationError("mixture weights must be nonnegative")
        if abs(w.sum() - 1.0) > _WEIGHT_SUM_TOL:
            raise ValidationError(f"mixture weights sum to {w.sum()!r}, expected 1")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def vertex(cls, idx: DickeIndex) -> "DickeMixture":
        w = np.zeros(idx.n + 1)
        w[idx.k] = 1.0
        return cls(idx.n, w)

    @classmethod
    def two_component(cls, n: int, k1: int, k2: int, s: float) -> "DickeMixture":
        if k1 == k2:
            raise ValidationError("two-component mixture needs distinct indices")
        if not 0.0 <= s <= 1.0:
            raise ValidationError("mixing weight must lie in [0, 1]")
        w = np.zeros(n + 1)
        w[k1] += s
        w[k2] += 1.0 - s
        return cls(n, w)

    def support(self) -> tuple[int, ...]:
        return tuple(int(k) for k in np.nonzero(self.weights > 0.0)[0])


@dataclass(frozen=True)
class QuditDickeMixture:
    """Diagonal mixture over qudit Dicke states, weights in composition order."""

    n: int
    d: int
    weights: np.ndarray

    def __post_init__(self):
        comps = compositions(self.n, self.d)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(comps),):
            raise ValidationError(f"need {len(comps)} weights, got shape {w.shape}")
        if w.min() < -1e-12:
            raise ValidationError("mixture weights must be nonnegative")
        if abs(w.sum() - 1.0) > _WEIGHT_SUM_TOL:
            raise ValidationError(f"mixture weights sum to {w.sum()!r}, expected 1")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_weights(cls, n: int, d: int, weight_map: dict[tuple[int, ...], float]) -> "QuditDickeMixture":
        pos = _composition_positions(n, d)
        w = np.zeros(len(pos))
        for counts, value in weight_map.items():
            w[pos[tuple(counts)]] = value
        return cls(n, d, w)

    @classmethod
    def vertex(cls, c: QuditComposition) -> "QuditDickeMixture":
        return cls.from_weights(c.n, c.d, {c.counts: 1.0})

    def support(self) -> tuple[QuditComposition, ...]:
        comps = compositions(self.n, self.d)
        return tuple(
            QuditComposition(self.n, self.d, comps[i])
            for i in np.nonzero(self.weights > 0.0)[0]
        )


@dataclass(frozen=True)
class SymmetricPureState:
    """Superposition sum_kvec a_kvec |S(n,kvec)>, amplitudes in composition order."""

    n: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        comps = compositions(self.n, self.d)
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (len(comps),):
            raise ValidationError(f"need {len(comps)} amplitudes, got shape {a.shape}")
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValidationError("symmetric state must be normalized")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    def amplitude(self, counts) -> complex:
        return complex(self.amplitudes[_composition_positions(self.n, self.d)[tuple(counts)]])

    def state_vector(self) -> PureStateVector:
        basis = _qudit_dicke_basis(self.n, self.d)
        return PureStateVector(HilbertLayout.qudits(self.n, self.d), self.amplitudes @ basis)


@lru_cache(maxsize=None)
def _qubit_dicke_basis(n: int) -> np.ndarray:
    """Rows k = 0..n hold the 2^n amplitudes of |S(n,k)>; level 0 is |0>."""
    basis = np.zeros((n + 1, 2**n))
    for idx in range(2**n):
        ones = bin(idx).count("1")
        k = n - ones
        basis[k, idx] = 1.0
    for k in range(n + 1):
        basis[k] /= math.sqrt(math.comb(n, k))
    basis.setflags(write=False)
    return basis


@lru_cache(maxsize=None)
def _qudit_dicke_basis(n: int, d: int) -> np.ndarray:
    """Rows follow the composition order; columns index level strings."""
    comps = compositions(n, d)
    pos = _composition_positions(n, d)
    basis = np.zeros((len(comps), d**n))
    layout = HilbertLayout.qudits(n, d)
    for idx in range(d**n):
        counts = [0] * d
        for lev in layout.basis_levels(idx):
            counts[lev] += 1
        basis[pos[tuple(counts)], idx] = 1.0
    for i, c in enumerate(comps):
        basis[i] /= math.sqrt(QuditComposition(n, d, c).multinomial)
    basis.setflags(write=False)
    return basis


def dicke_state_vector(idx: DickeIndex) -> PureStateVector:
    """Equal-amplitude symmetrization of k zeros and n-k ones in the full 2^n space."""
    amps = _qubit_dicke_basis(idx.n)[idx.k].astype(complex)
    return PureStateVector(HilbertLayout.qubits(idx.n), amps)


def qudit_dicke_state_vector(c: QuditComposition) -> PureStateVector:
    amps = _qudit_dicke_basis(c.n, c.d)[composition_index(c)].astype(complex)
    return PureStateVector(HilbertLayout.qudits(c.n, c.d), amps)


def mixture_density(m: DickeMixture | QuditDickeMixture) -> DensityOperator:
    """Embed a compact diagonal mixture into the full product space."""
    if isinstance(m, DickeMixture):
        basis = _qubit_dicke_basis(m.n)
        layout = HilbertLayout.qubits(m.n)
    elif isinstance(m, QuditDickeMixture):
        basis = _qudit_dicke_basis(m.n, m.d)
        layout = HilbertLayout.qudits(m.n, m.d)
    else:
        raise TypeError("expected a DickeMixture or QuditDickeMixture")
    mat = (basis.T * m.weights) @ basis
    return DensityOperator(layout, mat.astype(complex), validate=False)


def partial_trace_dicke(m: DickeMixture, drop_count: int = 1) -> DickeMixture:
    """Trace out ``drop_count`` parties, staying in the compact representation.

    One step maps p_k to (n-k)/n at S(n-1,k) plus k/n at S(n-1,k-1); iterating
    keeps the mixture diagonal in the shrinking Dicke basis.
    """
    drop_count = int(drop_count)
    if drop_count < 1:
        raise ValidationError("drop_count must be positive")
    if drop_count >= m.n:
        raise ValidationError("cannot trace out all parties")
    w = np.asarray(m.weights, dtype=float)
    n = m.n
    for _ in range(drop_count):
        out = np.zeros(n)
        for k in range(n + 1):
            if w[k] == 0.0:
                continue
            if k < n:
                out[k] += w[k] * (n - k) / n
            if k > 0:
                out[k - 1] += w[k] * k / n
        w = out
        n -= 1
    return DickeMixture(n, w)


def _copy_zero_counts(counts: tuple[int, ...], m: int) -> tuple[int, ...]:
    """Per-copy zero counts implied by a composition over d = 2^m collapsed levels.

    Level l encodes the bits (b_1 .. b_m) of one party across the m copies,
    copy 1 most significant; copy c sees a zero wherever its bit vanishes.
    """
    ks = []
    for c in range(m):
        bit = m - 1 - c
        ks.append(sum(cnt for lev, cnt in enumerate(counts) if not (lev >> bit) & 1))
    return tuple(ks)


def collapse_copies(m_copies: int, base) -> SymmetricPureState | QuditDickeMixture:
    """Relabel m copies of a symmetric qubit state as one qudit state with d = 2^m.

    Pure symmetric input (a ``DickeIndex`` or an amplitude vector over k) is
    re-expanded in the qudit Dicke basis for any m; a ``DickeMixture`` stays a
    diagonal qudit mixture only under the identity relabeling m = 1.
    """
    m_copies = int(m_copies)
    if m_copies < 1:
        raise ValidationError("copy count must be positive")
    if isinstance(base, DickeMixture):
        if m_copies != 1:
            raise ValidationError(
                "copies of a mixture are not diagonal in the qudit Dicke basis; "
                "collapse the pure components instead"
            )
        weight_map = {(k, base.n - k): float(base.weights[k]) for k in range(base.n + 1)}
        return QuditDickeMixture.from_weights(base.n, 2, weight_map)

    if isinstance(base, DickeIndex):
        n = base.n
        amps = np.zeros(n + 1, dtype=complex)
        amps[base.k] = 1.0
    else:
        amps = np.asarray(base, dtype=complex)
        if amps.ndim != 1 or len(amps) < 2:
            raise ValidationError("expected amplitudes over k = 0..n")
        n = len(amps) - 1
        if abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise ValidationError("symmetric amplitudes must be normalized")

    d = 2**m_copies
    comps = compositions(n, d)
    out = np.zeros(len(comps), dtype=complex)
    for i, counts in enumerate(comps):
        coeff = 1.0 + 0.0j
        for k_c in _copy_zero_counts(counts, m_copies):
            coeff *= amps[k_c] / math.sqrt(math.comb(n, k_c))
        if coeff != 0.0:
            out[i] = coeff * math.sqrt(QuditComposition(n, d, counts).multinomial)
    return SymmetricPureState(n, d, out)


def symmetric_overlaps(phi: ProductPureState, d: int | None = None) -> np.ndarray:
    """All inner products <S(n,kvec)|phi>, in composition order.

    Dynamic programming over parties sums prod_j v_j[s_j] over the strings
    realizing each composition; dividing by sqrt(multinomial) yields the
    permanent-style overlap without enumerating permutations.
    """
    dims = set(phi.layout.party_dims)
    if len(dims) != 1:
        raise ValidationError("symmetric overlaps require identical local dimensions")
    dloc = dims.pop()
    if d is not None and d != dloc:
        raise ValidationError(f"layout has local dimension {dloc}, not {d}")
    n = phi.layout.n_parties
    pos = _composition_positions(n, dloc)

    current: dict[tuple[int, ...], complex] = {(0,) * dloc: 1.0 + 0.0j}
    for vec in phi.factors:
        nxt: dict[tuple[int, ...], complex] = {}
        for counts, amp in current.items():
            for lev in range(dloc):
                v = vec[lev]
                if v == 0.0:
                    continue
                key = counts[:lev] + (counts[lev] + 1,) + counts[lev + 1 :]
                nxt[key] = nxt.get(key, 0.0 + 0.0j) + amp * v
        current = nxt

    out = np.zeros(len(pos), dtype=complex)
    for counts, amp in current.items():
        c = QuditComposition(n, dloc, counts)
        out[pos[counts]] = amp / math.sqrt(c.multinomial)
    return out


def product_overlap(c: DickeIndex | QuditComposition, phi: ProductPureState) -> complex:
    """Exact inner product of a (qudit) Dicke state with a product state."""
    if isinstance(c, DickeIndex):
        target = QuditComposition(c.n, 2, (c.k, c.n - c.k))
    elif isinstance(c, QuditComposition):
        target = c
    else:
        raise TypeError("expected a DickeIndex or QuditComposition")
    if phi.layout.n_parties != target.n:
        raise ValidationError("party counts differ")
    overlaps = symmetric_overlaps(phi, d=target.d)
    return complex(overlaps[composition_index(target)])


def mixture_to_json(m: DickeMixture | QuditDickeMixture) -> dict:
    """Serialize as {n, d, weights} with weights in the fixed composition order."""
    if isinstance(m, DickeMixture):
        # composition (k, n-k) order is k descending
        weights = [float(m.weights[k]) for k in range(m.n, -1, -1)]
        return {"n": m.n, "d": 2, "weights": weights}
    if isinstance(m, QuditDickeMixture):
        return {"n": m.n, "d": m.d, "weights": [float(w) for w in m.weights]}
    raise TypeError("expected a DickeMixture or QuditDickeMixture")


def mixture_from_json(data: dict) -> DickeMixture | QuditDickeMixture:
    try:
        n, d = int(data["n"]), int(data["d"])
        weights = np.asarray(data["weights"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed mixture JSON: {exc}") from exc
    if d == 2:
        if weights.shape != (n + 1,):
            raise ValidationError(f"need {n + 1} weights for a qubit mixture")
        return DickeMixture(n, weights[::-1].copy())
    return QuditDickeMixture(n, d, weights)

"""Dense complex Hermitian linear algebra and quantum primitives.

Conventions used throughout the package:

* party 0 is the most significant tensor factor (numpy ``kron`` order);
* all entropic quantities are reported in bits (log base 2), internal
  computations use natural logs with a single final conversion;
* density operators are validated on construction, operations assume
  validity and do not re-check.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from functools import reduce

import numpy as np

__all__ = [
    "ValidationError",
    "HilbertLayout",
    "PureStateVector",
    "DensityOperator",
    "ProductPureState",
    "hermitian_eigensystem",
    "von_neumann_entropy",
    "relative_entropy",
    "partial_trace",
    "partial_transpose",
    "negativity",
    "tensor_product",
    "density_to_json",
    "density_from_json",
    "haar_random_pure",
    "haar_random_product",
    "random_density",
]

LN2 = math.log(2.0)

# Eigenvalues below SUPPORT_CUTOFF * lambda_max count as zero; relative
# entropy is +inf once rho puts more than SUPPORT_LEAK_TOL weight there.
SUPPORT_CUTOFF = 1e-12
SUPPORT_LEAK_TOL = 1e-9

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_TOL = 1e-10
_NORM_TOL = 1e-12


class ValidationError(ValueError):
    """Raised when an input violates a documented invariant."""


@dataclass(frozen=True)
class HilbertLayout:
    """Local dimensions of a multi-party Hilbert space."""

    party_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.party_dims)
        if len(dims) == 0:
            raise ValidationError("layout needs at least one party")
        if any(d < 2 for d in dims):
            raise ValidationError(f"every party dimension must be >= 2, got {dims}")
        object.__setattr__(self, "party_dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.party_dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.party_dims)

    @classmethod
    def qubits(cls, n: int) -> "HilbertLayout":
        return cls((2,) * n)

    @classmethod
    def qudits(cls, n: int, d: int) -> "HilbertLayout":
        return cls((d,) * n)

    def basis_index(self, levels) -> int:
        """Flat index of the basis string |l_0 l_1 ... >, party 0 most significant."""
        idx = 0
        for lev, dim in zip(levels, self.party_dims, strict=True):
            if not 0 <= lev < dim:
                raise ValidationError(f"level {lev} out of range for dimension {dim}")
            idx = idx * dim + int(lev)
        return idx

    def basis_levels(self, index: int) -> tuple[int, ...]:
        levels = []
        for dim in reversed(self.party_dims):
            levels.append(index % dim)
            index //= dim
        return tuple(reversed(levels))


def _as_complex_array(values, shape_hint=None) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if shape_hint is not None and arr.shape != shape_hint:
        raise ValidationError(f"expected shape {shape_hint}, got {arr.shape}")
    return arr


@dataclass(frozen=True)
class PureStateVector:
    """Unit vector on a multi-party space."""

    layout: HilbertLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_complex_array(self.amplitudes, (self.layout.total_dim,))
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValidationError(f"state vector norm {norm!r} differs from 1 beyond {_NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def density(self) -> "DensityOperator":
        mat = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityOperator(self.layout, mat, validate=False)

    def overlap(self, other: "PureStateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityOperator:
    """Unit-trace positive Hermitian operator on a multi-party space."""

    layout: HilbertLayout
    matrix: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        dim = self.layout.total_dim
        mat = _as_complex_array(self.matrix, (dim, dim))
        if validate:
            if np.abs(mat - mat.conj().T).max() > _HERM_TOL:
                raise ValidationError("matrix is not Hermitian within 1e-12")
            tr = mat.trace()
            if abs(tr - 1.0) > _TRACE_TOL:
                raise ValidationError(f"trace {tr!r} differs from 1 beyond 1e-12")
            lo = np.linalg.eigvalsh(mat)[0]
            if lo < -_PSD_TOL:
                raise ValidationError(f"minimum eigenvalue {lo:.3e} below -1e-10")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.layout.total_dim


@dataclass(frozen=True)
class ProductPureState:
    """Fully product pure state given by one unit vector per party."""

    layout: HilbertLayout
    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.factors) != self.layout.n_parties:
            raise ValidationError("one factor per party required")
        frozen = []
        for vec, dim in zip(self.factors, self.layout.party_dims):
            arr = _as_complex_array(vec, (dim,))
            if abs(np.linalg.norm(arr) - 1.0) > _NORM_TOL:
                raise ValidationError("every factor must have unit norm")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "factors", tuple(frozen))

    def vector(self) -> PureStateVector:
        amps = reduce(np.kron, self.factors)
        return PureStateVector(self.layout, amps)

    def amplitudes(self) -> np.ndarray:
        return reduce(np.kron, self.factors)

    def projector(self) -> np.ndarray:
        amps = self.amplitudes()
        return np.outer(amps, amps.conj())


def hermitian_eigensystem(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    H = np.asarray(matrix, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {H.shape}")
    if np.abs(H - H.conj().T).max() > 1e-10:
        raise ValidationError("input is not Hermitian within 1e-10")
    w, V = np.linalg.eigh(H)
    return w, V


def von_neumann_entropy(rho: DensityOperator) -> float:
    """S(rho) = -Tr rho log2 rho, with 0 log 0 = 0."""
    w = np.linalg.eigvalsh(rho.matrix)
    w = w[w > 0.0]
    s = -float(np.dot(w, np.log(w))) / LN2
    return max(s, 0.0)


def _support_split(sigma_mat: np.ndarray):
    """Eigen-decompose sigma and split the spectrum into support and null space."""
    mu, V = np.linalg.eigh(sigma_mat)
    cutoff = SUPPORT_CUTOFF * max(mu[-1], 0.0)
    support = mu > cutoff
    return mu, V, support


def _relative_entropy_raw(rho_mat: np.ndarray, sigma_mat: np.ndarray) -> float:
    """Relative entropy in bits between raw matrices, assumed valid states."""
    mu, V, support = _support_split(sigma_mat)
    # populations of rho in sigma's eigenbasis
    p = np.einsum("ji,jk,ki->i", V.conj(), rho_mat, V).real
    p = np.clip(p, 0.0, None)
    leak = float(p[~support].sum())
    if leak > SUPPORT_LEAK_TOL:
        return math.inf
    w = np.linalg.eigvalsh(rho_mat)
    w = w[w > 0.0]
    tr_rho_log_rho = float(np.dot(w, np.log(w)))
    tr_rho_log_sigma = float(np.dot(p[support], np.log(mu[support])))
    return max((tr_rho_log_rho - tr_rho_log_sigma) / LN2, 0.0)


def relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> float:
    """S(rho || sigma) in bits; +inf when rho leaks outside sigma's support."""
    if rho.layout != sigma.layout:
        raise ValidationError("relative entropy requires matching layouts")
    return _relative_entropy_raw(rho.matrix, sigma.matrix)


def _tensorize(mat: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    n = len(dims)
    return mat.reshape(dims + dims), n


def partial_trace(rho: DensityOperator, drop) -> DensityOperator:
    """Trace out the parties listed in ``drop``."""
    n = rho.layout.n_parties
    drop = sorted(set(int(i) for i in drop))
    if not drop:
        raise ValidationError("drop set must be nonempty")
    if any(i < 0 or i >= n for i in drop):
        raise ValidationError("drop indices out of range")
    if len(drop) == n:
        raise ValidationError("cannot trace out every party")
    dims = rho.layout.party_dims
    tensor = rho.matrix.reshape(dims + dims)
    # trace highest dropped axis first so earlier axis numbers stay valid
    remaining = n
    for i in reversed(drop):
        tensor = np.trace(tensor, axis1=i, axis2=remaining + i)
        remaining -= 1
    keep_dims = tuple(dims[i] for i in range(n) if i not in drop)
    new_dim = math.prod(keep_dims)
    mat = tensor.reshape(new_dim, new_dim)
    return DensityOperator(HilbertLayout(keep_dims), mat, validate=False)


def partial_transpose(rho: DensityOperator, parties) -> np.ndarray:
    """Matrix of the partial transpose of rho over the given parties."""
    n = rho.layout.n_parties
    parties = sorted(set(int(i) for i in parties))
    if any(i < 0 or i >= n for i in parties):
        raise ValidationError("party indices out of range")
    dims = rho.layout.party_dims
    tensor = rho.matrix.reshape(dims + dims)
    axes = list(range(2 * n))
    for i in parties:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    dim = rho.layout.total_dim
    return tensor.transpose(axes).reshape(dim, dim)


def negativity(rho: DensityOperator, bipartition) -> float:
    """Sum of |negative eigenvalues| of the partial transpose over ``bipartition``."""
    parts = set(int(i) for i in bipartition)
    if not parts or len(parts) >= rho.layout.n_parties:
        raise ValidationError("bipartition must be a nonempty proper subset of parties")
    w = np.linalg.eigvalsh(partial_transpose(rho, parts))
    return float(-w[w < 0.0].sum()) + 0.0


def tensor_product(a, b):
    """Kronecker composition with layout concatenation."""
    if isinstance(a, PureStateVector) and isinstance(b, PureStateVector):
        layout = HilbertLayout(a.layout.party_dims + b.layout.party_dims)
        return PureStateVector(layout, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        layout = HilbertLayout(a.layout.party_dims + b.layout.party_dims)
        return DensityOperator(layout, np.kron(a.matrix, b.matrix), validate=False)
    if isinstance(a, ProductPureState) and isinstance(b, ProductPureState):
        layout = HilbertLayout(a.layout.party_dims + b.layout.party_dims)
        return ProductPureState(layout, a.factors + b.factors)
    raise TypeError("tensor_product requires two states or two operators of the same kind")


def density_to_json(rho: DensityOperator) -> dict:
    """JSON form: party_dims plus the row-major matrix as [re, im] pairs."""
    flat = rho.matrix.reshape(-1)
    return {
        "party_dims": list(rho.layout.party_dims),
        "matrix": [[float(z.real), float(z.imag)] for z in flat],
    }


def density_from_json(data: dict) -> DensityOperator:
    try:
        layout = HilbertLayout(tuple(data["party_dims"]))
        pairs = data["matrix"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed density JSON: {exc}") from exc
    dim = layout.total_dim
    if len(pairs) != dim * dim:
        raise ValidationError(f"matrix has {len(pairs)} entries, expected {dim * dim}")
    flat = np.array([complex(re, im) for re, im in pairs])
    return DensityOperator(layout, flat.reshape(dim, dim))


def haar_random_pure(layout: HilbertLayout, rng: np.random.Generator) -> PureStateVector:
    z = rng.standard_normal(layout.total_dim) + 1j * rng.standard_normal(layout.total_dim)
    return PureStateVector(layout, z / np.linalg.norm(z))


def haar_random_product(layout: HilbertLayout, rng: np.random.Generator) -> ProductPureState:
    factors = []
    for d in layout.party_dims:
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        factors.append(z / np.linalg.norm(z))
    return ProductPureState(layout, tuple(factors))


def random_density(layout: HilbertLayout, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    dim = layout.total_dim
    r = dim if rank is None else int(rank)
    G = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    mat = G @ G.conj().T
    mat /= mat.trace().real
    mat = 0.5 * (mat + mat.conj().T)
    return DensityOperator(layout, mat, validate=False)

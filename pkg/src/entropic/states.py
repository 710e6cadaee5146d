"""Density matrices together with their block marginals and tomograms.

An ``N x N`` matrix with ``N = n * m`` is viewed as an ``n x n`` grid of
``m x m`` blocks ``R[k, l]``. The first marginal has entries ``Tr R[k, l]``,
the second is ``sum_k R[k, k]``. For an actual tensor product these are the
two partial traces, but the maps are defined for any matrix, including the
density matrix of a single qudit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classical import NEG_CLIP, probability_vector
from .errors import (
    DimensionMismatch,
    EntropicError,
    NotHermitian,
    ShapeMismatch,
    TraceNotOne,
    WrongLabelScheme,
)
from .linalg import (
    HERMITIAN_TOL,
    as_matrix,
    clip_spectrum,
    hermitian_eig,
    hermiticity_error,
    matrix_to_obj,
)
from .shapes import BipartitionShape, as_shape

TRACE_TOL = 1e-9
TOMOGRAM_SUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated state: Hermitian, PSD up to clipping, unit trace.

    ``eigenvalues`` holds the clipped spectrum in ascending order.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.sum(self.eigenvalues > tol))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def validate_density(M) -> DensityMatrix:
    """Validate a state matrix; raise on the first failed property.

    Hermiticity is checked first, then positivity, then unit trace.
    """
    if isinstance(M, DensityMatrix):
        return M
    a = as_matrix(M)
    err = hermiticity_error(a)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"max |rho - rho^dagger| = {err:.3e} exceeds {HERMITIAN_TOL:g}")
    a = 0.5 * (a + a.conj().T)
    lam = clip_spectrum(hermitian_eig(a, check=False).eigenvalues)
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace is {tr!r}")
    a.setflags(write=False)
    lam.setflags(write=False)
    return DensityMatrix(a, lam)


def as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else validate_density(rho)


def _raw(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)


def zero_pad(rho, target_dim: int) -> DensityMatrix:
    """Embed ``rho`` as the top-left block of a ``target_dim`` square zero matrix."""
    rho = as_density(rho)
    N = rho.dim
    if target_dim < N:
        raise DimensionMismatch(f"target_dim {target_dim} < dim {N}")
    if target_dim == N:
        return rho
    out = np.zeros((target_dim, target_dim), dtype=np.complex128)
    out[:N, :N] = rho.matrix
    lam = np.concatenate([np.zeros(target_dim - N), rho.eigenvalues])
    lam.sort()
    out.setflags(write=False)
    lam.setflags(write=False)
    return DensityMatrix(out, lam)


def _blocks(a: np.ndarray, shape: BipartitionShape) -> np.ndarray:
    if a.shape[0] != shape.size:
        raise ShapeMismatch(f"shape {shape.n} x {shape.m} does not match dim {a.shape[0]}")
    # blocks[j, k, j2, k2] = a[j*m + k, j2*m + k2]
    return a.reshape(shape.n, shape.m, shape.n, shape.m)


def marginal_matrices(a, shape) -> tuple[np.ndarray, np.ndarray]:
    """Unvalidated ``(R1, R2)`` for a raw square matrix."""
    b = _blocks(np.asarray(a), as_shape(shape))
    return np.einsum("jkik->ji", b), np.einsum("jkjl->kl", b)


def block_marginal_first(rho, shape) -> DensityMatrix:
    """``n x n`` matrix of block traces ``Tr R[k, l]``."""
    return validate_density(marginal_matrices(_raw(as_density(rho)), shape)[0])


def block_marginal_second(rho, shape) -> DensityMatrix:
    """``m x m`` sum of the diagonal blocks ``sum_k R[k, k]``."""
    return validate_density(marginal_matrices(_raw(as_density(rho)), shape)[1])


def conjugate_matrix(a, u) -> np.ndarray:
    a = np.asarray(a)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != a.shape:
        raise DimensionMismatch(f"unitary {u.shape} vs state {a.shape}")
    out = u @ a @ u.conj().T
    return 0.5 * (out + out.conj().T)


def conjugate(rho, u) -> DensityMatrix:
    """``u rho u^dagger``."""
    return validate_density(conjugate_matrix(_raw(as_density(rho)), u))


# ---------------------------------------------------------------------------
# tomograms


def spin_labels(N: int) -> tuple[str, ...]:
    """Spin projections ``-j, ..., j`` for ``j = (N - 1) / 2``, ascending."""
    j = Fraction(N - 1, 2)
    return tuple(str(-j + i) for i in range(N))


def pair_labels(shape) -> tuple[str, ...]:
    shape = as_shape(shape)
    return tuple(f"{j},{k}" for j in range(1, shape.n + 1) for k in range(1, shape.m + 1))


def make_labels(scheme: str, N: int, shape=None) -> tuple[str, ...]:
    if scheme == "linear":
        return tuple(str(s) for s in range(1, N + 1))
    if scheme == "spin":
        return spin_labels(N)
    if scheme == "pairs":
        if shape is None:
            raise WrongLabelScheme("pair labels need a shape")
        shape = as_shape(shape)
        if shape.size != N:
            raise ShapeMismatch(f"shape {shape.n} x {shape.m} does not match dim {N}")
        return pair_labels(shape)
    raise WrongLabelScheme(f"unknown label scheme {scheme!r}")


@dataclass(frozen=True, eq=False)
class Tomogram:
    """Diagonal of ``u rho u^dagger`` as a probability vector."""

    probs: np.ndarray
    labels: tuple[str, ...]
    scheme: str = "linear"
    unitary: np.ndarray | None = None
    unitary_label: str | None = None

    def __len__(self) -> int:
        return len(self.probs)

    def to_dict(self, include_matrix: bool = True) -> dict:
        """JSON form; the unitary is either matrix JSON or ``{"label": ...}``."""
        if include_matrix and self.unitary is not None:
            unitary = matrix_to_obj(self.unitary)
        else:
            unitary = {"label": self.unitary_label}
        return {"labels": list(self.labels), "probs": [float(x) for x in self.probs], "unitary": unitary}


def clip_tomogram(diag: np.ndarray) -> np.ndarray:
    w = np.asarray(diag, dtype=float).copy()
    lo = w.min()
    if lo < -NEG_CLIP:
        raise EntropicError(f"tomogram entry {lo:.3e} is below -{NEG_CLIP:g}")
    w[w < 0.0] = 0.0
    total = w.sum()
    if abs(total - 1.0) > TOMOGRAM_SUM_TOL:
        raise EntropicError(f"tomogram sums to {total!r}")
    return w / total


def tomogram(rho, u, labels: str = "linear", *, shape=None, unitary_label: str | None = None) -> Tomogram:
    """Tomogram ``w(s, u) = (u rho u^dagger)_{ss}``.

    ``labels`` picks the basis naming: ``"linear"`` (1..N), ``"spin"``
    (projections -j..j ascending) or ``"pairs"`` (``"j,k"``; needs ``shape``).
    """
    rho = as_density(rho)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != rho.matrix.shape:
        raise DimensionMismatch(f"unitary {u.shape} vs state {rho.matrix.shape}")
    # diagonal of u rho u^dagger without forming the product
    diag = np.einsum("si,ij,sj->s", u, rho.matrix, u.conj()).real
    probs = clip_tomogram(diag)
    probs.setflags(write=False)
    names = make_labels(labels, rho.dim, shape)
    return Tomogram(probs, names, labels, u, unitary_label)


def tomogram_from_probs(probs, labels: str = "linear", *, shape=None) -> Tomogram:
    """Wrap a given probability vector as a tomogram (no unitary attached)."""
    p = probability_vector(probs)
    p.setflags(write=False)
    return Tomogram(p, make_labels(labels, len(p), shape), labels, None, None)


SPIN_32 = ("-3/2", "-1/2", "1/2", "3/2")


def qudit32_omegas(t: Tomogram) -> tuple[np.ndarray, np.ndarray]:
    """Two-outcome groupings of a spin-3/2 tomogram.

    ``Omega1 = (w(-3/2) + w(-1/2), w(1/2) + w(3/2))`` splits negative and
    positive projections; ``Omega2 = (w(-3/2) + w(1/2), w(-1/2) + w(3/2))``.
    """
    if t.labels != SPIN_32:
        raise WrongLabelScheme(f"need spin-3/2 labels {SPIN_32}, got {t.labels}")
    w = dict(zip(t.labels, t.probs))
    omega1 = np.array([w["-3/2"] + w["-1/2"], w["1/2"] + w["3/2"]])
    omega2 = np.array([w["-3/2"] + w["1/2"], w["-1/2"] + w["3/2"]])
    return omega1, omega2

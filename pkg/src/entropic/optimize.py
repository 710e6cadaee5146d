"""Minimize the sum of block-marginal entropies over the unitary group.

Unitaries are charted as ``u = exp(i H(theta))`` with ``H`` Hermitian and
``theta`` holding ``N`` diagonal entries followed by the interleaved
``(re, im)`` pairs of the strict upper triangle, ``N**2`` reals in total.
The search is a multi-start Nelder-Mead simplex in ``theta``; the result is
the best point found, not a certified global minimum.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import BudgetExhausted, NonFinite, ShapeMismatch
from .classical import tsallis_sum
from .inequalities import von_neumann_entropy
from .linalg import clip_spectrum, derive_seed, haar_unitary, hermitian_eig
from .shapes import as_shape
from .states import as_density, marginal_matrices

DEFAULT_RESTARTS = 8
DEFAULT_MAX_ITERS = 5000
DEFAULT_TOL = 1e-8
INITIAL_STEP = 0.25


@dataclass(frozen=True)
class UnitaryParams:
    dim: int
    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).ravel()
        if theta.size != self.dim**2:
            raise ShapeMismatch(f"need {self.dim**2} parameters for dim {self.dim}, got {theta.size}")
        object.__setattr__(self, "theta", theta)

    @classmethod
    def zeros(cls, dim: int) -> "UnitaryParams":
        return cls(dim, np.zeros(dim * dim))


def hermitian_from_theta(theta, dim: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    iu = np.triu_indices(dim, 1)
    H = np.diag(theta[:dim]).astype(np.complex128)
    upper = theta[dim::2] + 1j * theta[dim + 1::2]
    H[iu] = upper
    H[iu[1], iu[0]] = upper.conj()
    return H


def theta_from_hermitian(H) -> np.ndarray:
    H = np.asarray(H, dtype=np.complex128)
    dim = H.shape[0]
    upper = H[np.triu_indices(dim, 1)]
    theta = np.empty(dim * dim)
    theta[:dim] = H.diagonal().real
    theta[dim::2] = upper.real
    theta[dim + 1::2] = upper.imag
    return theta


def _exp_i(H: np.ndarray) -> np.ndarray:
    lam, V = hermitian_eig(H, check=False)
    return (V * np.exp(1j * lam)) @ V.conj().T


def build_unitary(params) -> np.ndarray:
    """``exp(i H(theta))`` through the spectral decomposition of ``H``."""
    if not isinstance(params, UnitaryParams):
        theta = np.asarray(params, dtype=float).ravel()
        params = UnitaryParams(int(round(np.sqrt(theta.size))), theta)
    if not np.all(np.isfinite(params.theta)):
        raise NonFinite("unitary parameters must be finite")
    return _exp_i(hermitian_from_theta(params.theta, params.dim))


def unitary_log_params(U) -> UnitaryParams:
    """Chart point of a unitary via its principal logarithm (complex Schur form)."""
    U = np.asarray(U, dtype=np.complex128)
    T, Z = scipy.linalg.schur(U, output="complex")
    # T is diagonal up to rounding for a normal matrix
    H = (Z * np.angle(T.diagonal())) @ Z.conj().T
    H = 0.5 * (H + H.conj().T)
    return UnitaryParams(U.shape[0], theta_from_hermitian(H))


def eigenbasis_unitary(rho) -> np.ndarray:
    """Unitary taking ``rho`` to ``diag`` of its eigenvalues, largest first."""
    lam, V = hermitian_eig(as_density(rho).matrix, check=False)
    return V[:, ::-1].conj().T


def _sigma_raw(a: np.ndarray, u: np.ndarray, shape) -> float:
    b = u @ a @ u.conj().T
    r1, r2 = marginal_matrices(0.5 * (b + b.conj().T), shape)
    total = 0.0
    for r in (r1, r2):
        lam = hermitian_eig(r, check=False).eigenvalues
        total += tsallis_sum(clip_spectrum(lam), 1.0)
    return total


def sigma_sum(rho, u, shape) -> float:
    """``S(R1(u)) + S(R2(u))`` for the block marginals of ``u rho u^dagger``."""
    rho = as_density(rho)
    shape = as_shape(shape)
    if shape.size != rho.dim:
        raise ShapeMismatch(f"shape {shape.n} x {shape.m} does not match dim {rho.dim}")
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != rho.matrix.shape:
        raise ShapeMismatch(f"unitary {u.shape} vs state {rho.matrix.shape}")
    return _sigma_raw(rho.matrix, u, shape)


# ---------------------------------------------------------------------------
# Nelder-Mead


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool


def nelder_mead(f, x0, *, step: float = INITIAL_STEP, max_iters: int = DEFAULT_MAX_ITERS,
                tol: float = DEFAULT_TOL, window: int | None = None) -> SimplexResult:
    """Adaptive Nelder-Mead (dimension-dependent coefficients).

    Stops when the simplex diameter (max-norm about the best vertex) drops
    below ``tol`` or when the best value improved by less than ``tol`` over
    the last ``window`` iterations (default ``10 * (n + 1)``).
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    if window is None:
        window = 10 * (n + 1)
    alpha = 1.0
    gamma = 1.0 + 2.0 / n if n > 1 else 2.0
    contr = 0.75 - 1.0 / (2 * n) if n > 1 else 0.5
    shrink = 1.0 - 1.0 / n if n > 1 else 0.5

    sim = np.vstack([x0, x0 + step * np.eye(n)])
    fs = np.array([f(x) for x in sim])
    history = []
    it = 0
    converged = False
    while True:
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        history.append(fs[0])
        if np.max(np.abs(sim[1:] - sim[0])) < tol:
            converged = True
            break
        if it >= window and history[-1 - window] - fs[0] < tol:
            converged = True
            break
        if it >= max_iters:
            break
        it += 1

        xbar = sim[:-1].mean(axis=0)
        xr = xbar + alpha * (xbar - sim[-1])
        fr = f(xr)
        if fr < fs[0]:
            xe = xbar + gamma * (xr - xbar)
            fe = f(xe)
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = xbar + contr * (xr - xbar)
            fc = f(xc)
            if fc <= fr:
                sim[-1], fs[-1] = xc, fc
                continue
        else:
            xc = xbar + contr * (sim[-1] - xbar)
            fc = f(xc)
            if fc < fs[-1]:
                sim[-1], fs[-1] = xc, fc
                continue
        sim[1:] = sim[0] + shrink * (sim[1:] - sim[0])
        fs[1:] = [f(x) for x in sim[1:]]
    return SimplexResult(sim[0].copy(), float(fs[0]), it, converged)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizationResult:
    params: UnitaryParams
    sigma: float
    information: float
    entropy: float
    iterations: int
    restarts_used: int
    converged: bool
    restart_sigmas: tuple[float, ...] = field(default=())

    @property
    def unitary(self) -> np.ndarray:
        return build_unitary(self.params)

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "information": self.information,
            "iterations": self.iterations,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "theta": [float(x) for x in self.params.theta],
        }


def starting_points(rho, restarts: int, seed: int) -> list[np.ndarray]:
    """Restart ``i`` depends only on ``(seed, i)``: 0 is the identity, 1 the
    eigenbasis of ``rho``, the rest are Haar-random unitaries."""
    rho = as_density(rho)
    N = rho.dim
    points = [np.zeros(N * N)]
    if restarts > 1:
        points.append(unitary_log_params(eigenbasis_unitary(rho)).theta)
    for i in range(2, restarts):
        points.append(unitary_log_params(haar_unitary(N, derive_seed(seed, i))).theta)
    return points


def minimize_sigma(rho, shape, *, restarts: int = DEFAULT_RESTARTS, max_iters: int = DEFAULT_MAX_ITERS,
                   tol: float = DEFAULT_TOL, seed: int = 0, mapper=map) -> OptimizationResult:
    """Best-found minimum of ``Sigma(u) = S(R1(u)) + S(R2(u))`` over ``U(N)``.

    Parameters
    ----------
    rho : array_like or DensityMatrix
    shape : (n, m)
        Block shape with ``n * m == N``.
    restarts : int
        Number of simplex runs; the identity and eigenbasis starts come first.
    max_iters, tol : int, float
        Per-restart iteration cap and stopping tolerance.
    seed : int
        Base seed of the random restarts.
    mapper : callable
        ``map``-like function used to run the restarts (e.g. an executor's).

    Returns
    -------
    OptimizationResult
        Lowest ``Sigma`` over restarts (ties go to the lower restart index).
        ``converged`` is that restart's stopping status; a
        :class:`BudgetExhausted` warning is emitted when it is False.
    """
    rho = as_density(rho)
    shape = as_shape(shape)
    if shape.size != rho.dim:
        raise ShapeMismatch(f"shape {shape.n} x {shape.m} does not match dim {rho.dim}")
    if restarts < 1 or max_iters < 1 or tol <= 0:
        raise ValueError("restarts, max_iters and tol must be positive")
    points = starting_points(rho, restarts, seed)
    jobs = [(rho.matrix, shape, p, max_iters, tol) for p in points]
    runs = list(mapper(_run_restart, jobs))

    best = min(range(len(runs)), key=lambda i: (runs[i].fun, i))
    run = runs[best]
    S = von_neumann_entropy(rho)
    result = OptimizationResult(
        params=UnitaryParams(rho.dim, run.x),
        sigma=run.fun,
        information=run.fun - S,
        entropy=S,
        iterations=sum(r.iterations for r in runs),
        restarts_used=len(runs),
        converged=run.converged,
        restart_sigmas=tuple(r.fun for r in runs),
    )
    if not result.converged:
        warnings.warn(f"best restart hit max_iters={max_iters}; sigma is best-so-far", BudgetExhausted,
                      stacklevel=2)
    return result


def _run_restart(job) -> SimplexResult:
    a, shape, x0, max_iters, tol = job
    dim = a.shape[0]

    def objective(theta):
        return _sigma_raw(a, _exp_i(hermitian_from_theta(theta, dim)), shape)

    return nelder_mead(objective, x0, max_iters=max_iters, tol=tol)

"""Dense complex linear algebra and seeded sampling.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
The Hermitian eigensolver is a cyclic complex Jacobi iteration compiled with
numba; it is the only eigensolver the rest of the package uses.
"""
from __future__ import annotations

import json
import math
from typing import Callable, NamedTuple

import numpy as np
from numba import njit

from .errors import (
    DomainError,
    EntropicError,
    NoConvergence,
    NonFinite,
    NotHermitian,
    NotPositive,
    ParseError,
)

HERMITIAN_TOL = 1e-10
PSD_CLIP = 1e-9
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

_UINT64 = 2**64


class Spectrum(NamedTuple):
    """Ascending eigenvalues and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a square, finite ``complex128`` array (copy)."""
    a = np.array(M, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise EntropicError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has NaN or infinite entries")
    return a


def hermiticity_error(H: np.ndarray) -> float:
    return float(np.max(np.abs(H - H.conj().T)))


def max_abs(a) -> float:
    return float(np.max(np.abs(a)))


# ---------------------------------------------------------------------------
# Jacobi eigensolver


@njit(cache=True)
def _jacobi(a, v, tol, max_sweeps):
    # a is overwritten with the (nearly) diagonal matrix, v accumulates rotations.
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if math.sqrt(2.0 * off) < tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                # phase of a[p, q] is removed first, then a real rotation
                ph = (apq / mag).conjugate()
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                jpp = c + 0j
                jpq = s + 0j
                jqp = -s * ph
                jqq = c * ph
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * jpp + akq * jqp
                    a[k, q] = akp * jpq + akq * jqq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = jpp.conjugate() * apk + jqp.conjugate() * aqk
                    a[q, k] = jpq.conjugate() * apk + jqq.conjugate() * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * jpp + vkq * jqp
                    v[k, q] = vkp * jpq + vkq * jqq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return -1


def hermitian_eig(H, *, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS,
                  check: bool = True) -> Spectrum:
    """Diagonalize a complex Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    H : array_like
        Square Hermitian matrix.
    tol : float
        Stop when the off-diagonal Frobenius norm drops below
        ``tol * max(1, ||H||_F)``.
    max_sweeps : int
        Cap on full sweeps over all off-diagonal pairs.
    check : bool
        Validate shape, finiteness and Hermiticity first.

    Returns
    -------
    Spectrum
        Eigenvalues in ascending order and the matching eigenvector columns.
    """
    if check:
        H = as_matrix(H)
        err = hermiticity_error(H)
        if err > HERMITIAN_TOL:
            raise NotHermitian(f"max |H - H^dagger| = {err:.3e} exceeds {HERMITIAN_TOL:g}")
    a = 0.5 * (H + H.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))
    sweeps = _jacobi(a, v, tol * scale, max_sweeps)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge within {max_sweeps} sweeps")
    w = a.diagonal().real
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order].copy(), v[:, order].copy())


def clip_spectrum(eigenvalues: np.ndarray, clip: float = PSD_CLIP) -> np.ndarray:
    """Zero eigenvalues in ``[-clip, 0)``; reject anything more negative."""
    lo = float(np.min(eigenvalues))
    if lo < -clip:
        raise NotPositive(f"eigenvalue {lo:.3e} is below -{clip:g}")
    return np.where(eigenvalues < 0.0, 0.0, eigenvalues)


def matrix_function(H, f: Callable[[np.ndarray], np.ndarray], *, psd: bool = False) -> np.ndarray:
    """Apply a real function to a Hermitian matrix through its spectrum.

    ``f`` receives the (real) eigenvalue array and must return an array of
    the same length. With ``psd=True`` the eigenvalues are first clipped as in
    :func:`clip_spectrum`.
    """
    lam, V = hermitian_eig(H)
    if psd:
        lam = clip_spectrum(lam)
    with np.errstate(all="ignore"):
        try:
            fl = np.asarray(f(lam), dtype=float)
        except (ValueError, ArithmeticError) as exc:
            raise DomainError(str(exc)) from exc
    if fl.shape != lam.shape or not np.all(np.isfinite(fl)):
        bad = lam[~np.isfinite(fl)] if fl.shape == lam.shape else lam
        raise DomainError(f"function undefined at eigenvalue(s) {bad}")
    out = (V * fl) @ V.conj().T
    return 0.5 * (out + out.conj().T)


def kron(A, B) -> np.ndarray:
    """Kronecker product; block ``(j, k)`` of the result is ``A[j, k] * B``."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    nA, nB = A.shape[0], B.shape[0]
    return (A[:, None, :, None] * B[None, :, None, :]).reshape(nA * nB, nA * nB)


def unitarity_error(U) -> float:
    U = np.asarray(U)
    return max_abs(U.conj().T @ U - np.eye(U.shape[0]))


# ---------------------------------------------------------------------------
# Seeded sampling
#
# All randomness goes through numpy's PCG64. Child streams are derived with
# SeedSequence([base, i, j, ...]), which hashes the whole key, so the seed of
# trial i depends only on (base, i) and never on how many trials are run.


def derive_seed(base: int, *indices: int) -> int:
    """Deterministic 64-bit child seed for ``(base, *indices)``."""
    key = [int(base) % _UINT64, *(int(i) % _UINT64 for i in indices)]
    return int(np.random.SeedSequence(key).generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) % _UINT64))


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2.0)


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-distributed ``dim x dim`` unitary (QR of a Ginibre matrix).

    The phases of the diagonal of ``R`` are moved into ``Q``; without that
    step the distribution is not Haar.
    """
    if int(dim) < 1:
        raise EntropicError("dim must be >= 1")
    Z = _ginibre(make_rng(seed), dim, dim)
    Q, R = np.linalg.qr(Z)
    d = R.diagonal()
    return Q * (d / np.abs(d))


def ginibre_density(dim: int, rank: int, seed: int) -> np.ndarray:
    """Random density matrix ``G G^dagger / Tr(G G^dagger)``, ``G`` of size dim x rank.

    ``rank == dim`` samples the Hilbert-Schmidt measure.
    """
    dim, rank = int(dim), int(rank)
    if dim < 1 or not 1 <= rank <= dim:
        raise EntropicError(f"need 1 <= rank <= dim, got dim={dim}, rank={rank}")
    G = _ginibre(make_rng(seed), dim, rank)
    rho = G @ G.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


# ---------------------------------------------------------------------------
# Matrix JSON: {"dim": N, "entries": [[re, im], ...]} row-major


def _fmt(x: float) -> str:
    s = format(float(x), ".17g")
    if s in ("inf", "-inf", "nan"):
        raise NonFinite("cannot serialize non-finite entry")
    return s


def matrix_to_json(M) -> str:
    """Serialize a square matrix; floats carry 17 significant digits."""
    a = np.asarray(M, dtype=np.complex128)
    entries = ",".join(f"[{_fmt(z.real)},{_fmt(z.imag)}]" for z in a.ravel())
    return f'{{"dim":{a.shape[0]},"entries":[{entries}]}}'


def matrix_to_obj(M) -> dict:
    return json.loads(matrix_to_json(M))


def matrix_from_obj(obj) -> np.ndarray:
    try:
        dim = obj["dim"]
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ParseError("matrix JSON needs 'dim' and 'entries'") from exc
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"'dim' must be a positive integer, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise ParseError(f"'entries' must hold dim^2 = {dim * dim} pairs")
    try:
        arr = np.array(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError("entries must be [re, im] number pairs") from exc
    if arr.shape != (dim * dim, 2):
        raise ParseError("entries must be [re, im] number pairs")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("matrix has NaN or infinite entries")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(dim, dim)


def matrix_from_json(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return matrix_from_obj(obj)

"""Quantum and tomographic entropies and the inequality checks built on them.

All checks evaluate their two sides independently: the joint-state side uses
the spectrum of the state itself, the marginal side re-diagonalizes the block
marginals. Entropies are in nats.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import (
    check_q,
    conditional_entropy_q,
    reshape_joint,
    tsallis_sum,
)
from .errors import WrongLabelScheme
from .linalg import clip_spectrum, hermitian_eig
from .reports import InequalityReport
from .shapes import as_shape
from .states import (
    SPIN_32,
    Tomogram,
    as_density,
    conjugate_matrix,
    marginal_matrices,
    qudit32_omegas,
    tomogram,
)


def spectrum_of(a) -> np.ndarray:
    """Clipped ascending eigenvalues of a (PSD) Hermitian matrix."""
    return clip_spectrum(hermitian_eig(a, check=False).eigenvalues)


def _matrix_entropy(a, q: float) -> float:
    return tsallis_sum(spectrum_of(a), q)


def von_neumann_entropy(rho) -> float:
    """``-Tr rho ln rho`` over the clipped spectrum, ``0 ln 0 = 0``."""
    return max(0.0, tsallis_sum(as_density(rho).eigenvalues, 1.0))


def quantum_q_entropy(rho, q: float) -> float:
    """Deformed entropy ``-Tr rho (rho^(q-1) - 1) / (q - 1)``; von Neumann at ``q = 1``."""
    q = check_q(q)
    return tsallis_sum(as_density(rho).eigenvalues, q)


def tomographic_q_entropy(t: Tomogram, q: float) -> float:
    """Tsallis entropy of the tomogram's probability vector."""
    q = check_q(q)
    return tsallis_sum(t.probs, q)


def marginal_entropies(rho, shape, q: float = 1.0, u=None) -> tuple[float, float]:
    """``(S_q(R1), S_q(R2))`` for the block marginals of ``rho`` (or of ``u rho u^dagger``)."""
    a = as_density(rho).matrix
    if u is not None:
        a = conjugate_matrix(a, u)
    r1, r2 = marginal_matrices(a, shape)
    return _matrix_entropy(r1, q), _matrix_entropy(r2, q)


# ---------------------------------------------------------------------------
# inequality checks


def check_quantum_subadditivity(rho, shape, q: float = 1.0, *, seed: int | None = None) -> InequalityReport:
    """Deformed subadditivity ``S_q(rho) <= S_q(R1) + S_q(R2)`` for ``q >= 1``."""
    q = check_q(q, minimum=1.0, inclusive=True)
    rho = as_density(rho)
    shape = as_shape(shape)
    lhs = quantum_q_entropy(rho, q)
    s1, s2 = marginal_entropies(rho, shape, q)
    return InequalityReport.build("quantum_subadditivity", lhs, s1 + s2, q, shape, seed=seed)


def check_araki_lieb(rho, shape, *, seed: int | None = None) -> InequalityReport:
    """Araki-Lieb bound ``|S(R1) - S(R2)| <= S(rho)``; margin is ``rhs - lhs`` with rhs ``S(rho)``."""
    rho = as_density(rho)
    shape = as_shape(shape)
    s1, s2 = marginal_entropies(rho, shape, 1.0)
    return InequalityReport.build("araki_lieb", abs(s1 - s2), von_neumann_entropy(rho), 1.0, shape,
                                  seed=seed)


def tomogram_marginals(t: Tomogram, shape) -> tuple[np.ndarray, np.ndarray]:
    """Row/column marginals of the reshaped tomogram (the two Omegas for spin 3/2)."""
    shape = as_shape(shape)
    if t.labels == SPIN_32 and shape == (2, 2):
        return qudit32_omegas(t)
    table = reshape_joint(t.probs, shape)
    return table.sum(axis=1), table.sum(axis=0)


def check_tomographic_subadditivity(rho, u, shape, q: float = 1.0, *, labels: str = "linear",
                                    seed: int | None = None,
                                    unitary_label: str | None = None) -> InequalityReport:
    """Deformed subadditivity of the tomogram ``w(s, u)`` read as an ``n x m`` table."""
    q = check_q(q, minimum=1.0, inclusive=True)
    shape = as_shape(shape)
    t = tomogram(rho, u, labels, shape=shape if labels == "pairs" else None)
    return check_tomogram_subadditivity(t, shape, q, seed=seed, unitary_label=unitary_label)


def check_tomogram_subadditivity(t: Tomogram, shape, q: float = 1.0, *, seed=None,
                                 unitary_label=None) -> InequalityReport:
    q = check_q(q, minimum=1.0, inclusive=True)
    shape = as_shape(shape)
    lhs = tsallis_sum(t.probs, q)
    w1, w2 = tomogram_marginals(t, shape)
    rhs = tsallis_sum(w1, q) + tsallis_sum(w2, q)
    return InequalityReport.build("tomographic_subadditivity", lhs, rhs, q, shape,
                                  seed=seed, unitary_label=unitary_label or t.unitary_label)


def _require_spin32(t: Tomogram) -> None:
    if t.labels != SPIN_32:
        raise WrongLabelScheme(f"need spin-3/2 labels {SPIN_32}, got {t.labels}")


def qudit32_sign_entropy(t: Tomogram, q: float) -> float:
    """q-entropy of the negative/positive projection split ``Omega1``."""
    _require_spin32(t)
    return tsallis_sum(qudit32_omegas(t)[0], check_q(q))


def qudit32_conditional_q_entropy(t: Tomogram, q: float) -> float:
    """``H_q(A|B) = H_q(w) - H_q(Omega1)`` for a spin-3/2 tomogram.

    Subsystem B is the sign of the projection, A the value of
    ``|m|``.
    """
    _require_spin32(t)
    q = check_q(q)
    return tsallis_sum(t.probs, q) - tsallis_sum(qudit32_omegas(t)[0], q)


def qudit32_chain_residual(t: Tomogram, q: float) -> float:
    """``H_q(w) - (H_q(A|B) + H_q(B))``; zero up to rounding."""
    return tsallis_sum(t.probs, check_q(q)) - (qudit32_conditional_q_entropy(t, q) + qudit32_sign_entropy(t, q))


def tomogram_conditional_q_entropy(t: Tomogram, shape, q: float) -> float:
    """Generic conditional q-entropy of a tomogram read as an ``n x m`` table."""
    if t.labels == SPIN_32 and as_shape(shape) == (2, 2):
        return qudit32_conditional_q_entropy(t, q)
    return conditional_entropy_q(reshape_joint(t.probs, shape), q)


# ---------------------------------------------------------------------------
# information functionals


@dataclass(frozen=True)
class InformationValue:
    value: float
    kind: str
    q: float = 1.0
    local_unitaries: tuple[np.ndarray, np.ndarray] | None = None

    def __float__(self) -> float:
        return self.value


def information_I(rho, u, shape) -> InformationValue:
    """``I(u) = S(R1(u)) + S(R2(u)) - S(rho)`` with ``R(u)`` the block marginals of ``u rho u^dagger``."""
    rho = as_density(rho)
    s1, s2 = marginal_entropies(rho, shape, 1.0, u)
    return InformationValue(s1 + s2 - von_neumann_entropy(rho), "I_of_u", 1.0)


def deformed_information(rho, u, shape, q: float) -> InformationValue:
    """q-analog of :func:`information_I`, built from ``S_q`` throughout (``q >= 1``)."""
    q = check_q(q, minimum=1.0, inclusive=True)
    rho = as_density(rho)
    s1, s2 = marginal_entropies(rho, shape, q, u)
    return InformationValue(s1 + s2 - quantum_q_entropy(rho, q), "deformed_I_of_u", q)


def mutual_information_bipartite(rho, shape) -> InformationValue:
    """``S(R1) + S(R2) - S(rho)`` for the untransformed block marginals.

    Also returns the local unitaries ``u1, u2`` with ``u1 R1 u1^dagger`` and
    ``u2 R2 u2^dagger`` diagonal; entropies do not depend on them.
    """
    rho = as_density(rho)
    r1, r2 = marginal_matrices(rho.matrix, shape)
    l1, v1 = hermitian_eig(r1, check=False)
    l2, v2 = hermitian_eig(r2, check=False)
    value = tsallis_sum(clip_spectrum(l1), 1.0) + tsallis_sum(clip_spectrum(l2), 1.0) - von_neumann_entropy(rho)
    return InformationValue(value, "I_q", 1.0, (v1.conj().T, v2.conj().T))

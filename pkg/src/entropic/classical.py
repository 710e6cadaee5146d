"""Probability vectors viewed as joint tables of two block subsystems.

A length-``N`` distribution with ``N = n * m`` is read as an ``n x m`` table
through the row-major index map ``s = (j - 1) * m + k`` (1-based), i.e. the
enumeration ``1 <-> 11, 2 <-> 12, ..., N <-> nm``. Entropies are in nats.
"""
from __future__ import annotations

import numpy as np

from .errors import (
    EntropicError,
    InvalidQ,
    NotNormalized,
    ShapeMismatch,
    ZeroConditioningEvent,
)
from .reports import InequalityReport
from .shapes import as_shape

NEG_CLIP = 1e-12
SUM_TOL = 1e-9
ZERO_EVENT = 1e-15
# below this |q - 1| the Tsallis sum is evaluated through expm1
_Q_NEAR_ONE = 1e-3


def probability_vector(p, *, clip: float = NEG_CLIP, tol: float = SUM_TOL) -> np.ndarray:
    """Validate a probability vector and return a clipped float copy."""
    a = np.array(p, dtype=float).ravel()
    if a.size == 0:
        raise EntropicError("probability vector is empty")
    if not np.all(np.isfinite(a)):
        raise EntropicError("probability vector has non-finite entries")
    if np.any(a < -clip):
        raise EntropicError(f"negative probability {a.min():.3e}")
    a[a < 0.0] = 0.0
    total = a.sum()
    if abs(total - 1.0) > tol:
        raise NotNormalized(f"probabilities sum to {total!r}")
    return a


def check_q(q: float, *, minimum: float = 0.0, inclusive: bool = False) -> float:
    q = float(q)
    ok = q >= minimum if inclusive else q > minimum
    if not np.isfinite(q) or not ok:
        rel = ">=" if inclusive else ">"
        raise InvalidQ(f"q must be {rel} {minimum:g}, got {q!r}")
    return q


# ---------------------------------------------------------------------------
# index map and marginals


def reshape_joint(p, shape) -> np.ndarray:
    """Arrange ``p`` as the ``n x m`` table ``P(j, k) = p[(j-1)*m + k]``."""
    p = probability_vector(p)
    shape = as_shape(shape)
    if shape.size != p.size:
        raise ShapeMismatch(f"{shape.n} x {shape.m} != {p.size}")
    return p.reshape(shape.n, shape.m)


def flatten_joint(joint) -> np.ndarray:
    return np.asarray(joint, dtype=float).ravel()


def _table(joint) -> np.ndarray:
    t = np.asarray(joint, dtype=float)
    if t.ndim != 2:
        raise ShapeMismatch(f"joint table must be 2-D, got shape {t.shape}")
    return t


def marginal_A(joint) -> np.ndarray:
    """Row sums ``P1(j) = sum_k P(j, k)``."""
    return _table(joint).sum(axis=1)


def marginal_B(joint) -> np.ndarray:
    """Column sums ``P2(k) = sum_j P(j, k)``."""
    return _table(joint).sum(axis=0)


def conditional_given_B(joint, k: int) -> np.ndarray:
    """Bayes conditional ``P(j | k)`` for column ``k`` (0-based)."""
    col = _table(joint)[:, k]
    w = col.sum()
    if w <= ZERO_EVENT:
        raise ZeroConditioningEvent(f"column {k} has probability {w:.3e}")
    return col / w


# ---------------------------------------------------------------------------
# entropies


def _plogp(p: np.ndarray) -> float:
    nz = p[p > 0.0]
    return float(np.dot(nz, np.log(nz)))


def shannon_entropy(p) -> float:
    """``-sum p ln p`` with ``0 ln 0 = 0``."""
    p = np.asarray(p, dtype=float).ravel()
    return max(0.0, -_plogp(p))


def tsallis_sum(p, q: float) -> float:
    """Unvalidated Tsallis entropy ``-sum p (p^(q-1) - 1) / (q - 1)``."""
    p = np.asarray(p, dtype=float).ravel()
    nz = p[p > 0.0]
    if q == 1.0:
        return -float(np.dot(nz, np.log(nz)))
    d = q - 1.0
    if abs(d) < _Q_NEAR_ONE:
        return -float(np.dot(nz, np.expm1(d * np.log(nz)))) / d
    return (1.0 - float(np.sum(nz**q))) / d


def tsallis_entropy(p, q: float) -> float:
    """Tsallis ``q``-entropy in nats; ``q = 1`` is the Shannon entropy.

    For ``q`` within 1e-3 of 1 the sum ``sum p^q - 1`` is formed as
    ``sum p * expm1((q - 1) ln p)`` to avoid cancellation.
    """
    q = check_q(q)
    return tsallis_sum(p, q)


def joint_entropy_q(joint, q: float) -> float:
    return tsallis_entropy(flatten_joint(joint), q)


def conditional_entropy_shannon(joint) -> float:
    """``H(A|B) = sum_k P2(k) H(A | k)``; zero-weight columns contribute 0."""
    t = _table(joint)
    total = 0.0
    for k, w in enumerate(marginal_B(t)):
        if w <= ZERO_EVENT:
            continue
        total += w * shannon_entropy(conditional_given_B(t, k))
    return total


def conditional_entropy_q(joint, q: float) -> float:
    """Conditional q-entropy as the difference ``H_q(A,B) - H_q(B)``.

    ``H_q(B)`` is the Tsallis entropy of the column marginal, so the deformed
    chain relation ``H_q(A,B) = H_q(A|B) + H_q(B)`` holds by construction.
    """
    q = check_q(q)
    t = _table(joint)
    return tsallis_sum(t.ravel(), q) - tsallis_sum(marginal_B(t), q)


# ---------------------------------------------------------------------------
# subadditivity


def subadditivity_margin(joint, q: float) -> float:
    """``H_q(A) + H_q(B) - H_q(A,B)`` for any ``q > 0``; not a guarded check."""
    q = check_q(q)
    t = _table(joint)
    return tsallis_sum(marginal_A(t), q) + tsallis_sum(marginal_B(t), q) - tsallis_sum(t.ravel(), q)


def check_classical_subadditivity(joint, q: float) -> InequalityReport:
    """Deformed subadditivity ``H_q(A,B) <= H_q(A) + H_q(B)`` for ``q >= 1``."""
    q = check_q(q, minimum=1.0, inclusive=True)
    t = _table(joint)
    lhs = tsallis_sum(t.ravel(), q)
    rhs = tsallis_sum(t.sum(axis=1), q) + tsallis_sum(t.sum(axis=0), q)
    return InequalityReport.build("classical_subadditivity", lhs, rhs, q, t.shape)

"""Bipartition shapes ``N = n * m`` and the padding rule for prime sizes."""
from __future__ import annotations

from typing import NamedTuple

from .errors import ShapeMismatch


class BipartitionShape(NamedTuple):
    n: int
    m: int

    @property
    def size(self) -> int:
        return self.n * self.m


def as_shape(shape) -> BipartitionShape:
    try:
        n, m = (int(x) for x in shape)
    except (TypeError, ValueError) as exc:
        raise ShapeMismatch(f"shape must be a pair of integers, got {shape!r}") from exc
    if n < 1 or m < 1:
        raise ShapeMismatch(f"shape entries must be positive, got {(n, m)}")
    return BipartitionShape(n, m)


def factorizations(N: int, min_factor: int = 2) -> list[BipartitionShape]:
    """All ordered pairs ``(n, m)`` with ``n * m == N`` and both ``>= min_factor``."""
    return [BipartitionShape(n, N // n) for n in range(min_factor, N // min_factor + 1)
            if N % n == 0 and N // n >= min_factor]


def padded_dim(N: int) -> int:
    """Smallest ``M >= N`` that has a factorization with both factors ``>= 2``."""
    M = max(int(N), 4)
    while not factorizations(M):
        M += 1
    return M

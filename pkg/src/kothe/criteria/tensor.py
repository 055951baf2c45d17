"""Projective tensor products of ℓ1-Köthe spaces: ``d_{vz}^k = a_v^k b_z^k``."""

from __future__ import annotations

import numpy as np

from kothe.extreal import log_mul, mul_array, safe_exp
from kothe.spaces import KotheMatrix, as_dense

DIAGONAL = "diagonal"
ROW_MAJOR = "row-major"
PAIRINGS = (DIAGONAL, ROW_MAJOR)


def index_pairs(n_a: int, n_b: int, pairing: str = DIAGONAL) -> list[tuple[int, int]]:
    """Enumerate ``(v, z)`` in ``1..n_a x 1..n_b``.

    ``diagonal`` walks the anti-diagonals ``v + z = 2, 3, ...`` (Cantor order)
    so every prefix is balanced between the factors.
    """
    if pairing == ROW_MAJOR:
        return [(v, z) for v in range(1, n_a + 1) for z in range(1, n_b + 1)]
    if pairing == DIAGONAL:
        pairs = [(v, z) for v in range(1, n_a + 1) for z in range(1, n_b + 1)]
        return sorted(pairs, key=lambda p: (p[0] + p[1], p[0]))
    raise ValueError(f"unknown pairing {pairing!r}; expected one of {PAIRINGS}")


def tensor_product(
    A: KotheMatrix, B: KotheMatrix, pairing: str = DIAGONAL, n_max: int | None = None
) -> KotheMatrix:
    """The matrix ``D`` over paired indices, optionally cut to ``n_max`` pairs.

    Entries are plain products where those are finite and nonzero; the rest
    come from log space, so an overflowing factor paired with a tiny one still
    gives the right value, and a true overflow becomes ``inf``.
    """
    if A.k_max != B.k_max:
        raise ValueError(f"level counts differ: {A.k_max} vs {B.k_max}")
    pairs = index_pairs(A.n_max, B.n_max, pairing)
    if n_max is not None:
        if n_max > len(pairs):
            raise ValueError(f"only {len(pairs)} pairs available, asked for {n_max}")
        pairs = pairs[:n_max]
    v = np.array([p[0] for p in pairs]) - 1
    z = np.array([p[1] for p in pairs]) - 1
    direct = mul_array(A.values[v], B.values[z])
    from_logs = safe_exp(log_mul(A.log_values[v], B.log_values[z]))
    zero_factor = (A.values[v] == 0) | (B.values[z] == 0)
    exact = zero_factor | (np.isfinite(direct) & (direct > 0))
    grid = np.where(exact, direct, from_logs)
    label = f"{A.label or 'A'} (x) {B.label or 'B'}"
    return KotheMatrix(len(pairs), A.k_max, grid=grid, label=label, pairs=tuple(pairs))


def tensor_vector(x, y, pairs) -> np.ndarray:
    """Coordinates of ``x ⊗ y`` in the order given by ``pairs``."""
    n_a = max(p[0] for p in pairs)
    n_b = max(p[1] for p in pairs)
    xs, ys = as_dense(x, n_a), as_dense(y, n_b)
    return np.array([xs[v - 1] * ys[z - 1] for v, z in pairs])

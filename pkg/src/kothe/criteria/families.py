"""Finite stand-ins for the dual ``E'`` of a Fréchet space ``E``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from kothe.spaces import KotheSpace, log_dual_seminorm


@dataclass(frozen=True, eq=False)
class FunctionalFamily:
    """Functionals on ``E = λ^ℓ(A0)`` ordered by support extent.

    A functional with support in ``1..s`` belongs to truncation shell ``s``;
    the zero functional belongs to every shell.
    """

    space: KotheSpace
    functionals: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.functionals:
            raise ValueError("a functional family must be nonempty")
        fs = []
        for u in self.functionals:
            u = np.asarray(u, dtype=float).ravel()
            if u.size > self.space.n_max:
                raise IndexError("functional longer than the space truncation")
            full = np.zeros(self.space.n_max)
            full[: u.size] = u
            full.setflags(write=False)
            fs.append(full)
        order = sorted(range(len(fs)), key=lambda j: self._extent(fs[j]))
        object.__setattr__(self, "functionals", tuple(fs[j] for j in order))

    @staticmethod
    def _extent(u: np.ndarray) -> int:
        nz = np.flatnonzero(u)
        return int(nz[-1]) + 1 if nz.size else 0

    @classmethod
    def coordinate(cls, space: KotheSpace, n: int | None = None) -> "FunctionalFamily":
        """The coordinate functionals ``e_1', ..., e_n'``."""
        n = n or space.n_max
        return cls(space, tuple(np.eye(space.n_max)[i] for i in range(n)))

    @classmethod
    def default(cls, space: KotheSpace, n: int, n_random: int = 4, seed: int = 0) -> "FunctionalFamily":
        """Coordinate functionals plus seeded random ones on random prefixes."""
        rng = np.random.default_rng(seed)
        fs = [np.eye(space.n_max)[i] for i in range(n)]
        for _ in range(n_random):
            extent = int(rng.integers(1, n + 1))
            u = np.zeros(space.n_max)
            u[:extent] = rng.standard_normal(extent)
            fs.append(u)
        return cls(space, tuple(fs))

    def __len__(self) -> int:
        return len(self.functionals)

    @cached_property
    def extents(self) -> np.ndarray:
        return np.array([self._extent(u) for u in self.functionals])

    @cached_property
    def log_duals(self) -> np.ndarray:
        """``log ||u||_k^*`` for every functional (rows) and level (columns)."""
        A, ell = self.space.matrix, self.space.ell
        return np.array(
            [[log_dual_seminorm(A, ell, u, k) for k in range(1, A.k_max + 1)] for u in self.functionals]
        )

    def shell_counts(self, n_shells: int) -> np.ndarray:
        """How many functionals live in each shell ``1..n_shells``."""
        return np.array([int((self.extents <= s).sum()) for s in range(1, n_shells + 1)])

    def to_dict(self) -> dict:
        return {"space": self.space.to_dict(), "functionals": [u.tolist() for u in self.functionals]}

    @classmethod
    def from_dict(cls, data: dict) -> "FunctionalFamily":
        return cls(KotheSpace.from_dict(data["space"]), tuple(np.array(u) for u in data["functionals"]))

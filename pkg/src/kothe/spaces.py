"""Köthe matrices, ℓ-norms and the (dual) seminorms of ℓ-Köthe spaces.

Indices follow the mathematical convention: rows ``n = 1..n_max`` and levels
``k = 1..k_max``.  A vector passed as a plain sequence or numpy array is read
as coordinates ``x_1, x_2, ...`` (position 0 holds ``x_1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from kothe.extreal import INF, div_array, log_div, log_mul, mul_array, safe_exp, safe_log

INFINITE_TYPE = "infinite"
FINITE_TYPE = "finite"


@dataclass(frozen=True)
class PowerSeriesGenerator:
    """Weights of a power-series space.

    Infinite type: ``a_n^k = exp(k * alpha_n)``; finite type:
    ``a_n^k = exp(-alpha_n / k)``.  The exponent sequence ``alpha`` follows
    one of three rules:

    * ``linear``: ``alpha_n = slope * n + offset``
    * ``log``: ``alpha_n = scale * log(n + shift)``
    * ``list``: ``alpha_n = values[n - 1]``
    """

    kind: str = INFINITE_TYPE
    rule: str = "linear"
    slope: float = 1.0
    offset: float = 0.0
    scale: float = 1.0
    shift: float = 1.0
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in (INFINITE_TYPE, FINITE_TYPE):
            raise ValueError(f"unknown power-series type {self.kind!r}")
        if self.rule not in ("linear", "log", "list"):
            raise ValueError(f"unknown exponent rule {self.rule!r}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def alpha(self, n: int) -> float:
        if self.rule == "linear":
            return self.slope * n + self.offset
        if self.rule == "log":
            return self.scale * math.log(n + self.shift)
        if n > len(self.values):
            raise IndexError(f"exponent list has no entry for n={n}")
        return self.values[n - 1]

    def alphas(self, n_max: int) -> np.ndarray:
        return np.array([self.alpha(n) for n in range(1, n_max + 1)], dtype=float)

    def coefficient(self, k: int) -> Fraction:
        """Exact coefficient ``c(k)`` with ``log a_n^k = c(k) * alpha_n``."""
        return Fraction(k) if self.kind == INFINITE_TYPE else Fraction(-1, k)

    def log_grid(self, n_max: int, k_max: int) -> np.ndarray:
        alphas = self.alphas(n_max)
        levels = np.arange(1, k_max + 1, dtype=float)
        if self.kind == INFINITE_TYPE:
            return alphas[:, None] * levels[None, :]
        return -(alphas[:, None] / levels[None, :])

    def to_dict(self) -> dict:
        alpha = {"rule": self.rule}
        if self.rule == "linear":
            alpha.update(slope=self.slope, offset=self.offset)
        elif self.rule == "log":
            alpha.update(scale=self.scale, shift=self.shift)
        else:
            alpha["values"] = list(self.values)
        return {"kind": "power_series", "type": self.kind, "alpha": alpha}

    @classmethod
    def from_dict(cls, data: dict) -> "PowerSeriesGenerator":
        alpha = dict(data.get("alpha", {"rule": "linear"}))
        rule = alpha.pop("rule", "linear")
        if "values" in alpha:
            alpha["values"] = tuple(alpha["values"])
        return cls(kind=data.get("type", INFINITE_TYPE), rule=rule, **alpha)


@dataclass(frozen=True, eq=False)
class KotheMatrix:
    """A truncated Köthe matrix ``a_n^k``.

    Exactly one of ``grid`` (an ``n_max x k_max`` table of nonnegative
    extended reals) or ``generator`` is set.  Generator-backed matrices are
    evaluated lazily in log space and cached.
    """

    n_max: int
    k_max: int
    grid: np.ndarray | None = None
    generator: PowerSeriesGenerator | None = None
    label: str = ""
    pairs: tuple[tuple[int, int], ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if (self.grid is None) == (self.generator is None):
            raise ValueError("exactly one of grid or generator must be given")
        if self.n_max < 1 or self.k_max < 1:
            raise ValueError("a Köthe matrix needs at least one row and one level")
        if self.grid is not None:
            grid = np.array(self.grid, dtype=float)
            if grid.ndim != 2 or grid.shape != (self.n_max, self.k_max):
                raise ValueError(
                    f"grid shape {grid.shape} does not match ({self.n_max}, {self.k_max})"
                )
            grid.setflags(write=False)
            object.__setattr__(self, "grid", grid)

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[float]], label: str = "") -> "KotheMatrix":
        arr = np.array(grid, dtype=float)
        if arr.ndim != 2:
            raise ValueError("grid must be two-dimensional (rows n, levels k)")
        return cls(arr.shape[0], arr.shape[1], grid=arr, label=label)

    @classmethod
    def power_series(
        cls,
        kind: str = INFINITE_TYPE,
        n_max: int = 30,
        k_max: int = 6,
        label: str = "",
        **alpha,
    ) -> "KotheMatrix":
        return cls(n_max, k_max, generator=PowerSeriesGenerator(kind=kind, **alpha), label=label)

    @classmethod
    def constant_in_k(cls, weights: Sequence[float], k_max: int, label: str = "") -> "KotheMatrix":
        w = np.asarray(weights, dtype=float)
        return cls.from_grid(np.repeat(w[:, None], k_max, axis=1), label=label)

    @property
    def is_generated(self) -> bool:
        return self.generator is not None

    @cached_property
    def log_values(self) -> np.ndarray:
        if self.generator is not None:
            out = self.generator.log_grid(self.n_max, self.k_max)
        else:
            out = safe_log(self.grid)
        out.setflags(write=False)
        return out

    @cached_property
    def values(self) -> np.ndarray:
        if self.grid is not None:
            return self.grid
        out = safe_exp(self.log_values)
        out.setflags(write=False)
        return out

    def _check(self, n: int | None = None, k: int | None = None) -> None:
        if n is not None and not 1 <= n <= self.n_max:
            raise IndexError(f"row n={n} outside 1..{self.n_max}")
        if k is not None and not 1 <= k <= self.k_max:
            raise IndexError(f"level k={k} outside 1..{self.k_max}")

    def entry(self, n: int, k: int) -> float:
        self._check(n, k)
        return float(self.values[n - 1, k - 1])

    def log_entry(self, n: int, k: int) -> float:
        self._check(n, k)
        return float(self.log_values[n - 1, k - 1])

    def column(self, k: int) -> np.ndarray:
        """Weights ``(a_1^k, ..., a_{n_max}^k)``."""
        self._check(k=k)
        return self.values[:, k - 1]

    def log_column(self, k: int) -> np.ndarray:
        self._check(k=k)
        return self.log_values[:, k - 1]

    def truncate(self, n_max: int) -> "KotheMatrix":
        if n_max == self.n_max:
            return self
        if self.generator is not None:
            return KotheMatrix(n_max, self.k_max, generator=self.generator, label=self.label)
        if n_max > self.n_max:
            raise IndexError(f"cannot extend an explicit grid of {self.n_max} rows to {n_max}")
        pairs = self.pairs[:n_max] if self.pairs is not None else None
        return KotheMatrix(n_max, self.k_max, grid=self.grid[:n_max], label=self.label, pairs=pairs)

    def to_dict(self) -> dict:
        if self.generator is not None:
            source = self.generator.to_dict()
        else:
            source = {"kind": "explicit", "grid": self.grid.tolist()}
        out = {"label": self.label, "n_max": self.n_max, "k_max": self.k_max, "source": source}
        if self.pairs is not None:
            out["pairs"] = [list(p) for p in self.pairs]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "KotheMatrix":
        source = data["source"]
        n_max, k_max = int(data["n_max"]), int(data["k_max"])
        label = data.get("label", "")
        pairs = data.get("pairs")
        pairs = tuple(tuple(p) for p in pairs) if pairs is not None else None
        if source["kind"] == "explicit":
            return cls(n_max, k_max, grid=np.array(source["grid"], dtype=float), label=label, pairs=pairs)
        if source["kind"] == "power_series":
            return cls(n_max, k_max, generator=PowerSeriesGenerator.from_dict(source), label=label)
        raise ValueError(f"unknown matrix source kind {source['kind']!r}")


@dataclass(frozen=True)
class Violation:
    kind: str  # "negative" | "monotonicity" | "row_positivity" | "exponent"
    n: int
    k: int | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, "k": self.k, "detail": self.detail}


def validate_matrix(A: KotheMatrix) -> list[Violation]:
    """All violations of the Köthe-matrix axioms; an empty list means valid."""
    out: list[Violation] = []
    if A.generator is not None and A.generator.rule in ("linear", "list"):
        alphas = A.generator.alphas(A.n_max)
        for n, a in enumerate(alphas, start=1):
            if a < 0:
                out.append(Violation("exponent", n, detail=f"alpha_{n} = {a} < 0"))
            if n > 1 and a < alphas[n - 2]:
                out.append(Violation("exponent", n, detail=f"alpha_{n} < alpha_{n - 1}"))
    vals = A.values
    for n in range(1, A.n_max + 1):
        row = vals[n - 1]
        for k in range(1, A.k_max + 1):
            if row[k - 1] < 0 or math.isnan(row[k - 1]):
                out.append(Violation("negative", n, k, f"a_{n}^{k} = {row[k - 1]}"))
        for k in range(1, A.k_max):
            if row[k - 1] > row[k]:
                out.append(Violation("monotonicity", n, k, f"a_{n}^{k} > a_{n}^{k + 1}"))
        if not np.max(row) > 0:
            out.append(Violation("row_positivity", n, None, f"sup_k a_{n}^k = 0"))
    return out


def entry(A: KotheMatrix, n: int, k: int) -> float:
    return A.entry(n, k)


def basis_seminorm(A: KotheMatrix, n: int, k: int) -> float:
    """``||e_n||_k = a_n^k`` (independent of the ℓ-norm, since ``||e_n|| = 1``)."""
    return A.entry(n, k)


@dataclass(frozen=True)
class EllNorm:
    """Weighted-ℓp (``1 <= p <= inf``) or c0 norm on finitely supported vectors."""

    kind: str = "lp"
    p: float = 1.0

    def __post_init__(self):
        if self.kind not in ("lp", "c0"):
            raise ValueError(f"unknown sequence-space kind {self.kind!r}")
        if self.kind == "c0":
            object.__setattr__(self, "p", INF)
        elif not self.p >= 1:
            raise ValueError(f"p must satisfy 1 <= p <= inf, got {self.p}")
        object.__setattr__(self, "p", float(self.p))

    @property
    def exponent(self) -> float:
        return self.p

    @property
    def conjugate_exponent(self) -> float:
        p = self.p
        if p == 1:
            return INF
        if math.isinf(p):
            return 1.0
        return p / (p - 1.0)

    def dual(self) -> "EllNorm":
        """The norm whose weighted version gives the dual seminorm (c0' = ℓ1)."""
        return EllNorm("lp", self.conjugate_exponent)

    def norm(self, x) -> float:
        a = np.abs(np.asarray(x, dtype=float)).ravel()
        if a.size == 0:
            return 0.0
        if np.isinf(a).any():
            return INF
        if math.isinf(self.p):
            return float(a.max())
        if self.p == 1:
            return math.fsum(a.tolist())
        m = float(a.max())
        if m == 0:
            return 0.0
        if self.p == 2:
            return m * float(np.linalg.norm(a / m))
        return m * float(np.sum((a / m) ** self.p)) ** (1.0 / self.p)

    def __str__(self) -> str:
        if self.kind == "c0":
            return "c0"
        return "l_inf" if math.isinf(self.p) else f"l_{self.p:g}"

    def to_dict(self) -> dict:
        if self.kind == "c0":
            return {"kind": "c0"}
        return {"kind": "lp", "p": self.p}

    @classmethod
    def from_dict(cls, data: dict | None) -> "EllNorm":
        if not data:
            return L1
        if data["kind"] == "c0":
            return C0
        return cls("lp", float(data.get("p", 1.0)))


L1 = EllNorm("lp", 1.0)
L2 = EllNorm("lp", 2.0)
LINF = EllNorm("lp", INF)
C0 = EllNorm("c0")


@dataclass(frozen=True)
class CoordVector:
    """A finitely supported sequence, read as an element or as a functional.

    As a functional it acts by ``u(x) = sum_n u_n x_n``.
    """

    indices: tuple[int, ...]
    values: tuple[float, ...]
    functional: bool = False

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values differ in length")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("indices must be distinct")
        if any(i < 1 for i in self.indices):
            raise IndexError("coordinate indices start at 1")

    @classmethod
    def from_dense(cls, values, functional: bool = False) -> "CoordVector":
        vals = np.asarray(values, dtype=float)
        idx = tuple(int(i) + 1 for i in np.flatnonzero(vals))
        return cls(idx, tuple(float(vals[i - 1]) for i in idx), functional)

    @classmethod
    def unit(cls, n: int, functional: bool = False) -> "CoordVector":
        return cls((n,), (1.0,), functional)

    @property
    def extent(self) -> int:
        return max(self.indices, default=0)

    def dense(self, size: int) -> np.ndarray:
        if self.extent > size:
            raise IndexError(f"coordinate {self.extent} outside 1..{size}")
        out = np.zeros(size)
        for i, v in zip(self.indices, self.values):
            out[i - 1] = v
        return out


def as_dense(x, size: int) -> np.ndarray:
    """Coordinates of ``x`` as a length-``size`` array (zero padded)."""
    if isinstance(x, CoordVector):
        return x.dense(size)
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size > size:
        if np.any(arr[size:] != 0):
            raise IndexError(f"vector has nonzero coordinates beyond n_max={size}")
        return arr[:size].copy()
    out = np.zeros(size)
    out[: arr.size] = arr
    return out


def _weights(A: KotheMatrix, k: int, size: int) -> np.ndarray:
    return A.column(k)[:size]


def _coords(A: KotheMatrix, x) -> np.ndarray:
    if isinstance(x, CoordVector):
        return x.dense(A.n_max)
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size > A.n_max:
        raise IndexError(f"vector of length {arr.size} exceeds n_max={A.n_max}")
    return arr


def seminorm(A: KotheMatrix, ell: EllNorm, x, k: int) -> float:
    """``||x||_k = || (x_n a_n^k)_n ||_ell``."""
    xs = _coords(A, x)
    return ell.norm(mul_array(np.abs(xs), _weights(A, k, xs.size)))


def dual_seminorm(A: KotheMatrix, ell: EllNorm, u, k: int) -> float:
    """``||u||_k^* = sup{|u(x)| : ||x||_k <= 1}``, in closed form.

    For ℓp this is the ℓ_{p'} norm of ``(u_n / a_n^k)``; for c0 the ℓ1 norm.
    A nonzero coefficient on a zero weight gives ``+inf``.
    """
    us = _coords(A, u)
    return ell.dual().norm(div_array(np.abs(us), _weights(A, k, us.size)))


@dataclass(frozen=True)
class KotheSpace:
    """The ℓ-Köthe space ``λ^ℓ(A)`` at truncation ``A.n_max``."""

    matrix: KotheMatrix
    ell: EllNorm = L1

    @property
    def n_max(self) -> int:
        return self.matrix.n_max

    @property
    def k_max(self) -> int:
        return self.matrix.k_max

    def seminorm(self, x, k: int) -> float:
        return seminorm(self.matrix, self.ell, x, k)

    def dual_seminorm(self, u, k: int) -> float:
        return dual_seminorm(self.matrix, self.ell, u, k)

    def basis_seminorm(self, n: int, k: int) -> float:
        return basis_seminorm(self.matrix, n, k)

    def to_dict(self) -> dict:
        out = self.matrix.to_dict()
        out["ell"] = self.ell.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "KotheSpace":
        return cls(KotheMatrix.from_dict(data), EllNorm.from_dict(data.get("ell")))


def _log_norm(logs: np.ndarray, ell: EllNorm) -> float:
    """``log ||y||_ell`` given ``log|y_n|`` (``-inf`` for zeros)."""
    logs = np.asarray(logs, dtype=float)
    if logs.size == 0 or np.all(logs == -INF):
        return -INF
    if np.any(logs == INF):
        return INF
    top = float(logs.max())
    if math.isinf(ell.p):
        return top
    p = ell.p
    return top + math.log(math.fsum(np.exp(p * (logs - top)).tolist())) / p


def log_seminorm(A: KotheMatrix, ell: EllNorm, x, k: int) -> float:
    """``log ||x||_k``, evaluated without forming the weights."""
    xs = _coords(A, x)
    return _log_norm(log_mul(safe_log(np.abs(xs)), A.log_column(k)[: xs.size]), ell)


def log_dual_seminorm(A: KotheMatrix, ell: EllNorm, u, k: int) -> float:
    """``log ||u||_k^*``, evaluated without forming the weights."""
    us = _coords(A, u)
    return _log_norm(log_div(safe_log(np.abs(us)), A.log_column(k)[: us.size]), ell.dual())

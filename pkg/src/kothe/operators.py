"""Matrix and rank-one operators between truncated ℓ-Köthe spaces.

``|T|_{m,k} = sup{ ||Tx||_m : ||x||_k <= 1 }`` is computed exactly when the
domain carries the ℓ1 norm (column formula) or when ``T`` has rank one
(``|u ⊗ x|_{m,k} = ||u||_k^* ||x||_m``).  Other domains get a certified
interval from :func:`opnorm_bounds`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from kothe.extreal import INF, div_array, mul, mul_array
from kothe.spaces import CoordVector, EllNorm, KotheSpace, as_dense

ENUM_CAP = 16
REL_TOL = 1e-9


def as_space(space) -> KotheSpace:
    """Accept a :class:`KotheSpace` or a ``(KotheMatrix, EllNorm)`` pair."""
    if isinstance(space, KotheSpace):
        return space
    matrix, ell = space
    return KotheSpace(matrix, ell)


@dataclass(frozen=True, eq=False)
class MatrixOperator:
    """``T e_i = sum_v u_{vi} e_v``; ``coeffs[v-1, i-1] = u_{vi}``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2:
            raise ValueError("operator coefficients must form a 2-d grid")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def identity(cls, n: int) -> "MatrixOperator":
        return cls(np.eye(n))

    @property
    def domain_dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def codomain_dim(self) -> int:
        return self.coeffs.shape[0]

    def column(self, i: int) -> np.ndarray:
        return self.coeffs[:, i - 1]

    def to_matrix(self) -> "MatrixOperator":
        return self

    def to_dict(self) -> dict:
        return {"kind": "grid", "entries": self.coeffs.tolist()}


@dataclass(frozen=True, eq=False)
class RankOneOperator:
    """``u ⊗ x : z -> u(z) x``, kept in factored form."""

    u: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        u = self.u.dense(self.u.extent) if isinstance(self.u, CoordVector) else self.u
        x = self.x.dense(self.x.extent) if isinstance(self.x, CoordVector) else self.x
        u = np.array(u, dtype=float).ravel()
        x = np.array(x, dtype=float).ravel()
        u.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "x", x)

    @classmethod
    def coordinate(cls, i: int, v: int, domain_dim: int, codomain_dim: int) -> "RankOneOperator":
        """``e_i' ⊗ e_v``."""
        u = np.zeros(domain_dim)
        u[i - 1] = 1.0
        x = np.zeros(codomain_dim)
        x[v - 1] = 1.0
        return cls(u, x)

    @property
    def domain_dim(self) -> int:
        return self.u.size

    @property
    def codomain_dim(self) -> int:
        return self.x.size

    def to_matrix(self) -> MatrixOperator:
        return MatrixOperator(np.outer(self.x, self.u))

    def to_dict(self) -> dict:
        return {"kind": "rank_one", "u": self.u.tolist(), "x": self.x.tolist()}


Operator = MatrixOperator | RankOneOperator


def operator_from_dict(data: dict) -> Operator:
    if data["kind"] == "grid":
        return MatrixOperator(np.array(data["entries"], dtype=float))
    if data["kind"] == "rank_one":
        return RankOneOperator(np.array(data["u"], dtype=float), np.array(data["x"], dtype=float))
    raise ValueError(f"unknown operator kind {data['kind']!r}")


def apply(T: Operator, x) -> np.ndarray:
    """Coordinates of ``Tx``."""
    if isinstance(x, CoordVector) and x.extent > T.domain_dim:
        raise ValueError(f"vector extent {x.extent} exceeds domain dimension {T.domain_dim}")
    if not isinstance(x, CoordVector) and np.asarray(x).size != T.domain_dim:
        raise ValueError(
            f"vector of length {np.asarray(x).size} does not match domain dimension {T.domain_dim}"
        )
    xs = as_dense(x, T.domain_dim)
    if isinstance(T, RankOneOperator):
        return float(T.u @ xs) * T.x
    return T.coeffs @ xs


def compose(R: Operator, S: Operator) -> Operator:
    """``T = RS``; stays rank one whenever a factor is rank one."""
    if R.domain_dim != S.codomain_dim:
        raise ValueError(
            f"cannot compose: R has domain dimension {R.domain_dim}, S has codomain {S.codomain_dim}"
        )
    if isinstance(S, RankOneOperator):
        return RankOneOperator(S.u, apply(R, S.x))
    if isinstance(R, RankOneOperator):
        return RankOneOperator(S.coeffs.T @ R.u, R.x)
    return MatrixOperator(R.coeffs @ S.coeffs)


def rank_one_norm(T: RankOneOperator, dom, cod, p: int, q: int) -> float:
    """``|u ⊗ x|_{p,q} = ||u||_q^* ||x||_p`` with ``0 * inf = 0``."""
    dom, cod = as_space(dom), as_space(cod)
    return mul(dom.dual_seminorm(T.u, q), cod.seminorm(T.x, p))


def column_ratios(T: Operator, dom, cod, m: int, k: int) -> np.ndarray:
    """``||T e_n||_m / ||e_n||_k`` for every domain coordinate ``n``."""
    dom, cod = as_space(dom), as_space(cod)
    M = T.to_matrix()
    if M.domain_dim > dom.n_max or M.codomain_dim > cod.n_max:
        raise ValueError("operator dimensions exceed the truncation of its spaces")
    col_norms = np.array([cod.seminorm(M.coeffs[:, n], m) for n in range(M.domain_dim)])
    return div_array(col_norms, dom.matrix.column(k)[: M.domain_dim])


def opnorm_l1_domain(T: Operator, dom, cod, m: int, k: int) -> float:
    """Exact ``|T|_{m,k}`` for an ℓ1-type domain: ``sup_n ||T e_n||_m / a_n^k``."""
    dom = as_space(dom)
    if dom.ell.kind != "lp" or dom.ell.p != 1:
        raise ValueError(
            f"the column formula needs an l1 domain, got {dom.ell}; use opnorm_bounds instead"
        )
    ratios = column_ratios(T, dom, cod, m, k)
    return float(ratios.max()) if ratios.size else 0.0


@dataclass(frozen=True)
class Effort:
    """Sampling budget for :func:`opnorm_bounds`; deterministic given ``seed``."""

    samples: int = 64
    sweeps: int = 25
    power_iterations: int = 60
    seed: int = 0
    enum_cap: int = ENUM_CAP


@dataclass(frozen=True)
class OpNormBounds:
    lower: float
    upper: float
    exact: bool

    def __post_init__(self):
        if self.lower > self.upper * (1 + REL_TOL) and not math.isinf(self.upper):
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def contains(self, value: float, rtol: float = REL_TOL) -> bool:
        return self.lower * (1 - rtol) <= value <= self.upper * (1 + rtol)

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact}


def _reduced(T: MatrixOperator, dom: KotheSpace, cod: KotheSpace, m: int, k: int):
    """Fold the weights into ``W`` so that ``|T|_{m,k} = ||W||_{dom.ell -> cod.ell}``.

    Columns on zero domain weights are dropped (they are zero whenever the
    norm is finite), as are rows that vanish identically.
    """
    a = dom.matrix.column(k)[: T.domain_dim]
    b = cod.matrix.column(m)[: T.codomain_dim]
    keep = a > 0
    W = mul_array(b[:, None], T.coeffs)[:, keep]
    return div_array(W, a[keep][None, :])


def _norm_rows(W: np.ndarray, ell: EllNorm) -> np.ndarray:
    return np.array([ell.norm(row) for row in W.T]) if W.size else np.zeros(0)


def _ell_norm_cols(Y: np.ndarray, ell: EllNorm) -> np.ndarray:
    """``ell``-norm of every column of ``Y``."""
    A = np.abs(Y)
    p = ell.p
    if math.isinf(p):
        return A.max(axis=0)
    if p == 1:
        return A.sum(axis=0)
    if p == 2:
        return np.sqrt((A * A).sum(axis=0))
    return (A ** p).sum(axis=0) ** (1.0 / p)


def _sign_enumeration(W: np.ndarray, cod_ell: EllNorm) -> float:
    d = W.shape[1]
    best = 0.0
    # fixing the last sign halves the work (norms are even)
    patterns = np.array(list(itertools.product((1.0, -1.0), repeat=max(d - 1, 0))))
    patterns = np.hstack([patterns, np.ones((patterns.shape[0], 1))]) if d else patterns
    for chunk in np.array_split(patterns, max(1, patterns.shape[0] // 4096)):
        vals = _ell_norm_cols(W @ chunk.T, cod_ell)
        best = max(best, float(vals.max()))
    return best


def _dual_direction(z: np.ndarray, ell: EllNorm) -> np.ndarray:
    """A norming functional of ``z`` for ``ell`` (a subgradient of the norm)."""
    p = ell.p
    if math.isinf(p):
        g = np.zeros_like(z)
        j = int(np.argmax(np.abs(z)))
        g[j] = np.sign(z[j]) or 1.0
        return g
    if p == 1:
        return np.sign(z)
    g = np.sign(z) * np.abs(z) ** (p - 1)
    n = np.linalg.norm(g, ord=ell.conjugate_exponent)
    return g / n if n > 0 else g


def _normalize(y: np.ndarray, ell: EllNorm) -> np.ndarray:
    n = ell.norm(y)
    return y / n if n > 0 else y


def _local_search(W: np.ndarray, dom_ell: EllNorm, cod_ell: EllNorm, effort: Effort) -> float:
    rng = np.random.default_rng(effort.seed)
    d = W.shape[1]
    best = 0.0
    starts = [rng.standard_normal(d) for _ in range(effort.samples)]
    for y in starts:
        if math.isinf(dom_ell.p):
            y = np.sign(y)
            y[y == 0] = 1.0
        y = _normalize(y, dom_ell)
        val = cod_ell.norm(W @ y)
        if 1 < dom_ell.p < INF:
            q = dom_ell.conjugate_exponent
            for _ in range(effort.power_iterations):
                w = W.T @ _dual_direction(W @ y, cod_ell)
                if not np.any(w):
                    break
                cand = _normalize(np.sign(w) * np.abs(w) ** (q - 1), dom_ell)
                cval = cod_ell.norm(W @ cand)
                if cval <= val * (1 + 1e-15):
                    break
                y, val = cand, cval
        step = 0.5
        for _ in range(effort.sweeps):
            improved = False
            for j in range(d):
                for t in (step, -step):
                    cand = y.copy()
                    if math.isinf(dom_ell.p):
                        cand[j] = -cand[j]
                    else:
                        cand[j] += t
                    cand = _normalize(cand, dom_ell)
                    cval = cod_ell.norm(W @ cand)
                    if cval > val:
                        y, val, improved = cand, cval, True
            if not improved:
                if math.isinf(dom_ell.p):
                    break
                step /= 2
        best = max(best, val)
    return best


def opnorm_bounds(T: Operator, dom, cod, m: int, k: int, effort: Effort | None = None) -> OpNormBounds:
    """Certified interval ``lower <= |T|_{m,k} <= upper``.

    Upper: the Hölder estimate ``||(||T e_n||_m / a_n^k)_n||_{p'}``, tightened
    by exact formulas where they exist (ℓp -> ℓ∞ rows, spectral norm for
    ℓ2 -> ℓ2).  Lower: normalized basis vectors, exhaustive sign patterns for
    ℓ∞/c0 domains up to ``effort.enum_cap`` coordinates, and seeded random
    starts refined by a nonlinear power method and coordinate ascent.
    """
    effort = effort or Effort()
    dom, cod = as_space(dom), as_space(cod)
    if isinstance(T, RankOneOperator):
        v = rank_one_norm(T, dom, cod, m, k)
        return OpNormBounds(v, v, True)
    ratios = column_ratios(T, dom, cod, m, k)
    basis_lower = float(ratios.max()) if ratios.size else 0.0
    if math.isinf(basis_lower):
        return OpNormBounds(INF, INF, True)
    pdual = dom.ell.conjugate_exponent
    upper = EllNorm("lp", pdual).norm(ratios)
    lower = basis_lower
    if dom.ell.p == 1:
        return OpNormBounds(lower, lower, True)

    W = _reduced(T, dom, cod, m, k)
    if W.size == 0 or not np.any(W):
        return OpNormBounds(0.0, 0.0, True)
    if math.isinf(cod.ell.p):
        upper = min(upper, float(np.max(_norm_rows(W.T, EllNorm("lp", pdual)))))
    if dom.ell.p == 2 and cod.ell.p == 2:
        upper = min(upper, float(np.linalg.norm(W, ord=2)))

    if math.isinf(dom.ell.p) and W.shape[1] <= effort.enum_cap:
        lower = max(lower, _sign_enumeration(W, cod.ell))
    else:
        lower = max(lower, _local_search(W, dom.ell, cod.ell, effort))
        if math.isinf(cod.ell.p):
            # the row formula is attained: pick the worst row's norming vector
            rows = _norm_rows(W.T, EllNorm("lp", pdual))
            v = int(np.argmax(rows))
            y = _normalize(_dual_direction(W[v], EllNorm("lp", pdual)), dom.ell)
            lower = max(lower, cod.ell.norm(W @ y))
    lower = min(lower, upper)
    exact = lower >= upper * (1 - REL_TOL)
    return OpNormBounds(lower, upper, exact)


def opnorm(T: Operator, dom, cod, m: int, k: int, effort: Effort | None = None) -> OpNormBounds:
    """Best available value: exact for rank-one operators and ℓ1 domains."""
    dom = as_space(dom)
    if isinstance(T, RankOneOperator):
        v = rank_one_norm(T, dom, cod, m, k)
        return OpNormBounds(v, v, True)
    if dom.ell.kind == "lp" and dom.ell.p == 1:
        v = opnorm_l1_domain(T, dom, cod, m, k)
        return OpNormBounds(v, v, True)
    return opnorm_bounds(T, dom, cod, m, k, effort)

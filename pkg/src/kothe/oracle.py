"""Independent brute-force baselines.

Nothing here reuses the closed forms of :mod:`kothe.operators` or the
vectorised search of :mod:`kothe.criteria`: operator seminorms are maximised
over explicit points of the unit ball via :func:`apply` and
:func:`seminorm`, and the bounded-pair condition is decided by plain loops
over every nondecreasing level map.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from kothe.certificates import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    Counterexample,
    PerLevel,
    Refutation,
    SearchBudget,
    Verdict,
    Witness,
)
from kothe.growth import BOUNDED, DIVERGING, GrowthClass, GrowthConfig, classify_growth
from kothe.operators import Operator, apply, as_space
from kothe.spaces import KotheMatrix

EXACT_CAP = 16
TINY_N = 8
TINY_K = 4

__all__ = [
    "GrowthClass",
    "GrowthConfig",
    "OracleValue",
    "SignPattern",
    "brute_force_condition",
    "brute_opnorm",
    "classify_growth",
    "nondecreasing_maps",
]


@dataclass(frozen=True)
class SignPattern:
    """A vector of real unit scalars ``±1``."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("sign patterns hold only +1 and -1")

    def __len__(self) -> int:
        return len(self.signs)

    def scaled(self, weights) -> np.ndarray:
        return np.array(self.signs, dtype=float) * np.asarray(weights, dtype=float)

    @classmethod
    def all(cls, n: int) -> Iterator["SignPattern"]:
        """Every pattern with first sign ``+1`` (``±`` symmetry halves the work)."""
        for tail in itertools.product((1, -1), repeat=max(n - 1, 0)):
            yield cls((1,) + tail if n else ())


@dataclass(frozen=True)
class OracleValue:
    value: float
    exact: bool


def _inverse_weights(weights: np.ndarray) -> np.ndarray:
    out = np.empty(weights.size)
    for n, w in enumerate(weights):
        out[n] = math.inf if w == 0 else 1.0 / w
    return out


def brute_opnorm(
    T: Operator, dom, cod, m: int, k: int, density: int = 2000, seed: int = 0, exact: bool | None = None
) -> OracleValue:
    """``sup ||T z||_m`` over explicit points ``z`` of the level-``k`` unit ball.

    ℓ1 domains use the vertices ``±e_n / a_n^k`` and ℓ∞/c0 domains every
    sign pattern scaled by ``1 / a_n^k``; both are exact.  Other domains use
    ``density`` seeded random directions and a coarse grid on the first two
    coordinates, which yields a lower bound.  Asking for ``exact=True``
    above :data:`EXACT_CAP` coordinates raises ``ValueError``.
    """
    dom, cod = as_space(dom), as_space(cod)
    dim = T.domain_dim
    weights = dom.matrix.column(k)[:dim]
    inv = _inverse_weights(weights)
    kind = "l1" if dom.ell.kind == "lp" and dom.ell.p == 1 else (
        "linf" if dom.ell.kind == "c0" or math.isinf(dom.ell.p) else "lp"
    )
    if exact and (kind == "lp" or dim > EXACT_CAP):
        raise ValueError(f"no exact oracle for a {dom.ell} domain of dimension {dim}")

    def image_norm(z: np.ndarray) -> float:
        return cod.seminorm(apply(T, z), m)

    # directions along zero weights are unbounded in the ball
    for n in range(dim):
        if math.isinf(inv[n]):
            e = np.zeros(dim)
            e[n] = 1.0
            if image_norm(e) > 0:
                return OracleValue(math.inf, kind != "lp")

    finite_inv = np.where(np.isinf(inv), 0.0, inv)
    best = 0.0
    if kind == "l1":
        for n in range(dim):
            z = np.zeros(dim)
            z[n] = finite_inv[n]
            best = max(best, image_norm(z))
        return OracleValue(best, True)
    if kind == "linf" and dim <= EXACT_CAP:
        for pattern in SignPattern.all(dim):
            best = max(best, image_norm(pattern.scaled(finite_inv)))
        return OracleValue(best, True)

    rng = np.random.default_rng(seed)
    for _ in range(density):
        y = rng.standard_normal(dim) * (rng.random(dim) < 0.8)
        z = y * finite_inv
        size = dom.seminorm(z, k)
        if size > 0:
            best = max(best, image_norm(z / size))
    if dim >= 1:
        for t in np.linspace(-1.0, 1.0, 41):
            y = np.zeros(dim)
            y[0] = 1.0
            if dim > 1:
                y[1] = t
            z = y * finite_inv
            size = dom.seminorm(z, k)
            if size > 0:
                best = max(best, image_norm(z / size))
    return OracleValue(best, False)


def nondecreasing_maps(K: int, top: int | None = None) -> list[tuple[int, ...]]:
    """Every nondecreasing ``{1..K} -> {1..K}`` with ``N(1) <= top``."""
    top = K if top is None else top
    return [m for m in itertools.combinations_with_replacement(range(1, K + 1), K) if m[0] <= top]


def _ratio(num: float, den: float) -> float:
    if num == 0:
        return 0.0
    if den == 0:
        return math.inf
    if math.isinf(num) and math.isinf(den):
        return 1.0
    return num / den


def brute_force_condition(A: KotheMatrix, B: KotheMatrix, budget: SearchBudget) -> Verdict:
    """Exhaustive ground truth for the bounded-pair matrix condition.

    Every nondecreasing level map with ``N(1) <= N_max`` is tried, with
    every ``N <= N_max`` and every ``r`` and ``k0`` the budget declares; the constant is the
    exact supremum over ``v, i <= s`` for each shell ``s``.  Limited to
    ``n_range <= 8`` and at most 4 levels.
    """
    n = budget.n_range
    K = budget.levels(min(A.k_max, B.k_max))
    if n > TINY_N or K > TINY_K:
        raise ValueError(f"oracle budget too large: n_range={n} (max {TINY_N}), levels={K} (max {TINY_K})")
    a = _rows(A, n, K)
    b = _rows(B, n, K)
    top = budget.n_max_answer(K)
    witnesses, counterexamples, undecided = [], [], []
    for nmap in nondecreasing_maps(K, top):
        refutations, answer = [], None
        for N in range(1, top + 1):
            per_r, refutation, complete = [], None, True
            for r in budget.r_values(K):
                chosen, refuted = None, True
                last = None
                for k0 in range(1, budget.k0_limit(K) + 1):
                    shells = []
                    for s in range(1, n + 1):
                        sup = 0.0
                        for v in range(min(s, len(b))):
                            for i in range(min(s, len(a))):
                                lhs = _ratio(b[v][r - 1], a[i][N - 1])
                                rhs = max(_ratio(b[v][k - 1], a[i][nmap[k - 1] - 1]) for k in range(1, k0 + 1))
                                sup = max(sup, _ratio(lhs, rhs))
                        shells.append(sup)
                    growth = classify_growth(shells, budget.growth)
                    C = shells[-1]
                    if growth.kind == BOUNDED and C <= budget.c_cap:
                        chosen = PerLevel(r, k0, C)
                        break
                    if not (growth.kind == DIVERGING or C > budget.c_cap):
                        refuted = False
                    last = (k0, growth, C)
                if chosen is not None:
                    per_r.append(chosen)
                    continue
                complete = False
                if refuted:
                    refutation = Refutation(N, r, last[0], (), last[1], last[2])
                    break
            if complete:
                answer = Witness(nmap, N, tuple(per_r))
                break
            if refutation is not None:
                refutations.append(refutation)
        if answer is not None:
            witnesses.append(answer)
        elif len(refutations) == top:
            counterexamples.append(Counterexample(nmap, tuple(refutations)))
        else:
            undecided.append(nmap)
    if counterexamples:
        status = FAILS
    elif undecided:
        status = INCONCLUSIVE
    else:
        status = HOLDS
    reason = f"exhaustive: {len(witnesses)} answered, {len(counterexamples)} refuted, {len(undecided)} undecided"
    return Verdict(status, budget, witnesses=tuple(witnesses), counterexamples=tuple(counterexamples), reason=reason)


def _rows(A: KotheMatrix, n: int, K: int) -> list[list[float]]:
    """Plain-float entries of the first ``n`` rows (fewer for a short explicit grid)."""
    rows = n if A.is_generated else min(n, A.n_max)
    M = A.truncate(rows) if A.is_generated else A
    return [[M.entry(i, k) for k in range(1, K + 1)] for i in range(1, rows + 1)]

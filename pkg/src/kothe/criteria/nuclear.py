"""Grothendieck–Pietsch nuclearity at truncation.

``λ(B)`` is nuclear when every level ``N(k)`` admits a level ``S(k) > N(k)``
with ``theta(k) = sum_i b_i^{N(k)} / b_i^{S(k)} < inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from kothe.certificates import FAILS, HOLDS, INCONCLUSIVE, LevelMap, SearchBudget
from kothe.criteria.bounded_pairs import axis_counts, prefix
from kothe.extreal import div, log_div, safe_exp
from kothe.growth import BOUNDED, DIVERGING, GrowthClass, classify_growth
from kothe.spaces import FINITE_TYPE, INFINITE_TYPE, L1, LINF, KotheMatrix, seminorm


@dataclass(frozen=True)
class ThetaTrajectory:
    k: int
    N: int
    S: int
    partial_sums: tuple[float, ...]
    growth: GrowthClass
    terms_decay: bool

    @property
    def theta(self) -> float:
        return self.partial_sums[-1]

    @property
    def bounded(self) -> bool:
        return self.growth.kind == BOUNDED and self.terms_decay

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "S": self.S,
            "theta": self.theta,
            "partial_sums": list(self.partial_sums),
            "growth": self.growth.to_dict(),
            "terms_decay": self.terms_decay,
        }


@dataclass(frozen=True)
class NuclearityReport:
    nmap: LevelMap
    smap: dict[int, int]
    theta: dict[int, ThetaTrajectory]
    status: str
    reason: str = ""
    tried: dict[int, list[ThetaTrajectory]] = field(default_factory=dict)
    symbolic: dict | None = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def theta_value(self, k: int) -> float:
        return self.theta[k].theta

    def to_dict(self) -> dict:
        return {
            "Nmap": list(self.nmap),
            "Smap": {str(k): s for k, s in self.smap.items()},
            "theta": {str(k): t.to_dict() for k, t in self.theta.items()},
            "verdict": self.status,
            "reason": self.reason,
            "symbolic": self.symbolic,
        }


def theta_trajectory(B: KotheMatrix, k: int, N: int, S: int, budget: SearchBudget) -> ThetaTrajectory:
    """Partial sums ``sum_{i <= n} b_i^N / b_i^S`` for ``n = 1..n_range``.

    Besides the growth class of the partial sums, ``bounded`` demands that
    ``n * t_n`` decays over the late window (``n t_n -> 0`` is necessary for
    convergence of a decreasing series); this rejects harmonic-like sums
    whose logarithmic growth hides inside the tolerance.
    """
    Bn = prefix(B, budget.n_range)
    LB = Bn.log_values
    terms = safe_exp(log_div(LB[:, N - 1], LB[:, S - 1]))
    counts = axis_counts(Bn, budget.n_range)
    # correctly rounded prefix sums stay nondecreasing, unlike cumsum
    values = terms.tolist()
    sums = np.array([math.fsum(values[:c]) for c in counts])
    growth = classify_growth(sums, budget.growth)
    # n t_n over the rows of the late shells against the rows before them
    weighted = terms * np.arange(1, terms.size + 1)
    cut = int(counts[-growth.window - 1]) if counts.size > growth.window else 0
    early, late = weighted[:cut], weighted[cut:]
    if late.size == 0:
        decay = True
    elif early.size == 0 or early.max() == 0:
        decay = bool(late.max() == 0)
    else:
        decay = bool(late.max() <= 0.5 * early.max())
    return ThetaTrajectory(k, N, S, tuple(float(s) for s in sums), growth, decay)


def nuclear_symbolic(B: KotheMatrix, budget: SearchBudget) -> dict:
    """Exponent-space shortcut for power-series matrices.

    Infinite type is nuclear iff ``sup_n log(n) / alpha_n < inf``; finite type
    iff ``log(n) / alpha_n -> 0``.  Both are judged on ``n = 2..n_range``.
    """
    gen = B.generator
    n = np.arange(2, budget.n_range + 1)
    alphas = np.array([gen.alpha(int(i)) for i in n])
    with np.errstate(divide="ignore"):
        q = np.where(alphas > 0, np.log(n) / np.where(alphas > 0, alphas, 1.0), np.inf)
    if np.isinf(q).any():
        return {"kind": gen.kind, "verdict": FAILS, "detail": "alpha_n = 0 beyond n = 1", "ratios": q.tolist()}
    growth = classify_growth(q, budget.growth)
    if gen.kind == INFINITE_TYPE:
        status = {BOUNDED: HOLDS, DIVERGING: FAILS}.get(growth.kind, INCONCLUSIVE)
    else:
        if growth.late_max <= 0.5 * growth.early_max:
            status = HOLDS
        elif growth.kind == BOUNDED and q[-growth.window :].min() >= 0.5 * growth.early_max:
            status = FAILS
        else:
            status = INCONCLUSIVE
    return {"kind": gen.kind, "verdict": status, "growth": growth.to_dict(), "ratios": q.tolist()}


def check_nuclear(
    B: KotheMatrix,
    nmap: LevelMap,
    budget: SearchBudget | None = None,
    smap: dict[int, int] | None = None,
) -> NuclearityReport:
    """Search ``S(k) > N(k)`` with a convergent ``theta(k)`` for every level.

    Levels with ``N(k) = k_max`` have no room above them and are skipped.  A
    level with no bounded ``S(k)`` up to ``k_max`` makes the report ``fails``.
    An explicit ``smap`` is evaluated instead of searched.
    """
    budget = budget or SearchBudget()
    K = budget.levels(B.k_max)
    nmap = tuple(nmap)
    chosen: dict[int, int] = {}
    thetas: dict[int, ThetaTrajectory] = {}
    tried: dict[int, list[ThetaTrajectory]] = {}
    failed = []
    for k in range(1, min(len(nmap), K) + 1):
        N = nmap[k - 1]
        if smap is not None:
            if k not in smap:
                continue
            candidates = [smap[k]]
            if smap[k] <= N:
                raise ValueError(f"S({k}) = {smap[k]} must exceed N({k}) = {N}")
        else:
            candidates = range(N + 1, K + 1)
        tried[k] = []
        for S in candidates:
            traj = theta_trajectory(B, k, N, S, budget)
            tried[k].append(traj)
            if traj.bounded:
                chosen[k], thetas[k] = S, traj
                break
        if k not in chosen and tried[k]:
            failed.append(k)
    symbolic = nuclear_symbolic(B, budget) if B.is_generated else None
    if failed:
        status, reason = FAILS, f"no level S(k) <= {K} gives a convergent theta for k in {failed}"
    elif not chosen:
        status, reason = INCONCLUSIVE, "no level below k_max to test"
    else:
        status, reason = HOLDS, "every tested level has a convergent theta"
    return NuclearityReport(nmap, chosen, thetas, status, reason, tried, symbolic)


def norm_system_equivalence_check(
    B: KotheMatrix, report: NuclearityReport, budget: SearchBudget | None = None, samples: int = 100
) -> float:
    """Largest ratio in the two estimates tying ``λ^{ℓ∞}(B)`` to ``λ(B)``.

    For seeded random ``x``: ``||x||_k^{ℓ∞} <= ||x||_k^{ℓ1}`` and
    ``||x||_{N(k)}^{ℓ1} <= theta(k) ||x||_{S(k)}^{ℓ∞}``.  Both ratios are at
    most one when the report is sound.
    """
    budget = budget or SearchBudget()
    if not report.holds:
        raise ValueError("the nuclearity report does not hold at scale")
    Bn = prefix(B, budget.n_range)
    rng = np.random.default_rng(budget.seed)
    worst = 0.0
    for _ in range(samples):
        x = rng.standard_normal(Bn.n_max) * (rng.random(Bn.n_max) < 0.7)
        for k, S in report.smap.items():
            N = report.nmap[k - 1]
            theta = report.theta_value(k)
            r1 = div(seminorm(Bn, LINF, x, k), seminorm(Bn, L1, x, k))
            r2 = div(seminorm(Bn, L1, x, N), theta * seminorm(Bn, LINF, x, S))
            worst = max(worst, r1, r2)
    return worst


__all__ = [
    "NuclearityReport",
    "ThetaTrajectory",
    "check_nuclear",
    "norm_system_equivalence_check",
    "nuclear_symbolic",
    "theta_trajectory",
    "FINITE_TYPE",
]

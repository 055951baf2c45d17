"""Continuity and boundedness of a single operator at truncation.

Both notions reduce to whether ``|T|_{m,k}`` is finite.  At truncation the
seminorm of the compression of ``T`` to the first ``s`` domain coordinates
is tracked for ``s = 1..n_range`` and its growth decides finiteness.  For
ℓ1 domains and rank-one operators the sequence is exact; otherwise the
column sup (lower) decides divergence and the Hölder bound (upper) decides
boundedness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kothe.certificates import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    Counterexample,
    LevelMap,
    PerLevel,
    Refutation,
    SearchBudget,
    Verdict,
    Witness,
)
from kothe.extreal import div, div_array
from kothe.growth import BOUNDED, DIVERGING, GrowthClass, classify_growth
from kothe.operators import Effort, Operator, RankOneOperator, as_space, opnorm
from kothe.spaces import EllNorm, KotheSpace


@dataclass(frozen=True)
class ContinuityWitness:
    """A level map ``N(.)`` with ``|T|_{k,N(k)} = M(k)`` finite at scale."""

    nmap: LevelMap
    bounds: tuple[float, ...]

    def to_dict(self) -> dict:
        return {"Nmap": list(self.nmap), "bound_per_level": list(self.bounds)}

    @classmethod
    def from_dict(cls, data: dict) -> "ContinuityWitness":
        return cls(tuple(data["Nmap"]), tuple(float(b) for b in data["bound_per_level"]))


@dataclass(frozen=True)
class ShellNorms:
    lower: np.ndarray
    upper: np.ndarray
    columns: np.ndarray  # per-column ratio ||T e_n||_m / a_n^k

    @property
    def exact(self) -> bool:
        return bool(np.array_equal(self.lower, self.upper))


def _widen(space: KotheSpace, n: int) -> KotheSpace:
    if space.n_max < n and space.matrix.is_generated:
        return KotheSpace(space.matrix.truncate(n), space.ell)
    return space


def shell_norms(T: Operator, dom, cod, m: int, k: int, n: int) -> ShellNorms:
    """``|T P_s|_{m,k}`` bounds for the compressions to coordinates ``1..s``."""
    dom, cod = _widen(as_space(dom), n), as_space(cod)
    if isinstance(T, RankOneOperator):
        x = T.x[: cod.n_max]
        xn = cod.seminorm(x, m)
        u = np.zeros(n)
        u[: min(n, T.u.size)] = T.u[:n]
        vals = np.array([0.0 if xn == 0 else xn * dom.dual_seminorm(u[:s], k) for s in range(1, n + 1)])
        cols = div_array(np.abs(u) * xn, dom.matrix.column(k)[:n])
        return ShellNorms(vals, vals, cols)
    M = T.to_matrix().coeffs
    M = M[: cod.n_max, :n]
    norms = np.array([cod.seminorm(M[:, c], m) for c in range(M.shape[1])])
    cols = np.zeros(n)
    cols[: norms.size] = div_array(norms, dom.matrix.column(k)[: norms.size])
    lower = np.maximum.accumulate(cols)
    if dom.ell.kind == "lp" and dom.ell.p == 1:
        return ShellNorms(lower, lower, cols)
    dual = EllNorm("lp", dom.ell.conjugate_exponent)
    upper = np.array([dual.norm(cols[:s]) for s in range(1, n + 1)])
    return ShellNorms(lower, upper, cols)


def _finite(shells: ShellNorms, budget: SearchBudget) -> tuple[str, GrowthClass]:
    """``bounded`` / ``diverging`` / ``inconclusive`` for one level pair."""
    hi = classify_growth(shells.upper, budget.growth)
    if hi.kind == BOUNDED and shells.upper[-1] <= budget.c_cap:
        return BOUNDED, hi
    lo = hi if shells.exact else classify_growth(shells.lower, budget.growth)
    if lo.kind == DIVERGING or shells.lower[-1] > budget.c_cap:
        return DIVERGING, lo
    return INCONCLUSIVE, hi


def continuity_witness(T: Operator, dom, cod, budget: SearchBudget | None = None):
    """Least ``N(k)`` per level ``k`` with ``|T|_{k,N(k)}`` finite at scale.

    Returns a :class:`ContinuityWitness`, or a ``fails`` / ``inconclusive``
    :class:`Verdict` naming the first level without an admissible ``N(k)``.
    """
    budget = budget or SearchBudget()
    dom, cod = as_space(dom), as_space(cod)
    K = budget.levels(min(dom.k_max, cod.k_max))
    nmap, bounds = [], []
    for k in range(1, K + 1):
        found = None
        abstained = False
        for N in range(1, K + 1):
            shells = shell_norms(T, dom, cod, k, N, budget.n_range)
            status, _ = _finite(shells, budget)
            if status == BOUNDED:
                found = (N, float(shells.upper[-1]))
                break
            abstained |= status == INCONCLUSIVE
        if found is None:
            status = INCONCLUSIVE if abstained else FAILS
            why = "classifier abstained" if abstained else "every level diverges"
            return Verdict(status, budget, reason=f"no level N(k) for k={k}: {why}")
        nmap.append(found[0])
        bounds.append(found[1])
    return ContinuityWitness(tuple(nmap), tuple(bounds))


def boundedness_witness(T: Operator, dom, cod, budget: SearchBudget | None = None) -> Verdict:
    """Search one level ``N`` with ``|T|_{r,N}`` finite for every budgeted ``r``.

    A ``holds`` verdict carries a witness with an empty level map and
    ``k0 = None``; a ``fails`` verdict cites, for each candidate ``N``, a
    level ``r`` and the worst column per shell.
    """
    budget = budget or SearchBudget()
    dom, cod = as_space(dom), as_space(cod)
    K = budget.levels(min(dom.k_max, cod.k_max))
    refutations = []
    undecided = False
    for N in budget.answers(K):
        per_r, refutation, complete = [], None, True
        for r in budget.r_values(K):
            shells = shell_norms(T, dom, cod, r, N, budget.n_range)
            status, growth = _finite(shells, budget)
            if status == BOUNDED:
                per_r.append(PerLevel(r, None, float(shells.upper[-1])))
                continue
            complete = False
            if status == DIVERGING:
                trail = []
                for s in range(1, budget.n_range + 1):
                    c = int(np.argmax(shells.columns[:s]))
                    trail.append(((c + 1,), float(shells.columns[c])))
                refutation = Refutation(N, r, 0, tuple(trail), growth, float(shells.lower[-1]))
                break
        if complete:
            w = Witness((), N, tuple(per_r))
            return Verdict(HOLDS, budget, witnesses=(w,), reason=f"level N={N} bounds every r")
        if refutation is None:
            undecided = True
        else:
            refutations.append(refutation)
    if not undecided:
        ce = Counterexample((), tuple(refutations))
        return Verdict(FAILS, budget, counterexamples=(ce,), reason="every level N meets a diverging r")
    return Verdict(INCONCLUSIVE, budget, reason="growth classifier abstained for some N")


@dataclass(frozen=True)
class VogtReport:
    """Worst ``|T|_{r,N} / (C max_{k<=k0} |T|_{k,N(k)})`` over a family of operators.

    ``max_ratio`` divides the upper bound by the lower bound (sound for a
    confirmation), ``optimistic_ratio`` the lower by the upper (sound for a
    refutation).  ``max_scaled_ratio`` further divides each ratio by ``k0``.
    """

    max_ratio: float
    optimistic_ratio: float
    max_scaled_ratio: float
    worst: tuple[int, int] | None
    status: str
    checked: int

    def to_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "optimistic_ratio": self.optimistic_ratio,
            "max_scaled_ratio": self.max_scaled_ratio,
            "worst": list(self.worst) if self.worst else None,
            "status": self.status,
            "checked": self.checked,
        }


def vogt_inequality_check(
    operators,
    dom,
    cod,
    witness: Witness,
    r: int | None = None,
    effort: Effort | None = None,
    rtol: float = 1e-9,
) -> VogtReport:
    """Replay a bounded-pair witness against explicit operators.

    ``status`` is ``holds`` when the conservative ratio is at most
    ``1 + rtol``, ``fails`` when even the optimistic ratio exceeds it, and
    ``inconclusive`` otherwise.
    """
    dom, cod = as_space(dom), as_space(cod)
    entries = [witness.entry(r)] if r is not None else list(witness.per_r)
    worst_c = worst_o = worst_s = 0.0
    worst = None
    checked = 0
    for t_idx, T in enumerate(operators):
        for p in entries:
            lhs = opnorm(T, dom, cod, p.r, witness.N, effort)
            rhs = [opnorm(T, dom, cod, k, witness.nmap[k - 1], effort) for k in range(1, p.k0 + 1)]
            lo = max(b.lower for b in rhs) * p.C
            hi = max(b.upper for b in rhs) * p.C
            cons, opt = div(lhs.upper, lo), div(lhs.lower, hi)
            checked += 1
            if cons > worst_c:
                worst_c, worst = cons, (t_idx, p.r)
            worst_o = max(worst_o, opt)
            worst_s = max(worst_s, cons / p.k0)
    if worst_c <= 1 + rtol:
        status = HOLDS
    elif worst_o > 1 + rtol:
        status = FAILS
    else:
        status = INCONCLUSIVE
    return VogtReport(worst_c, worst_o, worst_s, worst, status, checked)


__all__ = [
    "ContinuityWitness",
    "ShellNorms",
    "VogtReport",
    "boundedness_witness",
    "continuity_witness",
    "shell_norms",
    "vogt_inequality_check",
]

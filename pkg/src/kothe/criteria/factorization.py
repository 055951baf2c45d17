"""Bounded factorization: operators ``E -> F -> G`` whose composites are bounded.

Two checkers share the quantifier search of :mod:`kothe.criteria.search`:

* :func:`check_bf_operators` works on explicit factor pairs ``(R, S)`` and
  the operator inequality
  ``|RS|_{r,N} <= C max_{k<=k0} |R|_{k,N(k)} max_{k<=k0} |S|_{k,N(k)}``;
* :func:`check_bf_condition` works on the matrix form
  ``c_j^r ||u||_N^* <= C max_k{||u||_{N(k)}^* b_i^k} max_k{c_j^k / b_i^{N(k)}}``
  over rows ``i`` of ``B``, rows ``j`` of ``C`` and functionals ``u``.

:func:`combine_witnesses` assembles a witness for a tensor-product middle
space from a dual witness and a matrix-pair witness.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from kothe.certificates import (
    FAILS,
    LevelMap,
    PerLevel,
    SearchBudget,
    Verdict,
    Witness,
)
from kothe.criteria.bounded_pairs import axis_counts, prefix
from kothe.criteria.families import FunctionalFamily
from kothe.criteria.nuclear import check_nuclear
from kothe.criteria.search import (
    Cell,
    classify_cell,
    numeric_evaluator,
    quantifier_search,
    shell_sups,
    shell_trail,
)
from kothe.extreal import INF, div, log_div, log_mul, safe_exp
from kothe.growth import INCONCLUSIVE
from kothe.operators import Effort, Operator, RankOneOperator, as_space, compose, opnorm
from kothe.spaces import KotheMatrix, KotheSpace

COMBINED = "combined"


# ---------------------------------------------------------------- matrix form


def _running_max(terms: list[np.ndarray]) -> list[np.ndarray]:
    out = []
    for t in terms:
        out.append(t if not out else np.maximum(out[-1], t))
    return out


class FactorRatios:
    """Log ratios over ``(i, j, u)``: rows of ``B``, rows of ``C``, functionals."""

    def __init__(self, family: FunctionalFamily, B: KotheMatrix, C: KotheMatrix, n: int):
        B, C = prefix(B, n), prefix(C, n)
        self.LB, self.LC = B.log_values, C.log_values
        self.LD = family.log_duals
        self.counts = [axis_counts(B, n), axis_counts(C, n), family.shell_counts(n)]
        self.labels = [
            list(range(1, len(self.LB) + 1)),
            list(range(1, len(self.LC) + 1)),
            list(range(len(family))),
        ]
        self._cache: dict[LevelMap, tuple[list, list]] = {}

    def _rhs(self, nmap: LevelMap, k0: int):
        runs = self._cache.get(nmap)
        if runs is None:
            LB, LC, LD = self.LB, self.LC, self.LD
            dual_terms, weight_terms = [], []
            for k in range(1, len(nmap) + 1):
                Nk = nmap[k - 1] - 1
                # ||u||_{N(k)}^* b_i^k over (i, u)
                dual_terms.append(log_mul(LB[:, k - 1][:, None], LD[:, Nk][None, :]))
                # c_j^k / b_i^{N(k)} over (i, j)
                weight_terms.append(log_div(LC[:, k - 1][None, :], LB[:, Nk][:, None]))
            runs = (_running_max(dual_terms), _running_max(weight_terms))
            self._cache[nmap] = runs
        return runs[0][k0 - 1], runs[1][k0 - 1]

    def log_ratios(self, nmap, N, r, k0) -> np.ndarray:
        lhs = log_mul(self.LC[:, r - 1][:, None], self.LD[:, N - 1][None, :])  # (j, u)
        dual_part, weight_part = self._rhs(tuple(nmap), k0)
        rhs = log_mul(dual_part[:, None, :], weight_part[:, :, None])  # (i, j, u)
        return log_div(lhs[None, :, :], rhs)

    def shell_logs(self, nmap, N, r, k0):
        return shell_sups(self.log_ratios(nmap, N, r, k0), self.counts)

    def trail(self, nmap, N, r, k0):
        return shell_trail(self.log_ratios(nmap, N, r, k0), self.counts, self.labels)


def check_bf_condition(
    family: FunctionalFamily,
    B: KotheMatrix,
    C: KotheMatrix,
    budget: SearchBudget | None = None,
    check_nuclearity: bool = True,
) -> Verdict:
    """Numeric verdict on the factorization condition through ``λ(B)``.

    The sufficiency direction needs ``λ(B)`` nuclear; when the nuclearity
    test fails for some budgeted map a warning is issued and the search runs
    anyway, since necessity holds without it.
    """
    budget = budget or SearchBudget()
    K = budget.levels(min(B.k_max, C.k_max, family.space.k_max))
    notes = [f"{len(family)} functionals stand in for E'"]
    if check_nuclearity:
        bad = [m for m in budget.maps(K) if check_nuclear(B, m, budget).status == FAILS]
        if bad:
            msg = f"middle space is not nuclear at scale for maps {bad}; only necessity is meaningful"
            warnings.warn(msg, stacklevel=2)
            notes.append(msg)
    problem = FactorRatios(family, B, C, budget.n_range)
    return quantifier_search(
        budget, K, numeric_evaluator(problem, budget), problem.trail, notes=tuple(notes)
    )


@dataclass(frozen=True)
class PointwiseReport:
    """Pointwise replay of a witness over every budgeted index triple."""

    checked: int
    violations: int
    max_ratio: float
    per_r: tuple[tuple[int, float], ...]

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "violations": self.violations,
            "max_ratio": self.max_ratio,
            "per_r": [{"r": r, "ratio": v} for r, v in self.per_r],
        }


def verify_bf_witness(
    family: FunctionalFamily,
    B: KotheMatrix,
    C: KotheMatrix,
    witness: Witness,
    budget: SearchBudget | None = None,
    rtol: float = 1e-9,
) -> PointwiseReport:
    """Check ``LHS <= C_r * RHS`` at every ``(i, j, u)`` for every recorded ``r``.

    ``max_ratio`` is the largest ``LHS / (C_r * RHS)``; a violation is a
    ratio above ``1 + rtol``.
    """
    budget = budget or SearchBudget()
    problem = FactorRatios(family, B, C, budget.n_range)
    checked = violations = 0
    worst = 0.0
    per_r = []
    for p in witness.per_r:
        L = problem.log_ratios(witness.nmap, witness.N, p.r, p.k0) - math.log(p.C)
        ratios = safe_exp(L)
        checked += ratios.size
        violations += int((ratios > 1 + rtol).sum())
        top = float(ratios.max()) if ratios.size else 0.0
        per_r.append((p.r, top))
        worst = max(worst, top)
    return PointwiseReport(checked, violations, worst, tuple(per_r))


# ------------------------------------------------------------- operator form


@dataclass(frozen=True)
class FactorPair:
    R: Operator
    S: Operator

    @property
    def extent(self) -> int:
        """Largest coordinate index touched by either factor."""
        return max(_extent(self.R), _extent(self.S))


def _extent(T: Operator) -> int:
    if isinstance(T, RankOneOperator):
        parts = [np.flatnonzero(T.u), np.flatnonzero(T.x)]
        if any(p.size == 0 for p in parts):
            return 0
        return int(max(p[-1] for p in parts)) + 1
    rows, cols = np.nonzero(T.coeffs)
    if rows.size == 0:
        return 0
    return int(max(rows.max(), cols.max())) + 1


def rank_one_factor_pairs(family: FunctionalFamily, F: KotheSpace, G: KotheSpace, n: int) -> list[FactorPair]:
    """``S = u ⊗ e_i`` and ``R = e_i' ⊗ e_j`` for ``i, j <= n`` and ``u`` in ``family``."""
    pairs = []
    for u in family.functionals:
        for i in range(1, n + 1):
            S = RankOneOperator(u, np.eye(F.n_max)[i - 1])
            for j in range(1, n + 1):
                R = RankOneOperator(np.eye(F.n_max)[i - 1], np.eye(G.n_max)[j - 1])
                pairs.append(FactorPair(R, S))
    return pairs


class _NormTables:
    """``(lower, upper)`` operator seminorms of ``RS``, ``R`` and ``S`` at all level pairs."""

    def __init__(self, pair: FactorPair, E: KotheSpace, F: KotheSpace, G: KotheSpace, K: int, effort: Effort):
        T = compose(pair.R, pair.S)
        self.T = self._table(T, E, G, K, effort)
        self.R = self._table(pair.R, F, G, K, effort)
        self.S = self._table(pair.S, E, F, K, effort)
        self.exact = all(t[2] for t in (self.T, self.R, self.S))

    @staticmethod
    def _table(op, dom, cod, K, effort):
        lo = np.zeros((K, K))
        hi = np.zeros((K, K))
        exact = True
        for m in range(1, K + 1):
            for k in range(1, K + 1):
                b = opnorm(op, dom, cod, m, k, effort)
                lo[m - 1, k - 1], hi[m - 1, k - 1] = b.lower, b.upper
                exact &= b.exact
        return lo, hi, exact


def _factor_max(table: np.ndarray, nmap: LevelMap, k0: int) -> float:
    return max(float(table[k - 1, nmap[k - 1] - 1]) for k in range(1, k0 + 1))


def _ratio(lhs: float, r_fac: float, s_fac: float) -> float:
    rhs = 0.0 if (r_fac == 0 or s_fac == 0) else r_fac * s_fac
    return div(lhs, rhs)


class OperatorRatios:
    """Conservative and optimistic ratios of the operator inequality per factor pair."""

    def __init__(self, pairs, spaces, K: int, budget: SearchBudget, effort: Effort):
        E, F, G = (as_space(s) for s in spaces)
        order = sorted(range(len(pairs)), key=lambda p: pairs[p].extent)
        self.pairs = [pairs[p] for p in order]
        self.tables = [_NormTables(p, E, F, G, K, effort) for p in self.pairs]
        self.exact = all(t.exact for t in self.tables)
        extents = np.array([p.extent for p in self.pairs])
        n = budget.n_range
        if len(set(extents.tolist())) >= budget.growth.min_samples:
            self.counts = np.array([int((extents <= s).sum()) for s in range(1, n + 1)])
        else:
            # too few distinct extents: nested prefixes of the extent order,
            # padded with repeated shells when there are very few pairs
            P = len(self.pairs)
            shells = max(min(n, P), min(n, budget.growth.min_samples))
            self.counts = np.array([math.ceil(s * P / shells) for s in range(1, shells + 1)])

    def ratios(self, nmap, N, r, k0) -> tuple[np.ndarray, np.ndarray]:
        cons, opt = [], []
        for t in self.tables:
            lhs_lo, lhs_hi = t.T[0][r - 1, N - 1], t.T[1][r - 1, N - 1]
            R_lo, R_hi = _factor_max(t.R[0], nmap, k0), _factor_max(t.R[1], nmap, k0)
            S_lo, S_hi = _factor_max(t.S[0], nmap, k0), _factor_max(t.S[1], nmap, k0)
            cons.append(_ratio(lhs_hi, R_lo, S_lo))
            opt.append(_ratio(lhs_lo, R_hi, S_hi))
        return np.array(cons), np.array(opt)

    def shells(self, values: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            logs = np.log(values)
        return shell_sups(logs, [self.counts])


def _operator_cell(problem: OperatorRatios, budget: SearchBudget, nmap, N, r, k0) -> Cell:
    cons, opt = problem.ratios(nmap, N, r, k0)
    hi = classify_cell(problem.shells(cons), budget)
    if problem.exact:
        return hi
    lo = classify_cell(problem.shells(opt), budget)
    if hi.admissible:
        return hi
    if lo.refuting:
        return Cell(lo.status, lo.C, lo.growth)
    return Cell(INCONCLUSIVE, hi.C, hi.growth)


def check_bf_operators(
    pairs,
    spaces,
    budget: SearchBudget | None = None,
    effort: Effort | None = None,
) -> Verdict:
    """Quantifier search for the operator inequality over factor pairs ``(R, S)``.

    ``spaces`` is ``(E, F, G)``.  Norms are exact for rank-one factors and
    ℓ1 domains; otherwise the left side uses upper bounds and the right side
    lower bounds (sound for ``holds``), and ``fails`` needs the optimistic
    ratios to diverge as well.  Disagreement leaves the cell inconclusive.
    """
    budget = budget or SearchBudget()
    effort = effort or Effort(seed=budget.seed)
    pairs = [p if isinstance(p, FactorPair) else FactorPair(*p) for p in pairs]
    if not pairs:
        raise ValueError("no factor pairs given")
    K = budget.levels(min(as_space(s).k_max for s in spaces))
    problem = OperatorRatios(pairs, spaces, K, budget, effort)

    def evaluate(nmap, N, r, k0):
        return _operator_cell(problem, budget, nmap, N, r, k0)

    notes = ("exact norms" if problem.exact else "interval norms: conservative left, optimistic right",)
    return quantifier_search(budget, K, evaluate, notes=notes)


def operator_constants(pairs, spaces, witness: Witness, budget: SearchBudget | None = None, effort=None) -> dict:
    """Least ``C`` per ``r`` that the witness's ``(N, k0)`` needs on these pairs.

    Uses the conservative ratio (upper bound over lower bound).
    """
    budget = budget or SearchBudget()
    effort = effort or Effort(seed=budget.seed)
    pairs = [p if isinstance(p, FactorPair) else FactorPair(*p) for p in pairs]
    K = max(witness.nmap)
    K = max(K, max(p.k0 for p in witness.per_r), max(p.r for p in witness.per_r))
    problem = OperatorRatios(pairs, spaces, K, budget, effort)
    out = {}
    for p in witness.per_r:
        cons, _ = problem.ratios(witness.nmap, witness.N, p.r, p.k0)
        out[p.r] = float(cons.max()) if cons.size else 0.0
    return out


def proof_bound(shifted_witness: Witness, theta: dict[int, float]) -> dict[int, float]:
    """``C * sum_{k <= k0} theta(k)`` per ``r``: the constant the sufficiency chain promises.

    Levels without a recorded ``theta`` contribute ``inf``.
    """
    out = {}
    for p in shifted_witness.per_r:
        total = math.fsum(theta.get(k, INF) for k in range(1, p.k0 + 1))
        out[p.r] = p.C * total
    return out


# ---------------------------------------------------------- witness splicing


def splice_map(nmap: LevelMap, n: int, K: int | None = None) -> LevelMap:
    """``S(k) = N(n)`` for ``k <= n`` and ``max(N(k) + 1, N(n))`` beyond, capped at ``K``."""
    nmap = tuple(nmap)
    K = K if K is not None else len(nmap)
    if not 1 <= n <= len(nmap):
        raise ValueError(f"level n={n} outside 1..{len(nmap)}")
    out = []
    for k in range(1, len(nmap) + 1):
        s = nmap[n - 1] if k <= n else max(nmap[k - 1] + 1, nmap[n - 1])
        out.append(min(s, K))
    return tuple(out)


def _pick(source, nmap: LevelMap) -> Witness:
    if isinstance(source, Witness):
        if source.nmap != tuple(nmap):
            raise LookupError(f"witness answers {source.nmap}, not {tuple(nmap)}")
        return source
    if isinstance(source, Verdict):
        return source.witness_for(nmap)
    for w in source:
        if w.nmap == tuple(nmap):
            return w
    raise LookupError(f"no witness answers the level map {tuple(nmap)}")


def combine_witnesses(dual_source, pair_source, nmap: LevelMap, K: int | None = None) -> Witness:
    """Witness for the tensor-product condition built from two bounded-pair witnesses.

    ``pair_source`` must answer ``nmap`` with level ``n`` (matrix pair
    ``(B, C)``); ``dual_source`` must answer the spliced map ``S`` with level
    ``m`` (functionals against ``A``).  For every ``r`` with entry
    ``(k0, C1)`` the combined entry uses the levels ``q = N(k)``, ``k <= k0``:

        s = max(k0, n, max_q s0(q)),     C = C1 * max_q C2(q).

    Including ``n`` in ``s`` covers the levels ``k <= n`` where ``S(k)``
    equals ``N(n)``.  Raises ``LookupError`` when a needed witness or level
    is missing from the budgets that produced the sources.
    """
    nmap = tuple(nmap)
    K = K if K is not None else len(nmap)
    w_bc = _pick(pair_source, nmap)
    n = w_bc.N
    smap = splice_map(nmap, n, K)
    w_ec = _pick(dual_source, smap)
    per_r = []
    for p in w_bc.per_r:
        qs = sorted({nmap[k - 1] for k in range(1, p.k0 + 1)})
        try:
            entries = [w_ec.entry(q) for q in qs]
        except KeyError as exc:
            raise LookupError(f"dual witness lacks level {exc.args[0]}; widen its r_range") from exc
        s = max([p.k0, n] + [e.k0 for e in entries])
        if s > K:
            raise LookupError(f"combined level s={s} exceeds the {K} available levels")
        C = p.C * max(e.C for e in entries)
        per_r.append(PerLevel(p.r, s, C))
    return Witness(nmap, w_ec.N, tuple(per_r), COMBINED)


__all__ = [
    "COMBINED",
    "FactorPair",
    "FactorRatios",
    "PointwiseReport",
    "check_bf_condition",
    "check_bf_operators",
    "combine_witnesses",
    "operator_constants",
    "proof_bound",
    "rank_one_factor_pairs",
    "splice_map",
    "verify_bf_witness",
]

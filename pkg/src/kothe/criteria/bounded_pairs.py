"""Bounded pairs: every continuous operator into an ℓ-Köthe space is bounded.

``check_b_matrix_pair`` decides, at truncation,

    b_v^r / a_i^N <= C max_{k <= k0} b_v^k / a_i^{N(k)}      (all v, i)

for ``(λ(A), λ^ℓ(B))``; ``check_b_dual`` decides the analogue

    a_v^r ||u||_N^* <= C max_{k <= k0} a_v^k ||u||_{N(k)}^*   (all v, u)

for ``(E, λ^ℓ(A))`` with ``u`` drawn from a finite functional family.
"""

from __future__ import annotations

import numpy as np

from kothe.certificates import LevelMap, SearchBudget, Verdict
from kothe.criteria.families import FunctionalFamily
from kothe.criteria.search import numeric_evaluator, quantifier_search, shell_sups, shell_trail
from kothe.extreal import log_div, log_mul
from kothe.spaces import L1, EllNorm, KotheMatrix


def diagonal_extents(A: KotheMatrix) -> np.ndarray | None:
    """Anti-diagonal index ``v + z - 1`` of each row of a diagonally paired matrix.

    ``None`` unless ``A`` carries index pairs in nondecreasing diagonal
    order (as produced by the default tensor pairing).
    """
    if A.pairs is None:
        return None
    ext = np.array([v + z - 1 for v, z in A.pairs])
    if ext.size and np.all(np.diff(ext) >= 0):
        return ext
    return None


def prefix(A: KotheMatrix, n: int) -> KotheMatrix:
    """The rows of ``A`` inside shells ``1..n``.

    Plain matrices are cut (or, if generated, extended) to ``n`` rows.  A
    diagonally paired matrix keeps every pair on the first ``n``
    anti-diagonals, so each shell adds a whole diagonal.  An explicit grid
    with fewer rows is returned whole: its index set simply stops growing,
    and later shells repeat the last one.
    """
    ext = diagonal_extents(A)
    if ext is not None:
        if ext[-1] < n and A.n_max == ext.size:
            # the grid ends before diagonal n; keep what there is
            return A
        return A.truncate(int((ext <= n).sum()))
    if A.n_max >= n or A.is_generated:
        return A.truncate(n)
    return A


def axis_counts(A: KotheMatrix, n: int) -> np.ndarray:
    """How many rows of ``prefix(A, n)`` belong to each shell ``1..n``."""
    ext = diagonal_extents(A)
    if ext is not None:
        return np.array([int((ext <= s).sum()) for s in range(1, n + 1)])
    return np.minimum(np.arange(1, n + 1), A.n_max)


class _CumulativeRHS:
    """Caches ``max_{k <= k0}`` of the right-hand terms per level map."""

    def __init__(self, term):
        self._term = term
        self._cache: dict[LevelMap, list[np.ndarray]] = {}

    def __call__(self, nmap: LevelMap, k0: int) -> np.ndarray:
        runs = self._cache.get(nmap)
        if runs is None:
            runs = []
            for k in range(1, len(nmap) + 1):
                t = self._term(nmap, k)
                runs.append(t if not runs else np.maximum(runs[-1], t))
            self._cache[nmap] = runs
        return runs[k0 - 1]


class PairRatios:
    """Log ratios of the matrix-pair inequality; axis 0 is ``v``, axis 1 is ``i``."""

    def __init__(self, A: KotheMatrix, B: KotheMatrix, n: int):
        self.n = n
        A, B = prefix(A, n), prefix(B, n)
        self.LA, self.LB = A.log_values, B.log_values
        self.counts = [axis_counts(B, n), axis_counts(A, n)]
        self.labels = [list(range(1, len(self.LB) + 1)), list(range(1, len(self.LA) + 1))]
        self._rhs = _CumulativeRHS(
            lambda nmap, k: log_div(self.LB[:, k - 1][:, None], self.LA[:, nmap[k - 1] - 1][None, :])
        )

    def log_ratios(self, nmap, N, r, k0) -> np.ndarray:
        lhs = log_div(self.LB[:, r - 1][:, None], self.LA[:, N - 1][None, :])
        return log_div(lhs, self._rhs(tuple(nmap), k0))

    def shell_logs(self, nmap, N, r, k0):
        return shell_sups(self.log_ratios(nmap, N, r, k0), self.counts)

    def trail(self, nmap, N, r, k0):
        return shell_trail(self.log_ratios(nmap, N, r, k0), self.counts, self.labels)


class DualRatios:
    """Log ratios of the functional inequality; axis 0 is ``v``, axis 1 the functional."""

    def __init__(self, family: FunctionalFamily, A: KotheMatrix, n: int):
        self.n = n
        self.family = family
        A = prefix(A, n)
        self.LA = A.log_values
        self.LD = family.log_duals
        self.counts = [axis_counts(A, n), family.shell_counts(n)]
        self.labels = [list(range(1, len(self.LA) + 1)), list(range(len(family)))]
        self._rhs = _CumulativeRHS(
            lambda nmap, k: log_mul(self.LA[:, k - 1][:, None], self.LD[:, nmap[k - 1] - 1][None, :])
        )

    def log_ratios(self, nmap, N, r, k0) -> np.ndarray:
        lhs = log_mul(self.LA[:, r - 1][:, None], self.LD[:, N - 1][None, :])
        return log_div(lhs, self._rhs(tuple(nmap), k0))

    def shell_logs(self, nmap, N, r, k0):
        return shell_sups(self.log_ratios(nmap, N, r, k0), self.counts)

    def trail(self, nmap, N, r, k0):
        return shell_trail(self.log_ratios(nmap, N, r, k0), self.counts, self.labels)


def check_b_matrix_pair(
    A: KotheMatrix, B: KotheMatrix, ell_cod: EllNorm = L1, budget: SearchBudget | None = None
) -> Verdict:
    """Numeric verdict on ``(λ(A), λ^ℓ(B))`` being a bounded pair.

    The inequality involves only the matrix entries, so ``ell_cod`` does not
    change the verdict; it is recorded for the rank-one replay of
    counterexamples (``e_i' ⊗ e_v`` has norm ``b_v^r / a_i^N`` for every ℓ).
    """
    budget = budget or SearchBudget()
    K = budget.levels(min(A.k_max, B.k_max))
    problem = PairRatios(A, B, budget.n_range)
    return quantifier_search(
        budget,
        K,
        numeric_evaluator(problem, budget),
        problem.trail,
        notes=(f"codomain norm {ell_cod}",),
    )


def check_b_dual(
    family: FunctionalFamily, A: KotheMatrix, ell_cod: EllNorm = L1, budget: SearchBudget | None = None
) -> Verdict:
    """Numeric verdict on ``(E, λ^ℓ(A))`` with ``E'`` represented by ``family``.

    Counterexample trails cite ``(v, position of u in family)``.
    """
    budget = budget or SearchBudget()
    K = budget.levels(min(A.k_max, family.space.k_max))
    problem = DualRatios(family, A, budget.n_range)
    return quantifier_search(
        budget,
        K,
        numeric_evaluator(problem, budget),
        problem.trail,
        notes=(f"codomain norm {ell_cod}", f"{len(family)} functionals stand in for E'"),
    )

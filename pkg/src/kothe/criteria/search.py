"""Quantifier search shared by every matrix-inequality checker.

The inequalities all have the shape

    for every N(.) there is N such that for every r there are k0, C with
    LHS(N, r; idx) <= C * RHS(N(.), k0; idx)   for all indices idx.

At truncation, ``C`` is never searched: it is the supremum of ``LHS/RHS``
over the budgeted indices, and the growth of that supremum over nested
truncation shells decides whether a finite ``C`` exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from kothe.certificates import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    NUMERIC,
    Counterexample,
    LevelMap,
    PerLevel,
    Refutation,
    SearchBudget,
    Verdict,
    Witness,
)
from kothe.extreal import safe_exp
from kothe.growth import BOUNDED, DIVERGING, GrowthClass, classify_growth

EXCEEDS = "exceeds"


@dataclass(frozen=True)
class Cell:
    """Outcome of one ``(N(.), N, r, k0)`` evaluation."""

    status: str  # bounded | diverging | inconclusive | exceeds
    C: float
    growth: GrowthClass | None = None
    lp: dict | None = None

    @property
    def admissible(self) -> bool:
        return self.status == BOUNDED

    @property
    def refuting(self) -> bool:
        return self.status in (DIVERGING, EXCEEDS)


class RatioProblem(Protocol):
    """A matrix inequality evaluated in log space over nested shells."""

    def shell_logs(self, nmap: LevelMap, N: int, r: int, k0: int) -> np.ndarray: ...

    def trail(self, nmap: LevelMap, N: int, r: int, k0: int) -> list[tuple[tuple[int, ...], float]]: ...


def classify_cell(shell_logs: np.ndarray, budget: SearchBudget) -> Cell:
    sups = safe_exp(shell_logs)
    C = float(sups[-1])
    growth = classify_growth(sups, budget.growth)
    if growth.kind == BOUNDED:
        return Cell(BOUNDED if C <= budget.c_cap else EXCEEDS, C, growth)
    if C > budget.c_cap:
        return Cell(EXCEEDS, C, growth)
    return Cell(growth.kind, C, growth)


def numeric_evaluator(problem: RatioProblem, budget: SearchBudget) -> Callable[..., Cell]:
    def evaluate(nmap, N, r, k0):
        return classify_cell(problem.shell_logs(nmap, N, r, k0), budget)

    return evaluate


def quantifier_search(
    budget: SearchBudget,
    K: int,
    evaluate: Callable[[LevelMap, int, int, int], Cell],
    explain: Callable[[LevelMap, int, int, int], list] | None = None,
    mode: str = NUMERIC,
    notes: tuple[str, ...] = (),
) -> Verdict:
    """Run the ``forall N(.) exists N forall r exists k0`` search.

    A map is answered by the least ``N`` for which every ``r`` admits some
    ``k0`` with a bounded supremum ``C <= c_cap`` (least ``k0`` recorded).  A
    map refutes the condition when every ``N`` meets some ``r`` at which every
    ``k0`` is diverging or exceeds the cap.  One refuting map makes the
    verdict ``fails``.
    """
    witnesses: list[Witness] = []
    counterexamples: list[Counterexample] = []
    undecided: list[LevelMap] = []
    k0_max = budget.k0_limit(K)
    for nmap in budget.maps(K):
        refutations: list[Refutation] = []
        answered = None
        for N in budget.answers(K):
            per_r: list[PerLevel] = []
            refutation = None
            complete = True
            for r in budget.r_values(K):
                chosen = None
                cells = []
                for k0 in range(1, k0_max + 1):
                    cell = evaluate(nmap, N, r, k0)
                    if cell.admissible:
                        chosen = PerLevel(r, k0, cell.C)
                        break
                    cells.append(cell)
                if chosen is not None:
                    per_r.append(chosen)
                    continue
                complete = False
                if all(c.refuting for c in cells):
                    last = cells[-1]
                    trail = explain(nmap, N, r, k0_max) if explain else []
                    refutation = Refutation(N, r, k0_max, tuple(trail), last.growth, last.C, last.lp)
                    break
            if complete:
                answered = Witness(nmap, N, tuple(per_r), mode)
                break
            if refutation is not None:
                refutations.append(refutation)
        if answered is not None:
            witnesses.append(answered)
        elif len(refutations) == len(budget.answers(K)):
            counterexamples.append(Counterexample(nmap, tuple(refutations)))
        else:
            undecided.append(nmap)
    if counterexamples:
        status, reason = FAILS, f"{len(counterexamples)} adversarial map(s) defeat every answer N"
    elif undecided:
        status, reason = INCONCLUSIVE, f"growth classifier abstained for maps {undecided}"
    else:
        status, reason = HOLDS, "every adversarial map in the budget is answered"
    return Verdict(status, budget, mode, tuple(witnesses), tuple(counterexamples), reason, notes)


def shell_sups(L: np.ndarray, counts: list[np.ndarray]) -> np.ndarray:
    """Running maxima of ``L`` over nested boxes.

    ``counts[a][s]`` is how many leading entries along axis ``a`` belong to
    shell ``s`` (indices along each axis must be sorted by their extent).
    Empty boxes yield ``-inf``.
    """
    M = L
    for axis in range(L.ndim):
        M = np.maximum.accumulate(M, axis=axis)
    n_shells = len(counts[0])
    out = np.full(n_shells, -np.inf)
    for s in range(n_shells):
        idx = tuple(int(c[s]) - 1 for c in counts)
        if min(idx) >= 0:
            out[s] = M[idx]
    return out


def shell_trail(L: np.ndarray, counts: list[np.ndarray], labels: list[list[int]]):
    """Per shell, the index tuple attaining the maximum and its ratio."""
    out = []
    for s in range(len(counts[0])):
        box = tuple(slice(0, int(c[s])) for c in counts)
        sub = L[box]
        if sub.size == 0:
            continue
        flat = int(np.argmax(sub))
        pos = np.unravel_index(flat, sub.shape)
        index = tuple(int(labels[a][p]) for a, p in enumerate(pos))
        out.append((index, float(safe_exp(sub[pos]))))
    return out

"""Exact decisions for exp-linear inequalities on power-series spaces.

For generator-backed matrices every ratio in the bounded-pair inequality is
``exp`` of a homogeneous linear form in the exponents ``(s, t) = (alpha_i,
beta_v)``.  Treating ``(s, t)`` as ranging over the whole nonnegative
quadrant, a finite constant exists iff the strict system

    G_k(s, t) > 0  for all k <= k0,   s, t >= 0

is infeasible, where ``G_k = log LHS - log RHS_k``.  Infeasible systems then
satisfy ``min_k G_k <= 0`` everywhere, so ``C = 1`` is a certified constant.
Feasibility is decided by ray enumeration; infeasibility is certified by
nonnegative multipliers ``lam`` with ``sum lam_k g_k <= 0`` coefficientwise
(at most two forms are needed in the plane).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from kothe.certificates import SYMBOLIC, LevelMap, SearchBudget, Verdict
from kothe.criteria.search import EXCEEDS, Cell, quantifier_search
from kothe.growth import BOUNDED, DIVERGING
from kothe.spaces import KotheMatrix

MODEL_NOTE = (
    "symbolic mode: exponent pairs (alpha_i, beta_v) are modelled as ranging over the whole "
    "nonnegative quadrant; verdicts are exact under that assumption"
)

Form = tuple[Fraction, Fraction]  # coefficients of (s, t)


@dataclass(frozen=True)
class LPCertificate:
    feasible: bool
    point: tuple[Fraction, Fraction] | None = None
    multipliers: tuple[tuple[int, Fraction], ...] | None = None

    def to_dict(self) -> dict:
        if self.feasible:
            return {"feasible": True, "ray": [str(self.point[0]), str(self.point[1])]}
        return {"feasible": False, "multipliers": [[k, str(lam)] for k, lam in self.multipliers]}


def _evaluate(form: Form, point) -> Fraction:
    return form[0] * point[0] + form[1] * point[1]


def _angle_cmp(d1, d2) -> int:
    # order directions in the quadrant by angle from the s-axis
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def critical_rays(forms: list[Form]) -> list[tuple[Fraction, Fraction]]:
    rays = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    for a, b in forms:
        if a * b < 0:
            rays.append((abs(b), abs(a)))
    rays = sorted(set(rays), key=cmp_to_key(_angle_cmp))
    unique = [rays[0]]
    for d in rays[1:]:
        if _angle_cmp(unique[-1], d) != 0:
            unique.append(d)
    return unique


def find_feasible_ray(forms: list[Form]):
    """A direction in the quadrant where every form is positive, or ``None``.

    Each ``G_k > 0`` cuts an open arc of directions; a nonempty intersection
    contains a critical ray or the midpoint of two consecutive ones.
    """
    rays = critical_rays(forms)
    candidates = list(rays)
    candidates += [(a[0] + b[0], a[1] + b[1]) for a, b in zip(rays, rays[1:])]
    for d in candidates:
        if all(_evaluate(f, d) > 0 for f in forms):
            return d
    return None


def find_farkas_multipliers(forms: list[Form]):
    """Nonnegative weights on at most two forms whose sum is ``<= 0`` coefficientwise."""
    for k, (a, b) in enumerate(forms):
        if a <= 0 and b <= 0:
            return ((k, Fraction(1)),)
    for k in range(len(forms)):
        for l in range(k + 1, len(forms)):
            # lam * g_k + (1 - lam) * g_l <= 0, lam in [0, 1]
            lo, hi = Fraction(0), Fraction(1)
            for gk, gl in zip(forms[k], forms[l]):
                slope, const = gk - gl, gl
                if slope == 0:
                    if const > 0:
                        lo, hi = Fraction(1), Fraction(0)
                elif slope > 0:
                    hi = min(hi, -const / slope)
                else:
                    lo = max(lo, -const / slope)
            if lo <= hi:
                return ((k, lo), (l, 1 - lo))
    return None


def decide_forms(forms: list[Form]) -> LPCertificate:
    ray = find_feasible_ray(forms)
    lam = find_farkas_multipliers(forms)
    if (ray is None) == (lam is None):
        raise ArithmeticError(f"inconsistent LP decision for forms {forms}")
    if ray is not None:
        return LPCertificate(True, point=ray)
    return LPCertificate(False, multipliers=lam)


def verify_certificate(forms: list[Form], cert: LPCertificate) -> bool:
    """Substitute the certificate back into the forms."""
    if cert.feasible:
        s, t = cert.point
        return s >= 0 and t >= 0 and (s, t) != (0, 0) and all(_evaluate(f, cert.point) > 0 for f in forms)
    lam = dict(cert.multipliers)
    if any(v < 0 for v in lam.values()) or sum(lam.values()) <= 0:
        return False
    combo = [sum(lam.get(k, 0) * forms[k][c] for k in range(len(forms))) for c in (0, 1)]
    return combo[0] <= 0 and combo[1] <= 0


def pair_forms(genA, genB, nmap: LevelMap, N: int, r: int, k0: int) -> list[Form]:
    """``G_k = log(b_v^r / a_i^N) - log(b_v^k / a_i^{N(k)})`` as ``(s, t)`` coefficients."""
    cA, cB = genA.coefficient, genB.coefficient
    return [(cA(nmap[k - 1]) - cA(N), cB(r) - cB(k)) for k in range(1, k0 + 1)]


def check_b_symbolic(genA: KotheMatrix, genB: KotheMatrix, budget: SearchBudget | None = None) -> Verdict:
    """Exact LP decision of the bounded-pair matrix condition for power-series spaces."""
    budget = budget or SearchBudget()
    if not (genA.is_generated and genB.is_generated):
        raise ValueError("symbolic mode needs generator-backed (power-series) matrices")
    K = budget.levels(min(genA.k_max, genB.k_max))

    def evaluate(nmap, N, r, k0):
        forms = pair_forms(genA.generator, genB.generator, nmap, N, r, k0)
        cert = decide_forms(forms)
        lp = {"forms": [[str(a), str(b)] for a, b in forms], **cert.to_dict()}
        if cert.feasible:
            return Cell(DIVERGING, float("inf"), None, lp)
        C = 1.0
        return Cell(BOUNDED if C <= budget.c_cap else EXCEEDS, C, None, lp)

    return quantifier_search(budget, K, evaluate, mode=SYMBOLIC, notes=(MODEL_NOTE,))

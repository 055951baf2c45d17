"""Search budgets, witnesses, counterexamples and verdicts.

Every verdict is scoped to the :class:`SearchBudget` that produced it and
serializes to the JSON certificate schema::

    {"verdict": "holds|fails|inconclusive", "mode": "numeric|symbolic",
     "budget": {...}, "witness": {"Nmap": [...], "N": int,
     "per_r": [{"r": int, "k0": int, "C": float}]},
     "counterexample": {...}, "seed": int}
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from kothe.growth import GrowthClass, GrowthConfig

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

NUMERIC = "numeric"
SYMBOLIC = "symbolic"

LevelMap = tuple[int, ...]


def is_nondecreasing(nmap) -> bool:
    return all(a <= b for a, b in zip(nmap, nmap[1:]))


@dataclass(frozen=True)
class SearchBudget:
    """The finite quantifier prefix every verdict is certified against.

    Truncation model (``K`` = number of levels):

    * adversarial maps ``N(.)`` are nondecreasing ``{1..K} -> {1..K}``; the
      default family is ``N(k) = min(k + s, K)`` for every shift ``s`` with
      ``N(1) <= N_max``;
    * the answering level ``N`` ranges over ``1..N_max`` (default ``K - 2``),
      ``r`` over ``r_range`` (default ``1..K - 1``) and ``k0`` over
      ``1..k0_max`` (default ``K``), so every ``r`` can exceed some ``N`` and
      every ``r`` leaves a level ``k0 > r`` to answer with;
    * index families are truncated at ``n_range``.
    """

    n_range: int = 6
    k_max: int | None = None
    shifts: tuple[int, ...] | None = None
    nmaps: tuple[LevelMap, ...] | None = None
    r_range: tuple[int, ...] | None = None
    k0_max: int | None = None
    N_max: int | None = None
    c_cap: float = 1e12
    seed: int = 0
    growth: GrowthConfig = field(default_factory=lambda: GrowthConfig(min_samples=4))

    def __post_init__(self):
        if self.n_range < 1:
            raise ValueError("n_range must be positive")
        if self.shifts is not None:
            object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))
            if any(s < 0 for s in self.shifts):
                raise ValueError("shifts must be nonnegative (maps are nondecreasing)")
        if self.nmaps is not None:
            maps = tuple(tuple(int(v) for v in m) for m in self.nmaps)
            for m in maps:
                if not is_nondecreasing(m):
                    raise ValueError(f"level map {m} is not nondecreasing")
                if any(v < 1 for v in m):
                    raise ValueError(f"level map {m} has levels below 1")
            object.__setattr__(self, "nmaps", maps)
        if self.r_range is not None:
            object.__setattr__(self, "r_range", tuple(int(r) for r in self.r_range))

    def levels(self, k_max: int) -> int:
        K = self.k_max if self.k_max is not None else k_max
        if K > k_max:
            raise ValueError(f"budget asks for {K} levels but the matrices have {k_max}")
        return K

    def n_max_answer(self, K: int) -> int:
        return self.N_max if self.N_max is not None else max(1, K - 2)

    def maps(self, K: int) -> list[LevelMap]:
        if self.nmaps is not None:
            for m in self.nmaps:
                if len(m) < K or any(v > K for v in m[:K]):
                    raise ValueError(f"level map {m} does not cover levels 1..{K}")
            return [m[:K] for m in self.nmaps]
        N_max = self.n_max_answer(K)
        shifts = self.shifts if self.shifts is not None else range(N_max)
        out = []
        for s in shifts:
            m = tuple(min(k + s, K) for k in range(1, K + 1))
            if m[0] <= N_max and m not in out:
                out.append(m)
        return out

    def answers(self, K: int) -> list[int]:
        return list(range(1, min(self.n_max_answer(K), K) + 1))

    def r_values(self, K: int) -> list[int]:
        if self.r_range is None:
            return list(range(1, max(1, K - 1) + 1))
        return [r for r in self.r_range if 1 <= r <= K]

    def k0_limit(self, K: int) -> int:
        return min(self.k0_max, K) if self.k0_max is not None else K

    def with_maps(self, *maps: LevelMap) -> "SearchBudget":
        return replace(self, nmaps=tuple(tuple(m) for m in maps), shifts=None)

    def to_dict(self) -> dict:
        return {
            "n_range": self.n_range,
            "k_max": self.k_max,
            "shifts": list(self.shifts) if self.shifts is not None else None,
            "nmaps": [list(m) for m in self.nmaps] if self.nmaps is not None else None,
            "r_range": list(self.r_range) if self.r_range is not None else None,
            "k0_max": self.k0_max,
            "N_max": self.N_max,
            "c_cap": self.c_cap,
            "seed": self.seed,
            "growth": self.growth.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SearchBudget":
        data = dict(data)
        growth = GrowthConfig.from_dict(data.pop("growth", None))
        for key in ("shifts", "r_range"):
            if data.get(key) is not None:
                data[key] = tuple(data[key])
        if data.get("nmaps") is not None:
            data["nmaps"] = tuple(tuple(m) for m in data["nmaps"])
        return cls(growth=growth, **data)


@dataclass(frozen=True)
class PerLevel:
    r: int
    k0: int | None
    C: float

    def to_dict(self) -> dict:
        return {"r": self.r, "k0": self.k0, "C": self.C}


@dataclass(frozen=True)
class Witness:
    """Quantifier data ``(N(.), N, r -> (k0, C))`` answering one adversarial map."""

    nmap: LevelMap
    N: int
    per_r: tuple[PerLevel, ...]
    mode: str = NUMERIC

    def entry(self, r: int) -> PerLevel:
        for p in self.per_r:
            if p.r == r:
                return p
        raise KeyError(f"witness has no entry for r={r}")

    def to_dict(self) -> dict:
        return {
            "Nmap": list(self.nmap),
            "N": self.N,
            "per_r": [p.to_dict() for p in self.per_r],
            "mode": self.mode,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Witness":
        return cls(
            nmap=tuple(data["Nmap"]),
            N=int(data["N"]),
            per_r=tuple(PerLevel(int(p["r"]), p["k0"], float(p["C"])) for p in data["per_r"]),
            mode=data.get("mode", NUMERIC),
        )


@dataclass(frozen=True)
class Refutation:
    """Why the answer ``N`` fails: level ``r`` defeats every ``k0``.

    ``trail`` lists, per truncation shell, the index tuple attaining the
    shell's worst ratio and that ratio (evaluated at ``k0``).
    """

    N: int
    r: int
    k0: int
    trail: tuple[tuple[tuple[int, ...], float], ...]
    growth: GrowthClass | None
    C: float
    lp: dict | None = None

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "k0": self.k0,
            "trail": [{"index": list(ix), "ratio": v} for ix, v in self.trail],
            "growth": self.growth.to_dict() if self.growth is not None else None,
            "C": self.C,
            "lp": self.lp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Refutation":
        return cls(
            N=int(data["N"]),
            r=int(data["r"]),
            k0=int(data["k0"]),
            trail=tuple((tuple(t["index"]), float(t["ratio"])) for t in data["trail"]),
            growth=GrowthClass.from_dict(data["growth"]) if data.get("growth") else None,
            C=float(data["C"]),
            lp=data.get("lp"),
        )


@dataclass(frozen=True)
class Counterexample:
    nmap: LevelMap
    refutations: tuple[Refutation, ...]

    def to_dict(self) -> dict:
        return {"Nmap": list(self.nmap), "refutations": [r.to_dict() for r in self.refutations]}

    @classmethod
    def from_dict(cls, data: dict) -> "Counterexample":
        return cls(tuple(data["Nmap"]), tuple(Refutation.from_dict(r) for r in data["refutations"]))


@dataclass(frozen=True)
class Verdict:
    status: str
    budget: SearchBudget
    mode: str = NUMERIC
    witnesses: tuple[Witness, ...] = ()
    counterexamples: tuple[Counterexample, ...] = ()
    reason: str = ""
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    @property
    def witness(self) -> Witness | None:
        return self.witnesses[0] if self.witnesses else None

    @property
    def counterexample(self) -> Counterexample | None:
        return self.counterexamples[0] if self.counterexamples else None

    def witness_for(self, nmap) -> Witness:
        nmap = tuple(nmap)
        for w in self.witnesses:
            if w.nmap == nmap:
                return w
        raise LookupError(f"no witness answers the level map {nmap}")

    def to_dict(self) -> dict:
        w, c = self.witness, self.counterexample
        return {
            "verdict": self.status,
            "mode": self.mode,
            "budget": self.budget.to_dict(),
            "witness": w.to_dict() if w else None,
            "witnesses": [x.to_dict() for x in self.witnesses],
            "counterexample": c.to_dict() if c else None,
            "counterexamples": [x.to_dict() for x in self.counterexamples],
            "reason": self.reason,
            "notes": list(self.notes),
            "seed": self.budget.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        return cls(
            status=data["verdict"],
            budget=SearchBudget.from_dict(data["budget"]),
            mode=data.get("mode", NUMERIC),
            witnesses=tuple(Witness.from_dict(w) for w in data.get("witnesses") or []),
            counterexamples=tuple(Counterexample.from_dict(c) for c in data.get("counterexamples") or []),
            reason=data.get("reason", ""),
            notes=tuple(data.get("notes", ())),
        )

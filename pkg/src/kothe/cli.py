"""Command-line front end (``kothe`` / ``python -m kothe``).

Every run produces a report that embeds its argv and the parsed input
documents, so ``kothe replay report.json`` reruns it without touching the
filesystem and compares every field except ``timing``.

Exit codes: 0 holds/valid, 1 fails, 2 usage or parse error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from kothe import __version__
from kothe.certificates import FAILS, HOLDS, INCONCLUSIVE, SearchBudget, Verdict, Witness
from kothe.criteria.bounded_pairs import check_b_dual, check_b_matrix_pair
from kothe.criteria.factorization import (
    check_bf_condition,
    check_bf_operators,
    combine_witnesses,
    rank_one_factor_pairs,
    splice_map,
)
from kothe.criteria.families import FunctionalFamily
from kothe.criteria.nuclear import check_nuclear, nuclear_symbolic
from kothe.criteria.symbolic import check_b_symbolic
from kothe.criteria.tensor import DIAGONAL, PAIRINGS, tensor_product
from kothe.operators import Effort, opnorm, opnorm_l1_domain, operator_from_dict
from kothe.spaces import L1, KotheSpace, validate_matrix

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
STATUS_EXIT = {HOLDS: EXIT_OK, FAILS: EXIT_FAILS, INCONCLUSIVE: EXIT_INCONCLUSIVE}

FIXTURES_ENV = "KOTHE_FIXTURES"
MAX_N_RANGE = 10_000
MAX_LEVELS = 64
DEFAULT_N_RANGE = 30
MODES = ("numeric", "symbolic", "both")
CHECK_KINDS = ("b-pair", "b-dual", "nuclear", "bf-ops", "bf-cond", "tensor", "opnorm", "combine")
TOOL = "kothe"


class UsageError(Exception):
    """Bad arguments or unreadable input; maps to exit code 2."""


# ------------------------------------------------------------------ inputs


def resolve_path(path: str) -> Path:
    """``path`` as given, else relative to ``$KOTHE_FIXTURES``."""
    p = Path(path)
    if p.exists() or p.is_absolute():
        return p
    base = os.environ.get(FIXTURES_ENV)
    if base and (Path(base) / p).exists():
        return Path(base) / p
    return p


class Inputs:
    """Parsed JSON documents keyed by the path string given on the command line."""

    def __init__(self, embedded: dict | None = None):
        self.docs: dict[str, object] = dict(embedded or {})
        self.offline = embedded is not None

    def load(self, path: str):
        if path in self.docs:
            return self.docs[path]
        if self.offline:
            raise UsageError(f"{path}: not embedded in the report being replayed")
        resolved = resolve_path(path)
        try:
            text = resolved.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"{path}: cannot read ({exc.strerror})") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        self.docs[path] = doc
        return doc

    def parse(self, path: str, what: str, build):
        doc = self.load(path)
        try:
            return build(doc)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise UsageError(f"{path}: not a valid {what} file ({type(exc).__name__}: {exc})") from exc

    def space(self, path: str) -> KotheSpace:
        return self.parse(path, "space", KotheSpace.from_dict)

    def operator(self, path: str):
        return self.parse(path, "operator", operator_from_dict)


def unwrap_verdict(doc) -> dict:
    """The verdict dict inside a report, a ``both``-mode result, or a bare verdict."""
    if isinstance(doc, dict) and doc.get("tool") == TOOL and "result" in doc:
        doc = doc["result"]
    if isinstance(doc, dict) and "numeric" in doc and "verdict" not in doc:
        doc = doc["numeric"]
    return doc


def load_witnesses(inputs: Inputs, path: str) -> list[Witness]:
    doc = unwrap_verdict(inputs.load(path))

    def build(d):
        if "verdict" in d:
            return list(Verdict.from_dict(d).witnesses)
        if "witness" in d and "Nmap" in d["witness"]:
            return [Witness.from_dict(d["witness"])]
        return [Witness.from_dict(d)]

    try:
        return build(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a verdict or witness file ({exc})") from exc


# ------------------------------------------------------------------ config


def int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


@dataclass(frozen=True)
class RunConfig:
    budget: SearchBudget
    mode: str
    seed: int

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if not 1 <= args.budget_n <= MAX_N_RANGE:
            raise UsageError(f"--budget-n must lie in 1..{MAX_N_RANGE}")
        if args.budget_k is not None and not 1 <= args.budget_k <= MAX_LEVELS:
            raise UsageError(f"--budget-k must lie in 1..{MAX_LEVELS}")
        if args.r_max is not None and args.r_max < 1:
            raise UsageError("--r-max must be positive")
        if not args.c_cap > 0:
            raise UsageError("--c-cap must be positive")
        try:
            budget = SearchBudget(
                n_range=args.budget_n,
                k_max=args.budget_k,
                shifts=args.shifts,
                nmaps=args.nmaps,
                r_range=tuple(range(1, args.r_max + 1)) if args.r_max else None,
                N_max=args.n_max,
                c_cap=args.c_cap,
                seed=args.seed,
            )
        except ValueError as exc:
            raise UsageError(f"budget: {exc}") from exc
        return cls(budget, args.mode, args.seed)

    def to_dict(self) -> dict:
        return {"budget": self.budget.to_dict(), "mode": self.mode, "seed": self.seed}


def common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("budget and reporting")
    g.add_argument("--budget-n", type=int, default=DEFAULT_N_RANGE, help="index truncation n_range")
    g.add_argument("--budget-k", type=int, default=None, help="number of levels K (default: all)")
    g.add_argument("--shifts", type=int_list, default=None, help="shifts s of the maps N(k)=min(k+s,K)")
    g.add_argument("--nmap", dest="nmaps", type=int_list, action="append", default=None,
                   help="explicit adversarial level map, e.g. 2,3,4,4 (repeatable)")
    g.add_argument("--r-max", type=int, default=None, help="check r = 1..r_max")
    g.add_argument("--n-max", type=int, default=None, help="largest answering level N")
    g.add_argument("--c-cap", type=float, default=1e12, help="largest admissible constant C")
    g.add_argument("--mode", choices=MODES, default="numeric")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--json", action="store_true", help="print the full JSON report")
    g.add_argument("-o", "--output", default=None,
                   help="artifact path (product space for tensor, witness for combine, else the report)")
    g.add_argument("--report", default=None, help="also write the report here")
    g.add_argument("--timing", action="store_true", help="record wall time in the report")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = common_options()
    parser = argparse.ArgumentParser(prog=TOOL, description="Köthe sequence space laboratory")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--replay", metavar="REPORT", default=None, help="replay a saved report and compare")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("validate", parents=[common], help="check the Köthe-matrix axioms")
    p.add_argument("space")

    p = sub.add_parser("norm", parents=[common], help="seminorm or dual seminorm of a vector")
    p.add_argument("space")
    p.add_argument("--vector", type=float_list, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--dual", action="store_true")

    opnorm_args = argparse.ArgumentParser(add_help=False)
    opnorm_args.add_argument("operator")
    opnorm_args.add_argument("domain")
    opnorm_args.add_argument("codomain")
    opnorm_args.add_argument("--m", type=int, required=True, help="codomain level")
    opnorm_args.add_argument("--k", type=int, required=True, help="domain level")
    sub.add_parser("opnorm", parents=[common, opnorm_args], help="operator seminorm |T|_{m,k}")

    tensor_args = argparse.ArgumentParser(add_help=False)
    tensor_args.add_argument("first")
    tensor_args.add_argument("second")
    tensor_args.add_argument("--pairing", choices=PAIRINGS, default=DIAGONAL)
    tensor_args.add_argument("--pairs", type=int, default=None, help="keep the first PAIRS index pairs")
    sub.add_parser("tensor", parents=[common, tensor_args], help="tensor product matrix")

    combine_args = argparse.ArgumentParser(add_help=False)
    combine_args.add_argument("dual_verdict", help="verdict for (E, A) answering the spliced map")
    combine_args.add_argument("pair_verdict", help="verdict for the matrix pair (B, C)")
    sub.add_parser("combine", parents=[common, combine_args], help="splice two witnesses")

    p = sub.add_parser("replay", help="rerun a saved report and compare")
    p.add_argument("report_file")

    check = sub.add_parser("check", help="decide a criterion at the budget")
    kinds = check.add_subparsers(dest="kind")
    p = kinds.add_parser("b-pair", parents=[common])
    p.add_argument("first")
    p.add_argument("second")
    p = kinds.add_parser("b-dual", parents=[common])
    p.add_argument("source", help="space E (or a functional family file)")
    p.add_argument("first")
    p = kinds.add_parser("nuclear", parents=[common])
    p.add_argument("first")
    p.add_argument("--smap", type=int_list, default=None, help="explicit S(k) for k = 1, 2, ...")
    p = kinds.add_parser("bf-cond", parents=[common])
    p.add_argument("source")
    p.add_argument("middle")
    p.add_argument("target")
    p = kinds.add_parser("bf-ops", parents=[common])
    p.add_argument("source")
    p.add_argument("middle")
    p.add_argument("target")
    p.add_argument("--factor-n", type=int, default=3, help="factor pairs through e_i, e_j with i, j <= n")
    kinds.add_parser("tensor", parents=[common, tensor_args])
    kinds.add_parser("opnorm", parents=[common, opnorm_args])
    kinds.add_parser("combine", parents=[common, combine_args])
    return parser


# ------------------------------------------------------------------ commands


@dataclass
class Outcome:
    result: dict
    exit_code: int
    artifact: dict | None = None  # written to -o for tensor / combine


def family_for(inputs: Inputs, path: str, config: RunConfig) -> FunctionalFamily:
    doc = inputs.load(path)
    if isinstance(doc, dict) and "functionals" in doc:
        return inputs.parse(path, "functional family", FunctionalFamily.from_dict)
    space = inputs.space(path)
    n = min(config.budget.n_range, space.n_max)
    return FunctionalFamily.default(space, n, seed=config.seed)


def run_validate(args, inputs, config) -> Outcome:
    space = inputs.space(args.space)
    violations = [v.to_dict() for v in validate_matrix(space.matrix)]
    return Outcome({"valid": not violations, "violations": violations}, EXIT_FAILS if violations else EXIT_OK)


def run_norm(args, inputs, config) -> Outcome:
    space = inputs.space(args.space)
    if not 1 <= args.level <= space.k_max:
        raise UsageError(f"--level must lie in 1..{space.k_max}")
    x = np.array(args.vector)
    value = space.dual_seminorm(x, args.level) if args.dual else space.seminorm(x, args.level)
    return Outcome({"kind": "dual_seminorm" if args.dual else "seminorm", "level": args.level, "value": value}, EXIT_OK)


def run_opnorm(args, inputs, config) -> Outcome:
    T = inputs.operator(args.operator)
    dom, cod = inputs.space(args.domain), inputs.space(args.codomain)
    bounds = opnorm(T, dom, cod, args.m, args.k, Effort(seed=config.seed))
    result = {"m": args.m, "k": args.k, "bounds": bounds.to_dict()}
    if dom.ell == L1:
        result["l1_domain"] = opnorm_l1_domain(T, dom, cod, args.m, args.k)
    return Outcome(result, EXIT_OK)


def run_tensor(args, inputs, config) -> Outcome:
    A, B = inputs.space(args.first), inputs.space(args.second)
    D = tensor_product(A.matrix, B.matrix, args.pairing, args.pairs)
    space = KotheSpace(D, L1).to_dict()
    return Outcome({"pairing": args.pairing, "space": space}, EXIT_OK, artifact=space)


def run_combine(args, inputs, config) -> Outcome:
    if not config.budget.nmaps:
        raise UsageError("combine needs --nmap giving the adversarial map N(.)")
    dual = load_witnesses(inputs, args.dual_verdict)
    pair = load_witnesses(inputs, args.pair_verdict)
    out = []
    for nmap in config.budget.nmaps:
        K = config.budget.k_max or len(nmap)
        w = combine_witnesses(dual, pair, nmap, K)
        n = next(p.N for p in pair if p.nmap == tuple(nmap))
        out.append({"Smap": list(splice_map(nmap, n, K)), "witness": w.to_dict()})
    artifact = out[0]["witness"] if len(out) == 1 else [o["witness"] for o in out]
    return Outcome({"combined": out}, EXIT_OK, artifact=artifact)


def verdict_outcome(verdict: Verdict) -> Outcome:
    return Outcome(verdict.to_dict(), STATUS_EXIT[verdict.status])


def both_modes(numeric: dict, symbolic: dict) -> Outcome:
    agree = numeric["verdict"] == symbolic["verdict"]
    status = numeric["verdict"] if agree else INCONCLUSIVE
    return Outcome({"numeric": numeric, "symbolic": symbolic, "agree": agree}, STATUS_EXIT[status])


def run_b_pair(args, inputs, config) -> Outcome:
    A, B = inputs.space(args.first), inputs.space(args.second)
    symbolic = numeric = None
    if config.mode in ("symbolic", "both"):
        if not (A.matrix.is_generated and B.matrix.is_generated):
            raise UsageError("symbolic mode needs power-series spaces on both sides")
        symbolic = check_b_symbolic(A.matrix, B.matrix, config.budget)
    if config.mode in ("numeric", "both"):
        numeric = check_b_matrix_pair(A.matrix, B.matrix, B.ell, config.budget)
    if config.mode == "both":
        return both_modes(numeric.to_dict(), symbolic.to_dict())
    return verdict_outcome(numeric or symbolic)


def run_b_dual(args, inputs, config) -> Outcome:
    require_numeric(config, "b-dual")
    family = family_for(inputs, args.source, config)
    A = inputs.space(args.first)
    return verdict_outcome(check_b_dual(family, A.matrix, A.ell, config.budget))


def run_nuclear(args, inputs, config) -> Outcome:
    B = inputs.space(args.first)
    K = config.budget.levels(B.k_max)
    nmaps = config.budget.nmaps or (tuple(range(1, K + 1)),)
    smap = {k: s for k, s in enumerate(args.smap, start=1)} if args.smap else None
    symbolic = None
    if config.mode in ("symbolic", "both"):
        if not B.matrix.is_generated:
            raise UsageError("symbolic mode needs a power-series space")
        symbolic = nuclear_symbolic(B.matrix, config.budget)
    if config.mode == "symbolic":
        return Outcome(symbolic, STATUS_EXIT[symbolic["verdict"]])
    reports = [check_nuclear(B.matrix, m, config.budget, smap).to_dict() for m in nmaps]
    statuses = {r["verdict"] for r in reports}
    status = FAILS if FAILS in statuses else (INCONCLUSIVE if INCONCLUSIVE in statuses else HOLDS)
    numeric = {"verdict": status, "reports": reports, "budget": config.budget.to_dict()}
    if config.mode == "both":
        return both_modes(numeric, symbolic)
    return Outcome(numeric, STATUS_EXIT[status])


def run_bf_cond(args, inputs, config) -> Outcome:
    require_numeric(config, "bf-cond")
    family = family_for(inputs, args.source, config)
    B, C = inputs.space(args.middle), inputs.space(args.target)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # the verdict notes carry the nuclearity warning
        verdict = check_bf_condition(family, B.matrix, C.matrix, config.budget)
    return verdict_outcome(verdict)


def run_bf_ops(args, inputs, config) -> Outcome:
    require_numeric(config, "bf-ops")
    family = family_for(inputs, args.source, config)
    E = family.space
    F, G = inputs.space(args.middle), inputs.space(args.target)
    n = min(args.factor_n, F.n_max, G.n_max)
    pairs = rank_one_factor_pairs(family, F, G, n)
    verdict = check_bf_operators(pairs, (E, F, G), config.budget, Effort(seed=config.seed))
    return verdict_outcome(verdict)


def require_numeric(config: RunConfig, kind: str) -> None:
    if config.mode != "numeric":
        raise UsageError(f"check {kind} has no symbolic mode")


CHECKS = {
    "b-pair": run_b_pair,
    "b-dual": run_b_dual,
    "nuclear": run_nuclear,
    "bf-cond": run_bf_cond,
    "bf-ops": run_bf_ops,
    "tensor": run_tensor,
    "opnorm": run_opnorm,
    "combine": run_combine,
}
COMMANDS = {"validate": run_validate, "norm": run_norm, "opnorm": run_opnorm, "tensor": run_tensor, "combine": run_combine}


def command_name(args) -> str:
    return f"check {args.kind}" if args.command == "check" else args.command


def execute(args, inputs: Inputs) -> tuple[dict, Outcome]:
    """Run a parsed command; the report it returns carries no timing."""
    config = RunConfig.from_args(args)
    handler = CHECKS[args.kind] if args.command == "check" else COMMANDS[args.command]
    try:
        outcome = handler(args, inputs, config)
    except UsageError:
        raise
    except (ValueError, IndexError, LookupError, ZeroDivisionError) as exc:
        raise UsageError(f"{command_name(args)}: {type(exc).__name__}: {exc}") from exc
    report = {
        "tool": TOOL,
        "version": __version__,
        "command": command_name(args),
        "config": config.to_dict(),
        "inputs": inputs.docs,
        "result": outcome.result,
        "exit_code": outcome.exit_code,
    }
    return report, outcome


# ------------------------------------------------------------------ output


def to_json(obj) -> str:
    def fallback(o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return json.dumps(obj, indent=2, sort_keys=True, default=fallback)


def comparable(report: dict) -> str:
    return to_json({k: v for k, v in report.items() if k != "timing"})


def write_json(path: str, obj) -> None:
    Path(path).write_text(to_json(obj) + "\n", encoding="utf-8")


def describe_verdict(v: dict, indent: str = "") -> list[str]:
    lines = [f"{indent}verdict: {v['verdict']} ({v.get('mode', 'numeric')})"]
    if v.get("reason"):
        lines.append(f"{indent}  {v['reason']}")
    w = v.get("witness")
    if w:
        per_r = ", ".join(f"r={p['r']}: k0={p['k0']} C={p['C']:.6g}" for p in w["per_r"])
        lines.append(f"{indent}  witness N(.)={tuple(w['Nmap'])} N={w['N']} [{per_r}]")
    c = v.get("counterexample")
    if c:
        ref = c["refutations"][0]
        lines.append(
            f"{indent}  counterexample N(.)={tuple(c['Nmap'])}: N={ref['N']} r={ref['r']} "
            f"defeats k0<={ref['k0']} (sup {ref['C']:.6g})"
        )
    for note in v.get("notes", []):
        lines.append(f"{indent}  note: {note}")
    return lines


def describe(report: dict) -> str:
    result, command = report["result"], report["command"]
    if command == "validate":
        if result["valid"]:
            return "valid: no violations"
        return "\n".join(["invalid:"] + [f"  {v['kind']} at n={v['n']} k={v['k']}: {v['detail']}" for v in result["violations"]])
    if command == "norm":
        return f"{result['kind']} at level {result['level']}: {result['value']!r}"
    if command.endswith("opnorm"):
        b = result["bounds"]
        tag = "exact" if b["exact"] else "bracket"
        return f"|T|_{{{result['m']},{result['k']}}} in [{b['lower']!r}, {b['upper']!r}] ({tag})"
    if command.endswith("tensor"):
        space = result["space"]
        grid = space["source"]["grid"]
        rows = [f"  {tuple(p)}: {row}" for p, row in zip(space["pairs"], grid)]
        return "\n".join([f"tensor product {space['label']} ({result['pairing']}, {len(grid)} pairs)"] + rows)
    if command.endswith("combine"):
        lines = []
        for item in result["combined"]:
            w = item["witness"]
            per_r = ", ".join(f"r={p['r']}: s={p['k0']} C={p['C']:.6g}" for p in w["per_r"])
            lines.append(f"combined N(.)={tuple(w['Nmap'])} S(.)={tuple(item['Smap'])} N={w['N']} [{per_r}]")
        return "\n".join(lines)
    if "agree" in result:
        lines = ["numeric:"] + describe_verdict(result["numeric"], "  ")
        lines += ["symbolic:"] + describe_any(result["symbolic"], "  ")
        lines.append(f"modes agree: {'yes' if result['agree'] else 'no'}")
        return "\n".join(lines)
    return "\n".join(describe_any(result))


def describe_any(result: dict, indent: str = "") -> list[str]:
    if "reports" in result:
        lines = [f"{indent}verdict: {result['verdict']} (numeric)"]
        for rep in result["reports"]:
            thetas = ", ".join(f"theta({k})={t['theta']:.10g} [S={t['S']}]" for k, t in rep["theta"].items())
            lines.append(f"{indent}  N(.)={tuple(rep['Nmap'])}: {rep['verdict']}; {thetas or rep['reason']}")
        return lines
    if "ratios" in result:
        return [f"{indent}verdict: {result['verdict']} (symbolic, {result['kind']} type)"]
    return describe_verdict(result, indent)


# ------------------------------------------------------------------ driver


def replay(path: str, inputs: Inputs | None = None) -> tuple[bool, str]:
    """Rerun a report from its embedded argv and inputs; ``(identical, message)``."""
    loader = inputs or Inputs()
    saved = loader.load(path)
    if not isinstance(saved, dict) or saved.get("tool") != TOOL or "argv" not in saved:
        raise UsageError(f"{path}: not a {TOOL} report")
    args = build_parser().parse_args(saved["argv"])
    report, _ = execute(args, Inputs(saved.get("inputs", {})))
    report["argv"] = saved["argv"]
    old, new = comparable(saved), comparable(report)
    if old == new:
        return True, f"replay of {path}: identical ({len(new)} bytes compared)"
    return False, f"replay of {path}: differs\n{first_difference(json.loads(old), json.loads(new))}"


def first_difference(old, new, where: str = "$") -> str:
    if type(old) is not type(new):
        return f"{where}: {old!r} != {new!r}"
    if isinstance(old, dict):
        for key in sorted(set(old) | set(new)):
            if key not in old or key not in new:
                return f"{where}.{key}: present on one side only"
            if old[key] != new[key]:
                return first_difference(old[key], new[key], f"{where}.{key}")
    if isinstance(old, list):
        if len(old) != len(new):
            return f"{where}: length {len(old)} != {len(new)}"
        for i, (a, b) in enumerate(zip(old, new)):
            if a != b:
                return first_difference(a, b, f"{where}[{i}]")
    return f"{where}: {old!r} != {new!r}"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.replay or args.command == "replay":
            same, message = replay(args.replay or args.report_file)
            print(message)
            return EXIT_OK if same else EXIT_FAILS
        if args.command is None or (args.command == "check" and args.kind is None):
            parser.print_usage(sys.stderr)
            print(f"{TOOL}: error: a command is required", file=sys.stderr)
            return EXIT_USAGE
        started = time.perf_counter()
        report, outcome = execute(args, Inputs())
        report["argv"] = argv
        if args.timing:
            report["timing"] = {"seconds": time.perf_counter() - started}
    except UsageError as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.output:
        write_json(args.output, outcome.artifact if outcome.artifact is not None else report)
    if args.report:
        write_json(args.report, report)
    print(to_json(report) if args.json else describe(report))
    return outcome.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

"""The ten acceptance criteria, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from kothe.certificates import FAILS, HOLDS, INCONCLUSIVE, SearchBudget, Verdict, Witness
from kothe.cli import main, replay
from kothe.criteria.bounded_pairs import check_b_dual, check_b_matrix_pair
from kothe.criteria.boundedness import vogt_inequality_check
from kothe.criteria.factorization import (
    check_bf_condition,
    check_bf_operators,
    combine_witnesses,
    operator_constants,
    proof_bound,
    rank_one_factor_pairs,
    splice_map,
    verify_bf_witness,
)
from kothe.criteria.families import FunctionalFamily
from kothe.criteria.nuclear import check_nuclear, norm_system_equivalence_check
from kothe.criteria.symbolic import LPCertificate, check_b_symbolic, decide_forms, pair_forms, verify_certificate
from kothe.criteria.tensor import PAIRINGS, tensor_product, tensor_vector
from kothe.operators import MatrixOperator, RankOneOperator, opnorm_bounds, opnorm_l1_domain, rank_one_norm
from kothe.oracle import brute_force_condition, brute_opnorm, nondecreasing_maps
from kothe.spaces import C0, FINITE_TYPE, INFINITE_TYPE, L1, L2, LINF, KotheMatrix, KotheSpace, seminorm

NORMS = (L1, L2, LINF, C0)


@pytest.fixture
def criterion(record_property):
    def register(number, title, detail=""):
        record_property("criterion", (number, title))
        if detail:
            record_property("detail", detail)

    return register


def random_grid(rng, rows, levels, low=0.1, high=3.0):
    return KotheMatrix.from_grid(np.cumsum(rng.uniform(low, high, (rows, levels)), axis=1))


def power_series(kind, n=30, K=5, **alpha):
    return KotheMatrix.power_series(kind, n_max=n, k_max=K, **alpha)


def reference_dual(u, weights, ell):
    """Weighted dual norm written out with numpy's own vector norms."""
    q = {1.0: np.inf, 2.0: 2, np.inf: 1}[ell.p]
    return float(np.linalg.norm(np.abs(u) / weights, ord=q))


def reference_norm(x, weights, ell):
    return float(np.linalg.norm(np.abs(x) * weights, ord={1.0: 1, 2.0: 2, np.inf: np.inf}[ell.p]))


# ------------------------------------------------------------------ 1


def test_rank_one_identity(criterion):
    criterion(1, "rank-one identity")
    rng = np.random.default_rng(20240101)
    started = time.perf_counter()
    worst = 0.0
    instances = 0
    for ell_dom, ell_cod in itertools.product(NORMS, NORMS):
        for _ in range(32):
            n, K = int(rng.integers(1, 7)), int(rng.integers(1, 5))
            A, B = random_grid(rng, n, K), random_grid(rng, n, K)
            u, x = rng.standard_normal(n), rng.standard_normal(n)
            p, q = int(rng.integers(1, K + 1)), int(rng.integers(1, K + 1))
            dom, cod = KotheSpace(A, ell_dom), KotheSpace(B, ell_cod)
            T = RankOneOperator(u, x)
            value = rank_one_norm(T, dom, cod, p, q)
            expected = reference_dual(u, A.column(q), ell_dom) * reference_norm(x, B.column(p), ell_cod)
            worst = max(worst, abs(value - expected) / expected)
            if ell_dom == L1:
                grid_value = opnorm_l1_domain(T.to_matrix(), dom, cod, p, q)
                worst = max(worst, abs(grid_value - value) / value)
            instances += 1
    elapsed = time.perf_counter() - started
    assert instances >= 500
    assert worst <= 1e-12
    assert elapsed < 10.0


# ------------------------------------------------------------------ 2


def test_column_formula_against_oracle(criterion):
    criterion(2, "column formula vs brute-force oracle")
    rng = np.random.default_rng(7)
    started = time.perf_counter()
    checked = 0
    for ell_dom, ell_cod in itertools.product(NORMS, NORMS):
        for _ in range(6):
            A, B = random_grid(rng, 4, 4), random_grid(rng, 4, 4)
            T = MatrixOperator(rng.standard_normal((4, 4)) * (rng.random((4, 4)) < 0.8))
            dom, cod = KotheSpace(A, ell_dom), KotheSpace(B, ell_cod)
            m, k = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            oracle = brute_opnorm(T, dom, cod, m, k, density=500, seed=checked)
            if ell_dom == L1:
                exact = opnorm_l1_domain(T, dom, cod, m, k)
                assert oracle.exact
                assert abs(exact - oracle.value) <= 1e-12 * max(exact, 1e-300)
            else:
                bounds = opnorm_bounds(T, dom, cod, m, k)
                assert oracle.value <= bounds.upper * (1 + 1e-12)
                if oracle.exact:
                    assert bounds.lower <= oracle.value * (1 + 1e-12)
            checked += 1
    assert time.perf_counter() - started < 30.0


# ------------------------------------------------------------------ 3

FAILING_PAIRS = [
    ("inf-lin", power_series(INFINITE_TYPE, n=12), power_series(INFINITE_TYPE, n=12)),
    ("fin-lin", power_series(FINITE_TYPE, n=30), power_series(FINITE_TYPE, n=30)),
    ("inf->inf3", power_series(INFINITE_TYPE, n=8), power_series(INFINITE_TYPE, n=8, slope=3.0)),
    ("fin-sq", power_series(FINITE_TYPE, n=12, rule="list", values=[float(i * i) for i in range(1, 13)]),
     power_series(INFINITE_TYPE, n=12)),
]


def test_necessity_replay(criterion):
    criterion(3, "counterexamples replay through rank-one operators")
    replayed = 0
    for name, A, B in FAILING_PAIRS:
        budget = SearchBudget(n_range=A.n_max)
        verdict = check_b_matrix_pair(A, B, budget=budget)
        assert verdict.status == FAILS, name
        dom, cod = KotheSpace(A), KotheSpace(B)
        for ce in verdict.counterexamples:
            for ref in ce.refutations:
                for (v, i), ratio in ref.trail:
                    T = RankOneOperator.coordinate(i, v, A.n_max, B.n_max)
                    lhs = rank_one_norm(T, dom, cod, ref.r, ref.N)
                    rhs = max(rank_one_norm(T, dom, cod, k, ce.nmap[k - 1]) for k in range(1, ref.k0 + 1))
                    assert math.isclose(lhs / rhs, ratio, rel_tol=1e-12), (name, v, i)
                    replayed += 1
    assert replayed > 0


# ------------------------------------------------------------------ 4


def holding_pairs():
    rng = np.random.default_rng(4)
    weights = np.arange(1.0, 9.0)
    yield power_series(FINITE_TYPE, n=8, K=4), KotheMatrix.constant_in_k(weights, 4)
    yield power_series(INFINITE_TYPE, n=8, K=4), KotheMatrix.constant_in_k(weights, 4)
    yield power_series(INFINITE_TYPE, n=8, K=4, slope=3.0), KotheMatrix.constant_in_k(np.ones(8), 4)
    yield KotheMatrix.from_grid([[1.0, 2.0, 5.0, 9.0]]), KotheMatrix.from_grid([[1.0, 3.0, 3.0, 7.0]])
    # codomain levels dominated by the first domain level
    A = random_grid(rng, 8, 4)
    yield A, KotheMatrix.constant_in_k(A.column(1) * rng.uniform(0.5, 2.0, 8), 4)


def continuous_family(n, count=200, seed=11):
    rng = np.random.default_rng(seed)
    family = []
    for j in range(count):
        kind = j % 4
        if kind == 0:
            M = rng.standard_normal((n, n))
        elif kind == 1:
            M = rng.standard_normal((n, n)) * (rng.random((n, n)) < 0.3)
        elif kind == 2:
            M = np.diag(rng.standard_normal(n))
        else:
            M = np.outer(rng.standard_normal(n), rng.standard_normal(n)) * np.exp(-rng.uniform(0, 2) * np.arange(n))
        family.append(MatrixOperator(M))
    return family


def test_sufficiency_constant(criterion):
    criterion(4, "sufficiency constant C*k0 on a 200-operator family")
    violations = checked = 0
    for A, B in holding_pairs():
        n = A.n_max
        budget = SearchBudget(n_range=max(n, 4))
        verdict = check_b_matrix_pair(A, B, budget=budget)
        assert verdict.status == HOLDS
        ops = continuous_family(n)
        dom, cod = KotheSpace(A.truncate(n) if A.is_generated else A), KotheSpace(B.truncate(n) if B.is_generated else B)
        for w in verdict.witnesses:
            report = vogt_inequality_check(ops, dom, cod, w)
            checked += report.checked
            violations += report.max_scaled_ratio > 1 + 1e-12
    assert checked >= 200
    assert violations == 0


# ------------------------------------------------------------------ 5


def tiny_fixtures():
    n, K = 6, 3
    rng = np.random.default_rng(5)
    gens = [
        power_series(INFINITE_TYPE, n=n, K=K),
        power_series(FINITE_TYPE, n=n, K=K),
        power_series(INFINITE_TYPE, n=n, K=K, slope=2.0),
        KotheMatrix.constant_in_k(np.arange(1.0, n + 1), K),
        KotheMatrix.from_grid([[1.0, 2.0, 4.0]]),
    ]
    for A, B in itertools.product(gens, repeat=2):
        yield A, B
    for _ in range(4):
        yield random_grid(rng, n, K), random_grid(rng, n, K)


def test_tiny_ground_truth(criterion):
    n, K = 6, 3
    budget = SearchBudget(n_range=n)
    budget = budget.with_maps(*nondecreasing_maps(K, budget.n_max_answer(K)))
    count = 0
    for A, B in tiny_fixtures():
        fast, truth = check_b_matrix_pair(A, B, budget=budget), brute_force_condition(A, B, budget)
        assert fast.status == truth.status
        frontier = lambda v: sorted((w.nmap, w.N, tuple((p.r, p.k0) for p in w.per_r)) for w in v.witnesses)
        assert frontier(fast) == frontier(truth)
        count += 1
    ident = power_series(INFINITE_TYPE, n=n, K=K)
    assert brute_force_condition(ident, ident, budget).status == FAILS
    assert check_b_matrix_pair(ident, KotheMatrix.constant_in_k(np.arange(1.0, 7.0), K), budget=budget).status == HOLDS
    criterion(5, "tiny-scale agreement with exhaustive quantifiers", f"{count} fixtures")
    assert count >= 20


# ------------------------------------------------------------------ 6


def test_nuclearity_numerics(criterion):
    criterion(6, "nuclearity: geometric theta and constant-weight counterexample")
    B = power_series(INFINITE_TYPE, n=30, K=5)
    report = check_nuclear(B, (1, 2, 3, 4, 5), SearchBudget(n_range=30))
    assert report.holds
    for k in range(1, 5):
        assert report.smap[k] == k + 1
        assert abs(report.theta_value(k) - 1.0 / (math.e - 1.0)) <= 1e-12
    flat = KotheMatrix.constant_in_k(np.ones(30), 5)
    assert check_nuclear(flat, (1, 2, 3, 4, 5), SearchBudget(n_range=30)).status == FAILS


# ------------------------------------------------------------------ 7

AGREEMENT_GENERATORS = {
    "inf-lin": dict(kind=INFINITE_TYPE),
    "fin-lin": dict(kind=FINITE_TYPE),
    "inf-lin3": dict(kind=INFINITE_TYPE, slope=3.0),
    "fin-lin3": dict(kind=FINITE_TYPE, slope=3.0),
    "inf-log4": dict(kind=INFINITE_TYPE, rule="log", scale=4.0),
    "fin-sq": dict(kind=FINITE_TYPE, rule="list", values=[float(i * i) for i in range(1, 201)]),
}
# polynomially growing ratios with small exponents: the numeric classifier abstains
ABSTAINING_DOMAIN = ("fin-log4", dict(kind=FINITE_TYPE, rule="log", scale=4.0))


def generator(params, n, K):
    params = dict(params)
    return KotheMatrix.power_series(params.pop("kind"), n_max=n, k_max=K, **params)


def replay_lp(lp: dict) -> bool:
    forms = [(Fraction(a), Fraction(b)) for a, b in lp["forms"]]
    if lp["feasible"]:
        cert = LPCertificate(True, point=tuple(Fraction(c) for c in lp["ray"]))
    else:
        cert = LPCertificate(False, multipliers=tuple((k, Fraction(v)) for k, v in lp["multipliers"]))
    return verify_certificate(forms, cert)


def test_mode_agreement(criterion):
    n, K = 200, 5
    budget = SearchBudget(n_range=n)
    gens = {name: generator(params, n, K) for name, params in AGREEMENT_GENERATORS.items()}
    gens_with_codomain = dict(gens, **{ABSTAINING_DOMAIN[0]: generator(ABSTAINING_DOMAIN[1], n, K)})
    pairs = [(a, b) for a in gens for b in gens_with_codomain]
    kinds = set()
    lp_checked = 0
    for a, b in pairs:
        A, B = gens[a], gens_with_codomain[b]
        numeric, symbolic = check_b_matrix_pair(A, B, budget=budget), check_b_symbolic(A, B, budget)
        assert numeric.status == symbolic.status, (a, b)
        kinds.add((A.generator.kind, A.generator.rule))
        for ce in symbolic.counterexamples:
            for ref in ce.refutations:
                assert replay_lp(ref.lp)
                lp_checked += 1
        # every cell of the search, feasible or not, carries a checkable certificate
        for nmap in budget.maps(K):
            for N, r, k0 in itertools.product(budget.answers(K), budget.r_values(K), range(1, K + 1)):
                forms = pair_forms(A.generator, B.generator, nmap, N, r, k0)
                assert verify_certificate(forms, decide_forms(forms))
                lp_checked += 1
    # the abstaining family: numeric never contradicts the exact verdict
    dom = generator(ABSTAINING_DOMAIN[1], n, K)
    abstained = 0
    for b, B in gens_with_codomain.items():
        numeric, symbolic = check_b_matrix_pair(dom, B, budget=budget), check_b_symbolic(dom, B, budget)
        assert numeric.status in (symbolic.status, INCONCLUSIVE)
        abstained += numeric.status == INCONCLUSIVE
    criterion(7, "symbolic and numeric verdicts agree",
              f"{len(pairs)} pairs, {lp_checked} LP certificates; {abstained} finite-log-domain pairs abstain")
    assert len(pairs) >= 12
    assert {FINITE_TYPE, INFINITE_TYPE} <= {kind for kind, _ in kinds}
    assert {"linear", "log", "list"} <= {rule for _, rule in kinds}


# ------------------------------------------------------------------ 8


def test_factorization_pipeline(criterion):
    criterion(8, "tensor-product factorization pipeline")
    K, n = 4, 10
    E = KotheSpace(KotheMatrix.constant_in_k(np.arange(1.0, n + 1), K, "E"))
    A = KotheMatrix.power_series(INFINITE_TYPE, n_max=n, k_max=K, label="A")
    B = KotheMatrix.power_series(INFINITE_TYPE, n_max=n, k_max=K, label="B")
    C = KotheMatrix.constant_in_k(np.ones(n), K, "C")
    D = tensor_product(A, B)
    family = FunctionalFamily.default(E, n)
    budget = SearchBudget(n_range=n)
    nmap = (1, 2, 3, 4)

    assert check_nuclear(A, nmap, budget).holds and check_nuclear(B, nmap, budget).holds
    pair = check_b_matrix_pair(B, C, budget=budget)
    assert pair.holds
    smap = splice_map(nmap, pair.witness_for(nmap).N, K)
    dual = check_b_dual(family, A, budget=budget.with_maps(smap))
    assert dual.holds
    combined = combine_witnesses(dual, pair, nmap, K)

    pointwise = verify_bf_witness(family, D, C, combined, budget)
    assert pointwise.violations == 0
    assert check_bf_condition(family, D, C, budget.with_maps(nmap)).holds

    nuclear = check_nuclear(D, nmap, budget)
    assert nuclear.holds
    thetas = {k: t.theta for k, t in nuclear.theta.items()}
    shifted = tuple(min(K, nuclear.smap.get(k, K)) for k in range(1, K + 1))
    shifted_condition = check_bf_condition(family, D, C, budget.with_maps(shifted))
    assert shifted_condition.holds

    F, G = KotheSpace(D), KotheSpace(C)
    factor_pairs = rank_one_factor_pairs(family, F, G, 6)
    ops = check_bf_operators(factor_pairs, (E, F, G), SearchBudget(n_range=6).with_maps(nmap))
    assert ops.holds
    w2 = shifted_condition.witness
    constants = operator_constants(factor_pairs, (E, F, G), Witness(nmap, w2.N, w2.per_r))
    bound = proof_bound(w2, thetas)
    assert all(constants[r] <= bound[r] for r in constants)


# ------------------------------------------------------------------ 9


def test_tensor_multiplicativity(criterion):
    criterion(9, "tensor multiplicativity and norm-system equivalence")
    rng = np.random.default_rng(9)
    worst = 0.0
    for j in range(200):
        pairing = PAIRINGS[j % 2]
        K = int(rng.integers(1, 4))
        A, B = random_grid(rng, int(rng.integers(1, 6)), K), random_grid(rng, int(rng.integers(1, 6)), K)
        D = tensor_product(A, B, pairing)
        x, y = rng.standard_normal(A.n_max), rng.standard_normal(B.n_max)
        k = int(rng.integers(1, K + 1))
        lhs = seminorm(D, L1, tensor_vector(x, y, D.pairs), k)
        rhs = seminorm(A, L1, x, k) * seminorm(B, L1, y, k)
        worst = max(worst, abs(lhs - rhs) / rhs)
    assert worst <= 1e-12
    nuclear_fixtures = [
        power_series(INFINITE_TYPE, n=30, K=4),
        power_series(INFINITE_TYPE, n=30, K=4, slope=2.0),
        power_series(INFINITE_TYPE, n=200, K=4, rule="log", scale=4.0),
    ]
    for Bm in nuclear_fixtures:
        budget = SearchBudget(n_range=Bm.n_max)
        report = check_nuclear(Bm, (1, 2, 3, 4), budget)
        assert report.holds
        assert norm_system_equivalence_check(Bm, report, budget) <= 1 + 1e-9


# ------------------------------------------------------------------ 10


def test_replay_determinism(criterion, tmp_path, monkeypatch, fixtures_dir, capsys):
    monkeypatch.setenv("KOTHE_FIXTURES", str(fixtures_dir))
    small = ["--budget-n", "10", "--budget-k", "4"]
    runs = {
        "validate": ["validate", "inf_linear.json"],
        "norm": ["norm", "small_l2.json", "--vector", "1,-2,0.5", "--level", "2"],
        "opnorm": ["opnorm", "rank_one.json", "small_l2.json", "small_l2.json", "--m", "2", "--k", "1"],
        "b-pair": ["check", "b-pair", "inf_linear.json", "fin_linear.json", "--mode", "both"],
        "b-dual": ["check", "b-dual", "constant.json", "inf_linear.json", *small, "--nmap", "1,3,4,4", "--r-max", "4"],
        "nuclear": ["check", "nuclear", "inf_log.json", "--mode", "both"],
        "bf-cond": ["check", "bf-cond", "constant.json", "inf_linear.json", "constant.json", *small],
        "bf-ops": ["check", "bf-ops", "constant.json", "inf_linear.json", "constant.json", *small],
        "tensor": ["check", "tensor", "pair_a.json", "pair_b.json"],
        "pair-for-combine": ["check", "b-pair", "inf_linear.json", "constant.json", *small],
    }
    reports = {}
    for name, argv in runs.items():
        path = tmp_path / f"{name}.json"
        assert main(argv + ["--report", str(path), "--seed", "3"]) in (0, 1, 3), name
        reports[name] = path
    combined = tmp_path / "combine.json"
    assert main(["combine", str(reports["b-dual"]), str(reports["pair-for-combine"]), "--nmap", "1,2,3,4",
                 "--report", str(combined)]) == 0
    reports["combine"] = combined
    capsys.readouterr()
    for name, path in reports.items():
        same, message = replay(str(path))
        assert same, message
        # the certificate schema itself round-trips
        result = json.loads(path.read_text())["result"]
        if "verdict" in result and "budget" in result and "witnesses" in result:
            assert Verdict.from_dict(result).to_dict() == result
    criterion(10, "replay determinism", f"{len(reports)} reports")

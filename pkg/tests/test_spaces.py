import json
import math

import numpy as np
import pytest

from kothe.spaces import (
    C0,
    FINITE_TYPE,
    INFINITE_TYPE,
    L1,
    L2,
    LINF,
    CoordVector,
    EllNorm,
    KotheMatrix,
    KotheSpace,
    basis_seminorm,
    dual_seminorm,
    entry,
    seminorm,
    validate_matrix,
)

E6 = 403.4287934927351
E_INV = 0.36787944117144233


class TestValidate:
    def test_monotone_grid_is_valid(self):
        assert validate_matrix(KotheMatrix.from_grid([[1, 2], [3, 3]])) == []

    def test_decreasing_row(self):
        (v,) = validate_matrix(KotheMatrix.from_grid([[2, 1]]))
        assert (v.kind, v.n, v.k) == ("monotonicity", 1, 1)

    def test_zero_row(self):
        (v,) = validate_matrix(KotheMatrix.from_grid([[0, 0]]))
        assert (v.kind, v.n) == ("row_positivity", 1)

    def test_negative_entry(self):
        kinds = {v.kind for v in validate_matrix(KotheMatrix.from_grid([[-1, 2]]))}
        assert "negative" in kinds

    def test_decreasing_exponents(self):
        A = KotheMatrix.power_series(n_max=3, k_max=2, rule="list", values=(0, 2, 1))
        assert any(v.kind == "exponent" for v in validate_matrix(A))

    def test_power_series_valid(self, inf_linear, fin_linear):
        assert validate_matrix(inf_linear) == []
        assert validate_matrix(fin_linear) == []


class TestEntries:
    def test_infinite_type(self, inf_linear):
        assert entry(inf_linear, 2, 3) == pytest.approx(E6, rel=1e-15)

    def test_explicit(self):
        assert entry(KotheMatrix.from_grid([[1, 2], [3, 4]]), 2, 1) == 3.0

    def test_finite_type(self, fin_linear):
        assert entry(fin_linear, 1, 1) == pytest.approx(E_INV, rel=1e-15)

    def test_basis_seminorm(self, inf_linear):
        assert basis_seminorm(KotheMatrix.from_grid([[7]]), 1, 1) == 7.0
        assert basis_seminorm(inf_linear, 3, 2) == pytest.approx(E6, rel=1e-15)

    @pytest.mark.parametrize("ell", [L1, L2, LINF, C0])
    def test_basis_vector_norm_is_weight(self, inf_linear, ell):
        x = CoordVector.unit(4)
        assert seminorm(inf_linear, ell, x, 2) == pytest.approx(inf_linear.entry(4, 2), rel=1e-15)

    def test_out_of_range(self, inf_linear):
        with pytest.raises(IndexError):
            inf_linear.entry(31, 1)
        with pytest.raises(IndexError):
            inf_linear.entry(1, 6)

    def test_log_rule(self):
        A = KotheMatrix.power_series(INFINITE_TYPE, n_max=5, k_max=2, rule="log", scale=1.0, shift=1.0)
        assert A.entry(3, 2) == pytest.approx(16.0, rel=1e-13)

    def test_overflow_stays_in_log_space(self):
        A = KotheMatrix.power_series(INFINITE_TYPE, n_max=400, k_max=3)
        assert math.isinf(A.entry(400, 3))
        assert A.log_entry(400, 3) == 1200.0


class TestSeminorms:
    def test_l1_sum(self):
        A = KotheMatrix.from_grid([[1], [2], [4]])
        assert seminorm(A, L1, [1, 0.5, 0.25], 1) == 3.0

    def test_l2_pythagoras(self):
        A = KotheMatrix.from_grid([[3], [4]])
        assert seminorm(A, L2, [1, 1], 1) == 5.0

    def test_dual_l1(self):
        A = KotheMatrix.from_grid([[1], [2]])
        assert dual_seminorm(A, L1, [1, 4], 1) == 2.0

    def test_dual_l2(self):
        A = KotheMatrix.from_grid([[1], [1]])
        assert dual_seminorm(A, L2, [3, 4], 1) == 5.0

    def test_dual_coordinate(self):
        A = KotheMatrix.from_grid([[2], [5]])
        assert dual_seminorm(A, L1, CoordVector.unit(2, functional=True), 1) == 0.2

    def test_dual_zero_weight_conventions(self):
        A = KotheMatrix.from_grid([[0, 1], [1, 1]])
        assert dual_seminorm(A, L1, [1, 0], 1) == math.inf
        assert dual_seminorm(A, L1, [0, 1], 1) == 1.0

    def test_c0_dual_is_l1(self):
        A = KotheMatrix.from_grid([[1], [2]])
        assert dual_seminorm(A, C0, [1, 4], 1) == 3.0

    def test_conjugate_exponents(self):
        assert L1.conjugate_exponent == math.inf
        assert LINF.conjugate_exponent == 1.0
        assert EllNorm("lp", 3.0).conjugate_exponent == 1.5

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            EllNorm("lp", 0.5)


class TestSerialization:
    def test_explicit_round_trip_is_bit_exact(self):
        rng = np.random.default_rng(3)
        grid = np.sort(rng.random((5, 3)), axis=1)
        A = KotheMatrix.from_grid(grid, label="random")
        B = KotheMatrix.from_dict(json.loads(json.dumps(A.to_dict())))
        assert np.array_equal(A.values, B.values)
        assert B.label == "random"

    def test_generator_round_trip(self):
        A = KotheMatrix.power_series(FINITE_TYPE, n_max=8, k_max=3, rule="log", scale=2.0, shift=0.5)
        B = KotheMatrix.from_dict(A.to_dict())
        assert np.array_equal(A.log_values, B.log_values)

    def test_space_round_trip(self):
        S = KotheSpace(KotheMatrix.from_grid([[1, 2]]), C0)
        assert KotheSpace.from_dict(S.to_dict()).ell == C0

    def test_schema_shape(self, inf_linear):
        d = inf_linear.to_dict()
        assert d["source"] == {"kind": "power_series", "type": "infinite", "alpha": {"rule": "linear", "slope": 1.0, "offset": 0.0}}

    def test_unknown_source(self):
        with pytest.raises(ValueError):
            KotheMatrix.from_dict({"n_max": 1, "k_max": 1, "source": {"kind": "spline"}})

import math

import numpy as np
import pytest

from cuspspec import dtn_cusp
from cuspspec.dtn_cusp import (
    DtnSymbol,
    SplitInputs,
    n2_symbol,
    n2_symbol_record,
    n2_zero_symbol,
    splitting_det,
)
from cuspspec.errors import DomainError


class TestZeroModel:
    def test_value(self):
        assert abs(n2_zero_symbol(2, 1.5)
                   - 2.0 * math.pi * 2.0 * 1.5 ** 2) < 1e-14

    def test_mode_sign_independent(self):
        assert n2_zero_symbol(-3, 2.0) == n2_zero_symbol(3, 2.0)

    def test_beta_below_one_rejected(self):
        with pytest.raises(DomainError):
            n2_zero_symbol(1, 0.9)


class TestNonzeroModes:
    def test_limits_at_one_and_zero(self):
        for n in (1, 2, 3):
            for beta in (1.0, 1.5, 3.0):
                ref = n2_zero_symbol(n, beta)
                for s in (1.0 + 1e-6, 1.0 - 1e-6, 1e-6, -1e-6):
                    assert abs(n2_symbol(s, n, beta) - ref) < 1e-5 * ref

    def test_error_shrinks_monotonically(self):
        ref = n2_zero_symbol(1, 1.5)
        errs = [abs(n2_symbol(1.0 + eps, 1, 1.5) - ref)
                for eps in (1e-2, 1e-3, 1e-4, 1e-5)]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_large_argument_no_underflow(self):
        # x = 2 pi * 3 * 9 ~ 170 is far past the e^{-x} underflow of the
        # unscaled Bessel product route
        val = n2_symbol(0.7, 3, 3.0)
        assert math.isfinite(val)
        assert abs(val - n2_zero_symbol(3, 3.0)) < 1.0

    def test_negative_mode_symmetric(self):
        assert abs(n2_symbol(0.8, -2, 1.2) - n2_symbol(0.8, 2, 1.2)) < 1e-13

    def test_complex_s_conjugate_symmetry(self):
        s = 0.3 + 0.5j
        a = n2_symbol(s, 1, 1.1)
        b = n2_symbol(np.conj(s), 1, 1.1)
        assert abs(a - np.conj(b)) < 1e-7 * abs(a)

    def test_complex_s_matches_real_limit(self):
        a = n2_symbol(0.8 + 1e-8j, 1, 1.2)
        b = n2_symbol(0.8, 1, 1.2)
        assert abs(a - b) < 1e-6 * abs(b)

    def test_imaginary_part_range_limited(self):
        with pytest.raises(DomainError):
            n2_symbol(0.3 + 20.0j, 1, 1.5)


class TestZeroMode:
    def test_two_branches(self):
        assert n2_symbol(2.0, 0, 1.5) == 1.0
        assert n2_symbol(0.2, 0, 1.5) == -0.2

    def test_critical_line_refused(self):
        with pytest.raises(DomainError):
            n2_symbol(0.5, 0, 1.5)

    def test_complex_branches(self):
        v = n2_symbol(2.0 + 1.0j, 0, 1.5)
        assert abs(v - (1.0 + 1.0j)) < 1e-15


class TestRecordsAndSplitting:
    def test_record_fields(self):
        rec = n2_symbol_record(0.8, 2, 1.5)
        assert isinstance(rec, DtnSymbol)
        assert rec.mode == 2 and rec.beta == 1.5
        assert rec.value == n2_symbol(0.8, 2, 1.5)

    def test_record_validation(self):
        with pytest.raises(DomainError):
            DtnSymbol(beta=0.5, mode=1, value=1.0)

    def test_splitting_multiplicative(self):
        base = SplitInputs(det_compact=2.0, det_cusp_modes=3.0,
                           detstar_R=5.0, area=4.0 * math.pi,
                           boundary_length=2.0)
        doubled = SplitInputs(det_compact=4.0, det_cusp_modes=3.0,
                              detstar_R=5.0, area=4.0 * math.pi,
                              boundary_length=2.0)
        assert abs(splitting_det(doubled)
                   - 2.0 * splitting_det(base)) < 1e-12

    def test_splitting_value(self):
        inp = SplitInputs(det_compact=1.5, det_cusp_modes=2.0,
                          detstar_R=0.5, area=6.0, boundary_length=3.0)
        assert abs(splitting_det(inp) - 3.0) < 1e-14

    def test_splitting_validation(self):
        with pytest.raises(DomainError):
            SplitInputs(det_compact=-1.0, det_cusp_modes=1.0,
                        detstar_R=1.0, area=1.0, boundary_length=1.0)

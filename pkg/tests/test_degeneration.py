import math

import mpmath as mp
import numpy as np
import pytest

from cuspspec import degeneration, zeta_engine
from cuspspec.degeneration import (
    PinchSweepRow,
    default_small_eigs,
    pinch_sweep,
    rows_to_csv,
    rows_to_json,
    wolpert_asymptotic,
    wolpert_sum,
)
from cuspspec.errors import DomainError
from cuspspec.fuchsian import builtin_group, enumerate_length_spectrum
from cuspspec.trace_terms import EigenvalueList


def _wolpert_oracle(ell, s, n_terms):
    """Direct extended-precision partial sum."""
    with mp.workdps(30):
        e = mp.mpf(ell)
        sv = mp.mpf(s)
        total = mp.mpf(0)
        for n in range(1, n_terms + 1):
            total += mp.e ** (-n * sv * e) / (n * (1 - mp.e ** (-n * e)))
        return float(total)


class TestWolpertSum:
    def test_matches_extended_precision_oracle(self):
        for ell, s, n in ((1e-3, 1.0, 200000), (0.01, 0.5, 40000),
                          (0.1, 2.0, 4000), (1.0, 1.0, 200)):
            mine = wolpert_sum(ell, s)
            ref = _wolpert_oracle(ell, s, n)
            assert abs(mine - ref) < 1e-10 * abs(ref)

    def test_asymptotic_bounded_difference(self):
        for ell in np.geomspace(1e-4, 1e-1, 10):
            d = abs(wolpert_sum(ell, 1.0) - wolpert_asymptotic(ell, 1.0))
            assert d <= 1.0

    def test_monotone_in_ell(self):
        vals = [wolpert_sum(e, 1.0) for e in (0.01, 0.02, 0.05, 0.1)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_validation(self):
        with pytest.raises(DomainError):
            wolpert_sum(0.0, 1.0)
        with pytest.raises(DomainError):
            wolpert_sum(0.1, -1.0)
        with pytest.raises(DomainError):
            wolpert_sum(0.1, 1.0, tol=0.0)
        with pytest.raises(DomainError):
            wolpert_asymptotic(0.7, 1.0)


class TestPinchSweep:
    def _base(self):
        g = builtin_group("thrice-punctured-sphere")
        return g, enumerate_length_spectrum(g, 6.0, 6)

    def test_rows_finite_and_decreasing(self):
        g, spec = self._base()
        grid = sorted(np.geomspace(1e-3, 1e-1, 8), reverse=True)
        rows = pinch_sweep(spec, [0], grid, None, 2.0, g.surface)
        assert len(rows) == len(grid)
        ests = [r.log_det_estimate for r in rows]
        assert all(b < a for a, b in zip(ests, ests[1:]))

    def test_wolpert_contribution_scales_with_multiplicity(self):
        g, spec = self._base()
        grid = [0.01]
        one = pinch_sweep(spec, [0], grid, None, 0.0, g.surface)[0]
        # pinching two classes of the same multiplicity at equal length
        # doubles the Wolpert column exactly
        two = pinch_sweep(spec, [0, 1], grid, None, 0.0, g.surface)[0]
        p0 = spec.entries[0].mult
        p1 = spec.entries[1].mult
        assert abs(one.wolpert_sum / p0
                   - two.wolpert_sum / (p0 + p1)) < 1e-12

    def test_estimate_assembly(self):
        g, spec = self._base()
        row = pinch_sweep(spec, [0], [0.02], None, 4.0, g.surface)[0]
        mc = zeta_engine.xi_prime0(g.surface.cusps)
        ref = 4.0 - mc - row.wolpert_sum + row.small_eig_logsum
        assert abs(row.log_det_estimate - ref) < 1e-12

    def test_explicit_small_eigs(self):
        g, spec = self._base()
        eigs = {0.02: EigenvalueList((1e-4, 2e-4))}
        row = pinch_sweep(spec, [0], [0.02], eigs, 0.0, g.surface)[0]
        assert abs(row.small_eig_logsum
                   - (math.log(1e-4) + math.log(2e-4))) < 1e-12

    def test_default_small_eig_model(self):
        eigs = default_small_eigs(3, 0.01)
        assert eigs.values == (1e-4, 1e-4, 1e-4)

    def test_grid_validation(self):
        g, spec = self._base()
        with pytest.raises(DomainError):
            pinch_sweep(spec, [0], [0.01, 0.1], None, 0.0, g.surface)
        with pytest.raises(DomainError):
            pinch_sweep(spec, [0], [-0.1], None, 0.0, g.surface)
        with pytest.raises(DomainError):
            pinch_sweep(spec, [99], [0.1], None, 0.0, g.surface)

    def test_row_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            PinchSweepRow(0.1, math.inf, 0.0, 0.0, 0.0, 0.0)


class TestSerialization:
    def test_csv_layout(self):
        g = builtin_group("thrice-punctured-sphere")
        spec = enumerate_length_spectrum(g, 6.0, 6)
        rows = pinch_sweep(spec, [0], [0.1, 0.05], None, 0.0, g.surface)
        text = rows_to_csv(rows, ["note"])
        lines = text.strip().split("\n")
        assert lines[0] == "# note"
        assert lines[1] == ("ell,wolpert_sum,wolpert_asymptotic,"
                            "small_eig_logsum,log_det_estimate,baseline")
        assert len(lines) == 4
        assert float(lines[2].split(",")[0]) == 0.1

    def test_json_fields(self):
        g = builtin_group("thrice-punctured-sphere")
        spec = enumerate_length_spectrum(g, 6.0, 6)
        rows = pinch_sweep(spec, [0], [0.1], None, 1.5, g.surface)
        objs = rows_to_json(rows)
        assert objs[0]["baseline"] == 1.5
        assert set(objs[0]) == {"ell", "wolpert_sum", "wolpert_asymptotic",
                                "small_eig_logsum", "log_det_estimate",
                                "baseline"}

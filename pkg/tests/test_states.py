import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvbell.quadrature import QuadratureSettings, cfrd_lhs, cfrd_report
from cvbell.states import (
    PsiSParams,
    amplitude_scan,
    amplitude_scan_csv,
    analytic_ratio,
    balanced_psi_s,
    build_psi_s,
    canonical_signs,
    first_violating_n,
)


class TestParams:
    def test_rejects_odd_n(self):
        with pytest.raises(ValueError, match="even"):
            PsiSParams(n=3, c0=1.0, c1=0.0)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="1e-12"):
            PsiSParams(n=2, c0=1.0, c1=0.5)


class TestBuildState:
    def test_balanced_two_mode(self):
        state = balanced_psi_s(2)
        amp = 1 / math.sqrt(2)
        assert dict(state.amplitudes) == {
            (0, 1): pytest.approx(amp),
            (1, 0): pytest.approx(amp),
        }

    def test_first_branch_has_empty_leading_modes(self):
        state = balanced_psi_s(6)
        assert (0, 0, 0, 1, 1, 1) in state.amplitudes
        assert (1, 1, 1, 0, 0, 0) in state.amplitudes
        assert len(state.amplitudes) == 2

    def test_degenerate_amplitudes_give_product_state(self):
        state = build_psi_s(PsiSParams(n=2, c0=1.0, c1=0.0))
        assert dict(state.amplitudes) == {(0, 1): 1.0}
        assert cfrd_report(state, canonical_signs(2)).ratio == 0.0

    def test_four_mode_lhs(self):
        # <a1 a2 a3dag a4dag> = c0* c1 = 1/2, squared and scaled by 4**4
        state = balanced_psi_s(4)
        assert cfrd_lhs(state, canonical_signs(4)) == pytest.approx(
            4.0**4 * 0.25, abs=1e-10
        )


class TestCanonicalSigns:
    def test_patterns(self):
        assert canonical_signs(2).signs == (1, -1)
        assert canonical_signs(4).signs == (1, 1, -1, -1)
        assert all(t == 0.0 for t in canonical_signs(6).thetas)

    def test_odd_rejected(self):
        with pytest.raises(ValueError, match="even"):
            canonical_signs(5)

    def test_all_plus_signs_annihilate_both_branches(self):
        state = balanced_psi_s(4)
        all_plus = QuadratureSettings((0.0,) * 4, (1,) * 4)
        assert cfrd_lhs(state, all_plus) == 0.0


class TestClosedForm:
    def test_reference_values(self):
        assert analytic_ratio(2) == pytest.approx(1 / 3, abs=1e-15)
        assert analytic_ratio(8) == pytest.approx(256 / 324, abs=1e-12)
        assert analytic_ratio(8) < 1
        assert analytic_ratio(10) == pytest.approx(1024 / 972, abs=1e-12)
        assert analytic_ratio(10) > 1

    def test_simulation_matches_closed_form(self):
        for n in range(2, 15, 2):
            report = cfrd_report(balanced_psi_s(n), canonical_signs(n))
            assert report.ratio == pytest.approx(analytic_ratio(n), abs=1e-12)

    def test_first_violating_n(self):
        assert first_violating_n() == 10
        assert analytic_ratio(8) <= 1
        assert analytic_ratio(10) > 1

    def test_growth_factor_per_step(self):
        for n in range(2, 20, 2):
            assert analytic_ratio(n + 2) / analytic_ratio(n) == pytest.approx(
                4 / 3, abs=1e-12
            )

    def test_odd_rejected(self):
        with pytest.raises(ValueError, match="even"):
            analytic_ratio(7)


class TestAmplitudeScan:
    def test_maximum_at_half(self):
        rows = amplitude_scan(10)
        best = max(rows, key=lambda row: row[1])
        assert best[0] == pytest.approx(0.5)
        assert best[1] == pytest.approx(analytic_ratio(10), abs=1e-12)

    def test_endpoints_vanish(self):
        rows = amplitude_scan(4, points=11)
        assert rows[0] == (0.0, 0.0)
        assert rows[-1][1] == pytest.approx(0.0, abs=1e-15)

    def test_quadratic_law(self):
        # lhs goes as |c0 c1|^2 while rhs ignores the amplitudes
        for x, ratio in amplitude_scan(6, points=21):
            assert ratio == pytest.approx(
                4 * x * (1 - x) * analytic_ratio(6), abs=1e-12
            )

    @given(i=st.integers(0, 50))
    @settings(max_examples=20, deadline=None)
    def test_symmetry_is_exact(self, i):
        rows = amplitude_scan(4, points=101)
        assert rows[i][1] == rows[100 - i][1]

    def test_csv_shape(self):
        text = amplitude_scan_csv(2, points=5)
        lines = text.strip().split("\n")
        assert lines[0] == "c0sq,ratio"
        assert len(lines) == 6

    def test_grid_validation(self):
        with pytest.raises(ValueError, match="points"):
            amplitude_scan(2, points=1)

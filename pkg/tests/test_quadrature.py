import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_product_state, random_sparse_state
from cvbell.fock import (
    FockSpaceConfig,
    ProductOperator,
    basis_state,
    density_from_pure,
    expect_product,
    vacuum,
)
from cvbell.quadrature import (
    CfrdReport,
    QuadratureSettings,
    cfrd_lhs,
    cfrd_lhs_hermitian_route,
    cfrd_report,
    cfrd_report_mixed,
    cfrd_rhs,
    ladder_z,
    quadrature_square_sum,
    quadrature_x,
    quadrature_y,
)
from cvbell.states import balanced_psi_s, canonical_signs


def random_settings(rng, n):
    return QuadratureSettings(
        thetas=tuple(rng.uniform(0, 2 * math.pi, n)),
        signs=tuple(rng.choice([-1, 1], n)),
    )


class TestSettings:
    def test_validation(self):
        with pytest.raises(ValueError, match="equal length"):
            QuadratureSettings(thetas=(0.0,), signs=(1, -1))
        with pytest.raises(ValueError, match="signs"):
            QuadratureSettings(thetas=(0.0,), signs=(2,))


class TestQuadratureMatrices:
    def test_x_at_zero_phase(self):
        mat = quadrature_x(0.0, 2)
        assert mat[0, 1] == pytest.approx(1.0)
        assert mat[1, 0] == pytest.approx(1.0)
        assert mat[0, 0] == mat[1, 1] == 0.0

    def test_x_at_quarter_phase_is_y_type(self):
        mat = quadrature_x(math.pi / 2, 2)
        assert mat[0, 1] == pytest.approx(-1j, abs=1e-12)
        assert mat[1, 0] == pytest.approx(1j, abs=1e-12)

    def test_single_photon_x_squared(self):
        # independent oracle: square the explicit cutoff-3 matrix.
        # X^2 = 2n + 1 + (double-ladder phase terms), so <1|X^2|1> = 3;
        # the companion Y contributes the other 3 making X^2 + Y^2 = 4n + 2.
        theta = 0.7
        x = quadrature_x(theta, 3)
        y = quadrature_y(theta, 1, 3)
        assert (x @ x)[1, 1].real == pytest.approx(3.0, abs=1e-12)
        assert (x @ x + y @ y)[1, 1].real == pytest.approx(6.0, abs=1e-12)
        state = basis_state(FockSpaceConfig(1, 3), (1,))
        assert expect_product(state, ProductOperator((x @ x,))).real == pytest.approx(
            3.0, abs=1e-12
        )

    def test_y_is_shifted_x_exactly(self):
        for theta in (0.0, 0.3, 2.1):
            for s in (-1, 1):
                assert np.array_equal(
                    quadrature_y(theta, s, 4), quadrature_x(theta + s * math.pi / 2, 4)
                )

    def test_y_default_sign(self):
        assert np.array_equal(quadrature_y(0.0, 1, 3), quadrature_x(math.pi / 2, 3))

    @given(
        theta=st.floats(-10, 10, allow_nan=False),
        cutoff=st.integers(2, 5),
        s=st.sampled_from([-1, 1]),
    )
    def test_hermiticity_is_exact(self, theta, cutoff, s):
        x = quadrature_x(theta, cutoff)
        y = quadrature_y(theta, s, cutoff)
        assert np.array_equal(x, x.conj().T)
        assert np.array_equal(y, y.conj().T)

    def test_ladder_combination_collapses(self):
        # s=+1: Z = 2 a e^{-i theta}; s=-1: Z = 2 adag e^{i theta}
        theta = 1.234
        a = np.array([[0, 1], [0, 0]], complex)
        z_plus = ladder_z(theta, 1, 2)
        z_minus = ladder_z(theta, -1, 2)
        assert np.allclose(z_plus, 2 * np.exp(-1j * theta) * a, atol=1e-12)
        assert np.allclose(z_minus, 2 * np.exp(1j * theta) * a.conj().T, atol=1e-12)

    def test_square_sum_matrix(self):
        assert np.allclose(quadrature_square_sum(3), np.diag([2.0, 6.0, 10.0]))

    def test_cutoff_too_small(self):
        with pytest.raises(ValueError):
            quadrature_x(0.0, 1)


class TestCfrdSides:
    def test_vacuum_lhs_is_zero(self):
        rng = np.random.default_rng(7)
        for n in (1, 2, 3):
            state = vacuum(FockSpaceConfig(n, 2))
            assert cfrd_lhs(state, random_settings(rng, n)) == pytest.approx(
                0.0, abs=1e-15
            )

    def test_two_mode_lhs_value(self):
        # <a1 a2dag> on the balanced two-branch state is c0* c1 = 1/2,
        # so the lhs is 4**2 * |1/2|**2 = 4
        state = balanced_psi_s(2)
        assert cfrd_lhs(state, canonical_signs(2)) == pytest.approx(4.0, abs=1e-12)

    def test_lhs_invariant_under_phase_shifts(self):
        state = balanced_psi_s(4)
        signs = canonical_signs(4).signs
        base = cfrd_lhs(state, QuadratureSettings((0.0,) * 4, signs))
        rng = np.random.default_rng(3)
        for _ in range(20):
            shifted = QuadratureSettings(tuple(rng.uniform(0, 7, 4)), signs)
            assert cfrd_lhs(state, shifted) == pytest.approx(base, abs=1e-10)

    def test_rhs_values(self):
        assert cfrd_rhs(vacuum(FockSpaceConfig(3, 2))) == pytest.approx(8.0)
        assert cfrd_rhs(basis_state(FockSpaceConfig(1, 2), (1,))) == pytest.approx(6.0)
        for n in (2, 4, 6):
            assert cfrd_rhs(balanced_psi_s(n)) == pytest.approx(
                4.0**n * 0.75 ** (n // 2), abs=1e-9
            )

    def test_rhs_matches_explicit_quadrature_squares(self):
        # at cutoff >= max occupation + 2 the matrix squares are exact
        rng = np.random.default_rng(11)
        space = FockSpaceConfig(modes=2, cutoff=4)
        for _ in range(10):
            state = random_sparse_state(rng, space, terms=3)
            state_occ_max = max(max(occ) for occ in state.amplitudes)
            if state_occ_max > space.cutoff - 2:
                continue
            thetas = rng.uniform(0, 2 * math.pi, 2)
            signs = rng.choice([-1, 1], 2)
            factors = []
            for theta, s in zip(thetas, signs):
                x = quadrature_x(theta, 4)
                y = quadrature_y(theta, int(s), 4)
                factors.append(x @ x + y @ y)
            explicit = expect_product(state, ProductOperator(tuple(factors))).real
            assert cfrd_rhs(state) == pytest.approx(explicit, abs=1e-10)

    def test_report_closed_form_and_violation_onset(self):
        r10 = cfrd_report(balanced_psi_s(10), canonical_signs(10))
        assert r10.ratio == pytest.approx(1024 / 972, abs=1e-12)
        assert r10.violated
        r8 = cfrd_report(balanced_psi_s(8), canonical_signs(8))
        assert r8.ratio == pytest.approx(256 / 324, abs=1e-12)
        assert not r8.violated
        assert r8.ratio <= 1 + 1e-12

    def test_vacuum_report(self):
        report = cfrd_report(vacuum(FockSpaceConfig(2, 2)), canonical_signs(2))
        assert report.ratio == 0.0
        assert not report.violated

    def test_report_serialization_keys(self):
        report = cfrd_report(balanced_psi_s(2), canonical_signs(2))
        assert list(report.to_dict()) == ["n", "lhs", "rhs", "ratio", "violated"]

    def test_settings_length_mismatch(self):
        with pytest.raises(ValueError, match="modes"):
            cfrd_lhs(balanced_psi_s(4), canonical_signs(2))

    def test_mixed_route_matches_pure(self):
        state = balanced_psi_s(4)
        settings = canonical_signs(4)
        pure = cfrd_report(state, settings)
        mixed = cfrd_report_mixed(density_from_pure(state), settings)
        assert mixed.lhs == pytest.approx(pure.lhs, abs=1e-10)
        assert mixed.rhs == pytest.approx(pure.rhs, abs=1e-10)


class TestHermitianRoute:
    def test_agreement_on_two_branch_state(self):
        rng = np.random.default_rng(5)
        state = balanced_psi_s(4)
        for _ in range(5):
            settings = QuadratureSettings(
                tuple(rng.uniform(0, 2 * math.pi, 4)), canonical_signs(4).signs
            )
            assert cfrd_lhs_hermitian_route(state, settings) == pytest.approx(
                cfrd_lhs(state, settings), abs=1e-10
            )

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_agreement_on_random_states(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        space = FockSpaceConfig(n, 2)
        state = random_sparse_state(rng, space, terms=3)
        stg = random_settings(rng, n)
        assert cfrd_lhs_hermitian_route(state, stg) == pytest.approx(
            cfrd_lhs(state, stg), abs=1e-10
        )

    def test_agreement_medium_n(self):
        rng = np.random.default_rng(17)
        space = FockSpaceConfig(8, 2)
        for _ in range(3):
            state = random_sparse_state(rng, space, terms=8)
            stg = random_settings(rng, 8)
            assert cfrd_lhs_hermitian_route(state, stg) == pytest.approx(
                cfrd_lhs(state, stg), abs=1e-10
            )

    def test_vacuum_both_routes_zero(self):
        state = vacuum(FockSpaceConfig(3, 2))
        stg = QuadratureSettings((0.0,) * 3, (1, -1, 1))
        assert cfrd_lhs_hermitian_route(state, stg) == pytest.approx(0.0, abs=1e-15)
        assert cfrd_lhs(state, stg) == pytest.approx(0.0, abs=1e-15)

    def test_mode_cap(self):
        state = vacuum(FockSpaceConfig(13, 2))
        stg = QuadratureSettings((0.0,) * 13, (1,) * 13)
        with pytest.raises(ValueError, match="limited"):
            cfrd_lhs_hermitian_route(state, stg)


class TestLhvRepresentableStates:
    def test_product_states_never_violate(self):
        # unentangled states admit hidden-variable models, so ratio <= 1
        rng = np.random.default_rng(99)
        space = FockSpaceConfig(3, 2)
        worst = 0.0
        for _ in range(10_000):
            state = random_product_state(rng, space)
            report = cfrd_report(state, random_settings(rng, 3))
            worst = max(worst, report.ratio)
            assert report.ratio <= 1 + 1e-12
        # per-mode ratio maxes out at 1/4, so (1/4)**3 is the ceiling here;
        # seeing a decent fraction of it shows the scan explored real states
        assert worst > 0.1 * 0.25**3

"""Quadrature observables and the two sides of the CFRD inequality.

The single-mode quadrature is X(theta) = a e^{-i theta} + adag e^{i theta},
so the per-mode square sum X^2 + Y^2 collapses to 4*n + 2 with no extra
normalization constants.  The left side |<prod Z_k>|^2 is evaluated through
the complex ladder combination Z = X + iY, one factor application per mode;
the 2**n-term Hermitian expansion is retained only as a cross-check oracle,
since it computes the same quantity at exponential cost.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .fock import (
    DensityOperator,
    ProductOperator,
    SparseStateVector,
    destroy_op,
    expect_product,
    expect_product_mixed,
    identity_op,
    number_op,
)

HERMITIAN_ROUTE_MAX_MODES = 12


@dataclass(frozen=True)
class QuadratureSettings:
    """Per-mode measurement choice: phase theta_k and sign s_k in {-1, +1}.

    s_k fixes whether Y_k leads or lags X_k by a quarter period, i.e. whether
    the ladder combination X_k + iY_k is proportional to the lowering or the
    raising operator.
    """

    thetas: tuple[float, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if len(self.thetas) != len(self.signs):
            raise ValueError("thetas and signs must have equal length")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"signs must be -1 or +1, got {self.signs}")

    @property
    def n(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True)
class CfrdReport:
    """Both sides of the inequality; violated means ratio strictly above 1."""

    n: int
    lhs: float
    rhs: float
    ratio: float
    violated: bool

    def to_dict(self) -> dict:
        return asdict(self)


def quadrature_x(theta: float, cutoff: int) -> np.ndarray:
    """Matrix of a e^{-i theta} + adag e^{i theta}; Hermitian by construction."""
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    phase = complex(math.cos(theta), math.sin(theta))
    mat = np.zeros((cutoff, cutoff), dtype=complex)
    for m in range(cutoff - 1):
        root = math.sqrt(m + 1)
        mat[m, m + 1] = phase.conjugate() * root
        mat[m + 1, m] = phase * root
    return mat


def quadrature_y(theta: float, s: int, cutoff: int) -> np.ndarray:
    """The companion quadrature, X rotated by s * pi/2."""
    if s not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    return quadrature_x(theta + s * math.pi / 2.0, cutoff)


def ladder_z(theta: float, s: int, cutoff: int) -> np.ndarray:
    """Z = X + iY; equals 2 a e^{-i theta} (s=+1) or 2 adag e^{i theta} (s=-1)."""
    return quadrature_x(theta, cutoff) + 1j * quadrature_y(theta, s, cutoff)


def quadrature_square_sum(cutoff: int) -> np.ndarray:
    """Per-mode matrix of X^2 + Y^2 = 4*n + 2 (independent of theta and s)."""
    return 4.0 * number_op(cutoff) + 2.0 * identity_op(cutoff)


def _check_settings(n: int, settings: QuadratureSettings) -> None:
    if settings.n != n:
        raise ValueError(f"settings cover {settings.n} modes, state has {n}")


def _z_product(settings: QuadratureSettings, cutoff: int) -> ProductOperator:
    return ProductOperator(
        tuple(
            ladder_z(t, s, cutoff) for t, s in zip(settings.thetas, settings.signs)
        )
    )


def _rhs_product(modes: int, cutoff: int) -> ProductOperator:
    return ProductOperator((quadrature_square_sum(cutoff),) * modes)


def cfrd_lhs(state: SparseStateVector, settings: QuadratureSettings) -> float:
    """|<prod_k Z_k>|^2, insensitive to the phases theta_k."""
    _check_settings(state.space.modes, settings)
    val = expect_product(state, _z_product(settings, state.space.cutoff))
    return abs(val) ** 2


def cfrd_rhs(state: SparseStateVector) -> float:
    """<prod_k (4 n_k + 2)>; needs no settings."""
    val = expect_product(state, _rhs_product(state.space.modes, state.space.cutoff))
    return val.real


def _report(n: int, lhs: float, rhs: float) -> CfrdReport:
    ratio = lhs / rhs if rhs > 0 else 0.0
    return CfrdReport(n=n, lhs=lhs, rhs=rhs, ratio=ratio, violated=ratio > 1.0)


def cfrd_report(state: SparseStateVector, settings: QuadratureSettings) -> CfrdReport:
    return _report(state.space.modes, cfrd_lhs(state, settings), cfrd_rhs(state))


def cfrd_report_mixed(rho: DensityOperator, settings: QuadratureSettings) -> CfrdReport:
    """Same report evaluated on the dense density-operator oracle."""
    n = rho.space.modes
    _check_settings(n, settings)
    lhs = abs(expect_product_mixed(rho, _z_product(settings, rho.space.cutoff))) ** 2
    rhs = expect_product_mixed(rho, _rhs_product(n, rho.space.cutoff)).real
    return _report(n, lhs, rhs)


def cfrd_lhs_hermitian_route(
    state: SparseStateVector, settings: QuadratureSettings
) -> float:
    """Cross-check oracle: expand prod(X_k + iY_k) into 2**n Hermitian terms.

    Each term picks X or Y at every mode; summing the (real) expectations
    with the i**|Y-picks| weights rebuilds <Xtilde> and <Ytilde> separately.
    """
    n = state.space.modes
    _check_settings(n, settings)
    if n > HERMITIAN_ROUTE_MAX_MODES:
        raise ValueError(f"expansion has 2**{n} terms; limited to n <= 12")
    cutoff = state.space.cutoff
    xs = [quadrature_x(t, cutoff) for t in settings.thetas]
    ys = [
        quadrature_y(t, s, cutoff)
        for t, s in zip(settings.thetas, settings.signs)
    ]
    x_part = 0.0
    y_part = 0.0
    for mask in range(1 << n):
        factors = tuple(
            ys[k] if (mask >> k) & 1 else xs[k] for k in range(n)
        )
        val = expect_product(state, ProductOperator(factors)).real
        picks = mask.bit_count()
        if picks % 2 == 0:
            x_part += (-1.0) ** (picks // 2) * val
        else:
            y_part += (-1.0) ** ((picks - 1) // 2) * val
    return x_part**2 + y_part**2

"""Photon-loss and state-fidelity decoherence of the CFRD violation.

Detector inefficiency is a transmission-eta beamsplitter in front of each
mode.  For expectation values the channel is applied in the Heisenberg
picture (each per-mode observable factor is conjugated by the loss Kraus
set), which preserves the product structure and scales to many modes; the
Schroedinger-picture Kraus mixture on dense density matrices is kept as a
small-n oracle.

Preparation error is modelled as rho = eps |Psi><Psi| + (1 - eps) * Imix,
where Imix is the maximally mixed state on the n-mode cutoff-2 space
(trace-normalized).  The epsilon threshold below depends on that
normalization choice; it is pinned here so the numbers are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fock import (
    DensityOperator,
    FockSpaceConfig,
    ProductOperator,
    density_from_pure,
    expect_product,
    expect_product_mixed,
    identity_op,
    maximally_mixed,
)
from .formats import fmt15
from .quadrature import (
    QuadratureSettings,
    ladder_z,
    quadrature_square_sum,
)
from .states import analytic_ratio, balanced_psi_s, canonical_signs

#: large-n limit of the detection-efficiency threshold, (1 + sqrt(5)) / 4
ETA_INF = (1.0 + math.sqrt(5.0)) / 4.0

BISECT_TOL = 1e-9
BISECT_MAX_ITER = 200

MIXED_ORACLE_MAX_MODES = 6
LOSSY_SIM_MAX_MODES = 12


@dataclass(frozen=True)
class LossModel:
    """Intensity transmission eta, identical at every mode."""

    eta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class FidelityModel:
    """Weight eps of the target state in the mixed preparation."""

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")


def loss_kraus(eta: float, cutoff: int) -> list[np.ndarray]:
    """Beamsplitter-loss Kraus set on one mode; K_j removes j photons."""
    LossModel(eta)
    ops = []
    for j in range(cutoff):
        mat = np.zeros((cutoff, cutoff), dtype=complex)
        for m in range(j, cutoff):
            mat[m - j, m] = math.sqrt(
                math.comb(m, j) * eta ** (m - j) * (1.0 - eta) ** j
            )
        ops.append(mat)
    return ops


def loss_adjoint_factor(factor: np.ndarray, eta: float) -> np.ndarray:
    """Heisenberg-picture loss on one observable factor: sum_j Kdag M K.

    Maps the lowering/raising matrices to sqrt(eta) times themselves, the
    number matrix to eta times itself, and identity to identity.
    """
    factor = np.asarray(factor, dtype=complex)
    if factor.ndim != 2 or factor.shape[0] != factor.shape[1]:
        raise ValueError("factor must be a square matrix")
    total = np.zeros_like(factor)
    for k in loss_kraus(eta, factor.shape[0]):
        total += k.conj().T @ factor @ k
    return total


def loss_adjoint_product(op: ProductOperator, eta: float) -> ProductOperator:
    return ProductOperator(tuple(loss_adjoint_factor(f, eta) for f in op.factors))


def apply_loss_channel(rho: DensityOperator, eta: float) -> DensityOperator:
    """Schroedinger-picture Kraus mixture on the dense oracle, mode by mode."""
    space = rho.space
    kraus = loss_kraus(eta, space.cutoff)
    mat = np.array(rho.matrix)
    eye = identity_op(space.cutoff)
    for mode in range(space.modes):
        full = []
        for k in kraus:
            factors = [eye] * space.modes
            factors[mode] = k
            full.append(ProductOperator(tuple(factors)).dense())
        mat = sum(f @ mat @ f.conj().T for f in full)
    return DensityOperator(space, mat)


def _lossy_products(
    n: int, eta: float
) -> tuple[ProductOperator, ProductOperator, QuadratureSettings]:
    settings = canonical_signs(n)
    zs = ProductOperator(
        tuple(
            ladder_z(t, s, 2) for t, s in zip(settings.thetas, settings.signs)
        )
    )
    rhs = ProductOperator((quadrature_square_sum(2),) * n)
    return (
        loss_adjoint_product(zs, eta),
        loss_adjoint_product(rhs, eta),
        settings,
    )


def lossy_cfrd_ratio_simulated(n: int, eta: float) -> float:
    """Violation ratio of the balanced two-branch state behind lossy detectors.

    Full state-vector computation with every observable factor passed through
    the loss adjoint; reproduces (1/4) * (4 eta^2 / (2 eta + 1))**(n/2).
    """
    if n % 2 != 0 or n < 2:
        raise ValueError(f"mode count must be even and >= 2, got {n}")
    if n > LOSSY_SIM_MAX_MODES:
        raise ValueError(f"simulated loss limited to n <= {LOSSY_SIM_MAX_MODES}")
    LossModel(eta)
    state = balanced_psi_s(n)
    z_op, rhs_op, _ = _lossy_products(n, eta)
    lhs = abs(expect_product(state, z_op)) ** 2
    rhs = expect_product(state, rhs_op).real
    return lhs / rhs


def lossy_cfrd_ratio_oracle(n: int, eta: float) -> float:
    """Same ratio via the dense Kraus-mixture density matrix (n <= 6)."""
    if n > MIXED_ORACLE_MAX_MODES:
        raise ValueError(f"dense oracle limited to n <= {MIXED_ORACLE_MAX_MODES}")
    rho = apply_loss_channel(density_from_pure(balanced_psi_s(n)), eta)
    settings = canonical_signs(n)
    zs = ProductOperator(
        tuple(ladder_z(t, s, 2) for t, s in zip(settings.thetas, settings.signs))
    )
    rhs_op = ProductOperator((quadrature_square_sum(2),) * n)
    lhs = abs(expect_product_mixed(rho, zs)) ** 2
    rhs = expect_product_mixed(rho, rhs_op).real
    return lhs / rhs


def _bisect_threshold(
    f: Callable[[float], float], lo: float, hi: float, tol: float = BISECT_TOL
) -> float:
    """Root of f on [lo, hi] with f(lo) < 0 < f(hi), plain bisection."""
    flo, fhi = f(lo), f(hi)
    if flo >= 0 or fhi <= 0:
        raise ValueError("threshold bracket does not straddle the root")
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol:
            return mid
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def eta_min(n: int) -> float:
    """Closed-form detection-efficiency threshold (1 + sqrt(1 + q)) / q.

    q = 4**(1 - 2/n).  Only defined where the lossless ratio exceeds 1,
    i.e. n >= 10; below that no eta <= 1 restores the violation.
    """
    if analytic_ratio(n) <= 1.0:
        raise ValueError(
            f"no efficiency threshold exists at n = {n}: the lossless "
            "inequality is not violated"
        )
    q = 4.0 ** (1.0 - 2.0 / n)
    return (1.0 + math.sqrt(1.0 + q)) / q


def eta_min_simulated(n: int, tol: float = BISECT_TOL) -> float:
    """Threshold found by bisection on the fully simulated lossy ratio."""
    if analytic_ratio(n) <= 1.0:
        raise ValueError(
            f"no efficiency threshold exists at n = {n}: the lossless "
            "inequality is not violated"
        )
    return _bisect_threshold(
        lambda eta: lossy_cfrd_ratio_simulated(n, eta) - 1.0, 0.0, 1.0, tol
    )


def mixed_state(n: int, epsilon: float) -> DensityOperator:
    """eps |Psi><Psi| + (1 - eps) * maximally mixed, on the cutoff-2 space."""
    if n % 2 != 0 or n < 2:
        raise ValueError(f"mode count must be even and >= 2, got {n}")
    if n > MIXED_ORACLE_MAX_MODES:
        raise ValueError(f"dense oracle limited to n <= {MIXED_ORACLE_MAX_MODES}")
    FidelityModel(epsilon)
    space = FockSpaceConfig(modes=n, cutoff=2)
    pure = density_from_pure(balanced_psi_s(n)).matrix
    mixed = maximally_mixed(space).matrix
    return DensityOperator(space, epsilon * pure + (1.0 - epsilon) * mixed)


def mixed_cfrd_ratio(n: int, epsilon: float) -> float:
    """Violation ratio of the eps-mixture, in overflow-safe normalized form.

    Dividing both sides by 4**n: lhs -> eps^2 / 4 (the mixed part carries no
    ladder coherence), rhs -> eps * (3/4)**(n/2) + (1 - eps).
    """
    if n % 2 != 0 or n < 2:
        raise ValueError(f"mode count must be even and >= 2, got {n}")
    FidelityModel(epsilon)
    b = 0.75 ** (n // 2)
    return (epsilon * epsilon / 4.0) / (epsilon * b + (1.0 - epsilon))


def epsilon_min(n: int, tol: float = BISECT_TOL) -> float:
    """Smallest preparation fidelity whose mixture still violates; bisection."""
    if mixed_cfrd_ratio(n, 1.0) <= 1.0:
        raise ValueError(
            f"no fidelity threshold exists at n = {n}: even the pure state "
            "does not violate"
        )
    return _bisect_threshold(
        lambda eps: mixed_cfrd_ratio(n, eps) - 1.0, 0.0, 1.0, tol
    )


def fig1_data(n_min: int, n_max: int) -> list[tuple[int, float, float]]:
    """Rows (n, eta_min, epsilon_min) over even n; defined only from n >= 10."""
    if n_min % 2 != 0 or n_max % 2 != 0:
        raise ValueError("mode counts must be even")
    if n_min < first_threshold_n():
        raise ValueError(
            f"thresholds only exist from n = {first_threshold_n()}, "
            f"got n_min = {n_min}"
        )
    if n_max < n_min:
        raise ValueError("n_max must be >= n_min")
    return [(n, eta_min(n), epsilon_min(n)) for n in range(n_min, n_max + 1, 2)]


def fig1_csv(n_min: int, n_max: int) -> str:
    lines = [f"# eta_inf={ETA_INF:.7f}", "n,eta_min,epsilon_min"]
    lines += [
        f"{n},{fmt15(eta)},{fmt15(eps)}" for n, eta, eps in fig1_data(n_min, n_max)
    ]
    return "\n".join(lines) + "\n"


def first_threshold_n() -> int:
    """Smallest even n where both decoherence thresholds exist."""
    n = 2
    while analytic_ratio(n) <= 1.0:
        n += 2
    return n

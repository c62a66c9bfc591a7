"""The MABK family of Bell operators built by the half-sum recursion.

F_1 = X_1 and F_n = (F_{n-1} + F'_{n-1}) X_n / 2 + (F_{n-1} - F'_{n-1}) Y_n / 2,
with F' the same construction under the exchange X_i <-> Y_i.  For dichotomic
+/-1 observables every deterministic value assignment closes on {-1, +1}, so
the hidden-variable bound is 1; quantum mechanically the square picks up a
commutator term per site and the bound grows to 2**((n-1)/2), attained on
GHZ states.

Observables are restricted to the equatorial family cos(angle) sx +
sin(angle) sy, which contains the GHZ optimum and keeps one angle per
observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

MAX_QUBITS = 10
ENUMERATION_MAX_SITES = 8
IDENTITY_ATOL = 1e-12

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


@dataclass(frozen=True)
class DichotomicSettings:
    """Equatorial measurement angles per site: phis for X, psis for Y."""

    phis: tuple[float, ...]
    psis: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "phis", tuple(float(a) for a in self.phis))
        object.__setattr__(self, "psis", tuple(float(a) for a in self.psis))
        if len(self.phis) != len(self.psis):
            raise ValueError("phis and psis must have equal length")

    @property
    def sites(self) -> int:
        return len(self.phis)

    def swapped(self) -> "DichotomicSettings":
        return DichotomicSettings(phis=self.psis, psis=self.phis)

    @classmethod
    def default(cls, n: int) -> "DichotomicSettings":
        """X = sx, Y = sy at every site."""
        return cls(phis=(0.0,) * n, psis=(math.pi / 2.0,) * n)


@dataclass(frozen=True)
class BellOperator:
    """Dense Hermitian matrix on n qubits."""

    n: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"site count must be in 1..{MAX_QUBITS}, got {self.n}")
        mat = np.array(self.matrix, dtype=complex)
        dim = 2**self.n
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} != ({dim}, {dim})")
        if np.abs(mat - mat.conj().T).max() > IDENTITY_ATOL:
            raise ValueError("Bell operator must be Hermitian within 1e-12")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def equatorial_observable(angle: float) -> np.ndarray:
    """cos(angle) sx + sin(angle) sy; Hermitian with eigenvalues exactly +/-1."""
    return math.cos(angle) * _SX + math.sin(angle) * _SY


def _recursion_matrices(n: int, settings: DichotomicSettings) -> list[tuple[np.ndarray, np.ndarray]]:
    """(F_k, F'_k) matrices for k = 1..n."""
    if n < 1:
        raise ValueError("site count must be >= 1")
    if n > MAX_QUBITS:
        raise ValueError(f"dense representation capped at {MAX_QUBITS} qubits")
    if settings.sites < n:
        raise ValueError(f"settings cover {settings.sites} sites, need {n}")
    f = equatorial_observable(settings.phis[0])
    fp = equatorial_observable(settings.psis[0])
    levels = [(f, fp)]
    for k in range(1, n):
        x = equatorial_observable(settings.phis[k])
        y = equatorial_observable(settings.psis[k])
        f, fp = (
            0.5 * np.kron(f + fp, x) + 0.5 * np.kron(f - fp, y),
            0.5 * np.kron(fp + f, y) + 0.5 * np.kron(fp - f, x),
        )
        levels.append((f, fp))
    return levels


def build_f(n: int, settings: DichotomicSettings) -> tuple[BellOperator, BellOperator]:
    f, fp = _recursion_matrices(n, settings)[-1]
    return BellOperator(n, f), BellOperator(n, fp)


def ghz_state(n: int) -> np.ndarray:
    """(|0...0> + |1...1>) / sqrt(2) as a dense 2**n vector."""
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = vec[-1] = 1.0 / math.sqrt(2.0)
    return vec


def mabk_value(state: Sequence[complex], op: BellOperator) -> float:
    """Real expectation <F> on a qubit state vector."""
    vec = np.asarray(state, dtype=complex)
    if vec.shape != (2**op.n,):
        raise ValueError(f"state dimension {vec.shape} != {2**op.n}")
    val = vec.conj() @ op.matrix @ vec
    return float(val.real)


def quantum_bound(n: int) -> float:
    """2**((n-1)/2), from solving the commutator-norm recursion."""
    if n < 1:
        raise ValueError("site count must be >= 1")
    return 2.0 ** ((n - 1) / 2.0)


def max_eigenvalue(op: BellOperator) -> float:
    return float(np.linalg.eigvalsh(op.matrix).max())


@dataclass(frozen=True)
class CommutatorReport:
    """Max deviations of the two square/commutator recursion identities."""

    n: int
    square_identity_error: float
    commutator_recursion_error: float
    passed: bool


def verify_commutator_recursion(
    n: int, settings: DichotomicSettings, tol: float = 1e-10
) -> CommutatorReport:
    """Check, at every level k >= 2:

        F_k^2       = F_{k-1}^2 (x) I  -  1/4 [F_{k-1}, F'_{k-1}] (x) [X_k, Y_k]
        [F_k, F'_k] = F_{k-1}^2 (x) [X_k, Y_k]  +  [F_{k-1}, F'_{k-1}] (x) I
    """
    if n < 2:
        raise ValueError("identities need at least 2 sites")
    if n > ENUMERATION_MAX_SITES:
        raise ValueError(f"verification capped at {ENUMERATION_MAX_SITES} sites")
    levels = _recursion_matrices(n, settings)
    sq_err = 0.0
    comm_err = 0.0
    eye = np.eye(2, dtype=complex)
    for k in range(1, n):
        f_prev, fp_prev = levels[k - 1]
        f, fp = levels[k]
        x = equatorial_observable(settings.phis[k])
        y = equatorial_observable(settings.psis[k])
        comm_xy = x @ y - y @ x
        comm_prev = f_prev @ fp_prev - fp_prev @ f_prev
        sq = np.kron(f_prev @ f_prev, eye) - 0.25 * np.kron(comm_prev, comm_xy)
        sq_err = max(sq_err, float(np.abs(f @ f - sq).max()))
        comm = np.kron(f_prev @ f_prev, comm_xy) + np.kron(comm_prev, eye)
        comm_err = max(comm_err, float(np.abs(f @ fp - fp @ f - comm).max()))
    return CommutatorReport(
        n=n,
        square_identity_error=sq_err,
        commutator_recursion_error=comm_err,
        passed=sq_err <= tol and comm_err <= tol,
    )


def lhv_strategy_values(n: int) -> np.ndarray:
    """F_n over every deterministic +/-1 assignment to the 2n observables.

    Pure integer arithmetic, so closure on {-1, +1} is exact.  Strategy index
    bits are (x_1, y_1, x_2, y_2, ...), bit value 1 meaning +1.
    """
    if not 1 <= n <= ENUMERATION_MAX_SITES:
        raise ValueError(f"site count must be in 1..{ENUMERATION_MAX_SITES}")
    idx = np.arange(1 << (2 * n), dtype=np.int64)
    f = 2 * ((idx >> 0) & 1) - 1
    fp = 2 * ((idx >> 1) & 1) - 1
    for k in range(1, n):
        x = 2 * ((idx >> (2 * k)) & 1) - 1
        y = 2 * ((idx >> (2 * k + 1)) & 1) - 1
        f, fp = (
            ((f + fp) // 2) * x + ((f - fp) // 2) * y,
            ((fp + f) // 2) * y + ((fp - f) // 2) * x,
        )
    return f


def lhv_exhaustive_max(n: int) -> float:
    """max |F_n| over all 2**(2n) strategies; verifies F_n in {-1, +1} exactly."""
    values = lhv_strategy_values(n)
    if not np.all(np.abs(values) == 1):
        raise RuntimeError("deterministic strategy escaped {-1, +1}")
    return float(np.abs(values).max())


def ghz_expectation(n: int, settings: DichotomicSettings) -> float:
    return mabk_value(ghz_state(n), build_f(n, settings)[0])


def _angles_to_settings(angles: np.ndarray, n: int) -> DichotomicSettings:
    return DichotomicSettings(phis=tuple(angles[:n]), psis=tuple(angles[n:]))


def optimize_settings(
    n: int,
    seed: int = 0,
    coarse_points: int = 32,
    restarts: int = 4,
) -> tuple[DichotomicSettings, float]:
    """Angles maximizing <F_n> on the GHZ state.

    Per-angle coarse sweeps (coordinate ascent on a coarse_points grid)
    followed by a local simplex refinement, repeated from seeded random
    starts; returns the best settings and the attained expectation.
    """
    if not 2 <= n <= 6:
        raise ValueError("optimization supported for 2..6 sites")
    rng = np.random.default_rng(seed)

    def value(angles: np.ndarray) -> float:
        return ghz_expectation(n, _angles_to_settings(angles, n))

    grid = np.linspace(0.0, 2.0 * math.pi, coarse_points, endpoint=False)
    starts = [np.zeros(2 * n)]
    starts += [rng.uniform(0.0, 2.0 * math.pi, 2 * n) for _ in range(restarts)]
    best_angles, best_val = None, -math.inf
    for angles in starts:
        angles = np.array(angles)
        for _ in range(4):  # coordinate-ascent passes
            improved = False
            for i in range(2 * n):
                trial = np.repeat(angles[None, :], coarse_points, axis=0)
                trial[:, i] = grid
                vals = [value(t) for t in trial]
                j = int(np.argmax(vals))
                if vals[j] > value(angles) + 1e-12:
                    angles[i] = grid[j]
                    improved = True
            if not improved:
                break
        res = minimize(
            lambda a: -value(a),
            angles,
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 20000},
        )
        if -res.fun > best_val:
            best_val, best_angles = -res.fun, res.x
    return _angles_to_settings(best_angles, n), best_val


def mabk_report(n: int, optimize: bool = False, seed: int = 0) -> dict:
    """Summary used by the command line: hidden-variable max, quantum max, bound."""
    if optimize:
        settings, _ = optimize_settings(n, seed=seed)
    else:
        settings = DichotomicSettings.default(n)
    f_op, _ = build_f(n, settings)
    return {
        "n": n,
        "lhv_max": lhv_exhaustive_max(n),
        "quantum_max": max_eigenvalue(f_op),
        "bound": quantum_bound(n),
        "angles": [[phi, psi] for phi, psi in zip(settings.phis, settings.psis)],
    }

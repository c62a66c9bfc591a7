"""Two-branch superposition states that violate the CFRD inequality.

The construction needs an even number of modes: one branch leaves the first
n/2 modes empty and fills the rest with single photons, the other branch is
the mirror image.  With the canonical sign pattern (+1 on the first half,
-1 on the second) the ladder product maps one branch onto the other and the
violation ratio has the closed form |c0 c1|^2 * (4/3)**(n/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fock import FockSpaceConfig, SparseStateVector
from .formats import fmt15
from .quadrature import QuadratureSettings, cfrd_report

SCAN_POINTS_DEFAULT = 101


@dataclass(frozen=True)
class PsiSParams:
    """Even mode count n and the two branch amplitudes (norm must be 1)."""

    n: int
    c0: complex
    c1: complex

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError(f"mode count must be even and >= 2, got {self.n}")
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "c1", complex(self.c1))
        total = abs(self.c0) ** 2 + abs(self.c1) ** 2
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"|c0|^2 + |c1|^2 = {total!r}, must be 1 within 1e-12")


def build_psi_s(params: PsiSParams) -> SparseStateVector:
    """c0 |0..0,1..1> + c1 |1..1,0..0> on the cutoff-2 space."""
    half = params.n // 2
    space = FockSpaceConfig(modes=params.n, cutoff=2)
    branch0 = (0,) * half + (1,) * half
    branch1 = (1,) * half + (0,) * half
    return SparseStateVector(space, {branch0: params.c0, branch1: params.c1})


def balanced_psi_s(n: int) -> SparseStateVector:
    amp = 1.0 / math.sqrt(2.0)
    return build_psi_s(PsiSParams(n=n, c0=amp, c1=amp))


def canonical_signs(n: int) -> QuadratureSettings:
    """s = +1 on the first half, -1 on the second; all phases zero."""
    if n < 2 or n % 2 != 0:
        raise ValueError(f"mode count must be even and >= 2, got {n}")
    half = n // 2
    return QuadratureSettings(thetas=(0.0,) * n, signs=(1,) * half + (-1,) * half)


def analytic_ratio(n: int) -> float:
    """Closed-form violation ratio (1/4) * (4/3)**(n/2) at balanced amplitudes."""
    if n < 2 or n % 2 != 0:
        raise ValueError(f"mode count must be even and >= 2, got {n}")
    return 0.25 * (4.0 / 3.0) ** (n // 2)


def first_violating_n() -> int:
    """Smallest even mode count whose closed-form ratio exceeds 1."""
    n = 2
    while analytic_ratio(n) <= 1.0:
        n += 2
    return n


def amplitude_scan(n: int, points: int = SCAN_POINTS_DEFAULT) -> list[tuple[float, float]]:
    """Simulated ratio over a uniform grid of |c0|^2 in [0, 1].

    The maximum sits at |c0|^2 = 1/2; the left side scales as |c0 c1|^2 while
    the right side ignores the amplitudes entirely.
    """
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    settings = canonical_signs(n)
    rows = []
    for i in range(points):
        c0sq = i / (points - 1)
        state = build_psi_s(
            PsiSParams(n=n, c0=math.sqrt(c0sq), c1=math.sqrt(1.0 - c0sq))
        )
        rows.append((c0sq, cfrd_report(state, settings).ratio))
    return rows


def amplitude_scan_csv(n: int, points: int = SCAN_POINTS_DEFAULT) -> str:
    lines = ["c0sq,ratio"]
    lines += [f"{fmt15(x)},{fmt15(r)}" for x, r in amplitude_scan(n, points)]
    return "\n".join(lines) + "\n"

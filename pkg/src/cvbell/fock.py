"""Exact linear algebra on an n-mode bosonic Fock space with per-mode cutoff.

States are sparse maps from occupation tuples to complex amplitudes, so every
operation scales with the number of nonzero amplitudes instead of the full
cutoff**modes basis dimension.  A dense density-operator representation is
kept as a small-n oracle for cross-checking expectation values and channels.

Conventions:
    - basis order is lexicographic on occupation tuples, mode 0 most
      significant, so serialized states are reproducible byte for byte
    - the ``create`` state operation raises on cutoff overflow; it never
      truncates silently.  Operator matrices, by contrast, are compressions
      to the truncated basis (the usual matrix representation).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from itertools import product as _cartesian
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

Occupation = tuple[int, ...]

DEFAULT_DIMENSION_LIMIT = 2**24
DENSE_DIMENSION_LIMIT = 1024

#: absolute tolerance for amplitude/normalization comparisons
ATOL = 1e-12
#: density operators may have eigenvalues this far below zero (roundoff)
PSD_ATOL = 1e-10


@dataclass(frozen=True)
class FockSpaceConfig:
    """Shape of the truncated space: per-mode occupations run over 0..cutoff-1."""

    modes: int
    cutoff: int = 2
    dimension_limit: int = DEFAULT_DIMENSION_LIMIT

    def __post_init__(self) -> None:
        if self.modes < 1:
            raise ValueError(f"modes must be >= 1, got {self.modes}")
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")
        if self.cutoff**self.modes > self.dimension_limit:
            raise ValueError(
                f"basis dimension {self.cutoff}**{self.modes} exceeds "
                f"limit {self.dimension_limit}"
            )

    @property
    def dimension(self) -> int:
        return self.cutoff**self.modes

    def compatible(self, other: "FockSpaceConfig") -> bool:
        return self.modes == other.modes and self.cutoff == other.cutoff

    def validate_occupation(self, occ: Sequence[int]) -> Occupation:
        occ = tuple(int(m) for m in occ)
        if len(occ) != self.modes:
            raise ValueError(f"occupation length {len(occ)} != modes {self.modes}")
        for m in occ:
            if not 0 <= m < self.cutoff:
                raise ValueError(f"occupation {occ} outside cutoff {self.cutoff}")
        return occ

    def index_of(self, occ: Sequence[int]) -> int:
        """Basis index of an occupation tuple (lexicographic, mode 0 leading)."""
        idx = 0
        for m in self.validate_occupation(occ):
            idx = idx * self.cutoff + m
        return idx

    def occupations(self) -> Iterator[Occupation]:
        """All occupation tuples in basis-index order."""
        return _cartesian(range(self.cutoff), repeat=self.modes)


@dataclass(frozen=True)
class SparseStateVector:
    """Sparse pure state: occupation tuple -> complex amplitude.

    Exact-zero amplitudes are dropped at construction; the mapping is frozen.
    Normalization is not enforced here (operator applications legitimately
    return unnormalized states); builders validate it separately.
    """

    space: FockSpaceConfig
    amplitudes: Mapping[Occupation, complex]

    def __post_init__(self) -> None:
        cleaned: dict[Occupation, complex] = {}
        total = 0.0
        for occ, amp in self.amplitudes.items():
            amp = complex(amp)
            if amp == 0:
                continue
            cleaned[self.space.validate_occupation(occ)] = amp
            total += abs(amp) ** 2
        if not math.isfinite(total):
            raise ValueError("state norm is not finite")
        object.__setattr__(self, "amplitudes", MappingProxyType(cleaned))

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes.values())


def basis_state(space: FockSpaceConfig, occ: Sequence[int]) -> SparseStateVector:
    return SparseStateVector(space, {tuple(occ): 1.0 + 0.0j})


def vacuum(space: FockSpaceConfig) -> SparseStateVector:
    return basis_state(space, (0,) * space.modes)


def normalized_state(
    space: FockSpaceConfig, amplitudes: Mapping[Sequence[int], complex]
) -> SparseStateVector:
    """Builder that enforces |norm^2 - 1| <= ATOL."""
    state = SparseStateVector(space, {tuple(o): a for o, a in amplitudes.items()})
    if abs(state.norm_sq() - 1.0) > ATOL:
        raise ValueError(f"state not normalized: norm^2 = {state.norm_sq()!r}")
    return state


def product_state(
    space: FockSpaceConfig, mode_vectors: Sequence[Sequence[complex]]
) -> SparseStateVector:
    """Tensor product of single-mode amplitude vectors (length = cutoff each)."""
    if len(mode_vectors) != space.modes:
        raise ValueError("need one amplitude vector per mode")
    per_mode = []
    for vec in mode_vectors:
        vec = [complex(v) for v in vec]
        if len(vec) != space.cutoff:
            raise ValueError("mode vector length must equal cutoff")
        per_mode.append([(m, v) for m, v in enumerate(vec) if v != 0])
    amps: dict[Occupation, complex] = {}
    for combo in _cartesian(*per_mode):
        occ = tuple(m for m, _ in combo)
        amp = 1.0 + 0.0j
        for _, v in combo:
            amp *= v
        amps[occ] = amp
    return SparseStateVector(space, amps)


def _check_mode(space: FockSpaceConfig, mode: int) -> None:
    if not 0 <= mode < space.modes:
        raise ValueError(f"mode {mode} out of range for {space.modes} modes")


def annihilate(state: SparseStateVector, mode: int) -> SparseStateVector:
    """Apply a_mode; amplitudes pick up sqrt(m), occupation-0 components vanish."""
    _check_mode(state.space, mode)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        m = occ[mode]
        if m == 0:
            continue
        new = occ[:mode] + (m - 1,) + occ[mode + 1 :]
        out[new] = out.get(new, 0j) + math.sqrt(m) * amp
    return SparseStateVector(state.space, out)


def create(state: SparseStateVector, mode: int) -> SparseStateVector:
    """Apply the raising operator on one mode; amplitudes pick up sqrt(m+1).

    Raises (never truncates) if any component would step past the cutoff.
    """
    _check_mode(state.space, mode)
    cutoff = state.space.cutoff
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        m = occ[mode]
        if m + 1 >= cutoff:
            raise ValueError(
                f"creation on mode {mode} overflows cutoff {cutoff} "
                f"(component {occ})"
            )
        new = occ[:mode] + (m + 1,) + occ[mode + 1 :]
        out[new] = out.get(new, 0j) + math.sqrt(m + 1) * amp
    return SparseStateVector(state.space, out)


def inner_product(a: SparseStateVector, b: SparseStateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if not a.space.compatible(b.space):
        raise ValueError("states live in incompatible spaces")
    bb = b.amplitudes
    return sum(
        (amp.conjugate() * bb[occ] for occ, amp in a.amplitudes.items() if occ in bb),
        start=0j,
    )


def apply_one_mode(
    state: SparseStateVector, mode: int, matrix: np.ndarray
) -> SparseStateVector:
    """Apply a cutoff x cutoff matrix to a single mode."""
    space = state.space
    _check_mode(space, mode)
    matrix = np.asarray(matrix)
    if matrix.shape != (space.cutoff, space.cutoff):
        raise ValueError(
            f"factor shape {matrix.shape} does not match cutoff {space.cutoff}"
        )
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        col = matrix[:, occ[mode]]
        for row in np.flatnonzero(col):
            new = occ[:mode] + (int(row),) + occ[mode + 1 :]
            out[new] = out.get(new, 0j) + complex(col[row]) * amp
    return SparseStateVector(space, out)


def permute_modes(state: SparseStateVector, perm: Sequence[int]) -> SparseStateVector:
    """Relabel modes: new occupation i is the old occupation perm[i]."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(state.space.modes)):
        raise ValueError(f"{perm} is not a permutation of the modes")
    out = {
        tuple(occ[p] for p in perm): amp for occ, amp in state.amplitudes.items()
    }
    return SparseStateVector(state.space, out)


# ---------------------------------------------------------------------------
# single-mode operator factors and mode-by-mode product operators
# ---------------------------------------------------------------------------


def destroy_op(cutoff: int) -> np.ndarray:
    a = np.zeros((cutoff, cutoff), dtype=complex)
    for m in range(cutoff - 1):
        a[m, m + 1] = math.sqrt(m + 1)
    return a


def create_op(cutoff: int) -> np.ndarray:
    """Truncated-basis compression of the raising operator (top rung cut)."""
    return destroy_op(cutoff).conj().T


def number_op(cutoff: int) -> np.ndarray:
    return np.diag(np.arange(cutoff)).astype(complex)


def identity_op(cutoff: int) -> np.ndarray:
    return np.eye(cutoff, dtype=complex)


@dataclass(frozen=True)
class ProductOperator:
    """Tensor product of per-mode factors, one cutoff x cutoff matrix per mode."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        mats = []
        for f in self.factors:
            f = np.array(f, dtype=complex)
            if f.ndim != 2 or f.shape[0] != f.shape[1]:
                raise ValueError("factors must be square matrices")
            f.setflags(write=False)
            mats.append(f)
        if not mats:
            raise ValueError("at least one factor required")
        if len({m.shape for m in mats}) != 1:
            raise ValueError("all factors must share one cutoff")
        object.__setattr__(self, "factors", tuple(mats))

    @property
    def modes(self) -> int:
        return len(self.factors)

    @property
    def cutoff(self) -> int:
        return self.factors[0].shape[0]

    def dense(self) -> np.ndarray:
        """Full kron matrix, mode 0 most significant (matches index_of)."""
        return reduce(np.kron, self.factors)


def _check_op(space: FockSpaceConfig, op: ProductOperator) -> None:
    if op.modes != space.modes or op.cutoff != space.cutoff:
        raise ValueError(
            f"operator ({op.modes} modes, cutoff {op.cutoff}) does not match "
            f"space ({space.modes} modes, cutoff {space.cutoff})"
        )


def apply_product(state: SparseStateVector, op: ProductOperator) -> SparseStateVector:
    _check_op(state.space, op)
    for mode, factor in enumerate(op.factors):
        state = apply_one_mode(state, mode, factor)
    return state


def expect_product(state: SparseStateVector, op: ProductOperator) -> complex:
    """<state| prod_k O_k |state> via per-mode factor application."""
    return inner_product(state, apply_product(state, op))


# ---------------------------------------------------------------------------
# dense density-operator oracle (small n only)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityOperator:
    """Dense density matrix over the full truncated basis; validated at build."""

    space: FockSpaceConfig
    matrix: np.ndarray

    def __post_init__(self) -> None:
        dim = self.space.dimension
        if dim > DENSE_DIMENSION_LIMIT:
            raise ValueError(
                f"dense oracle limited to dimension {DENSE_DIMENSION_LIMIT}, "
                f"got {dim}"
            )
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} != ({dim}, {dim})")
        if np.abs(mat - mat.conj().T).max() > ATOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(mat) - 1.0) > ATOL:
            raise ValueError("density matrix trace differs from 1 beyond 1e-12")
        if np.linalg.eigvalsh(mat).min() < -PSD_ATOL:
            raise ValueError("density matrix has a negative eigenvalue")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def dense_vector(state: SparseStateVector) -> np.ndarray:
    vec = np.zeros(state.space.dimension, dtype=complex)
    for occ, amp in state.amplitudes.items():
        vec[state.space.index_of(occ)] = amp
    return vec


def density_from_pure(state: SparseStateVector) -> DensityOperator:
    vec = dense_vector(state)
    nrm = np.linalg.norm(vec)
    if nrm == 0:
        raise ValueError("cannot form a density matrix from the zero vector")
    vec = vec / nrm
    return DensityOperator(state.space, np.outer(vec, vec.conj()))


def maximally_mixed(space: FockSpaceConfig) -> DensityOperator:
    dim = space.dimension
    return DensityOperator(space, np.eye(dim, dtype=complex) / dim)


def expect_product_mixed(rho: DensityOperator, op: ProductOperator) -> complex:
    """trace(rho . prod_k O_k) on the dense oracle representation."""
    _check_op(rho.space, op)
    return complex(np.trace(rho.matrix @ op.dense()))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def state_to_json(state: SparseStateVector) -> str:
    """JSON form with amplitudes sorted by occupation for stable bytes."""
    entries = [
        {"occ": list(occ), "re": amp.real, "im": amp.imag}
        for occ, amp in sorted(state.amplitudes.items())
    ]
    return json.dumps(
        {"modes": state.space.modes, "cutoff": state.space.cutoff, "amplitudes": entries}
    )


def state_from_json(text: str) -> SparseStateVector:
    data = json.loads(text)
    space = FockSpaceConfig(modes=int(data["modes"]), cutoff=int(data["cutoff"]))
    amps = {
        tuple(entry["occ"]): complex(entry["re"], entry["im"])
        for entry in data["amplitudes"]
    }
    return SparseStateVector(space, amps)

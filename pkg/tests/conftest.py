"""Shared helpers: seeded random states over small truncated spaces."""

import math

import numpy as np

from cvbell.fock import FockSpaceConfig, SparseStateVector, product_state


def random_sparse_state(rng, space, terms=3):
    """Normalized state with `terms` random basis components."""
    terms = min(terms, space.dimension)
    occs = set()
    while len(occs) < terms:
        occs.add(tuple(int(rng.integers(space.cutoff)) for _ in range(space.modes)))
    amps = {
        occ: complex(rng.standard_normal(), rng.standard_normal()) for occ in occs
    }
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    return SparseStateVector(space, {o: a / norm for o, a in amps.items()})


def random_product_state(rng, space):
    """Tensor product of random normalized single-mode kets."""
    vectors = []
    for _ in range(space.modes):
        v = rng.standard_normal(space.cutoff) + 1j * rng.standard_normal(space.cutoff)
        vectors.append(v / np.linalg.norm(v))
    return product_state(space, vectors)


def random_factor(rng, cutoff):
    """Random complex matrix factor (not necessarily Hermitian)."""
    return rng.standard_normal((cutoff, cutoff)) + 1j * rng.standard_normal(
        (cutoff, cutoff)
    )


def random_hermitian_factor(rng, cutoff):
    m = random_factor(rng, cutoff)
    return m + m.conj().T

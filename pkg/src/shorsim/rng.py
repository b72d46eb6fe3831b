"""Seeded randomness.

Every draw gets its own generator, built from ``SeedSequence([seed, offset])``
and fed to numpy's PCG64. Logging ``(seed, offset)`` is therefore enough to
replay any single draw bit for bit on any platform.
"""

from __future__ import annotations

import numpy as np

GENERATOR_ID = "numpy-PCG64/SeedSequence([seed,offset])"


def generator_for(seed: int, offset: int = 0) -> np.random.Generator:
    if seed < 0 or offset < 0:
        raise ValueError("seed and offset must be nonnegative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, offset])))


class SeedStream:
    """Hands out independent generators ``(offset, Generator)`` for one root seed."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.offset = 0

    def next(self) -> tuple[int, np.random.Generator]:
        offset = self.offset
        self.offset += 1
        return offset, generator_for(self.seed, offset)


def as_generator(seed) -> np.random.Generator:
    """Accept an int seed or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return generator_for(int(seed))


def sample_index(probabilities: np.ndarray, rng: np.random.Generator, size=None):
    """Inverse-CDF sampling over a flat probability vector.

    Uses one ``rng.random()`` per draw and a cumulative sum, so results do not
    depend on the internals of ``Generator.choice``.
    """
    cdf = np.cumsum(probabilities, dtype=np.float64)
    u = rng.random(size) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, len(cdf) - 1)
    if size is None:
        return int(idx)
    return idx

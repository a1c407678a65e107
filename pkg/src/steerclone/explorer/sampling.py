"""Seeded Dirichlet sampling of lambda tables.

Random source contract: every draw uses numpy's PCG64 bit generator seeded
with ``SeedSequence(seed, spawn_key=(stream, index))``.  A sample therefore
depends only on (seed, index) and never on evaluation order or worker count.
"""

import numpy as np

from ..cloning import LambdaTable
from ..qudit import check_dimension

# spawn_key prefixes keep the sampling and optimizer streams disjoint
SAMPLE_STREAM = 0
RESTART_STREAM = 1


def substream(seed, index, stream=SAMPLE_STREAM):
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(int(seed), spawn_key=(stream, int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def sample_lambda(d, seed, index, concentration=1.0):
    """Dirichlet(concentration) table on the d^2-simplex from normalized Gamma draws."""
    d = check_dimension(d)
    if not concentration > 0:
        raise ValueError(f"concentration must be positive, got {concentration}")
    rng = substream(seed, index)
    g = rng.standard_gamma(concentration, size=d * d)
    total = g.sum()
    if total == 0:
        # every draw underflowed (tiny concentration): fall back to a random vertex
        g[rng.integers(d * d)] = 1.0
        total = 1.0
    return LambdaTable((g / total).reshape(d, d))

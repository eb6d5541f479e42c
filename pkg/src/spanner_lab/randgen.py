"""Seeded point-set generation with a portable, fully specified PRNG.

The generator is xorshift64* (Marsaglia xorshift with Vigna's multiplier):

    state ^= state >> 12
    state ^= (state << 25) mod 2^64
    state ^= state >> 27
    output = (state * 0x2545F4914F6CDD1D) mod 2^64

Seeds are taken mod 2^64; seed 0 (whose xorshift orbit is degenerate) is
replaced by the constant 0x9E3779B97F4A7C15.  Uniform doubles in [0, 1) are
the top 53 output bits scaled by 2^-53.  Any implementation following this
recipe reproduces identical point sets from the same seed.
"""

from __future__ import annotations

from .metric_core import PointSet2D

MASK64 = (1 << 64) - 1
MULTIPLIER = 0x2545F4914F6CDD1D
ZERO_SEED_SUBSTITUTE = 0x9E3779B97F4A7C15


class XorShift64Star:
    """Deterministic 64-bit PRNG; the full recurrence is in the module
    docstring."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64
        if self.state == 0:
            self.state = ZERO_SEED_SUBSTITUTE

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s = (s ^ (s << 25)) & MASK64
        s ^= s >> 27
        self.state = s
        return (s * MULTIPLIER) & MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0 ** -53


def random_points2d(n: int, seed: int) -> PointSet2D:
    """n points in the unit square; per point, x is drawn before y.

    The same seed with a larger n extends the smaller set: point i depends
    only on the seed and i.
    """
    if n < 1:
        raise ValueError("need at least one point")
    rng = XorShift64Star(seed)
    pts = [(rng.uniform(), rng.uniform()) for _ in range(n)]
    return PointSet2D(pts)

"""Deterministic 64-bit generator used for all randomness in the package.

The generator is SplitMix64 (Steele, Lea, Flood's mixing recurrence): state
advances by the golden-ratio increment 0x9E3779B97F4A7C15 and each output is
the finalizer

    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

with all arithmetic mod 2^64.  This algorithm is part of the external
contract: simulation reports are reproducible bit-for-bit from the seed on
any platform, and a reimplementation in another language must match.

Sub-task streams (per trial, per point) are seeded with
``mix64((seed + (index + 1) * GAMMA) mod 2^64)`` -- the finalizer applied to
the offset seed.  Seeding streams at raw multiples of GAMMA would make them
shifted copies of one master sequence, since the state itself advances by
GAMMA; the extra mix makes stream starting states unrelated.
"""

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 output finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream starting from an explicit 64-bit seed."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GAMMA) & MASK64
        return mix64(self._state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) without modulo bias (rejection)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = MASK64 - (MASK64 + 1) % bound
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % bound

    def sample_distinct(self, count: int, bound: int) -> list[int]:
        """``count`` distinct integers from [0, bound), in draw order."""
        if count > bound:
            raise ValueError("cannot draw more distinct values than the range holds")
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < count:
            v = self.below(bound)
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out


def derive_stream(seed: int, index: int) -> SplitMix64:
    """Independent stream for sub-task ``index`` (trials, per-point flags)."""
    return SplitMix64(mix64((seed + (index + 1) * GAMMA) & MASK64))

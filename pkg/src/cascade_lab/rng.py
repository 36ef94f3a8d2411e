"""Counter-based random stream built on the splitmix64 finalizer.

Every draw is a pure function of (seed, counter), so runs and rounds can be
evaluated in any order, on any thread, in any language, with bit-identical
results.  A 64-bit word maps to a double in [0, 1) through its top 53 bits.

Constants are the standard splitmix64 ones:
    increment 0x9E3779B97F4A7C15 (golden-ratio Weyl step),
    multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(seed: int, counter: int) -> int:
    """splitmix64 output word for stream `seed` at position `counter`."""
    z = (seed + counter * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def unit_from_word(word: int) -> float:
    """Map a 64-bit word to [0, 1) with 53-bit resolution."""
    return (word >> 11) * 2.0**-53


class CounterRng:
    """Stateful view over mix64(seed, 1), mix64(seed, 2), ...

    The counter starts at 0, so the first draw is mix64(seed, 1).  State is
    just the counter; two instances with the same seed replay identically.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int, counter: int = 0):
        self.seed = seed & _MASK64
        self.counter = counter

    def next_word(self) -> int:
        self.counter += 1
        return mix64(self.seed, self.counter)

    def next_unit(self) -> float:
        self.counter += 1
        return (mix64(self.seed, self.counter) >> 11) * 2.0**-53

"""
SplitMix64 pseudo-random generator.

Chosen over numpy's generators because its output is specified bit for bit
in a few lines, so random starts can be reproduced in any language:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

all arithmetic modulo 2^64. Doubles in [0, 1) are (z >> 11) * 2^-53.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_uint64() >> 11) * (1.0 / (1 << 53))


def start_seed(seed: int, start_index: int) -> int:
    """Seed of the start with the given index in a multistart sweep."""
    return (int(seed) + int(start_index)) & MASK64

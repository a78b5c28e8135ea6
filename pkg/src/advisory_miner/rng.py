"""Portable seeded random source.

The generator is a 64-bit linear congruential generator with Knuth's MMIX
constants::

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64

Uniform doubles take the top 53 bits of the new state. Normals use the
Box-Muller transform without caching the second variate. The seed is mixed
once with the increment so that seed 0 is usable. Every stochastic step of
the package (fold assignment, cohort generation) draws from this class, so
results are identical across platforms and implementations that follow the
same recipe.
"""

import math

_MULT = 6364136223846793005
_INC = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed: int):
        self.state = (int(seed) ^ _INC) & _MASK

    def next_u64(self) -> int:
        self.state = (_MULT * self.state + _INC) & _MASK
        return self.state

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Integer in [0, n), via floor(random() * n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return min(int(self.random() * n), n - 1)

    def normal(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        u1 = self.random()
        u2 = self.random()
        # 1 - u1 is in (0, 1], so the log is finite
        z = math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)
        return mu + sigma * z

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, walking from the end."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice_weighted(self, weights) -> int:
        """Index drawn with probability proportional to ``weights``."""
        total = float(sum(weights))
        u = self.random() * total
        acc = 0.0
        for i, w in enumerate(weights):
            acc += w
            if u < acc:
                return i
        return len(weights) - 1

"""SplitMix64 pseudo-random stream.

A fixed, documented algorithm so that problem instances can be rebuilt
bit-for-bit from a seed by any implementation:

* state update ``s += 0x9E3779B97F4A7C15 (mod 2**64)``, then the standard
  SplitMix64 output mix;
* ``uniform()`` is ``(next() >> 11) * 2**-53`` in ``[0, 1)``;
* ``normal()`` is Box-Muller, ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``, one
  normal per two uniforms;
* ``complex_normal()`` is ``(normal() + 1j * normal()) / sqrt(2)``.
"""

import math

ALGORITHM = "splitmix64"
_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo=0.0, hi=1.0):
        u = (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)
        return lo + (hi - lo) * u

    def normal(self):
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def complex_normal(self):
        re = self.normal()
        im = self.normal()
        return complex(re, im) / math.sqrt(2.0)

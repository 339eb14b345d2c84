"""Counter-based splittable random number generator.

The generator is SplitMix64: the k-th raw word of a stream is
``mix64(origin + k * GAMMA)`` where ``mix64`` is the standard
xor-shift-multiply finalizer and GAMMA is the 64-bit golden ratio.
Because the state is a pure function of the counter, any block of the
sequence can be produced by vectorized uint64 arithmetic, bit-identical
to a scalar loop and to any other implementation of the same recurrence.

Streams are keyed by ``(master_seed, stream_index)``; the origin of a
stream is derived by finalizer-mixing the pair, so distinct indices give
statistically independent sequences while identical pairs reproduce the
identical sequence on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

GAMMA = 0x9E3779B97F4A7C15
_STREAM_SALT = 0xD1B54A32D192ED03
_MASK64 = 0xFFFFFFFFFFFFFFFF


def mix64(words):
    """SplitMix64 finalizer applied elementwise to an array of uint64."""
    z = np.asarray(words, dtype=np.uint64).copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def mix64_int(value):
    """Scalar SplitMix64 finalizer on Python ints (reference path)."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_origin(master_seed, stream_index):
    """Mix (master_seed, stream_index) into the stream's counter origin."""
    a = mix64_int((master_seed + GAMMA) & _MASK64)
    b = mix64_int((stream_index ^ _STREAM_SALT) & _MASK64)
    return mix64_int(a ^ b)


@dataclass
class RngStream:
    """One reproducible stream of the splittable generator.

    The stream holds only its key and the number of words consumed so
    far; drawing ``count`` words never allocates state proportional to
    the history.  Every draw sequence is a pure function of
    ``(master_seed, stream_index)`` and the draw order.
    """

    master_seed: int
    stream_index: int
    _pos: int = field(default=0, repr=False)

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) < 2**64:
                raise ConfigurationError(f"{name} must be a 64-bit unsigned integer, got {v!r}")
        self.master_seed = int(self.master_seed)
        self.stream_index = int(self.stream_index)
        self._origin = stream_origin(self.master_seed, self.stream_index)

    @property
    def position(self):
        return self._pos

    def raw(self, count):
        """Next ``count`` raw uint64 words, advancing the counter."""
        if count < 0:
            raise ConfigurationError("count must be nonnegative")
        ks = np.arange(self._pos + 1, self._pos + count + 1, dtype=np.uint64)
        words = mix64(np.uint64(self._origin) + ks * np.uint64(GAMMA))
        self._pos += count
        return words

    def rewind(self, count):
        """Give back the last ``count`` unconsumed words (rejection sampling)."""
        if count < 0 or count > self._pos:
            raise ConfigurationError("cannot rewind past the stream origin")
        self._pos -= count

    def uniforms(self, count):
        """Uniform doubles on the open interval (0, 1), one word each."""
        words = self.raw(count)
        return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53

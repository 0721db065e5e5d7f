"""Seeded random bit stream with exact accounting of consumed bits.

The stream is the concatenation of the 64-bit outputs of numpy's ``PCG64``
generator (seeded through ``SeedSequence``), each word read from its least
significant bit upwards.  Every random decision made by the samplers goes
through a :class:`RandomSource`, so ``bits_consumed`` is the exact entropy
cost of a run.  The seed -> stream mapping is stable for a given major
version of this package.
"""

from __future__ import annotations

import numpy as np

_WORD = 64
_BUFFER_WORDS = 512


class RandomSource:
    """A deterministic bit stream that counts every bit it hands out.

    Parameters
    ----------
    seed : int
        Non-negative seed, at most 64 bits.
    """

    __slots__ = ("seed", "bits_consumed", "_gen", "_buf", "_pos", "_cur", "_avail")

    def __init__(self, seed: int = 0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be a 64-bit non-negative integer, got {seed}")
        self.seed = seed
        self.bits_consumed = 0
        self._gen = np.random.PCG64(seed)
        self._buf: list[int] = []
        self._pos = 0
        self._cur = 0
        self._avail = 0

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, bits_consumed={self.bits_consumed})"

    def _next_word(self) -> int:
        if self._pos == len(self._buf):
            self._buf = self._gen.random_raw(_BUFFER_WORDS).tolist()
            self._pos = 0
        word = self._buf[self._pos]
        self._pos += 1
        return word

    def _next_words(self, count: int) -> np.ndarray:
        """The next ``count`` stream words as a uint64 array."""
        take = min(count, len(self._buf) - self._pos)
        head = np.array(self._buf[self._pos:self._pos + take], dtype=np.uint64)
        self._pos += take
        if take == count:
            return head
        tail = self._gen.random_raw(count - take)
        return np.concatenate([head, tail])

    def next_bit(self) -> int:
        """One uniform bit."""
        self.bits_consumed += 1
        if self._avail == 0:
            self._cur = self._next_word()
            self._avail = _WORD
        bit = self._cur & 1
        self._cur >>= 1
        self._avail -= 1
        return bit

    def take_bits(self, count: int) -> int:
        """The next ``count`` bits as an integer; the first bit drawn is bit 0."""
        if count <= 0:
            return 0
        self.bits_consumed += count
        if count <= self._avail:
            value = self._cur & ((1 << count) - 1)
            self._cur >>= count
            self._avail -= count
            return value
        value = self._cur
        filled = self._avail
        need = count - filled
        if need > _WORD:
            nwords = need // _WORD
            words = self._next_words(nwords)
            value |= int.from_bytes(words.astype("<u8").tobytes(), "little") << filled
            filled += nwords * _WORD
            need -= nwords * _WORD
        if need == 0:
            self._cur = 0
            self._avail = 0
            return value
        word = self._next_word()
        value |= (word & ((1 << need) - 1)) << filled
        self._cur = word >> need
        self._avail = _WORD - need
        return value

    def take_bit_array(self, count: int) -> np.ndarray:
        """The next ``count`` bits as a uint8 array of 0/1, in stream order."""
        if count <= 0:
            return np.zeros(0, dtype=np.uint8)
        self.bits_consumed += count
        head = min(count, self._avail)
        parts = []
        if head:
            cur = self._cur
            parts.append(np.array([(cur >> i) & 1 for i in range(head)], dtype=np.uint8)
                         if head < 16 else
                         np.unpackbits(np.array([cur], dtype=np.uint64).view(np.uint8),
                                       bitorder="little")[:head])
            self._cur >>= head
            self._avail -= head
        rest = count - head
        if rest:
            nwords = -(-rest // _WORD)
            words = self._next_words(nwords)
            bits = np.unpackbits(words.astype("<u8").view(np.uint8), bitorder="little")
            parts.append(bits[:rest])
            spare = nwords * _WORD - rest
            if spare:
                self._cur = int(words[-1]) >> (_WORD - spare)
                self._avail = spare
        return parts[0] if len(parts) == 1 else np.concatenate(parts)

    def bernoulli(self, p: float) -> bool:
        """True with probability ``p``.

        Lazily compares a uniform binary expansion against the bits of
        ``p``; two bits in expectation, exactly one when ``p == 0.5``.
        """
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {p}")
        if p == 0.0:
            return False
        if p == 1.0:
            return True
        while True:
            p *= 2.0
            if p >= 1.0:
                p -= 1.0
                if self.next_bit() == 0:
                    return True
            elif self.next_bit() == 1:
                return False
            if p == 0.0:
                return False

    def uniform_unit(self) -> float:
        """A dyadic uniform in [0, 1) built from 53 fresh bits."""
        return self.take_bits(53) * (1.0 / 9007199254740992.0)

    def uniform_int(self, k: int) -> int:
        """Unbiased integer in [0, k), by rejection over the covering power of two."""
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        if k == 1:
            return 0
        width = (k - 1).bit_length()
        while True:
            r = self.take_bits(width)
            if r < k:
                return r

    def random_permutation(self, n: int) -> list[int]:
        """A uniform permutation of 1..n (Fisher-Yates); entry i is the image of i+1."""
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        perm = list(range(1, n + 1))
        for i in range(n - 1, 0, -1):
            j = self.uniform_int(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def check_random_source(seed) -> RandomSource:
    """Turn ``None``, an int or an existing :class:`RandomSource` into a source.

    ``None`` draws a fresh seed from the OS, mirroring sklearn's
    ``check_random_state``.
    """
    if isinstance(seed, RandomSource):
        return seed
    if seed is None:
        return RandomSource(int(np.random.SeedSequence().entropy) % 2**64)
    if isinstance(seed, (int, np.integer)) and not isinstance(seed, bool):
        return RandomSource(int(seed))
    raise TypeError(f"{seed!r} cannot be used to seed a RandomSource")

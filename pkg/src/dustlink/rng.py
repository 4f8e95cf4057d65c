"""Counter-based random streams for reproducible parallel Monte Carlo.

All randomness in the package flows through Philox, a counter-based
generator. A 64-bit run seed keys the generator and independent substreams
are obtained by placing a stream index in the third word of the 256-bit
counter, which separates streams by 2**128 blocks. Results are therefore
identical no matter how work is split across workers.
"""

import numpy as np

__all__ = ["substream", "derive_seed", "UniformStream"]


def substream(seed: int, stream_index: int) -> np.random.Generator:
    """Generator for one independent substream of a seeded run.

    Equivalent to ``Philox(key=seed).jumped(stream_index)`` but cheaper to
    construct.
    """
    bitgen = np.random.Philox(key=seed, counter=(0, 0, stream_index, 0))
    return np.random.Generator(bitgen)


def derive_seed(*parts: int | str) -> int:
    """Hash a tuple of labels/indices into a 64-bit run seed.

    String parts are folded in as UTF-8 bytes so call sites can namespace
    streams ("time", second) without colliding with plain indices.
    """
    entropy: list[int] = []
    for part in parts:
        if isinstance(part, str):
            entropy.extend(part.encode("utf-8"))
        else:
            entropy.append(int(part))
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


class UniformStream:
    """Buffered scalar draws on the open interval (0, 1).

    Zero draws (probability 2**-53 per draw) are skipped so that log(u)
    is always finite. Buffering is per-stream with a fixed chunk size,
    which keeps the draw sequence a pure function of (seed, stream index).
    """

    _CHUNK = 128

    __slots__ = ("_random", "_buf", "_pos")

    def __init__(self, generator: np.random.Generator):
        self._random = generator.random
        self._buf = self._random(self._CHUNK)
        self._pos = 0

    def next(self) -> float:
        buf = self._buf
        pos = self._pos
        while True:
            if pos >= buf.shape[0]:
                buf = self._buf = self._random(self._CHUNK)
                pos = 0
            u = buf[pos]
            pos += 1
            if u > 0.0:
                self._pos = pos
                return float(u)

"""Counter-based random streams keyed by (seed, stream id)."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream.

    The generator is a Philox counter-based bit generator whose 128-bit key is derived from
    ``(seed, stream_id, *path)``. Identical keys give identical sequences regardless of which
    worker draws them.
    """

    seed: int
    stream_id: int = 0
    path: Tuple[int, ...] = ()

    def key(self) -> int:
        entropy = [self.seed & _MASK64, self.stream_id & _MASK64, *(p & _MASK64 for p in self.path)]
        words = np.random.SeedSequence(entropy).generate_state(2, np.uint64)
        return (int(words[0]) << 64) | int(words[1])

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key()))

    def child(self, index: int) -> "RngStream":
        """Independent sub-stream, e.g. one per stage of a construction."""
        return RngStream(self.seed, self.stream_id, self.path + (int(index),))


def path_stream(seed: int, path_index: int) -> np.random.Generator:
    """Generator for path ``path_index`` of a run seeded with ``seed``."""
    return RngStream(seed, path_index).generator()

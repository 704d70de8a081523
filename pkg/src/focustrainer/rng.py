"""Named deterministic random streams.

Every stochastic choice in the engine (phrase selection, praise mixing,
task operands, distraction scheduling) draws from its own named stream so
that adding draws to one subsystem never shifts another subsystem's
sequence. Stream seeds are derived from the session seed by hashing, so
the whole session is a pure function of (seed, input sequence).
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}/{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class RandomStreams:
    """Factory handing out one independent ``random.Random`` per name."""

    def __init__(self, seed: int):
        self.seed = seed
        self._streams: dict[str, random.Random] = {}

    def stream(self, name: str) -> random.Random:
        if name not in self._streams:
            self._streams[name] = random.Random(derive_seed(self.seed, name))
        return self._streams[name]

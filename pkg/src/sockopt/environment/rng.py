"""Named random streams keyed by (master seed, replication, stream name).

Each stream is a Philox generator seeded from its own ``SeedSequence``, so the
draws a replication sees never depend on which worker runs it or on how many
draws another stream consumed.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

STREAM_NAMES = ("catalogue", "purchase", "exposure", "wash", "study", "oracle")

# replication slot used for streams shared by every replication
SHARED = 2**32 - 1


def stream_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def stream_generator(master_seed: int, replication: int, name: str) -> np.random.Generator:
    seq = np.random.SeedSequence([int(master_seed), int(replication), stream_key(name)])
    return np.random.Generator(np.random.Philox(seq))


def catalogue_generator(master_seed: int) -> np.random.Generator:
    """Catalogue draws are shared by every replication and policy of a run."""
    return stream_generator(master_seed, SHARED, "catalogue")


@dataclass
class StreamFactory:
    master_seed: int
    replication: int = 0
    _cache: dict[str, np.random.Generator] = field(default_factory=dict, repr=False)

    def stream(self, name: str) -> np.random.Generator:
        gen = self._cache.get(name)
        if gen is None:
            gen = stream_generator(self.master_seed, self.replication, name)
            self._cache[name] = gen
        return gen

    @property
    def purchase(self) -> np.random.Generator:
        return self.stream("purchase")

    @property
    def exposure(self) -> np.random.Generator:
        return self.stream("exposure")

    @property
    def wash(self) -> np.random.Generator:
        return self.stream("wash")

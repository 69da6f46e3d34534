"""Seedable, splittable random streams."""

from typing import Sequence

import numpy as np


class Rng:
    """
    A PCG64 stream identified by `(seed, stream_key)`.

    Child streams are derived deterministically through numpy's `SeedSequence`
    spawn keys, so `Rng(7).child(3)` is the same stream in every process.
    Instances are not meant to be shared between workers; hand each worker
    its own child instead.
    """

    def __init__(self, seed: int, stream_key: Sequence[int] = ()):
        self.seed = int(seed)
        self.stream_key = tuple(int(k) for k in stream_key)
        self.seed_sequence = np.random.SeedSequence(self.seed, spawn_key=self.stream_key)
        self.generator = np.random.Generator(np.random.PCG64(self.seed_sequence))

    def child(self, index: int) -> "Rng":
        """Independent stream number `index` below this one."""
        return Rng(self.seed, (*self.stream_key, index))

    def spawn(self, count: int) -> list["Rng"]:
        return [self.child(index) for index in range(count)]

    def child_seed(self, index: int) -> np.random.SeedSequence:
        """Seed sequence for things seeded directly, such as network initialisation."""
        return np.random.SeedSequence(self.seed, spawn_key=(*self.stream_key, index))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, stream_key={self.stream_key})"

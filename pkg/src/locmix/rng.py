"""Deterministic random streams for reproducible (parallel) Monte Carlo.

Every sampler in this package draws from an :class:`RngStream`, which is a
named substream of a master seed.  Two streams with distinct
``(master_seed, stream_index)`` pairs are statistically independent, and the
sequence produced by a stream depends only on that pair — never on thread
count or scheduling.  By convention, replicate ``i`` of an experiment uses
``stream_index=i`` off the experiment's master seed.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """One independent, reproducible random substream.

    Parameters
    ----------
    master_seed : int
        64-bit master seed shared by all streams of one experiment.
    stream_index : int
        Index of this substream (e.g. the Monte Carlo replicate number).

    Notes
    -----
    The underlying generator is seeded through ``SeedSequence`` with the
    entropy pair ``(master_seed, stream_index)``, which guarantees both
    determinism and independence across distinct pairs.  A stream is
    stateful: successive draws continue its sequence.  Do not share one
    stream between concurrent callers.
    """

    __slots__ = ("master_seed", "stream_index", "_generator")

    def __init__(self, master_seed: int, stream_index: int = 0):
        if master_seed < 0 or stream_index < 0:
            raise ValueError("master_seed and stream_index must be nonnegative")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        self._generator: np.random.Generator | None = None

    @property
    def generator(self) -> np.random.Generator:
        """The underlying ``numpy.random.Generator`` (created lazily)."""
        if self._generator is None:
            self._generator = np.random.default_rng(
                (self.master_seed, self.stream_index)
            )
        return self._generator

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index})"

import numpy as np


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent random stream for (seed, *keys).

    Streams with different key tuples are statistically independent, and the same
    tuple always yields the same stream, so work can be split across threads without
    changing the output.
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(sequence))

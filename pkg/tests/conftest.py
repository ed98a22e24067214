"""Shared helpers for sampling small random graphs."""

import numpy as np

from mdim.graph import GnpParams, Graph, generate_gnp, is_connected


def random_connected_graph(rng, n_lo=2, n_hi=8, max_tries=200) -> Graph:
    """One connected G(n, d/n) sample with n drawn from [n_lo, n_hi]."""
    for _ in range(max_tries):
        n = int(rng.integers(n_lo, n_hi + 1))
        d = float(rng.uniform(1.0, max(1.2, n - 1.0)))
        g = generate_gnp(
            GnpParams(n=n, d=min(d, n - 0.01), seed=int(rng.integers(2**62)))
        )
        if is_connected(g):
            return g
    raise RuntimeError("failed to sample a connected graph")


def random_connected_graphs(seed, count, n_lo=2, n_hi=8):
    rng = np.random.default_rng(seed)
    return [random_connected_graph(rng, n_lo, n_hi) for _ in range(count)]

"""Randomized landmark construction with full verification.

For every pair of vertices, the vertices whose distance to the two ends
differs form the pair's separating set S(u,v). If every pair has at least
sigma*n separating vertices, then Z = ceil(2 ln n / -ln(1-sigma)) landmarks
sampled uniformly with replacement separate all pairs with probability at
least 1/2, so retrying a few times yields a verified separator whose size
carries the constructive upper bound on the metric dimension.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .bounds import ceil_with_slack
from .errors import (
    ConnectivityError,
    ConstructionFailureError,
    ParameterError,
)
from .graph import Graph, bfs_distances, distance_matrix, distance_rows

#: Pair budget under which min_sigma enumerates all pairs exactly.
DEFAULT_PAIR_BUDGET = 200_000
#: Sample size used when exact enumeration is over budget.
DEFAULT_SAMPLE_PAIRS = 10_000
DEFAULT_MAX_RETRIES = 32


@dataclass(frozen=True)
class PairSeparationStats:
    """Separating-set data for one vertex pair.

    ``delta_sizes[t]`` partitions S(u,v) by the first distance at which the
    pair's shells differ (min of the two distances), so the sizes sum to
    |S(u,v)| exactly. ``sym_diff_sizes[t]`` is the plain symmetric shell
    difference |V_t(u) xor V_t(v)|; a separated vertex appears in two of
    those, so they sum to 2|S(u,v)|.
    """

    u: int
    v: int
    s_size: int
    delta_sizes: tuple[int, ...]
    sym_diff_sizes: tuple[int, ...]


def pair_separation(g: Graph, u: int, v: int) -> PairSeparationStats:
    """Exact separating-set statistics for the pair (u, v); two BFS passes."""
    if u == v:
        raise ParameterError("pair must consist of two distinct vertices")
    du = bfs_distances(g, u).dist
    dv = bfs_distances(g, v).dist
    if not (du >= 0).all() or not (dv >= 0).all():
        raise ConnectivityError("pair separation requires a connected graph")
    sep = du != dv
    s_size = int(np.count_nonzero(sep))
    tmax = int(max(du.max(), dv.max()))
    first = np.minimum(du, dv)[sep]
    delta = np.bincount(first, minlength=tmax + 1)
    sym = np.bincount(du[sep], minlength=tmax + 1) + np.bincount(
        dv[sep], minlength=tmax + 1
    )
    return PairSeparationStats(
        u=u,
        v=v,
        s_size=s_size,
        delta_sizes=tuple(int(x) for x in delta),
        sym_diff_sizes=tuple(int(x) for x in sym),
    )


@dataclass(frozen=True)
class SigmaEstimate:
    """Minimum separating fraction; exact only if every pair was checked."""

    sigma: float
    exact: bool
    pairs_evaluated: int


def min_sigma(
    g: Graph,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    sample_pairs: int = DEFAULT_SAMPLE_PAIRS,
    seed: int = 0,
    distances: np.ndarray | None = None,
) -> SigmaEstimate:
    """min over pairs of |S(u,v)|/n, exact when C(n,2) fits the budget.

    Above the budget a uniform pair sample is used and the result is an
    estimate (an upper bound on the true sigma in expectation), flagged
    via ``exact=False``.
    """
    n = g.n
    if n < 2:
        raise ParameterError("need at least two vertices")
    total_pairs = n * (n - 1) // 2
    if total_pairs <= pair_budget:
        d = distance_matrix(g) if distances is None else distances
        if np.any(d < 0):
            raise ConnectivityError("sigma requires a connected graph")
        best = n
        for u in range(n - 1):
            diffs = (d[u + 1 :] != d[u]).sum(axis=1)
            best = min(best, int(diffs.min()))
        return SigmaEstimate(sigma=best / n, exact=True, pairs_evaluated=total_pairs)

    rng = np.random.default_rng(seed)
    pairs = set()
    while len(pairs) < min(sample_pairs, total_pairs):
        us = rng.integers(0, n, size=sample_pairs)
        vs = rng.integers(0, n, size=sample_pairs)
        for a, b in zip(us.tolist(), vs.tolist()):
            if a != b:
                pairs.add((min(a, b), max(a, b)))
                if len(pairs) >= sample_pairs:
                    break
    pair_list = sorted(pairs)
    sources = sorted({x for p in pair_list for x in p})
    index = {s: i for i, s in enumerate(sources)}
    if distances is not None:
        rows = distances[sources]
    else:
        rows = distance_rows(g, sources)
    if np.any(rows < 0):
        raise ConnectivityError("sigma requires a connected graph")
    best = n
    for a, b in pair_list:
        best = min(best, int(np.count_nonzero(rows[index[a]] != rows[index[b]])))
    return SigmaEstimate(sigma=best / n, exact=False, pairs_evaluated=len(pair_list))


def landmark_count(n: int, sigma: float) -> int:
    """Z = ceil(2 ln n / -ln(1 - sigma)) landmarks suffice at level sigma."""
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    if sigma <= 0.0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    if sigma >= 1.0:
        return 1  # every vertex separates every pair
    z = ceil_with_slack(2.0 * math.log(n) / -math.log1p(-sigma))
    return max(1, z)


def _row_fingerprint(row_bytes: bytes) -> bytes:
    return hashlib.blake2b(row_bytes, digest_size=16).digest()


def distance_vectors(g: Graph, w_set) -> np.ndarray:
    """n x |W| matrix of distances to the (deduplicated, sorted) landmarks."""
    w = sorted(set(int(x) for x in w_set))
    if not w:
        raise ParameterError("landmark set must be non-empty")
    if w[0] < 0 or w[-1] >= g.n:
        raise ParameterError("landmark out of range")
    return np.ascontiguousarray(distance_rows(g, w).T)


def verify_separator(g: Graph, w_set) -> bool:
    """True iff all n distance vectors to the landmark set are distinct.

    One BFS per distinct landmark, then 128-bit row fingerprints with a
    full-vector comparison on any fingerprint collision, so a True answer
    never rests on hashing alone.
    """
    vectors = distance_vectors(g, w_set)
    seen: dict[bytes, int] = {}
    for i in range(vectors.shape[0]):
        fp = _row_fingerprint(vectors[i].tobytes())
        j = seen.setdefault(fp, i)
        if j != i and np.array_equal(vectors[i], vectors[j]):
            return False
    return True


def independent_reverify(g: Graph, w_set) -> bool:
    """Re-verification on a separate code path: reference BFS per landmark
    plus lexicographic row sort, no hashing involved."""
    w = sorted(set(int(x) for x in w_set))
    cols = [bfs_distances(g, s).dist for s in w]
    mat = np.stack(cols, axis=1)
    order = np.lexsort(mat.T[::-1])
    sorted_rows = mat[order]
    dup = np.all(sorted_rows[1:] == sorted_rows[:-1], axis=1)
    return not bool(dup.any())


@dataclass(frozen=True)
class SeparatorCertificate:
    """A verified landmark multiset with the evidence used to build it.

    ``landmarks`` is the raw with-replacement sample of size Z (the bound's
    quantity); ``distinct_landmarks`` is the deduplicated set that actually
    acts as the separator.
    """

    landmarks: tuple[int, ...]
    distinct_landmarks: tuple[int, ...]
    verified: bool
    sigma_used: float
    sigma_exact: bool
    z: int
    trials_used: int

    def to_json_dict(self) -> dict:
        return {
            "sigma": self.sigma_used,
            "sigma_exact": self.sigma_exact,
            "Z": self.z,
            "landmarks": list(self.landmarks),
            "distinct_count": len(self.distinct_landmarks),
            "verified": self.verified,
            "trials_used": self.trials_used,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def construct_separator(
    g: Graph,
    seed: int = 0,
    max_retries: int = DEFAULT_MAX_RETRIES,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    sample_pairs: int = DEFAULT_SAMPLE_PAIRS,
    distances: np.ndarray | None = None,
) -> SeparatorCertificate:
    """Sample-and-verify loop for the randomized landmark construction.

    Computes sigma (exact when within budget), derives Z, then samples Z
    landmarks with replacement and verifies, retrying up to ``max_retries``
    times. Each successful certificate is fully verified; failures raise
    with enough context to distinguish a sampled-sigma overestimate from
    plain bad luck.
    """
    est = min_sigma(
        g,
        pair_budget=pair_budget,
        sample_pairs=sample_pairs,
        seed=seed,
        distances=distances,
    )
    z = landmark_count(g.n, est.sigma)
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_retries + 1):
        landmarks = rng.integers(0, g.n, size=z)
        distinct = sorted(set(landmarks.tolist()))
        if verify_separator(g, distinct):
            return SeparatorCertificate(
                landmarks=tuple(int(x) for x in landmarks),
                distinct_landmarks=tuple(distinct),
                verified=True,
                sigma_used=est.sigma,
                sigma_exact=est.exact,
                z=z,
                trials_used=attempt,
            )
    raise ConstructionFailureError(
        z=z, sigma=est.sigma, sigma_exact=est.exact, attempts=max_retries
    )


def pair_delta_at_tstar(
    g: Graph, u: int, v: int, t_star: int
) -> tuple[int, int, int]:
    """(|V_t(u) xor V_t(v)|, union, intersection) at t = t_star."""
    if u == v:
        raise ParameterError("pair must consist of two distinct vertices")
    if t_star < 0:
        raise ParameterError(f"shell index must be >= 0, got {t_star}")
    au = bfs_distances(g, u).dist == t_star
    av = bfs_distances(g, v).dist == t_star
    delta = int(np.count_nonzero(au ^ av))
    union = int(np.count_nonzero(au | av))
    inter = int(np.count_nonzero(au & av))
    return delta, union, inter

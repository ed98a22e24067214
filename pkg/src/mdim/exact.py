"""Ground-truth solvers: exact minimum metric dimension and greedy cover.

The exact solver runs iterative deepening over landmark subsets with
bitset pair coverage, twin forced-inclusion preprocessing, and a
counting prune; it is meant for small graphs (n up to ~25). The greedy
separator is the classic largest-gain set-cover heuristic, implemented by
refining distance-signature classes so it also runs at thousands of
vertices, where it serves as the practical upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import certify_md_lower_bound
from .errors import BudgetExhaustedError, ConnectivityError, ParameterError
from .graph import Graph, distance_matrix


def _pair_index_table(n: int) -> np.ndarray:
    """idx[u, v] = position of the unordered pair in lexicographic order."""
    idx = np.zeros((n, n), dtype=np.int64)
    k = 0
    for u in range(n - 1):
        for v in range(u + 1, n):
            idx[u, v] = idx[v, u] = k
            k += 1
    return idx


@dataclass(frozen=True)
class PairCoverageMap:
    """Per-landmark bitsets over the C(n,2) pair universe.

    Bit k of ``coverage[w]`` is set iff landmark w separates the k-th pair,
    i.e. the two endpoints sit at different distances from w.
    """

    n: int
    pair_count: int
    coverage: tuple[int, ...]
    universe: int


def build_pair_coverage(g: Graph, distances: np.ndarray | None = None) -> PairCoverageMap:
    """Materialize the separation relation as bitsets (small n only)."""
    n = g.n
    if n < 2:
        raise ParameterError("need at least two vertices")
    d = distance_matrix(g) if distances is None else distances
    if np.any(d < 0):
        raise ConnectivityError("coverage requires a connected graph")
    pair_count = n * (n - 1) // 2
    coverage = []
    for w in range(n):
        col = d[:, w]
        bits = 0
        k = 0
        for u in range(n - 1):
            cu = col[u]
            for v in range(u + 1, n):
                if cu != col[v]:
                    bits |= 1 << k
                k += 1
        coverage.append(bits)
    return PairCoverageMap(
        n=n,
        pair_count=pair_count,
        coverage=tuple(coverage),
        universe=(1 << pair_count) - 1,
    )


def is_separator_via_coverage(cov: PairCoverageMap, w_set) -> bool:
    """True iff the union of the chosen landmarks' bitsets covers all pairs."""
    acc = 0
    for w in w_set:
        acc |= cov.coverage[w]
        if acc == cov.universe:
            return True
    return acc == cov.universe


def greedy_separator(g: Graph, distances: np.ndarray | None = None) -> set[int]:
    """Greedy set cover over vertex pairs; ties go to the smallest id.

    Implemented as signature-class refinement: vertices sharing identical
    distance vectors to the chosen landmarks form classes; the number of
    unseparated pairs is the sum of C(class size, 2), and the gain of a
    candidate is how much that sum drops when classes split by distance to
    it. This is the same greedy as over explicit pair bitsets, without
    materializing C(n,2) bits.
    """
    n = g.n
    if n == 1:
        return {0}
    d = distance_matrix(g) if distances is None else distances
    if np.any(d < 0):
        raise ConnectivityError("greedy separator requires a connected graph")
    d = d.astype(np.int64)
    span = int(d.max()) + 1
    cls = np.zeros(n, dtype=np.int64)  # all vertices in one class initially

    def unseparated(counts: np.ndarray) -> int:
        return int((counts * (counts - 1) // 2).sum())

    chosen: set[int] = set()
    current = unseparated(np.array([n]))
    while current > 0:
        gains = np.empty(n, dtype=np.int64)
        for w in range(n):
            key = cls * span + d[:, w]
            counts = np.bincount(key)
            gains[w] = current - unseparated(counts)
        best = int(np.argmax(gains))  # first max = smallest vertex id
        if gains[best] <= 0:  # cannot happen on valid inputs
            raise AssertionError("greedy stalled with unseparated pairs")
        chosen.add(best)
        key = cls * span + d[:, best]
        _, cls = np.unique(key, return_inverse=True)
        current -= int(gains[best])
    return chosen


def _twin_classes(d: np.ndarray) -> list[list[int]]:
    """Partition vertices into twin classes (equal distances off the pair).

    u and v are twins when their distance rows agree everywhere outside
    {u, v}; such vertices are mutually interchangeable and only they
    separate each other.
    """
    n = d.shape[0]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u in range(n - 1):
        for v in range(u + 1, n):
            mask = np.ones(n, dtype=bool)
            mask[u] = mask[v] = False
            if np.array_equal(d[u][mask], d[v][mask]):
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def exact_md(g: Graph, budget: int = 100_000_000) -> int:
    """Exact metric dimension by pruned subset search.

    Iterative deepening on the landmark count k, starting at the entropic
    lower bound and capped by the greedy upper bound. Twin classes force
    all but one member into the solution up front. The prune: if the best
    remaining single-landmark gain times the picks left cannot cover the
    uncovered pairs, backtrack. Exhausting the expansion budget raises
    with the proven bracket instead of guessing.
    """
    n = g.n
    if n == 1:
        return 1
    d = distance_matrix(g)
    if np.any(d < 0):
        raise ConnectivityError("exact solver requires a connected graph")

    cert_lb = certify_md_lower_bound(g, keep_per_vertex=False, distances=d).lower_bound
    greedy_ub = len(greedy_separator(g, distances=d))
    cov = build_pair_coverage(g, distances=d)

    forced: list[int] = []
    for cls in _twin_classes(d):
        if len(cls) >= 2:
            forced.extend(sorted(cls)[:-1])  # keep all but the largest id
    base_cover = 0
    for w in forced:
        base_cover |= cov.coverage[w]

    lower_start = max(cert_lb, len(forced), 1)
    if base_cover == cov.universe:
        return len(forced) if forced else lower_start

    candidates = [w for w in range(n) if w not in set(forced)]
    candidates.sort(key=lambda w: (-_popcount(cov.coverage[w]), w))
    cov_list = [cov.coverage[w] for w in candidates]
    universe = cov.universe

    expansions = 0

    def search(start: int, picks_left: int, covered: int) -> bool:
        nonlocal expansions
        expansions += 1
        if expansions > budget:
            raise _OutOfBudget()
        if covered == universe:
            return True
        if picks_left == 0:
            return False
        uncovered = universe & ~covered
        need = _popcount(uncovered)
        best_gain = 0
        for i in range(start, len(cov_list)):
            gain = _popcount(cov_list[i] & uncovered)
            if gain > best_gain:
                best_gain = gain
        if best_gain * picks_left < need:
            return False
        for i in range(start, len(cov_list)):
            if _popcount(cov_list[i] & uncovered) == 0:
                continue
            if search(i + 1, picks_left - 1, covered | cov_list[i]):
                return True
        return False

    for k in range(lower_start, greedy_ub + 1):
        extra = k - len(forced)
        if extra < 0:
            continue
        try:
            if search(0, extra, base_cover):
                return k
        except _OutOfBudget:
            raise BudgetExhaustedError(lower=k, upper=greedy_ub, expansions=expansions)
    return greedy_ub


class _OutOfBudget(Exception):
    pass


def _popcount(x: int) -> int:
    return x.bit_count()

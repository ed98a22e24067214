"""Immutable simple undirected graphs: G(n,p) sampling, BFS, shells, diameter.

Vertices are dense integers ``0..n-1``. Adjacency is stored in CSR form
(``indptr``/``indices``) with neighbor lists sorted ascending, which makes
graphs cheap to share across threads and to hand to scipy's csgraph
routines for bulk distance work. A single-source pure-Python BFS is kept
as the reference implementation; bulk operations (distance matrices,
diameter) go through compiled scipy code and are cross-checked against
the reference in the test suite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse import csgraph as _csgraph

from .errors import ConnectivityError, ParameterError

#: Sentinel distance for vertices not reached by a BFS. Never do arithmetic
#: on it; operations that need all distances finite check reachability first.
UNREACHED = -1

# Row budget (in matrix cells) for batched bulk-BFS calls.
_BULK_CELL_BUDGET = 4_000_000

# Hard cap for materializing a full n x n distance matrix (memory guard).
_MATRIX_N_LIMIT = 12_000


class Graph:
    """Simple undirected graph, immutable after construction."""

    __slots__ = ("n", "m", "indptr", "indices", "_csr")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.m = int(indices.size // 2)
        for arr in (indptr, indices):
            arr.setflags(write=False)
        self._csr = None

    # -- construction ----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, u: Sequence[int], v: Sequence[int]) -> "Graph":
        """Build a graph from edge endpoint arrays, validating simplicity.

        Edges may be given in either orientation; self-loops and duplicate
        edges are rejected.
        """
        if n < 1:
            raise ParameterError(f"vertex count must be >= 1, got {n}")
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise ParameterError("edge endpoint arrays must have equal length")
        if u.size:
            if u.min() < 0 or v.min() < 0 or u.max() >= n or v.max() >= n:
                raise ParameterError("edge endpoint out of range")
            if np.any(u == v):
                raise ParameterError("self-loops are not allowed")
            lo = np.minimum(u, v)
            hi = np.maximum(u, v)
            key = lo * n + hi
            if np.unique(key).size != key.size:
                raise ParameterError("duplicate edges are not allowed")
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(n, indptr, dst.astype(np.int32))

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse the edge-list text format.

        First line ``n m``, then one ``u v`` pair per line with ``u < v``,
        0-based, LF-terminated. Duplicates and self-loops are rejected.
        """
        lines = [ln for ln in text.split("\n") if ln.strip()]
        if not lines:
            raise ParameterError("empty edge list")
        head = lines[0].split()
        if len(head) != 2:
            raise ParameterError("header must be 'n m'")
        n, m = int(head[0]), int(head[1])
        if len(lines) - 1 != m:
            raise ParameterError(
                f"header announces {m} edges but {len(lines) - 1} lines follow"
            )
        us = np.empty(m, dtype=np.int64)
        vs = np.empty(m, dtype=np.int64)
        for i, ln in enumerate(lines[1:]):
            parts = ln.split()
            if len(parts) != 2:
                raise ParameterError(f"bad edge line: {ln!r}")
            a, b = int(parts[0]), int(parts[1])
            if not a < b:
                raise ParameterError(f"edges must satisfy u < v, got {a} {b}")
            us[i], vs[i] = a, b
        return cls.from_edges(n, us, vs)

    def to_edge_list(self) -> str:
        """Serialize to the edge-list text format (u < v per line, LF)."""
        out = [f"{self.n} {self.m}"]
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    out.append(f"{u} {v}")
        return "\n".join(out) + "\n"

    # -- accessors -------------------------------------------------------

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of ``v`` (read-only view)."""
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate edges as (u, v) with u < v, lexicographic order."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield (u, int(v))

    def csr(self) -> csr_matrix:
        """Lazily built scipy CSR adjacency (shared, do not mutate)."""
        if self._csr is None:
            data = np.ones(self.indices.size, dtype=np.int8)
            self._csr = csr_matrix(
                (data, self.indices, self.indptr), shape=(self.n, self.n)
            )
        return self._csr

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self) -> int:  # id-based; graphs are immutable values but big
        return object.__hash__(self)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class GnpParams:
    """Parameters of the G(n, p) model with p = d/n."""

    n: int
    d: float
    seed: int

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"n must be >= 2, got {self.n}")
        if not (0.0 < self.d < self.n):
            raise ParameterError(f"mean degree must satisfy 0 < d < n, got {self.d}")
        if self.seed < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")

    @property
    def p(self) -> float:
        return self.d / self.n


@dataclass(frozen=True)
class DistanceField:
    """Hop distances from one source; UNREACHED marks other components."""

    source: int
    dist: np.ndarray

    @property
    def all_reached(self) -> bool:
        return bool(np.all(self.dist != UNREACHED))

    @property
    def eccentricity(self) -> int:
        return int(self.dist.max())


@dataclass(frozen=True)
class ShellDecomposition:
    """Sizes of the distance shells around one source vertex.

    ``shell_sizes[t]`` counts vertices at distance exactly t; index 0 is the
    source itself and index 1 its degree.
    """

    source: int
    shell_sizes: np.ndarray
    eccentricity: int

    def prefix_sizes(self) -> np.ndarray:
        """Cumulative counts |V_<=t| for t = 0..eccentricity."""
        return np.cumsum(self.shell_sizes)


# -- G(n,p) generation ---------------------------------------------------


def _pairs_from_indices(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert the lexicographic linear index over unordered pairs.

    Pairs (u, v) with u < v are enumerated as (0,1), (0,2), ..., (1,2), ...
    Row u starts at offset u*(2n - u - 1)/2.
    """
    kf = k.astype(np.float64)
    u = ((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8.0 * kf)) / 2.0
    u = np.clip(u.astype(np.int64), 0, n - 2)
    # fix float rounding: u must satisfy offset(u) <= k < offset(u+1)
    for _ in range(3):
        off = u * (2 * n - u - 1) // 2
        too_high = off > k
        if not too_high.any():
            break
        u = u - too_high
    for _ in range(3):
        off_next = (u + 1) * (2 * n - u - 2) // 2
        too_low = (off_next <= k) & (u < n - 2)
        if not too_low.any():
            break
        u = u + too_low
    off = u * (2 * n - u - 1) // 2
    v = k - off + u + 1
    return u, v


def generate_gnp(params: GnpParams) -> Graph:
    """Sample G(n, p) with p = d/n, deterministically for a fixed seed.

    Walks the C(n,2) linearized edge slots with geometric jumps, so the
    work is O(n + m) rather than O(n^2). Every slot is an independent
    Bernoulli(p) trial exactly as in the model.
    """
    n = params.n
    p = params.p
    total = n * (n - 1) // 2
    rng = np.random.default_rng(params.seed)
    chunks: list[np.ndarray] = []
    cursor = 0  # linear index of the next unexamined slot
    # chunk size targets the expected remaining hits plus slack
    while cursor < total:
        expect = int(p * (total - cursor) * 1.2) + 64
        size = min(max(expect, 64), 1 << 20)
        gaps = rng.geometric(p, size=size)
        hits = cursor - 1 + np.cumsum(gaps)
        inside = hits[hits < total]
        chunks.append(inside)
        if inside.size < hits.size:
            break
        cursor = int(hits[-1]) + 1
    selected = (
        np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    )
    u, v = _pairs_from_indices(selected, n)
    return Graph.from_edges(n, u, v)


# -- named graphs (fixtures and sanity anchors) ---------------------------


def path_graph(n: int) -> Graph:
    u = np.arange(n - 1)
    return Graph.from_edges(n, u, u + 1)


def cycle_graph(n: int) -> Graph:
    u = np.arange(n)
    return Graph.from_edges(n, u, (u + 1) % n)


def complete_graph(n: int) -> Graph:
    u, v = np.triu_indices(n, k=1)
    return Graph.from_edges(n, u, v)


def star_graph(leaves: int) -> Graph:
    """Star K_{1,leaves}; vertex 0 is the center."""
    v = np.arange(1, leaves + 1)
    return Graph.from_edges(leaves + 1, np.zeros(leaves, dtype=np.int64), v)


def complete_bipartite_graph(a: int, b: int) -> Graph:
    """K_{a,b}; side A is 0..a-1, side B is a..a+b-1."""
    u = np.repeat(np.arange(a), b)
    v = np.tile(np.arange(a, a + b), a)
    return Graph.from_edges(a + b, u, v)


# -- distances -----------------------------------------------------------


def bfs_distances(g: Graph, source: int) -> DistanceField:
    """Exact unweighted shortest-path distances from one source, O(n+m).

    Reference implementation (plain queue BFS); bulk callers should prefer
    :func:`distance_rows` / :func:`distance_matrix`.
    """
    if not 0 <= source < g.n:
        raise ParameterError(f"source {source} out of range [0, {g.n})")
    dist = np.full(g.n, UNREACHED, dtype=np.int32)
    dist[source] = 0
    queue = deque([source])
    indptr, indices = g.indptr, g.indices
    while queue:
        u = queue.popleft()
        du1 = dist[u] + 1
        for w in indices[indptr[u] : indptr[u + 1]]:
            if dist[w] == UNREACHED:
                dist[w] = du1
                queue.append(w)
    dist.setflags(write=False)
    return DistanceField(source=source, dist=dist)


def distance_rows(g: Graph, sources: Sequence[int]) -> np.ndarray:
    """Distances from each source to all vertices, shape (len(sources), n).

    Runs compiled BFS passes; unreached entries are UNREACHED.
    """
    sources = np.asarray(sources, dtype=np.int64)
    if sources.size == 0:
        return np.empty((0, g.n), dtype=np.int32)
    if sources.min() < 0 or sources.max() >= g.n:
        raise ParameterError("source out of range")
    batch = max(1, _BULK_CELL_BUDGET // max(g.n, 1))
    out = np.empty((sources.size, g.n), dtype=np.int32)
    csr = g.csr()
    for start in range(0, sources.size, batch):
        part = sources[start : start + batch]
        d = _csgraph.shortest_path(
            csr, method="D", unweighted=True, directed=True, indices=part
        )
        if part.size == 1:
            d = d.reshape(1, -1)
        block = np.where(np.isinf(d), float(UNREACHED), d)
        out[start : start + part.size] = block.astype(np.int32)
    return out


def distance_matrix(g: Graph) -> np.ndarray:
    """Full n x n distance matrix (int32, UNREACHED for other components)."""
    if g.n > _MATRIX_N_LIMIT:
        raise ParameterError(
            f"distance matrix disabled for n > {_MATRIX_N_LIMIT} (n={g.n}); "
            "use distance_rows on batches instead"
        )
    return distance_rows(g, np.arange(g.n))


def is_connected(g: Graph) -> bool:
    """True iff one BFS from vertex 0 reaches all n vertices."""
    if g.n <= 1:
        return True
    ncomp = _csgraph.connected_components(
        g.csr(), directed=False, return_labels=False
    )
    return int(ncomp) == 1


def shells(g: Graph, source: int) -> ShellDecomposition:
    """Shell sizes |V_t(source)| for t = 0..ecc; requires a connected graph."""
    field = bfs_distances(g, source)
    if not field.all_reached:
        raise ConnectivityError("shell decomposition requires a connected graph")
    return shells_from_distances(source, field.dist)


def shells_from_distances(source: int, dist: np.ndarray) -> ShellDecomposition:
    """Shell decomposition from a precomputed all-reached distance array."""
    ecc = int(dist.max())
    sizes = np.bincount(dist, minlength=ecc + 1).astype(np.int64)
    sizes.setflags(write=False)
    return ShellDecomposition(source=source, shell_sizes=sizes, eccentricity=ecc)


def diameter(g: Graph) -> int:
    """Exact diameter via an eccentricity scan (n BFS passes, batched)."""
    if g.n == 1:
        return 0
    if not is_connected(g):
        raise ConnectivityError("diameter requires a connected graph")
    best = 0
    batch = max(1, _BULK_CELL_BUDGET // g.n)
    for start in range(0, g.n, batch):
        rows = distance_rows(g, np.arange(start, min(start + batch, g.n)))
        best = max(best, int(rows.max()))
    return best


# -- small-subgraph statistics --------------------------------------------


def common_neighbor_count(g: Graph, u: int, v: int) -> int:
    """|N(u) ∩ N(v)| by sorted-list intersection."""
    return int(np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True).size)


def count_pairs_with_three_common_neighbors(g: Graph) -> int:
    """Number of unordered pairs {u, v} with at least 3 common neighbors.

    Uses the sparse square of the adjacency matrix: (A @ A)[u, v] counts
    length-2 paths, i.e. common neighbors, for u != v. Agrees with the
    per-pair sorted-intersection count (tested on small graphs).
    """
    if g.n < 2 or g.m == 0:
        return 0
    a = g.csr().astype(np.int32)
    counts = a @ a
    coo = counts.tocoo()
    mask = (coo.row < coo.col) & (coo.data >= 3)
    return int(np.count_nonzero(mask))


def count_k23_configurations(g: Graph) -> int:
    """Number of (pair, 3 common neighbors) configurations, i.e. copies of
    the complete bipartite K_{2,3} counted with multiplicity.

    Sums C(common(u,v), 3) over pairs; by linearity its expectation in
    G(n, p) is exactly C(n,2) C(n-2,3) p^6, which makes it the right
    statistic to compare against that formula at tight tolerances.
    """
    if g.n < 2 or g.m == 0:
        return 0
    a = g.csr().astype(np.int64)
    counts = a @ a
    coo = counts.tocoo()
    mask = (coo.row < coo.col) & (coo.data >= 3)
    c = coo.data[mask]
    return int((c * (c - 1) * (c - 2) // 6).sum())

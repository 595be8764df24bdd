"""Graph representation, validation, random generation, and derived matrices.

The :class:`Graph` type is the single graph carrier used everywhere: an
immutable, undirected, simple graph over contiguous ids 0..n-1, stored as a
flat CSR-style adjacency (``offsets``/``targets``) so that algorithms can
operate on arrays instead of Python containers.

:class:`RandomSource` is the only randomness entry point in the library.  It
wraps a counter-based generator keyed by ``(seed, stream_id)``, which makes
every random quantity a pure function of those two integers, identically on
every platform, and makes independent child streams cheap to derive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse as _sp

from .errors import (
    ConnectivityRetryExhausted,
    DuplicateEdge,
    IsolatedNode,
    OutOfRangeNode,
    SelfLoop,
    TooManyEdges,
)

__all__ = [
    "Graph",
    "SparseMatrix",
    "ValidationReport",
    "RandomSource",
    "build_graph",
    "validate_graph",
    "erdos_renyi_gnm",
    "transition_matrix",
    "normalized_laplacian",
    "triangles_per_node",
]


# ---------------------------------------------------------------------------
# random source
# ---------------------------------------------------------------------------

def _splitmix64(x: int) -> int:
    # Finalizer with full avalanche; used only to derive child seeds.
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


@dataclass(frozen=True)
class RandomSource:
    """Deterministic randomness handle keyed by ``(seed, stream_id)``.

    The output sequence is a pure function of the two key integers; distinct
    stream ids give statistically independent streams.  Instances are
    immutable; parallel or per-item work derives children via :meth:`child`
    so results stay independent of execution order.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this source's stream."""
        key = np.array(
            [self.seed & 0xFFFFFFFFFFFFFFFF, self.stream_id & 0xFFFFFFFFFFFFFFFF],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, index: int) -> "RandomSource":
        """Derive the ``index``-th child source.

        The child's stream_id is ``index`` itself; its seed mixes the parent
        key, so children of distinct parents never collide.
        """
        mixed = _splitmix64(self.seed ^ _splitmix64(self.stream_id))
        return RandomSource(seed=mixed, stream_id=index)


# ---------------------------------------------------------------------------
# sparse matrix carrier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparseMatrix:
    """Compressed sparse row matrix of 64-bit floats.

    ``row_offsets`` has length ``rows + 1``; row i's entries live at
    positions ``row_offsets[i]:row_offsets[i+1]`` of ``column_indices`` /
    ``values``, with column indices sorted within each row.
    """

    rows: int
    cols: int
    row_offsets: np.ndarray
    column_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        for name in ("row_offsets", "column_indices", "values"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return int(self.row_offsets[-1])

    @classmethod
    def from_scipy(cls, m: _sp.spmatrix) -> "SparseMatrix":
        c = _sp.csr_matrix(m)
        c.sort_indices()
        return cls(
            rows=c.shape[0],
            cols=c.shape[1],
            row_offsets=c.indptr.astype(np.int64),
            column_indices=c.indices.astype(np.int64),
            values=c.data.astype(np.float64),
        )

    def to_scipy(self) -> _sp.csr_matrix:
        return _sp.csr_matrix(
            (self.values, self.column_indices, self.row_offsets),
            shape=(self.rows, self.cols),
        )

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()


# ---------------------------------------------------------------------------
# graph type
# ---------------------------------------------------------------------------

class Graph:
    """Immutable undirected simple graph over ids 0..n-1.

    Adjacency is stored flat: node v's neighbors are
    ``targets[offsets[v]:offsets[v+1]]``, sorted ascending.  Both arrays are
    read-only, so instances are safe to share across any number of readers.
    """

    __slots__ = ("node_count", "edge_count", "offsets", "targets")

    def __init__(self, node_count: int, offsets: np.ndarray, targets: np.ndarray):
        self.node_count = int(node_count)
        self.edge_count = int(len(targets) // 2)
        offsets.setflags(write=False)
        targets.setflags(write=False)
        self.offsets = offsets
        self.targets = targets

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of node v (read-only view)."""
        return self.targets[self.offsets[v]: self.offsets[v + 1]]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    @property
    def adjacency(self) -> list[np.ndarray]:
        """Per-node sorted neighbor lists."""
        return [self.neighbors(v) for v in range(self.node_count)]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) pairs with u < v, lexicographically sorted."""
        out = []
        for u in range(self.node_count):
            for v in self.neighbors(u):
                if u < v:
                    out.append((u, int(v)))
        return out

    def adjacency_scipy(self) -> _sp.csr_matrix:
        """The 0/1 adjacency matrix as a scipy CSR (float64)."""
        return _sp.csr_matrix(
            (np.ones(len(self.targets)), self.targets, self.offsets),
            shape=(self.node_count, self.node_count),
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.node_count}, m={self.edge_count})"


@dataclass(frozen=True)
class ValidationReport:
    """Structural facts about a graph relevant to the model contracts.

    ``is_contiguous`` reports whether every declared id participates in at
    least one edge; degree-zero ids are counted in ``isolated_node_count``.
    Graphs produced by :func:`build_graph` can never contain self-loops or
    duplicate edges, so those two flags are false for them by construction.
    """

    is_connected: bool
    is_contiguous: bool
    has_self_loops: bool
    has_duplicates: bool
    isolated_node_count: int


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def build_graph(n: int, edges) -> Graph:
    """Build an undirected simple graph from unordered node pairs.

    (u, v) and (v, u) denote the same edge; supplying both, or the same pair
    twice, raises :class:`DuplicateEdge`.  Self-loops and endpoints outside
    0..n-1 are rejected rather than dropped, so upstream data bugs surface
    loudly.
    """
    if n < 1:
        raise OutOfRangeNode(f"node count must be >= 1, got {n}")
    edges = list(edges)
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n) or not (0 <= v < n):
            raise OutOfRangeNode(f"edge ({u},{v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at node {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"edge ({u},{v}) given more than once")
        seen.add(key)
    m = len(seen)
    if m == 0:
        heads = np.empty(0, dtype=np.int64)
        tails = np.empty(0, dtype=np.int64)
    else:
        pairs = np.array(sorted(seen), dtype=np.int64)
        heads = np.concatenate([pairs[:, 0], pairs[:, 1]])
        tails = np.concatenate([pairs[:, 1], pairs[:, 0]])
    counts = np.bincount(heads, minlength=n)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    order = np.lexsort((tails, heads))
    targets = tails[order]
    return Graph(n, offsets, targets)


def validate_graph(g: Graph) -> ValidationReport:
    """Report connectivity and id-coverage facts about ``g``.

    Connectivity is decided by breadth-first traversal from node 0; models
    that require a connected input consult this and reject otherwise.
    """
    n = g.node_count
    deg = g.degrees
    isolated = int(np.count_nonzero(deg == 0))
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.neighbors(u):
                if not visited[v]:
                    visited[v] = True
                    nxt.append(int(v))
        frontier = nxt
    return ValidationReport(
        is_connected=bool(visited.all()),
        is_contiguous=(isolated == 0),
        has_self_loops=False,
        has_duplicates=False,
        isolated_node_count=isolated,
    )


def erdos_renyi_gnm(
    n: int, m: int, rng: RandomSource, connected: bool = False
) -> Graph:
    """Sample a uniform random graph with exactly ``m`` distinct edges.

    Pairs are drawn uniformly and rejected while already present; expected
    cost is O(m) in the sparse regimes this library targets.  With
    ``connected=True`` the draw is retried with the next stream_id, up to
    100 attempts, until the result is connected.
    """
    if n < 1:
        raise OutOfRangeNode(f"node count must be >= 1, got {n}")
    max_m = n * (n - 1) // 2
    if m < 0 or m > max_m:
        raise TooManyEdges(f"{m} edges requested, graph of {n} nodes admits at most {max_m}")
    attempts = 100 if connected else 1
    for k in range(attempts):
        gen = RandomSource(rng.seed, rng.stream_id + k).generator()
        seen: set[tuple[int, int]] = set()
        while len(seen) < m:
            u = int(gen.integers(0, n))
            v = int(gen.integers(0, n))
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
        g = build_graph(n, seen)
        if not connected or validate_graph(g).is_connected:
            return g
    raise ConnectivityRetryExhausted(
        f"no connected G({n},{m}) found in {attempts} attempts from seed {rng.seed}"
    )


# ---------------------------------------------------------------------------
# derived matrices and statistics
# ---------------------------------------------------------------------------

def _require_no_isolated(g: Graph) -> np.ndarray:
    deg = g.degrees.astype(np.float64)
    if np.any(deg == 0):
        bad = int(np.flatnonzero(deg == 0)[0])
        raise IsolatedNode(f"node {bad} has degree 0")
    return deg


def transition_matrix(g: Graph) -> SparseMatrix:
    """Row-stochastic random-walk matrix: adjacency with rows divided by degree."""
    deg = _require_no_isolated(g)
    values = 1.0 / np.repeat(deg, g.degrees)
    return SparseMatrix(
        rows=g.node_count,
        cols=g.node_count,
        row_offsets=g.offsets.copy(),
        column_indices=g.targets.copy(),
        values=values,
    )


def normalized_laplacian(g: Graph) -> SparseMatrix:
    """Symmetric normalized Laplacian; eigenvalues lie in [0, 2].

    Entry (u,v) for an edge is -1/sqrt(deg(u)*deg(v)); the diagonal is 1.
    """
    deg = _require_no_isolated(g)
    n = g.node_count
    inv_sqrt = 1.0 / np.sqrt(deg)
    rows_rep = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
    off_values = -inv_sqrt[rows_rep] * inv_sqrt[g.targets]
    off = _sp.csr_matrix((off_values, g.targets, g.offsets), shape=(n, n))
    lap = _sp.eye(n, format="csr") + off
    return SparseMatrix.from_scipy(lap)


def triangles_per_node(g: Graph) -> list[int]:
    """Number of triangles incident to each node.

    Counts, for each edge (u,v), the common neighbors of u and v via sorted
    adjacency intersection; each triangle is incident to exactly 3 nodes.
    """
    n = g.node_count
    counts = np.zeros(n, dtype=np.int64)
    for u in range(n):
        nbrs_u = g.neighbors(u)
        for v in nbrs_u:
            if v <= u:
                continue
            common = np.intersect1d(nbrs_u, g.neighbors(v), assume_unique=True)
            # every common neighbor w closes triangle {u, v, w}
            for w in common:
                if w > v:
                    counts[u] += 1
                    counts[v] += 1
                    counts[w] += 1
    return counts.tolist()

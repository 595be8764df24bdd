"""Whole-graph embeddings: two spectral fingerprints and one factorization
over subtree-pattern string features.

All three estimators consume a :class:`GraphCorpus` and emit one embedding
row per graph, in corpus order.  Fingerprints depend only on the spectrum of
the normalized Laplacian, so they are invariant under node relabeling; the
string-feature model is invariant because its per-graph feature multiset is.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import sparse as _sp

from .errors import (
    DisconnectedGraph,
    EmptyCorpus,
    GraphTooLarge,
    IncompleteFeatureMap,
    NotFitted,
)
from .graph_core import Graph, RandomSource, SparseMatrix, validate_graph
from .linalg import DENSE_SIZE_CAP, eigvals_symmetric, randomized_svd

__all__ = [
    "GraphCorpus",
    "WlFeatureSet",
    "SfModel",
    "NetLsdModel",
    "WlSvdModel",
    "wl_features",
    "wl_svd_fit",
    "sf_fit",
    "netlsd_fit",
]


@dataclass(frozen=True)
class GraphCorpus:
    """Ordered list of graphs with optional per-node string features and
    optional integer labels.

    ``features[i]`` is either None (models fall back to degree strings) or a
    map covering every node of ``graphs[i]``.
    """

    graphs: list
    features: list | None = None
    labels: list | None = None

    def __post_init__(self) -> None:
        if self.features is not None and len(self.features) != len(self.graphs):
            raise IncompleteFeatureMap("one feature map (or None) required per graph")
        if self.labels is not None and len(self.labels) != len(self.graphs):
            raise EmptyCorpus("labels, when given, must match the corpus length")

    def __len__(self) -> int:
        return len(self.graphs)


@dataclass(frozen=True)
class WlFeatureSet:
    """Multiset of subtree-pattern strings from all refinement rounds.

    Cardinality is node_count * (iterations + 1): one label per node per
    round, each prefixed with its round index so rounds never collide.
    """

    counts: Counter
    iterations: int
    node_count: int


def _hash_label(own: str, neighbor_labels: list) -> str:
    payload = own + "|" + ",".join(sorted(neighbor_labels))
    return hashlib.blake2b(payload.encode("utf-8"), digest_size=8).hexdigest()


def wl_features(g: Graph, features: dict | None, iterations: int) -> WlFeatureSet:
    """Iterated neighborhood-refinement string features.

    Round 0 labels are the provided per-node strings, or the decimal degree
    when no map is given.  Each later round hashes a node's own label
    together with its sorted neighbor labels into a stable 64-bit hex
    string.  All rounds contribute to the returned multiset.
    """
    n = g.node_count
    if features is not None:
        missing = [v for v in range(n) if v not in features]
        if missing:
            raise IncompleteFeatureMap(f"feature map missing node {missing[0]}")
        labels = [str(features[v]) for v in range(n)]
    else:
        labels = [str(g.degree(v)) for v in range(n)]
    counts: Counter = Counter()
    for v in range(n):
        counts[f"0:{labels[v]}"] += 1
    for r in range(1, iterations + 1):
        new_labels = [
            _hash_label(labels[v], [labels[u] for u in g.neighbors(v)])
            for v in range(n)
        ]
        labels = new_labels
        for v in range(n):
            counts[f"{r}:{labels[v]}"] += 1
    return WlFeatureSet(counts=counts, iterations=iterations, node_count=n)


def _require_corpus(corpus: GraphCorpus) -> None:
    if len(corpus) == 0:
        raise EmptyCorpus("corpus contains no graphs")
    for i, g in enumerate(corpus.graphs):
        if not validate_graph(g).is_connected:
            raise DisconnectedGraph(f"graph {i} is not connected")


def _require_dense_cap(corpus: GraphCorpus) -> None:
    for i, g in enumerate(corpus.graphs):
        if g.node_count > DENSE_SIZE_CAP:
            raise GraphTooLarge(
                f"graph {i} has {g.node_count} nodes, cap is {DENSE_SIZE_CAP}"
            )


def _normalized_laplacian_dense(g: Graph) -> np.ndarray:
    n = g.node_count
    deg = g.degrees.astype(np.float64)
    a = g.adjacency_scipy().toarray()
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = -(inv_sqrt[:, None] * a) * inv_sqrt[None, :]
    np.fill_diagonal(lap, 1.0)
    return lap


class _CorpusEstimator:
    _embedding: np.ndarray | None = None

    def get_embedding(self) -> np.ndarray:
        if self._embedding is None:
            raise NotFitted("call fit before get_embedding")
        return self._embedding.copy()


class SfModel(_CorpusEstimator):
    """Spectral fingerprint: the smallest normalized-Laplacian eigenvalues,
    ascending, zero-padded on the right for graphs smaller than the width."""

    def __init__(self, dimensions: int = 32):
        self.dimensions = dimensions
        self._embedding = None

    def fit(self, corpus: GraphCorpus) -> "SfModel":
        sf_fit(corpus, self)
        return self


def sf_fit(corpus: GraphCorpus, model: SfModel) -> np.ndarray:
    _require_corpus(corpus)
    _require_dense_cap(corpus)
    d = model.dimensions
    rows = np.zeros((len(corpus), d))
    for i, g in enumerate(corpus.graphs):
        vals = eigvals_symmetric(_normalized_laplacian_dense(g))
        take = min(d, len(vals))
        rows[i, :take] = vals[:take]
    model._embedding = rows
    return rows.copy()


class NetLsdModel(_CorpusEstimator):
    """Heat-trace fingerprint: sum of exp(-t * eigenvalue) over the
    normalized-Laplacian spectrum, evaluated on a fixed grid of 250 time
    points log-spaced on [1e-2, 1e2]."""

    def __init__(self):
        self.time_points = np.logspace(-2.0, 2.0, 250)
        self.time_points.setflags(write=False)
        self._embedding = None

    def fit(self, corpus: GraphCorpus) -> "NetLsdModel":
        netlsd_fit(corpus, self)
        return self


def netlsd_fit(corpus: GraphCorpus, model: NetLsdModel) -> np.ndarray:
    _require_corpus(corpus)
    _require_dense_cap(corpus)
    t = model.time_points
    rows = np.zeros((len(corpus), len(t)))
    for i, g in enumerate(corpus.graphs):
        vals = eigvals_symmetric(_normalized_laplacian_dense(g))
        rows[i] = np.exp(-np.outer(t, vals)).sum(axis=1)
    model._embedding = rows
    return rows.copy()


class WlSvdModel(_CorpusEstimator):
    """Factorized subtree-pattern features.

    Builds the graphs-by-features count matrix over all refinement rounds,
    reweights by TF-IDF (natural log), and truncates by randomized SVD.  The
    embedding is U scaled by the singular values, zero-padded on the right
    when the matrix admits fewer than ``dimensions`` components.
    """

    def __init__(self, wl_iterations: int = 2, dimensions: int = 128, seed: int = 42):
        self.wl_iterations = wl_iterations
        self.dimensions = dimensions
        self.seed = seed
        self._embedding = None

    def fit(self, corpus: GraphCorpus) -> "WlSvdModel":
        wl_svd_fit(corpus, self)
        return self


def wl_svd_fit(corpus: GraphCorpus, model: WlSvdModel) -> np.ndarray:
    _require_corpus(corpus)
    n_graphs = len(corpus)
    feature_sets = []
    for i, g in enumerate(corpus.graphs):
        fmap = corpus.features[i] if corpus.features is not None else None
        feature_sets.append(wl_features(g, fmap, model.wl_iterations).counts)

    vocabulary = sorted(set().union(*[set(c) for c in feature_sets]))
    index = {feat: j for j, feat in enumerate(vocabulary)}
    rows, cols, vals = [], [], []
    df = np.zeros(len(vocabulary))
    for i, counts in enumerate(feature_sets):
        for feat, cnt in counts.items():
            j = index[feat]
            rows.append(i)
            cols.append(j)
            vals.append(float(cnt))
            df[j] += 1.0
    tf = _sp.csr_matrix(
        (vals, (rows, cols)), shape=(n_graphs, len(vocabulary))
    )
    idf = np.log(n_graphs / df)
    weighted = tf.multiply(idf[None, :]).tocsr()

    k = min(model.dimensions, n_graphs, len(vocabulary))
    svd = randomized_svd(
        SparseMatrix.from_scipy(weighted), k, RandomSource(model.seed, 0)
    )
    embedding = np.zeros((n_graphs, model.dimensions))
    embedding[:, :k] = svd.U * svd.singular_values
    model._embedding = embedding
    return embedding.copy()

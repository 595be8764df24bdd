"""Neighborhood-preserving node embeddings.

Three estimators built from two shared blocks:

* :func:`generate_walks`: truncated uniform random walks, one independent
  random stream per walk so results never depend on execution order.
* :func:`sgns_train`: skip-gram with negative sampling over a walk corpus.

``DeepWalkModel`` trains on all window co-occurrences, ``WalkletsModel``
trains one skip-gram per exact offset scale and concatenates, and
``NetMfModel`` factorizes the log-scaled random-walk proximity matrix
directly.  Every fit is a pure function of (graph, hyperparameters, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse as _sp

from .errors import (
    DisconnectedGraph,
    EmptyCorpus,
    GraphTooLarge,
    IsolatedNode,
    NotFitted,
    RankTooLarge,
)
from .graph_core import Graph, RandomSource, SparseMatrix, validate_graph
from .linalg import randomized_svd

__all__ = [
    "WalkCorpus",
    "SkipGramParams",
    "DeepWalkModel",
    "WalkletsModel",
    "NetMfModel",
    "generate_walks",
    "sgns_train",
    "sgns_pair_loss",
    "sgns_pair_gradients",
    "deepwalk_fit",
    "walklets_fit",
    "netmf_fit",
    "NETMF_NODE_CAP",
]

NETMF_NODE_CAP = 2 ** 13

_BATCH_CAP = 1024
_STALE_HITS = 16.0  # max expected updates per node vector within one batch
_WALK_BLOCK = 2048  # walks per training block; bounds pair-buffer memory


@dataclass(frozen=True)
class WalkCorpus:
    """Random-walk corpus: ``walks[w, t]`` is step t of walk w."""

    walks: np.ndarray
    node_count: int

    @property
    def walk_length(self) -> int:
        return self.walks.shape[1]


@dataclass(frozen=True)
class SkipGramParams:
    """Hyperparameters of the skip-gram trainer."""

    dimensions: int = 128
    window_size: int = 5
    negative_samples: int = 5
    epochs: int = 1
    learning_rate: float = 0.025
    seed: int = 42


def _require_connected(g: Graph) -> None:
    if not validate_graph(g).is_connected:
        raise DisconnectedGraph("graph is not connected")
    if g.edge_count == 0:
        # a single isolated node is "connected" but walkless and degreeless
        raise IsolatedNode("graph has no edges")


# ---------------------------------------------------------------------------
# walk generation
# ---------------------------------------------------------------------------

def generate_walks(
    g: Graph, walk_number: int, walk_length: int, rng: RandomSource
) -> WalkCorpus:
    """``walk_number`` uniform random walks of ``walk_length`` nodes from
    every node.

    Walk w starts at node ``w % n`` and consumes only ``rng.child(w)``, so
    any execution order (or parallel fan-out) reproduces the same corpus.
    All walks advance together: one vectorized neighbor lookup per step.
    """
    _require_connected(g)
    n = g.node_count
    total = walk_number * n
    steps = walk_length - 1
    uniforms = np.empty((total, steps)) if steps > 0 else np.empty((total, 0))
    for w in range(total):
        uniforms[w] = rng.child(w).generator().random(steps)
    walks = np.empty((total, walk_length), dtype=np.int64)
    current = np.tile(np.arange(n, dtype=np.int64), walk_number)
    walks[:, 0] = current
    offsets, targets = g.offsets, g.targets
    degrees = np.diff(offsets)
    for t in range(steps):
        jump = (uniforms[:, t] * degrees[current]).astype(np.int64)
        current = targets[offsets[current] + jump]
        walks[:, t + 1] = current
    walks.setflags(write=False)
    return WalkCorpus(walks=walks, node_count=n)


# ---------------------------------------------------------------------------
# skip-gram with negative sampling
# ---------------------------------------------------------------------------

def _stable_sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def sgns_pair_loss(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> float:
    """Loss of one (center, context) pair with a block of negative vectors:
    -log s(u.v) - sum_k log s(-u.w_k).

    Written as logaddexp so saturated scores give their (large, finite)
    true loss instead of overflowing through log(0).
    """
    pos = float(center @ context)
    neg = negatives @ center
    return float(np.logaddexp(0.0, -pos) + np.logaddexp(0.0, neg).sum())


def sgns_pair_gradients(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`sgns_pair_loss` w.r.t. all three inputs."""
    s_pos = _stable_sigmoid(np.array([float(center @ context)]))[0]
    s_neg = _stable_sigmoid(negatives @ center)
    g_center = (s_pos - 1.0) * context + s_neg @ negatives
    g_context = (s_pos - 1.0) * center
    g_negatives = s_neg[:, None] * center[None, :]
    return g_center, g_context, g_negatives


@lru_cache(maxsize=32)
def _window_template(length: int, window: int) -> tuple[np.ndarray, np.ndarray]:
    """(center, context) position pairs for one walk: every ordered pair at
    distance 1..window, centers left to right."""
    centers, contexts = [], []
    for i in range(length):
        lo = max(0, i - window)
        hi = min(length - 1, i + window)
        for j in range(lo, hi + 1):
            if j != i:
                centers.append(i)
                contexts.append(j)
    return np.array(centers, dtype=np.int64), np.array(contexts, dtype=np.int64)


def _pair_blocks_window(walks: np.ndarray, window: int):
    """Yield (centers, contexts) arrays blockwise, in walk-major order."""
    c_pos, x_pos = _window_template(walks.shape[1], window)
    for start in range(0, walks.shape[0], _WALK_BLOCK):
        block = walks[start: start + _WALK_BLOCK]
        yield block[:, c_pos].ravel(), block[:, x_pos].ravel()


def _pair_blocks_offset(walks: np.ndarray, offset: int):
    """Yield (centers, contexts) for positions exactly ``offset`` apart."""
    length = walks.shape[1]
    if offset >= length:
        return
    for start in range(0, walks.shape[0], _WALK_BLOCK):
        block = walks[start: start + _WALK_BLOCK]
        yield block[:, : length - offset].ravel(), block[:, offset:].ravel()


def _count_frequencies(blocks, n: int) -> tuple[np.ndarray, np.ndarray]:
    center_freq = np.zeros(n, dtype=np.int64)
    context_freq = np.zeros(n, dtype=np.int64)
    for centers, contexts in blocks:
        center_freq += np.bincount(centers, minlength=n)
        context_freq += np.bincount(contexts, minlength=n)
    return center_freq, context_freq


def _batch_size(
    center_freq: np.ndarray,
    context_freq: np.ndarray,
    p_noise: np.ndarray,
    total: int,
    neg: int,
) -> int:
    """Largest batch that keeps every node's expected update count per batch
    below a tested stability bound.

    Batched SGD computes all gradients of a batch from one parameter
    snapshot; a node hit many times inside a batch absorbs that many stale
    steps at once, which diverges on hub-heavy corpora.  Scaling the batch
    by the hottest node's pair share (center + context + expected negative
    draws) keeps the dynamics sequential-like on skewed graphs while
    retaining large batches on near-regular ones.
    """
    p_eff = (center_freq + context_freq) / float(total) + neg * p_noise
    return int(np.clip(np.floor(_STALE_HITS / float(p_eff.max())), 1, _BATCH_CAP))


def _train_pairs(
    blocks_factory,
    n: int,
    params: SkipGramParams,
    total_pairs: int,
) -> np.ndarray:
    """Minibatch SGD over a stream of (center, context) pairs.

    The learning rate decays linearly from ``learning_rate`` at the first
    pair to 1/100th of it at the last pair across all epochs; each pair in a
    batch is weighted by its own rate, so the decay is exact despite
    batching.  Negatives are drawn per pair from the empirical context
    distribution raised to 0.75.  Everything is single-threaded and seeded.
    """
    if total_pairs == 0:
        raise EmptyCorpus("no training pairs")
    d = params.dimensions
    gen = RandomSource(params.seed, 0).generator()
    u = (gen.random((n, d)) - 0.5) / d  # centers
    v = np.zeros((n, d))  # contexts

    center_freq, context_freq = _count_frequencies(blocks_factory(), n)
    noise = context_freq.astype(np.float64) ** 0.75
    cum = np.cumsum(noise)
    p_noise = noise / cum[-1]
    cum /= cum[-1]
    neg = params.negative_samples
    batch = _batch_size(center_freq, context_freq, p_noise, total_pairs, neg)

    alpha0 = params.learning_rate
    alpha_end = alpha0 / 100.0
    grand_total = total_pairs * params.epochs
    span = max(grand_total - 1, 1)

    done = 0
    for _ in range(params.epochs):
        for centers, contexts in blocks_factory():
            for lo in range(0, len(centers), batch):
                cb = centers[lo: lo + batch]
                xb = contexts[lo: lo + batch]
                b = len(cb)
                alphas = alpha0 + (alpha_end - alpha0) * (
                    (done + np.arange(b)) / span
                )
                done += b
                negs = np.searchsorted(cum, gen.random((b, neg)))
                uc = u[cb]  # b x d
                vx = v[xb]
                vn = v[negs]  # b x neg x d
                s_pos = _stable_sigmoid(np.einsum("bd,bd->b", uc, vx))
                s_neg = _stable_sigmoid(np.einsum("bkd,bd->bk", vn, uc))
                coef_pos = alphas * (1.0 - s_pos)
                coef_neg = -alphas[:, None] * s_neg
                grad_u = coef_pos[:, None] * vx + np.einsum("bk,bkd->bd", coef_neg, vn)
                # rows repeat within a batch; scatter-add via a sparse
                # selection matrix keeps accumulation exact and fast
                rows_u = _sp.csr_matrix(
                    (np.ones(b), (cb, np.arange(b))), shape=(n, b)
                )
                u += rows_u @ grad_u
                # context updates: positive rows xb get coef_pos * uc,
                # negative rows negs get coef_neg * uc
                flat_rows = np.concatenate([xb, negs.ravel()])
                flat_grads = np.concatenate(
                    [coef_pos[:, None] * uc, (coef_neg[:, :, None] * uc[:, None, :]).reshape(-1, d)]
                )
                rows_v = _sp.csr_matrix(
                    (np.ones(len(flat_rows)), (flat_rows, np.arange(len(flat_rows)))),
                    shape=(n, len(flat_rows)),
                )
                v += rows_v @ flat_grads
    return u


def sgns_train(corpus: WalkCorpus, params: SkipGramParams) -> np.ndarray:
    """Train skip-gram with negative sampling on all window co-occurrences.

    Returns the center-vector table, one row per node.
    """
    if corpus.walks.size == 0:
        raise EmptyCorpus("empty walk corpus")
    walks = corpus.walks
    c_pos, _ = _window_template(walks.shape[1], params.window_size)
    total = walks.shape[0] * len(c_pos)
    if total == 0:
        raise EmptyCorpus("window produces no pairs")
    return _train_pairs(
        lambda: _pair_blocks_window(walks, params.window_size),
        corpus.node_count,
        params,
        total,
    )


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

class _EmbeddingEstimator:
    """Shared lifecycle: fit stores the embedding, getter guards on it."""

    _embedding: np.ndarray | None = None

    def get_embedding(self) -> np.ndarray:
        if self._embedding is None:
            raise NotFitted("call fit before get_embedding")
        return self._embedding.copy()


class DeepWalkModel(_EmbeddingEstimator):
    """Truncated random walks + skip-gram over window co-occurrences."""

    def __init__(
        self,
        walk_number: int = 10,
        walk_length: int = 80,
        dimensions: int = 128,
        window_size: int = 5,
        negative_samples: int = 5,
        epochs: int = 1,
        learning_rate: float = 0.025,
        seed: int = 42,
    ):
        self.walk_number = walk_number
        self.walk_length = walk_length
        self.dimensions = dimensions
        self.window_size = window_size
        self.negative_samples = negative_samples
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self._embedding = None

    def fit(self, g: Graph) -> "DeepWalkModel":
        deepwalk_fit(g, self)
        return self


def deepwalk_fit(g: Graph, model: DeepWalkModel) -> np.ndarray:
    _require_connected(g)
    corpus = generate_walks(
        g, model.walk_number, model.walk_length, RandomSource(model.seed, 0)
    )
    params = SkipGramParams(
        dimensions=model.dimensions,
        window_size=model.window_size,
        negative_samples=model.negative_samples,
        epochs=model.epochs,
        learning_rate=model.learning_rate,
        seed=model.seed,
    )
    embedding = sgns_train(corpus, params)
    model._embedding = embedding
    return embedding.copy()


class WalkletsModel(_EmbeddingEstimator):
    """Multi-scale skip-gram: one model per exact walk offset 1..window_size,
    embeddings concatenated in scale order (width = window_size * dimensions)."""

    def __init__(
        self,
        walk_number: int = 10,
        walk_length: int = 80,
        dimensions: int = 32,
        window_size: int = 4,
        negative_samples: int = 5,
        epochs: int = 1,
        learning_rate: float = 0.025,
        seed: int = 42,
    ):
        self.walk_number = walk_number
        self.walk_length = walk_length
        self.dimensions = dimensions
        self.window_size = window_size
        self.negative_samples = negative_samples
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self._embedding = None

    def fit(self, g: Graph) -> "WalkletsModel":
        walklets_fit(g, self)
        return self


def walklets_fit(g: Graph, model: WalkletsModel) -> np.ndarray:
    _require_connected(g)
    corpus = generate_walks(
        g, model.walk_number, model.walk_length, RandomSource(model.seed, 0)
    )
    walks = corpus.walks
    parts = []
    for scale in range(1, model.window_size + 1):
        if scale >= model.walk_length:
            raise EmptyCorpus(
                f"scale {scale} needs walks longer than {model.walk_length}"
            )
        total = walks.shape[0] * (model.walk_length - scale)
        params = SkipGramParams(
            dimensions=model.dimensions,
            window_size=model.window_size,
            negative_samples=model.negative_samples,
            epochs=model.epochs,
            learning_rate=model.learning_rate,
            seed=model.seed + scale,
        )
        parts.append(
            _train_pairs(
                lambda s=scale: _pair_blocks_offset(walks, s),
                corpus.node_count,
                params,
                total,
            )
        )
    embedding = np.concatenate(parts, axis=1)
    model._embedding = embedding
    return embedding.copy()


class NetMfModel(_EmbeddingEstimator):
    """Explicit factorization of the log-scaled mean random-walk proximity.

    The proximity is vol(G)/(negatives*order) * (sum of transition-matrix
    powers 1..order) * D^-1; entries at or below 1 vanish under the
    elementwise log-clamp, so the matrix stays sparse exactly.  The
    embedding is U * sqrt(singular values) from the truncated SVD.
    """

    def __init__(
        self,
        dimensions: int = 32,
        order: int = 2,
        negatives: int = 1,
        seed: int = 42,
    ):
        self.dimensions = dimensions
        self.order = order
        self.negatives = negatives
        self.seed = seed
        self._embedding = None

    def fit(self, g: Graph) -> "NetMfModel":
        netmf_fit(g, self)
        return self


def netmf_fit(g: Graph, model: NetMfModel) -> np.ndarray:
    _require_connected(g)
    n = g.node_count
    if n > NETMF_NODE_CAP:
        raise GraphTooLarge(f"netmf is capped at {NETMF_NODE_CAP} nodes, got {n}")
    if model.dimensions < 1 or model.dimensions > n:
        raise RankTooLarge(f"dimensions {model.dimensions} not in 1..{n}")
    deg = g.degrees.astype(np.float64)
    vol = float(deg.sum())
    d_inv = _sp.diags(1.0 / deg)
    p = d_inv @ g.adjacency_scipy()
    power = p.copy()
    acc = p.copy()
    for _ in range(2, model.order + 1):
        power = power @ p
        acc = acc + power
    m = (vol / (model.negatives * model.order)) * (acc @ d_inv)
    m = _sp.csr_matrix(m)
    # log of entries clamped to >= 1: entries <= 1 map to exactly 0,
    # so sparsity is preserved without approximation
    m.data = np.log(np.maximum(m.data, 1.0))
    m.eliminate_zeros()
    svd = randomized_svd(
        SparseMatrix.from_scipy(m), model.dimensions, RandomSource(model.seed, 0)
    )
    embedding = svd.U * np.sqrt(svd.singular_values)
    model._embedding = embedding
    return embedding.copy()

"""Wire formats: edge-list text, membership JSON, embedding CSV, corpus
JSONL, and label CSV.

Writers are deterministic byte-for-byte: fixed orderings, 17-significant-
digit floats (lossless float64 round-trip), and a trailing newline.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import EmptyCorpus, InputContractError
from .graph_core import Graph, build_graph
from .graph_embedding import GraphCorpus

__all__ = [
    "read_edge_list",
    "write_edge_list",
    "read_membership",
    "write_membership",
    "read_embedding_csv",
    "write_embedding_csv",
    "read_labels_csv",
    "write_labels_csv",
    "read_corpus_jsonl",
    "format_float",
]


def format_float(x: float) -> str:
    return f"{x:.17g}"


# --- edge lists ---

def read_edge_list(path: str) -> Graph:
    """Parse `u,v` lines into a graph.

    Lines starting with ``#`` are comments; a ``# nodes=N`` header pins the
    node count, otherwise it is inferred as 1 + max endpoint.
    """
    edges = []
    declared = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("nodes="):
                    try:
                        declared = int(body[len("nodes="):])
                    except ValueError:
                        raise InputContractError(
                            f"{path}:{lineno}: bad node-count header: {line}"
                        )
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise InputContractError(
                    f"{path}:{lineno}: expected 'u,v', got: {line}"
                )
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise InputContractError(
                    f"{path}:{lineno}: endpoints must be integers: {line}"
                )
            edges.append((u, v))
    if declared is None:
        if not edges:
            raise InputContractError(f"{path}: no edges and no node-count header")
        declared = 1 + max(max(u, v) for u, v in edges)
    return build_graph(declared, edges)


def write_edge_list(g: Graph, path: str) -> None:
    lines = [f"# nodes={g.node_count}"]
    lines.extend(f"{u},{v}" for u, v in g.edges())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# --- memberships ---

def read_membership(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        return {int(k): int(v) for k, v in raw.items()}
    except (AttributeError, ValueError, TypeError):
        raise InputContractError(f"{path}: expected an object of node->cluster ids")


def write_membership(memberships: dict, path: str) -> None:
    ordered = {str(k): int(memberships[k]) for k in sorted(memberships)}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(ordered) + "\n")


# --- embeddings and labels ---

def read_embedding_csv(path: str) -> np.ndarray:
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            vals = [float(tok) for tok in line.split(",")]
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise InputContractError(
                    f"{path}:{lineno}: ragged row of width {len(vals)} != {width}"
                )
            rows.append(vals)
    if not rows:
        raise InputContractError(f"{path}: empty embedding file")
    return np.array(rows, dtype=np.float64)


def write_embedding_csv(matrix: np.ndarray, path: str) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        for row in matrix:
            fh.write(",".join(format_float(x) for x in row) + "\n")


def read_labels_csv(path: str) -> np.ndarray:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise InputContractError(f"{path}:{lineno}: expected an integer label")
    if not values:
        raise InputContractError(f"{path}: empty label file")
    return np.array(values, dtype=np.int64)


def write_labels_csv(labels, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(str(int(x)) for x in labels) + "\n")


# --- graph corpora ---

def read_corpus_jsonl(path: str) -> GraphCorpus:
    """One JSON object per line: ``edges`` (required), ``features`` and
    ``label`` (optional).  Node count is 1 + max endpoint."""
    graphs, features, labels = [], [], []
    any_features = False
    any_labels = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputContractError(f"{path}:{lineno}: invalid JSON: {exc}")
            if not isinstance(obj, dict) or "edges" not in obj:
                raise InputContractError(f"{path}:{lineno}: missing 'edges'")
            edges = obj["edges"]
            if not isinstance(edges, list) or not edges:
                raise InputContractError(f"{path}:{lineno}: 'edges' must be a non-empty list")
            try:
                pairs = [(int(u), int(v)) for u, v in edges]
            except (TypeError, ValueError):
                raise InputContractError(f"{path}:{lineno}: malformed edge pair")
            n = 1 + max(max(u, v) for u, v in pairs)
            graphs.append(build_graph(n, pairs))
            fmap = obj.get("features")
            if fmap is not None:
                any_features = True
                fmap = {int(k): str(v) for k, v in fmap.items()}
            features.append(fmap)
            label = obj.get("label")
            if label is not None:
                any_labels = True
                label = int(label)
            labels.append(label)
    if not graphs:
        raise EmptyCorpus(f"{path}: no corpus lines")
    if any_labels and any(l is None for l in labels):
        raise InputContractError(f"{path}: labels must be present on every line or none")
    return GraphCorpus(
        graphs=graphs,
        features=features if any_features else None,
        labels=labels if any_labels else None,
    )

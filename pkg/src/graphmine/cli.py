"""Command-line pipelines over the library's estimators and file formats.

Commands: ``generate``, ``cluster``, ``embed-nodes``, ``embed-graphs``,
``eval nmi|modularity|classify``, ``bench``.  Results go to ``--out`` when
given, otherwise to stdout; diagnostics go to stderr.  Exit codes: 0 on
success, 2 for input or parameter errors, 3 when a graph violates an
algorithm's structural contract (e.g. disconnected input).

Every command is deterministic for fixed flags: outputs are byte-identical
across reruns, except for the measured wall-clock column of ``bench``.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import io as formats
from .community import (
    LabelPropagationModel,
    ScdModel,
    SymNmfModel,
    modularity,
)
from .errors import GraphContractError, GraphMineError
from .evaluation import (
    auc,
    nmi,
    softmax_fit,
    softmax_predict,
    train_test_split,
)
from .graph_core import RandomSource, erdos_renyi_gnm
from .graph_embedding import NetLsdModel, SfModel, WlSvdModel
from .node_embedding import DeepWalkModel, NetMfModel, WalkletsModel

__all__ = ["main"]


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _membership_text(memberships: dict) -> str:
    import json

    ordered = {str(k): int(memberships[k]) for k in sorted(memberships)}
    return json.dumps(ordered) + "\n"


def _embedding_text(matrix) -> str:
    return (
        "\n".join(
            ",".join(formats.format_float(x) for x in row) for row in matrix
        )
        + "\n"
    )


# --- command implementations ---

def cmd_generate(args) -> int:
    g = erdos_renyi_gnm(
        args.nodes, args.edges, RandomSource(args.seed, 0), connected=args.connected
    )
    lines = [f"# nodes={g.node_count}"]
    lines.extend(f"{u},{v}" for u, v in g.edges())
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cluster_model(args):
    if args.algo == "label-propagation":
        return LabelPropagationModel(seed=args.seed, max_iterations=args.max_iterations)
    if args.algo == "scd":
        return ScdModel(refinement_rounds=args.refinement_rounds)
    return SymNmfModel(
        dimensions=args.dimensions if args.dimensions is not None else 32,
        iterations=args.iterations,
        tolerance=args.tolerance,
        seed=args.seed,
    )


def cmd_cluster(args) -> int:
    g = formats.read_edge_list(args.graph)
    model = _cluster_model(args)
    model.fit(g)
    _emit(_membership_text(model.get_memberships()), args.out)
    return 0


def _node_model(args):
    if args.algo == "deepwalk":
        return DeepWalkModel(
            walk_number=args.walk_number,
            walk_length=args.walk_length,
            dimensions=args.dimensions if args.dimensions is not None else 128,
            window_size=args.window_size if args.window_size is not None else 5,
            negative_samples=args.negative_samples,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            seed=args.seed,
        )
    if args.algo == "walklets":
        return WalkletsModel(
            walk_number=args.walk_number,
            walk_length=args.walk_length,
            dimensions=args.dimensions if args.dimensions is not None else 32,
            window_size=args.window_size if args.window_size is not None else 4,
            negative_samples=args.negative_samples,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            seed=args.seed,
        )
    return NetMfModel(
        dimensions=args.dimensions if args.dimensions is not None else 32,
        order=args.order,
        negatives=args.negatives,
        seed=args.seed,
    )


def cmd_embed_nodes(args) -> int:
    g = formats.read_edge_list(args.graph)
    model = _node_model(args)
    model.fit(g)
    _emit(_embedding_text(model.get_embedding()), args.out)
    return 0


def _graph_model(args):
    if args.algo == "sf":
        return SfModel(dimensions=args.dimensions if args.dimensions is not None else 32)
    if args.algo == "netlsd":
        return NetLsdModel()
    return WlSvdModel(
        wl_iterations=args.wl_iterations,
        dimensions=args.dimensions if args.dimensions is not None else 128,
        seed=args.seed,
    )


def cmd_embed_graphs(args) -> int:
    corpus = formats.read_corpus_jsonl(args.corpus)
    model = _graph_model(args)
    model.fit(corpus)
    _emit(_embedding_text(model.get_embedding()), args.out)
    return 0


def cmd_eval(args) -> int:
    if args.metric == "nmi":
        a = formats.read_membership(args.a)
        b = formats.read_membership(args.b)
        if set(a) != set(b):
            from .errors import LengthMismatch

            raise LengthMismatch("membership files cover different node sets")
        keys = sorted(a)
        value = nmi([a[k] for k in keys], [b[k] for k in keys])
    elif args.metric == "modularity":
        g = formats.read_edge_list(args.graph)
        mm = formats.read_membership(args.membership)
        value = modularity(g, mm)
    else:  # classify
        x = formats.read_embedding_csv(args.embedding)
        y = formats.read_labels_csv(args.labels)
        if x.shape[0] != y.shape[0]:
            from .errors import DimensionMismatch

            raise DimensionMismatch(
                f"{x.shape[0]} embedding rows vs {y.shape[0]} labels"
            )
        split = train_test_split(x.shape[0], ratio=args.ratio, seed=args.seed)
        clf = softmax_fit(x[split.train], y[split.train])
        value = auc(y[split.test], softmax_predict(clf, x[split.test]))
    _emit(formats.format_float(value) + "\n", args.out)
    return 0


_BENCH_CLUSTER = {
    "label-propagation": lambda seed: LabelPropagationModel(seed=seed),
    "scd": lambda seed: ScdModel(),
    "symnmf": lambda seed: SymNmfModel(seed=seed),
}
_BENCH_EMBED = {
    "deepwalk": lambda seed: DeepWalkModel(seed=seed),
    "walklets": lambda seed: WalkletsModel(seed=seed),
    "netmf": lambda seed: NetMfModel(seed=seed),
}


def cmd_bench(args) -> int:
    from .errors import InputContractError

    sizes = _parse_int_list(args.sizes, "sizes")
    if sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise InputContractError("sizes must be strictly ascending")
    degrees = _parse_int_list(args.degree, "degree")
    if args.repeats < 1:
        raise InputContractError("repeats must be >= 1")
    table = _BENCH_CLUSTER if args.task == "cluster" else _BENCH_EMBED
    if args.algo not in table:
        raise InputContractError(
            f"algo {args.algo!r} not valid for task {args.task!r}"
        )
    make = table[args.algo]
    rows = ["algo,n,m,repeat,seconds"]
    config = 0
    for degree in degrees:
        for n in sizes:
            if (n * degree) % 2 != 0:
                raise InputContractError(
                    f"n*degree must be even, got n={n} degree={degree}"
                )
            m = n * degree // 2
            g = erdos_renyi_gnm(
                n, m, RandomSource(args.seed, config), connected=True
            )
            config += 1
            times = []
            for rep in range(args.repeats):
                model = make(args.seed)
                start = time.perf_counter()
                model.fit(g)
                elapsed = time.perf_counter() - start
                times.append(elapsed)
                rows.append(
                    f"{args.algo},{n},{m},{rep},{formats.format_float(elapsed)}"
                )
            mean = sum(times) / len(times)
            rows.append(f"{args.algo},{n},{m},mean,{formats.format_float(mean)}")
    _emit("\n".join(rows) + "\n", args.out)
    return 0


def _parse_int_list(text: str, name: str) -> list:
    from .errors import InputContractError

    try:
        values = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise InputContractError(f"--{name} must be a comma-separated integer list")
    if not values or any(v < 1 for v in values):
        raise InputContractError(f"--{name} entries must be positive integers")
    return values


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmine",
        description="Graph clustering, node and whole-graph embedding, "
        "evaluation, and benchmarking with reproducible seeds.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="reserved; all kernels currently run single-threaded (value 1 "
        "is the deterministic reference path)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a uniform random graph edge list")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--connected", action="store_true",
                   help="retry until the sample is connected (up to 100 draws)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("cluster", help="detect communities, write membership JSON")
    p.add_argument("--algo", required=True,
                   choices=["label-propagation", "scd", "symnmf"])
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-iterations", type=int, default=100,
                   help="label-propagation round cap")
    p.add_argument("--refinement-rounds", type=int, default=25,
                   help="scd hill-climbing passes")
    p.add_argument("--dimensions", type=int, default=None,
                   help="symnmf factor count (default 32)")
    p.add_argument("--iterations", type=int, default=200,
                   help="symnmf update cap")
    p.add_argument("--tolerance", type=float, default=1e-6,
                   help="symnmf relative loss-change stop")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("embed-nodes", help="embed nodes, write embedding CSV")
    p.add_argument("--algo", required=True, choices=["deepwalk", "walklets", "netmf"])
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dimensions", type=int, default=None,
                   help="embedding width (walklets: per scale; "
                   "defaults: deepwalk 128, walklets 32, netmf 32)")
    p.add_argument("--walk-number", type=int, default=10)
    p.add_argument("--walk-length", type=int, default=80)
    p.add_argument("--window-size", type=int, default=None,
                   help="deepwalk window (default 5) / walklets scales (default 4)")
    p.add_argument("--negative-samples", type=int, default=5)
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--order", type=int, default=2, help="netmf proximity order")
    p.add_argument("--negatives", type=int, default=1, help="netmf negative factor")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_embed_nodes)

    p = sub.add_parser("embed-graphs", help="embed a graph corpus, write CSV")
    p.add_argument("--algo", required=True, choices=["sf", "netlsd", "wl-svd"])
    p.add_argument("--corpus", required=True, help="JSONL corpus file")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dimensions", type=int, default=None,
                   help="sf default 32, wl-svd default 128 (netlsd is fixed at 250)")
    p.add_argument("--wl-iterations", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_embed_graphs)

    p = sub.add_parser("eval", help="compute a metric, print it as a decimal")
    esub = p.add_subparsers(dest="metric", required=True)

    e = esub.add_parser("nmi", help="agreement of two membership files")
    e.add_argument("--a", required=True)
    e.add_argument("--b", required=True)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_eval)

    e = esub.add_parser("modularity", help="partition quality on a graph")
    e.add_argument("--graph", required=True)
    e.add_argument("--membership", required=True)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_eval)

    e = esub.add_parser("classify",
                        help="split/softmax/AUC pipeline on an embedding")
    e.add_argument("--embedding", required=True)
    e.add_argument("--labels", required=True)
    e.add_argument("--ratio", type=float, default=0.8)
    e.add_argument("--seed", type=int, default=42)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="wall-clock fits on connected G(n, degree*n/2)")
    p.add_argument("--task", required=True, choices=["cluster", "embed-nodes"])
    p.add_argument("--algo", required=True)
    p.add_argument("--sizes", required=True,
                   help="comma-separated ascending node counts")
    p.add_argument("--degree", default="10",
                   help="comma-separated mean degrees (default 10; "
                   "try 5,10,20,40 for a densification sweep)")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except GraphMineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end acceptance checks.

Each test prints one ``ACCEPTANCE <k>: PASS/FAIL`` line (visible under
``pytest -s``; shown by pytest on failure regardless) and then asserts, so
a red run still reports every check it reached.
"""

import json
import statistics
import subprocess
import sys
import time

import numpy as np

from graphmine import (
    DeepWalkModel,
    GraphCorpus,
    LabelPropagationModel,
    NetLsdModel,
    NetMfModel,
    RandomSource,
    SfModel,
    SymNmfModel,
    WalkletsModel,
    WlSvdModel,
    auc,
    eigvals_symmetric,
    erdos_renyi_gnm,
    generate_walks,
    modularity,
    nmi,
    sgns_pair_gradients,
    sgns_pair_loss,
    softmax_fit,
    softmax_loss_and_gradient,
    softmax_predict,
    train_test_split,
    write_labels_csv,
)
from graphmine.cli import main as cli_main

import builders
import oracles
import property_suites


def _report(number, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number}: {status} {detail}".rstrip())
    assert ok, f"acceptance {number} failed: {detail}"


def test_acceptance_01_modularity_matches_enumeration():
    start = time.perf_counter()
    worst = 0.0
    for case in range(100):
        gen = RandomSource(900 + case, 0).generator()
        n = int(gen.integers(3, 13))
        max_m = n * (n - 1) // 2
        m = int(gen.integers(1, max_m + 1))
        g = erdos_renyi_gnm(n, m, RandomSource(900, case))
        labels = gen.integers(0, int(gen.integers(1, n + 1)), size=n)
        got = modularity(g, {v: int(labels[v]) for v in range(n)})
        want = oracles.modularity_reference(g.adjacency_scipy().toarray(), labels)
        worst = max(worst, abs(got - want))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 5.0
    _report(1, ok, f"worst gap {worst:.3e} over 100 graphs in {elapsed:.2f}s")


def test_acceptance_02_netmf_singular_values_match_dense_oracle():
    start = time.perf_counter()
    worst = 0.0
    for s in range(20):
        g = erdos_renyi_gnm(10, 20, RandomSource(s, 0), connected=True)
        model = NetMfModel(dimensions=8, order=2, negatives=1, seed=100 + s)
        emb = model.fit(g).get_embedding()
        got = np.sort(np.einsum("ij,ij->j", emb, emb))[::-1]
        dense = oracles.walk_proximity_reference(g, 2, 1)
        want = np.linalg.svd(dense, compute_uv=False)[:8]
        worst = max(worst, float(np.max(np.abs(got - want) / want)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 10.0
    _report(2, ok, f"worst relative gap {worst:.3e} over 20 graphs in {elapsed:.2f}s")


def test_acceptance_03_path_spectra_and_trace_identities():
    worst_eig = 0.0
    for n in range(2, 7):
        g = builders.path_graph(n)
        a = g.adjacency_scipy().toarray()
        laplacian = np.diag(a.sum(axis=1)) - a
        got = eigvals_symmetric(laplacian)
        want = np.sort(2.0 - 2.0 * np.cos(np.pi * np.arange(n) / n))
        worst_eig = max(worst_eig, float(np.max(np.abs(got - want))))
    worst_trace = 0.0
    for s in range(10):
        b = RandomSource(40 + s, 0).generator().standard_normal((10, 10))
        sym = (b + b.T) / 2.0
        gap = abs(float(eigvals_symmetric(sym).sum()) - float(np.trace(sym)))
        worst_trace = max(worst_trace, gap)
    ok = worst_eig <= 1e-8 and worst_trace <= 1e-9
    _report(3, ok, f"path spectrum gap {worst_eig:.3e}, trace gap {worst_trace:.3e}")


def test_acceptance_04_gradients_match_finite_differences():
    d, k = 6, 3
    worst_pair = 0.0
    for case in range(50):
        gen = RandomSource(70 + case, 0).generator()
        center = gen.standard_normal(d)
        context = gen.standard_normal(d)
        negatives = gen.standard_normal((k, d))
        g_c, g_x, g_n = sgns_pair_gradients(center, context, negatives)
        analytic = np.concatenate([g_c, g_x, g_n.ravel()])

        def pair_loss_of(flat):
            return sgns_pair_loss(
                flat[:d], flat[d : 2 * d], flat[2 * d :].reshape(k, d)
            )

        point = np.concatenate([center, context, negatives.ravel()])
        numeric = oracles.central_difference(pair_loss_of, point)
        worst_pair = max(worst_pair, oracles.gradient_gap(analytic, numeric))

    rows, width, classes = 12, 4, 3
    worst_soft = 0.0
    for case in range(50):
        gen = RandomSource(71 + case, 1).generator()
        xb = np.hstack([np.ones((rows, 1)), gen.standard_normal((rows, width))])
        y = gen.integers(0, classes, size=rows)
        weights = gen.standard_normal((width + 1, classes))
        _, grad = softmax_loss_and_gradient(weights, xb, y, 1e-2)

        def softmax_loss_of(flat):
            shaped = flat.reshape(width + 1, classes)
            return softmax_loss_and_gradient(shaped, xb, y, 1e-2)[0]

        numeric = oracles.central_difference(softmax_loss_of, weights.ravel())
        worst_soft = max(worst_soft, oracles.gradient_gap(grad.ravel(), numeric))

    ok = worst_pair <= 1e-4 and worst_soft <= 1e-5
    _report(4, ok, f"pair-loss gap {worst_pair:.3e}, softmax gap {worst_soft:.3e}")


def test_acceptance_05_planted_blocks_recovered_by_label_propagation():
    start = time.perf_counter()
    g = builders.planted_two_block(50, 0.30, 0.02, 42)
    truth = [0] * 50 + [1] * 50
    lp_scores, nmf_scores = [], []
    for s in range(20):
        got = LabelPropagationModel(seed=s).fit(g).get_memberships()
        lp_scores.append(nmi(truth, [got[v] for v in range(100)]))
        got = SymNmfModel(seed=s).fit(g).get_memberships()
        nmf_scores.append(nmi(truth, [got[v] for v in range(100)]))
    lp_median = statistics.median(lp_scores)
    nmf_median = statistics.median(nmf_scores)
    elapsed = time.perf_counter() - start
    ok = lp_median >= 0.9 and lp_median >= nmf_median and elapsed < 30.0
    _report(
        5,
        ok,
        f"median agreement: propagation {lp_median:.3f}, "
        f"factorization {nmf_median:.3f}, {elapsed:.1f}s",
    )


def test_acceptance_06_corpus_models_separate_triangles_from_paths():
    start = time.perf_counter()
    graphs = [builders.complete_graph(3) for _ in range(100)]
    graphs += [builders.path_graph(3) for _ in range(100)]
    labels = np.array([0] * 100 + [1] * 100)
    corpus = GraphCorpus(graphs=graphs)
    split = train_test_split(200, 0.8, 42)
    scores = {}
    for name, model in (
        ("wl-svd", WlSvdModel(seed=42)),
        ("sf", SfModel()),
        ("netlsd", NetLsdModel()),
    ):
        emb = model.fit(corpus).get_embedding()
        clf = softmax_fit(emb[split.train], labels[split.train])
        probs = softmax_predict(clf, emb[split.test])
        scores[name] = auc(labels[split.test], probs)
    elapsed = time.perf_counter() - start
    ok = all(v >= 0.95 for v in scores.values()) and elapsed < 60.0
    detail = ", ".join(f"{name} {v:.3f}" for name, v in scores.items())
    _report(6, ok, f"auc {detail}, {elapsed:.1f}s")


def test_acceptance_07_deepwalk_separates_bridged_cliques():
    start = time.perf_counter()
    g = builders.two_cliques(16)
    emb = DeepWalkModel().fit(g).get_embedding()
    labels = np.array([0] * 16 + [1] * 16)
    split = train_test_split(32, 0.8, 42)
    clf = softmax_fit(emb[split.train], labels[split.train])
    probs = softmax_predict(clf, emb[split.test])
    score = auc(labels[split.test], probs)
    elapsed = time.perf_counter() - start
    ok = score >= 0.9 and elapsed < 60.0
    _report(7, ok, f"auc {score:.3f} in {elapsed:.1f}s")


def test_acceptance_08_scaling_is_near_linear(tmp_path):
    start = time.perf_counter()
    # warm-up fit so one-time import costs stay out of the smallest bucket
    warm = erdos_renyi_gnm(64, 320, RandomSource(3, 0), connected=True)
    NetMfModel(dimensions=8, seed=0).fit(warm)

    out = tmp_path / "bench.csv"
    code = cli_main(
        [
            "bench", "--task", "embed-nodes", "--algo", "netmf",
            "--sizes", "1024,2048,4096,8192", "--degree", "10",
            "--repeats", "3", "--seed", "42", "--out", str(out),
        ]
    )
    assert code == 0
    means = {}
    for line in out.read_text().strip().split("\n")[1:]:
        _, n, _, rep, seconds = line.split(",")
        if rep == "mean":
            means[int(n)] = float(seconds)
    sizes = sorted(means)
    netmf_ratios = [means[b] / means[a] for a, b in zip(sizes, sizes[1:])]

    walk_means = []
    model = DeepWalkModel()
    for i, n in enumerate(sizes):
        g = erdos_renyi_gnm(n, n * 10 // 2, RandomSource(7, i), connected=True)
        times = []
        for _ in range(3):
            t0 = time.perf_counter()
            generate_walks(g, model.walk_number, model.walk_length, RandomSource(42, 0))
            times.append(time.perf_counter() - t0)
        walk_means.append(sum(times) / len(times))
    walk_ratios = [b / a for a, b in zip(walk_means, walk_means[1:])]

    elapsed = time.perf_counter() - start
    ok = (
        max(netmf_ratios) <= 2.5
        and max(walk_ratios) <= 2.5
        and elapsed < 600.0
    )
    netmf_text = "/".join(f"{r:.2f}" for r in netmf_ratios)
    walk_text = "/".join(f"{r:.2f}" for r in walk_ratios)
    _report(
        8,
        ok,
        f"doubling ratios: netmf {netmf_text}, walks {walk_text}, {elapsed:.0f}s",
    )


def _run_cli(*args):
    result = subprocess.run(
        [sys.executable, "-m", "graphmine.cli", "--threads", "1", *map(str, args)],
        capture_output=True,
    )
    assert result.returncode == 0, result.stderr.decode()
    return result.stdout


def _reruns_identical(*args):
    return _run_cli(*args) == _run_cli(*args)


def _strip_seconds(raw):
    lines = raw.decode().strip().split("\n")
    return [line.rsplit(",", 1)[0] for line in lines]


def test_acceptance_09_reruns_are_byte_identical_and_driver_is_generic(tmp_path):
    graph = tmp_path / "g.csv"
    members = tmp_path / "members.json"
    embedding = tmp_path / "emb.csv"
    labels = tmp_path / "labels.csv"
    corpus = tmp_path / "corpus.jsonl"

    generate = ("generate", "--nodes", 24, "--edges", 60, "--seed", 5, "--connected")
    graph.write_bytes(_run_cli(*generate))
    members.write_bytes(
        _run_cli("cluster", "--algo", "label-propagation", "--graph", graph)
    )
    embedding.write_bytes(
        _run_cli("embed-nodes", "--algo", "netmf", "--graph", graph,
                 "--dimensions", 8)
    )
    write_labels_csv([0] * 12 + [1] * 12, str(labels))
    lines = [json.dumps({"edges": [[0, 1], [1, 2], [0, 2]]}),
             json.dumps({"edges": [[0, 1], [1, 2]]})]
    corpus.write_text("\n".join(lines * 3) + "\n")

    commands = [
        generate,
        ("cluster", "--algo", "label-propagation", "--graph", graph),
        ("cluster", "--algo", "scd", "--graph", graph),
        ("cluster", "--algo", "symnmf", "--graph", graph,
         "--dimensions", 4, "--iterations", 60),
        ("embed-nodes", "--algo", "deepwalk", "--graph", graph,
         "--walk-number", 2, "--walk-length", 12, "--dimensions", 8,
         "--window-size", 3, "--negative-samples", 2),
        ("embed-nodes", "--algo", "walklets", "--graph", graph,
         "--walk-number", 2, "--walk-length", 12, "--dimensions", 4,
         "--window-size", 2, "--negative-samples", 2),
        ("embed-nodes", "--algo", "netmf", "--graph", graph, "--dimensions", 8),
        ("embed-graphs", "--algo", "sf", "--corpus", corpus, "--dimensions", 6),
        ("embed-graphs", "--algo", "netlsd", "--corpus", corpus),
        ("embed-graphs", "--algo", "wl-svd", "--corpus", corpus,
         "--dimensions", 8),
        ("eval", "nmi", "--a", members, "--b", members),
        ("eval", "modularity", "--graph", graph, "--membership", members),
        ("eval", "classify", "--embedding", embedding, "--labels", labels,
         "--ratio", 0.8, "--seed", 42),
    ]
    stable = sum(_reruns_identical(*cmd) for cmd in commands)

    bench = ("bench", "--task", "embed-nodes", "--algo", "netmf",
             "--sizes", "64,128", "--degree", "4", "--repeats", 2)
    bench_stable = _strip_seconds(_run_cli(*bench)) == _strip_seconds(
        _run_cli(*bench)
    )

    # one driver body must accept either walk-based constructor unchanged
    def fit_with(constructor, g):
        model = constructor(
            walk_number=2, walk_length=10, dimensions=6, window_size=2,
            negative_samples=2, epochs=1, learning_rate=0.025, seed=11,
        )
        return model.fit(g).get_embedding()

    clique_pair = builders.two_cliques(5)
    deepwalk_out = fit_with(DeepWalkModel, clique_pair)
    walklets_out = fit_with(WalkletsModel, clique_pair)
    shapes_ok = deepwalk_out.shape == (10, 6) and walklets_out.shape == (10, 12)

    ok = stable == len(commands) and bench_stable and shapes_ok
    _report(
        9,
        ok,
        f"{stable}/{len(commands)} commands byte-stable, "
        f"bench structure stable {bench_stable}, driver shapes ok {shapes_ok}",
    )


def test_acceptance_10_property_suites_hold_on_200_cases_each():
    start = time.perf_counter()
    counts = [
        property_suites.membership_contract_suite(200),
        property_suites.embedding_row_contract_suite(200),
        property_suites.permutation_invariance_suite(200),
        property_suites.metric_bounds_suite(200),
        property_suites.loss_monotonicity_suite(200),
    ]
    elapsed = time.perf_counter() - start
    ok = all(c == 200 for c in counts)
    _report(10, ok, f"case counts {counts} in {elapsed:.0f}s")

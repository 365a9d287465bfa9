"""Product acceptance suite.

One test per contract criterion, each printing a single
`[PASS] criterion N` / `[FAIL] criterion N` line (visible with -v -s or
in captured output). Expected values come from the brute-force oracles
in oracles.py or from hand-checked constructions; nothing here is
derived from the code under test.
"""

import json
import os
import resource
import time
from fractions import Fraction

import numpy as np

import oracles
import synth
from kmpcluster import (
    BisectConfig,
    Cluster,
    Clustering,
    PipelineConfig,
    all_core,
    augment,
    bipartition,
    classical_mds,
    core_labels,
    has_positive_modularity,
    ikc,
    kmp_parse,
    load_edge_list,
    modularity,
    run_pipeline,
    strict_filter,
    validate,
)
from kmpcluster.cli import main


def _report(num: int, problems: list, detail: str):
    status = "PASS" if not problems else "FAIL"
    print(f"[{status}] criterion {num}: {detail}")
    assert not problems, f"criterion {num}: " + "; ".join(str(p) for p in problems[:5])


def _random_clustering(rng, n):
    clusters = []
    for g in synth.random_clustering_sets(rng, n):
        cut = int(rng.integers(0, len(g) + 1))
        c = Cluster(core=g[:cut], noncore=g[cut:])
        if c.size:
            clusters.append(c)
    return Clustering(clusters, n)


def test_criterion_01_parse_always_valid():
    rng = np.random.default_rng(10_001)
    problems = []
    t0 = time.perf_counter()
    for trial in range(500):
        n = int(rng.integers(10, 301))
        prob = 10 ** rng.uniform(-2.2, -0.5)
        net = synth.gnp_net(rng, n, prob)
        for k, p in ((5, 2), (10, 2), (3, 1)):
            clustering = _random_clustering(rng, n)
            result, _ = kmp_parse(net, clustering, k, p)
            report = validate(net, result, k, p)
            if not report.all_kmp_valid():
                problems.append(f"trial {trial} k={k} p={p}")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        problems.append(f"took {elapsed:.1f}s, budget 60s")
    _report(
        1,
        problems,
        f"1500 parses of 500 random graphs all kmp-valid in {elapsed:.1f}s",
    )


def test_criterion_02_coreness_matches_deletion_oracle():
    rng = np.random.default_rng(10_002)
    problems = []
    for trial in range(200):
        n = int(rng.integers(2, 201))
        net = synth.gnp_net(rng, n, 10 ** rng.uniform(-2.0, -0.4))
        lab = core_labels(net)
        got = dict(zip(lab.nodes.tolist(), lab.labels.tolist()))
        want = oracles.core_labels_by_deletion(oracles.adjacency(net))
        if got != want:
            problems.append(f"trial {trial}")
    _report(2, problems, "core labels equal deletion oracle on 200 graphs")


def test_criterion_03_carving_nests():
    rng = np.random.default_rng(10_003)
    problems = []
    for trial in range(100):
        n = int(rng.integers(20, 250))
        net = synth.gnp_net(rng, n, rng.uniform(0.03, 0.2))
        k, kp = sorted(rng.choice(np.arange(3, 13), 2, replace=False).tolist())
        coarse = {frozenset(c.core.tolist()) for c in ikc(net, int(k)).clusters}
        fine = {frozenset(c.core.tolist()) for c in ikc(net, int(kp)).clusters}
        if not fine <= coarse:
            problems.append(f"trial {trial} k={k} k'={kp}")
    _report(3, problems, "ikc(k') clusters all appear in ikc(k) for k < k'")


def test_criterion_04_modularity_anchors():
    rng = np.random.default_rng(10_004)
    problems = []
    # a connected network scores exactly zero as one cluster
    for trial in range(20):
        n = int(rng.integers(5, 120))
        edges = synth.path_edges(range(n))
        extra = rng.integers(0, n, size=(2 * n, 2))
        edges += [(int(a), int(b)) for a, b in extra if a != b]
        net = synth.net_from(edges, n=n)
        if modularity(net, range(n)) != 0.0:
            problems.append(f"whole-network modularity nonzero, trial {trial}")
    # half of a 20-clique is dense but over-connected outward
    net = synth.net_from(synth.clique_edges(range(20)) + [(19, 20)])
    half = Clustering([all_core(range(10))], net.n)
    for k in range(1, 10):
        kept, report = strict_filter(net, half, k, p=1)
        if len(kept) != 0:
            problems.append(f"half-clique kept at k={k}")
        cv = report.clusters[0]
        if not cv.k_valid or cv.m_valid:
            problems.append(f"half-clique flags wrong at k={k}")
    # integer positivity test vs rational arithmetic
    checked = 0
    while checked < 10_000:
        n = int(rng.integers(4, 120))
        net = synth.gnp_net(rng, n, rng.uniform(0.05, 0.5))
        if net.m == 0:
            continue
        for _ in range(min(50, 10_000 - checked)):
            size = int(rng.integers(1, min(n, 40) + 1))
            sub = rng.choice(n, size, replace=False)
            got = has_positive_modularity(net, sub)
            want = oracles.modularity_fraction(net, sub) > 0
            if got != want:
                problems.append(f"positivity mismatch on subset of n={n}")
            checked += 1
    _report(4, problems, "zero whole-network score, half-clique rejection, 10k positivity checks")


def test_criterion_05_augmentation_anchor():
    problems = []
    c1 = list(range(1000))
    c2 = list(range(1000, 1020))
    x = 1020
    edges = [(x, v) for v in c1[:5]] + [(x, v) for v in c2[:10]]
    edges += synth.path_edges(c1) + synth.path_edges(c2)
    net = synth.net_from(edges, n=1021)
    clustering = Clustering([all_core(c1), all_core(c2)], net.n)
    result = augment(net, clustering, p=2)
    winner = next(c for c in result.clusters if 1000 in c.core.tolist())
    if winner.noncore.tolist() != [x]:
        problems.append("worked example did not choose the denser cluster")

    rng = np.random.default_rng(10_005)
    for trial in range(100):
        n = int(rng.integers(20, 90))
        net = synth.gnp_net(rng, n, rng.uniform(0.08, 0.3))
        cores = [c for c in synth.random_clustering_sets(rng, n) if len(c) >= 2]
        if not cores:
            continue
        p = int(rng.integers(1, 4))
        clustering = Clustering([all_core(c) for c in cores], n)
        first = augment(net, clustering, p)
        second = augment(net, clustering, p)
        render = lambda r: "\n".join(
            f"{v}\t{ci}\t{'core' if v in set(c.core.tolist()) else 'noncore'}"
            for ci, c in enumerate(r.clusters)
            for v in c.nodes.tolist()
        )
        if render(first).encode() != render(second).encode():
            problems.append(f"reruns differ, trial {trial}")
        got = {
            int(v): i
            for i, c in enumerate(first.clusters)
            for v in c.noncore.tolist()
        }
        placed = set()
        for c in clustering.clusters:
            placed.update(c.nodes.tolist())
        candidates = [v for v in range(n) if v not in placed]
        core_sets = [set(c.core.tolist()) for c in first.clusters]
        for _ in range(2):
            order = list(rng.permutation(candidates))
            want = oracles.assign_by_scan(net, core_sets, candidates, p, order)
            if got != want:
                problems.append(f"order dependence, trial {trial}")
    _report(5, problems, "ratio rule worked example plus 100 shuffled instances")


def test_criterion_06_bisection_exhaustive_minimum():
    rng = np.random.default_rng(10_006)
    problems = []
    cfg = BisectConfig(k=2, local_search_iters=2000)
    cases = 0
    while cases < 50:
        size = int(rng.integers(4, 15))
        net = synth.gnp_net(rng, size, rng.uniform(0.25, 0.7))
        adj = oracles.adjacency(net)
        best, _ = oracles.exhaustive_min_ncut(adj, range(size))
        if best is None:
            continue
        p0, p1 = bipartition(net, range(size), cfg)
        got = oracles.ncut_fraction(adj, p0.tolist(), p1.tolist())
        if got != best:
            problems.append(f"case {cases}: {got} != {best}")
        cases += 1
    for size in (4, 5, 6, 7, 8):
        edges = synth.clique_edges(range(size))
        edges += synth.clique_edges(range(size, 2 * size))
        edges.append((0, size))
        net = synth.net_from(edges)
        p0, p1 = bipartition(net, range(2 * size), cfg)
        if p0.tolist() != list(range(size)) or p1.tolist() != list(
            range(size, 2 * size)
        ):
            problems.append(f"bridge family size {size}")
    _report(6, problems, "50 exhaustive-minimum cases and clique-bridge family")


def test_criterion_07_planted_recovery():
    problems = []
    periphery_total = 0
    periphery_hit = 0
    for seed in range(25):
        net, cores, periphery = synth.planted_instance(20_000 + seed)
        want = sorted(c.tolist() for c in cores)
        for stage2 in ("recursive", "iterative"):
            res = run_pipeline(net, PipelineConfig(k=5, p=2, stage2=stage2))
            got = sorted(c.core.tolist() for c in res.final.clusters)
            if got != want:
                problems.append(f"seed {seed} {stage2}: core mismatch")
                continue
            by_min = {c.core[0]: c for c in res.final.clusters}
            for pendant, clique_idx in periphery.items():
                periphery_total += 1
                home = by_min.get(cores[clique_idx][0])
                if home is not None and pendant in home.noncore.tolist():
                    periphery_hit += 1
    rate = 100.0 * periphery_hit / max(periphery_total, 1)
    if rate < 95.0:
        problems.append(f"periphery attach rate {rate:.1f}% < 95%")
    _report(
        7,
        problems,
        f"25 planted seeds, both split variants, cores exact, periphery {rate:.1f}%",
    )


def test_criterion_08_mds_anchors():
    problems = []
    s = 2.5
    d = s * (np.ones((3, 3)) - np.eye(3))
    coords = classical_mds(d)
    diff = coords[:, None, :] - coords[None, :, :]
    got = np.sqrt((diff**2).sum(axis=2))
    if np.abs(got - d).max() >= 1e-6:
        problems.append(f"triangle error {np.abs(got - d).max():.2e}")
    zeros = classical_mds(np.zeros((4, 4)))
    if np.abs(zeros).max() != 0.0:
        problems.append("zero matrix did not map to the origin")
    _report(8, problems, "equilateral triangle embeds exactly, zeros at origin")


def test_criterion_09_determinism_sweep(tmp_path):
    problems = []
    u, v = synth.sweep_network_edges()
    edges = tmp_path / "sweep.tsv"
    synth.write_edge_file(edges, u, v)
    variants = [
        (k, stage2, ls, stage3)
        for k in (5, 10)
        for stage2, ls, stage3 in (
            ("none", 0, "off"),
            ("none", 0, "on"),
            ("iterative", 0, "on"),
            ("iterative", 2000, "on"),
            ("recursive", 0, "on"),
            ("recursive", 2000, "on"),
        )
    ]
    artifacts = (
        "clustering.tsv",
        "id_map.tsv",
        "validity.json",
        "stats.json",
        "run.json",
        "discarded.tsv",
        "singletons.tsv",
    )
    t0 = time.perf_counter()
    old_threads = os.environ.get("KMP_THREADS")
    try:
        for vi, (k, stage2, ls, stage3) in enumerate(variants):
            outs = []
            for run, threads in (("r1", "1"), ("r2", "1"), ("r8", "8")):
                os.environ["KMP_THREADS"] = threads
                out = tmp_path / f"v{vi}_{run}"
                rc = main(
                    ["pipeline", str(edges), "--k", str(k),
                     "--stage2", stage2, "--local-search", str(ls),
                     "--stage3", stage3, "--out", str(out)]
                )
                if rc != 0:
                    problems.append(f"variant {vi} run {run} exited {rc}")
                outs.append(out)
            for name in artifacts:
                blobs = [(o / name).read_bytes() for o in outs]
                if blobs[0] != blobs[1]:
                    problems.append(f"variant {vi} {name} differs between runs")
                if blobs[0] != blobs[2]:
                    problems.append(f"variant {vi} {name} differs across threads")
    finally:
        if old_threads is None:
            os.environ.pop("KMP_THREADS", None)
        else:
            os.environ["KMP_THREADS"] = old_threads
    elapsed = time.perf_counter() - t0
    if elapsed >= 300:
        problems.append(f"sweep took {elapsed:.0f}s, budget 300s")
    _report(
        9,
        problems,
        f"12 variants byte-identical across reruns and thread counts in {elapsed:.0f}s",
    )


def test_criterion_10_scale_smoke(tmp_path):
    problems = []
    n = 1_000_000
    target_edges = 10_000_000
    rng = np.random.default_rng(10_010)
    perm = rng.permutation(n)
    part_u = []
    part_v = []
    planted = 0
    at = 0
    for _ in range(2000):
        size = int(rng.integers(12, 17))
        members = perm[at : at + size]
        at += size
        iu = np.triu_indices(size, k=1)
        part_u.append(members[iu[0]])
        part_v.append(members[iu[1]])
        planted += len(iu[0])
    m_bg = target_edges - planted
    bg_u = rng.integers(0, n, m_bg, dtype=np.int64)
    bg_v = rng.integers(0, n, m_bg, dtype=np.int64)
    part_u.append(bg_u)
    part_v.append(bg_v)
    u = np.concatenate(part_u)
    v = np.concatenate(part_v)
    edges = tmp_path / "big.tsv"
    with open(edges, "w") as f:
        chunk = 1_000_000
        for lo in range(0, len(u), chunk):
            au = u[lo : lo + chunk]
            av = v[lo : lo + chunk]
            f.write(
                "\n".join(f"{a}\t{b}" for a, b in zip(au.tolist(), av.tolist()))
            )
            f.write("\n")

    t0 = time.perf_counter()
    net = load_edge_list(edges)
    clustering = ikc(net, 10)
    final, _ = kmp_parse(net, clustering, 10, 2)
    elapsed = time.perf_counter() - t0
    peak_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / (1024**2)
    if elapsed >= 600:
        problems.append(f"took {elapsed:.0f}s, budget 600s")
    if peak_gb >= 8.0:
        problems.append(f"peak rss {peak_gb:.1f} GB, budget 8 GB")
    if net.n < 990_000 or net.m < 9_900_000:
        problems.append(f"network too small: n={net.n} m={net.m}")
    if len(final) == 0:
        problems.append("no clusters came out at all")
    report = validate(net, final, 10, 2)
    if not report.all_kmp_valid():
        problems.append("scale output not kmp-valid")
    _report(
        10,
        problems,
        f"{net.n} nodes / {net.m} edges carved and parsed in "
        f"{elapsed:.0f}s at {peak_gb:.1f} GB peak",
    )

import numpy as np
import pytest

import synth
from kmpcluster import (
    Cluster,
    Clustering,
    all_core,
    ikc,
    mcd,
    node_coverage,
    size_stats,
)


def clustering_of(net, groups):
    return Clustering([all_core(g) for g in groups], net.n)


def test_coverage_extremes_and_half():
    net = synth.net_from(synth.clique_edges(range(4)), n=8)
    assert node_coverage(clustering_of(net, [range(8)])) == 100.0
    assert node_coverage(Clustering([], net.n)) == 0.0
    assert node_coverage(clustering_of(net, [range(4)])) == 50.0


def test_coverage_ignores_singletons():
    net = synth.net_from([(0, 1)], n=10)
    groups = [[0, 1], [2]]
    assert node_coverage(clustering_of(net, groups)) == 20.0


def test_size_stats_odd_count():
    net = synth.net_from([(0, 1)], n=20)
    stats = size_stats(clustering_of(net, [[0, 1], [2, 3, 4], [5, 6, 7, 8, 9]]))
    assert stats.n_clusters == 3
    assert stats.min_size == 2
    assert stats.max_size == 5
    assert stats.median_low == 3.0
    assert stats.median_mean == 3.0
    assert stats.mean_size == pytest.approx(10 / 3)
    assert stats.singleton_nodes == 10


def test_size_stats_even_count_medians_differ():
    net = synth.net_from([(0, 1)], n=14)
    groups = [[0, 1], [2, 3, 4], [5, 6, 7, 8], [9, 10, 11, 12, 13]]
    stats = size_stats(clustering_of(net, groups))
    assert stats.n_clusters == 4
    assert stats.median_low == 3.0
    assert stats.median_mean == 3.5
    assert stats.singleton_nodes == 0


def test_size_stats_empty_clustering():
    net = synth.net_from([(0, 1)], n=6)
    stats = size_stats(Clustering([], net.n))
    assert stats.n_clusters == 0
    assert stats.singleton_nodes == 6
    assert stats.to_dict()["max_size"] == 0


def test_mcd_of_clique():
    net = synth.net_from(synth.clique_edges(range(12)))
    assert mcd(net, range(12)) == 11


def test_mcd_counts_core_only():
    # non-core member adds edges into the core that must not count
    net = synth.net_from(synth.clique_edges(range(4)) + [(4, 0), (4, 1)])
    cluster = Cluster(core=np.arange(4), noncore=np.array([4]))
    assert mcd(net, cluster) == 3


def test_mcd_rejects_empty_core():
    net = synth.net_from([(0, 1)])
    with pytest.raises(ValueError):
        mcd(net, [])


def test_mcd_at_least_k_on_carved_cores():
    rng = np.random.default_rng(66)
    for _ in range(6):
        net = synth.gnp_net(rng, 120, 0.08)
        for k in (3, 5):
            for c in ikc(net, k).clusters:
                assert mcd(net, c) >= k

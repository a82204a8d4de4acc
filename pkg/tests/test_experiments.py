# Licensed under the MIT License.
"""
Tests for synthetic problem generation and experiment drivers
"""

import numpy as np
import pandas as pd
import pytest
from oracles import random_sparse_network

from multalign.config import MsdConfig, SyntheticConfig
from multalign.exceptions import MultalignDataError
from multalign.experiments import (
    RecoveryRecord,
    edge_recovery,
    gen_instance_pair,
    gen_reference,
    keep_with,
    trial_rng,
    write_instance,
)
from multalign.experiments.runner import (
    METHODS,
    TrialTask,
    mode_order,
    run_adding_modes,
    run_deanonymization,
    run_mode_ordering,
    run_recovery_grid,
    run_trials,
)
from multalign.network import MultimodalNetwork
from multalign.network.parser import load_network
from multalign.pipeline import (
    AlignmentResult,
    Strategy,
    VertexMatching,
    align_multimodal,
    multimodal_overlap,
)


TINY = SyntheticConfig(base_nodes=6, copies=2, avg_degree=2.0, modes=2, trials=2, seed=3)
FAST = MsdConfig(iterations=4)


def result_with_overlap(overlap):
    """Alignment result carrying only an overlap count"""
    return AlignmentResult(
        matching=VertexMatching.empty((1, 1)),
        overlap=overlap,
        per_mode_overlap=(overlap,),
        strategy=Strategy("simple", "greedy"),
        timing=0.0,
    )


def truth_matching(pair):
    """Ground truth as a vertex matching"""
    n_vertices = pair.a.n_vertices
    return VertexMatching(np.arange(n_vertices), pair.truth, (n_vertices, n_vertices))


def test_reference_copies(rng):
    reference = gen_reference(SyntheticConfig(), rng)
    assert reference.n_vertices == 36
    assert reference.names == ("reference",)

    edges = reference.edge_arrays[0]
    copies = [edges[(edges // 12 == c).all(axis=1)] for c in range(3)]
    assert sum(len(c) for c in copies) == len(edges)
    np.testing.assert_array_equal(copies[1] - 12, copies[0])
    np.testing.assert_array_equal(copies[2] - 24, copies[0])


def test_reference_without_edges(rng):
    reference = gen_reference(SyntheticConfig(base_nodes=36, copies=1, avg_degree=0), rng)
    assert reference.n_vertices == 36
    assert reference.total_edges == 0


def test_impossible_degree():
    with pytest.raises(ValueError):
        SyntheticConfig(base_nodes=4, avg_degree=3.5)


def test_noiseless_instance(rng):
    cfg = SyntheticConfig(modes=4)
    pair = gen_instance_pair(gen_reference(cfg, rng), cfg, rng)

    assert pair.a.n_modes == pair.b.n_modes == 4
    assert pair.a.edge_counts == pair.b.edge_counts
    assert len(set(pair.a.modes)) == 1
    assert pair.b.vertex_labels == tuple(str(v) for v in range(36))

    total, _ = multimodal_overlap(truth_matching(pair), pair.a, pair.b)
    assert total == pair.a.total_edges
    assert edge_recovery(result_with_overlap(total), pair.a, pair.b) == 1.0


def test_all_vertices_deleted(rng):
    cfg = SyntheticConfig(vertex_del_p=1.0, modes=3)
    pair = gen_instance_pair(gen_reference(cfg, rng), cfg, rng)
    assert pair.a.total_edges == pair.b.total_edges == 0
    assert edge_recovery(result_with_overlap(0), pair.a, pair.b) == 1.0


def test_label_shuffle_keeps_overlap(rng):
    cfg = SyntheticConfig(vertex_del_p=0.1, edge_del_q=0.2)
    pair = gen_instance_pair(gen_reference(cfg, rng), cfg, rng)
    unshuffled = pair.b.permuted(np.argsort(pair.truth))
    n_vertices = pair.a.n_vertices
    indices = np.arange(n_vertices)
    identity = VertexMatching(indices, indices, (n_vertices, n_vertices))

    assert multimodal_overlap(truth_matching(pair), pair.a, pair.b) == multimodal_overlap(
        identity, pair.a, unshuffled
    )


def within_three_sigma(samples, expected):
    """Sample mean lies within three standard errors of the expectation"""
    samples = np.asarray(samples, dtype=np.float64)
    error = samples.std(ddof=1) / np.sqrt(len(samples))
    return abs(samples.mean() - expected) <= 3 * error


def test_reference_expected_edges():
    counts = [gen_reference(SyntheticConfig(), trial_rng(0, 0, t)).total_edges for t in range(1000)]
    assert np.mean(counts) == pytest.approx(3 * 66 * 3 / 11, rel=0.1)


@pytest.mark.parametrize("deletion", [0.1, 0.5])
def test_deletion_mask_rate(rng, deletion):
    kept = np.mean([keep_with(rng, 36, deletion).mean() for _ in range(1000)])
    sigma = np.sqrt(deletion * (1 - deletion) / (36 * 1000))
    assert abs(kept - (1 - deletion)) <= 3 * sigma


def test_generator_marginals():
    cfg = SyntheticConfig(vertex_del_p=0.1, edge_del_q=0.2)
    retained, shared = [], []
    for trial in range(1000):
        rng = trial_rng(1, 0, trial)
        reference = gen_reference(cfg, rng)
        pair = gen_instance_pair(reference, cfg, rng)
        possible = cfg.modes * reference.total_edges
        if possible:
            retained.append(pair.a.total_edges / possible)
            shared.append(multimodal_overlap(truth_matching(pair), pair.a, pair.b)[0] / possible)

    # (1-p)^2 for the endpoints, then (1-q/2) for the template and for each instance draw
    assert within_three_sigma(retained, 0.9**2 * 0.9**2)
    assert within_three_sigma(shared, 0.9**2 * 0.9**3)


@pytest.mark.parametrize(
    "overlap, edges_a, edges_b, expected",
    [
        (3, [(0, 1), (1, 2), (2, 3), (0, 3)], [(0, 1), (1, 2)], 1.0),
        (1, [(0, 1)], [(0, 1), (1, 2)], 2 / 3),
    ],
)
def test_edge_recovery(overlap, edges_a, edges_b, expected):
    net_a = MultimodalNetwork.from_edges("abcd", [edges_a])
    net_b = MultimodalNetwork.from_edges("abcd", [edges_b])
    assert edge_recovery(result_with_overlap(overlap), net_a, net_b) == pytest.approx(expected)


def test_recovery_record():
    record = RecoveryRecord(0.1, 0.2, 6, "msd", tuple(np.arange(11) / 10))
    assert record.mean == pytest.approx(0.5)
    assert record.p10 == pytest.approx(0.1)
    assert record.p90 == pytest.approx(0.9)


def test_reproducible_generation():
    def generate():
        rng = trial_rng(11, 2, 5)
        return gen_instance_pair(gen_reference(TINY, rng), TINY, rng)

    first, second = generate(), generate()
    assert first.a == second.a
    assert first.b == second.b
    np.testing.assert_array_equal(first.truth, second.truth)


def test_trials_independent_of_jobs():
    tasks = [TrialTask(TINY, FAST, "simple", 0, t) for t in range(3)]
    serial = run_trials(tasks, jobs=1)
    assert run_trials(tasks, jobs=2) == serial
    assert all(0.0 <= value <= 1.0 for trial in serial for value in trial)


def test_recovery_grid():
    records = run_recovery_grid(TINY, [0.0], [0.0, 0.4], FAST, matcher="maxweight")

    assert len(records) == 6
    assert [r.method for r in records] == list(METHODS) * 2
    assert [r.q for r in records] == [0.0] * 3 + [0.4] * 3
    for msd_record, pairwise, difference in (records[:3], records[3:]):
        assert len(msd_record.recoveries) == TINY.trials
        np.testing.assert_allclose(
            difference.recoveries,
            np.subtract(msd_record.recoveries, pairwise.recoveries),
        )


def test_adding_modes():
    records = run_adding_modes(
        TINY, [1, 3], settings=((0.1, 0.2),), msd_cfg=FAST, matcher="simple"
    )
    assert [(r.modes, r.method) for r in records[::3]] == [(1, "msd"), (3, "msd")]
    assert {(r.p, r.q) for r in records} == {(0.1, 0.2)}


def test_mode_order(toy_network):
    assert mode_order(toy_network, "edge_count") == [0, 1, 2]
    assert mode_order(toy_network, "triangles") == [0, 2, 1]
    assert mode_order(toy_network, "density") == [2, 0, 1]
    assert mode_order(toy_network, "random", seed=4) == mode_order(toy_network, "random", seed=4)
    assert sorted(mode_order(toy_network, "random")) == [0, 1, 2]

    with pytest.raises(MultalignDataError, match="Unknown ordering measure"):
        mode_order(toy_network, "betweenness")


def test_mode_ordering(rng):
    net_a = random_sparse_network(rng, 8, 3)
    net_b = random_sparse_network(rng, 8, 3)
    points = run_mode_ordering(net_a, net_b, "edge_count", FAST)

    assert [p.modes_used for p in points] == [1, 2, 3]
    assert {p.measure for p in points} == {"edge_count"}
    order = mode_order(net_a, "edge_count")
    expected = align_multimodal(net_a.select_modes(order), net_b.select_modes(order), FAST)
    assert points[-1].overlap == multimodal_overlap(expected.matching, net_a, net_b)[0]

    partial = run_mode_ordering(net_a, net_b, "triangles", FAST, steps=[2])
    assert [p.modes_used for p in partial] == [2]
    with pytest.raises(MultalignDataError):
        run_mode_ordering(net_a, net_b, "density", FAST, steps=[4])


def test_deanonymization(toy_network):
    rows = run_deanonymization(toy_network, toy_network, FAST)

    assert [row.method for row in rows[:5]] == [
        "simple",
        "maxweight",
        "union",
        "maxoverlap",
        "pairwise smashed",
    ]
    assert [row.overlap for row in rows[:5]] == [14] * 5
    assert rows[5].method.startswith("pairwise best mode (mode ")
    assert rows[5].overlap <= 14


def test_write_instance(tmp_path, rng):
    cfg = SyntheticConfig(edge_del_q=0.1, modes=3)
    pair = gen_instance_pair(gen_reference(cfg, rng), cfg, rng)
    write_instance(pair, tmp_path)

    truth = pd.read_csv(tmp_path / "truth.tsv", sep="\t", dtype=str)
    assert list(truth.columns) == ["vertex_label_A", "vertex_label_B"]
    assert len(truth) == 36
    assert truth.vertex_label_B.tolist() == [str(v) for v in pair.truth]

    loaded = load_network(tmp_path / "a.txt", layers=range(1, 4))
    assert loaded.edge_counts == pair.a.edge_counts

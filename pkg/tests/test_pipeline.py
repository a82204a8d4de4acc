# Licensed under the MIT License.
"""
Tests for conflict resolution, overlap, and end-to-end alignment
"""

import numpy as np
import pandas as pd
import pytest
from oracles import random_sparse_network
from ruamel.yaml import YAML

from multalign.config import MsdConfig, SyntheticConfig
from multalign.exceptions import MultalignDataError, MultalignDimensionError
from multalign.experiments import gen_instance_pair, gen_reference
from multalign.matching import Matching
from multalign.msd import msd
from multalign.network import MultimodalNetwork
from multalign.network.parser import parse_multiplex_edgelist
from multalign.pipeline import (
    OVERLAP_NOTE,
    Strategy,
    VertexMatching,
    align_multimodal,
    align_pairwise_baseline,
    best_candidates,
    check_mode_names,
    multimodal_overlap,
    resolve_greedy,
    resolve_projected,
    write_alignment,
)


GENERATED = SyntheticConfig(vertex_del_p=0.1, edge_del_q=0.2)


def identity(net):
    """Vertex matching of a network onto itself"""
    indices = np.arange(net.n_vertices)
    return VertexMatching(indices, indices, (net.n_vertices, net.n_vertices))


def random_row_matching(rng, n_a, n_b, n_modes):
    """Random partial matching over multimodal row indices with random weights"""

    size_a, size_b = n_modes * n_a, n_modes * n_b
    count = int(rng.integers(0, min(size_a, size_b) + 1))
    rows = rng.choice(size_a, size=count, replace=False)
    cols = rng.choice(size_b, size=count, replace=False)
    return Matching(rows, cols, (size_a, size_b)), rng.random(count)


def test_overlap_self(toy_network):
    total, per_mode = multimodal_overlap(identity(toy_network), toy_network, toy_network)
    assert per_mode == (5, 5, 4)
    assert total == toy_network.total_edges


def test_overlap_empty(toy_network):
    assert multimodal_overlap(VertexMatching.empty((7, 7)), toy_network, toy_network) == (
        0,
        (0, 0, 0),
    )


def test_overlap_partial(toy_network):
    # Swapping A and B is a road automorphism but breaks rail and air edges at A
    matching = VertexMatching(range(7), [1, 0, 2, 3, 4, 5, 6], (7, 7))
    assert multimodal_overlap(matching, toy_network, toy_network) == (10, (5, 2, 3))


def test_overlap_mode_mismatch(toy_network):
    with pytest.raises(MultalignDataError):
        multimodal_overlap(identity(toy_network), toy_network, toy_network.select_modes([0]))


def test_modes_paired_by_name():
    net_a = parse_multiplex_edgelist("1 a b\n1 b c\n2 c d\n2 d a\n")
    net_b = parse_multiplex_edgelist("1 a b\n1 b c\n3 c d\n3 d a\n")
    with pytest.raises(MultalignDataError, match="different modes"):
        align_multimodal(net_a, net_b)
    with pytest.raises(MultalignDataError, match="different modes"):
        align_pairwise_baseline(net_a, net_b)

    check_mode_names(net_a, parse_multiplex_edgelist("1 x y\n2 y z\n"))


def test_overlap_bound(rng):
    for _ in range(20):
        net_a = random_sparse_network(rng, 8, 2)
        net_b = random_sparse_network(rng, 7, 2)
        result = align_multimodal(net_a, net_b, MsdConfig(iterations=4))
        bound = sum(min(a, b) for a, b in zip(net_a.edge_counts, net_b.edge_counts))
        assert result.overlap == sum(result.per_mode_overlap)
        assert result.overlap <= bound


def test_greedy_collision():
    # Vertex a is matched to y in mode 1 and to x in mode 2, b to y in mode 2
    row_matching = Matching([0, 2, 3], [1, 2, 3], (4, 4))
    weights = np.array([0.5, 0.3, 0.4])

    greedy = resolve_greedy(row_matching, weights, 2, (2, 2))
    assert greedy.pairs == {(0, 1)}
    np.testing.assert_array_equal(greedy.weights, [0.5])

    projected = resolve_projected(row_matching, weights, 2, (2, 2))
    assert projected.pairs == {(0, 0), (1, 1)}


def test_projected_voting():
    # a-x in modes 1 and 2 at .3 each against a-y in mode 3 at .5
    row_matching = Matching([0, 2, 4], [0, 2, 5], (6, 6))
    weights = np.array([0.3, 0.3, 0.5])

    projected = resolve_projected(row_matching, weights, 3, (2, 2))
    assert projected.pairs == {(0, 0)}
    np.testing.assert_allclose(projected.weights, [0.6])
    assert resolve_greedy(row_matching, weights, 3, (2, 2)).pairs == {(0, 1)}


def test_projected_fills_zero_weights():
    row_matching = Matching([0, 3], [0, 3], (4, 4))
    projected = resolve_projected(row_matching, np.array([0.0, 1.0]), 2, (2, 2))
    assert projected.pairs == {(0, 0), (1, 1)}


def test_resolvers_empty_and_shape():
    empty = Matching.empty((6, 4))
    assert len(resolve_greedy(empty, np.zeros(0), 2, (3, 2))) == 0
    assert len(resolve_projected(empty, np.zeros(0), 2, (3, 2))) == 0
    with pytest.raises(MultalignDimensionError):
        resolve_greedy(empty, np.zeros(0), 3, (3, 2))
    with pytest.raises(MultalignDimensionError):
        resolve_projected(empty, np.zeros(0), 3, (3, 2))


def test_resolvers_without_collisions():
    row_matching = Matching([0, 4, 5], [2, 3, 1], (6, 6))
    weights = np.array([0.1, 0.2, 0.3])
    greedy = resolve_greedy(row_matching, weights, 2, (3, 3))
    assert greedy.pairs == {(0, 2), (1, 0), (2, 1)}
    assert resolve_projected(row_matching, weights, 2, (3, 3)).pairs == greedy.pairs


def test_resolver_fuzz(rng):
    for _ in range(300):
        n_a, n_b = rng.integers(1, 6, size=2)
        n_modes = int(rng.integers(1, 4))
        row_matching, weights = random_row_matching(rng, n_a, n_b, n_modes)

        # Construction validates that both outputs are 1-1
        greedy = resolve_greedy(row_matching, weights, n_modes, (n_a, n_b))
        projected = resolve_projected(row_matching, weights, n_modes, (n_a, n_b))
        assert greedy.shape == projected.shape == (n_a, n_b)
        assert projected.weights.sum() >= greedy.weights.sum() - 1e-12


def test_self_alignment(rng):
    for _ in range(20):
        net = random_sparse_network(rng, 9, 3)
        result = align_multimodal(net, net, MsdConfig(iterations=6))
        assert result.overlap == net.total_edges
        assert result.per_mode_overlap == net.edge_counts


def test_self_alignment_toy(toy_network):
    result = align_multimodal(toy_network, toy_network)
    assert result.overlap == 14
    assert result.strategy == Strategy("simple", "greedy")
    assert len(result.candidates) == 8
    assert result.timing >= 0


@pytest.mark.parametrize("seed", range(20))
def test_generated_self_alignment(seed):
    rng = np.random.default_rng(seed)
    net = gen_instance_pair(gen_reference(GENERATED, rng), GENERATED, rng).a
    permuted = net.permuted(rng.permutation(net.n_vertices))

    assert align_multimodal(net, net).overlap == net.total_edges
    assert align_multimodal(net, permuted).overlap == net.total_edges


def test_matcher_selection(toy_network):
    result = align_multimodal(toy_network, toy_network, matcher="union")
    assert {c.strategy.matcher for c in result.candidates} == {"union"}
    assert [c.strategy.resolver for c in result.candidates] == ["greedy", "projected"]

    dense = align_multimodal(toy_network, toy_network, matcher="dense")
    assert dense.strategy.matcher == "dense"


def test_determinism(rng):
    net_a = random_sparse_network(rng, 10, 3)
    net_b = random_sparse_network(rng, 10, 3)
    first = align_multimodal(net_a, net_b)
    second = align_multimodal(net_a, net_b)

    assert first.overlap == second.overlap
    assert first.strategy == second.strategy
    assert first.matching.pairs == second.matching.pairs
    np.testing.assert_array_equal(first.matching.weights, second.matching.weights)
    assert first.candidates == second.candidates


def test_pairwise_baseline_sources(toy_network):
    result = align_pairwise_baseline(toy_network, toy_network, matcher="simple")
    table = best_candidates(result)

    assert list(table) == ["smashed", "mode road", "mode rail", "mode air"]
    assert all(c.strategy.resolver == "direct" for c in result.candidates)
    assert result.overlap == max(table.values())
    assert result.strategy.label.startswith("pairwise ")

    only_air = align_pairwise_baseline(toy_network, toy_network, sources=["mode air"])
    assert {c.strategy.source for c in only_air.candidates} == {"mode air"}


def test_pairwise_single_mode_matches_multimodal(rng):
    net_a = random_sparse_network(rng, 9, 1)
    net_b = random_sparse_network(rng, 9, 1)
    baseline = align_pairwise_baseline(net_a, net_b)
    assert baseline.overlap == align_multimodal(net_a, net_b).overlap
    assert baseline.strategy.source == "smashed"


def test_best_candidates(toy_network):
    result = align_multimodal(toy_network, toy_network)
    assert set(best_candidates(result)) == {"simple", "maxweight", "union", "maxoverlap"}


def test_vertex_matching_weights():
    with pytest.raises(MultalignDataError):
        VertexMatching([0, 1], [1, 0], (2, 2), [0.5])
    np.testing.assert_array_equal(VertexMatching([0], [1], (2, 2)).weights, [0.0])


def test_write_alignment(tmp_path, toy_network):
    other = MultimodalNetwork.from_edges(
        [label.lower() for label in toy_network.vertex_labels],
        toy_network.modes,
        toy_network.mode_names,
    )
    result = align_multimodal(toy_network, other)
    write_alignment(result, toy_network, other, tmp_path / "out")

    table = pd.read_csv(tmp_path / "out" / "alignment.tsv", sep="\t")
    assert list(table.columns) == ["vertex_label_A", "vertex_label_B", "y_weight"]
    assert len(table) == len(result.matching)
    assert (table.vertex_label_A.str.lower() == table.vertex_label_B).all()

    with (tmp_path / "out" / "summary.yaml").open(encoding="utf-8") as stream:
        summary = YAML(typ="safe").load(stream)
    assert summary["overlap"] == 14
    assert summary["per_mode_overlap"] == {"road": 5, "rail": 5, "air": 4}
    assert summary["strategy"] == {
        "matcher": "simple",
        "resolver": "greedy",
        "source": "multimodal",
    }
    assert summary["note"] == OVERLAP_NOTE
    assert len(summary["candidates"]) == 8


def test_result_keeps_factors(toy_network):
    cfg = MsdConfig(iterations=3)
    result = align_multimodal(toy_network, toy_network, cfg, matcher="simple")
    np.testing.assert_array_equal(result.factors.u, msd(toy_network, toy_network, cfg).u)
    assert align_pairwise_baseline(toy_network, toy_network, cfg, "simple").factors is None

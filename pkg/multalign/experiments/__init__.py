# Licensed under the MIT License.
"""
Synthetic multimodal alignment problems with a known ground truth
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Tuple

import numpy as np
import pandas as pd

from multalign.config import SyntheticConfig
from multalign.network import MultimodalNetwork
from multalign.network.parser import write_network
from multalign.pipeline import AlignmentResult


LOGGER = logging.getLogger(__name__)


def trial_rng(seed: int, cell: int, trial: int) -> np.random.Generator:
    """Independent random stream for one trial of one experiment cell"""
    return np.random.default_rng([seed, cell, trial])


def er_edges(n_vertices: int, probability: float, rng: np.random.Generator) -> np.ndarray:
    """
    Edges of a G(n, p) sample as an (E, 2) array with u < v
    """

    rows, cols = np.triu_indices(n_vertices, k=1)
    keep = rng.random(len(rows)) < probability
    return np.column_stack((rows[keep], cols[keep]))


def gen_reference(cfg: SyntheticConfig, rng: np.random.Generator) -> MultimodalNetwork:
    """
    Disjoint union of identical copies of one Erdos-Renyi sample
    """

    base = cfg.base_nodes
    probability = cfg.avg_degree / (base - 1) if base > 1 else 0.0
    edges = er_edges(base, probability, rng)

    union = np.concatenate([edges + copy * base for copy in range(cfg.copies)])
    n_vertices = base * cfg.copies
    LOGGER.debug("Reference graph: %d vertices, %d edges", n_vertices, len(union))

    return MultimodalNetwork.from_edges(
        [str(v) for v in range(n_vertices)], [map(tuple, union)], ("reference",)
    )


def keep_with(rng: np.random.Generator, size: int, deletion: float) -> np.ndarray:
    """Mask keeping each of size items with probability 1 - deletion"""
    return rng.random(size) >= deletion


class InstancePair(NamedTuple):
    """Two noisy instances and the ground truth: vertex v of A is vertex truth[v] of B"""

    a: MultimodalNetwork
    b: MultimodalNetwork
    truth: np.ndarray


def gen_instance_pair(
    reference: MultimodalNetwork, cfg: SyntheticConfig, rng: np.random.Generator
) -> InstancePair:
    """
    Derive A and B from a single-mode reference

    Each mode is a template that drops vertices with probability p and edges with probability
    q/2. Both instances then drop template edges independently with probability q/2. B is
    relabeled by a random permutation and its labels are its vertex indices.
    """

    n_vertices = reference.n_vertices
    base_edges = reference.edge_arrays[0]
    half_q = cfg.edge_del_q / 2.0

    modes_a, modes_b = [], []
    for _ in range(cfg.modes):
        alive = keep_with(rng, n_vertices, cfg.vertex_del_p)
        template = base_edges[alive[base_edges].all(axis=1)]
        template = template[keep_with(rng, len(template), half_q)]
        modes_a.append(template[keep_with(rng, len(template), half_q)])
        modes_b.append(template[keep_with(rng, len(template), half_q)])

    names = tuple(str(k) for k in range(1, cfg.modes + 1))
    net_a = MultimodalNetwork.from_edges(
        reference.vertex_labels, (map(tuple, edges) for edges in modes_a), names
    )
    unshuffled = MultimodalNetwork.from_edges(
        reference.vertex_labels, (map(tuple, edges) for edges in modes_b), names
    )

    truth = rng.permutation(n_vertices)
    net_b = unshuffled.permuted(truth, vertex_labels=[str(v) for v in range(n_vertices)])
    LOGGER.debug("Instance edges: A %s, B %s", net_a.edge_counts, net_b.edge_counts)

    return InstancePair(net_a, net_b, truth)


def edge_recovery(
    result: AlignmentResult, net_a: MultimodalNetwork, net_b: MultimodalNetwork
) -> float:
    """
    Fraction of edges aligned, 2 * overlap / (|E_A| + |E_B|)
    Two edgeless networks are fully recovered
    """

    total = net_a.total_edges + net_b.total_edges
    if not total:
        return 1.0

    return 2.0 * result.overlap / total


@dataclass(frozen=True)
class RecoveryRecord:
    """
    Per-trial edge recovery of one method in one experiment cell
    """

    p: float
    q: float
    modes: int
    method: str
    recoveries: Tuple[float, ...] = field(repr=False)

    @property
    def mean(self) -> float:
        """Mean recovery over trials"""
        return float(np.mean(self.recoveries))

    @property
    def p10(self) -> float:
        """10th percentile over trials"""
        return float(np.percentile(self.recoveries, 10))

    @property
    def p90(self) -> float:
        """90th percentile over trials"""
        return float(np.percentile(self.recoveries, 90))


def write_instance(pair: InstancePair, directory: Path) -> None:
    """
    Write a.txt and b.txt in the multiplex format and the ground truth as truth.tsv
    """

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_network(pair.a, directory / "a.txt")
    write_network(pair.b, directory / "b.txt")

    truth = pd.DataFrame(
        {
            "vertex_label_A": pair.a.vertex_labels,
            "vertex_label_B": [pair.b.vertex_labels[v] for v in pair.truth],
        }
    )
    truth.to_csv(directory / "truth.tsv", sep="\t", index=False)
    LOGGER.info("Wrote instance pair and ground truth to %s", directory)

# Licensed under the MIT License.
"""
End-to-end alignment of two multimodal networks

A row-level matching over the m|V_A| x m|V_B| similarity may match one vertex to different
partners in different modes, so it is resolved into a vertex matching before its overlap is
evaluated. Alignments are compared by overlap, the number of per-mode edges they preserve.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from ruamel.yaml import YAML

from multalign.config import MATCHERS, MsdConfig
from multalign.exceptions import MultalignDataError, MultalignDimensionError
from multalign.matching import (
    Matching,
    WeightedEdgeList,
    exact_sparse_mwm,
    rank1_candidates,
    select_matching,
)
from multalign.msd import LowRankFactors, check_mode_counts, msd
from multalign.network import MultimodalNetwork, build_multimodal_adjacency, smash


LOGGER = logging.getLogger(__name__)

OVERLAP_NOTE = "Each undirected edge is counted once; directed releases report twice as many"


@dataclass(frozen=True, eq=False)
class VertexMatching(Matching):
    """
    Matching between vertex indices of A and B, with the similarity weight of each pair
    """

    weights: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        super().__post_init__()
        weights = (
            np.zeros(len(self.rows))
            if self.weights is None
            else np.asarray(self.weights, dtype=np.float64).ravel()
        )
        if len(weights) != len(self.rows):
            raise MultalignDataError(f"Got {len(weights)} weights for {len(self.rows)} pairs")
        object.__setattr__(self, "weights", weights)


class Strategy(NamedTuple):
    """How an alignment was produced"""

    matcher: str
    resolver: str
    source: str = "multimodal"

    @property
    def label(self) -> str:
        """Short description used in reports"""
        if self.source == "multimodal":
            return f"{self.matcher}/{self.resolver}"
        return f"pairwise {self.source} ({self.matcher})"


class Candidate(NamedTuple):
    """An evaluated alignment that may not have been selected"""

    strategy: Strategy
    overlap: int


@dataclass(frozen=True, eq=False)
class AlignmentResult:
    """
    Best alignment found with its overlap and provenance
    """

    matching: VertexMatching
    overlap: int
    per_mode_overlap: Tuple[int, ...]
    strategy: Strategy
    timing: float
    candidates: Tuple[Candidate, ...] = ()
    factors: Optional[LowRankFactors] = field(default=None, repr=False)


def check_mode_names(net_a: MultimodalNetwork, net_b: MultimodalNetwork) -> None:
    """
    Mode k of A is aligned with mode k of B, so the networks must name the same modes
    """

    check_mode_counts(net_a, net_b)
    if net_a.names != net_b.names:
        raise MultalignDataError(f"Networks have different modes: {net_a.names} and {net_b.names}")


def multimodal_overlap(
    matching: Matching, net_a: MultimodalNetwork, net_b: MultimodalNetwork
) -> Tuple[int, Tuple[int, ...]]:
    """
    Count, per mode, the edges of A whose image under the matching is an edge of B
    """

    check_mode_counts(net_a, net_b)
    partner = np.full(net_a.n_vertices, -1, dtype=np.int64)
    partner[matching.rows] = matching.cols
    n_b = max(net_b.n_vertices, 1)

    per_mode = []
    for edges_a, edges_b in zip(net_a.edge_arrays, net_b.edge_arrays):
        mapped = partner[edges_a]
        mapped = mapped[(mapped >= 0).all(axis=1)]
        mapped.sort(axis=1)
        keys_a = mapped[:, 0] * n_b + mapped[:, 1]
        keys_b = edges_b[:, 0] * n_b + edges_b[:, 1]
        per_mode.append(int(np.isin(keys_a, keys_b).sum()))

    return sum(per_mode), tuple(per_mode)


def _accept_greedy(
    rows: np.ndarray,
    cols: np.ndarray,
    weights: np.ndarray,
    used_rows: np.ndarray,
    used_cols: np.ndarray,
) -> Tuple[List[int], List[int], List[float]]:
    """
    Accept pairs in descending weight order (ties by row) while both ends are free
    """

    accepted = ([], [], [])
    for idx in np.lexsort((rows, -weights)):
        row, col = rows[idx], cols[idx]
        if used_rows[row] or used_cols[col]:
            continue
        used_rows[row] = used_cols[col] = True
        accepted[0].append(int(row))
        accepted[1].append(int(col))
        accepted[2].append(float(weights[idx]))

    return accepted


def resolve_greedy(
    row_matching: Matching, weights: np.ndarray, n_modes: int, sizes: Tuple[int, int]
) -> VertexMatching:
    """
    Project row matches to vertices and keep each one whose vertices are still unmatched
    """

    n_a, n_b = sizes
    if row_matching.shape != (n_modes * n_a, n_modes * n_b):
        raise MultalignDimensionError(
            f"Row matching of shape {row_matching.shape} does not fit {n_modes} modes"
        )

    rows, cols, kept = _accept_greedy(
        row_matching.rows % max(n_a, 1),
        row_matching.cols % max(n_b, 1),
        np.asarray(weights, dtype=np.float64),
        np.zeros(n_a, dtype=bool),
        np.zeros(n_b, dtype=bool),
    )
    return VertexMatching(rows, cols, sizes, kept)


def resolve_projected(
    row_matching: Matching, weights: np.ndarray, n_modes: int, sizes: Tuple[int, int]
) -> VertexMatching:
    """
    Project row matches to vertices, sum the weights of repeated pairs, and match exactly

    Zero-weight projected pairs are then added where both vertices remain free.
    """

    n_a, n_b = sizes
    if row_matching.shape != (n_modes * n_a, n_modes * n_b):
        raise MultalignDimensionError(
            f"Row matching of shape {row_matching.shape} does not fit {n_modes} modes"
        )
    if not len(row_matching):
        return VertexMatching.empty(sizes)

    edges = WeightedEdgeList.from_arrays(
        row_matching.rows % n_a, row_matching.cols % n_b, weights, sizes
    )
    exact = exact_sparse_mwm(edges)

    summed = dict(zip(zip(edges.rows.tolist(), edges.cols.tolist()), edges.weights.tolist()))
    rows, cols = exact.rows.tolist(), exact.cols.tolist()
    kept = [summed[pair] for pair in zip(rows, cols)]

    used_rows = np.zeros(n_a, dtype=bool)
    used_cols = np.zeros(n_b, dtype=bool)
    used_rows[exact.rows] = True
    used_cols[exact.cols] = True
    extra = _accept_greedy(edges.rows, edges.cols, edges.weights, used_rows, used_cols)

    return VertexMatching(rows + extra[0], cols + extra[1], sizes, kept + extra[2])


RESOLVERS: Dict[str, Callable[..., VertexMatching]] = {
    "greedy": resolve_greedy,
    "projected": resolve_projected,
}


def matcher_names(matcher: str) -> Tuple[str, ...]:
    """Matchers to run for a selector, in enumeration order"""
    return MATCHERS if matcher == "all" else (matcher,)


def iter_row_matchings(
    net_a: MultimodalNetwork,
    net_b: MultimodalNetwork,
    factors: LowRankFactors,
    matcher: str,
) -> Iterator[Tuple[str, Matching]]:
    """
    Yield (matcher name, row matching) for every selected matcher
    """

    names = matcher_names(matcher)
    candidates = None if names == ("dense",) else rank1_candidates(factors)
    adjacency_a = adjacency_b = None
    if "maxoverlap" in names:
        adjacency_a = build_multimodal_adjacency(net_a)
        adjacency_b = build_multimodal_adjacency(net_b)

    for name in names:
        yield name, select_matching(name, factors, adjacency_a, adjacency_b, candidates)


class _Best:
    """Running argmax over candidates, first one wins ties"""

    def __init__(self) -> None:
        self.result: Optional[Tuple[VertexMatching, int, Tuple[int, ...], Strategy]] = None
        self.candidates: List[Candidate] = []

    def offer(
        self,
        strategy: Strategy,
        matching: VertexMatching,
        net_a: MultimodalNetwork,
        net_b: MultimodalNetwork,
    ) -> None:
        total, per_mode = multimodal_overlap(matching, net_a, net_b)
        LOGGER.debug("%s: overlap %d", strategy.label, total)
        self.candidates.append(Candidate(strategy, total))
        if self.result is None or total > self.result[1]:
            self.result = (matching, total, per_mode, strategy)

    def finish(self, started: float, factors: Optional[LowRankFactors] = None) -> AlignmentResult:
        matching, total, per_mode, strategy = self.result
        return AlignmentResult(
            matching=matching,
            overlap=total,
            per_mode_overlap=per_mode,
            strategy=strategy,
            timing=time.perf_counter() - started,
            candidates=tuple(self.candidates),
            factors=factors,
        )


def align_multimodal(
    net_a: MultimodalNetwork,
    net_b: MultimodalNetwork,
    cfg: Optional[MsdConfig] = None,
    matcher: str = "all",
) -> AlignmentResult:
    """
    Align with the multimodal similarity decomposition

    Every selected matcher is resolved with every resolver and the highest overlap wins,
    ties going to the first in (matcher, resolver) enumeration order.
    """

    check_mode_names(net_a, net_b)
    started = time.perf_counter()
    cfg = cfg or MsdConfig()
    factors = msd(net_a, net_b, cfg)
    sizes = (net_a.n_vertices, net_b.n_vertices)
    best = _Best()

    for name, row_matching in iter_row_matchings(net_a, net_b, factors, matcher):
        weights = factors.entries(row_matching.rows, row_matching.cols)
        for resolver, resolve in RESOLVERS.items():
            vertex_matching = resolve(row_matching, weights, net_a.n_modes, sizes)
            best.offer(Strategy(name, resolver), vertex_matching, net_a, net_b)

    result = best.finish(started, factors)
    LOGGER.info(
        "Multimodal alignment: overlap %d with %s in %.2fs",
        result.overlap,
        result.strategy.label,
        result.timing,
    )
    return result


def baseline_sources(
    net_a: MultimodalNetwork, net_b: MultimodalNetwork
) -> Iterator[Tuple[str, MultimodalNetwork, MultimodalNetwork]]:
    """
    The smashed pair followed by each mode pair
    """

    yield "smashed", smash(net_a), smash(net_b)
    for k, name in enumerate(net_a.names):
        yield f"mode {name}", net_a.select_modes([k]), net_b.select_modes([k])


def align_pairwise_baseline(
    net_a: MultimodalNetwork,
    net_b: MultimodalNetwork,
    cfg: Optional[MsdConfig] = None,
    matcher: str = "all",
    sources: Optional[Sequence[str]] = None,
) -> AlignmentResult:
    """
    Best single-mode alignment, from the smashed networks or from one mode pair,
    judged by its overlap on the full multimodal pair
    """

    check_mode_names(net_a, net_b)
    started = time.perf_counter()
    cfg = cfg or MsdConfig()
    sizes = (net_a.n_vertices, net_b.n_vertices)
    best = _Best()

    pairs = list(baseline_sources(net_a, net_b))
    for num, (source, single_a, single_b) in enumerate(pairs, 1):
        if sources is not None and source not in sources:
            continue
        LOGGER.debug("(%d of %d) Pairwise alignment on %s", num, len(pairs), source)
        factors = msd(single_a, single_b, cfg)
        for name, row_matching in iter_row_matchings(single_a, single_b, factors, matcher):
            # A single mode has one row per vertex, so there are no conflicts to resolve
            weights = factors.entries(row_matching.rows, row_matching.cols)
            vertex_matching = VertexMatching(row_matching.rows, row_matching.cols, sizes, weights)
            best.offer(Strategy(name, "direct", source), vertex_matching, net_a, net_b)

    result = best.finish(started)
    LOGGER.info(
        "Pairwise baseline: overlap %d with %s in %.2fs",
        result.overlap,
        result.strategy.label,
        result.timing,
    )
    return result


def best_candidates(result: AlignmentResult) -> Dict[str, int]:
    """
    Highest overlap per matcher (multimodal) or per source (pairwise)
    """

    table: Dict[str, int] = {}
    for strategy, overlap in result.candidates:
        key = strategy.matcher if strategy.source == "multimodal" else strategy.source
        table[key] = max(overlap, table.get(key, 0))

    return table


def write_alignment(
    result: AlignmentResult,
    net_a: MultimodalNetwork,
    net_b: MultimodalNetwork,
    directory: Path,
) -> None:
    """
    Write alignment.tsv and the summary.yaml sidecar
    """

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    matching = result.matching
    order = np.argsort(matching.rows, kind="stable")

    table = pd.DataFrame(
        {
            "vertex_label_A": [net_a.vertex_labels[i] for i in matching.rows[order]],
            "vertex_label_B": [net_b.vertex_labels[i] for i in matching.cols[order]],
            "y_weight": matching.weights[order],
        }
    )
    table.to_csv(directory / "alignment.tsv", sep="\t", index=False)

    summary = {
        "overlap": int(result.overlap),
        "per_mode_overlap": {
            name: int(count) for name, count in zip(net_a.names, result.per_mode_overlap)
        },
        "strategy": {
            "matcher": result.strategy.matcher,
            "resolver": result.strategy.resolver,
            "source": result.strategy.source,
        },
        "timing_seconds": round(float(result.timing), 6),
        "matched_vertices": len(matching),
        "note": OVERLAP_NOTE,
        "candidates": [
            {"strategy": strategy.label, "overlap": int(overlap)}
            for strategy, overlap in result.candidates
        ],
    }
    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    with (directory / "summary.yaml").open("w", encoding="utf-8") as stream:
        yaml.dump(summary, stream)

    LOGGER.info("Wrote %d aligned pairs to %s", len(matching), directory)

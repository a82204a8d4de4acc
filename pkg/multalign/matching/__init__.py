# Licensed under the MIT License.
"""
Bipartite matching on a similarity matrix Y available only as nonnegative factors U V^T

Every factor column (u_i, v_i) yields a rank-1 matching X_i by sorting. The selectors choose
among the X_i, or solve exactly on their union, and each keeps at least 1/r of the optimal
weight on Y. No selector materializes Y except dense_matching(), which is size-guarded.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from multalign.exceptions import MultalignDataError, MultalignDimensionError, MultalignDomainError
from multalign.matching.exact import exact_dense_mwm, exact_sparse_mwm
from multalign.matching.types import Matching, WeightedEdgeList
from multalign.msd import DENSE_LIMIT, LowRankFactors
from multalign.network import MultimodalAdjacency


LOGGER = logging.getLogger(__name__)

# Relative precision at which factor values count as ties
TIE_DECIMALS = 12

__all__ = (
    "Matching",
    "WeightedEdgeList",
    "dense_matching",
    "exact_dense_mwm",
    "exact_sparse_mwm",
    "matching_weight_lowrank",
    "max_overlap_select",
    "maxweight_1k",
    "rank1_candidates",
    "rank1_matching",
    "rank1_order",
    "rank1_weights",
    "row_overlap",
    "select_matching",
    "simple_1k",
    "union_1k",
)


def rank1_order(values: np.ndarray) -> np.ndarray:
    """
    Indices sorted by descending value, ties by ascending index
    """

    values = np.asarray(values, dtype=np.float64)
    if values.size and values.min() < 0:
        raise MultalignDomainError("Rank-1 matching requires nonnegative vectors")

    top = values.max() if values.size else 0.0
    if top == 0:
        return np.arange(values.size)
    quantized = np.rint(values / top * 10.0**TIE_DECIMALS)
    return np.argsort(-quantized, kind="stable")


def rank1_matching(u: np.ndarray, v: np.ndarray) -> Matching:
    """
    Maximum-weight matching for the rank-1 matrix u v^T

    Pairs the i-th largest entry of u with the i-th largest entry of v, which is optimal by
    the rearrangement inequality.
    """

    order_u = rank1_order(u)
    order_v = rank1_order(v)
    return Matching.from_orders(order_u, order_v, (len(order_u), len(order_v)))


def rank1_candidates(factors: LowRankFactors) -> List[Matching]:
    """The matchings X_1..X_r, one per factor column"""
    return [rank1_matching(*factors.column(i)) for i in range(factors.rank)]


def rank1_weights(factors: LowRankFactors) -> np.ndarray:
    """
    Weight f_i of each X_i in its own factor u_i v_i^T, from the sorted columns
    """

    size = min(factors.shape)
    if size == 0:
        return np.zeros(factors.rank)

    # Rows of the transposes are contiguous factor columns
    top_u = np.sort(factors.u.T, axis=1)[:, ::-1][:, :size]
    top_v = np.sort(factors.v.T, axis=1)[:, ::-1][:, :size]
    return np.einsum("ij,ij->i", top_u, top_v)


def matching_weight_lowrank(matching: Matching, u: np.ndarray, v: np.ndarray) -> float:
    """
    Weight Y . X of a matching, computed from the factors in O(|X| r)
    """

    if not len(matching):
        return 0.0

    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim == 1:
        return float(np.dot(u[matching.rows], v[matching.cols]))

    return float(LowRankFactors(u, v).entries(matching.rows, matching.cols).sum())


def simple_1k(
    factors: LowRankFactors, candidates: Optional[Sequence[Matching]] = None
) -> Tuple[Matching, np.ndarray]:
    """
    Choose the X_i with the largest weight f_i in its own rank-1 factor u_i v_i^T

    Returns the chosen matching and every f_i. Only the chosen X_i is built when no
    candidates are given.
    """

    own = rank1_weights(factors)
    best = int(np.argmax(own))
    LOGGER.debug("simple 1/k picked column %d of %d (f=%g)", best, len(own), own[best])

    if candidates is None:
        return rank1_matching(*factors.column(best)), own
    return candidates[best], own


def maxweight_1k(
    factors: LowRankFactors, candidates: Optional[Sequence[Matching]] = None
) -> Matching:
    """
    Choose the X_i with the largest weight in the full Y
    """

    candidates = rank1_candidates(factors) if candidates is None else candidates
    weights = np.array(
        [float(factors.entries(m.rows, m.cols).sum()) for m in candidates], dtype=np.float64
    )
    best = int(np.argmax(weights))
    LOGGER.debug("max-weight 1/k picked column %d (weight %g)", best, weights[best])

    return candidates[best]


def union_1k(factors: LowRankFactors, candidates: Optional[Sequence[Matching]] = None) -> Matching:
    """
    Exact maximum-weight matching on the union of the X_i edges, weighted by Y
    """

    candidates = rank1_candidates(factors) if candidates is None else candidates
    n_rows, n_cols = factors.shape
    rows = np.concatenate([m.rows for m in candidates])
    cols = np.concatenate([m.cols for m in candidates])

    keys = np.unique(rows * n_cols + cols)
    rows, cols = keys // n_cols, keys % n_cols
    weights = factors.entries(rows, cols)
    keep = weights > 0
    LOGGER.debug("union 1/k: %d distinct candidate edges, %d nonzero", len(keys), keep.sum())

    edges = WeightedEdgeList.from_arrays(rows[keep], cols[keep], weights[keep], (n_rows, n_cols))
    return exact_sparse_mwm(edges)


def row_overlap(
    matching: Matching, adjacency_a: MultimodalAdjacency, adjacency_b: MultimodalAdjacency
) -> float:
    """
    Preserved multimodal adjacency entries, (X^T M_A X) . M_B / 2
    """

    x = matching.as_sparse()
    return float((x.T @ adjacency_a.matrix @ x).multiply(adjacency_b.matrix).sum() / 2.0)


def max_overlap_select(
    factors: LowRankFactors,
    adjacency_a: MultimodalAdjacency,
    adjacency_b: MultimodalAdjacency,
    candidates: Optional[Sequence[Matching]] = None,
) -> Matching:
    """
    Choose the X_i preserving the most multimodal adjacency edges
    """

    if factors.shape != (adjacency_a.size, adjacency_b.size):
        raise MultalignDimensionError(
            f"Factors of shape {factors.shape} do not match multimodal adjacencies of size "
            f"{adjacency_a.size} and {adjacency_b.size}"
        )

    candidates = rank1_candidates(factors) if candidates is None else candidates
    overlaps = np.array([row_overlap(m, adjacency_a, adjacency_b) for m in candidates])
    best = int(np.argmax(overlaps))
    LOGGER.debug("max overlap picked column %d (row overlap %g)", best, overlaps[best])

    return candidates[best]


def dense_matching(factors: LowRankFactors, limit: int = DENSE_LIMIT) -> Matching:
    """
    Exact assignment on the materialized Y, small problems only
    """

    return exact_dense_mwm(factors.dense(limit))


def select_matching(
    name: str,
    factors: LowRankFactors,
    adjacency_a: Optional[MultimodalAdjacency] = None,
    adjacency_b: Optional[MultimodalAdjacency] = None,
    candidates: Optional[Sequence[Matching]] = None,
) -> Matching:
    """
    Row-level matching produced by the named matcher
    """

    if name == "dense":
        return dense_matching(factors)
    if name == "simple":
        return simple_1k(factors, candidates)[0]
    if name == "maxweight":
        return maxweight_1k(factors, candidates)
    if name == "union":
        return union_1k(factors, candidates)
    if name == "maxoverlap":
        if adjacency_a is None or adjacency_b is None:
            raise MultalignDataError("The maxoverlap matcher needs both multimodal adjacencies")
        return max_overlap_select(factors, adjacency_a, adjacency_b, candidates)

    raise MultalignDataError(f"Unknown matcher '{name}'")

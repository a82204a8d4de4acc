# Licensed under the MIT License.
"""
Matching and weighted edge list types
"""

from dataclasses import dataclass, field
from typing import Optional, Set, Tuple

import numpy as np
import scipy.sparse as sp

from multalign.exceptions import MultalignDataError, MultalignDomainError


@dataclass(frozen=True, eq=False)
class Matching:
    """
    A 1-1 set of (row, col) pairs between index sets of the given shape
    """

    rows: np.ndarray = field(repr=False)
    cols: np.ndarray = field(repr=False)
    shape: Tuple[int, int]

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=np.int64).ravel()
        cols = np.asarray(self.cols, dtype=np.int64).ravel()
        n_rows, n_cols = self.shape

        if len(rows) != len(cols):
            raise MultalignDataError(f"Got {len(rows)} rows but {len(cols)} columns")
        if len(rows) and (
            rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols
        ):
            raise MultalignDataError(f"Matched index out of range for shape {self.shape}")
        if len(np.unique(rows)) != len(rows) or len(np.unique(cols)) != len(cols):
            raise MultalignDataError("A matching may use each row and column at most once")

        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "shape", (int(n_rows), int(n_cols)))

    @classmethod
    def from_orders(
        cls, order_rows: np.ndarray, order_cols: np.ndarray, shape: Tuple[int, int]
    ) -> "Matching":
        """
        Pair the i-th entries of a row permutation and a column permutation

        Prefixes of two permutations are 1-1 already, so the range and uniqueness
        checks are skipped.
        """

        size = min(len(order_rows), len(order_cols))
        matching = object.__new__(cls)
        object.__setattr__(matching, "rows", np.asarray(order_rows[:size], dtype=np.int64))
        object.__setattr__(matching, "cols", np.asarray(order_cols[:size], dtype=np.int64))
        object.__setattr__(matching, "shape", (int(shape[0]), int(shape[1])))
        return matching

    @classmethod
    def empty(cls, shape: Tuple[int, int]) -> "Matching":
        """Matching with no pairs"""
        return cls(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), shape)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pairs(self) -> Set[Tuple[int, int]]:
        """Matched pairs as a set of tuples"""
        return set(zip(self.rows.tolist(), self.cols.tolist()))

    def as_sparse(self) -> sp.csr_matrix:
        """0/1 matching matrix X"""
        return sp.csr_matrix(
            (np.ones(len(self.rows)), (self.rows, self.cols)), shape=self.shape
        )

    def weight(self, weights: np.ndarray) -> float:
        """Total weight X . W for a dense weight matrix"""
        return float(np.asarray(weights)[self.rows, self.cols].sum())


@dataclass(frozen=True, eq=False)
class WeightedEdgeList:
    """
    Candidate edges of a bipartite graph with nonnegative weights, duplicates summed
    """

    rows: np.ndarray = field(repr=False)
    cols: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    shape: Tuple[int, int]

    @classmethod
    def from_arrays(
        cls,
        rows: np.ndarray,
        cols: np.ndarray,
        weights: np.ndarray,
        shape: Optional[Tuple[int, int]] = None,
    ) -> "WeightedEdgeList":
        """
        Build an edge list, summing weights of repeated (row, col) pairs
        """

        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        weights = np.asarray(weights, dtype=np.float64).ravel()

        if not len(rows) == len(cols) == len(weights):
            raise MultalignDataError("Edge rows, columns, and weights must have equal lengths")
        if not np.isfinite(weights).all():
            raise MultalignDataError("Edge weights must be finite")
        if len(weights) and weights.min() < 0:
            raise MultalignDomainError("Edge weights must be nonnegative")
        if len(rows) and min(rows.min(), cols.min()) < 0:
            raise MultalignDataError("Edge indices must be nonnegative")

        if shape is None:
            shape = (
                int(rows.max()) + 1 if len(rows) else 0,
                int(cols.max()) + 1 if len(cols) else 0,
            )
        elif len(rows) and (rows.max() >= shape[0] or cols.max() >= shape[1]):
            raise MultalignDataError(f"Edge index out of range for shape {shape}")

        # Sum duplicates while keeping explicit zero-weight edges
        keys = rows * max(shape[1], 1) + cols
        unique, inverse = np.unique(keys, return_inverse=True)
        summed = np.zeros(len(unique), dtype=np.float64)
        np.add.at(summed, inverse, weights)

        return cls(
            rows=unique // max(shape[1], 1),
            cols=unique % max(shape[1], 1),
            weights=summed,
            shape=(int(shape[0]), int(shape[1])),
        )

    @classmethod
    def from_triplets(cls, triplets, shape: Optional[Tuple[int, int]] = None):
        """Build from (row, col, weight) triplets"""

        triplets = list(triplets)
        return cls.from_arrays(
            [t[0] for t in triplets], [t[1] for t in triplets], [t[2] for t in triplets], shape
        )

    def __len__(self) -> int:
        return len(self.weights)

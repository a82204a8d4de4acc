# Licensed under the MIT License.
"""
Multimodal similarity decomposition

Runs t PageRank power steps on each network's multimodal adjacency, one chain per mode, and
keeps every iterate. With both networks processed the same way, the aligned iterate columns
form nonnegative factors U and V whose product UV^T is the t-step IsoRank iterate for the
pair with the block-uniform starting similarity. The dense iterate is never formed except by
dense_isorank(), a size-guarded reference used for verification.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp

from multalign.config import MsdConfig
from multalign.exceptions import MultalignDataError, MultalignDimensionError, MultalignDomainError
from multalign.network import MultimodalNetwork, build_multimodal_adjacency
from multalign.sparse import column_normalize, matvec, normalize_sum


LOGGER = logging.getLogger(__name__)

DENSE_LIMIT = 10**7


class ColumnMeta(NamedTuple):
    """Origin of a factor column"""

    mode: int
    power: int
    scale: float

    @property
    def tag(self) -> str:
        """Column header used in factor dumps"""
        return f"mode{self.mode + 1}_power{self.power}"


@dataclass(frozen=True, eq=False)
class LowRankFactors:
    """
    Aligned nonnegative factors, Y = U V^T
    Column c of U and column c of V come from the same (mode, power) pair
    """

    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    column_meta: Tuple[ColumnMeta, ...] = ()

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if u.ndim == 1:
            u = u[:, np.newaxis]
        if v.ndim == 1:
            v = v[:, np.newaxis]
        if u.ndim != 2 or v.ndim != 2 or u.shape[1] != v.shape[1]:
            raise MultalignDimensionError(
                f"Factors of shape {u.shape} and {v.shape} do not share a column count"
            )
        if (u.size and u.min() < 0) or (v.size and v.min() < 0):
            raise MultalignDomainError("Low-rank factors must be nonnegative")
        if self.column_meta and len(self.column_meta) != u.shape[1]:
            raise MultalignDimensionError(
                f"Got metadata for {len(self.column_meta)} of {u.shape[1]} columns"
            )

        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def rank(self) -> int:
        """Number of factor columns, r"""
        return self.u.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        """Shape of Y"""
        return self.u.shape[0], self.v.shape[0]

    def column(self, index: int) -> Tuple[np.ndarray, np.ndarray]:
        """The rank-1 pair (u_i, v_i)"""
        return self.u[:, index], self.v[:, index]

    def entries(self, rows: np.ndarray, cols: np.ndarray, chunk: int = 16384) -> np.ndarray:
        """
        Y values at the given coordinates, computed from the factors in bounded chunks
        """

        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.empty(len(rows), dtype=np.float64)
        for start in range(0, len(rows), chunk):
            stop = start + chunk
            values[start:stop] = np.einsum(
                "ij,ij->i", self.u[rows[start:stop]], self.v[cols[start:stop]]
            )

        return values

    def dense(self, limit: int = DENSE_LIMIT) -> np.ndarray:
        """
        Materialize Y, only for small problems
        """

        n_rows, n_cols = self.shape
        if n_rows * n_cols > limit:
            raise MultalignDimensionError(
                f"Refusing to materialize a {n_rows}x{n_cols} similarity matrix (limit {limit})"
            )

        return self.u @ self.v.T


def column_scales(alpha: float, iterations: int, n_modes: int) -> np.ndarray:
    """
    Scale applied to the normalized iterate of each power j in 0..t

    The products of matching U and V scales are (1-alpha) alpha^j / m for j < t and
    alpha^t / m for j = t, so the per-mode starting mass 1/sqrt(m) lives here.
    """

    powers = np.arange(iterations + 1)
    weights = (1.0 - alpha) * alpha**powers
    weights[-1] = alpha**iterations
    return np.sqrt(weights / n_modes)


def power_chain(transition: sp.spmatrix, start: np.ndarray, iterations: int) -> np.ndarray:
    """
    Unscaled PageRank iterates z_0..z_t, each normalized to sum 1 (or left at 0)
    """

    chain = np.empty((len(start), iterations + 1), dtype=np.float64)
    chain[:, 0] = normalize_sum(start)
    for j in range(1, iterations + 1):
        chain[:, j] = normalize_sum(matvec(transition, chain[:, j - 1]))

    return chain


def pagerank_powers(net: MultimodalNetwork, cfg: MsdConfig) -> np.ndarray:
    """
    Factor matrix of one network, m|V| x m(t+1), columns laid out mode-major then power-major
    """

    adjacency = build_multimodal_adjacency(net)
    transition = column_normalize(adjacency.matrix)
    n, m, t = net.n_vertices, net.n_modes, cfg.iterations
    scales = column_scales(cfg.alpha, t, m)

    factor = np.zeros((m * n, m * (t + 1)), dtype=np.float64)
    for k in range(m):
        start = np.zeros(m * n, dtype=np.float64)
        start[k * n : (k + 1) * n] = 1.0
        factor[:, k * (t + 1) : (k + 1) * (t + 1)] = power_chain(transition, start, t) * scales
        LOGGER.debug("Finished power chain for mode %d of %d", k + 1, m)

    return factor


def column_layout(cfg: MsdConfig, n_modes: int) -> Tuple[ColumnMeta, ...]:
    """
    Metadata for the columns produced by pagerank_powers()
    """

    scales = column_scales(cfg.alpha, cfg.iterations, n_modes)
    return tuple(
        ColumnMeta(mode=k, power=j, scale=float(scales[j]))
        for k in range(n_modes)
        for j in range(cfg.iterations + 1)
    )


def check_mode_counts(net_a: MultimodalNetwork, net_b: MultimodalNetwork) -> None:
    """
    Modes correspond by position, so both networks need the same number
    """

    if net_a.n_modes != net_b.n_modes:
        raise MultalignDataError(
            f"Networks have different mode counts: {net_a.n_modes} and {net_b.n_modes}"
        )


def msd(net_a: MultimodalNetwork, net_b: MultimodalNetwork, cfg: MsdConfig) -> LowRankFactors:
    """
    Low-rank factors of the t-step multimodal IsoRank iterate
    """

    check_mode_counts(net_a, net_b)
    LOGGER.info(
        "Computing rank %d decomposition (alpha=%g, t=%d)",
        net_a.n_modes * (cfg.iterations + 1),
        cfg.alpha,
        cfg.iterations,
    )

    return LowRankFactors(
        u=pagerank_powers(net_a, cfg),
        v=pagerank_powers(net_b, cfg),
        column_meta=column_layout(cfg, net_a.n_modes),
    )


def uniform_similarity(n_modes: int, n_rows: int, n_cols: int) -> sp.csr_matrix:
    """
    Block-diagonal similarity with constant blocks summing to 1 overall
    """

    gamma = 1.0 / (n_modes * n_rows * n_cols)
    block = np.full((n_rows, n_cols), gamma)
    return sp.csr_matrix(sp.block_diag([block] * n_modes, format="csr"))


def dense_isorank(
    net_a: MultimodalNetwork,
    net_b: MultimodalNetwork,
    cfg: MsdConfig,
    similarity: Optional[sp.spmatrix] = None,
    iterations: Optional[int] = None,
) -> np.ndarray:
    """
    Explicit power method Y <- alpha P Y Q^T + (1 - alpha) S starting from Y = S

    Y is renormalized to sum 1 after every step, which only matters when mass is lost through
    zero columns. Intended for small problems, such as verifying msd().
    """

    check_mode_counts(net_a, net_b)
    size_a = net_a.n_modes * net_a.n_vertices
    size_b = net_b.n_modes * net_b.n_vertices
    if size_a * size_b > DENSE_LIMIT:
        raise MultalignDimensionError(
            f"Dense IsoRank on {size_a}x{size_b} exceeds the {DENSE_LIMIT} entry limit"
        )

    if similarity is None:
        similarity = uniform_similarity(net_a.n_modes, net_a.n_vertices, net_b.n_vertices)
    similarity = np.asarray(sp.csr_matrix(similarity).todense(), dtype=np.float64)
    if similarity.shape != (size_a, size_b):
        raise MultalignDimensionError(
            f"Similarity of shape {similarity.shape} does not match {(size_a, size_b)}"
        )
    if similarity.min() < 0:
        raise MultalignDomainError("Similarity must be nonnegative")

    p_matrix = column_normalize(build_multimodal_adjacency(net_a).matrix)
    q_matrix = column_normalize(build_multimodal_adjacency(net_b).matrix)
    alpha = cfg.alpha

    result = similarity.copy()
    for _ in range(cfg.iterations if iterations is None else iterations):
        # P Y Q^T computed as P (Q Y^T)^T to keep both products sparse-dense
        propagated = p_matrix @ np.asarray(q_matrix @ result.T).T
        result = alpha * np.asarray(propagated) + (1.0 - alpha) * similarity
        total = result.sum()
        if total > 0:
            result /= total

    return result


def write_factors(factors: LowRankFactors, directory: Path) -> None:
    """
    Write U.tsv and V.tsv with (mode, power) column headers
    """

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    headers = [meta.tag for meta in factors.column_meta] or [
        f"column{c}" for c in range(factors.rank)
    ]

    for name, matrix in (("U", factors.u), ("V", factors.v)):
        path = directory / f"{name}.tsv"
        pd.DataFrame(matrix, columns=headers).to_csv(path, sep="\t", index_label="row")
        LOGGER.info("Wrote %s factor (%dx%d) to %s", name, *matrix.shape, path)

# Licensed under the MIT License.
"""
Multimodal network model, multimodal adjacency construction, and per-mode statistics
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from multalign.exceptions import MultalignDataError
from multalign.sparse import from_arrays


LOGGER = logging.getLogger(__name__)

Edge = Tuple[int, int]


def canonical_edges(edges: Iterable[Edge], n_vertices: int) -> FrozenSet[Edge]:
    """
    Store each undirected edge once with the smaller index first
    """

    canonical = set()
    for edge in edges:
        u, v = (int(x) for x in edge)
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise MultalignDataError(f"Edge {edge} references a vertex outside 0..{n_vertices - 1}")
        canonical.add((u, v) if u <= v else (v, u))

    return frozenset(canonical)


@dataclass(frozen=True)
class MultimodalNetwork:
    """
    A shared vertex label universe with one undirected edge set per mode
    Use from_edges() to build one from raw, possibly directed edge lists
    """

    vertex_labels: Tuple[str, ...]
    modes: Tuple[FrozenSet[Edge], ...]
    mode_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if not self.modes:
            raise MultalignDataError("A multimodal network needs at least one mode")
        if len(set(self.vertex_labels)) != len(self.vertex_labels):
            raise MultalignDataError("Vertex labels must be distinct")
        if self.mode_names is not None and len(self.mode_names) != len(self.modes):
            raise MultalignDataError(
                f"Got {len(self.mode_names)} mode names for {len(self.modes)} modes"
            )

        n_vertices = len(self.vertex_labels)
        for edges in self.modes:
            for u, v in edges:
                if u > v or not 0 <= u < n_vertices or v >= n_vertices:
                    raise MultalignDataError(f"Edge {(u, v)} is not a canonical in-range edge")

    @classmethod
    def from_edges(
        cls,
        vertex_labels: Sequence,
        modes: Iterable[Iterable[Edge]],
        mode_names: Optional[Sequence[str]] = None,
    ) -> "MultimodalNetwork":
        """
        Create a network, canonicalizing and deduplicating edges
        """

        labels = tuple(str(label) for label in vertex_labels)
        return cls(
            vertex_labels=labels,
            modes=tuple(canonical_edges(edges, len(labels)) for edges in modes),
            mode_names=None if mode_names is None else tuple(str(name) for name in mode_names),
        )

    @property
    def n_vertices(self) -> int:
        """Size of the vertex universe"""
        return len(self.vertex_labels)

    @property
    def n_modes(self) -> int:
        """Number of modes, m"""
        return len(self.modes)

    @property
    def names(self) -> Tuple[str, ...]:
        """Mode names, defaulting to 1-based positions"""
        return self.mode_names or tuple(str(k) for k in range(1, self.n_modes + 1))

    @property
    def edge_counts(self) -> Tuple[int, ...]:
        """Number of undirected edges per mode"""
        return tuple(len(edges) for edges in self.modes)

    @property
    def total_edges(self) -> int:
        """Total number of edges over all modes"""
        return sum(self.edge_counts)

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, ...]:
        """Per mode, the sorted edges as an (E, 2) integer array"""
        return tuple(
            np.array(sorted(edges), dtype=np.int64).reshape(-1, 2) for edges in self.modes
        )

    def adjacency(self, mode: int) -> sp.csr_matrix:
        """
        Symmetric 0/1 adjacency matrix of a single mode
        """

        edges = self.edge_arrays[mode]
        loops = edges[:, 0] == edges[:, 1]
        rows = np.concatenate((edges[:, 0], edges[~loops, 1]))
        cols = np.concatenate((edges[:, 1], edges[~loops, 0]))
        return from_arrays(self.n_vertices, self.n_vertices, rows, cols, np.ones(len(rows)))

    def select_modes(self, indices: Sequence[int]) -> "MultimodalNetwork":
        """
        Network over the same vertex universe restricted to the given modes, in the given order
        """

        return MultimodalNetwork(
            vertex_labels=self.vertex_labels,
            modes=tuple(self.modes[k] for k in indices),
            mode_names=tuple(self.names[k] for k in indices),
        )

    def permuted(
        self, permutation: Sequence[int], vertex_labels: Optional[Sequence] = None
    ) -> "MultimodalNetwork":
        """
        Move vertex v to index permutation[v]
        Labels follow their vertices unless new labels are given
        """

        permutation = np.asarray(permutation, dtype=np.int64)
        if vertex_labels is None:
            labels = [None] * self.n_vertices
            for old, new in enumerate(permutation):
                labels[new] = self.vertex_labels[old]
        else:
            labels = vertex_labels

        return MultimodalNetwork.from_edges(
            labels,
            (((permutation[u], permutation[v]) for u, v in edges) for edges in self.modes),
            self.mode_names,
        )


@dataclass(frozen=True, eq=False)
class ModePresence:
    """
    Per mode, the vertices that are an endpoint of at least one edge in the mode
    """

    masks: np.ndarray = field(repr=False)

    def __getitem__(self, mode: int) -> FrozenSet[int]:
        return frozenset(np.flatnonzero(self.masks[mode]).tolist())

    def __len__(self) -> int:
        return self.masks.shape[0]

    def common(self, mode_i: int, mode_j: int) -> np.ndarray:
        """Vertices present in both modes"""
        return np.flatnonzero(self.masks[mode_i] & self.masks[mode_j])


def mode_presence(net: MultimodalNetwork) -> ModePresence:
    """
    Derive vertex presence in each mode from edge endpoints
    """

    masks = np.zeros((net.n_modes, net.n_vertices), dtype=bool)
    for k, edges in enumerate(net.edge_arrays):
        masks[k, edges.ravel()] = True

    return ModePresence(masks=masks)


@dataclass(frozen=True, eq=False)
class MultimodalAdjacency:
    """
    The m|V| x m|V| block matrix with mode adjacencies on the diagonal blocks and
    diagonal 0/1 couplings between modes off the diagonal. Row r is vertex r % |V| in mode r // |V|
    """

    matrix: sp.csr_matrix = field(repr=False)
    n_vertices: int
    n_modes: int

    @property
    def size(self) -> int:
        """Number of rows, m|V|"""
        return self.matrix.shape[0]

    def row_map(self, row):
        """Map row index (or array of indices) to (mode, vertex)"""
        return np.divmod(row, self.n_vertices)

    def row_index(self, mode, vertex):
        """Map (mode, vertex) to the row index"""
        return mode * self.n_vertices + vertex


def build_multimodal_adjacency(net: MultimodalNetwork) -> MultimodalAdjacency:
    """
    Assemble the multimodal adjacency matrix with 1.0 entries
    """

    n = net.n_vertices
    presence = mode_presence(net)
    rows, cols = [], []

    for k, edges in enumerate(net.edge_arrays):
        loops = edges[:, 0] == edges[:, 1]
        offset = k * n
        rows.extend((edges[:, 0] + offset, edges[~loops, 1] + offset))
        cols.extend((edges[:, 1] + offset, edges[~loops, 0] + offset))

    for i in range(net.n_modes):
        for j in range(i + 1, net.n_modes):
            common = presence.common(i, j)
            rows.extend((common + i * n, common + j * n))
            cols.extend((common + j * n, common + i * n))

    size = net.n_modes * n
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    matrix = from_arrays(size, size, rows, cols, np.ones(len(rows)))
    LOGGER.debug("Multimodal adjacency: %d rows, %d stored entries", size, matrix.nnz)

    return MultimodalAdjacency(matrix=matrix, n_vertices=n, n_modes=net.n_modes)


def smash(net: MultimodalNetwork) -> MultimodalNetwork:
    """
    Single-mode network whose edge set is the union of all mode edge sets
    """

    union = frozenset().union(*net.modes)
    return MultimodalNetwork(
        vertex_labels=net.vertex_labels, modes=(union,), mode_names=("smashed",)
    )


@dataclass(frozen=True)
class ModeStats:
    """
    Graph measures of a single mode
    """

    name: str
    edge_count: int
    unique_vertex_count: int
    average_degree: float
    triangle_count: int
    density: float

    MEASURES = ("edge_count", "vertex_count", "avg_degree", "triangles", "density")

    def measure(self, name: str) -> float:
        """Look up a measure by its mode-ordering name"""
        return {
            "edge_count": self.edge_count,
            "vertex_count": self.unique_vertex_count,
            "avg_degree": self.average_degree,
            "triangles": self.triangle_count,
            "density": self.density,
        }[name]


def count_triangles(adjacency: sp.spmatrix) -> int:
    """
    Number of unordered vertex triples forming a triangle, self-loops ignored
    """

    simple = sp.csr_matrix(adjacency, copy=True)
    simple.setdiag(0)
    simple.eliminate_zeros()
    paths = simple @ simple
    return int(round(paths.multiply(simple).sum() / 6))


def mode_statistics(net: MultimodalNetwork) -> Tuple[ModeStats, ...]:
    """
    Edge count, unique vertex count, average degree, triangle count, and density of each mode
    """

    presence = mode_presence(net)
    stats = []
    for k, name in enumerate(net.names):
        edges = net.edge_counts[k]
        vertices = int(presence.masks[k].sum())
        stats.append(
            ModeStats(
                name=name,
                edge_count=edges,
                unique_vertex_count=vertices,
                average_degree=2.0 * edges / vertices if vertices else 0.0,
                triangle_count=count_triangles(net.adjacency(k)),
                density=2.0 * edges / (vertices * (vertices - 1)) if vertices >= 2 else 0.0,
            )
        )

    return tuple(stats)

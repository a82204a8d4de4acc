# Licensed under the MIT License.
"""
Readers and writers for multiplex edge-list files
"""

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from multalign.exceptions import MultalignDataError
from multalign.network import MultimodalNetwork


LOGGER = logging.getLogger(__name__)

FORMATS = ("multiplex", "routes")


def iter_fields(text: str) -> Iterator[Tuple[int, List[str]]]:
    """
    Yield (line number, fields) for non-blank, non-comment lines
    """

    for num, line in enumerate(text.splitlines(), 1):
        line = line.strip()  # pylint: disable=redefined-loop-name
        if not line or line.startswith("#"):
            continue
        yield num, line.split()


class LayeredEdges:
    """
    Accumulates edges per layer key while assigning vertex indices in order of appearance
    """

    def __init__(self) -> None:
        self.vertices: Dict[str, int] = {}
        self.layers: Dict[object, Set[Tuple[int, int]]] = {}

    def add(self, layer, node_a: str, node_b: str) -> None:
        """Add an undirected edge to a layer"""

        a = self.vertices.setdefault(node_a, len(self.vertices))
        b = self.vertices.setdefault(node_b, len(self.vertices))
        self.layers.setdefault(layer, set()).add((a, b) if a <= b else (b, a))

    def build(self, layer_keys: Iterable) -> MultimodalNetwork:
        """Create the network with modes in the given layer order"""

        layer_keys = tuple(layer_keys)
        if not layer_keys:
            raise MultalignDataError("No edges found, a network needs at least one mode")

        return MultimodalNetwork.from_edges(
            tuple(self.vertices),
            (self.layers.get(key, ()) for key in layer_keys),
            tuple(str(key) for key in layer_keys),
        )


def parse_multiplex_edgelist(
    text: str, layers: Optional[Iterable[int]] = None
) -> MultimodalNetwork:
    """
    Parse lines of the form 'layer_id node_a node_b [weight]'

    Modes are ordered by ascending layer id. Directed duplicates collapse into one undirected
    edge and weights are validated but ignored. When layers are declared, every line must
    reference one of them and empty declared layers become empty modes.
    """

    declared = None if layers is None else {int(layer) for layer in layers}
    edges = LayeredEdges()

    for num, fields in iter_fields(text):
        if len(fields) not in {3, 4}:
            raise MultalignDataError(
                f"Line {num}: expected 'layer_id node_a node_b [weight]', got {len(fields)} fields"
            )

        try:
            layer = int(fields[0])
            weight = float(fields[3]) if len(fields) == 4 else 1.0
        except ValueError as e:
            raise MultalignDataError(f"Line {num}: {e}") from e

        if not math.isfinite(weight):
            raise MultalignDataError(f"Line {num}: weight must be finite, got {fields[3]}")

        if layer < 1:
            raise MultalignDataError(
                f"Line {num}: layer id must be a positive integer, got {layer}"
            )
        if declared is not None and layer not in declared:
            raise MultalignDataError(f"Line {num}: unknown layer {layer}")

        edges.add(layer, fields[1], fields[2])

    LOGGER.debug("Parsed %d vertices in %d layers", len(edges.vertices), len(edges.layers))
    return edges.build(sorted(edges.layers if declared is None else declared))


def parse_routes(text: str, airlines: Optional[Iterable[str]] = None) -> MultimodalNetwork:
    """
    Parse lines of the form 'airline source dest', one mode per airline token
    Modes are ordered by airline token, or follow the declared airlines
    """

    declared = None if airlines is None else tuple(str(airline) for airline in airlines)
    edges = LayeredEdges()

    for num, fields in iter_fields(text):
        if len(fields) != 3:
            raise MultalignDataError(
                f"Line {num}: expected 'airline source dest', got {len(fields)} fields"
            )
        if declared is not None and fields[0] not in declared:
            raise MultalignDataError(f"Line {num}: unknown airline {fields[0]}")
        edges.add(fields[0], fields[1], fields[2])

    LOGGER.debug("Parsed %d airports for %d airlines", len(edges.vertices), len(edges.layers))
    return edges.build(sorted(edges.layers) if declared is None else declared)


def read_network_text(path: Path) -> str:
    """
    Contents of a UTF-8 network file
    """

    path = Path(path)
    if not path.is_file():
        raise MultalignDataError(f"Network file '{path}' does not exist")

    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise MultalignDataError(f"{path}: not UTF-8 text, {e.reason} at byte {e.start}") from e


def _parse(path: Path, text: str, file_format: str, modes: Optional[Sequence]) -> MultimodalNetwork:
    """Parse with the file name prefixed to any data error"""

    LOGGER.info("Reading %s network from %s", file_format, path)
    try:
        if file_format == "multiplex":
            return parse_multiplex_edgelist(text, modes)
        return parse_routes(text, modes)
    except MultalignDataError as e:
        raise MultalignDataError(f"{path}: {e}") from e


def load_network(
    path: Path, file_format: str = "multiplex", layers: Optional[Iterable[int]] = None
) -> MultimodalNetwork:
    """
    Read a network file in one of the supported formats
    Declared layers apply to the multiplex format only
    """

    if file_format not in FORMATS:
        raise MultalignDataError(f"Unknown format '{file_format}', expected one of {FORMATS}")

    modes = tuple(layers) if layers is not None and file_format == "multiplex" else None
    return _parse(path, read_network_text(path), file_format, modes)


def load_network_pair(
    path_a: Path,
    path_b: Path,
    file_format: str = "multiplex",
    layers: Optional[Iterable[int]] = None,
) -> Tuple[MultimodalNetwork, MultimodalNetwork]:
    """
    Read networks A and B with the same modes in the same order

    Modes correspond by layer id or airline, not by position. A mode found in only one
    file becomes an empty mode of the other network.
    """

    net_a = load_network(path_a, file_format, layers)
    net_b = load_network(path_b, file_format, layers)
    if net_a.names == net_b.names:
        return net_a, net_b

    names = set(net_a.names) | set(net_b.names)
    keys = sorted(int(name) for name in names) if file_format == "multiplex" else sorted(names)
    union = tuple(keys)
    LOGGER.warning(
        "Modes %s of %s and %s of %s differ, using modes %s for both",
        net_a.names,
        path_a,
        net_b.names,
        path_b,
        tuple(str(key) for key in union),
    )
    net_a, net_b = (
        _parse(Path(path), read_network_text(path), file_format, union) for path in (path_a, path_b)
    )
    return net_a, net_b


def format_multiplex_edgelist(net: MultimodalNetwork) -> str:
    """
    Serialize with layer ids 1..m in mode order
    Vertices without edges are not representable in this format
    """

    lines = [f"# {net.n_vertices} vertices, {net.n_modes} modes, {net.total_edges} edges"]
    labels = net.vertex_labels
    for layer, edges in enumerate(net.edge_arrays, 1):
        lines.extend(f"{layer} {labels[u]} {labels[v]}" for u, v in edges)

    return "\n".join(lines) + "\n"


def write_network(net: MultimodalNetwork, path: Path) -> None:
    """
    Write a network in the multiplex edge-list format
    """

    Path(path).write_text(format_multiplex_edgelist(net), encoding="utf-8")
    LOGGER.info("Wrote %d edges to %s", net.total_edges, path)

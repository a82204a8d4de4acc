# Licensed under the MIT License.
"""
Utility functions for tabular output
"""

import logging
from pathlib import Path
from typing import Iterable

import pandas as pd

from multalign.network import ModeStats


LOGGER = logging.getLogger(__name__)


def write_table(frame: pd.DataFrame, path: Path) -> Path:
    """
    Write a table as TSV when the suffix is .tsv, CSV otherwise
    """

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, sep="\t" if path.suffix == ".tsv" else ",", index=False)
    LOGGER.info("Wrote %d rows to %s", len(frame), path)
    return path


def stats_frame(stats: Iterable[ModeStats]) -> pd.DataFrame:
    """
    One row per mode with its graph measures
    """

    return pd.DataFrame(
        [
            {
                "mode": s.name,
                "edge_count": s.edge_count,
                "vertex_count": s.unique_vertex_count,
                "avg_degree": s.average_degree,
                "triangles": s.triangle_count,
                "density": s.density,
            }
            for s in stats
        ],
        columns=["mode", "edge_count", "vertex_count", "avg_degree", "triangles", "density"],
    )

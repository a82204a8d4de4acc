# Licensed under the MIT License.
"""
Shared fixtures
"""

import numpy as np
import pytest

from multalign.network import MultimodalNetwork


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixed-seed generator"""
    return np.random.default_rng(20240611)


@pytest.fixture
def toy_network() -> MultimodalNetwork:
    """
    Seven vertices in three modes with partial vertex presence
    """

    return MultimodalNetwork.from_edges(
        list("ABCDEFG"),
        [
            [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)],
            [(0, 3), (3, 5), (5, 6), (6, 0), (1, 5)],
            [(4, 5), (5, 6), (4, 6), (1, 4)],
        ],
        ("road", "rail", "air"),
    )

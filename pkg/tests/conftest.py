import numpy as np
import pytest

from vrips import Image, all_square_counts, build_graph

# canonical worked example: 3x3 two-color grid
EX3_ROWS = [[0, 0, 0], [1, 0, 0], [1, 1, 0]]

EX3_PGM = "P2\n3 3\n1\n0 0 0\n1 0 0\n1 1 0\n"


@pytest.fixture(scope="session")
def ex3() -> Image:
    return Image.from_rows(EX3_ROWS, 2)


@pytest.fixture(scope="session")
def ex3_counts(ex3):
    return all_square_counts(ex3)


@pytest.fixture(scope="session")
def ex3_graph(ex3, ex3_counts):
    return build_graph(ex3, ex3_counts)


def random_image(rng: np.random.Generator, side: int, palette: int) -> Image:
    return Image(rng.integers(0, palette, (side, side)), palette)

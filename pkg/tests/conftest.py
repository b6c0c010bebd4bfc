import random

import pytest

import exact_oracle as xo
from tilelink.errors import GeometryError
from tilelink.geometry import Geometry, make_geometry
from tilelink.synthetic import SyntheticCorpusSpec, clustered_corpus, mixed_corpus
from tilelink.tiling import Dataset


def to_shape(g: Geometry) -> xo.Shape:
    """Feed raw coordinates to the exact oracle."""
    k = g.kind
    if k == "Point":
        return xo.Shape("point", [g.coords])
    if k == "MultiPoint":
        return xo.Shape("point", list(g.coords))
    if k == "LineString":
        return xo.Shape("line", [g.coords])
    if k == "MultiLineString":
        return xo.Shape("line", list(g.coords))
    if k == "Polygon":
        return xo.Shape("area", [g.coords])
    return xo.Shape("area", list(g.coords))


def random_int_geometry(rng: random.Random, size: int = 32) -> Geometry:
    """Small integer-coordinate point, line or polygon inside [0, size]^2."""
    while True:
        k = rng.random()
        c = lambda: rng.randint(0, size)  # noqa: E731
        try:
            if k < 0.2:
                return make_geometry("Point", (c(), c()))
            if k < 0.45:
                return make_geometry("LineString", [(c(), c()) for _ in range(rng.randint(2, 4))])
            if k < 0.6:
                x0, y0 = rng.randint(0, size - 2), rng.randint(0, size - 2)
                x1, y1 = rng.randint(x0 + 1, size), rng.randint(y0 + 1, size)
                ring = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
                if x1 - x0 >= 4 and y1 - y0 >= 4 and rng.random() < 0.5:
                    hole = [(x0 + 1, y0 + 1), (x0 + 1, y1 - 1), (x1 - 1, y1 - 1), (x1 - 1, y0 + 1), (x0 + 1, y0 + 1)]
                    return make_geometry("Polygon", [ring, hole])
                return make_geometry("Polygon", [ring])
            pts = [(c(), c()) for _ in range(rng.randint(3, 6))]
            return make_geometry("Polygon", [pts + [pts[0]]])
        except GeometryError:
            continue


def relabel(geoms, prefix):
    return [Geometry(g.kind, g.coords, f"{prefix}{k}") for k, g in enumerate(geoms)]


def small_dataset(rng, n, prefix, size=12):
    return Dataset(relabel([random_int_geometry(rng, size) for _ in range(n)], prefix), prefix)


@pytest.fixture(scope="session")
def mixed_200():
    return mixed_corpus(seed=11, n_source=200, n_target=200)


@pytest.fixture(scope="session")
def clustered_1000():
    return clustered_corpus(SyntheticCorpusSpec(seed=7))


# stand-ins for the small worked example: a large region (gray) holding a
# green patch, and a blue patch straddling the region's border away from green
GREEN = (
    "POLYGON ((12.340703846780286 51.28797110806819, 12.389192648396918 51.30, "
    "12.37 51.33902633403139, 12.35 51.32, 12.340703846780286 51.28797110806819))"
)
GRAY = "POLYGON ((12.2 51.2, 12.6 51.2, 12.6 51.45, 12.2 51.45, 12.2 51.2))"
BLUE = "POLYGON ((12.5 51.38, 12.7 51.38, 12.7 51.5, 12.5 51.5, 12.5 51.38))"


# one verdict line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

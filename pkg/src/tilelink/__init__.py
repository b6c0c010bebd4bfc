"""Tile-indexed topological link discovery between geospatial datasets."""

from .cellwork import Mapping, RunStats
from .de9im import De9imMatrix, de9im, relate
from .errors import (
    ConfigError,
    EmptyDataset,
    GeometryError,
    InvalidGeometry,
    InvalidMask,
    NumericalDegeneracy,
    TilelinkError,
    UnsupportedKind,
    UnsupportedRelation,
    WKTSyntaxError,
    ZeroGranularity,
)
from .geometry import MBB, Geometry, make_geometry, mbb, parse_wkt, to_wkt
from .linker import LinkConfig, brute_force_link, diff, link
from .relations import Relation, evaluate, test_mbb
from .tiling import Dataset, Granularity, build_index, eth, select_granularity

__all__ = [
    "ConfigError",
    "Dataset",
    "De9imMatrix",
    "EmptyDataset",
    "Geometry",
    "GeometryError",
    "Granularity",
    "InvalidGeometry",
    "InvalidMask",
    "LinkConfig",
    "MBB",
    "Mapping",
    "NumericalDegeneracy",
    "Relation",
    "RunStats",
    "TilelinkError",
    "UnsupportedKind",
    "UnsupportedRelation",
    "WKTSyntaxError",
    "ZeroGranularity",
    "brute_force_link",
    "build_index",
    "de9im",
    "diff",
    "eth",
    "evaluate",
    "link",
    "make_geometry",
    "mbb",
    "parse_wkt",
    "relate",
    "select_granularity",
    "test_mbb",
    "to_wkt",
]

"""Exception hierarchy shared by every tilelink module."""


class TilelinkError(Exception):
    """Base class for all library errors."""


class GeometryError(TilelinkError, ValueError):
    pass


class WKTSyntaxError(GeometryError):
    """The WKT text is malformed."""


class UnsupportedKind(GeometryError):
    """Well-formed WKT of a kind this library does not model (e.g. GEOMETRYCOLLECTION, Z coordinates)."""


class InvalidGeometry(GeometryError):
    """The geometry parsed but violates a validity rule (open ring, too few points, bad coordinate...)."""


class NumericalDegeneracy(GeometryError):
    """Floating point coincidence could not be resolved within the snapping tolerance."""


class InvalidMask(TilelinkError, ValueError):
    pass


class UnsupportedRelation(TilelinkError, ValueError):
    pass


class EmptyDataset(TilelinkError, ValueError):
    pass


class ZeroGranularity(TilelinkError, ValueError):
    pass


class ConfigError(TilelinkError, ValueError):
    pass


class IoError(TilelinkError, OSError):
    """A dataset or output file could not be read or written."""

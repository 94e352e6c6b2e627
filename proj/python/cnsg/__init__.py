"""Crudely normal surfaces in triangulated 3-manifolds and their move graphs.

All functions take and return documents in their text formats (see docs/formats.md).
"""

from ._core import (
    InvalidInput,
    MoveNotApplicable,
    ParseError,
    __version__,
    apply,
    bounds,
    build_graph,
    generators,
    neighbors,
    oracle_matchings,
    replay,
    subdivide,
    triangulation_info,
    validate,
    vertex_link,
)

__all__ = [
    "InvalidInput",
    "MoveNotApplicable",
    "ParseError",
    "__version__",
    "apply",
    "bounds",
    "build_graph",
    "generators",
    "neighbors",
    "oracle_matchings",
    "replay",
    "subdivide",
    "triangulation_info",
    "validate",
    "vertex_link",
]

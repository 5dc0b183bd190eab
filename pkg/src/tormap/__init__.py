"""Semi-equivelar toroidal maps as quotients of periodic tilings."""

from .lattice import HermiteForm, hnf, sublattices_of_index
from .tilings import PeriodicTiling, TilingType, build_tiling
from .torusmap import FlagSystem, ToroidalMap, dual_map, flag_system, quotient
from .symmetry import OrbitReport, edge_orbit_count, map_isomorphic, orbit_report
from .covers import CoverDescriptor, covers_of, stretch_cover, symmetric_cover

__version__ = "0.1.0"

__all__ = [
    "HermiteForm", "hnf", "sublattices_of_index",
    "PeriodicTiling", "TilingType", "build_tiling",
    "FlagSystem", "ToroidalMap", "dual_map", "flag_system", "quotient",
    "OrbitReport", "edge_orbit_count", "map_isomorphic", "orbit_report",
    "CoverDescriptor", "covers_of", "stretch_cover", "symmetric_cover",
]

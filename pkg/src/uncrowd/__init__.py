"""De-clutter 2D scatterplots by deforming the plot domain toward uniform
sample density, driven by global integral-image statistics."""

from .datasets import GenSpec, diagonal, four_cluster, generate, generate_suite, suite_specs
from .density import accumulate, build_density, gaussian_smooth
from .encodings import (
    BackgroundTexture,
    ContourSet,
    GridOverlay,
    deform_background,
    deform_contours,
    deform_grid,
    extract_contours,
    points_in_polygon,
)
from .equalizer import DensityEqualizer
from .integral import ColumnIntegrals, TriangleIntegrals, build_integral_set, column_integrals
from .mapping import AnchorSet, anchors, build_field, corrected_map, interpolate, raw_map, sample_field
from .metrics import MetricRecord, binned_stddev, orthogonal_ordering, overplotting, trustworthiness
from .model import (
    DeformationField,
    DensityTexture,
    IntegralSet,
    RegularizationParams,
    RegularizationRun,
    ScatterDataset,
    pixel_of,
    validate_dataset,
)
from .regularize import iterate_once, map_through, run, transition_positions

__version__ = "0.1.0"

__all__ = [
    "AnchorSet", "BackgroundTexture", "ColumnIntegrals", "ContourSet",
    "DeformationField", "DensityEqualizer", "DensityTexture", "GenSpec",
    "GridOverlay", "IntegralSet", "MetricRecord", "RegularizationParams",
    "RegularizationRun", "ScatterDataset", "TriangleIntegrals",
    "accumulate", "anchors", "binned_stddev", "build_density", "build_field",
    "build_integral_set", "column_integrals", "corrected_map",
    "deform_background", "deform_contours", "deform_grid", "diagonal",
    "extract_contours", "four_cluster", "gaussian_smooth", "generate",
    "generate_suite", "interpolate", "iterate_once", "map_through",
    "orthogonal_ordering", "overplotting", "pixel_of", "points_in_polygon",
    "raw_map", "run", "sample_field", "suite_specs", "transition_positions",
    "trustworthiness", "validate_dataset",
]

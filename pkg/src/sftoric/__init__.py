"""Scalar-flat toric Kähler metrics from labeled polygons."""

from .polygon import LabeledPolygon, classify_polygon, validate_polygon
from .momentum import family_for, model_for, taub_nut

__version__ = "0.1.0"

__all__ = ["LabeledPolygon", "classify_polygon", "validate_polygon", "family_for", "model_for", "taub_nut"]

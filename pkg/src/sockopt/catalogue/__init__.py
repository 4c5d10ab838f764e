from sockopt.catalogue.generate import build_catalogue, generate_catalogue
from sockopt.catalogue.io import format_catalogue, load_catalogue, parse_catalogue, write_catalogue
from sockopt.catalogue.models import Catalogue, CatalogueSpec, FeatureVector, SockDesign, validate_features
from sockopt.catalogue.similarity import (
    compatibility,
    compatibility_matrix,
    dissimilarity,
    dissimilarity_matrix,
    feature_sets,
    mismatch_count,
    mismatch_matrix,
    stimulus_space,
    weighted_coverage,
)

__all__ = [
    "Catalogue",
    "CatalogueSpec",
    "FeatureVector",
    "SockDesign",
    "build_catalogue",
    "compatibility",
    "compatibility_matrix",
    "dissimilarity",
    "dissimilarity_matrix",
    "feature_sets",
    "format_catalogue",
    "generate_catalogue",
    "load_catalogue",
    "mismatch_count",
    "mismatch_matrix",
    "parse_catalogue",
    "stimulus_space",
    "validate_features",
    "weighted_coverage",
    "write_catalogue",
]

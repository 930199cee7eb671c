"""Simplet counting in simplicial complexes by color coding."""
from .analysis import (
    CharacteristicProfile,
    NullModelConfig,
    NullModelWarning,
    characteristic_profile,
    cosine_similarity_matrix,
    kmeans_pp,
    normalized_error,
    null_model,
    significance_vector,
)
from .colorcoding import NoColorfulTreeletError, build, estimate_with_table, sample, sc3
from .core import PrimalGraph, Simplet, SimplicialComplex, canonicalize, primal_graph, scan_masks
from .exact import CountReport, EnumerationBudgetError, count_exact, count_exact_subsets
from .io import DatasetError, load_benson, load_dataset, load_plain, load_profile, load_report
from .simpletgen import SimpletCatalog, get_catalog, get_match_table, load_catalog, save_catalog

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

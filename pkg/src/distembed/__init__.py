"""Exact non-contracting low-distortion graph embeddings into structured hosts."""

from .embedding import (DistortionReport, Embedding, Violation,
                        distortion_report, union_embedding,
                        verify_nc_distortion)
from .errors import (BudgetExceeded, ConflictError, InjectivityError,
                     InputError, PartialityError)
from .graph import (DistanceMatrix, Graph, HostSpec, all_pairs_distances,
                    components_after_removal, cycle_graph, degree_gate,
                    generate, path_graph, theta_graph)
from .oracle import SearchBudget, brute_force_embed, min_distortion_integer

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "ConflictError", "DistanceMatrix", "DistortionReport",
    "Embedding", "Graph", "HostSpec", "InjectivityError", "InputError",
    "PartialityError", "SearchBudget", "Violation", "all_pairs_distances",
    "brute_force_embed", "components_after_removal", "cycle_graph",
    "degree_gate", "distortion_report", "generate", "min_distortion_integer",
    "path_graph", "theta_graph", "union_embedding", "verify_nc_distortion",
]

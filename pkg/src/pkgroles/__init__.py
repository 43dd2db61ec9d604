"""Role discovery in package dependency networks.

Structural equivalence (cosine over shared dependencies on the descendant
closure) and regular equivalence (CATREGE) produce dissimilarity matrices
that are clustered with PAM; the number of clusters is chosen by mean
silhouette.
"""

from ._kernels import BACKEND
from .closure import descendant_closure
from .clustering import Clustering, SilhouetteReport, k_sweep, pam, silhouette
from .graph import DependencyGraph, GraphError
from .ingest import load_edge_list, load_graph, load_registry_json, read_matrix_csv, write_matrix_csv
from .matrix import DissimilarityMatrix
from .regular import RolePartition, catrege, regular_dissimilarity
from .report import blockmodel, classify_roles, embed_2d
from .sampling import SampleSpec, random_walk_sample, sample_statistics
from .structural import (ContractionMap, SimilarityEdge, cosine_similarity,
                         structural_dissimilarity, structural_similarity_graph, to_dissimilarity)

__version__ = "0.1.0"

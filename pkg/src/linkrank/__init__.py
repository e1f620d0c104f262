"""PageRank and spectral diagnostics for column-stochastic link matrices."""

__version__ = "0.1.0"

from .errors import (
    DimensionError,
    EdgeListParseError,
    EstimatorError,
    ExactModeCapError,
    GraphValidationError,
    LinkRankError,
    NonConvergenceError,
)
from .graph_ingest import LinkGraph, PageId, parse_edge_list, read_edge_list, serialize_edge_list, validate
from .power_engine import (
    InitialVector,
    IterationTrace,
    VerdictKind,
    compare_inits,
    convergence_profile,
    detect_period2,
    pagerank,
    pagerank_vector,
    power_iterate,
)
from .ranking import RankTable, normalize_stochastic, rank_pages
from .spectral_tools import (
    CharPoly,
    GerschgorinDisc,
    char_poly,
    estimate_lambda2_deflation,
    estimate_lambda2_ratio,
    gerschgorin_discs,
    is_realistic,
    poly_roots,
    spectral_bound,
    spectrum_report,
)
from .stochastic_matrix import (
    ColumnStochasticMatrix,
    build_matrix,
    matvec,
    stationary_vector_exact,
    transpose_matvec,
)

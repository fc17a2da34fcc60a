"""Deep-clustering objective, indicator matrices and embedders."""
from .embedders import (
    Embedder,
    OracleEmbedder,
    PrecomputedEmbedder,
    SpatialFeatureEmbedder,
    normalize_rows,
    oracle_embedder,
)
from .service import (
    DIRECT_EVALUATION_LIMIT,
    dpcl_objective,
    dpcl_objective_direct,
    dpcl_objective_grad,
    indicator_matrix,
)

__all__ = [
    "DIRECT_EVALUATION_LIMIT",
    "Embedder",
    "OracleEmbedder",
    "PrecomputedEmbedder",
    "SpatialFeatureEmbedder",
    "dpcl_objective",
    "dpcl_objective_direct",
    "dpcl_objective_grad",
    "indicator_matrix",
    "normalize_rows",
    "oracle_embedder",
]

"""SI-SDR, permutation-invariant evaluation and clustering scores."""
from .service import (
    MAX_PERMUTATION_SOURCES,
    SI_SDR_CLAMP_DB,
    EvalReport,
    clustering_accuracy,
    nmi,
    permutation_invariant_eval,
    si_sdr,
)

__all__ = [
    "EvalReport",
    "MAX_PERMUTATION_SOURCES",
    "SI_SDR_CLAMP_DB",
    "clustering_accuracy",
    "nmi",
    "permutation_invariant_eval",
    "si_sdr",
]

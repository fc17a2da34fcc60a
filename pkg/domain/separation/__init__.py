"""k-means mask estimation, masking and resynthesis."""
from .kmeans import KMeansResult, assign_to_centroids, kmeans, kmeans_plus_plus, lloyd
from .service import (
    SeparationResult,
    activity_mask,
    apply_masks_and_resynthesize,
    labels_from_masks,
    masks_from_labels,
    separate,
)

__all__ = [
    "KMeansResult",
    "SeparationResult",
    "activity_mask",
    "apply_masks_and_resynthesize",
    "assign_to_centroids",
    "kmeans",
    "kmeans_plus_plus",
    "labels_from_masks",
    "lloyd",
    "masks_from_labels",
    "separate",
]

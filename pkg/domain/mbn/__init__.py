"""Multilayer Bootstrap Network services."""
from .pca import pca_fit, sign_normalize
from .service import (
    encode_clustering,
    encode_layer,
    encode_network,
    fit,
    fit_transform,
    minimum_top_k,
    plan_k_schedule,
    sampled_feature_count,
    train_clustering,
    train_layer,
    transform,
)

__all__ = [
    "encode_clustering",
    "encode_layer",
    "encode_network",
    "fit",
    "fit_transform",
    "minimum_top_k",
    "pca_fit",
    "plan_k_schedule",
    "sampled_feature_count",
    "sign_normalize",
    "train_clustering",
    "train_layer",
    "transform",
]

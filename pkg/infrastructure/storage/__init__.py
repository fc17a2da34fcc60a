"""On-disk containers: tensor files, embedding matrices and MBN models."""
from .embeddings import load_embeddings, save_embeddings
from .manifest_file import read_manifest, write_manifest
from .model_file import decode_model, encode_model, load_model, save_model
from .tensor_file import decode_tensor, encode_tensor, read_tensor, write_tensor

__all__ = [
    "decode_model",
    "decode_tensor",
    "encode_model",
    "encode_tensor",
    "load_embeddings",
    "load_model",
    "read_manifest",
    "read_tensor",
    "save_embeddings",
    "save_model",
    "write_manifest",
    "write_tensor",
]

"""Mixture simulation: impulse responses, mixing, synthetic sources, manifests."""
from .manifest import ManifestEntry, entry_row, generate_manifest
from .service import (
    MAX_DELAY,
    Mixture,
    MixSpec,
    apply_rir,
    decay_envelope,
    mix,
    source_images,
    synth_rir,
)
from .sources import is_synth_reference, parse_synth_reference, synth_source

__all__ = [
    "MAX_DELAY",
    "ManifestEntry",
    "MixSpec",
    "Mixture",
    "apply_rir",
    "decay_envelope",
    "entry_row",
    "generate_manifest",
    "is_synth_reference",
    "mix",
    "parse_synth_reference",
    "source_images",
    "synth_rir",
    "synth_source",
]

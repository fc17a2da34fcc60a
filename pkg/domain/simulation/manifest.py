"""
Dataset manifests.

A manifest is a list of named ``MixSpec`` recipes. ``generate_manifest``
draws a seeded set of recipes over synthetic sources: anechoic mixtures
have T60 = 0, reverberant ones draw T60 uniformly from [0.2, 0.6] s; every
source of a mixture gets a distinct interchannel delay in [-8, 8] samples
and source 1 leads by an SIR drawn from [0, 5] dB.
"""

from __future__ import annotations

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict

from core.errors import SimulationError
from utils.seeding import derive_rng

from .service import MAX_DELAY, MixSpec
from .sources import SYNTH_PREFIX

REVERB_T60_RANGE = (0.2, 0.6)
SIR_RANGE_DB = (0.0, 5.0)
_MANIFEST_STREAM = 13


class ManifestEntry(BaseModel):
    """One mixture of a dataset."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    spec: MixSpec


def generate_manifest(
    n_mixtures: int,
    n_speakers: int = 2,
    reverberant: bool = False,
    seed: int = 0,
) -> List[ManifestEntry]:
    """
    Draw ``n_mixtures`` recipes over ``synth:<seed>`` sources.

    Raises:
        SimulationError: If ``n_speakers`` is outside 2..5 or ``n_mixtures < 1``.
    """
    if n_mixtures < 1:
        raise SimulationError(f"n_mixtures must be positive, got {n_mixtures}")
    if not 2 <= n_speakers <= 5:
        raise SimulationError(f"n_speakers must lie in [2, 5], got {n_speakers}")

    entries = []
    for index in range(n_mixtures):
        rng = derive_rng(seed, _MANIFEST_STREAM, index)
        source_seeds = rng.choice(1_000_000, size=n_speakers, replace=False)
        delays = rng.choice(2 * MAX_DELAY + 1, size=n_speakers, replace=False) - MAX_DELAY
        t60 = round(float(rng.uniform(*REVERB_T60_RANGE)), 3) if reverberant else 0.0
        sir_db = round(float(rng.uniform(*SIR_RANGE_DB)), 2)
        spec = MixSpec(
            sources=[f"{SYNTH_PREFIX}{int(s)}" for s in source_seeds],
            sir_db=sir_db,
            delays=[int(d) for d in delays],
            t60=t60,
            seed=int(seed * 100_003 + index),
        )
        condition = "reverb" if reverberant else "anechoic"
        entries.append(ManifestEntry(name=f"{condition}_{n_speakers}spk_{index:04d}", spec=spec))
    return entries


def entry_row(entry: ManifestEntry) -> Tuple:
    """Flat manifest row: name, sources, delays, sir_db, t60, seed."""
    spec = entry.spec
    return (
        entry.name,
        ";".join(spec.sources),
        ";".join(str(d) for d in spec.delays),
        spec.sir_db,
        spec.t60,
        spec.seed,
    )

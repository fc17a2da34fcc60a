"""
Typed settings for MbnSep.

Every stage of the pipeline is configured through a pydantic model. The
models validate the same invariants the numerical services assume, so a
bad configuration is rejected with the offending field named before any
audio is touched. ``PipelineConfig`` bundles all sections and is what the
configuration document (see ``config.loader``) is parsed into.
"""

from __future__ import annotations

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class _Settings(BaseModel):
    """Common behaviour: immutable, no unknown keys, names or aliases accepted."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)


class StftConfig(_Settings):
    """Framing of the short-time Fourier transform (32 ms / 8 ms at 8 kHz)."""

    sample_rate: int = Field(8000, gt=0)
    frame_len: int = Field(256, ge=2)
    hop: int = Field(64, ge=1)
    window: Literal["hamming"] = "hamming"

    @model_validator(mode="after")
    def _hop_within_frame(self) -> "StftConfig":
        if self.hop > self.frame_len:
            raise ValueError(f"hop ({self.hop}) must not exceed frame_len ({self.frame_len})")
        return self

    @property
    def n_bins(self) -> int:
        """Number of one-sided frequency bins (129 at the defaults)."""
        return self.frame_len // 2 + 1


class FeatureConfig(_Settings):
    """Per-unit feature extraction."""

    floor: float = Field(1e-8, gt=0.0)
    spatial: bool = True


class MbnConfig(_Settings):
    """
    Hyperparameters of a Multilayer Bootstrap Network.

    ``V`` and ``a`` are accepted as aliases of ``n_clusterings`` and
    ``feature_fraction``. ``output_dim`` defaults to ``n_classes`` when unset.
    """

    n_clusterings: int = Field(400, alias="V", ge=1)
    feature_fraction: float = Field(0.9, alias="a", gt=0.0, le=1.0)
    k1: int = Field(20, ge=2)
    delta: float = Field(0.0, ge=0.0, lt=1.0)
    n_classes: int = Field(2, ge=2)
    output_dim: Optional[int] = Field(None, ge=1)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _k1_covers_classes(self) -> "MbnConfig":
        floor_k = math.ceil(1.5 * self.n_classes)
        if self.k1 < floor_k:
            raise ValueError(
                f"k1 ({self.k1}) must be at least ceil(1.5 * n_classes) = {floor_k}"
            )
        return self

    @property
    def V(self) -> int:  # noqa: N802 - domain notation
        return self.n_clusterings

    @property
    def a(self) -> float:
        return self.feature_fraction

    @property
    def resolved_output_dim(self) -> int:
        return self.output_dim if self.output_dim is not None else self.n_classes


class EmbedderConfig(_Settings):
    """Which embedder produces the per-unit embedding vectors."""

    kind: Literal["oracle", "spatial"] = "spatial"
    dim: int = Field(40, ge=1)
    sigma: float = Field(0.0, ge=0.0)
    seed: int = Field(0, ge=0)


class SeparationConfig(_Settings):
    """k-means mask estimation and the ablation switches."""

    n_sources: int = Field(2, ge=2, le=5)
    restarts: int = Field(10, ge=1)
    max_iter: int = Field(300, ge=1)
    use_mbn: bool = True
    vad: bool = True
    vad_threshold_db: float = Field(40.0, gt=0.0)
    seed: int = Field(0, ge=0)


class SimulationConfig(_Settings):
    """Defaults for mixture simulation and synthetic sources."""

    sample_rate: int = Field(8000, gt=0)
    synth_duration: float = Field(1.0, gt=0.0)

    @field_validator("synth_duration")
    @classmethod
    def _bounded_duration(cls, value: float) -> float:
        if value > 60.0:
            raise ValueError("synth_duration above 60 s is not supported")
        return value


class PipelineConfig(_Settings):
    """All sections of a pipeline run plus the master seed."""

    seed: int = Field(0, ge=0)
    stft: StftConfig = StftConfig()
    features: FeatureConfig = FeatureConfig()
    embedder: EmbedderConfig = EmbedderConfig()
    mbn: MbnConfig = MbnConfig()
    separation: SeparationConfig = SeparationConfig()
    simulation: SimulationConfig = SimulationConfig()

    @model_validator(mode="after")
    def _consistent_sections(self) -> "PipelineConfig":
        if self.mbn.n_classes != self.separation.n_sources:
            raise ValueError(
                f"mbn.n_classes ({self.mbn.n_classes}) must equal "
                f"separation.n_sources ({self.separation.n_sources})"
            )
        if self.stft.sample_rate != self.simulation.sample_rate:
            raise ValueError(
                f"stft.sample_rate ({self.stft.sample_rate}) must equal "
                f"simulation.sample_rate ({self.simulation.sample_rate})"
            )
        if self.embedder.kind == "oracle" and self.embedder.dim < self.separation.n_sources:
            raise ValueError(
                f"embedder.dim ({self.embedder.dim}) must be at least "
                f"separation.n_sources ({self.separation.n_sources}) for the oracle embedder"
            )
        return self

    def with_seed(self, seed: int) -> "PipelineConfig":
        """Return a copy whose every seed root is ``seed``."""
        return self.model_copy(
            update={
                "seed": seed,
                "embedder": self.embedder.model_copy(update={"seed": seed}),
                "mbn": self.mbn.model_copy(update={"seed": seed}),
                "separation": self.separation.model_copy(update={"seed": seed}),
            }
        )

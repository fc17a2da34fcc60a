"""
Configuration Module

Typed pipeline settings, the configuration document loader and the
environment-driven runtime knobs.
"""

from .environment import get_log_level, get_thread_count, tracing_enabled
from .loader import (
    DEFAULT_CONFIG_PATH,
    build_pipeline_config,
    load_pipeline_config,
    override_config,
    parse_config_text,
)
from .settings import (
    EmbedderConfig,
    FeatureConfig,
    MbnConfig,
    PipelineConfig,
    SeparationConfig,
    SimulationConfig,
    StftConfig,
)

__all__ = [
    "DEFAULT_CONFIG_PATH",
    "EmbedderConfig",
    "FeatureConfig",
    "MbnConfig",
    "PipelineConfig",
    "SeparationConfig",
    "SimulationConfig",
    "StftConfig",
    "build_pipeline_config",
    "get_log_level",
    "get_thread_count",
    "load_pipeline_config",
    "override_config",
    "parse_config_text",
    "tracing_enabled",
]

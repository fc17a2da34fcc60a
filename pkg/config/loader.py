"""
Configuration document loader.

The configuration document is flat ``key = value`` text. Keys are dotted
paths into ``PipelineConfig`` (``mbn.k1 = 20``), ``#`` starts a comment and
values are typed as booleans, integers, floats or plain strings. The parsed
tree is validated by pydantic; failures are reported as ``ConfigError``
naming the file and the field.
"""

from __future__ import annotations

import os
from typing import Any, Dict, Mapping, Optional, Union

from pydantic import ValidationError

from core.errors import ConfigError

from .settings import PipelineConfig

_TRUE_WORDS = {"true", "yes", "on"}
_FALSE_WORDS = {"false", "no", "off"}

DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), "defaults", "pipeline.conf"
)


def _coerce_value(raw: str) -> Union[bool, int, float, str]:
    """Type a raw value string: bool, then int, then float, else string."""
    value = raw.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    lowered = value.lower()
    if lowered in _TRUE_WORDS:
        return True
    if lowered in _FALSE_WORDS:
        return False
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def parse_config_text(text: str, source: str = "<string>") -> Dict[str, Any]:
    """
    Parse a flat configuration document into a nested dictionary.

    Args:
        text: Document contents.
        source: Name used in error messages (usually the file path).

    Returns:
        Nested dictionary keyed by the dotted path segments.

    Raises:
        ConfigError: On a malformed line or a key assigned twice.
    """
    tree: Dict[str, Any] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{line_no}: expected 'key = value', got {stripped!r}")
        key, raw_value = (part.strip() for part in stripped.split("=", 1))
        if not key or any(not segment for segment in key.split(".")):
            raise ConfigError(f"{source}:{line_no}: invalid key {key!r}")

        node = tree
        segments = key.split(".")
        for segment in segments[:-1]:
            child = node.setdefault(segment, {})
            if not isinstance(child, dict):
                raise ConfigError(f"{source}:{line_no}: {key!r} conflicts with an earlier value")
            node = child
        if segments[-1] in node:
            raise ConfigError(f"{source}:{line_no}: {key!r} is assigned more than once")
        node[segments[-1]] = _coerce_value(raw_value)
    return tree


def _format_validation_error(exc: ValidationError, source: str) -> str:
    problems = []
    for error in exc.errors():
        field = ".".join(str(part) for part in error.get("loc", ())) or "<root>"
        problems.append(f"{field}: {error.get('msg', 'invalid value')}")
    return f"{source}: invalid configuration: " + "; ".join(problems)


def build_pipeline_config(tree: Mapping[str, Any], source: str = "<config>") -> PipelineConfig:
    """Validate a nested dictionary into a ``PipelineConfig``."""
    try:
        return PipelineConfig.model_validate(dict(tree))
    except ValidationError as exc:
        raise ConfigError(_format_validation_error(exc, source)) from exc


def load_pipeline_config(path: Optional[str] = None) -> PipelineConfig:
    """
    Load and validate a configuration document.

    Args:
        path: Path of the document; ``None`` loads the built-in defaults.

    Returns:
        Validated ``PipelineConfig``.

    Raises:
        ConfigError: If the file cannot be read or fails validation.
    """
    path = path or DEFAULT_CONFIG_PATH
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"Cannot read configuration file {path}: {exc}") from exc
    return build_pipeline_config(parse_config_text(text, source=path), source=path)


def override_config(config: PipelineConfig, overrides: Mapping[str, Any]) -> PipelineConfig:
    """
    Apply dotted-key overrides (``{"separation.use_mbn": False}``) and re-validate.

    Raises:
        ConfigError: If an override produces an invalid configuration.
    """
    tree = config.model_dump()
    for key, value in overrides.items():
        node = tree
        segments = key.split(".")
        for segment in segments[:-1]:
            node = node.setdefault(segment, {})
        node[segments[-1]] = value
    return build_pipeline_config(tree, source="command-line overrides")

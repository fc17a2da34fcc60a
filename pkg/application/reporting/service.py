"""
Report writers.

Every table the toolkit emits is written through pandas with a fixed float
format, so identical inputs give byte-identical files. The human-readable
evaluation report is rendered from a Jinja2 template.
"""

from __future__ import annotations

import io
import os
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from core.errors import MetricsError
from domain.metrics import EvalReport
from utils.files import atomic_write

FLOAT_FORMAT = "%.6f"
EVAL_COLUMNS = [
    "mixture",
    "n_sources",
    "mean_si_sdr",
    "si_sdr_improvement",
    "per_speaker_si_sdr",
    "mixture_si_sdr",
    "best_permutation",
    "mask_accuracy",
    "nmi",
]

_TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")


@lru_cache(maxsize=1)
def _get_template_environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(_TEMPLATE_DIR),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else FLOAT_FORMAT % value


def write_table(frame: pd.DataFrame, path: str) -> None:
    """Write a DataFrame as CSV atomically with the fixed float format."""
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    try:
        with atomic_write(path, "w", encoding="utf-8") as handle:
            handle.write(buffer.getvalue())
    except OSError as exc:
        raise MetricsError(f"Failed to write {path}: {exc}") from exc


def eval_frame(reports: Sequence[EvalReport]) -> pd.DataFrame:
    """One row per mixture; list-valued cells are ``;``-joined."""
    rows = []
    for report in reports:
        rows.append(
            {
                "mixture": report.name,
                "n_sources": len(report.per_speaker_si_sdr),
                "mean_si_sdr": report.mean_si_sdr,
                "si_sdr_improvement": report.si_sdr_improvement,
                "per_speaker_si_sdr": ";".join(_fmt(v) for v in report.per_speaker_si_sdr),
                "mixture_si_sdr": ";".join(_fmt(v) for v in report.mixture_si_sdr),
                "best_permutation": ";".join(str(p) for p in report.best_permutation),
                "mask_accuracy": report.mask_accuracy,
                "nmi": report.nmi,
            }
        )
    return pd.DataFrame(rows, columns=EVAL_COLUMNS)


def summarize(reports: Sequence[EvalReport]) -> Dict[str, Optional[float]]:
    """Set-level mean/median improvement and mean mask accuracy."""
    if not reports:
        raise MetricsError("No evaluation reports to summarize")
    improvements = np.array([report.si_sdr_improvement for report in reports])
    accuracies = [report.mask_accuracy for report in reports if report.mask_accuracy is not None]
    return {
        "mean_improvement": float(np.mean(improvements)),
        "median_improvement": float(np.median(improvements)),
        "mean_accuracy": float(np.mean(accuracies)) if accuracies else None,
    }


def render_report(
    reports: Sequence[EvalReport],
    settings: Optional[Mapping[str, Any]] = None,
    template_name: str = "report",
) -> str:
    """Render the text report from ``templates/<template_name>.jinja``."""
    if not template_name.endswith(".jinja"):
        template_name = f"{template_name}.jinja"
    template = _get_template_environment().get_template(template_name)
    settings_line = ", ".join(f"{key}={value}" for key, value in (settings or {}).items())
    return template.render(rows=list(reports), summary=summarize(reports), settings=settings_line)


def write_eval_outputs(
    reports: Sequence[EvalReport],
    out_dir: str,
    settings: Optional[Mapping[str, Any]] = None,
) -> List[str]:
    """Write ``eval.csv`` and ``report.txt`` into ``out_dir``; returns both paths."""
    csv_path = os.path.join(out_dir, "eval.csv")
    txt_path = os.path.join(out_dir, "report.txt")
    write_table(eval_frame(reports), csv_path)
    text = render_report(reports, settings)
    try:
        with atomic_write(txt_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise MetricsError(f"Failed to write {txt_path}: {exc}") from exc
    return [csv_path, txt_path]


def viz_frame(labels: np.ndarray, spaces: Mapping[str, np.ndarray]) -> pd.DataFrame:
    """
    Long-format 2-D coordinates: ``unit, label, space, x, y``.

    Args:
        labels: Cluster or speaker label per unit.
        spaces: Name -> ``n x 2`` coordinates (e.g. ``"embedding"``, ``"m_vector"``).
    """
    frames = []
    for name, coords in spaces.items():
        coords = np.asarray(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] < 2:
            raise MetricsError(f"{name}: need n x 2 coordinates, got shape {coords.shape}")
        frames.append(
            pd.DataFrame(
                {
                    "unit": np.arange(coords.shape[0]),
                    "label": np.asarray(labels, dtype=np.int64),
                    "space": name,
                    "x": coords[:, 0],
                    "y": coords[:, 1],
                }
            )
        )
    return pd.concat(frames, ignore_index=True)


def records_frame(records: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    return pd.DataFrame(list(records), columns=list(columns))

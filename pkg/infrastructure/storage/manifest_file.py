"""
Manifest CSV files.

Columns: ``name, sources, delays, sir_db, t60, seed``. Multi-source fields
are ``;``-separated. A source is either a WAV path (relative paths resolve
against the manifest's directory) or ``synth:<seed>``.
"""

from __future__ import annotations

import io
import os
from typing import List, Sequence

import pandas as pd
from pydantic import ValidationError

from core.errors import SimulationError
from domain.simulation import ManifestEntry, MixSpec, entry_row, is_synth_reference
from utils.files import atomic_write

MANIFEST_COLUMNS = ["name", "sources", "delays", "sir_db", "t60", "seed"]


def write_manifest(entries: Sequence[ManifestEntry], path: str) -> None:
    """Write a manifest atomically."""
    frame = pd.DataFrame([entry_row(entry) for entry in entries], columns=MANIFEST_COLUMNS)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    try:
        with atomic_write(path, "w", encoding="utf-8") as handle:
            handle.write(buffer.getvalue())
    except OSError as exc:
        raise SimulationError(f"Failed to write manifest {path}: {exc}") from exc


def _resolve(reference: str, base_dir: str) -> str:
    if is_synth_reference(reference) or os.path.isabs(reference):
        return reference
    return os.path.normpath(os.path.join(base_dir, reference))


def read_manifest(path: str) -> List[ManifestEntry]:
    """
    Parse a manifest.

    Raises:
        SimulationError: If the file is missing, columns are absent, names
            repeat, or a row fails ``MixSpec`` validation (row number named).
    """
    if not os.path.exists(path):
        raise SimulationError(f"Manifest not found: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise SimulationError(f"Cannot parse manifest {path}: {exc}") from exc

    missing = [column for column in MANIFEST_COLUMNS if column not in frame.columns]
    if missing:
        raise SimulationError(f"{path}: missing manifest columns {missing}")
    if frame["name"].duplicated().any():
        raise SimulationError(f"{path}: mixture names must be unique")

    base_dir = os.path.dirname(os.path.abspath(path))
    entries = []
    for row_number, row in enumerate(frame.itertuples(index=False), start=2):
        try:
            spec = MixSpec(
                sources=[_resolve(s.strip(), base_dir) for s in row.sources.split(";") if s.strip()],
                delays=[int(d) for d in row.delays.split(";") if d.strip()],
                sir_db=float(row.sir_db),
                t60=float(row.t60),
                seed=int(row.seed),
            )
        except (ValidationError, ValueError) as exc:
            raise SimulationError(f"{path}, line {row_number} ({row.name}): {exc}") from exc
        entries.append(ManifestEntry(name=row.name, spec=spec))
    if not entries:
        raise SimulationError(f"{path}: manifest has no mixtures")
    return entries

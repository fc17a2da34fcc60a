"""
Command-line front-end.

    python app.py manifest  --out data/manifest.csv --count 20 [--speakers 2] [--reverberant]
    python app.py mix       --manifest M --out-dir D
    python app.py features  --manifest M --out-dir D
    python app.py embed     --manifest M --out-dir D [--oracle] [--sigma S]
    python app.py separate  --manifest M --out-dir D [--no-mbn] [--no-vad]
    python app.py eval      --manifest M --out-dir D
    python app.py mbn fit       --input X.mbnt --model M.mbnm
    python app.py mbn transform --model M.mbnm --input X.mbnt --output Y.mbnt
    python app.py viz       --manifest M --out-dir D
    python app.py sweep     --deltas 0,0.1,0.2,0.3 --out sweep.csv

Every subcommand accepts ``--config`` and ``--seed``. Any toolkit error is
logged with the offending file or field and exits with status 1.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import load_pipeline_config, override_config
from config.settings import PipelineConfig
from core.errors import ConfigError, MbnsepError
from domain.mbn import fit as mbn_fit
from domain.mbn import pca_fit, transform as mbn_transform
from domain.simulation import ManifestEntry, generate_manifest
from infrastructure.storage import load_model, read_manifest, read_tensor, save_model, write_manifest, write_tensor
from monitoring import configure_logging, get_logger

from . import pipeline
from .experiments import SWEEP_COLUMNS, depth_sweep
from .reporting import records_frame, viz_frame, write_table

logger = get_logger(__name__)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Configuration document (default: config/defaults/pipeline.conf)")
    parser.add_argument("--seed", type=int, help="Override every seed root")


def _add_dataset(parser: argparse.ArgumentParser) -> None:
    _add_common(parser)
    parser.add_argument("--manifest", required=True, help="Manifest CSV")
    parser.add_argument("--out-dir", required=True, help="Working directory, one sub-directory per mixture")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbnsep", description="DPCL++ speech separation toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    manifest = commands.add_parser("manifest", help="Generate a synthetic-source manifest")
    _add_common(manifest)
    manifest.add_argument("--out", required=True)
    manifest.add_argument("--count", type=int, default=20)
    manifest.add_argument("--speakers", type=int, default=2)
    manifest.add_argument("--reverberant", action="store_true")

    for name, text in (
        ("mix", "Simulate the mixtures of a manifest"),
        ("features", "Extract per-unit features"),
        ("eval", "Score separated sources; writes eval.csv and report.txt"),
        ("viz", "Export 2-D embedding and m-vector coordinates"),
    ):
        _add_dataset(commands.add_parser(name, help=text))

    embed = commands.add_parser("embed", help="Compute per-unit embeddings")
    _add_dataset(embed)
    embed.add_argument("--oracle", action="store_true", help="Use the ground-truth oracle embedder")
    embed.add_argument("--sigma", type=float, help="Oracle noise standard deviation")

    separate = commands.add_parser("separate", help="Estimate masks and resynthesize sources")
    _add_dataset(separate)
    separate.add_argument("--no-mbn", action="store_true", help="Cluster raw embeddings (ablation)")
    separate.add_argument("--no-vad", action="store_true", help="Cluster silent units too")

    mbn = commands.add_parser("mbn", help="Generic MBN fit/transform on tensor files")
    mbn_commands = mbn.add_subparsers(dest="mbn_command", required=True)
    fit = mbn_commands.add_parser("fit")
    _add_common(fit)
    fit.add_argument("--input", required=True, help="Rank-2 tensor file of training rows")
    fit.add_argument("--model", required=True, help="Model file to write")
    fit.add_argument("--output", help="Optionally also write the m-vectors of the training rows")
    transform = mbn_commands.add_parser("transform")
    _add_common(transform)
    transform.add_argument("--model", required=True)
    transform.add_argument("--input", required=True)
    transform.add_argument("--output", required=True)

    sweep = commands.add_parser("sweep", help="Shallow-vs-deep comparison over delta")
    _add_common(sweep)
    sweep.add_argument("--deltas", default="0,0.05,0.1,0.15,0.2,0.3,0.5,0.7")
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--n", type=int, default=2000)
    sweep.add_argument("--sigma", type=float, default=0.5)
    sweep.add_argument("--seeds", type=int, default=3)
    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Load the configuration and apply command-line overrides."""
    config = load_pipeline_config(args.config)
    overrides: Dict[str, Any] = {}
    if getattr(args, "oracle", False):
        overrides["embedder.kind"] = "oracle"
    if getattr(args, "sigma", None) is not None and args.command == "embed":
        overrides["embedder.sigma"] = args.sigma
    if getattr(args, "no_mbn", False):
        overrides["separation.use_mbn"] = False
    if getattr(args, "no_vad", False):
        overrides["separation.vad"] = False
    if overrides:
        config = override_config(config, overrides)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    return config


def _parse_deltas(raw: str) -> List[float]:
    try:
        return [float(token) for token in raw.split(",") if token.strip()]
    except ValueError as exc:
        raise ConfigError(f"--deltas: cannot parse {raw!r} as a comma-separated list") from exc


def _run_manifest(args, config: PipelineConfig) -> None:
    entries = generate_manifest(args.count, args.speakers, args.reverberant, config.seed)
    write_manifest(entries, args.out)
    logger.info("Wrote %d mixtures to %s", len(entries), args.out)


def _two_columns(coords: np.ndarray) -> np.ndarray:
    if coords.shape[1] >= 2:
        return coords[:, :2]
    return np.column_stack([coords[:, 0], np.zeros(coords.shape[0])])


def _viz(entry: ManifestEntry, out_dir: str) -> str:
    directory = pipeline.mixture_dir(out_dir, entry.name)
    embeddings = read_tensor(os.path.join(directory, "embeddings.mbnt"), expected_rank=2)
    m_vectors = read_tensor(os.path.join(directory, "mvectors.mbnt"), expected_rank=2)
    labels = read_tensor(os.path.join(directory, "labels.mbnt"), expected_rank=1).astype(np.int64)
    spaces = {
        "embedding": pca_fit(embeddings.astype(np.float64), 2).project(embeddings.astype(np.float64)),
        "m_vector": _two_columns(m_vectors),
    }
    path = os.path.join(directory, "viz.csv")
    write_table(viz_frame(labels, spaces), path)
    return path


def _run_dataset(args, config: PipelineConfig) -> None:
    entries = read_manifest(args.manifest)
    out_dir = args.out_dir
    if args.command == "mix":
        pipeline.for_each_mixture(lambda e, _: pipeline.stage_mix(e, config, out_dir), entries)
    elif args.command == "features":
        pipeline.for_each_mixture(lambda e, _: pipeline.stage_features(e, config, out_dir), entries)
    elif args.command == "embed":
        oracle = config.embedder.kind == "oracle"
        pipeline.for_each_mixture(lambda e, _: pipeline.stage_embed(e, config, out_dir, oracle), entries)
    elif args.command == "separate":
        pipeline.for_each_mixture(lambda e, w: pipeline.stage_separate(e, config, out_dir, w), entries)
    elif args.command == "eval":
        reports = pipeline.evaluate_manifest(entries, config, out_dir)
        logger.info(
            "Evaluated %d mixtures; median SI-SDR improvement %.3f dB",
            len(reports),
            float(np.median([r.si_sdr_improvement for r in reports])),
        )
    elif args.command == "viz":
        pipeline.for_each_mixture(lambda e, _: _viz(e, out_dir), entries)


def _run_mbn(args, config: PipelineConfig) -> None:
    if args.mbn_command == "fit":
        data = read_tensor(args.input, expected_rank=2).astype(np.float64)
        model = mbn_fit(data, config.mbn)
        save_model(model, args.model)
        logger.info(
            "Saved model with %d hidden layer%s (k schedule %s) to %s",
            model.n_layers,
            "" if model.n_layers == 1 else "s",
            list(model.k_schedule),
            args.model,
        )
        if args.output:
            write_tensor(args.output, mbn_transform(model, data))
    else:
        model = load_model(args.model)
        data = read_tensor(args.input, expected_rank=2).astype(np.float64)
        write_tensor(args.output, mbn_transform(model, data))


def _run_sweep(args, config: PipelineConfig) -> None:
    seeds = [config.seed + i for i in range(args.seeds)]
    rows = depth_sweep(
        _parse_deltas(args.deltas),
        config.mbn,
        seeds,
        n=args.n,
        sigma=args.sigma,
        dim=config.embedder.dim,
        restarts=config.separation.restarts,
    )
    write_table(records_frame(rows, SWEEP_COLUMNS), args.out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and return the exit status."""
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        if args.command == "manifest":
            _run_manifest(args, config)
        elif args.command == "mbn":
            _run_mbn(args, config)
        elif args.command == "sweep":
            _run_sweep(args, config)
        else:
            _run_dataset(args, config)
    except MbnsepError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

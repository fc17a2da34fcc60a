"""
Run the desk-scale acceptance experiments and print a verdict per check.

Checks:
    denoise    k-means on m-vectors vs raw oracle embeddings (n=2000, sigma=0.5, 10 seeds)
    ibm        ideal-binary-mask resynthesis on 20 mixtures (anechoic and T60=0.3 s)
    pipeline   full oracle chain (sigma=0.3) with and without MBN on the same mixtures
    determinism  the pipeline check twice, single- and multi-threaded, byte-compared

Usage:
    python scripts/run_acceptance.py [check ...] [--out-dir DIR]

Examples:
    python scripts/run_acceptance.py             # every check
    python scripts/run_acceptance.py denoise ibm
"""

import argparse
import os
import sys
import tempfile
import time
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

import numpy as np  # noqa: E402

from application.experiments import denoising_experiment, fixed_t60_manifest, ideal_mask_report  # noqa: E402
from application.pipeline import run_manifest  # noqa: E402
from application.reporting import render_report, write_eval_outputs  # noqa: E402
from config import MbnConfig, PipelineConfig, override_config  # noqa: E402

CHECKS = ("denoise", "ibm", "pipeline", "determinism")


def check_denoise() -> bool:
    config = MbnConfig(V=400, a=0.9, k1=20, delta=0.0, n_classes=2, output_dim=2)
    start = time.perf_counter()
    trials = denoising_experiment(range(10), n=2000, sigma=0.5, mbn_config=config)
    elapsed = (time.perf_counter() - start) / len(trials)
    raw = float(np.median([t.raw_accuracy for t in trials]))
    refined = float(np.median([t.mbn_accuracy for t in trials]))
    print(f"denoise: median accuracy raw {raw:.4f}, MBN {refined:.4f}, {elapsed:.1f} s per seed")
    return refined >= raw and refined >= 0.9


def check_ibm() -> bool:
    config = PipelineConfig()
    reports = [ideal_mask_report(entry, config) for entry in fixed_t60_manifest(seed=0)]
    mean = float(np.mean([r.si_sdr_improvement for r in reports]))
    print(f"ibm: mean SI-SDR improvement {mean:.3f} dB over {len(reports)} mixtures")
    return mean >= 5.0


def _pipeline_reports(use_mbn: bool, workers=None):
    config = override_config(
        PipelineConfig(),
        {"embedder.kind": "oracle", "embedder.sigma": 0.3, "separation.use_mbn": use_mbn},
    )
    outcomes = run_manifest(fixed_t60_manifest(seed=0), config, oracle=True, workers=workers)
    return [outcome.report for outcome in outcomes]


def check_pipeline(out_dir: str) -> bool:
    with_mbn = _pipeline_reports(True)
    without_mbn = _pipeline_reports(False)
    write_eval_outputs(with_mbn, os.path.join(out_dir, "mbn_on"))
    write_eval_outputs(without_mbn, os.path.join(out_dir, "mbn_off"))
    on = [r.si_sdr_improvement for r in with_mbn]
    off = [r.si_sdr_improvement for r in without_mbn]
    print(
        f"pipeline: min improvement {min(on):.3f} dB; median MBN on {np.median(on):.3f} dB, "
        f"off {np.median(off):.3f} dB"
    )
    return min(on) > 0.0 and float(np.median(on)) >= float(np.median(off))


def check_determinism() -> bool:
    first = render_report(_pipeline_reports(True, workers=1))
    second = render_report(_pipeline_reports(True))
    same = first == second
    print(f"determinism: reports {'identical' if same else 'DIFFER'}")
    return same


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("checks", nargs="*", choices=CHECKS, default=list(CHECKS))
    parser.add_argument("--out-dir", default=None, help="Where to keep eval outputs (default: temp dir)")
    args = parser.parse_args()

    out_dir = args.out_dir or tempfile.mkdtemp(prefix="mbnsep-acceptance-")
    results = {}
    for name in args.checks:
        if name == "denoise":
            results[name] = check_denoise()
        elif name == "ibm":
            results[name] = check_ibm()
        elif name == "pipeline":
            results[name] = check_pipeline(out_dir)
        else:
            results[name] = check_determinism()

    print()
    for name, passed in results.items():
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    print(f"Outputs in {out_dir}")
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())

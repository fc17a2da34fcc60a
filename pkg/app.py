"""
MbnSep - DPCL++ speech separation toolkit

Batch front-end for the separation pipeline:
- Simulates two-channel anechoic and reverberant mixtures from a manifest
- Extracts log-magnitude and cosIPD features per T-F unit
- Embeds units (oracle or ground-truth-free spatial embedder)
- Refines embeddings into m-vectors with a Multilayer Bootstrap Network
- Clusters m-vectors with k-means into binary masks and resynthesizes sources
- Scores the result with permutation-invariant SI-SDR

Run ``python app.py --help`` for the subcommands.
"""

# The project root must be importable before any package import.
import os
import sys

_project_root = os.path.dirname(os.path.abspath(__file__))
if _project_root not in sys.path:
    sys.path.insert(0, _project_root)

# Load .env before anything reads MBNSEP_* variables.
from dotenv import load_dotenv

env_path = os.path.join(_project_root, ".env")
if os.path.exists(env_path):
    load_dotenv(dotenv_path=env_path, override=False)

from application.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())

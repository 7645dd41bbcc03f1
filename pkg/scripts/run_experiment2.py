#!/usr/bin/env python3
"""Run the swarm-size sweep campaign.

Optimizes swarms of 1..7 spacecraft against a shared POI set per trial on a
fixed uncertainty sphere and reports mean coverage and -I per swarm size.

Usage:
    python3 scripts/run_experiment2.py [--config configs/experiment2.json]
                                       [--output results/experiment2]
                                       [--seed N] [--threads N]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from isoswarm.cli import main  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=str(ROOT / "configs/experiment2.json"))
    parser.add_argument("--output", default="results/experiment2")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=8)
    return parser.parse_args()


if __name__ == "__main__":
    args = parse_args()
    argv = ["--output", args.output, "--threads", str(args.threads)]
    if args.seed is not None:
        argv = ["--seed", str(args.seed)] + argv
    sys.exit(main(argv + ["experiment", "--config", args.config]))

#!/usr/bin/env python3
"""Run the full method x representation grid on a corpus and print the table.

Defaults to the bundled corpus and a throwaway output directory, so

    python3 scripts/run_grid.py

is a complete experiment: train both embedding kinds, summarize under every
method and representation, evaluate, and dump results.tsv to stdout.
"""

import argparse
import importlib.resources
import tempfile

from covsum.harness import (
    build_experiment_config,
    cmd_evaluate,
    cmd_summarize,
    cmd_train,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default=None, help="JSONL corpus (default: bundled)")
    ap.add_argument("--out", default=None, help="output dir (default: temp dir)")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--ratio", type=float, default=0.10)
    ap.add_argument("--dim", type=int, default=50)
    ap.add_argument("--epochs", type=int, default=10)
    args = ap.parse_args()

    corpus = args.corpus
    if corpus is None:
        corpus = str(
            importlib.resources.files("covsum").joinpath("data/selftest_corpus.jsonl")
        )
    out = args.out or tempfile.mkdtemp(prefix="covsum-grid-")

    config = build_experiment_config(
        {
            "corpus": corpus,
            "out": out,
            "seed": str(args.seed),
            "alpha": repr(args.alpha),
            "ratio": repr(args.ratio),
            "embed.dim": str(args.dim),
            "embed.epochs": str(args.epochs),
        }
    )
    cmd_train(config)
    cmd_summarize(config)
    tsv = cmd_evaluate(config)
    print()
    print(tsv.read_text(), end="")


if __name__ == "__main__":
    main()

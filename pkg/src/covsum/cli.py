"""Command-line entry point.

    covsum train     --corpus docs.jsonl --out runs/a --seed 7
    covsum summarize --corpus docs.jsonl --out runs/a --method JXDTD --repr BOW
    covsum evaluate  --corpus docs.jsonl --out runs/a
    covsum selftest

``--config`` points at a flat ``key = value`` file; every other flag
overrides the corresponding file key. ``--split N`` holds the first N
documents out as a development set (train still sees them; summarize and
evaluate skip them).
"""

from __future__ import annotations

import argparse
import sys

from .corpus import CorpusError
from .harness import (
    ConfigError,
    cmd_evaluate,
    cmd_selftest,
    cmd_summarize,
    cmd_train,
    load_experiment_config,
)

_FLAG_TO_KEY = {
    "corpus": "corpus",
    "out": "out",
    "method": "methods",
    "repr": "representations",
    "alpha": "alpha",
    "ratio": "ratio",
    "seed": "seed",
    "split": "split",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key = value experiment config file")
    parser.add_argument("--corpus", help="JSONL corpus path")
    parser.add_argument("--out", help="output directory (default out)")
    parser.add_argument("--method", help="comma-separated selection methods")
    parser.add_argument("--repr", help="comma-separated sentence representations")
    parser.add_argument("--alpha", help="coverage weight")
    parser.add_argument("--ratio", help="word-budget ratio in (0, 1]")
    parser.add_argument("--seed", help="experiment seed (also seeds training)")
    parser.add_argument("--split", help="hold out the first N documents as a dev set")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covsum",
        description="coverage-aware extractive summarization experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("train", "train paragraph-embedding models for the configured grid"),
        ("summarize", "summarize the corpus under the method x representation grid"),
        ("evaluate", "score stored summaries and write the mean-ROUGE table"),
    ):
        _add_common(sub.add_parser(name, help=text))
    sub.add_parser("selftest", help="run the built-in diagnostics on the bundled corpus")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return cmd_selftest()
        overrides = {
            key: getattr(args, flag)
            for flag, key in _FLAG_TO_KEY.items()
            if getattr(args, flag) is not None
        }
        config = load_experiment_config(args.config, overrides)
        if args.command == "train":
            cmd_train(config)
        elif args.command == "summarize":
            cmd_summarize(config)
        else:
            cmd_evaluate(config)
        return 0
    except (ConfigError, CorpusError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Regenerate the bundled selftest corpus.

The corpus is deterministic given the seed baked into covsum.synthetic, so
rerunning this script must reproduce src/covsum/data/selftest_corpus.jsonl
byte for byte.
"""

import sys
from pathlib import Path

from covsum.corpus import load_corpus, save_corpus
from covsum.synthetic import build_selftest_corpus


def main() -> int:
    out = Path(__file__).resolve().parent.parent / "src" / "covsum" / "data" / "selftest_corpus.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    docs = build_selftest_corpus()
    save_corpus(docs, out)
    reread = load_corpus(out)
    assert [d.id for d in reread] == [d.id for d in docs]
    assert all(a == b for a, b in zip(reread, docs))
    print(f"wrote {len(docs)} documents to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

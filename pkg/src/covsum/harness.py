"""Experiment runner behind the CLI.

An experiment is described by a flat ``key = value`` config file (dotted
keys reach the embedding hyperparameters, e.g. ``embed.dim = 50``) plus CLI
overrides, and runs in three stages that share one output directory:

    train      models/<kind>.cvem            (or models/<kind>/<doc>.cvem)
    summarize  summaries/<repr>__<method>.jsonl, one record per document
    evaluate   results.tsv + evaluation/per_document.jsonl

``results.tsv`` holds corpus-mean ROUGE-1/2/L F per grid cell, one row per
(method, representation). Everything downstream of the corpus file and the
seed is deterministic, byte for byte.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document, Vocabulary, build_vocabulary, load_bundled_corpus, load_corpus
from .embedding import (
    EmbeddingModel,
    ParagraphIds,
    TrainConfig,
    build_training_paragraphs,
    load_model,
    save_model,
    train,
)
from .rouge import evaluate
from .selection import (
    METHODS,
    REPRESENTATIONS,
    SelectorConfig,
    build_docview,
    greedy_select,
    summary_sentences,
)
from .selfcheck import run_all


class ConfigError(ValueError):
    """Raised for unknown config keys or unusable values."""


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_path: str = ""
    output_dir: str = "out"
    methods: tuple[str, ...] = METHODS
    representations: tuple[str, ...] = REPRESENTATIONS
    alpha: float = 1.0
    ratio: float = 0.10
    seed: int = 1
    split: int = 0  # hold out the first `split` documents as a dev set
    per_document_training: bool = False
    embed: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self) -> None:
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        if not self.representations:
            raise ConfigError("representations must be non-empty")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; choose from {METHODS}")
        for r in self.representations:
            if r not in REPRESENTATIONS:
                raise ConfigError(
                    f"unknown representation {r!r}; choose from {REPRESENTATIONS}"
                )
        if not 0.0 < self.ratio <= 1.0:
            raise ConfigError("ratio must be in (0, 1]")
        if self.split < 0:
            raise ConfigError("split must be >= 0")


def _parse_bool(raw: str) -> bool:
    low = raw.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}")


def _parse_list(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(",") if part.strip())


_TOP_KEYS = {
    "corpus": ("corpus_path", str),
    "out": ("output_dir", str),
    "methods": ("methods", _parse_list),
    "representations": ("representations", _parse_list),
    "alpha": ("alpha", float),
    "ratio": ("ratio", float),
    "seed": ("seed", int),
    "split": ("split", int),
    "per_document_training": ("per_document_training", _parse_bool),
}

_EMBED_KEYS = {
    "embed.dim": ("dim", int),
    "embed.context_size": ("context_size", int),
    "embed.epochs": ("epochs", int),
    "embed.learning_rate": ("learning_rate", float),
    "embed.negatives": ("negatives", int),
    "embed.seed": ("seed", int),
    "embed.unigram_power": ("unigram_power", float),
}


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment, blanks ignored."""
    pairs: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
            key, value = (part.strip() for part in stripped.split("=", 1))
            if not key or not value:
                raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
            pairs[key] = value
    return pairs


def build_experiment_config(pairs: dict[str, str]) -> ExperimentConfig:
    """Turn raw key/value strings into a validated ExperimentConfig.

    Unknown keys are an error that names every offender. ``seed`` doubles as
    the embedding seed unless ``embed.seed`` is given explicitly.
    """
    unknown = sorted(k for k in pairs if k not in _TOP_KEYS and k not in _EMBED_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

    top: dict = {}
    embed: dict = {}
    for key, raw in pairs.items():
        table, dest = (_TOP_KEYS, top) if key in _TOP_KEYS else (_EMBED_KEYS, embed)
        name, convert = table[key]
        try:
            dest[name] = convert(raw)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"config key {key}: bad value {raw!r} ({exc})") from exc

    if "seed" in top and "seed" not in embed:
        embed["seed"] = top["seed"]
    try:
        return ExperimentConfig(embed=TrainConfig(**embed), **top)
    except ValueError as exc:  # TrainConfig validation
        raise ConfigError(str(exc)) from exc


def load_experiment_config(
    config_path: str | Path | None = None, overrides: dict[str, str] | None = None
) -> ExperimentConfig:
    """File keys first, CLI overrides on top, then validate."""
    pairs = parse_config_file(config_path) if config_path else {}
    pairs.update(overrides or {})
    return build_experiment_config(pairs)


# ---------------------------------------------------------------------------
# shared plumbing


def _load_docs(config: ExperimentConfig) -> list[Document]:
    if not config.corpus_path:
        raise ConfigError("no corpus configured; set 'corpus' or pass --corpus")
    return load_corpus(config.corpus_path)


def _eval_docs(config: ExperimentConfig, docs: list[Document]) -> list[Document]:
    kept = docs[config.split :]
    if not kept:
        raise ConfigError(
            f"split={config.split} leaves no documents out of {len(docs)}"
        )
    return kept


def _required_kinds(representations: tuple[str, ...]) -> list[str]:
    kinds = []
    for kind in ("dm", "dbow"):
        if any(kind == p.lower() for rep in representations for p in rep.split("+")):
            kinds.append(kind)
    return kinds


def _safe_name(doc_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", doc_id)


def _model_path(out_dir: Path, kind: str, doc_id: str | None = None) -> Path:
    if doc_id is None:
        return out_dir / "models" / f"{kind}.cvem"
    return out_dir / "models" / kind / f"{_safe_name(doc_id)}.cvem"


class _ModelStore:
    """Lazy access to trained models for one experiment directory."""

    def __init__(
        self, config: ExperimentConfig, docs: list[Document], vocab: Vocabulary
    ) -> None:
        self._out = Path(config.output_dir)
        self._per_doc = config.per_document_training
        self._docs = docs
        self._vocab = vocab
        self._models: dict[tuple[str, str | None], EmbeddingModel] = {}
        self._index: dict[str, ParagraphIds] | None = None

    def _para_ids(self, doc: Document) -> ParagraphIds:
        if self._per_doc:
            _, index = build_training_paragraphs([doc], self._vocab)
            return index[doc.id]
        if self._index is None:
            _, self._index = build_training_paragraphs(self._docs, self._vocab)
        return self._index[doc.id]

    def model_for(self, representation: str, doc: Document) -> tuple[
        EmbeddingModel | None, ParagraphIds | None
    ]:
        parts = representation.split("+")
        kind = next((p.lower() for p in parts if p != "BOW"), None)
        if kind is None:
            return None, None
        key = (kind, doc.id if self._per_doc else None)
        if key not in self._models:
            path = _model_path(self._out, kind, key[1])
            if not path.is_file():
                raise FileNotFoundError(
                    f"representation {representation} needs a trained {kind} model "
                    f"at {path}; run the train subcommand first"
                )
            self._models[key] = load_model(path)
        return self._models[key], self._para_ids(doc)


# ---------------------------------------------------------------------------
# subcommands


def cmd_train(config: ExperimentConfig) -> list[Path]:
    """Train every embedding kind the configured grid needs and persist it."""
    docs = _load_docs(config)
    vocab = build_vocabulary(docs)
    kinds = _required_kinds(config.representations)
    out_dir = Path(config.output_dir)
    saved: list[Path] = []
    if not kinds:
        print("no embedding representations configured; nothing to train")
        return saved

    if config.per_document_training:
        for kind in kinds:
            for doc in docs:
                paragraphs, _ = build_training_paragraphs([doc], vocab)
                model = train(paragraphs, config.embed, kind, vocab.size)
                path = _model_path(out_dir, kind, doc.id)
                path.parent.mkdir(parents=True, exist_ok=True)
                save_model(model, path)
                saved.append(path)
    else:
        paragraphs, _ = build_training_paragraphs(docs, vocab)
        for kind in kinds:
            model = train(paragraphs, config.embed, kind, vocab.size)
            path = _model_path(out_dir, kind)
            path.parent.mkdir(parents=True, exist_ok=True)
            save_model(model, path)
            saved.append(path)
    for path in saved:
        print(f"wrote {path}")
    return saved


def _cell_path(out_dir: Path, representation: str, method: str) -> Path:
    return out_dir / "summaries" / f"{representation}__{method}.jsonl"


def cmd_summarize(config: ExperimentConfig) -> list[Path]:
    """Summarize every document under the full method x representation grid."""
    docs = _load_docs(config)
    vocab = build_vocabulary(docs)
    targets = _eval_docs(config, docs)
    store = _ModelStore(config, docs, vocab)
    out_dir = Path(config.output_dir)
    written: list[Path] = []
    for representation in config.representations:
        views = []
        for doc in targets:
            model, para_ids = store.model_for(representation, doc)
            views.append(
                build_docview(doc, representation, vocab, model=model, para_ids=para_ids)
            )
        for method in config.methods:
            cfg = SelectorConfig(method=method, alpha=config.alpha, ratio=config.ratio)
            path = _cell_path(out_dir, representation, method)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8") as fh:
                for view in views:
                    record = {"representation": representation}
                    record.update(greedy_select(view, cfg).to_dict())
                    fh.write(json.dumps(record) + "\n")
            written.append(path)
    print(f"wrote {len(written)} grid cells x {len(targets)} documents")
    return written


def cmd_evaluate(config: ExperimentConfig) -> Path:
    """Score every stored summary and write the corpus-mean ROUGE table."""
    docs = _load_docs(config)
    targets = _eval_docs(config, docs)
    by_id = {doc.id: doc for doc in targets}
    for doc in targets:
        if not doc.references:
            raise ConfigError(f"document {doc.id!r} has no reference summaries")

    out_dir = Path(config.output_dir)
    per_doc_path = out_dir / "evaluation" / "per_document.jsonl"
    per_doc_path.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    with open(per_doc_path, "w", encoding="utf-8") as fh:
        for method in config.methods:
            for representation in config.representations:
                path = _cell_path(out_dir, representation, method)
                if not path.is_file():
                    raise FileNotFoundError(
                        f"no summaries for {representation}/{method} at {path}; "
                        "run the summarize subcommand first"
                    )
                sums = {"rouge1": 0.0, "rouge2": 0.0, "rougeL": 0.0}
                count = 0
                with open(path, encoding="utf-8") as cell:
                    for line in cell:
                        record = json.loads(line)
                        doc = by_id.get(record["id"])
                        if doc is None:
                            continue  # summarized before a stricter split
                        picked = [doc.sentences[s].tokens for s in record["selected"]]
                        report = evaluate(picked, doc.references)
                        fh.write(
                            json.dumps(
                                {
                                    "id": doc.id,
                                    "method": method,
                                    "representation": representation,
                                    "rouge1_f": report.rouge1.f,
                                    "rouge2_f": report.rouge2.f,
                                    "rougeL_f": report.rougeL.f,
                                }
                            )
                            + "\n"
                        )
                        sums["rouge1"] += report.rouge1.f
                        sums["rouge2"] += report.rouge2.f
                        sums["rougeL"] += report.rougeL.f
                        count += 1
                if count == 0:
                    raise ConfigError(f"{path} holds no summaries for the evaluated documents")
                rows.append(
                    (
                        method,
                        representation,
                        sums["rouge1"] / count,
                        sums["rouge2"] / count,
                        sums["rougeL"] / count,
                    )
                )

    tsv_path = out_dir / "results.tsv"
    with open(tsv_path, "w", encoding="utf-8") as fh:
        fh.write("method\trepresentation\trouge1_f\trouge2_f\trougeL_f\n")
        for method, representation, r1, r2, rl in rows:
            fh.write(f"{method}\t{representation}\t{r1:.4f}\t{r2:.4f}\t{rl:.4f}\n")
    print(f"wrote {tsv_path}")
    return tsv_path


def cmd_selftest() -> int:
    """Run the built-in diagnostics against the bundled corpus; 0 iff all pass."""
    results = run_all(load_bundled_corpus())
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def config_to_pairs(config: ExperimentConfig) -> dict[str, str]:
    """Flatten a config back to its file representation (for provenance dumps)."""
    pairs = {
        "corpus": config.corpus_path,
        "out": config.output_dir,
        "methods": ",".join(config.methods),
        "representations": ",".join(config.representations),
        "alpha": repr(config.alpha),
        "ratio": repr(config.ratio),
        "seed": str(config.seed),
        "split": str(config.split),
        "per_document_training": str(config.per_document_training).lower(),
    }
    for f in dataclasses.fields(TrainConfig):
        pairs[f"embed.{f.name}"] = str(getattr(config.embed, f.name))
    return pairs

import json

import pytest

from covsum.corpus import save_corpus
from covsum.harness import (
    ConfigError,
    ExperimentConfig,
    build_experiment_config,
    cmd_evaluate,
    cmd_summarize,
    cmd_train,
    config_to_pairs,
    load_experiment_config,
    parse_config_file,
)

from conftest import make_doc


def corpus_on_disk(tmp_path, docs, name="corpus.jsonl"):
    path = tmp_path / name
    save_corpus(docs, path)
    return str(path)


def grid_docs():
    return [
        make_doc(
            "ga",
            [["alpha", "beta"], ["gamma", "delta"], ["alpha", "gamma"]],
            refs=[[["alpha", "beta"]]],
        ),
        make_doc(
            "gb",
            [["red", "blue"], ["green", "blue"], ["red", "green", "blue"]],
            refs=[[["red", "blue"]], [["green", "blue"]]],
        ),
        make_doc(
            "gc",
            [["one", "two", "three"], ["four", "five"]],
            refs=[[["one", "two", "three"]]],
        ),
    ]


# --- config parsing ----------------------------------------------------------


def test_parse_config_file(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "# a comment\n"
        "corpus = docs.jsonl\n"
        "alpha = 2.5   # trailing comment\n"
        "\n"
        "embed.dim = 32\n"
    )
    pairs = parse_config_file(cfg)
    assert pairs == {"corpus": "docs.jsonl", "alpha": "2.5", "embed.dim": "32"}


def test_parse_config_rejects_bad_lines(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("just some words\n")
    with pytest.raises(ConfigError, match="key = value"):
        parse_config_file(cfg)
    cfg.write_text("alpha =\n")
    with pytest.raises(ConfigError):
        parse_config_file(cfg)


def test_build_config_defaults_and_types():
    config = build_experiment_config({"corpus": "x.jsonl", "alpha": "0.5", "seed": "9"})
    assert config.corpus_path == "x.jsonl"
    assert config.alpha == 0.5
    assert config.ratio == 0.10
    assert config.seed == 9
    assert config.embed.seed == 9  # top-level seed flows into training
    assert config.methods == ("RELEVANCE_ONLY", "MMR", "XDTD", "JXDTD")


def test_explicit_embed_seed_wins():
    config = build_experiment_config({"seed": "9", "embed.seed": "4"})
    assert config.seed == 9
    assert config.embed.seed == 4


def test_unknown_keys_are_named():
    with pytest.raises(ConfigError, match="alpa.*rato"):
        build_experiment_config({"alpa": "1", "rato": "0.2"})


def test_bad_values_are_reported():
    with pytest.raises(ConfigError, match="alpha"):
        build_experiment_config({"alpha": "lots"})
    with pytest.raises(ConfigError, match="boolean"):
        build_experiment_config({"per_document_training": "maybe"})
    with pytest.raises(ConfigError, match="ratio"):
        build_experiment_config({"ratio": "0"})
    with pytest.raises(ConfigError, match="method"):
        build_experiment_config({"methods": "MMR,BOGUS"})
    with pytest.raises(ConfigError):
        build_experiment_config({"embed.dim": "0"})


def test_overrides_beat_file_keys(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("alpha = 1.0\nratio = 0.2\n")
    config = load_experiment_config(cfg, {"alpha": "3.0"})
    assert config.alpha == 3.0
    assert config.ratio == 0.2


def test_config_to_pairs_round_trips():
    config = build_experiment_config(
        {"corpus": "c.jsonl", "methods": "MMR,XDTD", "alpha": "2.0", "embed.dim": "7"}
    )
    assert build_experiment_config(config_to_pairs(config)) == config


def test_experiment_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(methods=())
    with pytest.raises(ConfigError):
        ExperimentConfig(representations=("LSA",))
    with pytest.raises(ConfigError):
        ExperimentConfig(split=-1)


# --- pipeline commands -------------------------------------------------------


def run_config(tmp_path, docs, **extra):
    pairs = {
        "corpus": corpus_on_disk(tmp_path, docs),
        "out": str(tmp_path / "out"),
        "methods": "RELEVANCE_ONLY,JXDTD",
        "representations": "BOW,DBOW",
        "embed.dim": "4",
        "embed.epochs": "1",
        "embed.negatives": "2",
        "seed": "3",
    }
    pairs.update(extra)
    return build_experiment_config(pairs)


def test_train_writes_only_needed_kinds(tmp_path):
    config = run_config(tmp_path, grid_docs())
    saved = cmd_train(config)
    assert [p.name for p in saved] == ["dbow.cvem"]

    bow_only = run_config(tmp_path, grid_docs(), representations="BOW")
    assert cmd_train(bow_only) == []


def test_summarize_then_evaluate(tmp_path):
    config = run_config(tmp_path, grid_docs())
    cmd_train(config)
    written = cmd_summarize(config)
    assert len(written) == 4  # 2 methods x 2 representations

    cell = tmp_path / "out" / "summaries" / "BOW__JXDTD.jsonl"
    records = [json.loads(line) for line in cell.read_text().splitlines()]
    assert [r["id"] for r in records] == ["ga", "gb", "gc"]
    assert all(r["representation"] == "BOW" for r in records)
    assert all(r["words_used"] >= r["budget_words"] for r in records)

    tsv = cmd_evaluate(config)
    lines = tsv.read_text().splitlines()
    assert lines[0] == "method\trepresentation\trouge1_f\trouge2_f\trougeL_f"
    assert len(lines) == 1 + 4  # header + full grid
    per_doc = tmp_path / "out" / "evaluation" / "per_document.jsonl"
    assert len(per_doc.read_text().splitlines()) == 4 * 3  # cells x documents


def test_evaluate_perfect_summary_scores_one(tmp_path):
    docs = [
        make_doc("p0", [["whole", "story"]], refs=[[["whole", "story"]]]),
        make_doc("p1", [["other", "news"]], refs=[[["other", "news"]]]),
    ]
    config = run_config(
        tmp_path, docs, representations="BOW", methods="RELEVANCE_ONLY", ratio="1.0"
    )
    cmd_summarize(config)
    tsv = cmd_evaluate(config)
    row = tsv.read_text().splitlines()[1].split("\t")
    assert row[2:] == ["1.0000", "1.0000", "1.0000"]


def test_summarize_without_model_names_it(tmp_path):
    config = run_config(tmp_path, grid_docs(), representations="BOW+DM")
    with pytest.raises(FileNotFoundError, match="BOW\\+DM.*dm model"):
        cmd_summarize(config)


def test_evaluate_requires_references(tmp_path):
    docs = grid_docs() + [make_doc("norefs", [["plain", "text"]])]
    config = run_config(tmp_path, docs, representations="BOW")
    cmd_summarize(config)
    with pytest.raises(ConfigError, match="norefs"):
        cmd_evaluate(config)


def test_evaluate_requires_summaries(tmp_path):
    config = run_config(tmp_path, grid_docs(), representations="BOW")
    with pytest.raises(FileNotFoundError, match="summarize"):
        cmd_evaluate(config)


def test_split_holds_out_prefix(tmp_path):
    config = run_config(tmp_path, grid_docs(), representations="BOW", split="2")
    cmd_summarize(config)
    cell = tmp_path / "out" / "summaries" / "BOW__RELEVANCE_ONLY.jsonl"
    records = [json.loads(line) for line in cell.read_text().splitlines()]
    assert [r["id"] for r in records] == ["gc"]

    too_big = run_config(tmp_path, grid_docs(), representations="BOW", split="3")
    with pytest.raises(ConfigError, match="split"):
        cmd_summarize(too_big)


def test_per_document_training(tmp_path):
    config = run_config(
        tmp_path, grid_docs(), representations="DBOW", methods="XDTD",
        per_document_training="true",
    )
    saved = cmd_train(config)
    assert sorted(p.name for p in saved) == ["ga.cvem", "gb.cvem", "gc.cvem"]
    cmd_summarize(config)
    tsv = cmd_evaluate(config)
    assert len(tsv.read_text().splitlines()) == 2


def test_missing_corpus_errors_with_path(tmp_path):
    config = build_experiment_config({"corpus": str(tmp_path / "absent.jsonl")})
    with pytest.raises(FileNotFoundError, match="absent.jsonl"):
        cmd_train(config)
    with pytest.raises(ConfigError, match="corpus"):
        cmd_train(build_experiment_config({}))

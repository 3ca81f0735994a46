import json
import os

import pytest

from lexsub.cli import build_parser, main

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIG = os.path.join(REPO, "lexsub.yaml")
DEMO_JSONL = os.path.join(REPO, "assets", "demo_instances.jsonl")
WSI_JSONL = os.path.join(REPO, "assets", "wsi_instances.jsonl")

SEMEVAL_XML = """<?xml version="1.0"?>
<corpus lang="english">
<lexelt item="bright.a">
<instance id="1">
<context>the <head>bright</head> girl reads</context>
</instance>
<instance id="2">
<context>a <head>bright</head> lamp glows</context>
</instance>
</lexelt>
</corpus>
"""

SEMEVAL_GOLD = "bright.a 1 :: clever 2; smart 1;\nbright.a 2 :: shiny 3;\n"


def test_eval_candidate_writes_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(
        [
            "eval",
            "--config",
            CONFIG,
            "--dataset",
            f"jsonl:{DEMO_JSONL}",
            "--model",
            "demo-toy",
            "--task",
            "candidate",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["protocol"] == "candidate-ranking"
    assert doc["model"] == "demo-toy"
    assert 0.0 <= doc["mean_gap"] <= 1.0
    assert doc["n_scored"] + doc["n_skipped"] == 12
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["mean_gap"] == pytest.approx(doc["mean_gap"])


def test_eval_all_words(tmp_path, capsys):
    code = main(
        [
            "eval",
            "--config",
            CONFIG,
            "--dataset",
            "demo",
            "--model",
            "demo-toy",
            "--task",
            "all-words",
        ]
    )
    assert code == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["protocol"] == "all-words"
    assert "mean_p_at_1" in summary


def test_eval_injection_alias_pat(capsys):
    code = main(
        [
            "eval",
            "--config",
            CONFIG,
            "--dataset",
            "demo",
            "--model",
            "demo-toy",
            "--injection",
            "pat",
        ]
    )
    assert code == 0


def test_eval_unknown_model_exits():
    with pytest.raises(SystemExit):
        main(["eval", "--config", CONFIG, "--dataset", "demo", "--model", "ghost"])


def test_eval_unknown_dataset_exits():
    with pytest.raises(SystemExit):
        main(["eval", "--config", CONFIG, "--dataset", "ghost", "--model", "demo-toy"])


def test_missing_config_exits(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("LEXSUB_CONFIG", raising=False)
    with pytest.raises(SystemExit):
        main(["eval", "--dataset", "demo", "--model", "demo-toy"])


def test_config_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("LEXSUB_CONFIG", CONFIG)
    code = main(["eval", "--dataset", "demo", "--model", "demo-toy"])
    assert code == 0


def test_grid_search(tmp_path):
    out = tmp_path / "grid.json"
    code = main(
        [
            "grid-search",
            "--config",
            CONFIG,
            "--dataset",
            "demo",
            "--model",
            "demo-toy",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert {"temperature", "beta", "injection"} <= set(doc["best"])
    assert len(doc["table"]) == 20  # 5 temperatures x 4 betas
    for row in doc["table"]:
        assert {"temperature", "beta", "mean_gap"} <= set(row)


def test_wsi_command(tmp_path):
    out = tmp_path / "wsi.json"
    sub = tmp_path / "submission.txt"
    code = main(
        [
            "wsi",
            "--config",
            CONFIG,
            "--dataset",
            f"jsonl:{WSI_JSONL}",
            "--model",
            "demo-toy",
            "--n-subst",
            "10",
            "--k",
            "2",
            "--out",
            str(out),
            "--submission",
            str(sub),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert "bright.adj" in doc["targets"]
    entry = doc["targets"]["bright.adj"]
    assert entry["n_instances"] == 6
    assert set(entry["clusters"].values()) <= {0, 1}
    # gold senses cover every instance, so metrics are reported
    assert "v_measure" in entry and "paired_fscore" in entry and "avg" in entry
    assert "mean_avg" in doc
    lines = sub.read_text().strip().splitlines()
    assert len(lines) == 6
    assert all(line.startswith("bright.adj wsi.bright.") for line in lines)


def test_augment_command(tmp_path):
    table = {"default": {"abba": 0.5, "queen": 0.5}, "vocabulary": ["abba", "queen"]}
    (tmp_path / "table.json").write_text(json.dumps(table))
    (tmp_path / "conf.yaml").write_text(
        "models:\n  - name: tiny\n    backend: toy-table\n    table: table.json\n"
    )
    snips = {
        "PlayMusic": [
            {"data": [{"text": "play "}, {"text": "meldor", "entity": "artist"}]},
            {"data": [{"text": "play "}, {"text": "randor", "entity": "artist"}]},
        ]
    }
    (tmp_path / "train.json").write_text(json.dumps(snips))
    out = tmp_path / "train.aug.json"
    code = main(
        [
            "augment",
            "--config",
            str(tmp_path / "conf.yaml"),
            "--snips",
            str(tmp_path / "train.json"),
            "--model",
            "tiny",
            "--multiplier",
            "2",
            "--seed",
            "7",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    from lexsub.snips import read_snips

    rows = read_snips(out)
    assert len(rows) == 6
    augmented = [u for u in rows if u.provenance]
    assert len(augmented) == 4
    assert all(u.tokens[1] in {"abba", "queen"} for u in augmented)


def test_relstats_command(tmp_path):
    out = tmp_path / "stats.json"
    code = main(
        [
            "relstats",
            "--config",
            CONFIG,
            "--models",
            "demo-toy,demo-fb",
            "--dataset",
            "demo",
            "--topk",
            "3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert doc["topk"] == 3
    assert len(doc["labels"]) == 9
    assert set(doc["models"]) == {"demo-toy", "demo-fb", "gold"}  # gold census included
    for name, stats in doc["models"].items():
        assert sum(stats.values()) == pytest.approx(100.0)
    assert [s["model"] for s in doc["series"]] == ["demo-fb", "demo-toy", "gold"]
    for series in doc["series"]:
        assert len(series["values"]) == 9


def test_convert_semeval_command(tmp_path, capsys):
    xml = tmp_path / "sent.xml"
    gold = tmp_path / "gold.txt"
    out = tmp_path / "instances.jsonl"
    xml.write_text(SEMEVAL_XML)
    gold.write_text(SEMEVAL_GOLD)
    code = main(
        ["convert", "semeval", "--xml", str(xml), "--gold", str(gold), "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert first["lemma"] == "bright"
    assert first["gold"] == {"clever": 2, "smart": 1}


def test_convert_semeval_requires_gold(tmp_path, capsys):
    xml = tmp_path / "sent.xml"
    xml.write_text(SEMEVAL_XML)
    code = main(["convert", "semeval", "--xml", str(xml), "--out", str(tmp_path / "o.jsonl")])
    assert code == 2
    assert "--gold" in capsys.readouterr().err


def test_serve_parser_wiring():
    parser = build_parser()
    args = parser.parse_args(["serve", "--port", "8123", "--config", "x.yaml"])
    assert args.port == 8123
    assert args.config == "x.yaml"
    assert args.host == "127.0.0.1"
    with pytest.raises(SystemExit):
        parser.parse_args(["not-a-command"])

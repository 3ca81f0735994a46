"""Command-line entrypoints.

    lexsub eval --dataset jsonl:dev.jsonl --model demo-fb --task candidate --out report.json
    lexsub grid-search --dataset jsonl:dev.jsonl --model demo-fb --out grid.json
    lexsub wsi --dataset jsonl:wsi.jsonl --model demo-fb --n-subst 200 --k auto --out wsi.json
    lexsub augment --snips train.json --model demo-emb --multiplier 1 --out train.aug.json
    lexsub relstats --models demo-fb,demo-emb --dataset jsonl:dev.jsonl --topk 10 --out stats.json
    lexsub convert semeval --xml sentences.xml --gold gold.txt --out instances.jsonl
    lexsub convert coinco --xml coinco.xml --out instances.jsonl --split 65
    lexsub serve --config lexsub.yaml --port 8000

Dataset specifiers are either `jsonl:<path>` or a name from the config's
`datasets` section. Models always come from the config's `models` list;
`--config` defaults to $LEXSUB_CONFIG, then ./lexsub.yaml.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import ServiceConfig, load_config
from .core import read_instances_jsonl
from .estimators import EstimatorConfig, SubstituteEstimator, build_registry, generate
from .postproc import PostprocVariant, postprocess

_INJECTION_ALIASES = {"pat": "pattern"}


def _load_cli_config(path: str | None) -> ServiceConfig:
    path = path or os.environ.get("LEXSUB_CONFIG") or "lexsub.yaml"
    if not os.path.exists(path):
        raise SystemExit(f"config file {path!r} not found (pass --config)")
    return load_config(path)


def _dataset(spec: str, config: ServiceConfig):
    if spec.startswith("jsonl:"):
        return read_instances_jsonl(spec[len("jsonl:") :])
    if spec in config.datasets:
        return read_instances_jsonl(config.resolve(config.datasets[spec]))
    raise SystemExit(
        f"unknown dataset {spec!r}: use jsonl:<path> or one of {sorted(config.datasets)}"
    )


def _backend(config: ServiceConfig, name: str) -> SubstituteEstimator:
    registry = build_registry(
        [m for m in config.models if m.get("name") == name], base_dir=config.base_dir
    )
    if name not in registry:
        raise SystemExit(f"model {name!r} not in config (have {[m.get('name') for m in config.models]})")
    return registry[name]


def _estimator_config(args, backend: SubstituteEstimator) -> EstimatorConfig:
    injection = _INJECTION_ALIASES.get(args.injection, args.injection)
    defaults = args._config.defaults
    return EstimatorConfig(
        backend=backend.backend_type,
        injection=injection or backend.default_injection,
        temperature=args.temperature if args.temperature is not None else defaults.temperature,
        beta=args.beta if args.beta is not None else defaults.beta,
        pattern=args.pattern if args.pattern is not None else defaults.pattern,
    )


def _add_common(parser: argparse.ArgumentParser, injections=True):
    parser.add_argument("--config", default=None, help="YAML config path")
    if injections:
        parser.add_argument(
            "--injection",
            default=None,
            choices=["notgt", "base", "embs", "pattern", "pat"],
            help="target injection mode (default: backend's own)",
        )
        parser.add_argument("--temperature", type=float, default=None)
        parser.add_argument("--beta", type=float, default=None)
        parser.add_argument("--pattern", default=None)
        parser.add_argument("--postproc", default="default")


def _write_json(doc, path: str | None):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {path}")
    else:
        print(text)


def cmd_eval(args) -> int:
    from .evaluation import (
        build_candidate_pool,
        evaluate_all_words,
        evaluate_candidate_ranking,
    )

    config = _load_cli_config(args.config)
    args._config = config
    instances = _dataset(args.dataset, config)
    backend = _backend(config, args.model)
    est_config = _estimator_config(args, backend)
    variant = PostprocVariant.by_name(args.postproc)
    if args.task == "candidate":
        pool = build_candidate_pool(instances)
        report = evaluate_candidate_ranking(
            backend, instances, pool, config=est_config, variant=variant, model_name=args.model
        )
    else:
        report = evaluate_all_words(
            backend, instances, config=est_config, variant=variant, model_name=args.model
        )
    if args.out:
        report.to_json(args.out)
        print(f"wrote {args.out}")
    summary = {
        "protocol": report.protocol,
        "mean_gap": report.mean_gap,
        "mean_p_at_1": report.mean_p_at_1,
        "mean_p_at_3": report.mean_p_at_3,
        "mean_r_at_10": report.mean_r_at_10,
        "n_scored": report.n_scored,
        "n_skipped": report.n_skipped,
    }
    print(json.dumps({k: v for k, v in summary.items() if v is not None}, sort_keys=True))
    return 0


def cmd_grid_search(args) -> int:
    from .evaluation import build_candidate_pool, grid_search_hyperparams

    config = _load_cli_config(args.config)
    instances = _dataset(args.dataset, config)
    backend = _backend(config, args.model)
    pool = build_candidate_pool(instances)
    injection = _INJECTION_ALIASES.get(args.injection, args.injection) or "embs"
    best, table = grid_search_hyperparams(
        backend,
        instances,
        pool,
        injection=injection,
        variant=PostprocVariant.by_name(args.postproc),
    )
    doc = {
        "best": {"temperature": best.temperature, "beta": best.beta, "injection": best.injection},
        "table": table,
    }
    _write_json(doc, args.out)
    return 0


def cmd_wsi(args) -> int:
    from .wsi import (
        avg_2010,
        build_substitute_vectors,
        cluster,
        group_by_target,
        paired_fscore,
        read_wsi_jsonl,
        v_measure,
    )

    config = _load_cli_config(args.config)
    args._config = config
    instances = read_wsi_jsonl(
        args.dataset[len("jsonl:") :]
        if args.dataset.startswith("jsonl:")
        else config.resolve(config.datasets[args.dataset])
    )
    backend = _backend(config, args.model)
    est_config = _estimator_config(args, backend)
    variant = PostprocVariant.by_name(args.postproc)
    k = args.k if args.k == "auto" else int(args.k)
    doc: dict = {"k": args.k, "n_subst": args.n_subst, "targets": {}}
    submission_lines = []
    for (lemma, pos), group in sorted(group_by_target(instances).items()):
        if len(group) < 2:
            continue
        vectors = build_substitute_vectors(
            group, backend, config=est_config, n=args.n_subst, variant=variant
        )
        labels = cluster(vectors, k=k)
        entry: dict = {"n_instances": len(group), "clusters": labels}
        gold = {i.instance_id: i.gold_sense for i in group if i.gold_sense is not None}
        if len(gold) == len(group):
            entry["v_measure"] = v_measure(labels, gold)
            entry["paired_fscore"] = paired_fscore(labels, gold)
            entry["avg"] = avg_2010(labels, gold)
        doc["targets"][f"{lemma}.{pos}"] = entry
        for instance_id in sorted(labels):
            submission_lines.append(
                f"{lemma}.{pos} {instance_id} {lemma}.{pos}.{labels[instance_id]}"
            )
    scored = [t for t in doc["targets"].values() if "avg" in t]
    if scored:
        doc["mean_v_measure"] = sum(t["v_measure"] for t in scored) / len(scored)
        doc["mean_paired_fscore"] = sum(t["paired_fscore"] for t in scored) / len(scored)
        doc["mean_avg"] = sum(t["avg"] for t in scored) / len(scored)
    if args.submission:
        with open(args.submission, "w", encoding="utf-8") as fh:
            fh.write("\n".join(submission_lines) + "\n")
        print(f"wrote {args.submission}")
    _write_json(doc, args.out)
    return 0


def cmd_augment(args) -> int:
    from .augment import augment_dataset
    from .snips import read_snips, write_snips

    config = _load_cli_config(args.config)
    args._config = config
    utterances = read_snips(args.snips)
    backend = _backend(config, args.model)
    est_config = _estimator_config(args, backend)
    variant = PostprocVariant.by_name(args.postproc)
    augmented = augment_dataset(
        utterances,
        backend,
        multiplier=args.multiplier,
        rng_seed=args.seed,
        config=est_config,
        variant=variant,
    )
    write_snips(augmented, args.out)
    print(f"wrote {args.out} ({len(augmented)} utterances from {len(utterances)})")
    return 0


def cmd_relstats(args) -> int:
    from .relations import RELATION_LABELS, relation_stats
    from .wordnet_db import load_wndb

    config = _load_cli_config(args.config)
    args._config = config
    if not config.wordnet:
        raise SystemExit("config has no wordnet path (or set LEXSUB_WORDNET)")
    graph = load_wndb(config.resolve(config.wordnet))
    instances = _dataset(args.dataset, config)
    per_model: dict[str, dict[str, list[str]]] = {}
    for name in args.models.split(","):
        name = name.strip()
        backend = _backend(config, name)
        est_config = EstimatorConfig(
            backend=backend.backend_type,
            injection=backend.default_injection,
            temperature=config.defaults.temperature,
            beta=config.defaults.beta,
        )
        variant = PostprocVariant.by_name(args.postproc)
        predictions: dict[str, list[str]] = {}
        for inst in instances:
            dist = postprocess(generate(backend, inst, est_config), inst, variant)
            ranked = sorted(dist.items(), key=lambda kv: (-kv[1], kv[0]))
            predictions[inst.instance_id] = [w for w, _ in ranked[: args.topk]]
        per_model[name] = predictions
    stats = relation_stats(
        per_model,
        instances,
        graph,
        pos_filter=args.pos,
        cohyp3_total=args.total_path,
    )
    doc = {
        "schema_version": 1,
        "topk": args.topk,
        "labels": list(RELATION_LABELS),
        "log_scale": True,
        "models": stats,
        "series": [
            {"model": model, "values": [stats[model][label] for label in RELATION_LABELS]}
            for model in sorted(stats)
        ],
    }
    _write_json(doc, args.out)
    return 0


def cmd_convert(args) -> int:
    from .datasets import convert_coinco, convert_semeval

    if args.format == "semeval":
        count = convert_semeval(args.xml, args.gold, args.out)
    else:
        count = convert_coinco(args.xml, args.out, split=args.split, split_file=args.split_file)
    print(f"wrote {args.out} ({count} instances)")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_cli_config(args.config)
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexsub", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="intrinsic evaluation (GAP / P@k / R@10)")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--task", choices=["candidate", "all-words"], default="candidate")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid-search", help="temperature/beta grid on a dev set")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_grid_search)

    p = sub.add_parser("wsi", help="word sense induction over instance groups")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--n-subst", type=int, default=200, dest="n_subst")
    p.add_argument("--k", default="auto")
    p.add_argument("--out", default=None)
    p.add_argument("--submission", default=None, help="also write SemEval submission lines")
    p.set_defaults(func=cmd_wsi)

    p = sub.add_parser("augment", help="augment a SNIPS-format dataset")
    _add_common(p)
    p.add_argument("--snips", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--multiplier", type=int, default=1)
    p.add_argument("--seed", default="0")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("relstats", help="relation label census for model substitutes")
    _add_common(p, injections=False)
    p.add_argument("--models", required=True, help="comma-separated model names")
    p.add_argument("--dataset", required=True)
    p.add_argument("--topk", type=int, default=10)
    p.add_argument("--pos", default=None, choices=["noun", "verb", "adj", "adv"])
    p.add_argument("--postproc", default="default")
    p.add_argument(
        "--total-path",
        action="store_true",
        help="co-hyponym-3 via total path length <= 3 instead of <= 3 hops per side",
    )
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_relstats)

    p = sub.add_parser("convert", help="convert source corpora to canonical JSONL")
    p.add_argument("format", choices=["semeval", "coinco"])
    p.add_argument("--xml", required=True)
    p.add_argument("--gold", default=None, help="SemEval gold file")
    p.add_argument("--split", default="all", choices=["all", "35", "65"])
    p.add_argument("--split-file", default=None, dest="split_file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--config", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "convert" and args.format == "semeval" and not args.gold:
        print("convert semeval needs --gold", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

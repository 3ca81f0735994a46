"""Service/CLI configuration: a small YAML file with documented schema.

Schema (all sections optional unless noted)::

    models:                # required for serve/eval; see estimators.registry
      - name: demo-fb
        backend: forward-backward-lm
        corpus: assets/corpus.txt
    datasets:              # canonical JSONL instance files, by name
      demo: assets/demo_instances.jsonl
    snips_datasets:        # SNIPS-format slot datasets, by name
      snips-train: assets/snips_train.json
    wordnet: assets/wndb   # directory in WordNet database file format
    output_dir: out        # only directory the service ever writes to
    defaults:
      temperature: 1.0
      beta: 1.0
      pattern: "T and then _"
      top_k: 10
      postproc: default
    service:
      queue_size: 8
      timeout_seconds: 30.0
      page_size: 10

Relative paths resolve against the config file's directory. Environment
overrides exist for paths only: LEXSUB_WORDNET replaces ``wordnet`` and
LEXSUB_OUTPUT_DIR replaces ``output_dir``.
"""

from __future__ import annotations

import dataclasses
import os

import yaml

from .core import LexsubError
from .estimators import DEFAULT_PATTERN


class ConfigError(LexsubError):
    pass


@dataclasses.dataclass(frozen=True)
class Defaults:
    temperature: float = 1.0
    beta: float = 1.0
    pattern: str = DEFAULT_PATTERN
    top_k: int = 10
    postproc: str = "default"


@dataclasses.dataclass(frozen=True)
class ServiceSettings:
    queue_size: int = 8
    timeout_seconds: float = 30.0
    page_size: int = 10


@dataclasses.dataclass
class ServiceConfig:
    models: list[dict] = dataclasses.field(default_factory=list)
    datasets: dict[str, str] = dataclasses.field(default_factory=dict)
    snips_datasets: dict[str, str] = dataclasses.field(default_factory=dict)
    wordnet: str | None = None
    output_dir: str | None = None
    defaults: Defaults = dataclasses.field(default_factory=Defaults)
    service: ServiceSettings = dataclasses.field(default_factory=ServiceSettings)
    base_dir: str | None = None

    def resolve(self, path: str | None) -> str | None:
        if path is None:
            return None
        if self.base_dir is not None and not os.path.isabs(path):
            return os.path.join(self.base_dir, path)
        return path


def _build_section(cls, doc: dict, section: str):
    raw = doc.get(section, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"section {section!r} must be a mapping")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
    return cls(**raw)


def load_config(path) -> ServiceConfig:
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    models = doc.get("models", [])
    if not isinstance(models, list):
        raise ConfigError("models must be a list of mappings")
    config = ServiceConfig(
        models=models,
        datasets=dict(doc.get("datasets", {})),
        snips_datasets=dict(doc.get("snips_datasets", {})),
        wordnet=doc.get("wordnet"),
        output_dir=doc.get("output_dir"),
        defaults=_build_section(Defaults, doc, "defaults"),
        service=_build_section(ServiceSettings, doc, "service"),
        base_dir=os.path.dirname(os.path.abspath(path)),
    )
    if os.environ.get("LEXSUB_WORDNET"):
        config.wordnet = os.environ["LEXSUB_WORDNET"]
    if os.environ.get("LEXSUB_OUTPUT_DIR"):
        config.output_dir = os.environ["LEXSUB_OUTPUT_DIR"]
    return config

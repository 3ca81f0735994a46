"""HTTP API over the workbench: analyze, model and instance browsing.

Responses are pure functions of (request, configuration, dataset
snapshot): handlers serialize with sorted keys so repeated identical
requests produce byte-identical bodies. Backend inference goes through a
bounded work pool — saturation or a per-request timeout yields 503, so a
slow backend cannot wedge the UI.

Error mapping: 400 malformed request (including pydantic validation and
bad spans), 404 unknown model/dataset/instance, 503 saturated pool,
timeout, or unavailable backend.
"""

from __future__ import annotations

import json
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FuturesTimeout
from typing import Callable, Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .config import ServiceConfig, load_config
from .core import LexSubInstance, instance_to_record, read_instances_jsonl
from .estimators import (
    BackendUnavailableError,
    EstimatorConfig,
    UnsupportedInjectionError,
    build_registry,
    generate,
)
from .lemmas import lemmatize
from .postproc import EmptyAfterFilteringError, PostprocVariant, postprocess
from .relations import SynsetGraph, classify
from .wordnet_db import load_wndb

SCHEMA_VERSION = 1


class PoolSaturated(Exception):
    pass


class InferenceTimeout(Exception):
    pass


class InferencePool:
    """Bounded admission + per-request timeout + serialization of
    non-reentrant backends."""

    def __init__(self, max_pending: int = 8, timeout_seconds: float = 30.0):
        self._admission = threading.BoundedSemaphore(max_pending)
        self._executor = ThreadPoolExecutor(max_workers=max(2, max_pending))
        self._locks: dict[int, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self.timeout_seconds = timeout_seconds

    def _lock_for(self, backend) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(id(backend), threading.Lock())

    def run(self, backend, fn: Callable):
        if not self._admission.acquire(blocking=False):
            raise PoolSaturated("inference queue is full")
        try:
            future = self._executor.submit(self._call, backend, fn)
            try:
                return future.result(timeout=self.timeout_seconds)
            except FuturesTimeout:
                future.cancel()
                raise InferenceTimeout(f"inference exceeded {self.timeout_seconds}s")
        finally:
            self._admission.release()


    def _call(self, backend, fn: Callable):
        if backend is not None and not getattr(backend, "reentrant", True):
            with self._lock_for(backend):
                return fn()
        return fn()


class ModelSpec(BaseModel):
    name: str
    injection: Optional[str] = None


class AnalyzeRequest(BaseModel):
    sentence: Optional[str] = None
    target_char_span: Optional[tuple[int, int]] = None
    dataset: Optional[str] = None
    instance_id: Optional[str] = None
    models: list[ModelSpec] = Field(min_length=1)
    top_k: int = 10
    postproc: str = "default"
    pos: str = "noun"
    temperature: Optional[float] = None
    beta: Optional[float] = None
    pattern: Optional[str] = None


def _json_response(doc: dict, status_code: int = 200) -> Response:
    body = json.dumps(doc, sort_keys=True, ensure_ascii=False)
    return Response(content=body, status_code=status_code, media_type="application/json")


def _error(status_code: int, message: str) -> Response:
    return _json_response({"detail": message, "schema_version": SCHEMA_VERSION}, status_code)


def _span_to_instance(sentence: str, span: tuple[int, int], pos: str) -> LexSubInstance | None:
    """Whitespace-tokenize and locate the single token covering the span."""
    start, end = span
    if not 0 <= start < end <= len(sentence):
        return None
    target_index = None
    tokens = []
    for i, match in enumerate(re.finditer(r"\S+", sentence)):
        tokens.append(match.group())
        if match.start() <= start and end <= match.end():
            target_index = i
    if target_index is None or not tokens:
        return None
    word = tokens[target_index]
    return LexSubInstance(
        instance_id=f"adhoc.{start}.{end}",
        tokens=tuple(tokens),
        target_index=target_index,
        target_lemma=lemmatize(word.lower(), pos),
        target_pos=pos,
    )


def create_app(config: ServiceConfig | str) -> FastAPI:
    if not isinstance(config, ServiceConfig):
        config = load_config(config)

    registry = build_registry(config.models, base_dir=config.base_dir)
    datasets: dict[str, list[LexSubInstance]] = {
        name: read_instances_jsonl(config.resolve(path))
        for name, path in config.datasets.items()
    }
    graph: SynsetGraph | None = None
    if config.wordnet:
        graph = load_wndb(config.resolve(config.wordnet))
    pool = InferencePool(
        max_pending=config.service.queue_size,
        timeout_seconds=config.service.timeout_seconds,
    )

    app = FastAPI(title="lexsub", version=__version__)
    app.state.registry = registry
    app.state.datasets = datasets
    app.state.graph = graph
    app.state.pool = pool
    app.state.config = config

    @app.exception_handler(RequestValidationError)
    async def validation_to_400(request: Request, exc: RequestValidationError):
        from fastapi.encoders import jsonable_encoder

        return JSONResponse(
            status_code=400,
            content={
                "detail": jsonable_encoder(exc.errors(), exclude={"ctx"}),
                "schema_version": SCHEMA_VERSION,
            },
        )

    @app.get("/api/models")
    def list_models(injection: Optional[str] = None):
        from .estimators import INJECTIONS

        if injection is not None and injection not in INJECTIONS:
            return _error(400, f"unknown injection {injection!r}; expected one of {list(INJECTIONS)}")
        rows = []
        for name in sorted(registry):
            backend = registry[name]
            if injection is not None and injection not in backend.supported_injections:
                continue
            rows.append(
                {
                    "name": name,
                    "backend": backend.backend_type,
                    "default_injection": backend.default_injection,
                    "supported_injections": list(backend.supported_injections),
                    "vocabulary_size": len(backend.vocabulary),
                    "reentrant": backend.reentrant,
                }
            )
        return _json_response({"schema_version": SCHEMA_VERSION, "models": rows})

    @app.get("/api/instances")
    def list_instances(
        dataset: str,
        lemma: Optional[str] = None,
        page: int = 1,
        page_size: Optional[int] = None,
    ):
        if dataset not in datasets:
            return _error(404, f"unknown dataset {dataset!r}")
        if page < 1:
            return _error(400, "page must be >= 1")
        size = page_size if page_size is not None else config.service.page_size
        if size < 1:
            return _error(400, "page_size must be >= 1")
        rows = datasets[dataset]
        if lemma is not None:
            rows = [inst for inst in rows if inst.target_lemma == lemma]
        total = len(rows)
        total_pages = (total + size - 1) // size if total else 0
        window = rows[(page - 1) * size : page * size]
        return _json_response(
            {
                "schema_version": SCHEMA_VERSION,
                "dataset": dataset,
                "page": page,
                "page_size": size,
                "total": total,
                "total_pages": total_pages,
                "instances": [instance_to_record(inst) for inst in window],
            }
        )

    def _analyze_model(
        spec: ModelSpec, instance: LexSubInstance, req: AnalyzeRequest
    ) -> dict:
        backend = registry[spec.name]
        injection = spec.injection or backend.default_injection
        defaults = config.defaults
        est_config = EstimatorConfig(
            backend=backend.backend_type,
            injection=injection,
            temperature=req.temperature if req.temperature is not None else defaults.temperature,
            beta=req.beta if req.beta is not None else defaults.beta,
            pattern=req.pattern if req.pattern is not None else defaults.pattern,
        )
        variant = PostprocVariant.by_name(req.postproc)

        def work():
            return postprocess(generate(backend, instance, est_config), instance, variant)

        dist = pool.run(backend, work)
        ranked = sorted(dist.items(), key=lambda kv: (-kv[1], kv[0]))[: req.top_k]
        substitutes = []
        for word, probability in ranked:
            relation = None
            if graph is not None:
                relation = classify(instance.target_lemma, word, instance.target_pos, graph)
            substitutes.append(
                {"word": word, "probability": probability, "relation": relation}
            )
        row = {
            "name": spec.name,
            "injection": injection,
            "substitutes": substitutes,
            "true_positives": None,
            "gold_ranks": None,
        }
        if instance.gold:
            top_words = [s["word"] for s in substitutes]
            row["true_positives"] = sum(1 for w in top_words if w in instance.gold)
            full_rank = {w: i for i, (w, _) in enumerate(
                sorted(dist.items(), key=lambda kv: (-kv[1], kv[0])), start=1
            )}
            row["gold_ranks"] = {
                w: full_rank.get(w) for w in sorted(instance.gold)
            }
        return row

    @app.post("/api/analyze")
    def analyze(req: AnalyzeRequest):
        if not 1 <= req.top_k <= 50:
            return _error(400, "top_k must be in [1, 50]")
        try:
            variant = PostprocVariant.by_name(req.postproc)  # validate early
        except ValueError:
            return _error(400, f"unknown postproc variant {req.postproc!r}")
        del variant

        if req.dataset is not None or req.instance_id is not None:
            if req.dataset is None or req.instance_id is None:
                return _error(400, "dataset and instance_id must be supplied together")
            if req.dataset not in datasets:
                return _error(404, f"unknown dataset {req.dataset!r}")
            matches = [i for i in datasets[req.dataset] if i.instance_id == req.instance_id]
            if not matches:
                return _error(404, f"unknown instance {req.instance_id!r} in {req.dataset!r}")
            instance = matches[0]
        else:
            if req.sentence is None or req.target_char_span is None:
                return _error(400, "provide sentence and target_char_span, or dataset and instance_id")
            if req.pos not in ("noun", "verb", "adj", "adv"):
                return _error(400, f"bad pos {req.pos!r}")
            instance = _span_to_instance(req.sentence, req.target_char_span, req.pos)
            if instance is None:
                return _error(400, "malformed span: must lie inside a single whitespace token")

        for spec in req.models:
            if spec.name not in registry:
                return _error(404, f"unknown model {spec.name!r}")

        model_rows = []
        try:
            for spec in req.models:
                model_rows.append(_analyze_model(spec, instance, req))
        except UnsupportedInjectionError as exc:
            return _error(400, str(exc))
        except (PoolSaturated, InferenceTimeout, BackendUnavailableError) as exc:
            return _error(503, str(exc))
        except EmptyAfterFilteringError as exc:
            return _error(400, f"no substitutes left after post-processing: {exc}")

        return _json_response(
            {
                "schema_version": SCHEMA_VERSION,
                "tokens": list(instance.tokens),
                "target_index": instance.target_index,
                "target_word": instance.target_word,
                "target_lemma": instance.target_lemma,
                "pos": instance.target_pos,
                "gold": dict(sorted(instance.gold.items())) if instance.gold else None,
                "models": model_rows,
            }
        )

    @app.post("/api/augment")
    def augment_job(body: dict):
        """The single writing endpoint; output confined to output_dir."""
        from .augment import augment_dataset
        from .snips import read_snips, write_snips
        import os

        if config.output_dir is None:
            return _error(400, "no output_dir configured")
        name = body.get("dataset")
        model = body.get("model")
        if name not in config.snips_datasets:
            return _error(404, f"unknown snips dataset {name!r}")
        if model not in registry:
            return _error(404, f"unknown model {model!r}")
        multiplier = int(body.get("multiplier", 1))
        seed = body.get("rng_seed", 0)
        if multiplier < 0 or multiplier > 10:
            return _error(400, "multiplier must be in [0, 10]")
        utterances = read_snips(config.resolve(config.snips_datasets[name]))
        backend = registry[model]

        def work():
            return augment_dataset(utterances, backend, multiplier=multiplier, rng_seed=seed)

        augmented = pool.run(backend, work)
        out_dir = config.resolve(config.output_dir)
        os.makedirs(out_dir, exist_ok=True)
        out_path = os.path.join(out_dir, f"{name}.aug.json")
        write_snips(augmented, out_path)
        return _json_response(
            {
                "schema_version": SCHEMA_VERSION,
                "written": out_path,
                "count": len(augmented),
            }
        )

    @app.get("/health")
    def health():
        return _json_response({"schema_version": SCHEMA_VERSION, "status": "ok"})

    return app

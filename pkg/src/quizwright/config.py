"""Runtime configuration: one JSON file, overridable via QW_* env vars.

Every CLI flag maps onto one of these fields, so batch commands and the
service share a single source of truth for paths, thresholds, and widget
sizes.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedFile

logger = logging.getLogger(__name__)

_ENV_PREFIX = "QW_"


@dataclass
class AppConfig:
    corpus_path: str = "data/fixture_corpus.json"
    alias_path: str = "data/aliases.tsv"
    lexicon_path: str = "data/countries.tsv"
    confidence_threshold: float = 0.5
    evaluation_grain: str = "sentence"
    buzz_top_k: int = 10
    snapshot_interval_s: float = 15.0
    guesses_k: int = 10
    similar_k: int = 5
    evidence_top_n: int = 8
    recommend_k: int = 3
    adversarial_weight: float = 0.6
    diversity_weight: float = 0.4
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    submissions_path: str = "submissions.jsonl"
    dumps_dir: str = "dumps"
    index_cache_path: str = "index_cache.bin"
    frontend_dir: str | None = None
    difficulty_model_path: str | None = None
    difficulty_grain: str = "question"
    difficulty_seed: int = 13
    difficulty_epochs: int = 400
    difficulty_learning_rate: float = 2.0
    pronunciation_quantile: float = 0.95
    pronunciation_min_freq: int = 3

    def __post_init__(self) -> None:
        if abs(self.adversarial_weight + self.diversity_weight - 1.0) > 1e-9:
            raise ValueError("adversarial_weight + diversity_weight must equal 1")
        if not (0.0 < self.confidence_threshold <= 1.0):
            raise ValueError("confidence_threshold must be in (0, 1]")
        if not 10.0 <= self.snapshot_interval_s <= 20.0:
            logger.warning(
                "snapshot_interval_s=%s is outside the recommended 10-20 s window",
                self.snapshot_interval_s,
            )

    def resolve_path(self, value: str, base: Path | None = None) -> Path:
        path = Path(value)
        if path.is_absolute():
            return path
        return (base or Path.cwd()) / path


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(AppConfig)}


def _coerce(name: str, raw: str):
    target = _FIELD_TYPES[name]
    if "int" in str(target):
        return int(raw)
    if "float" in str(target):
        return float(raw)
    return raw


def load_config(path: str | Path | None = None, env: dict | None = None) -> AppConfig:
    """Build the config from an optional JSON file plus QW_* env overrides."""
    values: dict = {}
    if path is not None:
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedFile(f"{path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise MalformedFile(f"{path}: config must be a JSON object")
        unknown = set(raw) - set(_FIELD_TYPES)
        if unknown:
            raise MalformedFile(f"{path}: unknown config keys {sorted(unknown)}")
        values.update(raw)

    env = os.environ if env is None else env
    for name in _FIELD_TYPES:
        env_key = _ENV_PREFIX + name.upper()
        if env_key in env:
            values[name] = _coerce(name, env[env_key])

    try:
        return AppConfig(**values)
    except (TypeError, ValueError) as exc:
        raise MalformedFile(f"invalid configuration: {exc}") from exc

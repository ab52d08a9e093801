"""Flat JSON config file shared by the CLI and the HTTP service.

Four sections: embedder, backend, retrieval, template_id. Every field is
optional; omitted values take the defaults below. The path comes from
``--config``, else the EXPLAINER_CONFIG environment variable, else
``./explainer.json`` (which may simply not exist).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .backend import BackendConfig, SamplingParams
from .embedding import EmbedderConfig
from .prompting import load_template
from .store import RetrievalParams

DEFAULT_CONFIG_PATH = "explainer.json"
CONFIG_ENV_VAR = "EXPLAINER_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AppConfig:
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)
    backend: BackendConfig = field(default_factory=BackendConfig)
    retrieval: RetrievalParams = field(default_factory=RetrievalParams)
    template_id: str = "default"


def _build(section: dict, cls, **renames):
    known = {}
    for key, value in section.items():
        known[renames.get(key, key)] = value
    try:
        return cls(**known)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {cls.__name__} section: {exc}") from None


def parse_config(obj: dict) -> AppConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    embedder = _build(obj.get("embedder", {}), EmbedderConfig)
    backend_section = dict(obj.get("backend", {}))
    sampling = _build(backend_section.pop("sampling", {}), SamplingParams)
    backend = _build({**backend_section, "sampling": sampling}, BackendConfig)
    retrieval = _build(obj.get("retrieval", {}), RetrievalParams, **{"lambda": "lam"})
    template_id = obj.get("template_id", "default")
    load_template(template_id)  # referenced template must exist
    return AppConfig(
        embedder=embedder,
        backend=backend,
        retrieval=retrieval,
        template_id=template_id,
    )


def load_config(path: str | None = None) -> AppConfig:
    """Load the config file; a missing default file means pure defaults."""
    explicit = path or os.environ.get(CONFIG_ENV_VAR)
    target = Path(explicit or DEFAULT_CONFIG_PATH)
    if not target.exists():
        if explicit:
            raise ConfigError(f"config file not found: {target}")
        return AppConfig()
    try:
        obj = json.loads(target.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {target}: {exc}") from None
    return parse_config(obj)

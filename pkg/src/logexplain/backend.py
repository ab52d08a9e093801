"""Answer generation backends.

MockBackend produces a deterministic digest of the prompt so the whole
pipeline can be asserted byte-for-byte without a model. HttpBackend talks to
an OpenAI-compatible ``/v1/completions`` server (a llama.cpp-style local
server works) and forwards the sampling knobs.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import requests

from .prompting import PromptBundle


class BackendError(Exception):
    pass


class BackendUnavailable(BackendError):
    pass


class CompletionTimeout(BackendError):
    pass


class ContextOverflow(BackendError):
    """Prompt exceeds the character cap derived from n_ctx; raised locally
    before any network traffic."""


@dataclass(frozen=True)
class SamplingParams:
    n_prev: int = 64
    top_k: int = 40
    top_p: float = 0.95
    temp: float = 0.0
    penalty_last_n: int = 64

    def __post_init__(self):
        if not 0.0 < self.top_p <= 1.0:
            raise ValueError("top_p must be in (0, 1]")
        if self.temp < 0.0:
            raise ValueError("temp must be >= 0")
        for name in ("n_prev", "top_k", "penalty_last_n"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "mock"  # "mock" | "http"
    endpoint_url: str = ""
    n_ctx: int = 4096
    n_batch: int = 256
    n_threads: int = 4
    n_gpu_layers: int = 33
    sampling: SamplingParams = field(default_factory=SamplingParams)
    timeout: float = 60.0

    def __post_init__(self):
        if self.kind not in ("mock", "http"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.n_ctx <= 0:
            raise ValueError("n_ctx must be positive")
        if self.kind == "http" and not self.endpoint_url:
            raise ValueError("http backend requires endpoint_url")


@dataclass(frozen=True)
class CompletionResult:
    text: str
    latency: float
    token_estimate: int


def _estimate_tokens(text: str) -> int:
    # chars/4 heuristic; exact tokenization is model-specific
    return len(text) // 4


def _check_overflow(prompt_text: str, config: BackendConfig) -> None:
    cap = 4 * config.n_ctx
    if len(prompt_text) > cap:
        raise ContextOverflow(
            f"prompt is {len(prompt_text)} chars, cap is {cap} (4*n_ctx)"
        )


def complete(prompt: PromptBundle, config: BackendConfig) -> CompletionResult:
    """Generate an answer for the prompt; see module docstring for modes."""
    _check_overflow(prompt.prompt_text, config)
    start = time.perf_counter()
    if config.kind == "mock":
        digest = hashlib.sha256(prompt.prompt_text.encode("utf-8")).hexdigest()
        text = (
            f"MOCK-ANSWER q={prompt.question}\n"
            f"ctx={len(prompt.context)} lines\n"
            f"{digest}"
        )
        return CompletionResult(
            text=text,
            latency=time.perf_counter() - start,
            token_estimate=_estimate_tokens(prompt.prompt_text),
        )

    payload = {
        "prompt": prompt.prompt_text,
        "temperature": config.sampling.temp,
        "top_p": config.sampling.top_p,
        "top_k": config.sampling.top_k,
        "max_tokens": max(16, config.n_ctx - _estimate_tokens(prompt.prompt_text)),
        # server-side knobs; OpenAI-compatible servers that don't know them
        # are expected to ignore unknown fields
        "n_prev": config.sampling.n_prev,
        "penalty_last_n": config.sampling.penalty_last_n,
    }
    try:
        resp = requests.post(
            _completions_url(config.endpoint_url), json=payload, timeout=config.timeout
        )
        resp.raise_for_status()
        body = resp.json()
    except requests.Timeout as exc:
        raise CompletionTimeout(f"completion timed out: {exc}") from None
    except (requests.RequestException, ValueError) as exc:
        raise BackendUnavailable(f"completion server failed: {exc}") from None
    try:
        text = body["choices"][0]["text"]
    except (KeyError, IndexError, TypeError):
        raise BackendUnavailable(f"malformed completion response: {body!r}") from None
    return CompletionResult(
        text=text,
        latency=time.perf_counter() - start,
        token_estimate=_estimate_tokens(prompt.prompt_text),
    )


def _completions_url(base: str) -> str:
    if base.rstrip("/").endswith("/completions"):
        return base
    return base.rstrip("/") + "/v1/completions"


def health_check(config: BackendConfig) -> bool:
    """True iff the backend can plausibly serve a completion. Never raises."""
    if config.kind == "mock":
        return True
    try:
        resp = requests.get(
            config.endpoint_url.rstrip("/") + "/v1/models", timeout=config.timeout
        )
        return resp.status_code < 500
    except requests.RequestException:
        return False

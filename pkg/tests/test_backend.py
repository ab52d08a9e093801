"""Mock and HTTP completion backends."""

from __future__ import annotations

import hashlib

import numpy as np
import pytest

from logexplain.backend import (
    BackendConfig,
    BackendUnavailable,
    ContextOverflow,
    SamplingParams,
    complete,
    health_check,
)
from logexplain.prompting import build_prompt, order_context
from logexplain.records import LogRecord
from logexplain.store import EmbeddedEntry


def _bundle(n_lines: int = 2, question: str = "What happened?"):
    entries = [
        EmbeddedEntry(
            id=i,
            record=LogRecord(timestamp=i * 1000, message=f"event {i}", seq=i),
            vector=np.zeros(4),
        )
        for i in range(1, n_lines + 1)
    ]
    return build_prompt(order_context(entries), question)


def test_sampling_defaults_match_operating_point():
    s = SamplingParams()
    assert (s.n_prev, s.top_k, s.top_p, s.temp, s.penalty_last_n) == (64, 40, 0.95, 0.0, 64)


def test_backend_config_defaults():
    c = BackendConfig()
    assert (c.n_ctx, c.n_batch, c.n_threads, c.n_gpu_layers) == (4096, 256, 4, 33)


def test_sampling_validation():
    with pytest.raises(ValueError):
        SamplingParams(top_p=0.0)
    with pytest.raises(ValueError):
        SamplingParams(temp=-1.0)
    with pytest.raises(ValueError):
        SamplingParams(top_k=-1)


def test_mock_is_deterministic():
    bundle = _bundle()
    config = BackendConfig(kind="mock")
    a = complete(bundle, config)
    b = complete(bundle, config)
    assert a.text == b.text


def test_mock_digest_format():
    bundle = _bundle(n_lines=3, question="Were all the waypoints reached?")
    result = complete(bundle, BackendConfig(kind="mock"))
    lines = result.text.splitlines()
    assert lines[0] == "MOCK-ANSWER q=Were all the waypoints reached?"
    assert lines[1] == "ctx=3 lines"
    assert lines[2] == hashlib.sha256(bundle.prompt_text.encode()).hexdigest()
    assert result.latency >= 0.0
    assert result.token_estimate == len(bundle.prompt_text) // 4


def test_context_overflow_raised_locally():
    bundle = _bundle(n_lines=1, question="x" * 2000)
    config = BackendConfig(kind="http", endpoint_url="http://127.0.0.1:1", n_ctx=256)
    with pytest.raises(ContextOverflow):
        complete(bundle, config)  # no network call happens


def test_mock_respects_overflow_cap_too():
    bundle = _bundle(n_lines=1, question="y" * 5000)
    with pytest.raises(ContextOverflow):
        complete(bundle, BackendConfig(kind="mock", n_ctx=64))


def test_http_completion(completion_server):
    bundle = _bundle()
    config = BackendConfig(kind="http", endpoint_url=completion_server.url)
    result = complete(bundle, config)
    assert result.text == f"echo:{len(bundle.prompt_text)}"
    sent = completion_server.requests[-1]
    assert sent["prompt"] == bundle.prompt_text
    assert sent["temperature"] == 0.0
    assert sent["top_p"] == 0.95
    assert sent["top_k"] == 40
    assert "max_tokens" in sent


def test_http_server_error(completion_server):
    completion_server.fail = True
    config = BackendConfig(kind="http", endpoint_url=completion_server.url)
    with pytest.raises(BackendUnavailable):
        complete(_bundle(), config)


def test_http_unreachable():
    config = BackendConfig(kind="http", endpoint_url="http://127.0.0.1:1", timeout=0.2)
    with pytest.raises(BackendUnavailable):
        complete(_bundle(), config)


def test_health_check_mock():
    assert health_check(BackendConfig(kind="mock")) is True


def test_health_check_unroutable():
    config = BackendConfig(kind="http", endpoint_url="http://127.0.0.1:1", timeout=0.2)
    assert health_check(config) is False


def test_health_check_live_server(completion_server):
    config = BackendConfig(kind="http", endpoint_url=completion_server.url, timeout=2)
    assert health_check(config) is True

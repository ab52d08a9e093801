"""Embedding functions mapping log messages into a shared vector space.

Two implementations behind one interface:

* ReferenceEmbedder: a deterministic hashed bag-of-words embedder. Tokens are
  lowercased alphanumeric runs; each occurrence adds a damped weight
  1/(1+occurrences_so_far) at bucket fnv1a64(token) % dim, signed by bit 63 of
  the hash. The result is L2-normalized. Identical text yields a bitwise
  identical vector on every platform (normalization uses math.fsum, which is
  exactly rounded).
* RemoteEmbedder: POSTs ``{"input": text}`` to an embeddings endpoint and
  expects ``{"embedding": [...]}``, then L2-normalizes. Restores fidelity to a
  real model server in deployment.

Queries and documents use the same function so they live in the same space.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass

import numpy as np
import requests

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 1 << 64


class EmbeddingError(Exception):
    pass


class EmptyText(EmbeddingError):
    """Input text is empty after trimming."""


class RemoteUnavailable(EmbeddingError):
    """Embedding endpoint timed out or refused the connection."""


class DimensionMismatch(EmbeddingError):
    """Vector dimension disagrees with the session's fixed dimension."""


@dataclass(frozen=True)
class EmbedderConfig:
    kind: str = "reference"  # "reference" | "remote"
    dim: int = 256
    endpoint_url: str = ""
    timeout: float = 10.0

    def __post_init__(self):
        if self.kind not in ("reference", "remote"):
            raise ValueError(f"unknown embedder kind {self.kind!r}")
        if self.kind == "reference" and self.dim < 8:
            raise ValueError("reference embedder dim must be >= 8")
        if self.kind == "remote" and not self.endpoint_url:
            raise ValueError("remote embedder requires endpoint_url")


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) % _U64
    return h


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs (underscore splits too)."""
    return _TOKEN_RE.findall(text.lower())


def _l2_normalize(vec: np.ndarray) -> np.ndarray:
    # fsum is exactly rounded, so the norm (and the vector) is platform-stable
    norm = math.sqrt(math.fsum(float(x) * float(x) for x in vec))
    if norm == 0.0:
        raise EmptyText("text produced no tokens")
    return vec / norm


class ReferenceEmbedder:
    """Deterministic hashed bag-of-words embedder (see module docstring)."""

    def __init__(self, dim: int = 256):
        if dim < 8:
            raise ValueError("dim must be >= 8")
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        if text is None or text.strip() == "":
            raise EmptyText("cannot embed empty text")
        vec = np.zeros(self.dim, dtype=np.float64)
        counts: dict[str, int] = {}
        for token in tokenize(text):
            seen = counts.get(token, 0)
            h = fnv1a64(token.encode("utf-8"))
            sign = 1.0 if h < (1 << 63) else -1.0
            vec[h % self.dim] += sign / (1 + seen)
            counts[token] = seen + 1
        return _l2_normalize(vec)

    # queries and documents share the same space
    embed_query = embed


class RemoteEmbedder:
    """Adapter for an external embeddings endpoint.

    Requests are serialized (one in flight) so a small local model server is
    never flooded by a draining queue.
    """

    def __init__(self, endpoint_url: str, timeout: float = 10.0):
        if not endpoint_url:
            raise ValueError("endpoint_url must be non-empty")
        self.endpoint_url = endpoint_url
        self.timeout = timeout
        self._dim: int | None = None  # fixed by the first response
        self._inflight = threading.Lock()

    @property
    def dim(self) -> int | None:
        return self._dim

    def embed(self, text: str) -> np.ndarray:
        if text is None or text.strip() == "":
            raise EmptyText("cannot embed empty text")
        try:
            with self._inflight:
                resp = requests.post(
                    self.endpoint_url, json={"input": text}, timeout=self.timeout
                )
            resp.raise_for_status()
            payload = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise RemoteUnavailable(f"embedding endpoint failed: {exc}") from None
        values = payload.get("embedding")
        if not isinstance(values, list) or not values:
            raise RemoteUnavailable("endpoint returned no 'embedding' array")
        vec = np.asarray(values, dtype=np.float64)
        if not np.all(np.isfinite(vec)) or not np.any(vec):
            raise RemoteUnavailable("endpoint returned a non-finite or zero vector")
        if self._dim is None:
            self._dim = vec.shape[0]
        elif vec.shape[0] != self._dim:
            raise DimensionMismatch(
                f"endpoint returned dim {vec.shape[0]}, session dim is {self._dim}"
            )
        return _l2_normalize(vec)

    embed_query = embed


def make_embedder(config: EmbedderConfig):
    if config.kind == "reference":
        return ReferenceEmbedder(dim=config.dim)
    return RemoteEmbedder(config.endpoint_url, timeout=config.timeout)

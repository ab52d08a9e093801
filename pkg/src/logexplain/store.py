"""In-memory vector store with exact cosine search and MMR retrieval.

Corpora here are log-sized (hundreds to tens of thousands of entries), where
an exhaustive scan beats any approximate index and stays trivially testable.
Single writer / multiple readers: insertion and retrieval are guarded by one
lock, and retrieval always sees a consistent snapshot.
"""

from __future__ import annotations

import bisect
import json
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .embedding import DimensionMismatch
from .records import LogRecord, parse_log_line, write_log_line

STORE_VERSION = 1


class StoreError(Exception):
    pass


class DuplicateId(StoreError):
    pass


class EmptyStore(StoreError):
    pass


@dataclass(frozen=True)
class EmbeddedEntry:
    """A stored log paired with its embedding; id equals the record's seq."""

    id: int
    record: LogRecord
    vector: np.ndarray


@dataclass(frozen=True)
class RetrievalParams:
    k: int = 20
    lam: float = 0.5  # MMR relevance-diversity weight

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must be in [0, 1]")


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; plain dot over norms."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dims differ: {a.shape[0]} vs {b.shape[0]}")
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    if denom == 0.0:
        return 0.0
    return float(np.dot(a, b) / denom)


class VectorStore:
    """Exact-search store over EmbeddedEntry values.

    The first insert fixes the dimension. Entries are kept sorted by id so
    that retrieval tie-breaks (lowest id first) fall out of row order.
    """

    def __init__(self, dim: int | None = None):
        self._dim = dim
        self._ids: list[int] = []  # ascending
        self._entries: list[EmbeddedEntry] = []  # parallel to _ids
        self._matrix: np.ndarray | None = None  # cache, rebuilt lazily
        self._lock = threading.Lock()

    @property
    def dim(self) -> int | None:
        return self._dim

    def size(self) -> int:
        with self._lock:
            return len(self._entries)

    def insert(self, entry: EmbeddedEntry) -> None:
        vec = np.ascontiguousarray(entry.vector, dtype=np.float64)
        with self._lock:
            if self._dim is None:
                self._dim = vec.shape[0]
            elif vec.shape[0] != self._dim:
                raise DimensionMismatch(
                    f"entry dim {vec.shape[0]} != store dim {self._dim}"
                )
            pos = bisect.bisect_left(self._ids, entry.id)
            if pos < len(self._ids) and self._ids[pos] == entry.id:
                raise DuplicateId(f"id {entry.id} already stored")
            self._ids.insert(pos, entry.id)
            self._entries.insert(pos, EmbeddedEntry(entry.id, entry.record, vec))
            self._matrix = None

    def retrieve(
        self, query_vec: np.ndarray, params: RetrievalParams
    ) -> list[EmbeddedEntry]:
        """Greedy MMR selection; returns entries in selection order.

        Score of a candidate d given the selected set S:
        lam*cos(q,d) - (1-lam)*max_{s in S} cos(d,s), with the max over an
        empty S defined as 0 (so the first pick is the pure relevance argmax).
        Ties go to the smaller id.
        """
        q = np.ascontiguousarray(query_vec, dtype=np.float64)
        with self._lock:
            if not self._entries:
                raise EmptyStore("retrieve on empty store")
            if q.shape[0] != self._dim:
                raise DimensionMismatch(
                    f"query dim {q.shape[0]} != store dim {self._dim}"
                )
            if self._matrix is None:
                self._matrix = np.ascontiguousarray(
                    np.stack([e.vector for e in self._entries])
                )
            matrix = self._matrix
            entries = list(self._entries)
        picks = kernels.mmr_select(q, matrix, params.k, params.lam)
        return [entries[i] for i in picks]

    def entries(self) -> list[EmbeddedEntry]:
        """Snapshot of all entries in id order."""
        with self._lock:
            return list(self._entries)

    # -- persistence -------------------------------------------------------

    def dump(self, path: str | Path) -> None:
        """Write the store as JSONL with a version/dim header line."""
        with self._lock:
            entries = list(self._entries)
            dim = self._dim
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps({"store_version": STORE_VERSION, "dim": dim}) + "\n")
            for e in entries:
                obj = {
                    "id": e.id,
                    "record": json.loads(write_log_line(e.record)) | {"seq": e.record.seq},
                    "vector": [float(x) for x in e.vector],
                }
                fh.write(json.dumps(obj, separators=(",", ":")) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "VectorStore":
        with open(path, encoding="utf-8") as fh:
            header = json.loads(fh.readline())
            if header.get("store_version") != STORE_VERSION:
                raise StoreError(f"unsupported store version {header!r}")
            store = cls(dim=header.get("dim"))
            for line in fh:
                if line.strip() == "":
                    continue
                obj = json.loads(line)
                rec_obj = obj["record"]
                record = parse_log_line(
                    json.dumps({k: rec_obj[k] for k in ("ts", "msg", "src", "lvl")})
                ).with_seq(rec_obj.get("seq", obj["id"]))
                vec = np.asarray(obj["vector"], dtype=np.float64)
                store.insert(EmbeddedEntry(id=obj["id"], record=record, vector=vec))
        return store

"""Streaming ingestion: dedup filter -> lossless FIFO queue -> embed + store.

Log topics flood; embedding is slow. The pipeline accepts records at any rate
(submit), drops only consecutive duplicates, and lets a worker drain the queue
sequentially (drain_step). Nothing accepted is ever lost: on embedder failure
the record stays at the queue head for retry.

Thread contract: one producer calls submit, one worker calls drain_step
(possibly different threads); stats() is safe from any thread and returns a
consistent snapshot (received == deduplicated + processed + queue_depth).
"""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass

from .records import LogRecord
from .store import EmbeddedEntry, VectorStore


class SessionClosed(Exception):
    """submit after close."""


class EmbedderFailure(Exception):
    """Embedding failed; the record remains queued and can be retried."""


@dataclass(frozen=True)
class IngestStats:
    received: int = 0
    deduplicated: int = 0
    processed: int = 0
    queue_depth: int = 0
    processing_time: float = 0.0  # cumulative seconds embedding + storing


class IngestPipeline:
    def __init__(self, embedder, store: VectorStore, first_seq: int = 1):
        self._embedder = embedder
        self._store = store
        self._queue: deque[LogRecord] = deque()
        self._lock = threading.Lock()
        self._closed = False
        self._next_seq = first_seq
        self._last_message: str | None = None  # message of the last submitted record
        self._received = 0
        self._deduplicated = 0
        self._processed = 0
        self._processing_time = 0.0

    @property
    def store(self) -> VectorStore:
        return self._store

    def submit(self, record: LogRecord) -> bool:
        """Stamp the next seq and enqueue unless it repeats its predecessor.

        Dedup compares the message field only, byte-exact, against the
        immediately preceding submitted record (accepted or not); differing
        timestamps or sources do not prevent the drop.
        """
        with self._lock:
            if self._closed:
                raise SessionClosed("submit after close")
            self._received += 1
            seq = self._next_seq
            self._next_seq += 1
            duplicate = record.message == self._last_message
            self._last_message = record.message
            if duplicate:
                self._deduplicated += 1
                return False
            self._queue.append(record.with_seq(seq))
            return True

    def drain_step(self) -> int:
        """Process at most one queued record; returns 0 or 1.

        The embedding runs outside the lock so the producer is never blocked
        on it; the record is only dequeued after the store insert succeeds.
        """
        with self._lock:
            if not self._queue:
                return 0
            record = self._queue[0]
        start = time.perf_counter()
        try:
            vector = self._embedder.embed(record.message)
        except Exception as exc:
            raise EmbedderFailure(f"embedding seq={record.seq} failed: {exc}") from exc
        self._store.insert(EmbeddedEntry(id=record.seq, record=record, vector=vector))
        elapsed = time.perf_counter() - start
        with self._lock:
            popped = self._queue.popleft()
            assert popped.seq == record.seq  # single worker: head is ours
            self._processed += 1
            self._processing_time += elapsed
        return 1

    def drain_all(self) -> int:
        """Drain until the queue is empty; returns records processed."""
        n = 0
        while self.drain_step():
            n += 1
        return n

    def stats(self) -> IngestStats:
        with self._lock:
            return IngestStats(
                received=self._received,
                deduplicated=self._deduplicated,
                processed=self._processed,
                queue_depth=len(self._queue),
                processing_time=self._processing_time,
            )

    def close(self) -> None:
        with self._lock:
            self._closed = True

    @property
    def closed(self) -> bool:
        with self._lock:
            return self._closed

    def resume_after(self, last_seq: int, last_message: str | None) -> None:
        """Continue a persisted session: seq counter and dedup predecessor."""
        with self._lock:
            self._next_seq = last_seq + 1
            self._last_message = last_message

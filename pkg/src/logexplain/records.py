"""Canonical log record type and the JSONL interchange format.

One record per line, UTF-8, LF endings. A line is a JSON object with keys
``ts`` (integer nanoseconds since the Unix epoch), ``msg`` (non-empty string),
and optional ``src`` / ``lvl``. Everything downstream (ingestion, the vector
store, the simulator) speaks this format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator


class Level(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARN = "WARN"
    ERROR = "ERROR"
    FATAL = "FATAL"


class LogFormatError(ValueError):
    """Base class for interchange-format violations."""


class MalformedLine(LogFormatError):
    """Line is not a JSON object, or ts/msg are missing or mistyped."""


class EmptyMessage(LogFormatError):
    """Message trims to the empty string."""


class UnknownLevel(LogFormatError):
    """lvl value is not one of DEBUG/INFO/WARN/ERROR/FATAL."""


@dataclass(frozen=True)
class LogRecord:
    """One log event: timestamp (ns since epoch) plus message text.

    ``seq`` is the arrival-order number assigned at ingestion; 0 means
    "not yet assigned".
    """

    timestamp: int
    message: str
    source: str = ""
    level: Level = Level.INFO
    seq: int = 0

    def with_seq(self, seq: int) -> "LogRecord":
        return replace(self, seq=seq)


@dataclass
class LogCorpus:
    """An ordered set of records belonging to one session."""

    records: list[LogRecord] = field(default_factory=list)
    session_id: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[LogRecord]:
        return iter(self.records)


def parse_log_line(line: str) -> LogRecord:
    """Parse one JSONL line into a LogRecord (seq left unset).

    Unknown keys are ignored. ``lvl`` is matched case-insensitively and
    defaults to INFO.

    Raises MalformedLine, EmptyMessage, or UnknownLevel; never anything else,
    regardless of input.
    """
    try:
        obj = json.loads(line)
    except (json.JSONDecodeError, UnicodeDecodeError, TypeError) as exc:
        raise MalformedLine(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise MalformedLine("line is not a JSON object")
    return record_from_obj(obj)


def record_from_obj(obj: dict) -> LogRecord:
    """Validate an already-parsed JSON object into a LogRecord."""
    if "ts" not in obj or "msg" not in obj:
        raise MalformedLine("missing required field 'ts' or 'msg'")
    ts = obj["ts"]
    # bool is an int subclass; reject it explicitly
    if isinstance(ts, bool) or not isinstance(ts, int) or ts < 0:
        raise MalformedLine(f"'ts' must be a non-negative integer, got {ts!r}")
    msg = obj["msg"]
    if not isinstance(msg, str):
        raise MalformedLine(f"'msg' must be a string, got {type(msg).__name__}")
    if msg.rstrip() == "":
        raise EmptyMessage("message is empty after trimming trailing whitespace")
    src = obj.get("src", "")
    if not isinstance(src, str):
        raise MalformedLine("'src' must be a string")
    lvl_raw = obj.get("lvl", "INFO")
    if not isinstance(lvl_raw, str):
        raise UnknownLevel(f"'lvl' must be a string, got {lvl_raw!r}")
    try:
        level = Level(lvl_raw.upper())
    except ValueError:
        raise UnknownLevel(f"unknown level {lvl_raw!r}") from None
    return LogRecord(timestamp=ts, message=msg, source=src, level=level)


def write_log_line(record: LogRecord) -> str:
    """Serialize a record to one JSON line (key order ts,msg,src,lvl).

    parse_log_line(write_log_line(r)) reproduces r up to seq.
    """
    obj = {
        "ts": record.timestamp,
        "msg": record.message,
        "src": record.source,
        "lvl": record.level.value,
    }
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def read_jsonl(path: str | Path) -> LogCorpus:
    """Read a JSONL file into a corpus; blank lines are skipped."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip() == "":
                continue
            try:
                records.append(parse_log_line(line))
            except LogFormatError as exc:
                raise type(exc)(f"{path}:{lineno}: {exc}") from None
    return LogCorpus(records=records)


def write_jsonl(records: Iterable[LogRecord], path: str | Path) -> int:
    """Write records to a JSONL file (LF endings); returns the line count."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(write_log_line(record))
            fh.write("\n")
            n += 1
    return n

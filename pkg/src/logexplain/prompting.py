"""Context ordering and prompt assembly.

Retrieved entries come back in relevance order; the model needs them in event
order, so they are re-sorted by timestamp (seq breaks ties) and rendered one
per line as ``[ISO-8601 UTC, ms precision] message``. The rendered block and
the user's question are substituted into a template asset that carries the
chat-control markers expected by the completion server.

Templates live in the package ``templates/`` directory as plain UTF-8 files
with exactly one ``{logs}`` and one ``{question}`` placeholder.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources

from .store import EmbeddedEntry


class PromptError(Exception):
    pass


class EmptyContext(PromptError):
    pass


class EmptyQuestion(PromptError):
    pass


class TemplateNotFound(PromptError):
    pass


@dataclass(frozen=True)
class ContextSet:
    """Chronologically ordered retrieval context plus its rendered form."""

    entries: tuple[EmbeddedEntry, ...]
    rendered: str

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class PromptBundle:
    template_id: str
    context: ContextSet
    question: str
    prompt_text: str


def format_timestamp(ns: int) -> str:
    """Epoch nanoseconds to ISO-8601 UTC with milliseconds, e.g.
    1700000000123000000 -> 2023-11-14T22:13:20.123Z (sub-ms truncated)."""
    secs, rem = divmod(ns, 1_000_000_000)
    ms = rem // 1_000_000
    dt = datetime.fromtimestamp(secs, tz=timezone.utc)
    return dt.strftime("%Y-%m-%dT%H:%M:%S") + f".{ms:03d}Z"


def render_line(entry: EmbeddedEntry) -> str:
    return f"[{format_timestamp(entry.record.timestamp)}] {entry.record.message}"


def order_context(entries: list[EmbeddedEntry]) -> ContextSet:
    """Sort entries by (timestamp, seq) ascending and render them."""
    if not entries:
        raise EmptyContext("context requires at least one entry")
    ordered = sorted(entries, key=lambda e: (e.record.timestamp, e.record.seq))
    rendered = "\n".join(render_line(e) for e in ordered)
    return ContextSet(entries=tuple(ordered), rendered=rendered)


_PLACEHOLDER_RE = re.compile(r"\{logs\}|\{question\}")


def load_template(template_id: str) -> str:
    """Load and validate a template asset by id."""
    if not re.fullmatch(r"[A-Za-z0-9_-]+", template_id or ""):
        raise TemplateNotFound(f"invalid template id {template_id!r}")
    ref = resources.files("logexplain").joinpath(f"templates/{template_id}.txt")
    try:
        text = ref.read_text(encoding="utf-8")
    except (FileNotFoundError, ModuleNotFoundError):
        raise TemplateNotFound(f"no template named {template_id!r}") from None
    if text.count("{logs}") != 1 or text.count("{question}") != 1:
        raise PromptError(
            f"template {template_id!r} must contain {{logs}} and "
            "{question} exactly once each"
        )
    return text


def build_prompt(
    context: ContextSet, question: str, template_id: str = "default"
) -> PromptBundle:
    """Substitute context and question into the template.

    Both placeholders are replaced in a single pass so that brace sequences
    inside log messages or the question can never be re-substituted.
    """
    if question is None or question.strip() == "":
        raise EmptyQuestion("question must be non-empty")
    template = load_template(template_id)
    values = {"{logs}": context.rendered, "{question}": question}
    prompt_text = _PLACEHOLDER_RE.sub(lambda m: values[m.group(0)], template)
    return PromptBundle(
        template_id=template_id,
        context=context,
        question=question,
        prompt_text=prompt_text,
    )

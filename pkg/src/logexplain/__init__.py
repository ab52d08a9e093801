"""logexplain: answer natural-language questions about autonomous-system logs.

Logs are embedded into a vector store as they arrive; a question retrieves a
diverse relevant subset (maximal marginal relevance), orders it
chronologically, renders it into a prompt template, and hands it to a
pluggable completion backend.
"""

from .backend import BackendConfig, SamplingParams, complete, health_check
from .embedding import EmbedderConfig, ReferenceEmbedder, RemoteEmbedder, make_embedder
from .engine import ExplanationEngine, ExplanationResult, SessionReport
from .ingest import IngestPipeline, IngestStats
from .prompting import ContextSet, PromptBundle, build_prompt, order_context
from .records import Level, LogCorpus, LogRecord, parse_log_line, write_log_line
from .scenario import ScenarioSpec, generate, replay
from .store import EmbeddedEntry, RetrievalParams, VectorStore, cosine

__version__ = "0.1.0"

__all__ = [
    "BackendConfig",
    "SamplingParams",
    "complete",
    "health_check",
    "EmbedderConfig",
    "ReferenceEmbedder",
    "RemoteEmbedder",
    "make_embedder",
    "ExplanationEngine",
    "ExplanationResult",
    "SessionReport",
    "IngestPipeline",
    "IngestStats",
    "ContextSet",
    "PromptBundle",
    "build_prompt",
    "order_context",
    "Level",
    "LogCorpus",
    "LogRecord",
    "parse_log_line",
    "write_log_line",
    "ScenarioSpec",
    "generate",
    "replay",
    "EmbeddedEntry",
    "RetrievalParams",
    "VectorStore",
    "cosine",
    "__version__",
]

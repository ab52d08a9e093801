"""Pure-numpy retrieval kernels (fallback when the C extension is absent).

Selection semantics must match the compiled kernel exactly: greedy maximal
marginal relevance with the empty-set diversity term defined as 0, strict
argmax so that among tied scores the lowest row index wins.
"""

from __future__ import annotations

import numpy as np


def mmr_select(query: np.ndarray, matrix: np.ndarray, k: int, lam: float) -> list[int]:
    """Greedy MMR over unit-vector rows of ``matrix``; returns row indices.

    Row order is the tie-break order: np.argmax returns the first maximum,
    so callers pass rows sorted by ascending id.
    """
    n = matrix.shape[0]
    m = min(k, n)
    if m <= 0:
        return []
    rel = matrix @ query
    # max cosine to the selected set; None while the set is empty, because the
    # true maximum over a non-empty set may be negative and must not be
    # clamped by a zero initialization
    max_sim: np.ndarray | None = None
    available = np.ones(n, dtype=bool)
    out: list[int] = []
    for _ in range(m):
        if max_sim is None:
            score = lam * rel - 0.0
        else:
            score = lam * rel - (1.0 - lam) * max_sim
        score[~available] = -np.inf
        pick = int(np.argmax(score))
        out.append(pick)
        available[pick] = False
        sims = matrix @ matrix[pick]
        max_sim = sims if max_sim is None else np.maximum(max_sim, sims)
    return out

"""Vector store: cosine, MMR retrieval vs the brute-force oracle, persistence."""

from __future__ import annotations

import numpy as np
import pytest

from logexplain.embedding import DimensionMismatch
from logexplain.records import Level, LogRecord
from logexplain.store import (
    DuplicateId,
    EmbeddedEntry,
    EmptyStore,
    RetrievalParams,
    VectorStore,
    cosine,
)

from oracles import mmr_oracle


def _entry(i: int, vec, ts: int | None = None) -> EmbeddedEntry:
    record = LogRecord(
        timestamp=ts if ts is not None else i * 1000,
        message=f"message {i}",
        source="test",
        level=Level.INFO,
        seq=i,
    )
    return EmbeddedEntry(id=i, record=record, vector=np.asarray(vec, dtype=np.float64))


def _unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


def test_insert_and_size():
    store = VectorStore()
    assert store.size() == 0
    store.insert(_entry(1, _unit([1, 0, 0])))
    assert store.size() == 1


def test_insert_duplicate_id():
    store = VectorStore()
    store.insert(_entry(1, _unit([1, 0, 0])))
    with pytest.raises(DuplicateId):
        store.insert(_entry(1, _unit([0, 1, 0])))
    assert store.size() == 1


def test_insert_dimension_mismatch():
    store = VectorStore()
    store.insert(_entry(1, _unit([1, 0, 0])))
    with pytest.raises(DimensionMismatch):
        store.insert(_entry(2, _unit([1, 0, 0, 0])))


def test_cosine_basics():
    v = _unit([0.3, -0.4, 0.5])
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-9)
    assert cosine(v, -v) == pytest.approx(-1.0, abs=1e-9)
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    assert cosine(e1, e2) == 0.0
    with pytest.raises(DimensionMismatch):
        cosine(e1, np.array([1.0, 0.0, 0.0]))


def test_retrieve_empty_store():
    store = VectorStore()
    with pytest.raises(EmptyStore):
        store.retrieve(np.array([1.0, 0.0]), RetrievalParams(k=1))


def test_retrieve_query_dim_mismatch():
    store = VectorStore()
    store.insert(_entry(1, _unit([1, 0, 0])))
    with pytest.raises(DimensionMismatch):
        store.retrieve(np.array([1.0, 0.0]), RetrievalParams(k=1))


def test_retrieval_params_validation():
    with pytest.raises(ValueError):
        RetrievalParams(k=0)
    with pytest.raises(ValueError):
        RetrievalParams(lam=1.5)
    with pytest.raises(ValueError):
        RetrievalParams(lam=-0.1)


def test_k1_returns_pure_argmax():
    store = VectorStore()
    store.insert(_entry(1, _unit([1, 0.1, 0])))
    store.insert(_entry(2, _unit([0, 1, 0])))
    store.insert(_entry(3, _unit([0.9, 0.2, 0.1])))
    query = _unit([0, 1, 0])
    result = store.retrieve(query, RetrievalParams(k=1, lam=0.5))
    assert [e.id for e in result] == [2]


def test_lambda_one_is_topk_by_cosine():
    rng = np.random.default_rng(11)
    store = VectorStore()
    vecs = {}
    for i in range(30):
        v = _unit(rng.normal(size=8))
        vecs[i] = v
        store.insert(_entry(i, v))
    query = _unit(rng.normal(size=8))
    result = store.retrieve(query, RetrievalParams(k=10, lam=1.0))
    sims = [cosine(query, e.vector) for e in result]
    assert sims == sorted(sims, reverse=True)
    # matches plain top-k with id tie-break
    ranked = sorted(vecs, key=lambda i: (-float(np.dot(query, vecs[i])), i))[:10]
    assert [e.id for e in result] == ranked


def test_result_size_and_distinct_ids():
    rng = np.random.default_rng(5)
    store = VectorStore()
    for i in range(7):
        store.insert(_entry(i, _unit(rng.normal(size=4))))
    query = _unit(rng.normal(size=4))
    got = store.retrieve(query, RetrievalParams(k=20, lam=0.5))
    assert len(got) == 7
    assert len({e.id for e in got}) == 7


def test_duplicate_vectors_tie_break_by_id():
    store = VectorStore()
    shared = _unit([1, 1, 0, 0])
    store.insert(_entry(10, shared))
    store.insert(_entry(3, shared.copy()))
    store.insert(_entry(7, _unit([0, 0, 1, 0])))
    query = _unit([1, 1, 0, 0])
    result = store.retrieve(query, RetrievalParams(k=3, lam=0.5))
    assert result[0].id == 3  # smaller id wins the exact tie


def test_mmr_prefers_diversity_at_low_lambda():
    store = VectorStore()
    store.insert(_entry(1, _unit([1, 0.01, 0])))
    store.insert(_entry(2, _unit([1, 0.02, 0])))  # near-duplicate of 1
    store.insert(_entry(3, _unit([0, 0.5, 1])))
    query = _unit([1, 0, 0])
    relevant_only = store.retrieve(query, RetrievalParams(k=2, lam=1.0))
    assert [e.id for e in relevant_only] == [1, 2]
    diverse = store.retrieve(query, RetrievalParams(k=2, lam=0.3))
    assert [e.id for e in diverse] == [1, 3]


def _random_instance(rng, n, dim):
    vecs = rng.normal(size=(n, dim))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    query = rng.normal(size=dim)
    query /= np.linalg.norm(query)
    return query, vecs


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.5, 0.7, 1.0])
def test_mmr_matches_oracle_random(lam):
    rng = np.random.default_rng(int(lam * 10) + 1)
    for _ in range(40):
        n = int(rng.integers(1, 64))
        dim = int(rng.integers(2, 16))
        k = int(rng.integers(1, 8))
        query, vecs = _random_instance(rng, n, dim)
        store = VectorStore()
        for i in range(n):
            store.insert(_entry(i, vecs[i]))
        got = [e.id for e in store.retrieve(query, RetrievalParams(k=k, lam=lam))]
        want = mmr_oracle(query, [vecs[i] for i in range(n)], k, lam)
        assert got == want


def test_mmr_matches_oracle_with_ties():
    # exactly-unit vectors (one-hots, 3-4-5 style) keep mathematical ties
    # bitwise-exact in every implementation, so the id tie-break is the only
    # thing deciding the order
    def one_hot(i):
        v = np.zeros(8)
        v[i] = 1.0
        return v

    pythag = np.zeros(8)
    pythag[0], pythag[1] = 0.6, 0.8  # norm exactly 1.0
    vecs = [
        one_hot(0), one_hot(0), one_hot(0),
        one_hot(1), one_hot(1),
        one_hot(2),
        pythag.copy(), pythag.copy(),
        -one_hot(0),
    ]
    query = one_hot(0)
    for lam in (0.0, 0.3, 0.5, 0.7, 1.0):
        store = VectorStore()
        for i, v in enumerate(vecs):
            store.insert(_entry(i, v))
        got = [e.id for e in store.retrieve(query, RetrievalParams(k=6, lam=lam))]
        want = mmr_oracle(query, vecs, 6, lam)
        assert got == want, f"lam={lam}"


def test_mmr_matches_oracle_duplicate_family():
    # byte-identical duplicates of one random vector tie exactly too
    rng = np.random.default_rng(7)
    base = _unit(rng.normal(size=8))
    other = _unit(rng.normal(size=8))
    vecs = [base.copy(), base.copy(), other, base.copy()]
    query = _unit(rng.normal(size=8))
    for lam in (0.0, 0.5, 1.0):
        store = VectorStore()
        for i, v in enumerate(vecs):
            store.insert(_entry(i, v))
        got = [e.id for e in store.retrieve(query, RetrievalParams(k=4, lam=lam))]
        want = mmr_oracle(query, vecs, 4, lam)
        assert got == want, f"lam={lam}"


def test_out_of_order_inserts_still_tiebreak_by_id():
    # insertion order must not leak into tie-breaking
    shared = _unit([1, 0, 0, 1])
    store = VectorStore()
    for i in (42, 7, 19):
        store.insert(_entry(i, shared.copy()))
    result = store.retrieve(shared, RetrievalParams(k=3, lam=1.0))
    assert [e.id for e in result] == [7, 19, 42]


def test_dump_load_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    store = VectorStore()
    for i in range(9):
        store.insert(_entry(i, _unit(rng.normal(size=6)), ts=1_000_000 + i))
    path = tmp_path / "store.jsonl"
    store.dump(path)

    header = path.read_text().splitlines()[0]
    assert '"store_version": 1' in header or '"store_version":1' in header

    loaded = VectorStore.load(path)
    assert loaded.size() == store.size()
    assert loaded.dim == store.dim
    for a, b in zip(store.entries(), loaded.entries()):
        assert a.id == b.id
        assert a.record == b.record
        assert (a.vector == b.vector).all()

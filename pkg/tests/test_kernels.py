"""The compiled kernel and the numpy fallback implement one contract."""

from __future__ import annotations

import numpy as np
import pytest

from logexplain import kernels
from logexplain.kernels import _mmr_py

from oracles import mmr_oracle

try:
    from logexplain.kernels import _mmr as _mmr_cy
except ImportError:
    _mmr_cy = None

IMPLS = [("numpy", _mmr_py.mmr_select)]
if _mmr_cy is not None:
    IMPLS.append(("cython", _mmr_cy.mmr_select))


def test_a_backend_is_selected():
    assert kernels.BACKEND in ("cython", "numpy")
    assert callable(kernels.mmr_select)


@pytest.mark.parametrize("name,select", IMPLS, ids=[n for n, _ in IMPLS])
def test_impl_matches_oracle(name, select):
    rng = np.random.default_rng(2024)
    for _ in range(60):
        n = int(rng.integers(1, 48))
        dim = int(rng.integers(2, 16))
        k = int(rng.integers(1, 8))
        lam = float(rng.choice([0.0, 0.3, 0.5, 0.7, 1.0]))
        vecs = rng.normal(size=(n, dim))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        query = rng.normal(size=dim)
        query /= np.linalg.norm(query)
        got = select(
            np.ascontiguousarray(query), np.ascontiguousarray(vecs), k, lam
        )
        want = mmr_oracle(query, [vecs[i] for i in range(n)], k, lam)
        assert list(got) == want


@pytest.mark.parametrize("name,select", IMPLS, ids=[n for n, _ in IMPLS])
def test_impl_k_exceeds_n(name, select):
    vecs = np.ascontiguousarray(np.eye(3))
    query = np.ascontiguousarray(np.array([1.0, 0.0, 0.0]))
    assert sorted(select(query, vecs, 10, 0.5)) == [0, 1, 2]


@pytest.mark.skipif(_mmr_cy is None, reason="extension not built")
def test_backends_agree_on_generic_instances():
    rng = np.random.default_rng(77)
    for _ in range(40):
        n = int(rng.integers(2, 40))
        dim = int(rng.integers(2, 32))
        vecs = rng.normal(size=(n, dim))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        query = rng.normal(size=dim)
        query /= np.linalg.norm(query)
        q = np.ascontiguousarray(query)
        m = np.ascontiguousarray(vecs)
        assert list(_mmr_cy.mmr_select(q, m, 8, 0.5)) == list(
            _mmr_py.mmr_select(q, m, 8, 0.5)
        )

from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jetstrata import linalg
from jetstrata.errors import InconsistentSystem
from jetstrata.scalars import (
    HyperDual,
    deriv,
    format_scalar,
    parse_scalar,
    random_rational_array,
    standard_part,
    to_backend,
)


def test_hyperdual_product_rule():
    e = HyperDual.variable(0)
    x = F(3) + e
    y = x * x * x  # d/de (3 + e)^3 = 27
    assert standard_part(y) == 27
    assert deriv(y, 0) == 27


def test_hyperdual_nested_levels_give_mixed_partial():
    a, b = HyperDual.variable(0), HyperDual.variable(1)
    f = (F(2) + a) * (F(5) + b) * (F(2) + a)
    # f = (2+a)^2 (5+b): d/da d/db at 0 = 2*2 = 4
    assert deriv(deriv(f, 1), 0) == 4


def test_hyperdual_reciprocal():
    e = HyperDual.variable(0)
    x = 1 / (F(2) + e)
    assert standard_part(x) == F(1, 2)
    assert deriv(x, 0) == F(-1, 4)


def test_scalar_round_trip():
    assert parse_scalar("3/6") == F(1, 2)
    assert format_scalar(F(-2, 4)) == "-1/2"
    assert format_scalar(0.25) == 0.25
    assert to_backend("1/4", "float") == 0.25
    assert to_backend(0.5, "rational") == F(1, 2)


def test_rank_and_nullspace_small():
    M = np.array([[F(1), F(2), F(3)], [F(2), F(4), F(6)]], dtype=object)
    assert linalg.rank(M) == 1
    ns = linalg.nullspace(M)
    assert len(ns) == 2
    for v in ns:
        assert all(x == 0 for x in M.dot(v))


def test_solve_and_inconsistent():
    M = np.array([[F(1), F(1)], [F(1), F(-1)]], dtype=object)
    x = linalg.solve(M, np.array([F(3), F(1)], dtype=object))
    assert list(x) == [2, 1]
    S = np.array([[F(1), F(1)], [F(2), F(2)]], dtype=object)
    with pytest.raises(InconsistentSystem):
        linalg.solve(S, np.array([F(1), F(3)], dtype=object))


def test_inverse_and_det(rng):
    for _ in range(10):
        M = random_rational_array(rng, (4, 4))
        if linalg.det(M) == 0:
            continue
        inv = linalg.inverse(M)
        assert (M.dot(inv) == linalg.identity(4)).all()
    with pytest.raises(ZeroDivisionError):
        linalg.inverse(np.array([[F(1), F(2)], [F(2), F(4)]], dtype=object))


def test_float_rank_threshold():
    M = np.array([[1.0, 2.0], [2.0, 4.0 + 1e-14]], dtype=object)
    assert linalg.rank(M, 1e-9) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_sparse_eliminator_matches_dense_rank(seed):
    rng = np.random.default_rng(seed)
    ncols = 6
    rows = []
    elim = linalg.SparseEliminator(ncols)
    for _ in range(5):
        row = {int(j): int(rng.integers(-2, 3)) for j in rng.choice(ncols, size=3, replace=False)}
        row = {k: v for k, v in row.items() if v}
        if not row:
            continue
        elim.add(row)
        dense = [F(0)] * ncols
        for k, v in row.items():
            dense[k] = F(v)
        rows.append(dense)
    if rows:
        assert elim.rank == linalg.rank(np.array(rows, dtype=object))
        for v in elim.nullspace():
            vec = [v.get(j, 0) for j in range(ncols)] if isinstance(v, dict) else list(v)
            for r in rows:
                assert sum(a * b for a, b in zip(r, vec)) == 0


def test_complement_basis():
    v = np.array([F(0), F(1), F(1)], dtype=object)
    comp = linalg.complement_basis([v], 3)
    assert len(comp) == 2
    M = np.array([list(v)] + [list(c) for c in comp], dtype=object)
    assert linalg.rank(M) == 3

from fractions import Fraction as F
from math import comb

import numpy as np
import pytest

from jetstrata import bounds, serialize
from jetstrata.embeddings import EmbeddingSpec
from jetstrata.errors import DimensionMismatch, DomainError
from jetstrata.scalars import random_rational_array
from jetstrata.selftest import lagrangian_jet
from jetstrata.symgroup import GroupAlgebraElement
from jetstrata.tensors import MultiTensor, random_sym_tensor


def test_min_r_small_cases():
    assert bounds.min_r(2, 2) == 1
    assert bounds.min_r_simplified(4, 3) == 2
    assert bounds.min_r(4, 3) == 2


def test_min_r_one_iff_binomial():
    for d, n, r, _, _ in bounds.bound_sweep(8):
        assert (r == 1) == (d < comb(2 * n - d + 1, 2))


def test_scalar_reading_differs_only_where_expected():
    diffs = [(d, n) for d, n, r, rs, _ in bounds.bound_sweep(8) if r != rs]
    assert diffs == [(6, 4)]


def test_bounds_domain():
    with pytest.raises(DomainError):
        bounds.min_r(3, 2)


def test_tdim_table_rows():
    rows = bounds.tdim_table(2, 2, 2)
    assert {"s": 2, "c": 2, "w": 2, "dim": 4} in rows
    assert len(rows) == 4


def test_matrix_and_multi_round_trip(rng):
    M = random_rational_array(rng, (3, 2))
    assert (serialize.matrix_from_json(serialize.matrix_to_json(M)) == M).all()
    T = MultiTensor(random_rational_array(rng, (2, 2, 2, 1)))
    assert serialize.multi_from_json(serialize.multi_to_json(T)) == T


def test_sym_and_jet_round_trip(rng):
    S = random_sym_tensor(rng, 2, 2, 4)
    assert serialize.sym_from_json(serialize.sym_to_json(S)) == S
    jet = lagrangian_jet(2, 2)
    back = serialize.jet_from_json(serialize.jet_to_json(jet))
    assert all(a == b for a, b in zip(back.A, jet.A))


def test_group_element_round_trip(rng):
    x = GroupAlgebraElement(2, random_rational_array(rng, (6,)))
    assert serialize.group_element_from_json(serialize.group_element_to_json(x)) == x


def test_embedding_round_trip():
    e = EmbeddingSpec("torus6", {"epsilon": 0.5, "delta": 0.25})
    back = serialize.embedding_from_json(serialize.embedding_to_json(e))
    assert back.kind == "torus6" and back.params == e.params


def test_bad_json_inputs(tmp_path):
    with pytest.raises(DimensionMismatch):
        serialize.multi_from_json({"order": 2, "d": 2, "entries": ["1/1"]})
    with pytest.raises(DomainError):
        serialize.matrix_from_json({"rows": 1})
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(DomainError):
        serialize.load(str(p))
    with pytest.raises(DomainError):
        serialize.load(str(tmp_path / "missing.json"))


def test_dumps_formats_rationals():
    assert '"1/2"' in serialize.dumps({"x": F(1, 2)})


def test_both_target_readings_of_the_bound():
    from jetstrata.symgroup import t_dim

    for d, n, r, _, simple in bounds.bound_sweep(8):
        c = 2 * n - d
        for w in (2 * n, d):
            assert bounds.min_r(d, n, w) <= simple
            if c >= 2:
                assert all(t_dim(s, c, w) >= s for s in range(2, 4))

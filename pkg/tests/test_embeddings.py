from fractions import Fraction as F
import math

import numpy as np
import pytest

from jetstrata import embeddings, taylor
from jetstrata.embeddings import EmbeddingSpec
from jetstrata.errors import DomainError


def test_tps_derivative_of_product():
    x = taylor.TPS.variable(2, 3, 0, F(1))
    y = taylor.TPS.variable(2, 3, 1, F(2))
    f = x * x * y  # d^3/dx^2 dy = 2
    assert f.derivative((0, 0, 1)) == 2
    assert f.derivative((0,)) == 2 * 1 * 2
    assert f.value == 2


def test_tps_sin_cos_identity():
    x = taylor.TPS.variable(1, 5, 0, 0.3)
    one = taylor.sin(x) * taylor.sin(x) + taylor.cos(x) * taylor.cos(x)
    assert abs(one.value - 1) < 1e-15
    for k in range(1, 6):
        assert abs(one.derivative((0,) * k)) < 1e-12


def test_tps_sqrt_and_reciprocal():
    x = taylor.TPS.variable(1, 3, 0, 4.0)
    r = taylor.sqrt(x)
    assert abs(r.derivative((0,)) - 0.25) < 1e-15
    inv = (x * 1).reciprocal()
    assert abs(inv.derivative((0,)) + 1 / 16) < 1e-15


def test_polynomial_jet_is_exact():
    emb = EmbeddingSpec("polynomial", {"d": 1, "n": 1, "components": [{"1": 1}, {"3": F(1, 3)}]})
    jet = embeddings.jet_eval(emb, [F(2)], 3)
    assert list(jet.y) == [2, F(8, 3)]
    assert jet.A[0].value((0,))[1] == 4  # d/dx x^3/3 = x^2
    assert jet.A[2].value((0, 0, 0))[1] == 2


def test_graph_classification():
    # graph of a gradient is Lagrangian
    emb = EmbeddingSpec("graph", {"d": 2, "n": 2, "g": [{"1,1": 1}, {"2,0": F(1, 2)}]})
    pc = embeddings.classify_point(emb, [F(1), F(3)])
    # f*omega = dx1 ^ d(x1 x2) + dx2 ^ d(x1^2/2) = x1 dx1^dx2 + x1 dx2^dx1 = 0
    assert pc.c == 2 and pc.status == "coisotropic-point"


def test_generic_graph_is_nowhere_coisotropic(rng):
    emb = embeddings.random_quadratic_graph(rng)
    pts = embeddings.sample_points(emb, 20, rng)
    statuses = [embeddings.classify_point(emb, x).status for x in pts]
    assert statuses.count("nowhere-coisotropic-point") >= 18


def test_torus6_distribution():
    eps, dl = math.sqrt(2), math.sqrt(3)
    emb = EmbeddingSpec("torus6", {"epsilon": eps, "delta": dl})
    cd = embeddings.characteristic_distribution(emb, [0.1, 0.2, 0.3, 0.4])
    assert cd["coisotropic"] and len(cd["vectors"]) == 2 and cd["residual"] < 1e-12
    V = np.array([[float(t) for t in v] for v in cd["vectors"]]).T
    expected = np.array([[dl, 1, -dl, 1 + eps, 0, 0], [0, 0, 0, 0, 0, 1]], dtype=float).T
    coef = np.linalg.lstsq(V, expected, rcond=None)[0]
    assert np.abs(V @ coef - expected).max() < 1e-12


def test_lagrangian_torus_and_ellipsoid(rng):
    L = EmbeddingSpec("lagrangian-torus", {"b": [["1/3", "2/3"]], "a": [[1, 1]]})
    res = embeddings.lagrangian_check(L, embeddings.sample_points(L, 10, rng))
    assert res == {"lagrangian": True, "contained": True}
    E = EmbeddingSpec("ellipsoid-product", {"a": [[1, 2, 3]]})
    for x in embeddings.sample_points(E, 10, rng):
        assert embeddings.classify_point(E, x).c == 1


def test_liouville_form_differential():
    alpha = embeddings.liouville_form(2)
    dA = alpha.d_matrix()
    # d alpha equals the standard form dq ^ dp
    assert dA[0, 2] == 1 and dA[2, 0] == -1 and dA[0, 1] == 0


def test_wedge_top_of_area_form():
    W = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=object)
    assert embeddings.wedge_top([], [W]) == 1
    a = [np.array([1.0, 0.0], dtype=object), np.array([0.0, 1.0], dtype=object)]
    assert embeddings.wedge_top(a, []) == 1


def test_stability_counts_forms():
    emb = EmbeddingSpec("torus6", {"epsilon": 0.5, "delta": 0.25})
    with pytest.raises(DomainError):
        embeddings.stability_check(emb, [embeddings.constant_form([0, 1, 0, 0, 0, 0])], [[0.0] * 4])


def test_unknown_kind():
    with pytest.raises(DomainError):
        EmbeddingSpec("sphere", {})

from fractions import Fraction as F
from math import factorial

import numpy as np
import pytest

from jetstrata import symgroup
from jetstrata.errors import ConfigurationTooLarge, DimensionMismatch
from jetstrata.scalars import random_rational_array
from jetstrata.symgroup import GroupAlgebraElement, compose, group_multiply, symmetric_group
from jetstrata.symplectic import SymplecticSpace
from jetstrata.tau import property_report, tau_build
from jetstrata.tensors import MultiTensor, random_multi_tensor, random_sym_tensor


def random_element(rng, s):
    return GroupAlgebraElement(s, random_rational_array(rng, (factorial(s + 1),)))


def naive_multiply(x, y):
    G = symmetric_group(x.s + 1)
    out = GroupAlgebraElement.zero(x.s)
    for i, p in enumerate(G.perms):
        for j, q in enumerate(G.perms):
            out.coeffs[G.index[compose(p, q)]] += x.coeffs[i] * y.coeffs[j]
    return out


@pytest.mark.parametrize("s", [1, 2, 3])
def test_multiply_matches_double_loop(rng, s):
    x, y = random_element(rng, s), random_element(rng, s)
    assert group_multiply(x, y) == naive_multiply(x, y)


def test_multiply_is_associative(rng):
    x, y, z = (random_element(rng, 2) for _ in range(3))
    assert group_multiply(group_multiply(x, y), z) == group_multiply(x, group_multiply(y, z))


def test_compose_convention():
    p, q = (1, 0, 2), (0, 2, 1)
    assert compose(p, q) == (2, 0, 1)


def test_group_table_inverse():
    G = symmetric_group(4)
    for i in range(G.order):
        assert G.table[i, G.inverse[i]] == G.identity


@pytest.mark.parametrize("s", [2, 3])
def test_idempotent_matches_normal_equations(s):
    assert symgroup.idempotent_pair_normal_equations(s) == symgroup.idempotent_pair(s)


@pytest.mark.parametrize("s", [2, 3, 4])
def test_idempotent_report(rng, s):
    assert all(symgroup.idempotent_report(s, samples=10, rng=rng).values())


def test_projection_is_idempotent_and_fixes_tau(rng):
    ep = symgroup.projection(3)
    T = random_multi_tensor(rng, 4, 2)
    P = symgroup.project_T(ep, T)
    assert symgroup.project_T(ep, P) == P
    assert all(property_report(P.data).values())
    t = tau_build(SymplecticSpace(2), [random_sym_tensor(rng, k, 2, 4) for k in (1, 2, 3)])
    assert symgroup.project_T(ep, t) == t


def test_projection_order_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        symgroup.project_T(symgroup.projection(2), random_multi_tensor(rng, 3 + 1, 2))


@pytest.mark.parametrize("s,c,dim", [(2, 1, 0), (2, 2, 2), (2, 3, 8), (3, 2, 3), (3, 3, 15), (4, 2, 4), (5, 2, 5)])
def test_scalar_dimensions(s, c, dim):
    # each value is also confirmed via the idempotent method below where feasible
    assert symgroup.scalar_t_dim(s, c) == dim


@pytest.mark.parametrize("s,d,w", [(2, 2, 1), (2, 2, 3), (2, 3, 2), (3, 2, 2), (4, 2, 1)])
def test_two_methods_agree(s, d, w):
    a = symgroup.t_space_basis(s, d, w, "constraints")
    b = symgroup.t_space_basis(s, d, w, "idempotent")
    assert a.dim == b.dim == symgroup.t_dim(s, d, w)
    assert symgroup.check_basis(a) and symgroup.check_basis(b)


def test_passive_target_factor():
    assert symgroup.t_dim(2, 2, 4) == 4 * symgroup.scalar_t_dim(2, 2) == 8


def test_size_guard():
    with pytest.raises(ConfigurationTooLarge):
        symgroup.t_space_basis(5, 10, 4)

from fractions import Fraction as F
import itertools

import numpy as np
import pytest

from jetstrata import linalg, symplectic
from jetstrata.errors import DimensionMismatch, DomainError
from jetstrata.scalars import random_rational_array
from jetstrata.symplectic import SymplecticSpace, perturb_within_kc
from jetstrata.tensors import (
    MultiTensor,
    SymTensor,
    mult_eval,
    permute_data,
    pullback_data,
    random_sym_tensor,
    rearranged,
    sym_eval,
)


def test_standard_form_pairs_q_with_p():
    space = SymplecticSpace(2)
    e = linalg.identity(4)
    assert symplectic.omega_eval(space, e[0], e[2]) == 1
    assert symplectic.omega_eval(space, e[2], e[0]) == -1
    assert symplectic.omega_eval(space, e[0], e[1]) == 0


def test_rejects_degenerate_override():
    with pytest.raises(DomainError):
        SymplecticSpace(1, np.array([[F(0), F(0)], [F(0), F(0)]], dtype=object))


def test_random_symplectic_preserves_form(rng):
    space = SymplecticSpace(3)
    S = symplectic.random_symplectic(3, rng)
    assert (S.T.dot(space.matrix).dot(S) == space.matrix).all()


@pytest.mark.parametrize("n,d,c", [(2, 2, 2), (2, 3, 1), (3, 4, 2), (3, 3, 3), (2, 2, 0)])
def test_random_kc_map_lands_in_stratum(rng, n, d, c):
    space = SymplecticSpace(n)
    A = symplectic.random_kc_map(n, d, c, rng)
    assert symplectic.kc_membership(space, A, c)
    Z = perturb_within_kc(A, n, rng)
    assert symplectic.kc_membership(space, Z, c)


def test_kc_impossible_configuration(rng):
    with pytest.raises(DomainError):
        symplectic.random_kc_map(2, 3, 2, rng)


def test_kernel_dimension_of_lagrangian_inclusion():
    space = SymplecticSpace(2)
    A = linalg.zeros((4, 2))
    A[0, 0] = A[1, 1] = F(1)
    c, kernel = symplectic.kernel_of_form(symplectic.pullback_form(space, A))
    assert c == 2 and len(kernel) == 2


def test_tangent_space_vectors_satisfy_condition(rng):
    space = SymplecticSpace(3)
    A = symplectic.random_kc_map(3, 4, 2, rng)
    rows, codim = symplectic.kc_tangent_space(space, A)
    assert codim == 1
    _, kernel = symplectic.kernel_of_form(symplectic.pullback_form(space, A))
    for vec in linalg.nullspace(rows)[:4]:
        B = vec.reshape(6, 4)
        assert all(v == 0 for v in symplectic.tangent_condition(space, A, B, kernel))


def test_symtensor_dense_is_symmetric(rng):
    T = random_sym_tensor(rng, 3, 2, 4)
    D = T.dense()
    for p in itertools.permutations(range(3)):
        assert (np.transpose(D, p + (3,)) == D).all()
    assert SymTensor.from_dense(D) == T


def test_sym_eval_matches_dense_contraction(rng):
    T = random_sym_tensor(rng, 2, 3, 2)
    u, v = random_rational_array(rng, (3,)), random_rational_array(rng, (3,))
    dense = np.tensordot(v, np.tensordot(u, T.dense(), axes=([0], [0])), axes=([0], [0]))
    assert list(sym_eval(T, [u, v])) == list(dense)


def test_symmetrize_averages(rng):
    arr = random_rational_array(rng, (2, 2, 1))
    S = SymTensor.symmetrize(arr)
    assert S.value((0, 1))[0] == (arr[0, 1, 0] + arr[1, 0, 0]) / 2


def test_rearranged_reads_arguments_by_source():
    arr = np.arange(8).reshape(2, 2, 2, 1)
    R = rearranged(arr, [2, 0, 1])
    for i, j, k in itertools.product(range(2), repeat=3):
        # R(v0, v1, v2) = arr(v2, v0, v1)
        assert R[i, j, k, 0] == arr[k, i, j, 0]


def test_permute_data_is_an_action():
    arr = np.arange(27).reshape(3, 3, 3, 1)
    p, q = (1, 2, 0), (0, 2, 1)
    pq = tuple(q[p[k]] for k in range(3))
    # (pq) . T = p . (q . T)
    assert (permute_data(pq, arr) == permute_data(p, permute_data(q, arr))).all()


def test_pullback(rng):
    T = MultiTensor(random_rational_array(rng, (3, 3, 1)))
    f = random_rational_array(rng, (3, 2))
    P = pullback_data(f, T.data, 2)
    x, y = random_rational_array(rng, (2,)), random_rational_array(rng, (2,))
    assert mult_eval(MultiTensor(P), [x, y])[0] == mult_eval(T, [f.dot(x), f.dot(y)])[0]


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        sym_eval(SymTensor.zero(2, 2, 1), [np.array([F(1), F(0)], dtype=object)])

from fractions import Fraction as F

import numpy as np
import pytest

from jetstrata import linalg, strata, symplectic
from jetstrata.embeddings import EmbeddingSpec
from jetstrata.errors import ChartDomainError, DomainError
from jetstrata.scalars import random_rational_array
from jetstrata.selftest import lagrangian_jet, perturbed_jet
from jetstrata.symplectic import SymplecticSpace, perturb_within_kc
from jetstrata.tau import dense_family, property_report, tau_build
from jetstrata.tensors import MultiTensor, SymTensor, random_sym_tensor


@pytest.fixture
def chart_data(rng):
    space = SymplecticSpace(3)
    A = symplectic.random_kc_map(3, 4, 2, rng)
    return space, A, strata.psi_chart(space, A, 2)


def test_d_matrix_vanishes_at_base(chart_data):
    _, A, chart = chart_data
    assert all(x == 0 for x in strata.d_matrix(chart, A).flat)


def test_psi_maps_v0_into_kernel_at_base(chart_data):
    space, A, chart = chart_data
    S = symplectic.pullback_form(space, A)
    img = strata.psi_matrix(chart, A).dot(chart.V0)
    assert all(x == 0 for x in S.dot(img).flat)


def test_kernel_alignment_along_stratum(rng, chart_data):
    space, A, chart = chart_data
    for _ in range(5):
        Z = perturb_within_kc(A, 3, rng)
        K = strata.kernel_image(chart, Z)
        assert all(x == 0 for x in symplectic.pullback_form(space, Z).dot(K).flat)
        assert all(x == 0 for x in strata.schur_block(chart, Z).flat)


def test_schur_block_detects_leaving_stratum(rng, chart_data):
    space, A, chart = chart_data
    Y = A + random_rational_array(rng, A.shape, 1, 40)
    if not symplectic.kc_membership(space, Y, 2):
        assert any(x != 0 for x in strata.schur_block(chart, Y).flat)


def test_transition_at_base_is_identity(chart_data):
    _, A, chart = chart_data
    assert (strata.transition(chart, A, A) == linalg.identity(4)).all()


def test_wrong_stratum_rejected(rng):
    space = SymplecticSpace(2)
    A = symplectic.random_kc_map(2, 2, 0, rng)
    with pytest.raises(DomainError):
        strata.psi_chart(space, A, 2)


def test_chart_domain_error():
    space = SymplecticSpace(2)
    A = linalg.zeros((4, 3))
    A[0, 0] = A[1, 1] = A[3, 2] = F(1)  # kernel e0, form pairs e1 with e2
    chart = strata.psi_chart(space, A, 1)
    Z = linalg.zeros((4, 3))
    Z[0, 0] = Z[1, 1] = Z[2, 2] = F(1)  # A*omega becomes degenerate on the complement
    with pytest.raises(ChartDomainError):
        strata.d_matrix(chart, Z)


def test_f_psi_parts_add_up(rng, chart_data):
    space, A, chart = chart_data
    arrs = [A.T] + [random_sym_tensor(rng, k, 4, 6).dense() for k in (2, 3)]
    eta = strata.tau_family(space)
    v = random_rational_array(rng, (4,))
    both = strata.f_psi_direction(eta, chart, arrs, v)
    fam = strata.f_psi_direction(eta, chart, arrs, v, parts="family")
    cor = strata.f_psi_direction(eta, chart, arrs, v, parts="correction")
    assert (both == fam + cor).all()


def test_tau_tilde_level_two_is_tau(rng, chart_data):
    space, A, chart = chart_data
    As = [SymTensor.from_linear_map(A), random_sym_tensor(rng, 2, 4, 6)]
    assert strata.tau_tilde(chart, As) == tau_build(space, As)


def test_tau_tilde_lands_in_t_space(rng):
    space = SymplecticSpace(2)
    A = symplectic.random_kc_map(2, 3, 1, rng)
    chart = strata.psi_chart(space, A, 1)
    As = [SymTensor.from_linear_map(A)] + [random_sym_tensor(rng, k, 3, 4) for k in (2, 3)]
    assert all(property_report(strata.tau_tilde(chart, As).data).values())


def test_trivial_memberships():
    space = SymplecticSpace(2)
    jet = lagrangian_jet(2, 3)
    for r in (1, 2, 3):
        assert strata.stratum_member(space, jet, c=2, r=r)["member"]
    res = strata.stratum_member(space, jet, c=1, r=1)
    assert res == {"member": False, "failing_level": 1}


def test_perturbed_jet_fails_at_level_two(rng):
    space = SymplecticSpace(2)
    res = strata.stratum_member(space, perturbed_jet(2, 3, rng), c=2, r=3)
    assert res["failing_level"] == 2


def test_codimensions():
    assert strata.stratum_codim(2, 1, 4) == 1
    assert strata.stratum_codim(2, 2, 4) == 1 + 8
    assert strata.scalar_stratum_codim(2, 3) == 1 + 2 + 3
    assert strata.stratum_codim(1, 5, 6) == 0


def test_transversality_on_lagrangian_graph():
    # graph of x -> (x1^2/2, x2^2) is Lagrangian, so every point lies in K_2
    emb = EmbeddingSpec("graph", {"d": 2, "n": 2, "g": [{"2,0": "1/2"}, {"0,2": 1}]})
    res = strata.transversality_check(emb, [F(1, 2), F(1, 3)], r=1)
    assert res["member"] and res["codim"] == 1 and res["rank"] == 0


def test_transversality_where_form_degenerates_linearly():
    # g = (x1^2, x1 x2) pulls the form back to x2 dx2 ^ dx1, degenerate exactly on x2 = 0
    emb = EmbeddingSpec("graph", {"d": 2, "n": 2, "g": [{"2,0": 1}, {"1,1": 1}]})
    res = strata.transversality_check(emb, [F(1, 2), F(0)], r=1)
    assert res["member"] and res["codim"] == 1
    assert res["rank"] == 1 and res["transverse"]
    with pytest.raises(DomainError):
        strata.transversality_check(emb, [F(1, 2), F(1)], c=2, r=1)

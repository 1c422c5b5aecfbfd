"""The acceptance suite: ten property checks over the whole library.

Each ``criterion_k`` returns a :class:`CriterionResult`; ``run_all`` runs them
in order.  Seeds are fixed so that results are reproducible.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
import time

import numpy as np

from . import bounds, embeddings, linalg, strata, symgroup, symplectic, tau
from .scalars import random_rational_array
from .tensors import MultiTensor, SymTensor, pullback_data, random_multi_tensor, random_sym_tensor


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number, name, fn, seed):
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    passed, detail = fn(rng)
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


def lagrangian_inclusion(n, d=None):
    d = n if d is None else d
    A = linalg.zeros((2 * n, d))
    for i in range(d):
        A[i, i] = Fraction(1)
    return A


# 1 ---------------------------------------------------------------------------


def _tau_suite(rng, instances=100):
    t0 = time.perf_counter()
    bad = 0
    total = 0
    for s in (2, 3, 4):
        for d in (2, 3):
            for n in (2, 3):
                space = symplectic.SymplecticSpace(n)
                for _ in range(instances):
                    As = [random_sym_tensor(rng, k, d, 2 * n) for k in range(1, s + 1)]
                    arrs = tau.dense_family(As)
                    a = tau.tau_data(arrs, space.matrix, "partition-sum")
                    b = tau.tau_data(arrs, space.matrix, "perm-sum")
                    ok = all(x == y for x, y in zip(a.flat, b.flat))
                    ok = ok and all(tau.property_report(a[..., None]).values())
                    bad += not ok
                    total += 1
    elapsed = time.perf_counter() - t0
    return bad == 0 and elapsed <= 60, f"{total - bad}/{total} instances exact, {elapsed:.1f}s of 60s"


def criterion_1(seed=1):
    return _timed(1, "tau identities", _tau_suite, seed)


# 2 ---------------------------------------------------------------------------


def _idempotent_suite(rng):
    details = []
    ok = True
    for s in (2, 3, 4, 5):
        symgroup.idempotent_pair.cache_clear()
        t0 = time.perf_counter()
        report = symgroup.idempotent_report(s, samples=50, rng=rng)
        elapsed = time.perf_counter() - t0
        good = all(report.values())
        if s == 5 and elapsed > 10:
            good = False
        ok = ok and good
        details.append(f"s={s} {'ok' if good else 'bad'} {elapsed:.2f}s")
    return ok, ", ".join(details)


def criterion_2(seed=2):
    return _timed(2, "idempotent pair", _idempotent_suite, seed)


# 3 ---------------------------------------------------------------------------


def tensor_vanishing_on(rng, s, S, d):
    """Random order-(s+1) tensor vanishing on all tuples from span(S) (S is (d, k))."""
    k = S.shape[1]
    cols = [S[:, i] for i in range(k)] + linalg.complement_basis([S[:, i] for i in range(k)], d)
    B = np.array([list(c) for c in cols], dtype=object).T
    core = random_rational_array(rng, (d,) * (s + 1))
    for idx in np.ndindex(*core.shape):
        if all(i < k for i in idx):
            core[idx] = Fraction(0)
    # T(v) = core(B^-1 v), so T(S e_i, ..) = core(e_i, ..)
    return pullback_data(linalg.inverse(B), core[..., None], s + 1)


def _projection_suite(rng):
    idem = fixed = vanish = 0
    for trial in range(50):
        s = 2 + trial % 2
        d = 3
        ep = symgroup.projection(s)
        T = random_multi_tensor(rng, s + 1, d)
        P1 = symgroup.project_data(ep, T.data)
        idem += all(a == b for a, b in zip(P1.flat, symgroup.project_data(ep, P1).flat))
        n = 2 + trial % 2
        space = symplectic.SymplecticSpace(n)
        As = [random_sym_tensor(rng, k, d, 2 * n) for k in range(1, s + 1)]
        t = tau.tau_build(space, As)
        fixed += symgroup.project_T(ep, t) == t
        S = random_rational_array(rng, (d, 2))
        while linalg.rank(S) < 2:
            S = random_rational_array(rng, (d, 2))
        V = tensor_vanishing_on(rng, s, S, d)
        assert all(x == 0 for x in pullback_data(S, V, s + 1).flat)
        PV = symgroup.project_data(ep, V)
        vanish += all(x == 0 for x in pullback_data(S, PV, s + 1).flat)
    ok = idem == fixed == vanish == 50
    return ok, f"idempotent {idem}/50, fixes tau {fixed}/50, subspace vanishing {vanish}/50"


def criterion_3(seed=3):
    return _timed(3, "projection", _projection_suite, seed)


# 4 ---------------------------------------------------------------------------

T_DIM_2_2_4 = 8  # confirmed by the constraint-nullspace computation


def _tdim_suite(rng):
    ok = True
    parts = []
    for s, d in ((2, 2), (2, 3), (3, 2)):
        for w in (4, 6):
            a = symgroup.t_space_basis(s, d, w, "constraints").dim
            b = symgroup.t_space_basis(s, d, w, "idempotent").dim
            ok = ok and a == b == symgroup.t_dim(s, d, w)
            parts.append(f"({s},{d},{w})={a}/{b}")
    zero = all(symgroup.t_dim(s, 1, w) == 0 for s in range(2, 6) for w in (4, 6))
    lower = all(symgroup.t_dim(s, c, w) >= s for s in (2, 3, 4) for c in (2, 3) for w in (1, 4, 6))
    pinned = symgroup.t_dim(2, 2, 4) == T_DIM_2_2_4
    ok = ok and zero and lower and pinned
    return ok, " ".join(parts) + f"; c=1 zero {zero}; >= s {lower}; t_dim(2,2,4)={symgroup.t_dim(2, 2, 4)}"


def criterion_4(seed=4):
    return _timed(4, "T_s dimensions", _tdim_suite, seed)


# 5 ---------------------------------------------------------------------------

KC_CONFIGS = ((1, 3, 2), (2, 4, 3), (3, 5, 4))  # (c, d, n)


def _codim_suite(rng, instances=100):
    good = 0
    total = 0
    tangent_ok = True
    for c, d, n in KC_CONFIGS:
        space = symplectic.SymplecticSpace(n)
        for i in range(instances):
            A = symplectic.random_kc_map(n, d, c, rng)
            rows, codim = symplectic.kc_tangent_space(space, A)
            good += codim == c * (c - 1) // 2
            total += 1
            if i < 5:
                _, kernel = symplectic.kernel_of_form(symplectic.pullback_form(space, A))
                for vec in linalg.nullspace(rows)[:3] if rows.shape[0] else []:
                    B = vec.reshape(2 * n, d)
                    if any(v != 0 for v in symplectic.tangent_condition(space, A, B, kernel)):
                        tangent_ok = False
    r1 = all(strata.stratum_codim(c, 1, w) == c * (c - 1) // 2 for c in range(1, 6) for w in (4, 6))
    ok = good == total and tangent_ok and r1
    return ok, f"{good}/{total} codimensions c(c-1)/2, tangent vectors ok {tangent_ok}, r=1 codim {r1}"


def criterion_5(seed=5):
    return _timed(5, "stratum codimension", _codim_suite, seed)


# 6 ---------------------------------------------------------------------------


def _chart_suite(rng, instances=20):
    aligned = 0
    total = 0
    invertible = True
    for c, d, n in ((1, 3, 2), (2, 4, 3)):
        space = symplectic.SymplecticSpace(n)
        for _ in range(instances):
            A = symplectic.random_kc_map(n, d, c, rng)
            chart = strata.psi_chart(space, A, c)
            Z = symplectic.perturb_within_kc(A, n, rng)
            if not symplectic.kc_membership(space, Z, c):
                continue
            K = strata.kernel_image(chart, Z)
            S = symplectic.pullback_form(space, Z)
            aligned += all(x == 0 for x in S.dot(K).flat)
            total += 1
            invertible = invertible and linalg.det(strata.psi_matrix(chart, Z)) != 0
            # a nearby map that is generally outside K_c but still in the chart domain
            Y = A + random_rational_array(rng, A.shape, 1, 50)
            try:
                invertible = invertible and linalg.det(strata.psi_matrix(chart, Y)) != 0
            except strata.ChartDomainError:
                pass
    ok = aligned == total == 2 * instances and invertible
    return ok, f"kernel alignment {aligned}/{total}, Psi_Z invertible {invertible}"


def criterion_6(seed=6):
    return _timed(6, "Psi-chart", _chart_suite, seed)


# 7 ---------------------------------------------------------------------------


def _float_array(a):
    return np.array([float(x) for x in a.flat], dtype=object).reshape(a.shape)


def _derivative_suite(rng):
    v_ok = 0
    v_total = 0
    for s in (3, 4):
        for i in range(50):
            d, n = (2, 2) if i % 2 == 0 else (3, 3)
            space = symplectic.SymplecticSpace(n)
            As = [random_sym_tensor(rng, k, d, 2 * n) for k in range(1, s + 1)]
            vs = random_rational_array(rng, (d,))
            args = [random_rational_array(rng, (d,)) for _ in range(s)]
            v_ok += tau.tau_derivative_identity_check(space, As, vs, args)
            v_total += 1
    fd_ok = 0
    worst = 0.0
    for i in range(20):
        n, d, c = ((2, 2, 0), (2, 3, 1), (3, 4, 2), (2, 2, 2))[i % 4]
        space = symplectic.SymplecticSpace(n)
        # one shear step keeps A*JA free of heavy cancellation in floats
        A = symplectic.random_kc_map(n, d, c, rng, steps=1)
        Af = _float_array(A)
        fspace = symplectic.SymplecticSpace(n, _float_array(space.matrix))
        chart = strata.psi_chart(fspace, Af, c)
        arrs = [Af.T] + [_float_array(random_sym_tensor(rng, k, d, 2 * n).dense()) for k in (2, 3)]
        eta = strata.tau_family(fspace)
        v = np.array(rng.uniform(-1, 1, size=d), dtype=object)
        dual = strata.f_psi_direction(eta, chart, arrs, v)
        fd = strata.f_psi_direction_fd(eta, chart, arrs, v)
        scale = max(max(abs(float(x)) for x in dual.flat), 1e-300)
        err = max(abs(float(a) - float(b)) for a, b in zip(dual.flat, fd.flat)) / scale
        worst = max(worst, err)
        fd_ok += err <= 1e-4
    sym_ok = 0
    for i in range(20):
        c, d, n = ((1, 3, 2), (2, 4, 3))[i % 2]
        space = symplectic.SymplecticSpace(n)
        A = symplectic.random_kc_map(n, d, c, rng)
        chart = strata.psi_chart(space, A, c)
        L = SymTensor.from_linear_map(A)
        A2 = random_sym_tensor(rng, 2, d, 2 * n)
        A3, A3b = random_sym_tensor(rng, 3, d, 2 * n), random_sym_tensor(rng, 3, d, 2 * n)
        lhs = strata.tau_tilde(chart, [L, A2, A3]) - strata.tau_tilde(chart, [L, A2, A3b])
        rhs = tau.tau_build(space, [L, A2, A3]) - tau.tau_build(space, [L, A2, A3b])
        sym_ok += lhs == rhs
    ok = v_ok == v_total and fd_ok == 20 and sym_ok == 20
    return ok, (
        f"derivative identity {v_ok}/{v_total}, F_Psi vs finite differences {fd_ok}/20 "
        f"(worst rel {worst:.1e}), A_s-independence {sym_ok}/20"
    )


def criterion_7(seed=7):
    return _timed(7, "derivative machinery", _derivative_suite, seed)


# 8 ---------------------------------------------------------------------------


def _bounds_suite(rng):
    pinned = bounds.min_r(2, 2) == 1
    equiv = True
    ordered = True
    for d, n, r, r_scalar, r_simple in bounds.bound_sweep(8):
        if (r == 1) != (d < math.comb(2 * n - d + 1, 2)):
            equiv = False
        if 2 * n - d >= 2 and not (r <= r_simple and r_scalar <= r_simple):
            ordered = False
    simple = bounds.min_r_simplified(4, 3) == 2
    ok = pinned and equiv and ordered and simple
    return ok, f"min_r(2,2)=1 {pinned}, r=1 iff binomial {equiv}, min_r <= simplified {ordered}, simplified(4,3)=2 {simple}"


def criterion_8(seed=8):
    return _timed(8, "bounds", _bounds_suite, seed)


# 9 ---------------------------------------------------------------------------


def _examples_suite(rng, samples=100):
    eps, dl = math.sqrt(2), math.sqrt(3)
    t6 = embeddings.EmbeddingSpec("torus6", {"epsilon": eps, "delta": dl})
    expected = np.array([[dl, 1.0, -dl, 1.0 + eps, 0.0, 0.0], [0, 0, 0, 0, 0, 1.0]], dtype=float).T
    pts = embeddings.sample_points(t6, samples, rng)
    dist_ok = 0
    worst = 0.0
    for x in pts:
        cd = embeddings.characteristic_distribution(t6, x)
        V = np.array([[float(t) for t in v] for v in cd["vectors"]]).T
        if V.shape[1] != 2:
            continue
        coef = np.linalg.lstsq(V, expected, rcond=None)[0]
        back = np.linalg.lstsq(expected, V, rcond=None)[0]
        err = max(np.abs(V @ coef - expected).max(), np.abs(expected @ back - V).max())
        worst = max(worst, err)
        dist_ok += err <= 1e-12
    alphas = [embeddings.constant_form([0, 1, 0, 0, 0, 0]), embeddings.constant_form([0, 0, 0, 0, 0, 1])]
    stab = embeddings.stability_check(t6, alphas, pts)
    L = embeddings.EmbeddingSpec("lagrangian-torus", {"b": [["1/2", "1/2"]], "a": [[1, 1]]})
    lag = embeddings.lagrangian_check(L, embeddings.sample_points(L, samples, rng))
    LL = embeddings.EmbeddingSpec(
        "lagrangian-torus", {"b": [["1/2", "1/2"], ["1/3", "4/3"]], "a": [[1, 1], [1, 2]]}
    )
    lag2 = embeddings.lagrangian_check(LL, embeddings.sample_points(LL, samples, rng))
    EP = embeddings.EmbeddingSpec("ellipsoid-product", {"a": [[1, 2], [3, 1]]})
    kdim = sum(embeddings.classify_point(EP, x).c == 2 for x in embeddings.sample_points(EP, samples, rng))
    G = embeddings.random_quadratic_graph(rng)
    nco = sum(
        embeddings.classify_point(G, x).status == "nowhere-coisotropic-point"
        for x in embeddings.sample_points(G, samples, rng)
    )
    ok = (
        dist_ok == samples
        and stab["volume_condition"]
        and stab["kernel_condition"]
        and lag["lagrangian"]
        and lag["contained"]
        and lag2["lagrangian"]
        and lag2["contained"]
        and kdim == samples
        and nco >= 95
    )
    return ok, (
        f"torus6 distribution {dist_ok}/{samples} (worst {worst:.1e}), stability {stab['volume_condition']}, "
        f"L_b {lag['lagrangian']}/{lag['contained']}, product {lag2['lagrangian']}/{lag2['contained']}, "
        f"ellipsoid kernel {kdim}/{samples}, graph nowhere-coisotropic {nco}/{samples}"
    )


def criterion_9(seed=9):
    return _timed(9, "worked examples", _examples_suite, seed)


# 10 --------------------------------------------------------------------------


def lagrangian_jet(n, r):
    A = lagrangian_inclusion(n)
    tensors = [SymTensor.from_linear_map(A)] + [SymTensor.zero(k, n, 2 * n) for k in range(2, r + 1)]
    return strata.JetPoint(np.array([Fraction(0)] * n, dtype=object), np.array([Fraction(0)] * (2 * n), dtype=object), tensors)


def perturbed_jet(n, r, rng):
    """Lagrangian jet with A_2 chosen so that tau~^2 is a nonzero element of T_2 on the kernel."""
    space = symplectic.SymplecticSpace(n)
    jet = lagrangian_jet(n, r)
    basis = symgroup.t_space_basis(2, n, 1).basis
    target = basis[0].data * 0
    for T in basis:
        target = target + T.data * Fraction(int(rng.integers(1, 5)))
    A2 = tau.tau_solve_for_As(space, jet.A[:1], MultiTensor(target))
    jet.A[1] = A2
    return jet


def _scenario_suite(rng):
    t0 = time.perf_counter()
    members = []
    for n in (2, 3):
        space = symplectic.SymplecticSpace(n)
        jet = lagrangian_jet(n, 4)
        for r in range(1, 5):
            res = strata.stratum_member(space, jet, c=n, r=r)
            members.append(res["member"])
    failing = []
    for n in (2, 3):
        space = symplectic.SymplecticSpace(n)
        res = strata.stratum_member(space, perturbed_jet(n, 4, rng), c=n, r=4)
        failing.append(res["failing_level"])
    elapsed = time.perf_counter() - t0
    ok = all(members) and failing == [2, 2] and elapsed <= 30
    return ok, f"Lagrangian member r=1..4 {sum(members)}/{len(members)}, perturbed failing levels {failing}, {elapsed:.1f}s of 30s"


def criterion_10(seed=10):
    return _timed(10, "end-to-end stratum", _scenario_suite, seed)


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_all(echo=print):
    results = []
    for fn in CRITERIA:
        res = fn()
        if echo:
            echo(res.line())
        results.append(res)
    return results

"""Psi-charts, the operator F_Psi, the tensors tau~^{Psi,s} and the strata K_c^{r,Psi}.

Chart conventions.  P = [Y0 | Y1] has the kernel basis of A*omega first, and
Q = [V0 | V1] the model splitting of V.  With psi_0, psi_1 sending the i-th
basis vector of V^i to the i-th basis vector of Y^i,

    Psi_Z = P [[I, 0], [D(Z), I]] Q^-1,   D(Z) = -G11^-1 G10,   G = P^T (Z^T J Z) P.

Derivatives are computed with hyper-dual numbers.  Each nesting level of the
recursion differentiates in its own generator, so an input may already carry
the generators of the levels above it.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import itertools

import numpy as np

from . import linalg
from .errors import ChartDomainError, DimensionMismatch, DomainError, IdentityViolation
from .scalars import HyperDual, deriv, deriv_array, is_float, standard_part
from .symgroup import MAX_S, idempotent_pair, project_data, scalar_t_dim, t_dim
from .symplectic import SymplecticSpace, is_injective, kernel_of_form, map_scale, pullback_form
from .tau import dense_family, shifted_family, tau_data
from .tensors import SymTensor, contract, pullback_data


@dataclass(frozen=True, eq=False)
class PsiChart:
    space: SymplecticSpace
    base: np.ndarray  # (2n, d)
    c: int
    P: np.ndarray
    P_inv: np.ndarray
    Q: np.ndarray
    Q_inv: np.ndarray
    B11: np.ndarray
    tol: float = None

    @property
    def d(self):
        return self.base.shape[1]

    @property
    def Y0(self):
        return self.P[:, : self.c]

    @property
    def Y1(self):
        return self.P[:, self.c :]

    @property
    def V0(self):
        return self.Q[:, : self.c]

    @property
    def V1(self):
        return self.Q[:, self.c :]


def _matrix(cols, d, kind=None):
    if not cols:
        return linalg.zeros((d, 0), kind)
    return np.array([list(v) for v in cols], dtype=object).T.reshape(d, len(cols))


def psi_chart(space, A, c, V0=None, tol=None):
    """Chart centred at A in K_c; ``V0`` is a (d, c) matrix, default the first c coordinate vectors."""
    A = np.asarray(A, dtype=object)
    if A.ndim != 2 or A.shape[0] != space.dim:
        raise DimensionMismatch(f"A must have {space.dim} rows")
    d = A.shape[1]
    if not is_injective(A, tol):
        raise DomainError("A is not injective")
    nullity, kernel = kernel_of_form(pullback_form(space, A), tol, map_scale(A), space.dim)
    if nullity != c:
        raise DomainError(f"A lies in K_{nullity}, not K_{c}")
    floating = any(is_float(x) for x in A.flat)
    kind = float if floating else None
    Y1 = linalg.complement_basis(kernel, d)
    P = _matrix(list(kernel) + list(Y1), d, kind)
    if V0 is None:
        V0 = linalg.identity(d, kind)[:, :c]
    V0 = np.asarray(V0, dtype=object).reshape(d, c)
    V1 = linalg.complement_basis([V0[:, i] for i in range(c)], d)
    Q = np.concatenate([V0, _matrix(V1, d, kind)], axis=1)
    if linalg.rank(Q, tol) != d:
        raise DomainError("V0 columns are not independent")
    G = P.T.dot(pullback_form(space, A)).dot(P)
    B11 = G[c:, c:]
    if d - c and linalg.rank(B11, tol, map_scale(A)) != d - c:
        raise IdentityViolation("lower-right block of A*JA is singular at the chart base")
    return PsiChart(space, A, c, P, linalg.inverse(P, tol), Q, linalg.inverse(Q, tol), B11, tol)


def _as_map(Z):
    Z = np.asarray(Z, dtype=object)
    return Z


def d_matrix(chart, Z):
    """D(Z) : Y0 -> Y1 in the chosen bases, shape (d - c, c)."""
    Z = _as_map(Z)
    c, d = chart.c, chart.d
    G = chart.P.T.dot(pullback_form(chart.space, Z)).dot(chart.P)
    G11 = G[c:, c:]
    G10 = G[c:, :c]
    if d == c:
        return linalg.zeros((0, c))
    try:
        inv = linalg.inverse(G11, chart.tol, map_scale(Z))
    except ZeroDivisionError:
        raise ChartDomainError("Z is outside the chart domain: the lower-right block is singular") from None
    return -inv.dot(G10)


def _lower_block(D, c, d):
    L = linalg.identity(d)
    L = L.astype(object)
    if d > c and c:
        L[c:, :c] = D
    return L


def psi_matrix(chart, Z):
    D = d_matrix(chart, Z)
    return chart.P.dot(_lower_block(D, chart.c, chart.d)).dot(chart.Q_inv)


def psi_apply(chart, Z, v):
    v = np.asarray(v, dtype=object)
    if v.shape != (chart.d,):
        raise DimensionMismatch(f"vector must have length {chart.d}")
    return psi_matrix(chart, Z).dot(v)


def kernel_image(chart, Z):
    """Psi_Z applied to the basis of V0, as a (d, c) matrix: P [[I], [D(Z)]]."""
    D = d_matrix(chart, Z)
    c = chart.c
    K = chart.P[:, :c]
    if chart.d > c and c:
        K = K + chart.P[:, c:].dot(D)
    return K


def transition(chart, Z, Z0):
    """Psi_Z o Psi_{Z0}^-1 = P [[I, 0], [D(Z) - D(Z0), I]] P^-1."""
    c, d = chart.c, chart.d
    delta = d_matrix(chart, Z) - d_matrix(chart, Z0)
    return chart.P.dot(_lower_block(delta, c, d)).dot(chart.P_inv)


def schur_block(chart, Z):
    """C00 + C10^T (B11 + C11)^-1 C10; its vanishing cuts out K_c near the base."""
    c, d = chart.c, chart.d
    G = chart.P.T.dot(pullback_form(chart.space, Z)).dot(chart.P)
    if d == c:
        return G[:c, :c]
    try:
        inv = linalg.inverse(G[c:, c:], chart.tol, map_scale(Z))
    except ZeroDivisionError:
        raise ChartDomainError("Z is outside the chart domain") from None
    return G[:c, :c] + G[c:, :c].T.dot(inv).dot(G[c:, :c])


# F_Psi and the recursion -------------------------------------------------------


def f_psi_direction(eta, chart, arrs, v, level=0, parts="both"):
    """(F_Psi eta)(. , v, .) as an array over the remaining s+1 slots.

    ``eta(family, level)`` returns the scalar array (d,)*(s+1) of a family of s
    dense tensors; ``arrs`` holds A_1..A_{s+1}.  ``parts`` selects the family
    term, the chart-correction term, or their sum.
    """
    s = len(arrs) - 1
    if s < 2:
        raise DomainError("F_Psi acts on families with s >= 2")
    v = np.asarray(v, dtype=object)
    shifted = shifted_family(arrs, v, level)
    A1 = arrs[0].T
    if parts == "both":
        # the defining formula: differentiate M(t)^* eta(shifted family) in one pass
        M = transition(chart, shifted[0].T, A1)
        return deriv_array(pullback_data(M, eta(shifted, level + 1), s + 1), level)
    if parts == "family":
        return deriv_array(eta(shifted, level + 1), level)
    if parts == "correction":
        M = transition(chart, shifted[0].T, A1)
        base = eta(list(arrs[:s]), level + 1)
        return deriv_array(pullback_data(M, base, s + 1), level)
    raise DomainError(f"unknown part {parts!r}")


def f_psi_data(eta, chart, arrs, level=0, parts="both"):
    """Full (F_Psi eta), shape (d,)*(s+2), the new argument in slot s."""
    s = len(arrs) - 1
    d = arrs[0].shape[0]
    floating = any(is_float(x) for x in arrs[0].flat)
    cols = []
    for j in range(d):
        e = linalg.identity(d, float if floating else None)[j]
        cols.append(f_psi_direction(eta, chart, arrs, e, level, parts))
    # stack the directions at position s
    return np.stack(cols, axis=s)


def f_psi(eta, chart, A, v, args, level=0, parts="both"):
    """Value (F_Psi eta)_{A_1..A_{s+1}}(v_0, .., v_{s-1}, v, v_s)."""
    arrs = dense_family(A)
    arr = f_psi_direction(eta, chart, arrs, v, level, parts)
    return contract(arr, [np.asarray(a, dtype=object) for a in args])[()]


def tau_family(space):
    J = space.matrix

    def eta(family, level):
        return tau_data(family, J)

    return eta


def tau_tilde_data(chart, arrs, level=0):
    """Scalar array of tau~^{Psi,s} for the dense family A_1..A_s."""
    s = len(arrs)
    if s < 2:
        raise DomainError("tau~ needs s >= 2")
    if s > MAX_S:
        raise DomainError(f"recursion depth s = {s} exceeds the supported range")
    if s == 2:
        return tau_data(arrs, chart.space.matrix)

    def eta(family, lv):
        return tau_tilde_data(chart, family, lv)

    raw = f_psi_data(eta, chart, arrs, level)
    _, ep = idempotent_pair(s)
    return project_data(ep, raw[..., None])[..., 0]


def tau_tilde(chart, A):
    from .tensors import MultiTensor

    arrs = dense_family(A)
    return MultiTensor.from_scalar_array(tau_tilde_data(chart, arrs))


# jets and membership -----------------------------------------------------------


@dataclass(eq=False)
class JetPoint:
    x: np.ndarray
    y: np.ndarray
    A: list = field(default_factory=list)

    @property
    def order(self):
        return len(self.A)

    @property
    def d(self):
        return self.A[0].d

    def linear_map(self):
        return dense_of(self.A[0]).T

    def dense(self, r=None):
        return [dense_of(a) for a in self.A[: r or len(self.A)]]


def dense_of(a):
    if isinstance(a, SymTensor):
        return a.dense()
    return np.asarray(a, dtype=object)


def _vanishes(arr, tol, scale):
    for x in arr.flat:
        x0 = standard_part(x)
        if is_float(x0):
            if abs(x0) > (tol if tol is not None else 1e-9) * scale:
                return False
        elif x0 != 0:
            return False
    return True


def jet_scale(arrs):
    m = max((abs(float(standard_part(x))) for a in arrs for x in a.flat), default=0.0)
    return (m or 1.0) ** 2


def stratum_member(space, jet, chart=None, c=None, r=1, tol=None):
    """Membership of (A_1..A_r) in K_c^{r,Psi}.

    Returns {"member", "failing_level"}; failing_level 1 means A_1 is not in K_c.
    """
    if jet.order < r:
        raise DomainError(f"jet has order {jet.order} < r = {r}")
    arrs = dense_family(jet.A[:r])
    A1 = arrs[0].T
    if A1.shape[0] != space.dim:
        raise DimensionMismatch("jet does not take values in the symplectic space")
    scale = map_scale(A1)
    if not is_injective(A1, tol):
        return {"member": False, "failing_level": 1}
    nullity, kernel = kernel_of_form(pullback_form(space, A1), tol, scale, space.dim)
    if c is None:
        c = chart.c if chart is not None else nullity
    if nullity != c:
        return {"member": False, "failing_level": 1}
    if chart is None:
        chart = psi_chart(space, A1, c, tol=tol)
    d_matrix(chart, A1)  # raises when A_1 leaves the chart domain
    K = _matrix(kernel, A1.shape[1])
    big = jet_scale(arrs)
    for s in range(2, r + 1):
        T = tau_tilde_data(chart, arrs[:s])
        restricted = pullback_data(K, T[..., None], s + 1) if c else np.zeros(0)
        if not _vanishes(restricted, tol, big):
            return {"member": False, "failing_level": s}
    return {"member": True, "failing_level": None}


def stratum_codim(c, r, w):
    if c < 0 or r < 1:
        raise DomainError("need c >= 0 and r >= 1")
    total = c * (c - 1) // 2
    for s in range(2, r + 1):
        total += t_dim(s, c, w) if c else 0
    return total


def scalar_stratum_codim(c, r):
    total = c * (c - 1) // 2
    for s in range(2, r + 1):
        total += scalar_t_dim(s, c) if c else 0
    return total


def defining_map(chart, arrs, level=0):
    """Components of the local defining map of K_c^{r,Psi} at the family A_1..A_r.

    The Schur block (upper-triangular entries) followed by iota* Psi_{A_1}^* tau~^s
    on V0 for s = 2..r.
    """
    c = chart.c
    Z = arrs[0].T
    comps = []
    S = schur_block(chart, Z)
    for i, j in itertools.combinations(range(c), 2):
        comps.append(S[i, j])
    if len(arrs) >= 2 and c:
        K = kernel_image(chart, Z)
        for s in range(2, len(arrs) + 1):
            T = tau_tilde_data(chart, arrs[:s], level)
            comps.extend(pullback_data(K, T[..., None], s + 1).flat)
    return comps


def transversality_check(emb, x, chart=None, c=None, r=1, tol=None):
    """Rank of the derivative, along source directions, of the defining map at j^r f(x)."""
    from .embeddings import embedding_space, jet_eval

    space = embedding_space(emb)
    jet = jet_eval(emb, x, r + 1)
    arrs = jet.dense(r + 1)
    A1 = arrs[0].T
    nullity, _ = kernel_of_form(pullback_form(space, A1), tol, map_scale(A1), space.dim)
    if c is None:
        c = chart.c if chart is not None else nullity
    d = A1.shape[1]
    codim = scalar_stratum_codim(c, r)
    if nullity != c:
        raise DomainError(f"the point lies in K_{nullity}, not K_{c}")
    if chart is None:
        chart = psi_chart(space, A1, c, tol=tol)
    member = stratum_member(space, jet, chart, c, r, tol)["member"]
    floating = any(is_float(v) for a in arrs for v in a.flat)
    rows = None
    cols = []
    for j in range(d):
        e = linalg.identity(d, float if floating else None)[j]
        shifted = shifted_family(arrs, e, 0)
        comps = defining_map(chart, shifted, 1)
        cols.append([deriv(v, 0) for v in comps])
        rows = len(comps)
    if not rows:
        rank = 0
    else:
        M = np.array(cols, dtype=object).T.reshape(rows, d)
        if floating:
            M = np.array([[float(standard_part(v)) for v in row] for row in M], dtype=object)
            # entries are products of jet entries, so measure them against that size
            m = max(1.0, max(abs(float(standard_part(v))) for a in arrs for v in a.flat))
            scale = m ** (r + 2)
            rank = linalg.rank(M, tol, scale)
        else:
            rank = linalg.rank(M)
    return {
        "rank": rank,
        "codim": codim,
        "full": rank == min(codim, d),
        "transverse": rank == codim,
        "member": member,
    }


def f_psi_direction_fd(eta, chart, arrs, v, h=1e-6):
    """Symmetric difference quotient of t -> M(t)^* eta(shifted family at t), float data."""
    s = len(arrs) - 1
    v = np.asarray(v, dtype=object)
    A1 = arrs[0].T

    def at(t):
        fam = [arrs[j] + t * contract(arrs[j + 1], [v]) for j in range(s)]
        M = transition(chart, fam[0].T, A1)
        return pullback_data(M, eta(fam, 0), s + 1)

    return (at(h) - at(-h)) / (2 * h)

"""The standard symplectic space and the strata K_c of injective linear maps.

Vectors of W = R^{2n} are ordered (q_1..q_n, p_1..p_n), so that
omega(e_i, e_{n+i}) = 1.  A linear map A : R^d -> R^{2n} is a (2n, d) object
array.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import itertools

import numpy as np

from . import linalg
from .errors import DimensionMismatch, DomainError, IdentityViolation
from .scalars import is_float, random_rational, random_rational_array, standard_part


def standard_form(n, kind=None):
    one = 1.0 if kind is float else Fraction(1)
    J = linalg.zeros((2 * n, 2 * n), kind)
    for i in range(n):
        J[i, n + i] = one
        J[n + i, i] = -one
    return J


@dataclass(frozen=True)
class SymplecticSpace:
    """R^{2n} with the standard form, or a constant skew ``matrix`` override."""

    n: int
    matrix: np.ndarray = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("half-dimension must be positive")
        if self.matrix is None:
            object.__setattr__(self, "matrix", standard_form(self.n))
        else:
            m = np.asarray(self.matrix, dtype=object)
            if m.shape != (2 * self.n, 2 * self.n):
                raise DimensionMismatch(f"form matrix has shape {m.shape}")
            if any(m[i, j] != -m[j, i] for i in range(2 * self.n) for j in range(2 * self.n)):
                raise DomainError("form matrix is not skew-symmetric")
            if linalg.rank(m) != 2 * self.n:
                raise DomainError("form matrix is degenerate")
            object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return 2 * self.n

    @property
    def is_standard(self):
        return all(
            self.matrix[i, j] == v for (i, j), v in np.ndenumerate(standard_form(self.n))
        )


def omega_pair(P, Q, form):
    """omega applied to the last axes of P and Q; leading axes are kept (P's first)."""
    P = np.asarray(P, dtype=object)
    Q = np.asarray(Q, dtype=object)
    PJ = np.tensordot(P, form, axes=([-1], [0]))
    return np.tensordot(PJ, Q, axes=([-1], [-1]))


def omega_eval(space, w1, w2):
    w1 = np.asarray(w1, dtype=object)
    w2 = np.asarray(w2, dtype=object)
    if w1.shape != (space.dim,) or w2.shape != (space.dim,):
        raise DimensionMismatch(f"vectors must have length {space.dim}")
    return omega_pair(w1, w2, space.matrix)[()]


def _check_map(space, A):
    A = np.asarray(A, dtype=object)
    if A.ndim != 2 or A.shape[0] != space.dim:
        raise DimensionMismatch(f"linear map must have {space.dim} rows, got shape {A.shape}")
    return A


def pullback_form(space, A):
    """Matrix of A*omega, i.e. A^T J A with entries omega(A e_i, A e_j)."""
    A = _check_map(space, A)
    return A.T.dot(space.matrix).dot(A)


def map_scale(A):
    """Natural size of an entry of A*omega, used as the float pivot scale."""
    A = np.asarray(A, dtype=object)
    m = max((abs(standard_part(x)) for x in A.flat), default=0.0)
    return float(m) ** 2 or 1.0


def _check_skew(S, tol, scale):
    d = S.shape[0]
    floating = any(is_float(x) for x in S.flat)
    for i in range(d):
        for j in range(i, d):
            s = S[i, j] + S[j, i]
            if floating:
                if abs(standard_part(s)) > (tol or 1e-9) * (scale or 1.0):
                    raise DomainError("form is not skew-symmetric")
            elif s != 0:
                raise DomainError("form is not skew-symmetric")


def kernel_of_form(skew, tol=None, scale=None, codomain_dim=None):
    """Nullity and a reduced-echelon kernel basis of a skew matrix.

    ``codomain_dim`` (2n, when the form was pulled back by a known injective
    map) enables the bound nullity <= 2n - d.
    """
    S = np.asarray(skew, dtype=object)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch("form matrix must be square")
    d = S.shape[0]
    _check_skew(S, tol, scale)
    basis = linalg.nullspace(S, tol, scale) if d else []
    c = len(basis)
    if (d - c) % 2:
        raise IdentityViolation(f"skew form with odd rank {d - c}")
    if codomain_dim is not None and c > codomain_dim - d:
        raise IdentityViolation(f"nullity {c} exceeds 2n - d = {codomain_dim - d}")
    return c, basis


def is_injective(A, tol=None):
    A = np.asarray(A, dtype=object)
    return linalg.rank(A, tol) == A.shape[1]


def kc_membership(space, A, c, tol=None):
    A = _check_map(space, A)
    if not is_injective(A, tol):
        return False
    nullity, _ = kernel_of_form(pullback_form(space, A), tol, map_scale(A), space.dim)
    return nullity == c


def kc_tangent_space(space, A, tol=None):
    """Linear conditions cutting out T_A K_c inside Hom(V, W).

    Returns ``(constraints, codim)``; ``constraints`` has one row per pair of
    kernel basis vectors and one column per entry of B (row-major over the
    (2n, d) matrix).
    """
    A = _check_map(space, A)
    if not is_injective(A, tol):
        raise DomainError("A is not injective")
    c, kernel = kernel_of_form(pullback_form(space, A), tol, map_scale(A), space.dim)
    if c < 1:
        raise DomainError("A*omega is nondegenerate; A is in no K_c with c >= 1")
    w, d = A.shape
    J = space.matrix
    rows = []
    for a, b in itertools.combinations(range(c), 2):
        v1, v2 = kernel[a], kernel[b]
        Av1 = A.dot(v1)
        Av2 = A.dot(v2)
        # omega(A v1, B v2) + omega(B v1, A v2), linear in the entries B[k, l]
        left = Av1.dot(J)
        right = J.dot(Av2)
        row = np.empty(w * d, dtype=object)
        for k in range(w):
            for l in range(d):
                row[k * d + l] = left[k] * v2[l] + v1[l] * right[k]
        rows.append(row)
    if rows:
        constraints = np.array(rows, dtype=object).reshape(len(rows), w * d)
    else:
        constraints = np.empty((0, w * d), dtype=object)
    codim = linalg.rank(constraints, tol) if rows else 0
    if codim != c * (c - 1) // 2:
        raise IdentityViolation(f"tangent codimension {codim} != c(c-1)/2 for c = {c}")
    return constraints, codim


def tangent_condition(space, A, B, kernel):
    """Values omega(A v1, B v2) + omega(B v1, A v2) over pairs of kernel vectors."""
    out = []
    for v1 in kernel:
        for v2 in kernel:
            out.append(
                omega_eval(space, A.dot(v1), B.dot(v2)) + omega_eval(space, B.dot(v1), A.dot(v2))
            )
    return out


# random constructions --------------------------------------------------------


def random_symplectic(n, rng, steps=3):
    """Random rational symplectic matrix: a product of symplectic shears and a block GL map."""
    I = linalg.identity(n)
    Z = linalg.zeros((n, n))
    M = linalg.identity(2 * n)
    for _ in range(steps):
        S = random_rational_array(rng, (n, n), 3, 2)
        S = S + S.T
        upper = np.block([[I, S], [Z, I]])
        S = random_rational_array(rng, (n, n), 3, 2)
        S = S + S.T
        lower = np.block([[I, Z], [S, I]])
        M = M.dot(upper).dot(lower)
    while True:
        G = random_rational_array(rng, (n, n), 3, 2)
        if linalg.det(G) != 0:
            break
    Ginv_T = linalg.inverse(G).T
    return M.dot(np.block([[G, Z], [Z, Ginv_T]]))


def random_invertible(d, rng, num=5, den=3):
    while True:
        G = random_rational_array(rng, (d, d), num, den)
        if linalg.det(G) != 0:
            return G


def random_kc_map(n, d, c, rng, steps=3):
    """Random injective A : R^d -> R^{2n} with dim ker(A*omega) = c.

    Fewer shear ``steps`` give smaller, better conditioned entries.
    """
    if c < 0 or (d - c) % 2 or c + (d - c) // 2 > n:
        raise DomainError(f"no injective map R^{d} -> R^{2 * n} has a {c}-dimensional kernel")
    m = (d - c) // 2
    model = linalg.zeros((2 * n, d))
    for i in range(c):
        model[i, i] = Fraction(1)
    for j in range(m):
        model[c + j, c + 2 * j] = Fraction(1)
        model[n + c + j, c + 2 * j + 1] = Fraction(1)
    return random_symplectic(n, rng, steps).dot(model).dot(random_invertible(d, rng))


def random_map(n, d, rng):
    return random_rational_array(rng, (2 * n, d))


def perturb_within_kc(A, n, rng, size=8):
    """A nearby element S A G of the same stratum (S symplectic, G invertible)."""
    d = A.shape[1]
    I = linalg.identity(n)
    Z = linalg.zeros((n, n))
    S = random_rational_array(rng, (n, n), 1, size)
    S = S + S.T
    shear = np.block([[I, S], [Z, I]])
    G = linalg.identity(d) + random_rational_array(rng, (d, d), 1, size)
    while linalg.det(G) == 0:
        G = linalg.identity(d) + random_rational_array(rng, (d, d), 1, size)
    return shear.dot(A).dot(G)


__all__ = [
    "SymplecticSpace",
    "standard_form",
    "omega_pair",
    "omega_eval",
    "pullback_form",
    "kernel_of_form",
    "kc_membership",
    "kc_tangent_space",
    "random_kc_map",
    "random_symplectic",
    "random_rational",
]

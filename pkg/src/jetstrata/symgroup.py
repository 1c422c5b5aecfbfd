"""The group algebra of S_{s+1}, the idempotent pair (e, e_perp) and the
projection onto the tensors obeying (i)-(iii).

Conventions.  A permutation is a tuple ``p`` of images, p[k] = p(k).  It acts
on a multilinear map by (p . T)(v_0, ..., v_s) = T(v_{p^-1(0)}, ..., v_{p^-1(s)}),
and the product is read so that this is a left action: (p q) . T = p . (q . T),
which means (p q)(k) = q(p(k)).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools
from math import factorial, gcd, lcm

import numpy as np

from . import linalg
from .errors import ConfigurationTooLarge, DimensionMismatch, DomainError, IdentityViolation
from .tensors import MultiTensor, permute_data

MAX_S = 5
SIZE_GUARD = 10**6


# permutations ----------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricGroup:
    m: int
    perms: tuple
    index: dict
    table: np.ndarray  # table[i, j] = index of perms[i] * perms[j]
    inverse: np.ndarray

    @property
    def order(self):
        return len(self.perms)

    @property
    def identity(self):
        return 0


@lru_cache(maxsize=None)
def symmetric_group(m):
    perms = tuple(itertools.permutations(range(m)))
    P = np.array(perms, dtype=np.int64).reshape(len(perms), m)
    weights = m ** np.arange(m - 1, -1, -1, dtype=np.int64)
    codes = P.dot(weights)
    N = len(perms)
    table = np.empty((N, N), dtype=np.int64)
    for i in range(N):
        # (p_i p_j)(k) = p_j(p_i(k)) for every j at once
        comp = P[:, P[i]]
        table[i] = np.searchsorted(codes, comp.dot(weights))
    inv = np.argsort(P, axis=1)
    inverse = np.searchsorted(codes, inv.dot(weights))
    index = {p: i for i, p in enumerate(perms)}
    return SymmetricGroup(m, perms, index, table, inverse)


def compose(p, q):
    """The product p q, i.e. k -> q(p(k))."""
    return tuple(q[p[k]] for k in range(len(p)))


def transposition(m, a, b):
    p = list(range(m))
    p[a], p[b] = b, a
    return tuple(p)


def three_cycle(m, a, b, c):
    p = list(range(m))
    p[a], p[b], p[c] = b, c, a
    return tuple(p)


def generator_perms(s):
    """t_1..t_{s-2} (adjacent middle swaps), t_s (swap 0 and s), u (cycle on 0, 1, s)."""
    m = s + 1
    ts = [transposition(m, i, i + 1) for i in range(1, s - 1)]
    return ts, transposition(m, 0, s), three_cycle(m, 0, 1, s)


# group algebra ---------------------------------------------------------------


class GroupAlgebraElement:
    """Coefficient vector over the (s+1)! permutations of {0, .., s}."""

    __slots__ = ("s", "coeffs")

    def __init__(self, s, coeffs):
        self.s = s
        coeffs = np.asarray(coeffs, dtype=object)
        if coeffs.shape != (factorial(s + 1),):
            raise DimensionMismatch(f"need {factorial(s + 1)} coefficients")
        self.coeffs = coeffs

    @property
    def group(self):
        return symmetric_group(self.s + 1)

    @classmethod
    def zero(cls, s):
        c = np.empty(factorial(s + 1), dtype=object)
        c.fill(Fraction(0))
        return cls(s, c)

    @classmethod
    def delta(cls, s, perm, coeff=Fraction(1)):
        x = cls.zero(s)
        x.coeffs[symmetric_group(s + 1).index[tuple(perm)]] = coeff
        return x

    @classmethod
    def one(cls, s):
        return cls.delta(s, tuple(range(s + 1)))

    @classmethod
    def from_terms(cls, s, terms):
        x = cls.zero(s)
        idx = symmetric_group(s + 1).index
        for perm, c in terms:
            x.coeffs[idx[tuple(perm)]] += c
        return x

    def terms(self):
        perms = self.group.perms
        return [(perms[i], c) for i, c in enumerate(self.coeffs) if c != 0]

    def _check(self, other):
        if not isinstance(other, GroupAlgebraElement) or other.s != self.s:
            raise DimensionMismatch("group algebra elements over different groups")

    def __add__(self, other):
        self._check(other)
        return GroupAlgebraElement(self.s, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return GroupAlgebraElement(self.s, self.coeffs - other.coeffs)

    def __neg__(self):
        return GroupAlgebraElement(self.s, -self.coeffs)

    def scale(self, a):
        return GroupAlgebraElement(self.s, self.coeffs * a)

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return group_multiply(self, other)
        return NotImplemented

    def inner(self, other):
        self._check(other)
        return sum((a * b for a, b in zip(self.coeffs, other.coeffs) if a != 0 and b != 0), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.s == other.s and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __repr__(self):
        return f"GroupAlgebraElement(s={self.s}, nnz={sum(1 for c in self.coeffs if c != 0)})"


def _integer_scaled(coeffs):
    """(integer numerators, common denominator) for an exact coefficient vector."""
    fracs = [Fraction(c) for c in coeffs]
    den = 1
    for f in fracs:
        den = lcm(den, f.denominator)
    nums = np.array([f.numerator * (den // f.denominator) for f in fracs], dtype=object)
    return nums, den


def group_multiply(x, y):
    """Convolution product in the group algebra."""
    x._check(y)
    table = x.group.table
    if any(isinstance(c, float) for c in itertools.chain(x.coeffs, y.coeffs)):
        out = np.zeros(len(x.coeffs), dtype=object)
        for i, a in enumerate(x.coeffs):
            if a != 0:
                out[table[i]] += a * y.coeffs
        return GroupAlgebraElement(x.s, out)
    xn, xd = _integer_scaled(x.coeffs)
    yn, yd = _integer_scaled(y.coeffs)
    out = np.zeros(len(xn), dtype=object)
    for i, a in enumerate(xn):
        if a:
            # table[i] is a permutation of the indices, so the scatter is collision-free
            out[table[i]] += a * yn
    den = xd * yd
    return GroupAlgebraElement(x.s, np.array([Fraction(int(v), den) for v in out], dtype=object))


def ideal_generators(s):
    """The elements (1 - t_i), (1 + t_s), (1 + u + u^2) generating the left ideal I."""
    m = s + 1
    ident = tuple(range(m))
    ts, t_s, u = generator_perms(s)
    gens = [GroupAlgebraElement.from_terms(s, [(ident, 1), (t, -1)]) for t in ts]
    gens.append(GroupAlgebraElement.from_terms(s, [(ident, 1), (t_s, 1)]))
    gens.append(GroupAlgebraElement.from_terms(s, [(ident, 1), (u, 1), (compose(u, u), 1)]))
    return gens


def random_ideal_element(s, rng, terms=4):
    """A random element sum_j y_j g_j of I with sparse random y_j."""
    from .scalars import random_rational

    gens = ideal_generators(s)
    N = factorial(s + 1)
    total = GroupAlgebraElement.zero(s)
    for _ in range(terms):
        y = GroupAlgebraElement.zero(s)
        for i in rng.choice(N, size=min(3, N), replace=False):
            y.coeffs[int(i)] = random_rational(rng)
        total = total + group_multiply(y, gens[int(rng.integers(len(gens)))])
    return total


# the idempotent pair ---------------------------------------------------------


def _orthogonal_complement_basis(s):
    """Basis of I^perp = {y : <y, p g> = 0 for all p and generators g}, plus class data.

    <y, p g> = sum_h g_h y_{p h}.  The two-term generators identify y on
    right cosets of H = <t_1, .., t_{s-2}, t_s> up to sign; the three-term
    generator then gives a small dense system on the coset values.
    """
    G = symmetric_group(s + 1)
    N = G.order
    ts, t_s, u = generator_perms(s)
    right = [(G.index[t], 1) for t in ts] + [(G.index[t_s], -1)]
    cls = np.full(N, -1, dtype=np.int64)
    sign = np.zeros(N, dtype=np.int64)
    classes = []
    forced_zero = []
    for start in range(N):
        if cls[start] >= 0:
            continue
        c = len(classes)
        members = [start]
        cls[start], sign[start] = c, 1
        consistent = True
        head = 0
        while head < len(members):
            p = members[head]
            head += 1
            for t, sg in right:
                q = G.table[p, t]
                if cls[q] < 0:
                    cls[q], sign[q] = c, sign[p] * sg
                    members.append(q)
                elif sign[q] != sign[p] * sg:
                    consistent = False
        classes.append(members)
        forced_zero.append(not consistent)
    K = len(classes)
    iu = G.index[u]
    iu2 = G.index[compose(u, u)]
    rows = set()
    for p in range(N):
        row = [0] * K
        for q in (p, G.table[p, iu], G.table[p, iu2]):
            if not forced_zero[cls[q]]:
                row[cls[q]] += int(sign[q])
        if any(row):
            rows.add(tuple(row))
    for c in range(K):
        if forced_zero[c]:
            row = [0] * K
            row[c] = 1
            rows.add(tuple(row))
    if rows:
        M = np.array([[Fraction(x) for x in r] for r in sorted(rows)], dtype=object)
        null = linalg.nullspace(M)
    else:
        null = [linalg.identity(K)[j] for j in range(K)]
    sizes = [len(m) for m in classes]
    return cls, sign, null, sizes


@lru_cache(maxsize=None)
def idempotent_pair(s):
    """(e, e_perp) with 1 = e + e_perp, e in I and e_perp the orthogonal projection of 1 onto I^perp."""
    if s < 2:
        raise DomainError("idempotents are defined for s >= 2")
    if s > MAX_S:
        raise ConfigurationTooLarge(f"s = {s} exceeds the supported range 2..{MAX_S}")
    cls, sign, null, sizes = _orthogonal_complement_basis(s)
    N = len(cls)
    K = len(sizes)
    r = len(null)
    if r == 0:
        e_perp = GroupAlgebraElement.zero(s)
    else:
        Nm = np.array(null, dtype=object).reshape(r, K).T  # K x r, columns span I^perp in class coordinates
        D = np.array([Fraction(z) for z in sizes], dtype=object)
        gram = Nm.T.dot(D[:, None] * Nm)
        # <full basis vector, delta_identity> = sign(identity) * Nm[class(identity)]
        rhs = Nm[cls[0]] * int(sign[0])
        coef = linalg.solve(gram, rhs)
        class_values = Nm.dot(coef)
        e_perp = GroupAlgebraElement(
            s, np.array([class_values[cls[p]] * int(sign[p]) for p in range(N)], dtype=object)
        )
    e = GroupAlgebraElement.one(s) - e_perp
    return e, e_perp


def idempotent_pair_normal_equations(s):
    """Reference computation: project 1 onto the nullspace of the full spanning set {p g}."""
    G = symmetric_group(s + 1)
    rows = []
    for g in ideal_generators(s):
        gt = g.terms()
        for p in G.perms:
            rows.append(GroupAlgebraElement.from_terms(s, [(compose(p, h), c) for h, c in gt]).coeffs)
    S = np.array(rows, dtype=object)
    basis = linalg.nullspace(S)
    one = GroupAlgebraElement.one(s).coeffs
    if not basis:
        return GroupAlgebraElement.one(s), GroupAlgebraElement.zero(s)
    B = np.array(basis, dtype=object).T
    coef = linalg.solve(B.T.dot(B), B.T.dot(one))
    e_perp = GroupAlgebraElement(s, B.dot(coef))
    return GroupAlgebraElement.one(s) - e_perp, e_perp


def idempotent_report(s, samples=0, rng=None):
    e, ep = idempotent_pair(s)
    one = GroupAlgebraElement.one(s)
    zero = GroupAlgebraElement.zero(s)
    report = {
        "sum": (e + ep) == one,
        "e_idempotent": group_multiply(e, e) == e,
        "e_perp_idempotent": group_multiply(ep, ep) == ep,
        "e_e_perp": group_multiply(e, ep) == zero,
        "e_perp_e": group_multiply(ep, e) == zero,
    }
    if samples:
        report["orthogonal"] = all(
            ep.inner(random_ideal_element(s, rng)) == 0 for _ in range(samples)
        )
    return report


# the projection --------------------------------------------------------------


def act(x, arr):
    """x . T for a group algebra element and an array whose first s+1 axes are arguments."""
    out = None
    for perm, c in x.terms():
        term = permute_data(perm, arr) * c
        out = term if out is None else out + term
    if out is None:
        out = arr * 0
    return out


def project_data(e_perp, arr):
    if arr.ndim - 1 < e_perp.s + 1:
        raise DimensionMismatch("tensor order does not match the projection")
    return act(e_perp, arr)


def project_T(e_perp, T):
    if T.order != e_perp.s + 1:
        raise DimensionMismatch(f"projection for order {e_perp.s + 1} applied to order {T.order}")
    return MultiTensor(project_data(e_perp, T.data))


def projection(s):
    return idempotent_pair(s)[1]


# the spaces T_s ----------------------------------------------------------------


@dataclass(frozen=True)
class TSpaceBasis:
    s: int
    d: int
    w: int
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)


def _guard(s, d, w):
    if s < 2 or d < 1 or w < 1:
        raise DomainError("need s >= 2, d >= 1 and w >= 1")
    if d ** (s + 1) * w > SIZE_GUARD:
        raise ConfigurationTooLarge(f"d^(s+1) w = {d ** (s + 1) * w} exceeds {SIZE_GUARD}")


def _flat(idx, c, d, w):
    f = 0
    for i in idx:
        f = f * d + i
    return f * w + c


def _constraint_rows(s, d, w):
    """Sparse rows g . T = 0 for the generators g, over all basis tuples and W components."""
    m = s + 1
    swaps = [list(range(m)) for _ in range(1, s - 1)]
    for i, src in enumerate(swaps, start=1):
        src[i], src[i + 1] = i + 1, i
    flip = list(range(m))
    flip[0], flip[s] = s, 0
    c1 = list(range(m))
    c1[0], c1[1], c1[s] = s, 0, 1
    c2 = list(range(m))
    c2[0], c2[1], c2[s] = 1, s, 0
    for j in itertools.product(range(d), repeat=m):
        for c in range(w):
            here = _flat(j, c, d, w)

            def at(src):
                return _flat([j[k] for k in src], c, d, w)

            yield _merge([(here, 1), (at(flip), 1)])
            for src in swaps:
                yield _merge([(here, 1), (at(src), -1)])
            yield _merge([(here, 1), (at(c1), 1), (at(c2), 1)])


def _merge(pairs):
    row = {}
    for k, v in pairs:
        row[k] = row.get(k, 0) + v
    return {k: v for k, v in row.items() if v}


def _to_tensor(vec, s, d, w):
    arr = np.empty(d ** (s + 1) * w, dtype=object)
    arr.fill(Fraction(0))
    for k, v in vec.items():
        arr[k] = v
    return MultiTensor(arr.reshape((d,) * (s + 1) + (w,)))


def _constraint_eliminator(s, d, w):
    elim = linalg.SparseEliminator(d ** (s + 1) * w)
    for row in _constraint_rows(s, d, w):
        if row:
            elim.add(row)
    return elim


def projection_matrix_columns(s, d):
    """Columns Pi(E_i), as sparse dicts over flat scalar indices, for each basis tensor E_i."""
    _, ep = idempotent_pair(s)
    terms = ep.terms()
    m = s + 1
    cols = []
    for i in itertools.product(range(d), repeat=m):
        col = {}
        for perm, c in terms:
            # p . E_i = E_{i o p}
            j = _flat([i[perm[k]] for k in range(m)], 0, d, 1)
            col[j] = col.get(j, 0) + c
        cols.append({k: v for k, v in col.items() if v != 0})
    return cols


def t_space_basis(s, d, w, method="constraints"):
    _guard(s, d, w)
    if method == "constraints":
        vecs = _constraint_eliminator(s, d, w).nullspace()
        basis = tuple(_to_tensor(v, s, d, w) for v in vecs)
    elif method == "idempotent":
        if s > MAX_S:
            raise ConfigurationTooLarge(f"s = {s} exceeds the supported range 2..{MAX_S}")
        elim = linalg.SparseEliminator(d ** (s + 1))
        chosen = []
        for col in projection_matrix_columns(s, d):
            if col and elim.add(col):
                chosen.append(col)
        # Pi acts on arguments only, so Pi on Mult(V, W) is Pi on scalars times the identity on W
        basis = tuple(
            _to_tensor({k * w + c: v for k, v in col.items()}, s, d, w) for col in chosen for c in range(w)
        )
    else:
        raise DomainError(f"unknown method {method!r}")
    return TSpaceBasis(s, d, w, basis)


@lru_cache(maxsize=None)
def scalar_t_dim(s, c):
    _guard(s, c, 1)
    elim = _constraint_eliminator(s, c, 1)
    return c ** (s + 1) - elim.rank


@lru_cache(maxsize=None)
def t_dim(s, c, w):
    """dim T_s(R^c, R^w); the W factor is passive, so this is w times the scalar dimension."""
    _guard(s, c, w)
    return w * scalar_t_dim(s, c)


def check_basis(tb):
    from .tau import property_report

    for T in tb.basis:
        if not all(property_report(T.data).values()):
            raise IdentityViolation("basis element violates (i)-(iii)")
    return True

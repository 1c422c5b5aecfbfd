"""Explicit embeddings with computable jets, and pointwise coisotropy tests.

Kinds and parameter blocks:

* ``polynomial``: {"d", "n", "components": [ {"e_1,..,e_d": coeff, ...} ] * 2n}
  (exponent vectors as keys; exact arithmetic for rational coefficients).
* ``graph``: {"d", "n", "g": [ ... ] * (2n - d)}, same table format; f(x) = (x, g(x)).
* ``lagrangian-torus``: {"b": [[b_1, ..], ..], "a": [[a_1, ..], ..] (optional)}; one
  torus per factor, angles theta as source coordinates.
* ``ellipsoid-product``: {"a": [[a_1, ..], ..]}; for a factor with n_j entries the
  source coordinates are theta_1..theta_{n_j}, b_1..b_{n_j - 1}.
* ``torus6``: {"epsilon", "delta"}; the 4-torus {x_1 + x_2 = x_3 = 0} in
  coordinates (x_1, y_1, x_2, y_2, x_3, y_3) with the form
  sum dx_i ^ dy_i + dy_1 ^ (epsilon dx_2 + delta dy_2).

Products place factor j's q-coordinates at a running offset inside
(q_1..q_n) and its p-coordinates at the same offset inside (p_1..p_n).
"""

from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import math

import numpy as np

from . import linalg, taylor
from .errors import DimensionMismatch, DomainError
from .scalars import is_float, parse_scalar, standard_part, to_backend
from .strata import JetPoint
from .symplectic import SymplecticSpace, kernel_of_form, map_scale, pullback_form
from .taylor import TPS
from .tensors import SymTensor, sorted_indices

KINDS = ("polynomial", "graph", "lagrangian-torus", "ellipsoid-product", "torus6")
MAX_JET_ORDER = 7


@dataclass(frozen=True, eq=False)
class EmbeddingSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown embedding kind {self.kind!r}")

    @property
    def d(self):
        return source_dim(self)

    @property
    def n(self):
        return half_dim(self)


# parameter helpers -----------------------------------------------------------


def _factors(values):
    """Accept a flat list (one factor) or a list of lists."""
    values = list(values)
    if values and not isinstance(values[0], (list, tuple)):
        values = [values]
    return [[parse_scalar(x) if not isinstance(x, (float, Fraction)) else x for x in f] for f in values]


def _poly_table(components, d):
    table = []
    for comp in components:
        terms = {}
        for key, coeff in comp.items():
            exps = tuple(int(e) for e in key.split(",")) if isinstance(key, str) else tuple(key)
            if len(exps) != d:
                raise DimensionMismatch(f"exponent {key} has length {len(exps)}, expected {d}")
            terms[exps] = coeff if isinstance(coeff, (Fraction, float)) else parse_scalar(coeff)
        table.append(terms)
    return table


def source_dim(emb):
    p = emb.params
    if emb.kind in ("polynomial", "graph"):
        return int(p["d"])
    if emb.kind == "lagrangian-torus":
        return sum(len(f) for f in _factors(p["b"]))
    if emb.kind == "ellipsoid-product":
        return sum(2 * len(f) - 1 for f in _factors(p["a"]))
    return 4


def half_dim(emb):
    p = emb.params
    if emb.kind in ("polynomial", "graph"):
        return int(p["n"])
    if emb.kind == "lagrangian-torus":
        return sum(len(f) for f in _factors(p["b"]))
    if emb.kind == "ellipsoid-product":
        return sum(len(f) for f in _factors(p["a"]))
    return 3


def torus6_form(epsilon, delta):
    """Constant form matrix in coordinates (x1, y1, x2, y2, x3, y3)."""
    W = linalg.zeros((6, 6), float)
    for i in range(3):
        W[2 * i, 2 * i + 1] = 1.0
    W[1, 2] = float(epsilon)  # dy1 ^ dx2
    W[1, 3] = float(delta)  # dy1 ^ dy2
    return W - W.T


def embedding_space(emb):
    if emb.kind == "torus6":
        return SymplecticSpace(3, torus6_form(emb.params.get("epsilon", math.sqrt(2)), emb.params.get("delta", math.sqrt(3))))
    return SymplecticSpace(half_dim(emb))


def is_exact(emb):
    return emb.kind in ("polynomial", "graph")


# series evaluation -----------------------------------------------------------


def _poly_series(terms, xs, R):
    total = TPS.constant(len(xs), R, Fraction(0))
    for exps, coeff in terms.items():
        m = taylor.monomial(xs, exps)
        total = total + (coeff if m is None else m * coeff)
    return total


def series(emb, x, R):
    """Taylor series of the 2n ambient coordinates of f around x, truncated at degree R."""
    d, n = source_dim(emb), half_dim(emb)
    x = list(x)
    if len(x) != d:
        raise DimensionMismatch(f"point must have {d} coordinates")
    xs = [TPS.variable(d, R, i, x[i]) for i in range(d)]
    p = emb.params
    if emb.kind == "polynomial":
        table = _poly_table(p["components"], d)
        if len(table) != 2 * n:
            raise DimensionMismatch(f"need {2 * n} components")
        return [_poly_series(t, xs, R) for t in table]
    if emb.kind == "graph":
        table = _poly_table(p["g"], d)
        if len(table) != 2 * n - d:
            raise DimensionMismatch(f"graph needs {2 * n - d} components")
        return list(xs) + [_poly_series(t, xs, R) for t in table]
    if emb.kind == "torus6":
        p1, p2, p3, p4 = xs
        zero = TPS.constant(d, R, 0.0)
        return [p1, p2, -p1, p3, zero, p4]
    out = [None] * (2 * n)
    offset = 0
    var = 0
    if emb.kind == "lagrangian-torus":
        for b in _factors(p["b"]):
            for i, bi in enumerate(b):
                theta = xs[var]
                var += 1
                rb = math.sqrt(float(bi))
                out[offset + i] = taylor.cos(theta) * rb
                out[n + offset + i] = taylor.sin(theta) * rb
            offset += len(b)
        return out
    for a in _factors(p["a"]):
        m = len(a)
        thetas = xs[var : var + m]
        bs = xs[var + m : var + 2 * m - 1]
        var += 2 * m - 1
        last = TPS.constant(d, R, 1.0)
        for bi, ai in zip(bs, a):
            last = last - bi * (1.0 / float(ai))
        last = last * float(a[-1])
        radii = list(bs) + [last]
        for i in range(m):
            if float(radii[i].value) <= 0:
                raise DomainError("point outside the chart: action coordinates must be positive")
            r = taylor.sqrt(radii[i])
            out[offset + i] = taylor.cos(thetas[i]) * r
            out[n + offset + i] = taylor.sin(thetas[i]) * r
        offset += m
    return out


def jet_eval(emb, x, r):
    """r-jet (x, f(x), A_1, .., A_r) of the embedding at x."""
    if r < 1 or r > MAX_JET_ORDER:
        raise DomainError(f"jet order must be in 1..{MAX_JET_ORDER}")
    d = source_dim(emb)
    comps = series(emb, x, r)
    w = len(comps)
    tensors = []
    for k in range(1, r + 1):
        entries = {}
        for idx in sorted_indices(d, k):
            entries[idx] = [c.derivative(idx) for c in comps]
        tensors.append(SymTensor(k, d, w, entries))
    y = np.array([c.value for c in comps], dtype=object)
    return JetPoint(np.asarray(list(x), dtype=object), y, tensors)


def evaluate(emb, x):
    return np.array([c.value for c in series(emb, x, 0)], dtype=object)


def tangent_map(emb, x):
    """(2n, d) matrix of df at x."""
    return jet_eval(emb, x, 1).linear_map()


# coisotropy tests --------------------------------------------------------------

STATUSES = ("coisotropic-point", "nowhere-coisotropic-point")


@dataclass(frozen=True, eq=False)
class PointClassification:
    x: tuple
    c: int
    status: str
    kernel: list


def _immersion(emb, x, tol):
    A1 = tangent_map(emb, x)
    if linalg.rank(A1, tol) != A1.shape[1]:
        raise DomainError(f"f is not an immersion at {list(x)}")
    return A1


def classify_point(emb, x, tol=None):
    space = embedding_space(emb)
    A1 = _immersion(emb, x, tol)
    d = A1.shape[1]
    c, kernel = kernel_of_form(pullback_form(space, A1), tol, map_scale(A1), space.dim)
    # T_xN^omega lies in T_xN exactly when the kernel is as large as it can be
    status = "coisotropic-point" if c == space.dim - d else "nowhere-coisotropic-point"
    return PointClassification(tuple(x), c, status, kernel)


def characteristic_distribution(emb, x, tol=None):
    """Ambient basis of f_*(ker f*omega) at x, with its omega-orthogonality residual."""
    space = embedding_space(emb)
    pc = classify_point(emb, x, tol)
    A1 = tangent_map(emb, x)
    vectors = [A1.dot(k) for k in pc.kernel]
    residual = 0.0
    for v in vectors:
        for j in range(A1.shape[1]):
            val = standard_part(v.dot(space.matrix).dot(A1[:, j]))
            residual = max(residual, abs(float(val)))
    return {
        "vectors": vectors,
        "coisotropic": pc.status == "coisotropic-point",
        "residual": residual,
    }


@dataclass(frozen=True, eq=False)
class OneForm:
    """alpha_x(v) = (a + L x) . v in ambient coordinates; d alpha(u, v) = u^T (L^T - L) v."""

    a: np.ndarray
    L: np.ndarray

    def at(self, y):
        return self.a + self.L.dot(y)

    def d_matrix(self):
        return self.L.T - self.L


def constant_form(coeffs):
    a = np.array([float(c) for c in coeffs], dtype=object)
    return OneForm(a, linalg.zeros((len(a), len(a)), float))


def liouville_form(n):
    """(1/2) sum (q_i dp_i - p_i dq_i), whose differential is the standard form."""
    L = linalg.zeros((2 * n, 2 * n), float)
    for i in range(n):
        L[n + i, i] = 0.5
        L[i, n + i] = -0.5
    return OneForm(np.array([0.0] * (2 * n), dtype=object), L)


def parse_one_form(spec, dim):
    if isinstance(spec, (list, tuple)):
        return constant_form(spec)
    if spec == "liouville":
        return liouville_form(dim // 2)
    if isinstance(spec, dict):
        a = spec.get("constant", spec.get("a", [0] * dim))
        L = spec.get("L")
        a = np.array([float(parse_scalar(v)) for v in a], dtype=object)
        L = linalg.zeros((dim, dim), float) if L is None else np.array(
            [[float(parse_scalar(v)) for v in row] for row in L], dtype=object
        )
        if spec.get("kind") == "liouville":
            return liouville_form(dim // 2)
        return OneForm(a, L)
    raise DomainError(f"cannot read a 1-form from {spec!r}")


def wedge_top(one_forms, two_forms):
    """(a_1 ^ .. ^ a_k ^ W_1 ^ .. ^ W_m)(e_1, .., e_d) for d = k + 2m.

    One-forms are vectors and two-forms matrices on R^d; the value is the sum
    over permutations divided by the product of the form degrees' factorials.
    """
    k, m = len(one_forms), len(two_forms)
    d = k + 2 * m
    total = 0.0
    for perm in itertools.permutations(range(d)):
        sign = _perm_sign(perm)
        val = 1.0
        for i, a in enumerate(one_forms):
            val *= float(a[perm[i]])
        for j, Wm in enumerate(two_forms):
            val *= float(Wm[perm[k + 2 * j], perm[k + 2 * j + 1]])
        total += sign * val
    return total / (2.0**m)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def stability_check(emb, alphas, samples, tol=1e-10):
    """Kernel and volume conditions for 1-forms alpha_1..alpha_k at sample points."""
    space = embedding_space(emb)
    d = source_dim(emb)
    k = space.dim - d
    if len(alphas) != k:
        raise DomainError(f"need {k} one-forms (the codimension), got {len(alphas)}")
    n = space.n
    kernel_ok = True
    volume_ok = True
    volumes = []
    for x in samples:
        jet = jet_eval(emb, x, 1)
        A1 = np.array([[float(standard_part(v)) for v in row] for row in jet.linear_map()], dtype=object)
        y = np.array([float(v) for v in jet.y], dtype=object)
        Wn = A1.T.dot(space.matrix).dot(A1)
        _, kernel = kernel_of_form(Wn, None, map_scale(A1), space.dim)
        for alpha in alphas:
            dA = A1.T.dot(alpha.d_matrix()).dot(A1)
            for v in kernel:
                if max((abs(float(t)) for t in dA.dot(v)), default=0.0) > tol:
                    kernel_ok = False
        ones = [A1.T.dot(alpha.at(y)) for alpha in alphas]
        vol = wedge_top(ones, [Wn] * (n - k))
        volumes.append(vol)
        if abs(vol) <= tol:
            volume_ok = False
    return {"kernel_condition": kernel_ok, "volume_condition": volume_ok, "volumes": volumes}


def lagrangian_check(emb, samples, tol=1e-12):
    """f*omega vanishes at the samples (and L_b lies in E_a when a is given)."""
    space = embedding_space(emb)
    d = source_dim(emb)
    if d != space.n:
        raise DomainError(f"Lagrangian check needs d = n, got d = {d}, n = {space.n}")
    lagrangian = True
    contained = None
    for x in samples:
        A1 = tangent_map(emb, x)
        S = pullback_form(space, A1)
        if any(abs(float(standard_part(v))) > tol if is_float(v) else v != 0 for v in S.flat):
            lagrangian = False
    if emb.kind == "lagrangian-torus" and "a" in emb.params:
        contained = True
        bs = _factors(emb.params["b"])
        as_ = _factors(emb.params["a"])
        for x in samples:
            y = evaluate(emb, x)
            for val in ellipsoid_equations(as_, y, space.n):
                if abs(val) > 1e-12:
                    contained = False
        for b, a in zip(bs, as_):
            if abs(sum(float(bi) / float(ai) for bi, ai in zip(b, a)) - 1) > 1e-12:
                contained = False
    return {"lagrangian": lagrangian, "contained": contained}


def ellipsoid_equations(factors, y, n):
    """Values sum_i (x_i^2 + x_{n+i}^2) / a_i - 1 of the factor equations at y."""
    out = []
    offset = 0
    for a in factors:
        total = 0.0
        for i, ai in enumerate(a):
            total += (float(y[offset + i]) ** 2 + float(y[n + offset + i]) ** 2) / float(ai)
        out.append(total - 1.0)
        offset += len(a)
    return out


def ellipsoid_gradients(factors, y, n):
    grads = []
    offset = 0
    for a in factors:
        g = np.zeros(2 * n)
        for i, ai in enumerate(a):
            g[offset + i] = 2 * float(y[offset + i]) / float(ai)
            g[n + offset + i] = 2 * float(y[n + offset + i]) / float(ai)
        grads.append(g)
        offset += len(a)
    return grads


# sampling ----------------------------------------------------------------------


def sample_points(emb, count, rng, exact=None):
    """Random source points inside the chart of each kind."""
    d = source_dim(emb)
    if exact is None:
        exact = is_exact(emb)
    pts = []
    for _ in range(count):
        if emb.kind in ("polynomial", "graph"):
            if exact:
                pts.append([Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8))) for _ in range(d)])
            else:
                pts.append(list(rng.uniform(-1, 1, size=d)))
        elif emb.kind in ("lagrangian-torus", "torus6"):
            pts.append(list(rng.uniform(0, 2 * math.pi, size=d)))
        else:
            pt = []
            for a in _factors(emb.params["a"]):
                # actions b_i = a_i u_i with u uniform on the open simplex, so that sum b_i / a_i = 1
                u = rng.dirichlet(np.ones(len(a)))
                pt.extend(rng.uniform(0, 2 * math.pi, size=len(a)))
                pt.extend(float(ai) * ui for ai, ui in zip(a[:-1], u[:-1]))
            pts.append(pt)
    return pts


def to_backend_point(x, backend):
    return [to_backend(v, backend) for v in x]


def random_quadratic_graph(rng, d=2, n=2):
    """Graph of a random quadratic map R^d -> R^{2n-d} with rational coefficients."""
    comps = []
    for _ in range(2 * n - d):
        terms = {}
        for exps in itertools.product(range(3), repeat=d):
            if 0 < sum(exps) <= 2:
                terms[",".join(map(str, exps))] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        comps.append(terms)
    return EmbeddingSpec("graph", {"d": d, "n": n, "g": comps})

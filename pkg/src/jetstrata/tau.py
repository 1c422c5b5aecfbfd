"""The tensors tau_{A_1,...,A_s} and their structural identities.

tau_{A_1..A_s}(v_0, ..., v_s) pairs, under omega, a value of A_{k+1} taking
v_0 with one of A_{s-k} taking v_s, the middle arguments being split between
the two.  It is scalar valued; tensors are returned as w = 1 MultiTensors.
"""

from fractions import Fraction
import itertools
from math import factorial

import numpy as np

from . import linalg
from .errors import DimensionMismatch, DomainError, InconsistentSystem
from .scalars import HyperDual, deriv, is_float, is_zero, standard_part
from .symplectic import is_injective
from .tensors import MultiTensor, SymTensor, contract, rearranged, sorted_indices

VARIANTS = ("partition-sum", "perm-sum")


def as_dense(A):
    if isinstance(A, SymTensor):
        return A.dense()
    return np.asarray(A, dtype=object)


def dense_family(As, w=None):
    """Dense arrays for A_1..A_s, checking orders and shared dimensions."""
    arrs = [as_dense(A) for A in As]
    if not arrs:
        raise DomainError("empty family")
    d = arrs[0].shape[0]
    ww = arrs[0].shape[-1] if w is None else w
    for k, a in enumerate(arrs, start=1):
        if a.shape != (d,) * k + (ww,):
            raise DimensionMismatch(f"A_{k} has shape {a.shape}, expected {(d,) * k + (ww,)}")
    return arrs


def _floating(arrs):
    return any(is_float(x) for a in arrs for x in a.flat)


def tau_data(arrs, J, variant="partition-sum"):
    """Scalar array of shape (d,)*(s+1) holding tau of the dense family ``arrs``."""
    s = len(arrs)
    if s < 2:
        raise DomainError("tau needs s >= 2")
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    J = np.asarray(J, dtype=object)
    left = [None] + [np.tensordot(a, J, axes=([-1], [0])) for a in arrs]
    floating = _floating(arrs)
    out = None
    middle = list(range(1, s))
    for k in range(s):
        # axes of base: v_0, k middle slots, s-k-1 middle slots, v_s
        base = np.tensordot(left[k + 1], arrs[s - k - 1], axes=([-1], [-1]))
        if variant == "partition-sum":
            for I in itertools.combinations(middle, k):
                rest = [j for j in middle if j not in I]
                term = rearranged(base, [0, *I, *rest, s])
                out = term if out is None else out + term
        else:
            weight = Fraction(1, factorial(k) * factorial(s - k - 1))
            if floating:
                weight = float(weight)
            acc = None
            for sigma in itertools.permutations(middle):
                term = rearranged(base, [0, *sigma, s])
                acc = term if acc is None else acc + term
            acc = acc * weight
            out = acc if out is None else out + acc
    return out


def tau_build(space, As, variant="partition-sum"):
    arrs = dense_family(As)
    if arrs[0].shape[-1] != space.dim:
        raise DimensionMismatch(f"tensors take values in R^{arrs[0].shape[-1]}, not R^{space.dim}")
    return MultiTensor.from_scalar_array(tau_data(arrs, space.matrix, variant))


# identities ------------------------------------------------------------------


def _close(a, b, tol):
    diff = a - b
    if tol is None or not is_float(diff):
        return diff == 0
    return abs(standard_part(diff)) <= tol


def _all_close(X, Y, tol):
    return all(_close(a, b, tol) for a, b in zip(X.flat, Y.flat))


def property_report(arr, tol=None):
    """Check (i)-(iii) on an array whose first m axes are the arguments."""
    m = arr.ndim - 1
    s = m - 1
    swap = list(range(m))
    swap[0], swap[s] = s, 0
    anti = _all_close(arr, -rearranged(arr, swap), tol)
    sym = True
    for i in range(1, s - 1):
        src = list(range(m))
        src[i], src[i + 1] = i + 1, i
        if not _all_close(arr, rearranged(arr, src), tol):
            sym = False
            break
    # tau(v0, v1, .., vs) + tau(vs, v0, .., v1) + tau(v1, vs, .., v0)
    ident = list(range(m))
    c1 = list(ident)
    c1[0], c1[1], c1[s] = s, 0, 1
    c2 = list(ident)
    c2[0], c2[1], c2[s] = 1, s, 0
    total = arr + rearranged(arr, c1) + rearranged(arr, c2)
    cyc = all(_close(x, 0, tol) for x in total.flat)
    return {"i": anti, "ii": sym, "iii": cyc}


def tau_property_check(T, tol=None):
    if T.order < 3:
        raise DomainError("property check needs order >= 3")
    return property_report(T.data, tol)


def in_t_space(T, tol=None):
    return all(tau_property_check(T, tol).values())


# solving for the top tensor --------------------------------------------------


def _linear_part(A1, As_arr, J):
    """omega(A_1 v_0, A_s(v_1..v_s)) + omega(A_s(v_0..v_{s-1}), A_1 v_s)."""
    s = As_arr.ndim - 1
    A1J = np.tensordot(A1, J, axes=([-1], [0]))
    first = np.tensordot(A1J, As_arr, axes=([-1], [-1]))
    JA1 = np.tensordot(J, A1, axes=([-1], [-1]))  # (w, d): column j is J A_1 e_j
    second = np.tensordot(As_arr, JA1, axes=([-1], [0]))
    return first + second


def tau_solve_for_As(space, lower, target):
    """Some A_s with tau_{A_1..A_{s-1}, A_s} equal to ``target``."""
    arrs = dense_family(lower)
    s = len(arrs) + 1
    d, w = arrs[0].shape
    if w != space.dim:
        raise DimensionMismatch("family does not take values in the symplectic space")
    if not is_injective(arrs[0].T):
        raise DomainError("A_1 is not injective; the affine map need not be onto")
    tgt = target.data if isinstance(target, MultiTensor) else np.asarray(target, dtype=object)
    if tgt.ndim == s + 2:
        if tgt.shape[-1] != 1:
            raise DimensionMismatch("target must be scalar valued")
        tgt = tgt[..., 0]
    if tgt.shape != (d,) * (s + 1):
        raise DimensionMismatch(f"target has shape {tgt.shape}, expected {(d,) * (s + 1)}")
    floating = _floating(arrs) or _floating([tgt])
    zero = 0.0 if floating else Fraction(0)
    one = 1.0 if floating else Fraction(1)
    zero_top = np.empty((d,) * s + (w,), dtype=object)
    zero_top.fill(zero)
    constant = tau_data(arrs + [zero_top], space.matrix)
    rhs = (tgt - constant).reshape(-1)
    unknowns = [(idx, c) for idx in sorted_indices(d, s) for c in range(w)]
    cols = []
    for idx, c in unknowns:
        unit = SymTensor(s, d, w, {idx: [one if j == c else zero for j in range(w)]}).dense()
        cols.append(_linear_part(arrs[0], unit, space.matrix).reshape(-1))
    M = np.array(cols, dtype=object).T
    try:
        x = linalg.solve(M, rhs)
    except InconsistentSystem:
        raise InconsistentSystem("target is not reachable; it must satisfy (i)-(iii)") from None
    entries = {}
    for (idx, c), val in zip(unknowns, x):
        entries.setdefault(idx, [zero] * w)[c] = val
    return SymTensor(s, d, w, entries)


# derivative identity ---------------------------------------------------------


def shifted_family(arrs, v, gen):
    """A_j + eps_gen A_{j+1}(v, .) for j = 1..len(arrs)-1."""
    eps = HyperDual.variable(gen)
    out = []
    for j in range(len(arrs) - 1):
        out.append(arrs[j] + eps * contract(arrs[j + 1], [v]))
    return out


def tau_derivative_identity_check(space, As, v_s, args, tol=None):
    """d/dt tau of the shifted family on (v_0..v_{s-1}) against tau(v_0..v_{s-2}, v_s, v_{s-1})."""
    arrs = dense_family(As)
    s = len(arrs)
    if s < 3:
        raise DomainError("the derivative identity needs s >= 3")
    d = arrs[0].shape[0]
    v_s = np.asarray(v_s, dtype=object)
    args = [np.asarray(a, dtype=object) for a in args]
    if v_s.shape != (d,) or len(args) != s or any(a.shape != (d,) for a in args):
        raise DimensionMismatch(f"need v_s and {s} arguments of length {d}")
    lhs_arr = tau_data(shifted_family(arrs, v_s, 0), space.matrix)
    lhs = deriv(contract(lhs_arr, args)[()], 0)
    full = tau_data(arrs, space.matrix)
    rhs = contract(full, args[:-1] + [v_s, args[-1]])[()]
    return _close(lhs, rhs, tol)

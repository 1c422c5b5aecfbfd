"""Symmetric and general multilinear maps V^k -> W.

A ``SymTensor`` stores one W-vector per weakly increasing multi-index; the
stored value at (i_1 <= ... <= i_k) is the evaluation on (e_{i_1}, ..., e_{i_k}),
with no multinomial factors.  A ``MultiTensor`` is a dense object array of
shape (d,)*m + (w,); the last axis is the W component.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools
from math import comb

import numpy as np

from .errors import DimensionMismatch, DomainError
from .scalars import is_zero, object_array


def sorted_indices(d, k):
    return list(itertools.combinations_with_replacement(range(d), k))


def _zero_like(kind_float):
    return 0.0 if kind_float else Fraction(0)


class SymTensor:
    """Symmetric k-linear map R^d x ... x R^d -> R^w."""

    __slots__ = ("k", "d", "w", "entries")

    def __init__(self, k, d, w, entries=None):
        if k < 1 or d < 1 or w < 1:
            raise DomainError("order and dimensions must be positive")
        self.k, self.d, self.w = k, d, w
        self.entries = {}
        for idx, val in (entries or {}).items():
            key = tuple(sorted(int(i) for i in idx))
            if len(key) != k or not all(0 <= i < d for i in key):
                raise DimensionMismatch(f"bad multi-index {idx} for k={k}, d={d}")
            vec = np.asarray(val, dtype=object).reshape(-1)
            if vec.shape != (w,):
                raise DimensionMismatch(f"entry at {idx} must have length {w}")
            self.entries[key] = vec

    @classmethod
    def zero(cls, k, d, w):
        return cls(k, d, w)

    @classmethod
    def from_linear_map(cls, A):
        A = np.asarray(A, dtype=object)
        w, d = A.shape
        return cls(1, d, w, {(j,): A[:, j] for j in range(d)})

    @classmethod
    def from_dense(cls, arr, check=True):
        """Compress a dense symmetric array of shape (d,)*k + (w,)."""
        arr = np.asarray(arr, dtype=object)
        k = arr.ndim - 1
        d, w = arr.shape[0], arr.shape[-1]
        if check:
            for perm in itertools.permutations(range(k)):
                if any(a != b for a, b in zip(arr.flat, np.transpose(arr, perm + (k,)).flat)):
                    raise DomainError("dense array is not symmetric")
        return cls(k, d, w, {idx: arr[idx] for idx in sorted_indices(d, k)})

    @classmethod
    def symmetrize(cls, arr):
        """Average a dense array over all argument orderings, then compress."""
        arr = np.asarray(arr, dtype=object)
        k = arr.ndim - 1
        total = None
        perms = list(itertools.permutations(range(k)))
        for perm in perms:
            t = np.transpose(arr, perm + (k,))
            total = t if total is None else total + t
        count = len(perms) if _floats(arr) else Fraction(len(perms))
        return cls.from_dense(total / count, check=False)

    def value(self, idx):
        key = tuple(sorted(idx))
        vec = self.entries.get(key)
        if vec is None:
            return np.array([Fraction(0)] * self.w, dtype=object)
        return vec

    def dense(self):
        arr = np.empty((self.d,) * self.k + (self.w,), dtype=object)
        floating = any(_floats(v) for v in self.entries.values())
        arr.fill(_zero_like(floating))
        for key, vec in self.entries.items():
            for perm in set(itertools.permutations(key)):
                arr[perm] = vec
        return arr

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        if (self.k, self.d, self.w) != (other.k, other.d, other.w):
            return False
        for idx in sorted_indices(self.d, self.k):
            if any(a != b for a, b in zip(self.value(idx), other.value(idx))):
                return False
        return True

    __hash__ = None

    def __add__(self, other):
        _same_shape(self, other)
        keys = set(self.entries) | set(other.entries)
        return SymTensor(self.k, self.d, self.w, {i: self.value(i) + other.value(i) for i in keys})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, a):
        return SymTensor(self.k, self.d, self.w, {i: v * a for i, v in self.entries.items()})

    def is_zero(self, tol=None):
        return all(is_zero(x, tol) for v in self.entries.values() for x in v)

    @property
    def size(self):
        return comb(self.d + self.k - 1, self.k)

    def __repr__(self):
        return f"SymTensor(k={self.k}, d={self.d}, w={self.w}, nnz={len(self.entries)})"


def _floats(arr):
    return any(isinstance(x, float) for x in np.asarray(arr, dtype=object).flat)


def _same_shape(a, b):
    if (a.k, a.d, a.w) != (b.k, b.d, b.w):
        raise DimensionMismatch("tensor shapes differ")


@dataclass(frozen=True, eq=False)
class MultiTensor:
    """General m-linear map (R^d)^m -> R^w, stored densely."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=object)
        if arr.ndim < 2 or len(set(arr.shape[:-1])) > 1:
            raise DimensionMismatch(f"bad multilinear array shape {arr.shape}")
        object.__setattr__(self, "data", arr)

    @classmethod
    def zero(cls, m, d, w=1, kind=None):
        arr = np.empty((d,) * m + (w,), dtype=object)
        arr.fill(0.0 if kind is float else Fraction(0))
        return cls(arr)

    @classmethod
    def from_scalar_array(cls, arr):
        """Wrap a scalar-valued (d,)*m array as a w=1 tensor."""
        arr = np.asarray(arr, dtype=object)
        return cls(arr.reshape(arr.shape + (1,)))

    @property
    def order(self):
        return self.data.ndim - 1

    @property
    def d(self):
        return self.data.shape[0]

    @property
    def w(self):
        return self.data.shape[-1]

    def __eq__(self, other):
        if not isinstance(other, MultiTensor):
            return NotImplemented
        return self.data.shape == other.data.shape and all(
            a == b for a, b in zip(self.data.flat, other.data.flat)
        )

    __hash__ = None

    def __add__(self, other):
        return MultiTensor(self.data + other.data)

    def __sub__(self, other):
        return MultiTensor(self.data - other.data)

    def scale(self, a):
        return MultiTensor(self.data * a)

    def is_zero(self, tol=None):
        return all(is_zero(x, tol) for x in self.data.flat)

    def max_abs(self):
        from .scalars import standard_part

        return max((abs(float(standard_part(x))) for x in self.data.flat), default=0.0)

    def __repr__(self):
        return f"MultiTensor(order={self.order}, d={self.d}, w={self.w})"


def _check_args(d, k, args):
    if len(args) != k:
        raise DimensionMismatch(f"expected {k} arguments, got {len(args)}")
    vecs = [np.asarray(a, dtype=object) for a in args]
    for v in vecs:
        if v.shape != (d,):
            raise DimensionMismatch(f"argument must have length {d}")
    return vecs


def contract(arr, vecs):
    """Contract the leading axes of ``arr`` with the vectors, in order."""
    out = arr
    for v in vecs:
        out = np.tensordot(v, out, axes=([0], [0]))
    return out


def sym_eval(T, args):
    vecs = _check_args(T.d, T.k, args)
    out = np.array([Fraction(0)] * T.w, dtype=object)
    # expand by multilinearity over the supports of the arguments
    supports = [[(i, x) for i, x in enumerate(v) if x != 0] for v in vecs]
    for choice in itertools.product(*supports):
        coef = 1
        for _, x in choice:
            coef = coef * x
        out = out + coef * T.value(tuple(i for i, _ in choice))
    return out


def mult_eval(T, args):
    vecs = _check_args(T.d, T.order, args)
    return contract(T.data, vecs)


def rearranged(arr, src):
    """Array of (v_0, ..., v_m) -> arr(v_{src[0]}, ..., v_{src[m-1]}); trailing axes kept."""
    src = list(src)
    m = len(src)
    axes = [0] * m
    for pos, s in enumerate(src):
        axes[s] = pos
    return np.transpose(arr, axes + list(range(m, arr.ndim)))


def permute_data(sigma, arr):
    """(sigma . T)(v_0, ...) = T(v_{sigma^-1(0)}, ...) on the leading len(sigma) axes."""
    sigma = tuple(sigma)
    return np.transpose(arr, sigma + tuple(range(len(sigma), arr.ndim)))


def permute_action(sigma, T):
    sigma = tuple(int(i) for i in sigma)
    if sorted(sigma) != list(range(T.order)):
        raise DimensionMismatch(f"permutation {sigma} does not act on order {T.order}")
    return MultiTensor(permute_data(sigma, T.data))


def pullback_data(f, arr, m):
    """Pull back the first ``m`` axes of ``arr`` by the linear map f (shape (d, d'))."""
    f = np.asarray(f, dtype=object)
    out = arr
    for _ in range(m):
        # contract the current first axis with f and move the new axis to the back
        out = np.tensordot(out, f, axes=([0], [0]))
        out = np.moveaxis(out, -1, m - 1)
    return out


def mult_pullback(f, T):
    f = np.asarray(f, dtype=object)
    if f.ndim != 2 or f.shape[0] != T.d:
        raise DimensionMismatch(f"map must have {T.d} rows")
    return MultiTensor(pullback_data(f, T.data, T.order))


def basis_tuples(d, m):
    return itertools.product(range(d), repeat=m)


def random_sym_tensor(rng, k, d, w, num=9, den=4):
    from .scalars import random_rational_array

    return SymTensor(k, d, w, {idx: random_rational_array(rng, (w,), num, den) for idx in sorted_indices(d, k)})


def random_multi_tensor(rng, m, d, w=1, num=9, den=4):
    from .scalars import random_rational_array

    return MultiTensor(random_rational_array(rng, (d,) * m + (w,), num, den))


def sym_from_arrays(tensors):
    return [t if isinstance(t, SymTensor) else SymTensor.from_dense(object_array(t)) for t in tensors]

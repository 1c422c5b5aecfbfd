"""Scalar backends and nilpotent (hyper-dual) numbers.

Two backends are supported: exact rationals (``fractions.Fraction`` and
``int``) and ``float``.  Derivatives are taken with :class:`HyperDual`, a
truncated polynomial in nilpotent generators ``eps_i`` with ``eps_i**2 = 0``.
Each generator carries one first-order derivative, so nesting derivatives in
distinct directions just uses distinct generators.
"""

from fractions import Fraction
import numbers

import numpy as np

DEFAULT_TOL = 1e-9

BACKENDS = ("rational", "float")


class HyperDual:
    """Element of ``K[eps_0, eps_1, ...] / (eps_i**2)``.

    ``terms`` maps a bitmask of generators to its coefficient; mask 0 is the
    standard part.  Coefficients may be ints, Fractions or floats.
    """

    __slots__ = ("terms",)
    __array_priority__ = 100

    def __init__(self, terms):
        self.terms = terms

    @classmethod
    def variable(cls, index, value=0):
        return cls({0: value, 1 << index: 1})

    @property
    def standard(self):
        return self.terms.get(0, 0)

    def _coerce(self, other):
        if isinstance(other, HyperDual):
            return other.terms
        return {0: other}

    def __add__(self, other):
        if not isinstance(other, (HyperDual, numbers.Number)):
            return NotImplemented
        out = dict(self.terms)
        for m, c in self._coerce(other).items():
            out[m] = out.get(m, 0) + c
        return HyperDual(out)

    __radd__ = __add__

    def __neg__(self):
        return HyperDual({m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, (HyperDual, numbers.Number)):
            return NotImplemented
        out = dict(self.terms)
        for m, c in self._coerce(other).items():
            out[m] = out.get(m, 0) - c
        return HyperDual(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HyperDual):
            out = {}
            for ma, ca in self.terms.items():
                if ca == 0:
                    continue
                for mb, cb in other.terms.items():
                    if ma & mb or cb == 0:
                        continue
                    m = ma | mb
                    out[m] = out.get(m, 0) + ca * cb
            return HyperDual(out)
        if isinstance(other, numbers.Number):
            if other == 0:
                return HyperDual({})
            return HyperDual({m: c * other for m, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self):
        a0 = self.standard
        if a0 == 0:
            raise ZeroDivisionError("hyper-dual with zero standard part")
        inv0 = 1 / a0 if isinstance(a0, float) else Fraction(1) / a0
        nil = HyperDual({m: -c * inv0 for m, c in self.terms.items() if m})
        result = HyperDual({0: inv0})
        power = HyperDual({0: inv0})
        # nil is nilpotent: its powers vanish after popcount(all masks) steps
        while True:
            power = power * nil
            if not any(c != 0 for c in power.terms.values()):
                break
            result = result + power
        return result

    def __truediv__(self, other):
        if isinstance(other, HyperDual):
            return self * other.reciprocal()
        if isinstance(other, numbers.Number):
            if isinstance(other, int) and not isinstance(other, bool):
                other = Fraction(other)
            return HyperDual({m: c / other for m, c in self.terms.items()})
        return NotImplemented

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def deriv(self, index):
        """Coefficient of ``eps_index`` (the derivative in that generator)."""
        bit = 1 << index
        return collapse(HyperDual({m ^ bit: c for m, c in self.terms.items() if m & bit}))

    def is_zero(self, tol=None):
        return all(is_zero(c, tol) for c in self.terms.values())

    def __eq__(self, other):
        if isinstance(other, (HyperDual, numbers.Number)):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"HyperDual({self.terms!r})"


def collapse(x):
    """Drop a HyperDual with no nilpotent part down to its standard scalar."""
    if isinstance(x, HyperDual):
        if all(m == 0 or c == 0 for m, c in x.terms.items()):
            return x.terms.get(0, 0)
    return x


def standard_part(x):
    return x.standard if isinstance(x, HyperDual) else x


def deriv(x, index):
    if isinstance(x, HyperDual):
        return x.deriv(index)
    return 0


deriv_array = np.frompyfunc(deriv, 2, 1)
collapse_array = np.frompyfunc(collapse, 1, 1)
standard_array = np.frompyfunc(standard_part, 1, 1)


def is_float(x):
    if isinstance(x, HyperDual):
        return any(is_float(c) for c in x.terms.values())
    return isinstance(x, (float, np.floating))


def uses_floats(arr):
    return any(is_float(x) for x in np.asarray(arr, dtype=object).flat)


def is_zero(x, tol=None):
    if isinstance(x, HyperDual):
        return x.is_zero(tol)
    if tol is None or not is_float(x):
        return x == 0
    return abs(x) <= tol


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x)).limit_denominator(10**12)
    raise TypeError(f"cannot convert {x!r} to a rational")


def to_backend(x, backend):
    if backend == "float":
        if isinstance(x, str):
            return float(Fraction(x.strip()))
        return float(x)
    if backend == "rational":
        return to_fraction(x)
    raise ValueError(f"unknown backend {backend!r}")


def parse_scalar(value):
    """JSON scalar: "p/q" strings are rationals, JSON numbers floats or ints."""
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise TypeError(f"not a scalar: {value!r}")


def format_scalar(x):
    x = collapse(x)
    if isinstance(x, HyperDual):
        raise TypeError("cannot serialise a hyper-dual number")
    if isinstance(x, (float, np.floating)):
        return float(x)
    f = to_fraction(x)
    return f"{f.numerator}/{f.denominator}"


def object_array(data):
    """numpy object array with Python ints promoted to Fractions."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, x in enumerate(flat):
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            flat[i] = Fraction(int(x))
        elif isinstance(x, np.floating):
            flat[i] = float(x)
    return arr


def random_rational(rng, num=9, den=4):
    """Small random rational with numerator in [-num, num] and denominator in [1, den]."""
    return Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))


def random_rational_array(rng, shape, num=9, den=4):
    arr = np.empty(shape, dtype=object)
    flat = arr.reshape(-1)
    for i in range(flat.size):
        flat[i] = random_rational(rng, num, den)
    return arr

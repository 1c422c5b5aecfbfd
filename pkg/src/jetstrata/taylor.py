"""Truncated multivariate power series, used to compute jets of embeddings.

A ``TPS`` in m variables truncated at total degree R holds the Taylor
coefficients c_alpha of f(x0 + h) = sum c_alpha h^alpha.  The derivative
(d^k f)(e_{i_1}, ..., e_{i_k}) is alpha! c_alpha, alpha the multiplicity
vector of (i_1, ..., i_k).
"""

from fractions import Fraction
import math

from .scalars import is_float


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class TPS:
    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars, order, coeffs=None):
        self.nvars = nvars
        self.order = order
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0 and sum(k) <= order}

    @classmethod
    def constant(cls, nvars, order, value):
        return cls(nvars, order, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, order, index, value=0):
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, order, {(0,) * nvars: value, tuple(e): 1})

    @property
    def value(self):
        return self.coeffs.get((0,) * self.nvars, 0)

    def _lift(self, other):
        if isinstance(other, TPS):
            return other
        return TPS.constant(self.nvars, self.order, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TPS(self.nvars, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return TPS(self.nvars, self.order, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TPS):
            return TPS(self.nvars, self.order, {k: v * other for k, v in self.coeffs.items()})
        out = {}
        R = self.order
        b_items = [(k, sum(k), v) for k, v in other.coeffs.items()]
        for ka, va in self.coeffs.items():
            da = sum(ka)
            for kb, db, vb in b_items:
                if da + db <= R:
                    k = _add_exp(ka, kb)
                    out[k] = out.get(k, 0) + va * vb
        return TPS(self.nvars, self.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TPS):
            return self * other.reciprocal()
        if isinstance(other, int):
            other = Fraction(other)
        return TPS(self.nvars, self.order, {k: v / other for k, v in self.coeffs.items()})

    def __pow__(self, k):
        out = TPS.constant(self.nvars, self.order, Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def compose(self, derivs):
        """f(self) for a scalar function with derivatives f^(k)(self.value), k = 0..order."""
        u0 = self.value
        nil = self - u0
        out = TPS.constant(self.nvars, self.order, derivs[0])
        power = TPS.constant(self.nvars, self.order, Fraction(1))
        for k in range(1, self.order + 1):
            power = power * nil
            if not power.coeffs:
                break
            out = out + power * (derivs[k] / math.factorial(k))
        return out

    def reciprocal(self):
        u0 = self.value
        if u0 == 0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        one = 1.0 if is_float(u0) else Fraction(1)
        derivs = [((-1) ** k) * math.factorial(k) * (one / u0) ** (k + 1) for k in range(self.order + 1)]
        return self.compose(derivs)

    def derivative(self, index_tuple):
        """(d^k f)(e_{i_1}, .., e_{i_k}) at the expansion point."""
        alpha = [0] * self.nvars
        for i in index_tuple:
            alpha[i] += 1
        c = self.coeffs.get(tuple(alpha), 0)
        mult = 1
        for a in alpha:
            mult *= math.factorial(a)
        return c * mult

    def __repr__(self):
        return f"TPS(nvars={self.nvars}, order={self.order}, terms={len(self.coeffs)})"


def sin(u):
    u0 = float(u.value)
    cycle = [math.sin(u0), math.cos(u0), -math.sin(u0), -math.cos(u0)]
    return u.compose([cycle[k % 4] for k in range(u.order + 1)])


def cos(u):
    u0 = float(u.value)
    cycle = [math.cos(u0), -math.sin(u0), -math.cos(u0), math.sin(u0)]
    return u.compose([cycle[k % 4] for k in range(u.order + 1)])


def sqrt(u):
    u0 = float(u.value)
    if u0 <= 0:
        raise ValueError("sqrt of a series needs a positive constant term")
    derivs = []
    coeff = 1.0
    for k in range(u.order + 1):
        # d^k/du^k u^(1/2) = (1/2)(1/2 - 1)..(1/2 - k + 1) u^(1/2 - k)
        derivs.append(coeff * u0 ** (0.5 - k))
        coeff *= 0.5 - k
    return u.compose(derivs)


def monomial(variables, exponents):
    out = None
    for v, e in zip(variables, exponents):
        if e:
            term = v ** e
            out = term if out is None else out * term
    return out

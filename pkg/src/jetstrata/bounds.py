"""Smallest jet order r for which the dimension count forces transversality."""

from math import comb

from .errors import DomainError
from .symgroup import scalar_t_dim, t_dim

MAX_R = 5


def _rhs(d, n):
    c = 2 * n - d
    return d - comb(c + 1, 2)


def _check(d, n):
    if n < 1 or d < 1 or d > 2 * n - 2:
        raise DomainError(f"need 1 <= d <= 2n - 2, got d = {d}, n = {n}")


def min_r(d, n, w=None):
    """Least r >= 1 with sum_{s=2}^r dim T_s(R^{2n-d}, R^w) > d - C(2n-d+1, 2).

    ``w`` defaults to 2n.  The empty sum at r = 1 counts as 0.  Pass w = 1 to
    use scalar-valued tensors (the values of tau are numbers).
    """
    _check(d, n)
    w = 2 * n if w is None else w
    c = 2 * n - d
    rhs = _rhs(d, n)
    total, r = 0, 1
    while total <= rhs:
        r += 1
        if r > MAX_R:
            raise DomainError(f"no r <= {MAX_R} satisfies the bound for d = {d}, n = {n}")
        total += t_dim(r, c, w)
    return r


def min_r_simplified(d, n):
    """Least r >= 1 with r(r+1)/2 - 1 > d - C(2n-d+1, 2)."""
    _check(d, n)
    if 2 * n - d < 2:
        raise DomainError("the simplified bound needs 2n - d >= 2")
    rhs = _rhs(d, n)
    r = 1
    while r * (r + 1) // 2 - 1 <= rhs:
        r += 1
    return r


def tdim_table(c_max, w_max, s_max, scalar=False):
    """Rows {"s", "c", "w", "dim"} for 2 <= s <= s_max, 1 <= c <= c_max, 1 <= w <= w_max."""
    rows = []
    for s in range(2, s_max + 1):
        for c in range(1, c_max + 1):
            for w in range(1, w_max + 1):
                dim = scalar_t_dim(s, c) if scalar else t_dim(s, c, w)
                rows.append({"s": s, "c": c, "w": w, "dim": dim})
    return rows


def bound_sweep(max_2n=8):
    """(d, n, min_r, min_r scalar, simplified) for every d <= 2n - 2 <= max_2n - 2."""
    out = []
    for n in range(2, max_2n // 2 + 1):
        for d in range(1, 2 * n - 1):
            out.append((d, n, min_r(d, n), min_r(d, n, w=1), min_r_simplified(d, n)))
    return out

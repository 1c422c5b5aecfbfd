"""Row reduction, rank, nullspace, solves and inverses over generic scalars.

Exact scalars (int, Fraction, and hyper-duals over them) are reduced with
exact zero tests.  Floats use a relative pivot threshold: an entry counts as
zero when ``|x| <= tol * scale``, where ``scale`` defaults to the largest
absolute entry of the input.  Callers that know a better scale (say, the
square of a Jacobian's size for a pulled-back form) pass it explicitly.
"""

from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, InconsistentSystem
from .scalars import DEFAULT_TOL, is_float, standard_part


def _as_rows(M):
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {M.shape}")
    return [list(row) for row in M], M.shape


def _threshold(rows, tol, scale):
    floating = any(is_float(x) for row in rows for x in row)
    if not floating:
        return None
    if tol is None:
        tol = DEFAULT_TOL
    if scale is None:
        scale = max((abs(standard_part(x)) for row in rows for x in row), default=0.0)
        scale = scale or 1.0
    return tol * scale


def _negligible(x, thresh):
    x0 = standard_part(x)
    if thresh is None:
        return x0 == 0
    return abs(x0) <= thresh


def _one(x):
    return 1.0 if is_float(x) else Fraction(1)


def rref(M, tol=None, scale=None):
    """Reduced row echelon form with pivots scaled to 1.

    Returns ``(R, pivots)`` where ``R`` is an object array and ``pivots`` the
    pivot column indices.  Exact input pivots on the first nonzero entry of
    each column (deterministic); float input uses partial pivoting.
    """
    rows, (m, n) = _as_rows(M)
    thresh = _threshold(rows, tol, scale)
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        if thresh is None:
            piv = next((i for i in range(r, m) if not _negligible(rows[i][col], None)), None)
        else:
            cand = [(abs(standard_part(rows[i][col])), i) for i in range(r, m)]
            best = max(cand, default=(0.0, None))
            piv = best[1] if best[0] > thresh else None
        if piv is None:
            if thresh is not None:
                for i in range(r, m):
                    rows[i][col] = 0.0
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = _one(pr[col]) / pr[col]
        rows[r] = pr = [x * inv for x in pr]
        for i in range(m):
            if i == r:
                continue
            f = rows[i][col]
            if _negligible(f, None) and not hasattr(f, "terms"):
                continue
            row = rows[i]
            rows[i] = [a - f * b if b != 0 else a for a, b in zip(row, pr)]
        pivots.append(col)
        r += 1
    R = np.empty((m, n), dtype=object)
    for i, row in enumerate(rows):
        R[i, :] = row
    return R, pivots


def rank(M, tol=None, scale=None):
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    return len(rref(M, tol, scale)[1])


def nullspace(M, tol=None, scale=None):
    """Basis of the nullspace, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns, read off the reduced row echelon form.
    """
    M = np.asarray(M, dtype=object)
    m, n = M.shape
    if m == 0:
        return [_unit(n, j) for j in range(n)]
    R, pivots = rref(M, tol, scale)
    floating = any(is_float(x) for x in M.flat)
    zero = 0.0 if floating else Fraction(0)
    one = 1.0 if floating else Fraction(1)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = np.array([zero] * n, dtype=object)
        v[j] = one
        for i, p in enumerate(pivots):
            v[p] = -R[i, j]
        basis.append(v)
    return basis


def _unit(n, j):
    v = np.array([Fraction(0)] * n, dtype=object)
    v[j] = Fraction(1)
    return v


def solve(M, b, tol=None, scale=None):
    """One solution of ``M x = b`` (free variables set to 0)."""
    M = np.asarray(M, dtype=object)
    b = np.asarray(b, dtype=object)
    m, n = M.shape
    if b.shape != (m,):
        raise DimensionMismatch(f"rhs has shape {b.shape}, expected ({m},)")
    aug = np.concatenate([M, b.reshape(m, 1)], axis=1)
    R, pivots = rref(aug, tol, scale)
    if n in pivots:
        raise InconsistentSystem("linear system has no solution")
    floating = any(is_float(x) for x in aug.flat)
    x = np.array([0.0 if floating else Fraction(0)] * n, dtype=object)
    for i, p in enumerate(pivots):
        x[p] = R[i, n]
    return x


def inverse(M, tol=None, scale=None):
    M = np.asarray(M, dtype=object)
    m, n = M.shape
    if m != n:
        raise DimensionMismatch("inverse of a non-square matrix")
    if n == 0:
        return np.empty((0, 0), dtype=object)
    eye = identity(n, float if any(is_float(x) for x in M.flat) else None)
    R, pivots = rref(np.concatenate([M, eye], axis=1), tol, scale)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def det(M):
    """Determinant by elimination (exact for rational input)."""
    rows, (m, n) = _as_rows(M)
    if m != n:
        raise DimensionMismatch("determinant of a non-square matrix")
    result = _one(rows[0][0]) if n else Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if standard_part(rows[i][col]) != 0), None)
        if piv is None:
            return 0 * result
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            result = -result
        p = rows[col][col]
        result = result * p
        for i in range(col + 1, n):
            f = rows[i][col] / p
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
    return result


def identity(n, kind=None):
    one, zero = (1.0, 0.0) if kind is float else (Fraction(1), Fraction(0))
    eye = np.array([[zero] * n for _ in range(n)], dtype=object).reshape(n, n)
    for i in range(n):
        eye[i, i] = one
    return eye


def zeros(shape, kind=None):
    arr = np.empty(shape, dtype=object)
    arr.fill(0.0 if kind is float else Fraction(0))
    return arr


def complement_basis(vectors, d):
    """Coordinate vectors completing ``vectors`` to a basis of K^d (greedy, in index order)."""
    chosen = []
    current = [np.asarray(v, dtype=object) for v in vectors]
    r = rank(np.array(current, dtype=object).reshape(len(current), d)) if current else 0
    for j in range(d):
        e = np.array([Fraction(0)] * d, dtype=object)
        e[j] = Fraction(1)
        trial = current + [e]
        rr = rank(np.array(trial, dtype=object).reshape(len(trial), d))
        if rr > r:
            current, r = trial, rr
            chosen.append(e)
        if r == d:
            break
    return chosen


class SparseEliminator:
    """Incremental exact row reduction of sparse rows (dicts col -> value).

    Used for the large, very sparse constraint systems that cut out the
    tensor spaces; dense elimination would waste time on structural zeros.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.pivot_rows = {}

    def add(self, row):
        row = {c: Fraction(v) for c, v in row.items() if v != 0}
        while row:
            lead = min(row)
            prow = self.pivot_rows.get(lead)
            if prow is None:
                inv = 1 / row[lead]
                self.pivot_rows[lead] = {c: v * inv for c, v in row.items()}
                return True
            f = row[lead]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv == 0:
                    row.pop(c, None)
                else:
                    row[c] = nv
        return False

    @property
    def rank(self):
        return len(self.pivot_rows)

    def reduced(self):
        """Back-substitute so every pivot column is zero outside its own row."""
        order = sorted(self.pivot_rows, reverse=True)
        done = {}
        for p in order:
            row = dict(self.pivot_rows[p])
            for q in sorted(c for c in list(row) if c != p and c in done):
                f = row.get(q, 0)
                if f == 0:
                    continue
                for c, v in done[q].items():
                    nv = row.get(c, 0) - f * v
                    if nv == 0:
                        row.pop(c, None)
                    else:
                        row[c] = nv
            done[p] = row
        return done

    def nullspace(self):
        red = self.reduced()
        free = [j for j in range(self.ncols) if j not in red]
        basis = []
        for j in free:
            v = {j: Fraction(1)}
            for p, row in red.items():
                if j in row:
                    v[p] = -row[j]
            basis.append(v)
        return basis

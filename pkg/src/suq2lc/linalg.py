"""Exact dense linear algebra over FieldElem.

Determinants use fraction-free (Bareiss) elimination on a
denominator-cleared matrix over Z[q,t,k][s]/(s^2-q^2-1); kernels and solves
use straight Gaussian elimination over the field.  A cheap
connected-component decomposition keeps the bigger structured determinants
(40x40) from swelling.
"""

from __future__ import annotations

from fractions import Fraction

from . import field
from .field import FieldElem, BaseRat, ZERO, ONE, R


class SingularMatrix(ValueError):
    """Raised by solve when the matrix has no inverse; carries the pivot row."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class Vec:
    __slots__ = ("coords", "basis")

    def __init__(self, coords, basis=None):
        self.coords = list(coords)
        self.basis = basis

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return self.coords == other.coords

    def __add__(self, other):
        return Vec([a + b for a, b in zip(self.coords, other.coords)], self.basis)

    def __sub__(self, other):
        return Vec([a - b for a, b in zip(self.coords, other.coords)], self.basis)

    def scale(self, c):
        return Vec([c * a for a in self.coords], self.basis)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def __repr__(self):
        return "Vec([" + ", ".join(field.elem_str(c) for c in self.coords) + "])"


def zero_vec(n, basis=None):
    return Vec([ZERO] * n, basis)


class Mat:
    __slots__ = ("rows", "cols", "entries", "row_basis", "col_basis")

    def __init__(self, entries, row_basis=None, col_basis=None):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        self.row_basis = row_basis
        self.col_basis = col_basis

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.entries == other.entries

    def col(self, j):
        return Vec([self.entries[i][j] for i in range(self.rows)], self.row_basis)

    def row(self, i):
        return Vec(list(self.entries[i]), self.col_basis)

    def transpose(self):
        return Mat([[self.entries[i][j] for i in range(self.rows)]
                    for j in range(self.cols)], self.col_basis, self.row_basis)

    def __add__(self, other):
        return Mat([[a + b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.entries, other.entries)],
                   self.row_basis, self.col_basis)

    def __sub__(self, other):
        return Mat([[a - b for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.entries, other.entries)],
                   self.row_basis, self.col_basis)

    def scale(self, c):
        return Mat([[c * a for a in row] for row in self.entries],
                   self.row_basis, self.col_basis)

    def __mul__(self, other):
        """Sparse-aware matrix product (skips zero entries)."""
        if isinstance(other, Vec):
            out = [ZERO] * self.rows
            for i, row in enumerate(self.entries):
                acc = ZERO
                for j, a in enumerate(row):
                    if a and other.coords[j]:
                        acc = acc + a * other.coords[j]
                out[i] = acc
            return Vec(out, self.row_basis)
        out = [[ZERO] * other.cols for _ in range(self.rows)]
        for i, row in enumerate(self.entries):
            nz = [(j, a) for j, a in enumerate(row) if a]
            orow = out[i]
            for j, a in nz:
                brow = other.entries[j]
                for l, b in enumerate(brow):
                    if b:
                        orow[l] = orow[l] + a * b
        return Mat(out, self.row_basis, other.col_basis)

    def is_zero(self):
        return all(c.is_zero() for row in self.entries for c in row)

    def eval(self, q0, t0, k0):
        """Rational matrix (list of lists of Fraction) at a Pythagorean point."""
        q0, t0, k0 = Fraction(q0), Fraction(t0), Fraction(k0)
        s0 = field.pythagorean_s(q0)
        out = []
        for row in self.entries:
            out.append([e.a.eval(q0, t0, k0) + e.b.eval(q0, t0, k0) * s0
                        for e in row])
        return out

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "row_basis": self.row_basis,
            "col_basis": self.col_basis,
            "entries": [[field.elem_str(e) for e in row] for row in self.entries],
        }

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols})"


def identity(n, basis=None):
    return Mat([[ONE if i == j else ZERO for j in range(n)] for i in range(n)],
               basis, basis)


def zeros(rows, cols, row_basis=None, col_basis=None):
    return Mat([[ZERO] * cols for _ in range(rows)], row_basis, col_basis)


def from_cols(cols, row_basis=None, col_basis=None):
    n = len(cols[0])
    return Mat([[c[i] for c in cols] for i in range(n)], row_basis, col_basis)


def kron(a, b):
    out = []
    for i in range(a.rows):
        for p in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a.entries[i][j]
                if aij:
                    row.extend(aij * bq if bq else ZERO
                               for bq in b.entries[p])
                else:
                    row.extend([ZERO] * b.cols)
            out.append(row)
    return Mat(out)


# -- ring-level helpers for Bareiss ------------------------------------------
#
# Internally a cleared-denominator entry is a pair (p0, p1) of ring
# polynomials meaning p0 + p1*s.  The ring Z[q,t,k][s]/(s^2-q^2-1) is an
# integral domain, so Bareiss exact division is available: x / (c + d*s)
# = x * (c - d*s) / (c^2 - d^2*(1+q^2)) with the last division exact.

_RPOLY = field.Q * field.Q + 1


def _pair_mul(x, y):
    a, b = x
    c, d = y
    return (a * c + b * d * _RPOLY, a * d + b * c)


def _pair_sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def _pair_is_zero(x):
    return not x[0] and not x[1]


def _pair_exquo(x, y):
    c, d = y
    num = _pair_mul(x, (c, -d))
    norm = c * c - d * d * _RPOLY
    q0, r0 = num[0].div(norm)
    q1, r1 = num[1].div(norm)
    if r0 or r1:
        raise ArithmeticError("inexact division in Bareiss elimination")
    return (q0, q1)


def _clear_denominators(m, rows, cols):
    """Return (pair-matrix, factor) with factor = product of row multipliers."""
    out = []
    factor = ONE
    for i in rows:
        den = R.one
        for j in cols:
            e = m.entries[i][j]
            g = den.gcd(e.a.den)
            den = den.quo(g) * e.a.den
            g = den.gcd(e.b.den)
            den = den.quo(g) * e.b.den
        row = []
        for j in cols:
            e = m.entries[i][j]
            row.append((e.a.num * den.quo(e.a.den), e.b.num * den.quo(e.b.den)))
        out.append(row)
        factor = factor * FieldElem(BaseRat(den))
    return out, factor


def _bareiss_det(a):
    """Determinant of a square pair-matrix by fraction-free elimination."""
    n = len(a)
    if n == 0:
        return (R.one, R.zero)
    sign = 1
    prev = (R.one, R.zero)
    for col in range(n - 1):
        pivot_row = None
        for i in range(col, n):
            if not _pair_is_zero(a[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            return (R.zero, R.zero)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        piv = a[col][col]
        for i in range(col + 1, n):
            aic = a[i][col]
            for j in range(col + 1, n):
                num = _pair_sub(_pair_mul(piv, a[i][j]),
                                _pair_mul(aic, a[col][j]))
                a[i][j] = _pair_exquo(num, prev)
            a[i][col] = (R.zero, R.zero)
        prev = piv
    d = a[n - 1][n - 1]
    if sign < 0:
        d = (-d[0], -d[1])
    return d


def _components(m, rows, cols):
    """Split indices into connected components of the nonzero pattern."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for i in rows:
        parent[("r", i)] = ("r", i)
    for j in cols:
        parent[("c", j)] = ("c", j)
    for i in rows:
        for j in cols:
            if m.entries[i][j]:
                union(("r", i), ("c", j))
    groups = {}
    for i in rows:
        groups.setdefault(find(("r", i)), [[], []])[0].append(i)
    for j in cols:
        groups.setdefault(find(("c", j)), [[], []])[1].append(j)
    return list(groups.values())


def _perm_sign(perm):
    seen = [False] * len(perm)
    sign = 1
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


def det(m):
    """Exact determinant of a square Mat."""
    if m.rows != m.cols:
        raise ValueError("det of a non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    comps = _components(m, list(range(n)), list(range(n)))
    row_order, col_order = [], []
    result = ONE
    for rows, cols in comps:
        if len(rows) != len(cols):
            return ZERO  # rectangular component forces a singular matrix
        row_order.extend(rows)
        col_order.extend(cols)
        pairs, factor = _clear_denominators(m, rows, cols)
        d0, d1 = _bareiss_det(pairs)
        block_det = FieldElem(BaseRat(d0), BaseRat(d1)) / factor
        if block_det.is_zero():
            return ZERO
        result = result * block_det
    sign = _perm_sign(_inverse_perm(row_order)) * _perm_sign(_inverse_perm(col_order))
    return result if sign > 0 else -result


def _inverse_perm(order):
    inv = [0] * len(order)
    for pos, idx in enumerate(order):
        inv[idx] = pos
    return inv


def _row_reduce(entries, ncols):
    """In-place RREF over the field; returns list of pivot column indices."""
    pivots = []
    r = 0
    nrows = len(entries)
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if entries[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        entries[r], entries[pivot_row] = entries[pivot_row], entries[r]
        inv = entries[r][c].inv()
        entries[r] = [inv * x if x else ZERO for x in entries[r]]
        for i in range(nrows):
            if i != r and entries[i][c]:
                f = entries[i][c]
                entries[i] = [x - f * y if y else x
                              for x, y in zip(entries[i], entries[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def kernel(m):
    """Basis of the right null space as a list of Vec."""
    entries = [list(row) for row in m.entries]
    pivots = _row_reduce(entries, m.cols)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, c in enumerate(pivots):
            v[c] = -entries[r][f]
        basis.append(Vec(v, m.col_basis))
    return basis


def rank(m):
    entries = [list(row) for row in m.entries]
    return len(_row_reduce(entries, m.cols))


def _clear_row(row):
    """FieldElem row -> pair row with a common (dropped) denominator."""
    den = R.one
    for e in row:
        g = den.gcd(e.a.den)
        den = den.quo(g) * e.a.den
        g = den.gcd(e.b.den)
        den = den.quo(g) * e.b.den
    return [(e.a.num * den.quo(e.a.den), e.b.num * den.quo(e.b.den))
            for e in row]


def _bareiss_solve(aug):
    """Solve the square system given as an n x (n+1) pair-matrix.

    Fraction-free forward elimination followed by back substitution over
    the field; raises SingularMatrix when a pivot column dies.
    """
    n = len(aug)
    prev = (R.one, R.zero)
    for col in range(n):
        pivot_row = next((i for i in range(col, n)
                          if not _pair_is_zero(aug[i][col])), None)
        if pivot_row is None:
            raise SingularMatrix("singular matrix in solve",
                                 detail={"pivot_column": col})
        if pivot_row != col:
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        piv = aug[col][col]
        for i in range(col + 1, n):
            aic = aug[i][col]
            for j in range(col + 1, n + 1):
                num = _pair_sub(_pair_mul(piv, aug[i][j]),
                                _pair_mul(aic, aug[col][j]))
                aug[i][j] = _pair_exquo(num, prev)
            aug[i][col] = (R.zero, R.zero)
        prev = piv
    sol = [None] * n
    for i in range(n - 1, -1, -1):
        acc = FieldElem(BaseRat(aug[i][n][0]), BaseRat(aug[i][n][1]))
        for j in range(i + 1, n):
            coeff = aug[i][j]
            if _pair_is_zero(coeff):
                continue
            acc = acc - FieldElem(BaseRat(coeff[0]), BaseRat(coeff[1])) * sol[j]
        sol[i] = acc / FieldElem(BaseRat(aug[i][i][0]), BaseRat(aug[i][i][1]))
    return sol


def solve(m, rhs):
    """Unique solution of m x = rhs for square invertible m."""
    if m.rows != m.cols:
        raise ValueError("solve requires a square matrix")
    n = m.rows
    sol = [None] * n
    for rows, cols in _components(m, list(range(n)), list(range(n))):
        if len(rows) != len(cols):
            raise SingularMatrix(
                "singular matrix in solve",
                detail={"component_rows": len(rows),
                        "component_cols": len(cols)})
        aug = [_clear_row([m.entries[i][j] for j in cols] + [rhs.coords[i]])
               for i in rows]
        block = _bareiss_solve(aug)
        for pos, j in enumerate(cols):
            sol[j] = block[pos]
    return Vec(sol, m.col_basis)


def solve_many(m, rhs_mat):
    """Solve m X = rhs_mat column-by-column (shared elimination)."""
    if m.rows != m.cols:
        raise ValueError("solve requires a square matrix")
    n = m.rows
    extra = rhs_mat.cols
    aug = [list(row) + list(rhs_mat.entries[i]) for i, row in enumerate(m.entries)]
    pivots = _row_reduce(aug, n)
    if len(pivots) < n:
        raise SingularMatrix(
            "singular matrix in solve",
            detail={"rank": len(pivots), "det": "0"})
    return Mat([[aug[i][n + j] for j in range(extra)] for i in range(n)],
               m.col_basis, rhs_mat.col_basis)


def inverse(m):
    return solve_many(m, identity(m.rows, m.row_basis))


# -- rational fast path -------------------------------------------------------

def rational_rank(rows):
    """Rank of a matrix of Fractions (evaluation fast path)."""
    a = [list(r) for r in rows]
    nrows, ncols = len(a), len(a[0]) if a else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def rational_det(rows):
    """Determinant of a matrix of Fractions."""
    a = [list(r) for r in rows]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        inv = Fraction(1) / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d

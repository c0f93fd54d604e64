"""Dense exact matrices over GF(2^k).

Over GF(2) each row is packed into a single Python int (bit ``j`` holds
column ``j``), so products, rank and nilpotency tests are word operations.
Larger fields store rows as tuples of element ints and go through the
field's multiplication table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FieldMismatch, NotSquare, ShapeMismatch, Singular
from .field import FieldSpec


class Matrix:
    """Immutable ``rows x cols`` matrix over ``field``."""

    __slots__ = ("field", "rows", "cols", "_data", "_hash")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data):
        # ``data`` is already in internal form: packed ints for GF(2), tuples otherwise.
        self.field = field
        self.rows = rows
        self.cols = cols
        self._data = tuple(data)
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, entries: Sequence[Sequence[int]], cols: int | None = None) -> "Matrix":
        entries = [list(r) for r in entries]
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        q = field.order
        for r in entries:
            if len(r) != cols:
                raise ShapeMismatch(f"ragged matrix rows: expected {cols} entries, got {len(r)}")
            for v in r:
                if not (isinstance(v, int) and 0 <= v < q):
                    raise ValueError(f"entry {v!r} is not an element of {field}")
        if field.is_prime:
            data = [sum(1 << j for j, v in enumerate(r) if v) for r in entries]
        else:
            data = [tuple(r) for r in entries]
        return cls(field, rows, cols, data)

    @classmethod
    def from_bits(cls, rows_bits: Sequence[int], cols: int) -> "Matrix":
        from .field import GF2

        return cls(GF2, len(rows_bits), cols, rows_bits)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        if field.is_prime:
            return cls(field, rows, cols, [0] * rows)
        return cls(field, rows, cols, [(0,) * cols] * rows)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        if field.is_prime:
            return cls(field, n, n, [1 << i for i in range(n)])
        return cls(field, n, n, [tuple(int(i == j) for j in range(n)) for i in range(n)])

    @classmethod
    def column(cls, field: FieldSpec, values: Sequence[int]) -> "Matrix":
        return cls.from_rows(field, [[v] for v in values], cols=1)

    @classmethod
    def unit(cls, field: FieldSpec, n: int, i: int) -> "Matrix":
        return cls.column(field, [int(k == i) for k in range(n)])

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        field = blocks[0].field
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            _same_field(field, b.field)
            for i, row in enumerate(b.to_lists()):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(field, out, cols=m)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence["Matrix"], rows: int) -> "Matrix":
        vals = [c.col_values() for c in columns]
        return cls.from_rows(field, [[v[i] for v in vals] for i in range(rows)], cols=len(vals))

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if self.field.is_prime:
            return (self._data[i] >> j) & 1
        return self._data[i][j]

    def row_values(self, i: int) -> list[int]:
        if self.field.is_prime:
            r = self._data[i]
            return [(r >> j) & 1 for j in range(self.cols)]
        return list(self._data[i])

    def to_lists(self) -> list[list[int]]:
        return [self.row_values(i) for i in range(self.rows)]

    def col_values(self, j: int = 0) -> list[int]:
        return [self[i, j] for i in range(self.rows)]

    def columns(self) -> list["Matrix"]:
        return [Matrix.column(self.field, self.col_values(j)) for j in range(self.cols)]

    def flat(self) -> list[int]:
        """Entries in row-major order."""
        return [v for i in range(self.rows) for v in self.row_values(i)]

    @property
    def bitrows(self) -> tuple[int, ...]:
        if not self.field.is_prime:
            raise TypeError("packed rows only exist over GF(2)")
        return self._data

    def is_zero(self) -> bool:
        if self.field.is_prime:
            return not any(self._data)
        return all(not any(r) for r in self._data)

    def trace(self) -> int:
        if not self.is_square:
            raise NotSquare("trace of a non-square matrix")
        t = 0
        for i in range(self.rows):
            t ^= self[i, i]
        return t

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix.from_rows(self.field, [row[c0:c1] for row in self.to_lists()[r0:r1]], cols=c1 - c0)

    # -- operators -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field, self.rows, self.cols, self._data) == (other.field, other.rows, other.cols, other._data)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self._data))
        return self._hash

    def __add__(self, other: "Matrix") -> "Matrix":
        return mat_add(self, other)

    __sub__ = __add__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    @property
    def T(self) -> "Matrix":
        return mat_transpose(self)

    def scale(self, c: int) -> "Matrix":
        f = self.field
        if c == 0:
            return Matrix.zeros(f, self.rows, self.cols)
        if c == 1:
            return self
        return Matrix(f, self.rows, self.cols, [tuple(f.mul(c, v) for v in r) for r in self._data])

    def __repr__(self):
        return f"Matrix({self.field}, {self.to_lists()})"


# -- vector helpers ------------------------------------------------------------


def col_tuple(x: Matrix) -> tuple[int, ...]:
    return tuple(x.col_values(0))


def vec_to_col(field: FieldSpec, v: Sequence[int]) -> Matrix:
    return Matrix.column(field, list(v))


def _same_field(a: FieldSpec, b: FieldSpec):
    if a != b:
        raise FieldMismatch(f"field mismatch: {a} vs {b}")


def _require_square(a: Matrix):
    if not a.is_square:
        raise NotSquare(f"expected a square matrix, got {a.rows}x{a.cols}")


# -- arithmetic ------------------------------------------------------------------


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    _same_field(a.field, b.field)
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot add {a.rows}x{a.cols} and {b.rows}x{b.cols}")
    if a.field.is_prime:
        return Matrix(a.field, a.rows, a.cols, [x ^ y for x, y in zip(a._data, b._data)])
    return Matrix(a.field, a.rows, a.cols,
                  [tuple(x ^ y for x, y in zip(r, s)) for r, s in zip(a._data, b._data)])


def _gf2_mul_rows(a_rows: Sequence[int], b_rows: Sequence[int]) -> list[int]:
    out = []
    for r in a_rows:
        acc = 0
        j = 0
        while r:
            if r & 1:
                acc ^= b_rows[j]
            r >>= 1
            j += 1
        out.append(acc)
    return out


def _gen_mul_rows(field: FieldSpec, a_rows, b_rows, cols: int) -> list[tuple[int, ...]]:
    tables = field.tables()
    k = field.degree
    out = []
    if tables is not None:
        mt = tables[0]
        for r in a_rows:
            acc = [0] * cols
            for kk, a in enumerate(r):
                if a:
                    base = a << k
                    for j, b in enumerate(b_rows[kk]):
                        if b:
                            acc[j] ^= mt[base | b]
            out.append(tuple(acc))
    else:
        mul = field.mul
        for r in a_rows:
            acc = [0] * cols
            for kk, a in enumerate(r):
                if a:
                    for j, b in enumerate(b_rows[kk]):
                        if b:
                            acc[j] ^= mul(a, b)
            out.append(tuple(acc))
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    _same_field(a.field, b.field)
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    if a.field.is_prime:
        return Matrix(a.field, a.rows, b.cols, _gf2_mul_rows(a._data, b._data))
    return Matrix(a.field, a.rows, b.cols, _gen_mul_rows(a.field, a._data, b._data, b.cols))


def mat_transpose(a: Matrix) -> Matrix:
    if a.field.is_prime:
        out = [0] * a.cols
        for i, r in enumerate(a._data):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return Matrix(a.field, a.cols, a.rows, out)
    return Matrix(a.field, a.cols, a.rows, list(zip(*a._data)) if a.rows else [()] * a.cols)


def mat_pow(a: Matrix, e: int) -> Matrix:
    _require_square(a)
    result = Matrix.identity(a.field, a.rows)
    base = a
    while e:
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return result


# -- elimination ---------------------------------------------------------------


def _rref_lists(field: FieldSpec, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns). Mutates ``rows``."""
    mul, inv = field.mul, field.inv
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        lead = rows[r][c]
        if lead != 1:
            il = inv(lead)
            rows[r] = [mul(il, v) for v in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v ^ mul(f, w) for v, w in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _rref_bits(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        bit = 1 << c
        p = next((i for i in range(r, nrows) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if a.field.is_prime:
        rows, piv = _rref_bits(list(a._data), a.cols)
        return Matrix(a.field, len(rows), a.cols, rows), piv
    rows, piv = _rref_lists(a.field, [list(r) for r in a._data], a.cols)
    return Matrix(a.field, len(rows), a.cols, [tuple(r) for r in rows]), piv


def mat_rank(a: Matrix) -> int:
    return len(rref(a)[1])


def canonical_basis(field: FieldSpec, vectors: Iterable[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Reduced echelon basis (as tuples) of the span of ``vectors`` in F^n."""
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    m, _ = rref(Matrix.from_rows(field, rows, cols=n))
    return [tuple(r) for r in m.to_lists()]


def mat_kernel_basis(a: Matrix) -> list[Matrix]:
    """Right kernel of ``a``, as columns in reduced column-echelon form."""
    f = a.field
    red, pivots = rref(a)
    rows = red.to_lists()
    free = [c for c in range(a.cols) if c not in set(pivots)]
    vecs = []
    for fc in free:
        v = [0] * a.cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = rows[r][fc]
        vecs.append(v)
    return [Matrix.column(f, v) for v in canonical_basis(f, vecs, a.cols)]


def mat_solve(a: Matrix, y: Matrix) -> Matrix | None:
    """Some ``x`` with ``a @ x == y``, or None when the system is inconsistent."""
    _same_field(a.field, y.field)
    if y.rows != a.rows or y.cols != 1:
        raise ShapeMismatch(f"right-hand side must be a {a.rows}x1 column")
    f = a.field
    aug = [ra + [yv] for ra, yv in zip(a.to_lists(), y.col_values())]
    red, pivots = rref(Matrix.from_rows(f, aug, cols=a.cols + 1)) if aug else (None, [])
    if a.cols in pivots:
        return None
    x = [0] * a.cols
    if red is not None:
        rows = red.to_lists()
        for r, pc in enumerate(pivots):
            x[pc] = rows[r][a.cols]
    return Matrix.column(f, x)


def mat_inverse(a: Matrix) -> Matrix:
    _require_square(a)
    n = a.rows
    f = a.field
    if n == 0:
        return a
    if f.is_prime:
        rows = [r | (1 << (n + i)) for i, r in enumerate(a._data)]
        red, piv = _rref_bits(rows, n)
        if len(piv) < n or piv[-1] >= n:
            raise Singular("matrix is singular")
        return Matrix(f, n, n, [r >> n for r in red])
    rows = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a._data)]
    red, piv = _rref_lists(f, rows, 2 * n)
    if len(piv) < n or piv[n - 1] >= n:
        raise Singular("matrix is singular")
    return Matrix(f, n, n, [tuple(r[n:]) for r in red])


# -- characteristic polynomial and nilpotency ------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Polynomial over ``field``; coefficients little-endian, trailing zeros stripped."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def monomial(cls, field: FieldSpec, n: int) -> "Polynomial":
        return cls(field, (0,) * n + (1,))

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if c == 1 and mono:
                terms.append(mono)
            elif mono:
                terms.append(f"{c}*{mono}")
            else:
                terms.append(str(c))
        return " + ".join(terms)


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] ^= v
    return out


def _poly_scale(field: FieldSpec, a: list[int], c: int) -> list[int]:
    return [field.mul(c, v) for v in a]


def hessenberg(a: Matrix) -> list[list[int]]:
    """Upper Hessenberg matrix similar to ``a`` (entries as lists)."""
    _require_square(a)
    f = a.field
    n = a.rows
    h = a.to_lists()
    mul, inv = f.mul, f.inv
    for j in range(n - 2):
        p = next((i for i in range(j + 1, n) if h[i][j]), None)
        if p is None:
            continue
        if p != j + 1:
            h[p], h[j + 1] = h[j + 1], h[p]
            for row in h:
                row[p], row[j + 1] = row[j + 1], row[p]
        piv_inv = inv(h[j + 1][j])
        for r in range(j + 2, n):
            if not h[r][j]:
                continue
            fac = mul(h[r][j], piv_inv)
            # row_r -= fac*row_{j+1}, then col_{j+1} += fac*col_r keeps similarity.
            h[r] = [v ^ mul(fac, w) for v, w in zip(h[r], h[j + 1])]
            for row in h:
                row[j + 1] ^= mul(fac, row[r])
    return h


def mat_charpoly(a: Matrix) -> Polynomial:
    """det(t*I - a) via Hessenberg reduction and the three-term recurrence."""
    _require_square(a)
    f = a.field
    n = a.rows
    h = hessenberg(a)
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        # (t + h_mm) * p_{m-1}
        cur = _poly_add([0] + prev, _poly_scale(f, prev, h[m - 1][m - 1]))
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = f.mul(prod, h[i][i - 1])
            if not prod:
                break
            c = f.mul(h[i - 1][m - 1], prod)
            if c:
                cur = _poly_add(cur, _poly_scale(f, polys[i - 1], c))
        polys.append(cur)
    return Polynomial(f, tuple(polys[n]))


def _gf2_nilpotent_rows(rows: Sequence[int], n: int) -> bool:
    steps = (n - 1).bit_length() if n > 1 else 0
    m = rows
    for _ in range(steps):
        m = _gf2_mul_rows(m, m)
        if not any(m):
            return True
    return not any(m)


def mat_is_nilpotent(a: Matrix) -> bool:
    """a^n == 0, tested by ceil(log2 n) squarings."""
    _require_square(a)
    n = a.rows
    if a.field.is_prime:
        return _gf2_nilpotent_rows(a._data, n)
    steps = (n - 1).bit_length() if n > 1 else 0
    m = a
    for _ in range(steps):
        if m.is_zero():
            return True
        m = m @ m
    return m.is_zero()


def mat_is_symmetric(a: Matrix) -> bool:
    _require_square(a)
    return a == mat_transpose(a)


def mat_is_alternating(a: Matrix) -> bool:
    _require_square(a)
    return mat_is_symmetric(a) and all(a[i, i] == 0 for i in range(a.rows))

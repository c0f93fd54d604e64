"""Builders for large nilpotent spaces of b-symmetric / b-alternating matrices.

All builders work in a permuted normal basis where the Gram matrix is

    [[0, 0, I], [0, D, 0], [I, 0, T]]

and every generator is block upper triangular with nilpotent diagonal blocks.
Results are returned in the caller's original coordinates unless
``coords="normal"`` is requested, in which case the Gram matrix of the space
is the normal shape ``P^T S P``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import BadInput, Degenerate, Singular, WrongShape
from .field import FieldSpec
from .form import BilinearForm, NormalBasisData, hyperbolic, normal_shape
from .matrix import Matrix, mat_inverse, mat_is_alternating, mat_is_symmetric, mat_rank


class Kind(str, enum.Enum):
    B_SYMMETRIC = "sym"
    B_ALTERNATING = "alt"

    @classmethod
    def parse(cls, text: "str | Kind") -> "Kind":
        if isinstance(text, Kind):
            return text
        try:
            return cls(text)
        except ValueError:
            raise BadInput(f"kind must be 'sym' or 'alt', got {text!r}") from None


def satisfies_kind(gram: Matrix, m: Matrix, kind: Kind) -> bool:
    sm = gram @ m
    if kind is Kind.B_SYMMETRIC:
        return mat_is_symmetric(sm)
    return mat_is_alternating(sm)


@dataclass(frozen=True)
class MatrixSpace:
    """A linear space of n x n matrices, spanned by ``basis``, over a fixed Gram matrix."""

    gram: Matrix
    kind: Kind
    basis: tuple[Matrix, ...] = dc_field(default=())

    @property
    def field(self) -> FieldSpec:
        return self.gram.field

    @property
    def n(self) -> int:
        return self.gram.rows

    @property
    def dim(self) -> int:
        return len(self.basis)

    def validate(self) -> "MatrixSpace":
        """Raise BadInput unless the basis is independent and of the declared kind."""
        n = self.n
        for i, m in enumerate(self.basis):
            if m.shape != (n, n) or m.field != self.field:
                raise BadInput(f"basis element {i} is not an {n}x{n} matrix over {self.field}")
            if not satisfies_kind(self.gram, m, self.kind):
                raise BadInput(f"basis element {i} is not b-{'symmetric' if self.kind is Kind.B_SYMMETRIC else 'alternating'}")
        if self.basis and independent_rank(self.basis) != len(self.basis):
            raise BadInput("basis matrices are linearly dependent")
        return self

    def combination(self, coeffs: Sequence[int]) -> Matrix:
        f = self.field
        out = Matrix.zeros(f, self.n)
        for c, m in zip(coeffs, self.basis):
            if c:
                out = out + m.scale(c)
        return out


def independent_rank(mats: Sequence[Matrix]) -> int:
    f = mats[0].field
    return mat_rank(Matrix.from_rows(f, [m.flat() for m in mats], cols=mats[0].rows * mats[0].cols))


def _conj(t: Matrix, t_inv: Matrix, m: Matrix) -> Matrix:
    return t @ m @ t_inv


def change_basis(space: MatrixSpace, p: Matrix) -> MatrixSpace:
    """Re-express ``space`` in the basis given by the columns of ``p``."""
    if p.shape != (space.n, space.n):
        raise BadInput(f"basis change must be {space.n}x{space.n}")
    p_inv = mat_inverse(p)
    gram = p.T @ space.gram @ p
    return MatrixSpace(gram, space.kind, tuple(p_inv @ m @ p for m in space.basis))


def _perm_matrix(field: FieldSpec, perm: Sequence[int]) -> Matrix:
    """Column j is the unit vector e_{perm[j]}."""
    n = len(perm)
    return Matrix.from_rows(field, [[int(perm[j] == i) for j in range(n)] for i in range(n)], cols=n)


def _unit_matrix(field: FieldSpec, r: int, c: int, i: int, j: int) -> Matrix:
    return Matrix.from_rows(field, [[int(a == i and b == j) for b in range(c)] for a in range(r)], cols=c)


def _assemble(field: FieldSpec, blocks: list[list[Matrix | None]], sizes: list[int]) -> Matrix:
    n = sum(sizes)
    out = [[0] * n for _ in range(n)]
    r0 = 0
    for bi, rs in enumerate(sizes):
        c0 = 0
        for bj, cs in enumerate(sizes):
            blk = blocks[bi][bj]
            if blk is not None:
                for i, row in enumerate(blk.to_lists()):
                    out[r0 + i][c0:c0 + cs] = row
            c0 += cs
        r0 += rs
    return Matrix.from_rows(field, out, cols=n)


def _triangular_generators(field: FieldSpec, nu: int, delta: Matrix, theta: Matrix,
                           kind: Kind, inner: Sequence[Matrix] = ()) -> list[Matrix]:
    """Generators of [[A, (D E)^T, T A^T + J], [0, N, E], [0, 0, A^T]].

    Order: A over the strict upper triangle (row-major), then E (row-major),
    then J, then the inner blocks N.
    """
    mid = delta.rows
    sizes = [nu, mid, nu]
    gens = []
    for i in range(nu):
        for j in range(i + 1, nu):
            a = _unit_matrix(field, nu, nu, i, j)
            gens.append(_assemble(field, [[a, None, theta @ a.T], [None, None, None], [None, None, a.T]], sizes))
    for r in range(mid):
        for c in range(nu):
            e = _unit_matrix(field, mid, nu, r, c)
            gens.append(_assemble(field, [[None, (delta @ e).T, None], [None, None, e], [None, None, None]], sizes))
    for i in range(nu):
        for j in range(i, nu):
            if i == j and kind is Kind.B_ALTERNATING:
                continue
            jm = _unit_matrix(field, nu, nu, i, j)
            if i != j:
                jm = jm + jm.T
            gens.append(_assemble(field, [[None, None, jm], [None, None, None], [None, None, None]], sizes))
    for nm in inner:
        gens.append(_assemble(field, [[None, None, None], [None, nm, None], [None, None, None]], sizes))
    return gens


def _diag(field: FieldSpec, values: Sequence[int]) -> Matrix:
    k = len(values)
    return Matrix.from_rows(field, [[values[i] if i == j else 0 for j in range(k)] for i in range(k)], cols=k)


def _finish(nb: NormalBasisData, gram_original: Matrix, perm: list[int], kind: Kind,
            gens_c: list[Matrix], coords: str) -> MatrixSpace:
    f = gram_original.field
    pi = _perm_matrix(f, perm)
    if coords == "normal":
        t, gram = pi, nb.shape()
    elif coords == "original":
        t, gram = nb.basis_change @ pi, gram_original
    else:
        raise BadInput(f"coords must be 'normal' or 'original', got {coords!r}")
    t_inv = mat_inverse(t)
    space = MatrixSpace(gram, kind, tuple(_conj(t, t_inv, m) for m in gens_c))
    return space.validate()


def _check_nb(nb: NormalBasisData, gram_original: Matrix):
    if mat_rank(gram_original) < gram_original.rows:
        raise Degenerate("construction requires a non-degenerate form")
    if not nb.certifies(gram_original):
        raise BadInput("normal basis data does not certify the given Gram matrix")


def construct_general(nb: NormalBasisData, gram_original: Matrix, kind: "Kind | str",
                      coords: str = "original") -> MatrixSpace:
    """Nilpotent space of dimension nu(n-nu) (sym) or nu(n-nu-1) (alt)."""
    kind = Kind.parse(kind)
    _check_nb(nb, gram_original)
    f = gram_original.field
    p, q, m = nb.p_count, nb.q_count, nb.m_count
    n, nu = nb.n, q + m
    perm = (list(range(p, p + q)) + list(range(p + 2 * q, p + 2 * q + m)) + list(range(p))
            + list(range(p + q, p + 2 * q)) + list(range(p + 2 * q + m, n)))
    delta = _diag(f, nb.diag_values[:p])
    theta = _diag(f, list(nb.diag_values[p:]) + [0] * m)
    gens = _triangular_generators(f, nu, delta, theta, kind)
    return _finish(nb, gram_original, perm, kind, gens, coords)


def extend_alternating(a: Matrix, m: Matrix, x: Matrix) -> Matrix:
    """Bordered matrix [[0, X^T A^T], [X, M]]."""
    n = a.rows
    if not a.is_square or not mat_is_alternating(a):
        raise BadInput("A must be a square alternating matrix")
    try:
        mat_inverse(a)
    except Singular:
        raise BadInput("A must be invertible") from None
    if m.shape != (n, n) or not mat_is_symmetric(a @ m):
        raise BadInput("M must be an A-symmetric n x n matrix")
    if x.shape != (n, 1):
        raise BadInput(f"X must be a {n}x1 column")
    top = (x.T @ a.T).row_values(0)
    rows = [[0] + top] + [[x[i, 0]] + m.row_values(i) for i in range(n)]
    return Matrix.from_rows(a.field, rows, cols=n + 1)


def special_odd_gram(m_count: int, field: FieldSpec) -> Matrix:
    return Matrix.block_diag(Matrix.identity(field, 1), hyperbolic(field, 2 * m_count))


def construct_special_odd(m_count: int, field: FieldSpec) -> MatrixSpace:
    """b-alternating nilpotent space of dimension m(m+1) over I_1 + H_{2m}."""
    if m_count < 0:
        raise BadInput("m_count must be non-negative")
    a = hyperbolic(field, 2 * m_count)
    inner = _hyperbolic_alt_space(field, m_count)
    zero_x = Matrix.zeros(field, 2 * m_count, 1)
    basis = [extend_alternating(a, mi, zero_x) for mi in inner]
    zero_m = Matrix.zeros(field, 2 * m_count)
    basis += [extend_alternating(a, zero_m, Matrix.unit(field, 2 * m_count, j)) for j in range(2 * m_count)]
    return MatrixSpace(special_odd_gram(m_count, field), Kind.B_ALTERNATING, tuple(basis)).validate()


def _hyperbolic_alt_space(field: FieldSpec, m: int) -> list[Matrix]:
    h = hyperbolic(field, 2 * m)
    nb = NormalBasisData(0, 0, m, (), Matrix.identity(field, 2 * m))
    return list(construct_general(nb, h, Kind.B_ALTERNATING, coords="normal").basis)


def construct_general_odd(nb: NormalBasisData, gram_original: Matrix,
                          coords: str = "original") -> MatrixSpace:
    """b-alternating nilpotent space of dimension nu(n-nu) - q when p = 1."""
    if nb.p_count != 1:
        raise WrongShape(f"construction needs p = 1, got p = {nb.p_count}")
    _check_nb(nb, gram_original)
    f = gram_original.field
    q, m = nb.q_count, nb.m_count
    n = nb.n
    perm = list(range(1, q + 1)) + [0] + list(range(2 * q + 1, 2 * q + 1 + 2 * m)) + list(range(q + 1, 2 * q + 1))
    alpha = nb.diag_values[0]
    delta = Matrix.block_diag(Matrix.from_rows(f, [[alpha]]), hyperbolic(f, 2 * m))
    theta = _diag(f, nb.diag_values[1:])
    # alpha^{-1} b has normal basis (e_1, e_2..e_{m+1}, alpha e_{m+2}..alpha e_{2m+1})
    d = _diag(f, [1] * (m + 1) + [alpha] * m)
    d_inv = mat_inverse(d)
    inner = [d @ nm @ d_inv for nm in construct_special_odd(m, f).basis]
    gens = _triangular_generators(f, q, delta, theta, Kind.B_ALTERNATING, inner)
    space = _finish(nb, gram_original, perm, Kind.B_ALTERNATING, gens, coords)
    assert space.dim == q * (q - 1) + q * (n - 2 * q) + m * (m + 1)
    return space


def construct_for_form(form: BilinearForm, nb: NormalBasisData, kind: "Kind | str",
                       coords: str = "original") -> MatrixSpace:
    """The construction of largest dimension available for ``kind``."""
    kind = Kind.parse(kind)
    if kind is Kind.B_ALTERNATING and nb.p_count == 1:
        return construct_general_odd(nb, form.gram, coords)
    return construct_general(nb, form.gram, kind, coords)


def ambient_basis(form: BilinearForm, kind: "Kind | str") -> list[Matrix]:
    """Basis of all S-symmetric (or S-alternating) matrices: S^{-1} times symmetric units."""
    kind = Kind.parse(kind)
    f, n = form.field, form.n
    s_inv = mat_inverse(form.gram)
    out = []
    for i in range(n):
        for j in range(i, n):
            if i == j and kind is Kind.B_ALTERNATING:
                continue
            e = _unit_matrix(f, n, n, i, j)
            if i != j:
                e = e + e.T
            out.append(s_inv @ e)
    return out


def expected_dimension(n: int, nu: int, sker: int, kind: "Kind | str") -> int:
    """Greatest dimension of a nilpotent subspace of the given kind, by the main theorem."""
    kind = Kind.parse(kind)
    if kind is Kind.B_SYMMETRIC:
        return nu * (n - nu)
    if n == 2 * nu + 1:
        return nu * (n - nu) - sker
    return nu * (n - nu - 1)


__all__ = [
    "Kind", "MatrixSpace", "ambient_basis", "change_basis", "construct_for_form",
    "construct_general", "construct_general_odd", "construct_special_odd", "expected_dimension",
    "extend_alternating", "normal_shape", "satisfies_kind", "special_odd_gram",
]

"""Rank <= 2 b-symmetric and b-alternating endomorphisms.

With Gram matrix S, the symmetric square ``x (x) x`` is ``x x^T S`` and the
alternating tensor ``x ^ y`` is ``(x y^T + y x^T) S``.
"""

from __future__ import annotations

from .errors import Degenerate, NotBSymmetric, PreconditionFailed, ShapeMismatch, WrongRank
from .form import BilinearForm, _check_vec, orth_complement
from .matrix import Matrix, mat_is_symmetric, mat_pow, mat_rank, mat_solve


def is_b_symmetric(form: BilinearForm, m: Matrix) -> bool:
    return mat_is_symmetric(form.gram @ m)


def is_b_alternating(form: BilinearForm, m: Matrix) -> bool:
    sm = form.gram @ m
    return mat_is_symmetric(sm) and all(sm[i, i] == 0 for i in range(sm.rows))


def sym_square(form: BilinearForm, x: Matrix) -> Matrix:
    _check_vec(form, x)
    return x @ x.T @ form.gram


def alt_tensor(form: BilinearForm, x: Matrix, y: Matrix) -> Matrix:
    _check_vec(form, x)
    _check_vec(form, y)
    return (x @ y.T + y @ x.T) @ form.gram


def _leading(x: Matrix) -> int | None:
    return next((i for i in range(x.rows) if x[i, 0]), None)


def _check_endo(form: BilinearForm, m: Matrix):
    if m.shape != (form.n, form.n):
        raise ShapeMismatch(f"expected a {form.n}x{form.n} matrix, got {m.rows}x{m.cols}")
    if form.is_degenerate:
        raise Degenerate("decomposition requires a non-degenerate form")


def rank_one_decompose(form: BilinearForm, m: Matrix) -> tuple[int, Matrix]:
    """Write a rank-one b-symmetric ``m`` as ``alpha * x (x) x``.

    ``x`` is normalised so that its first nonzero coordinate is 1.
    """
    _check_endo(form, m)
    if not is_b_symmetric(form, m):
        raise NotBSymmetric("matrix is not b-symmetric")
    r = mat_rank(m)
    if r != 1:
        raise WrongRank(f"expected rank 1, got rank {r}")
    f = form.field
    col = next(c for c in m.columns() if not c.is_zero())
    lead = _leading(col)
    x = col.scale(f.inv(col[lead, 0]))
    row = (x.T @ form.gram).row_values(0)
    k = next(j for j, v in enumerate(row) if v)
    alpha = f.mul(m[lead, k], f.inv(row[k]))
    if sym_square(form, x).scale(alpha) != m:
        raise NotBSymmetric("rank-one matrix is not a multiple of a symmetric square")
    return alpha, x


def small_rank_decompose(form: BilinearForm, m: Matrix, x: Matrix) -> tuple[int, Matrix]:
    """Write ``m`` as ``alpha * x (x) x + x ^ y`` with ``y`` orthogonal to ``x``.

    ``y`` is only determined modulo ``F x``; the returned one vanishes at the
    leading coordinate of ``x``.
    """
    _check_endo(form, m)
    _check_vec(form, x)
    f, n = form.field, form.n
    xv = x.col_values()
    if not any(xv):
        raise PreconditionFailed("x must be nonzero")
    if form.q(xv) != 0:
        raise PreconditionFailed("x must be isotropic")
    if not is_b_symmetric(form, m):
        raise PreconditionFailed("matrix is not b-symmetric")
    if not (m @ x).is_zero():
        raise PreconditionFailed("matrix does not vanish at x")
    for z in orth_complement(form, [x]):
        img = m @ z
        if mat_rank(Matrix.from_columns(f, [x, img], n)) > 1:
            raise PreconditionFailed("matrix does not map the orthogonal of x into F x")
    # unknowns (alpha, y_1..y_n): M = alpha*T0 + sum_k y_k*T_k, plus b(x, y) = 0
    t0 = sym_square(form, x).flat()
    tk = [alt_tensor(form, x, Matrix.unit(f, n, k)).flat() for k in range(n)]
    sx = (form.gram @ x).col_values()
    rows = [[t0[e]] + [t[e] for t in tk] for e in range(n * n)]
    rows.append([0] + sx)
    rhs = Matrix.column(f, m.flat() + [0])
    sol = mat_solve(Matrix.from_rows(f, rows, cols=n + 1), rhs)
    if sol is None:
        raise PreconditionFailed("no decomposition exists")
    vals = sol.col_values()
    alpha, y = vals[0], Matrix.column(f, vals[1:])
    lead = _leading(x)
    if y[lead, 0]:
        y = y + x.scale(y[lead, 0])
    recon = sym_square(form, x).scale(alpha) + alt_tensor(form, x, y)
    if recon != m or not mat_pow(m, 3).is_zero():
        raise PreconditionFailed("decomposition failed its reconstruction check")
    return alpha, y


__all__ = [
    "alt_tensor", "is_b_alternating", "is_b_symmetric", "rank_one_decompose",
    "small_rank_decompose", "sym_square",
]

from __future__ import annotations

import pytest

from char2forms.errors import Degenerate, NotBSymmetric, PreconditionFailed, ShapeMismatch, WrongRank
from char2forms.field import GF2, GF4
from char2forms.form import BilinearForm, hyperbolic, orth_complement
from char2forms.matrix import Matrix, mat_is_alternating, mat_is_symmetric, mat_pow, mat_rank
from char2forms.tensors import (
    alt_tensor,
    is_b_alternating,
    is_b_symmetric,
    rank_one_decompose,
    small_rank_decompose,
    sym_square,
)

from conftest import FIELDS, all_symmetric_gf2, all_vectors, identity_form, random_nondegenerate


def e(f, n, i):
    return Matrix.unit(f, n, i)


def vec(f, v):
    return Matrix.column(f, list(v))


H2 = BilinearForm(hyperbolic(GF2, 2))
H22 = BilinearForm(Matrix.block_diag(hyperbolic(GF2, 2), hyperbolic(GF2, 2)))


def test_sym_square_examples():
    assert sym_square(identity_form(2), Matrix.zeros(GF2, 2, 1)).is_zero()
    assert sym_square(identity_form(2), e(GF2, 2, 0)).to_lists() == [[1, 0], [0, 0]]
    m = sym_square(H2, e(GF2, 2, 0))
    assert m.to_lists() == [[0, 1], [0, 0]]
    assert m.trace() == 0 == H2.q([1, 0])
    with pytest.raises(ShapeMismatch):
        sym_square(H2, e(GF2, 3, 0))


def test_alt_tensor_examples():
    x = e(GF2, 2, 0)
    assert alt_tensor(H2, x, x).is_zero()
    m = alt_tensor(H2, e(GF2, 2, 0), e(GF2, 2, 1))
    assert m == Matrix.identity(GF2, 2)
    assert mat_is_alternating(H2.gram @ m)
    m = alt_tensor(identity_form(3), e(GF2, 3, 0), e(GF2, 3, 1))
    assert m.to_lists() == [[0, 1, 0], [1, 0, 0], [0, 0, 0]]


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_tensor_kinds_and_trace(f, rng):
    for _ in range(60):
        n = rng.randrange(1, 6)
        form = BilinearForm(random_nondegenerate(rng, f, n))
        x = vec(f, [rng.randrange(f.order) for _ in range(n)])
        y = vec(f, [rng.randrange(f.order) for _ in range(n)])
        s = sym_square(form, x)
        a = alt_tensor(form, x, y)
        assert mat_is_symmetric(form.gram @ s) and is_b_symmetric(form, s)
        assert mat_is_alternating(form.gram @ a) and is_b_alternating(form, a)
        assert s.trace() == form.q(x.col_values())
        assert mat_rank(s) == (1 if any(x.col_values()) else 0)
        r = mat_rank(Matrix.from_columns(f, [x, y], n))
        assert mat_rank(a) == (2 if r == 2 else 0)
        if r == 2:
            both = Matrix.from_columns(f, [x, y] + a.columns(), n)
            assert mat_rank(both) == 2  # range is span{x, y}


def test_alt_tensor_zero_iff_dependent_exhaustive():
    for n in range(1, 4):
        for g in all_symmetric_gf2(n):
            form = BilinearForm(g)
            if form.is_degenerate:
                continue
            for xv in all_vectors(GF2, n):
                for yv in all_vectors(GF2, n):
                    x, y = vec(GF2, xv), vec(GF2, yv)
                    dependent = mat_rank(Matrix.from_columns(GF2, [x, y], n)) < 2
                    assert alt_tensor(form, x, y).is_zero() == dependent


def test_small_rank_cube_vanishes_exhaustive():
    forms = [BilinearForm(g) for n in range(2, 4) for g in all_symmetric_gf2(n)]
    forms += [identity_form(4), H22]
    for form in forms:
        if form.is_degenerate:
            continue
        n = form.n
        for xv in all_vectors(GF2, n):
            if not any(xv) or form.q(xv):
                continue
            x = vec(GF2, xv)
            for yv in all_vectors(GF2, n):
                if form.b(xv, yv):
                    continue
                for alpha in (0, 1):
                    m = sym_square(form, x).scale(alpha) + alt_tensor(form, x, vec(GF2, yv))
                    assert mat_pow(m, 3).is_zero()


# -- decompositions ---------------------------------------------------------------------------


def test_rank_one_examples():
    i2 = identity_form(2)
    alpha, x = rank_one_decompose(i2, sym_square(i2, e(GF2, 2, 0)))
    assert (alpha, x.col_values()) == (1, [1, 0])
    i2g = identity_form(2, GF4)
    m = sym_square(i2g, e(GF4, 2, 1)).scale(2)
    alpha, x = rank_one_decompose(i2g, m)
    assert sym_square(i2g, x).scale(alpha) == m
    assert (alpha, x.col_values()) == (2, [0, 1])
    with pytest.raises(WrongRank):
        rank_one_decompose(i2, Matrix.identity(GF2, 2))
    with pytest.raises(NotBSymmetric):
        rank_one_decompose(i2, Matrix.from_rows(GF2, [[0, 1], [0, 0]]))
    with pytest.raises(Degenerate):
        rank_one_decompose(BilinearForm(Matrix.zeros(GF2, 2)), Matrix.zeros(GF2, 2))


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_rank_one_roundtrip(f, rng):
    for _ in range(60):
        n = rng.randrange(1, 6)
        form = BilinearForm(random_nondegenerate(rng, f, n))
        xv = [rng.randrange(f.order) for _ in range(n)]
        if not any(xv):
            continue
        c = rng.randrange(1, f.order)
        m = sym_square(form, vec(f, xv)).scale(c)
        alpha, x = rank_one_decompose(form, m)
        assert alpha and sym_square(form, x).scale(alpha) == m
        lead = next(i for i, v in enumerate(x.col_values()) if v)
        assert x[lead, 0] == 1


def test_small_rank_examples():
    x = e(GF2, 4, 0)
    alpha, y = small_rank_decompose(H22, Matrix.zeros(GF2, 4), x)
    assert alpha == 0 and y.is_zero()
    m = alt_tensor(H22, x, e(GF2, 4, 2))
    alpha, y = small_rank_decompose(H22, m, x)
    assert alpha == 0 and y.col_values() == [0, 0, 1, 0]
    alpha, y = small_rank_decompose(H22, sym_square(H22, x), x)
    assert alpha == 1 and y.is_zero()


def test_small_rank_preconditions():
    with pytest.raises(PreconditionFailed):
        small_rank_decompose(identity_form(3), Matrix.zeros(GF2, 3), vec(GF2, [1, 0, 0]))  # not isotropic
    with pytest.raises(PreconditionFailed):
        small_rank_decompose(H22, Matrix.zeros(GF2, 4), Matrix.zeros(GF2, 4, 1))
    with pytest.raises(PreconditionFailed):
        small_rank_decompose(H22, Matrix.identity(GF2, 4), e(GF2, 4, 0))


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_small_rank_roundtrip(f, rng):
    done = 0
    while done < 60:
        n = rng.randrange(2, 6)
        form = BilinearForm(random_nondegenerate(rng, f, n))
        xv = [rng.randrange(f.order) for _ in range(n)]
        if not any(xv) or form.q(xv):
            continue
        x = vec(f, xv)
        perp = orth_complement(form, [x])
        y = Matrix.zeros(f, n, 1)
        for p in perp:
            y = y + p.scale(rng.randrange(f.order))
        alpha = rng.randrange(f.order)
        m = sym_square(form, x).scale(alpha) + alt_tensor(form, x, y)
        a2, y2 = small_rank_decompose(form, m, x)
        assert sym_square(form, x).scale(a2) + alt_tensor(form, x, y2) == m
        assert form.b(xv, y2.col_values()) == 0
        if is_b_alternating(form, m):
            assert a2 == 0
        done += 1

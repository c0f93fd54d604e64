from __future__ import annotations

import itertools

import pytest

from char2forms.errors import BudgetExceeded, Degenerate, NotSymmetric, ShapeMismatch
from char2forms.field import GF2, GF4
from char2forms.form import (
    BilinearForm,
    a_transform,
    form_new,
    hyperbolic,
    invariants,
    is_totally_singular,
    ker_q,
    normal_basis,
    normal_shape,
    orth_complement,
    quad_eval,
    radical,
    reduce_by_radical,
    sker_q,
    witt_index,
    witt_index_bruteforce,
)
from char2forms.matrix import Matrix, mat_is_alternating, mat_rank

from conftest import FIELDS, all_symmetric_gf2, all_vectors, identity_form, random_invertible, random_nondegenerate

H2 = hyperbolic(GF2, 2)


def col(f, *vals):
    return Matrix.column(f, list(vals))


def cols(vs):
    return [c.col_values() for c in vs]


def span(f, basis, n):
    out = set()
    for coeffs in itertools.product(range(f.order), repeat=len(basis)):
        v = [0] * n
        for c, b in zip(coeffs, basis):
            for i, x in enumerate(b.col_values()):
                v[i] ^= f.mul(c, x)
        out.add(tuple(v))
    return out


def brute_ker_q(form):
    return {v for v in all_vectors(form.field, form.n) if form.q(v) == 0}


def brute_sker_q(form):
    ker = brute_ker_q(form)
    return {v for v in ker if all(form.b(v, w) == 0 for w in ker)}


def congruent(rng, gram):
    p = random_invertible(rng, gram.field, gram.rows)
    return p.T @ gram @ p


# -- construction and Q -----------------------------------------------------------


def test_form_new_examples():
    i3 = form_new(Matrix.identity(GF2, 3))
    assert not i3.alternating
    assert form_new(H2).alternating
    with pytest.raises(NotSymmetric):
        form_new(Matrix.from_rows(GF2, [[0, 1], [0, 0]]))
    with pytest.raises(ShapeMismatch):
        form_new(Matrix.zeros(GF2, 2, 3))


def test_quad_eval_examples():
    assert quad_eval(identity_form(3), col(GF2, 1, 1, 1)) == 1
    assert quad_eval(identity_form(2), col(GF2, 1, 1)) == 0
    h = BilinearForm(hyperbolic(GF4, 4))
    for v in all_vectors(GF4, 4):
        assert h.q(v) == 0
    with pytest.raises(ShapeMismatch):
        quad_eval(identity_form(3), col(GF2, 1, 1))


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_quad_additive_and_homogeneous(f, rng):
    for _ in range(30):
        n = rng.randrange(1, 5)
        form = BilinearForm(random_nondegenerate(rng, f, n))
        x = [rng.randrange(f.order) for _ in range(n)]
        y = [rng.randrange(f.order) for _ in range(n)]
        lam = rng.randrange(f.order)
        assert form.q([a ^ b for a, b in zip(x, y)]) == form.q(x) ^ form.q(y)
        assert form.q([f.mul(lam, a) for a in x]) == f.mul(f.mul(lam, lam), form.q(x))
        assert form.q(x) == form.b(x, x)


# -- radical ------------------------------------------------------------------------


def test_radical_examples():
    assert radical(identity_form(3)) == []
    red, proj = reduce_by_radical(identity_form(3))
    assert red.gram == Matrix.identity(GF2, 3) and proj == Matrix.identity(GF2, 3)
    zero = BilinearForm(Matrix.zeros(GF2, 2))
    assert len(radical(zero)) == 2
    assert reduce_by_radical(zero)[0].n == 0
    g = Matrix.block_diag(Matrix.identity(GF2, 2), Matrix.zeros(GF2, 1))
    form = BilinearForm(g)
    assert cols(radical(form)) == [[0, 0, 1]]
    red, proj = reduce_by_radical(form)
    assert red.gram == Matrix.identity(GF2, 2)
    assert proj.shape == (2, 3)


def test_reduce_by_radical_random(rng):
    for f in FIELDS:
        for _ in range(30):
            n = rng.randrange(1, 6)
            r = rng.randrange(0, n + 1)
            g = Matrix.block_diag(random_nondegenerate(rng, f, r), Matrix.zeros(f, n - r))
            g = congruent(rng, g)
            red, proj = reduce_by_radical(BilinearForm(g))
            assert red.n == r == mat_rank(g)
            assert not red.is_degenerate


# -- Ker Q / SKer Q -------------------------------------------------------------------


def test_ker_q_examples():
    i3 = identity_form(3)
    assert cols(ker_q(i3)) == [[1, 0, 1], [0, 1, 1]]
    assert len(ker_q(BilinearForm(H2))) == 2
    assert cols(ker_q(identity_form(2))) == [[1, 1]]


def test_sker_q_examples():
    assert sker_q(identity_form(3)) == []
    assert sker_q(BilinearForm(hyperbolic(GF4, 4))) == []
    assert cols(sker_q(identity_form(2))) == [[1, 1]]
    with pytest.raises(Degenerate):
        sker_q(BilinearForm(Matrix.zeros(GF2, 2)))


def test_ker_and_sker_match_brute_force_all_gf2():
    for n in range(0, 5):
        for g in all_symmetric_gf2(n):
            form = BilinearForm(g)
            assert span(GF2, ker_q(form), n) == brute_ker_q(form)
            if not form.is_degenerate:
                assert span(GF2, sker_q(form), n) == brute_sker_q(form)


def test_ker_and_sker_match_brute_force_gf4(rng):
    for _ in range(40):
        n = rng.randrange(1, 4)
        form = BilinearForm(random_nondegenerate(rng, GF4, n))
        assert span(GF4, ker_q(form), n) == brute_ker_q(form)
        assert span(GF4, sker_q(form), n) == brute_sker_q(form)
        assert len(ker_q(form)) in (n - 1, n)


def test_sker_inside_ker_and_its_perp(rng):
    for f in FIELDS:
        for _ in range(40):
            form = BilinearForm(random_nondegenerate(rng, f, rng.randrange(1, 7)))
            ker = ker_q(form)
            perp = orth_complement(form, ker)
            ker_span_basis = [tuple(c.col_values()) for c in ker]
            for v in sker_q(form):
                x = v.col_values()
                assert form.q(x) == 0
                assert all(form.b(x, k) == 0 for k in ker_span_basis)
                assert mat_rank(Matrix.from_columns(f, perp + [v], form.n)) == len(perp)


# -- orthogonal complements -----------------------------------------------------------


def test_orth_complement_examples():
    h = BilinearForm(H2)
    assert cols(orth_complement(h, [col(GF2, 1, 0)])) == [[1, 0]]
    assert cols(orth_complement(identity_form(2), [col(GF2, 1, 1)])) == [[1, 1]]
    assert len(orth_complement(identity_form(3), [])) == 3


def test_orth_complement_dimension(rng):
    for f in FIELDS:
        for _ in range(40):
            n = rng.randrange(1, 7)
            form = BilinearForm(random_nondegenerate(rng, f, n))
            k = rng.randrange(0, n + 1)
            sub = [Matrix.column(f, [rng.randrange(f.order) for _ in range(n)]) for _ in range(k)]
            d = mat_rank(Matrix.from_columns(f, sub, n)) if sub else 0
            assert d + len(orth_complement(form, sub)) == n


# -- normal basis -----------------------------------------------------------------------


def test_normal_basis_examples():
    nb = normal_basis(BilinearForm(Matrix.block_diag(H2, H2)))
    assert (nb.p_count, nb.q_count, nb.m_count) == (0, 0, 2)
    nb = normal_basis(identity_form(3))
    assert (nb.p_count, nb.q_count, nb.m_count) == (1, 0, 1)
    nb = normal_basis(identity_form(2))
    assert (nb.p_count, nb.q_count, nb.m_count) == (0, 1, 0)
    assert nb.shape() == Matrix.from_rows(GF2, [[0, 1], [1, 1]])
    p = nb.basis_change
    assert p.T @ Matrix.identity(GF2, 2) @ p == nb.shape()
    assert normal_basis(BilinearForm(Matrix.zeros(GF2, 0))).n == 0
    with pytest.raises(Degenerate):
        normal_basis(BilinearForm(Matrix.zeros(GF2, 1)))


def test_normal_shape_layout():
    s = normal_shape(GF4, 0, 1, 1, [2])
    assert s.to_lists() == [[0, 1, 0, 0], [1, 2, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_normal_basis_certifies(f, rng):
    for _ in range(150):
        n = rng.randrange(0, 9)
        s = random_nondegenerate(rng, f, n)
        nb = normal_basis(BilinearForm(s))
        assert nb.basis_change.T @ s @ nb.basis_change == nb.shape()
        assert nb.certifies(s)
        assert nb.p_count + 2 * nb.q_count + 2 * nb.m_count == n
        assert nb.p_count + nb.q_count <= 1
        if n % 2:
            assert (nb.p_count, nb.q_count) == (1, 0) and nb.diag_values == (1,)
        inv = invariants(BilinearForm(s))
        assert inv.witt_index == nb.q_count + nb.m_count
        assert inv.dim_sker_q == nb.q_count


# -- Witt index -------------------------------------------------------------------------


def test_witt_examples():
    for n in range(1, 7):
        assert witt_index(identity_form(n)) == n // 2
    assert witt_index(identity_form(1)) == 0
    assert witt_index(BilinearForm(Matrix.block_diag(H2, H2))) == 2
    assert witt_index_bruteforce(identity_form(3)) == 1
    assert witt_index_bruteforce(identity_form(1)) == 0
    assert witt_index_bruteforce(identity_form(4)) == 2
    with pytest.raises(BudgetExceeded):
        witt_index_bruteforce(identity_form(6), budget=3)


def test_witt_matches_bruteforce_all_gf2_small():
    for n in range(0, 5):
        for g in all_symmetric_gf2(n):
            form = BilinearForm(g)
            assert invariants(form).witt_index == witt_index_bruteforce(form)


def test_witt_matches_bruteforce_random(rng):
    for f, nmax, count in ((GF2, 6, 60), (GF4, 4, 40)):
        for _ in range(count):
            form = BilinearForm(random_nondegenerate(rng, f, rng.randrange(1, nmax + 1)))
            assert witt_index(form) == witt_index_bruteforce(form)


def _isotropic_plane(rng, f):
    a = rng.randrange(f.order)
    return congruent(rng, Matrix.from_rows(f, [[0, 1], [1, a]]))


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_witt_additivity(f, rng):
    # adding r planes that each contain an isotropic vector raises the index by r
    for _ in range(40):
        w = random_nondegenerate(rng, f, rng.randrange(0, 5))
        r = rng.randrange(1, 3)
        total = Matrix.block_diag(w, *[_isotropic_plane(rng, f) for _ in range(r)])
        total = congruent(rng, total)
        assert witt_index(BilinearForm(total)) == witt_index(BilinearForm(w)) + r


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_quotient_by_isotropic_line(f, rng):
    for _ in range(40):
        n = rng.randrange(2, 7)
        form = BilinearForm(random_nondegenerate(rng, f, n))
        nu = witt_index(form)
        if nu == 0:
            continue
        nb = normal_basis(form)
        # first vector of the last hyperbolic or q pair is isotropic
        x = nb.basis_change.columns()[nb.p_count]
        assert form.q(x.col_values()) == 0
        perp = orth_complement(form, [x])
        c = Matrix.from_columns(f, perp, n)
        restricted = BilinearForm(c.T @ form.gram @ c)
        assert len(radical(restricted)) == 1
        reduced, _ = reduce_by_radical(restricted)
        assert witt_index(reduced) == nu - 1


def test_degenerate_witt_matches_bruteforce_gf2():
    for n in range(1, 5):
        for g in all_symmetric_gf2(n):
            form = BilinearForm(g)
            if form.is_degenerate:
                inv = invariants(form)
                assert inv.witt_index == witt_index_bruteforce(form)
                assert inv.dim_radical == n - inv.rank


def test_totally_singular_helper():
    form = BilinearForm(Matrix.block_diag(H2, H2))
    assert is_totally_singular(form, [(1, 0, 0, 0), (0, 0, 1, 0)])
    assert not is_totally_singular(form, [(1, 0, 0, 0), (0, 1, 0, 0)])


# -- a-transform ---------------------------------------------------------------------------


def test_a_transform_examples():
    assert a_transform(BilinearForm(H2)) == H2
    assert a_transform(identity_form(2)) == H2
    assert a_transform(identity_form(3)).to_lists() == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


@pytest.mark.parametrize("f", FIELDS, ids=str)
def test_a_transform_alternating(f, rng):
    for _ in range(100):
        s = random_nondegenerate(rng, f, rng.randrange(1, 8))
        sa = a_transform(BilinearForm(s))
        assert mat_is_alternating(sa)
        form = BilinearForm(s)
        # b_a(x, y) = b(x, y) + sqrt(Q(x)) sqrt(Q(y))
        x = [rng.randrange(f.order) for _ in range(s.rows)]
        y = [rng.randrange(f.order) for _ in range(s.rows)]
        expected = form.b(x, y) ^ f.mul(f.sqrt(form.q(x)), f.sqrt(form.q(y)))
        assert BilinearForm(sa).b(x, y) == expected


# -- invariants -------------------------------------------------------------------------------


def test_invariants_examples():
    def key(inv):
        return (inv.n, inv.rank, inv.witt_index, inv.dim_ker_q, inv.dim_sker_q, inv.alternating)

    assert key(invariants(identity_form(3))) == (3, 3, 1, 2, 0, False)
    assert key(invariants(BilinearForm(H2))) == (2, 2, 1, 2, 0, True)
    assert key(invariants(identity_form(2))) == (2, 2, 1, 1, 1, False)
    rep = invariants(identity_form(3)).report()
    assert list(rep) == sorted(rep)
    assert rep["nu"] == 1 and rep["dim_sker_q"] == 0

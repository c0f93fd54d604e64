"""Symmetric bilinear forms over GF(2^k) and their classification.

A form is stored as its Gram matrix ``S`` so that ``b(x, y) = x^T S y``.
Over a finite field of characteristic 2 the map ``x -> sqrt(Q(x))`` is
linear, which reduces Ker Q to the kernel of a single row vector and lets
every anisotropic diagonal value be normalised to 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BudgetExceeded, Char2Error, Degenerate, NotSymmetric, ShapeMismatch
from .field import FieldSpec
from .matrix import (
    Matrix,
    canonical_basis,
    col_tuple,
    mat_inverse,
    mat_is_symmetric,
    mat_kernel_basis,
    mat_rank,
)

Vec = tuple[int, ...]

DEFAULT_WITT_BUDGET = 10**6


@dataclass(frozen=True)
class BilinearForm:
    gram: Matrix

    def __post_init__(self):
        g = self.gram
        if not g.is_square:
            raise ShapeMismatch(f"Gram matrix must be square, got {g.rows}x{g.cols}")
        if not mat_is_symmetric(g):
            raise NotSymmetric("Gram matrix is not symmetric")

    @property
    def field(self) -> FieldSpec:
        return self.gram.field

    @property
    def n(self) -> int:
        return self.gram.rows

    @property
    def alternating(self) -> bool:
        return all(self.gram[i, i] == 0 for i in range(self.n))

    @property
    def is_degenerate(self) -> bool:
        return mat_rank(self.gram) < self.n

    def b(self, x: Sequence[int], y: Sequence[int]) -> int:
        """b(x, y) for coordinate tuples."""
        f = self.field
        total = 0
        for i, xi in enumerate(x):
            if not xi:
                continue
            s = 0
            for j, yj in enumerate(y):
                if yj:
                    sij = self.gram[i, j]
                    if sij:
                        s ^= f.mul(sij, yj)
            if s:
                total ^= f.mul(xi, s)
        return total

    def q(self, x: Sequence[int]) -> int:
        f = self.field
        total = 0
        for i, xi in enumerate(x):
            if xi:
                d = self.gram[i, i]
                if d:
                    total ^= f.mul(f.mul(xi, xi), d)
        return total


def form_new(gram: Matrix) -> BilinearForm:
    """Validated form; raises NotSymmetric / ShapeMismatch."""
    return BilinearForm(gram)


def _require_nondegenerate(form: BilinearForm):
    if form.is_degenerate:
        raise Degenerate(f"form has a radical of dimension {form.n - mat_rank(form.gram)}")


def _cols(field: FieldSpec, vecs) -> list[Matrix]:
    return [Matrix.column(field, list(v)) for v in vecs]


def _check_vec(form: BilinearForm, x: Matrix):
    if x.rows != form.n or x.cols != 1:
        raise ShapeMismatch(f"expected a {form.n}x1 column, got {x.rows}x{x.cols}")


def quad_eval(form: BilinearForm, x: Matrix) -> int:
    """Q(x) = x^T S x."""
    _check_vec(form, x)
    return (x.T @ form.gram @ x)[0, 0]


def radical(form: BilinearForm) -> list[Matrix]:
    return mat_kernel_basis(form.gram)


def _complement(field: FieldSpec, n: int, sub: list[Vec]) -> list[Vec]:
    """Standard basis vectors extending ``sub`` to a basis of F^n."""
    chosen = list(sub)
    rank = len(canonical_basis(field, chosen, n)) if chosen else 0
    out = []
    for i in range(n):
        e = tuple(int(k == i) for k in range(n))
        if len(canonical_basis(field, chosen + [e], n)) > rank:
            chosen.append(e)
            out.append(e)
            rank += 1
    return out


def reduce_by_radical(form: BilinearForm) -> tuple[BilinearForm, Matrix]:
    """Non-degenerate form induced on V / Rad(b), and the coordinate projection onto it."""
    f, n = form.field, form.n
    rad = [col_tuple(c) for c in radical(form)]
    comp = _complement(f, n, rad)
    r = len(comp)
    if r == 0:
        return BilinearForm(Matrix.zeros(f, 0)), Matrix.zeros(f, 0, n)
    c = Matrix.from_rows(f, [[v[i] for v in comp] for i in range(n)], cols=r)
    reduced = BilinearForm(c.T @ form.gram @ c)
    full = Matrix.from_rows(f, [[v[i] for v in comp + rad] for i in range(n)], cols=n)
    inv = mat_inverse(full)
    projection = inv.submatrix(0, r, 0, n)
    return reduced, projection


def orth_complement(form: BilinearForm, subspace: Sequence[Matrix]) -> list[Matrix]:
    f, n = form.field, form.n
    if not subspace:
        return [Matrix.unit(f, n, i) for i in range(n)]
    for x in subspace:
        _check_vec(form, x)
    basis = Matrix.from_columns(f, list(subspace), n)
    return mat_kernel_basis(basis.T @ form.gram)


def sqrt_diagonal(form: BilinearForm) -> list[int]:
    """Entrywise square roots of the diagonal of S."""
    f = form.field
    return [f.sqrt(form.gram[i, i]) for i in range(form.n)]


def ker_q(form: BilinearForm) -> list[Matrix]:
    """Isotropic vectors: the kernel of the linear functional sqrt(Q)."""
    f, n = form.field, form.n
    row = Matrix.from_rows(f, [sqrt_diagonal(form)], cols=n)
    return mat_kernel_basis(row)


def _sker_q_vectors(form: BilinearForm) -> list[Vec]:
    f, n = form.field, form.n
    ker = ker_q(form)
    rows = [sqrt_diagonal(form)]
    if ker:
        k = Matrix.from_columns(f, ker, n)
        rows += (k.T @ form.gram).to_lists()
    return [col_tuple(c) for c in mat_kernel_basis(Matrix.from_rows(f, rows, cols=n))]


def sker_q(form: BilinearForm) -> list[Matrix]:
    """Ker Q intersected with its orthogonal."""
    _require_nondegenerate(form)
    return _cols(form.field, _sker_q_vectors(form))


def a_transform(form: BilinearForm) -> Matrix:
    """S + d d^T where d is the entrywise square root of diag(S); always alternating."""
    f = form.field
    d = Matrix.column(f, sqrt_diagonal(form))
    return form.gram + d @ d.T


# -- normal bases ------------------------------------------------------------------


def normal_shape(field: FieldSpec, p: int, q: int, m: int, diag_values: Sequence[int]) -> Matrix:
    """diag(a_1..a_p) + [[0, I_q], [I_q, diag(a_{p+1}..a_{p+q})]] + H_{2m}."""
    if len(diag_values) != p + q:
        raise ValueError(f"expected {p + q} diagonal values, got {len(diag_values)}")
    n = p + 2 * q + 2 * m
    g = [[0] * n for _ in range(n)]
    for i in range(p):
        g[i][i] = diag_values[i]
    for i in range(q):
        a, b = p + i, p + q + i
        g[a][b] = g[b][a] = 1
        g[b][b] = diag_values[p + i]
    for i in range(m):
        a, b = p + 2 * q + i, p + 2 * q + m + i
        g[a][b] = g[b][a] = 1
    return Matrix.from_rows(field, g, cols=n)


def hyperbolic(field: FieldSpec, n: int) -> Matrix:
    """H_n = [[0, I], [I, 0]] for even n."""
    if n % 2:
        raise ValueError(f"hyperbolic block needs even size, got {n}")
    return normal_shape(field, 0, 0, n // 2, [])


@dataclass(frozen=True)
class NormalBasisData:
    """Witness ``P`` with ``P^T S P`` in normal shape, plus the shape parameters."""

    p_count: int
    q_count: int
    m_count: int
    diag_values: tuple[int, ...]
    basis_change: Matrix

    @property
    def n(self) -> int:
        return self.p_count + 2 * self.q_count + 2 * self.m_count

    @property
    def witt_index(self) -> int:
        return self.q_count + self.m_count

    def shape(self) -> Matrix:
        return normal_shape(self.basis_change.field, self.p_count, self.q_count, self.m_count, self.diag_values)

    def certifies(self, gram: Matrix) -> bool:
        p = self.basis_change
        return p.shape == gram.shape and p.T @ gram @ p == self.shape()


class _NormalBasisBuilder:
    def __init__(self, form: BilinearForm):
        self.form = form
        self.f = form.field

    def add(self, u: Vec, v: Vec, c: int = 1) -> Vec:
        mul = self.f.mul
        return tuple(a ^ mul(c, b) for a, b in zip(u, v))

    def scale(self, u: Vec, c: int) -> Vec:
        mul = self.f.mul
        return tuple(mul(c, a) for a in u)

    def run(self) -> NormalBasisData:
        form, f = self.form, self.f
        n = form.n
        rest: list[Vec] = [tuple(int(i == j) for i in range(n)) for j in range(n)]
        ones: list[Vec] = []
        while True:
            idx = next((i for i, w in enumerate(rest) if form.q(w)), None)
            if idx is None:
                break
            w = rest.pop(idx)
            v = self.scale(w, f.inv(f.sqrt(form.q(w))))
            ones.append(v)
            rest = [self.add(u, v, form.b(u, v)) for u in rest]
        # What is left spans an alternating non-degenerate block.
        hyp: list[tuple[Vec, Vec]] = []
        while rest:
            e = rest.pop(0)
            j = next((i for i, u in enumerate(rest) if form.b(e, u)), None)
            if j is None:
                raise Degenerate("alternating remainder is degenerate")
            u = rest.pop(j)
            fv = self.scale(u, f.inv(form.b(e, u)))
            rest = [self.add(self.add(w, e, form.b(w, fv)), fv, form.b(w, e)) for w in rest]
            hyp.append((e, fv))
        single: Vec | None = None
        qblock: tuple[Vec, Vec] | None = None
        for v in ones:
            if single is None and qblock is None:
                single = v
            elif single is not None:
                # <1> + <1>  ->  [[0,1],[1,1]] via (v1+v2, v2)
                qblock = (self.add(single, v), v)
                single = None
            else:
                # <1> + [[0,1],[1,1]]  ->  <1> + H_2 via (u+f1, f1, u+f2)
                f1, f2 = qblock
                single = self.add(v, f1)
                hyp.append((f1, self.add(v, f2)))
                qblock = None
        p = int(single is not None)
        q = int(qblock is not None)
        diag = [1] * (p + q)
        # order: ones, q-block isotropic half, q-block second half, hyperbolic e's, hyperbolic f's
        basis = ([single] if single is not None else []) + (list(qblock) if qblock else [])
        basis += [e for e, _ in hyp] + [fv for _, fv in hyp]
        pm = Matrix.from_rows(f, [[v[i] for v in basis] for i in range(n)], cols=n)
        data = NormalBasisData(p, q, len(hyp), tuple(diag), pm)
        if not data.certifies(form.gram):
            raise Char2Error("internal error: normal basis failed its congruence check")
        return data


def normal_basis(form: BilinearForm) -> NormalBasisData:
    """Normal basis for a non-degenerate form over a finite field (so p + q <= 1)."""
    _require_nondegenerate(form)
    return _NormalBasisBuilder(form).run()


def witt_index(form: BilinearForm) -> int:
    return normal_basis(form).witt_index


# -- brute-force totally singular subspace search ------------------------------------


def _normalized_vectors(field: FieldSpec, n: int):
    """Nonzero vectors of F^n whose first nonzero coordinate is 1, with that index."""
    q = field.order
    for lead in range(n):
        for tail in itertools.product(range(q), repeat=n - lead - 1):
            yield lead, (0,) * lead + (1,) + tail


def singular_dfs(
    form: BilinearForm,
    visit: Callable[[list[Vec]], bool],
    budget: int,
    max_dim: int | None = None,
) -> int:
    """Enumerate totally singular subspaces once each, in canonical echelon order.

    Each subspace is grown one reduced-echelon row at a time with strictly
    decreasing pivot.  ``visit`` receives the current basis and returns True
    to stop.  Returns the number of nodes visited; raises BudgetExceeded.
    """
    n = form.n
    iso = [(lead, v) for lead, v in _normalized_vectors(form.field, n) if form.q(v) == 0]
    nodes = 0
    limit = max_dim if max_dim is not None else n

    def rec(basis: list[Vec], cands: list[tuple[int, Vec]]) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"singular-subspace search exceeded {budget} nodes", nodes)
        if visit(basis):
            return True
        if len(basis) >= limit:
            return False
        for lead, v in cands:
            # children: smaller pivot, zero on the new pivot, orthogonal to v
            nxt = [(l2, w) for l2, w in cands
                   if l2 < lead and w[lead] == 0 and form.b(v, w) == 0]
            if rec(basis + [v], nxt):
                return True
        return False

    rec([], iso)
    return nodes


def witt_index_bruteforce(form: BilinearForm, budget: int = DEFAULT_WITT_BUDGET) -> int:
    """Largest totally singular subspace, by exhaustive canonical DFS over isotropic vectors."""
    n = form.n
    rad_dim = n - mat_rank(form.gram) if n else 0
    cap = (n + rad_dim) // 2
    best = 0

    def visit(basis):
        nonlocal best
        best = max(best, len(basis))
        return best >= cap

    singular_dfs(form, visit, budget)
    return best


# -- invariants ------------------------------------------------------------------------


@dataclass(frozen=True)
class FormInvariants:
    n: int
    rank: int
    witt_index: int
    dim_ker_q: int
    dim_sker_q: int
    alternating: bool
    p: int
    q: int
    m: int
    dim_radical: int

    def report(self) -> dict[str, object]:
        return {
            "alternating": str(self.alternating).lower(),
            "dim_ker_q": self.dim_ker_q,
            "dim_radical": self.dim_radical,
            "dim_sker_q": self.dim_sker_q,
            "m": self.m,
            "n": self.n,
            "nu": self.witt_index,
            "p": self.p,
            "q": self.q,
            "rank": self.rank,
        }


def invariants(form: BilinearForm) -> FormInvariants:
    """Classification bundle.  For degenerate forms p, q, m describe the reduced form."""
    n = form.n
    rank = mat_rank(form.gram) if n else 0
    reduced = form if rank == n else reduce_by_radical(form)[0]
    nb = normal_basis(reduced)
    return FormInvariants(
        n=n,
        rank=rank,
        witt_index=nb.witt_index + (n - rank),
        dim_ker_q=len(ker_q(form)),
        dim_sker_q=len(_sker_q_vectors(form)),
        alternating=form.alternating,
        p=nb.p_count,
        q=nb.q_count,
        m=nb.m_count,
        dim_radical=n - rank,
    )


def is_totally_singular(form: BilinearForm, vecs: Sequence[Vec]) -> bool:
    return all(form.q(v) == 0 for v in vecs) and all(
        form.b(u, v) == 0 for u, v in itertools.combinations(vecs, 2))


def span_contains(field: FieldSpec, n: int, basis: Sequence[Vec], v: Vec) -> bool:
    if not basis:
        return not any(v)
    return len(canonical_basis(field, list(basis) + [v], n)) == len(canonical_basis(field, basis, n))


__all__ = [
    "BilinearForm", "FormInvariants", "NormalBasisData", "a_transform", "form_new", "hyperbolic",
    "invariants", "ker_q", "normal_basis", "normal_shape", "orth_complement", "quad_eval",
    "radical", "reduce_by_radical", "sker_q", "singular_dfs", "witt_index", "witt_index_bruteforce",
]

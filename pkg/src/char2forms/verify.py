"""Oracles for nilpotent matrix spaces.

Complete oracles (exhaustive enumeration, canonical subspace search) and
incomplete ones are separate functions.  A flag chain, when found, proves
nilpotency, but its absence proves nothing; random sampling can refute but
never verifies.
"""

from __future__ import annotations

import enum
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Any

from .constructions import Kind, MatrixSpace, ambient_basis, satisfies_kind
from .errors import BadInput, BudgetExceeded, Degenerate, PreconditionFailed
from .form import (
    BilinearForm,
    _sker_q_vectors,
    a_transform,
    ker_q,
    normal_basis,
    singular_dfs,
    span_contains,
)
from .matrix import (
    _gen_mul_rows,
    Matrix,
    _gf2_nilpotent_rows,
    canonical_basis,
    col_tuple,
    mat_is_nilpotent,
    mat_kernel_basis,
)
from .tensors import alt_tensor, is_b_symmetric, sym_square

DEFAULT_COMBINATION_BUDGET = 10**7
DEFAULT_SEARCH_BUDGET = 10**8


class Status(str, enum.Enum):
    VERIFIED = "VERIFIED"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class Verdict:
    status: Status
    witness: Any = None
    stats: dict[str, int] = dc_field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED


def check_kind(space: MatrixSpace) -> Verdict:
    for i, m in enumerate(space.basis):
        if not satisfies_kind(space.gram, m, space.kind):
            return Verdict(Status.REFUTED, m, {"index": i})
    return Verdict(Status.VERIFIED, stats={"checked": space.dim})


# -- exhaustive nilpotency ---------------------------------------------------------


def _gray_chunk(rows_list: list[list[int]], n: int, start: int, stop: int) -> tuple[int | None, int]:
    """Scan Gray-code indices [start, stop); return (first failing index, count)."""
    cur = [0] * n
    g = start ^ (start >> 1)
    j = 0
    while g >> j:
        if (g >> j) & 1:
            cur = [a ^ b for a, b in zip(cur, rows_list[j])]
        j += 1
    count = 0
    i = start
    while i < stop:
        if i:
            count += 1
            if not _gf2_nilpotent_rows(cur, n):
                return i, count
        i += 1
        if i < stop:
            flip = (i & -i).bit_length() - 1
            cur = [a ^ b for a, b in zip(cur, rows_list[flip])]
    return None, count


def _gen_nilpotent_rows(field, rows: list[tuple[int, ...]], n: int) -> bool:
    steps = (n - 1).bit_length() if n > 1 else 0
    m = rows
    for _ in range(steps):
        if not any(any(r) for r in m):
            return True
        m = _gen_mul_rows(field, m, m, n)
    return not any(any(r) for r in m)


def _projective_scan(space: MatrixSpace) -> tuple[list[int] | None, int]:
    """Scan coefficient vectors whose first nonzero entry is 1, in canonical order.

    The running combination is updated in place: changing coefficient j from
    c to c' adds (c + c') M_j.
    """
    f, n, d = space.field, space.n, space.dim
    q = f.order
    scaled = [[m.scale(c).row_values(i) for i in range(n)] for m in space.basis for c in range(q)]
    tested = 0
    for lead in range(d):
        cur = [list(r) for r in scaled[lead * q + 1]]
        prev = (0,) * (d - lead - 1)
        for tail in itertools.product(range(q), repeat=d - lead - 1):
            for off, (a, b) in enumerate(zip(prev, tail)):
                if a != b:
                    delta = scaled[(lead + 1 + off) * q + (a ^ b)]
                    for r, dr in zip(cur, delta):
                        for j, v in enumerate(dr):
                            if v:
                                r[j] ^= v
            prev = tail
            tested += 1
            if not _gen_nilpotent_rows(f, [tuple(r) for r in cur], n):
                return [0] * lead + [1] + list(tail), tested
    return None, tested


def nilpotency_exhaustive(space: MatrixSpace, budget: int = DEFAULT_COMBINATION_BUDGET,
                          workers: int = 1) -> Verdict:
    """Check every nonzero combination of the basis (up to scaling)."""
    f, d, n = space.field, space.dim, space.n
    total = f.order ** d
    if total > budget:
        return Verdict(Status.INCONCLUSIVE, stats={"combinations_tested": 0, "combinations_total": total - 1})
    if f.is_prime:
        rows_list = [list(m.bitrows) for m in space.basis]
        if workers > 1 and total > 4096:
            step = -(-total // (workers * 4))
            bounds = [(s, min(s + step, total)) for s in range(0, total, step)]
            with ProcessPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(_gray_chunk, [rows_list] * len(bounds), [n] * len(bounds),
                                      [b[0] for b in bounds], [b[1] for b in bounds]))
            bad = None
            tested = 0
            for (idx, cnt) in results:
                if idx is not None and bad is None:
                    bad = idx
                    tested += cnt
                    break
                tested += cnt
        else:
            bad, tested = _gray_chunk(rows_list, n, 0, total)
        if bad is not None:
            g = bad ^ (bad >> 1)
            coeffs = [(g >> j) & 1 for j in range(d)]
            return Verdict(Status.REFUTED, (coeffs, space.combination(coeffs)), {"combinations_tested": tested})
        return Verdict(Status.VERIFIED, stats={"combinations_tested": tested})
    coeffs, tested = _projective_scan(space)
    if coeffs is not None:
        return Verdict(Status.REFUTED, (coeffs, space.combination(coeffs)), {"combinations_tested": tested})
    return Verdict(Status.VERIFIED, stats={"combinations_tested": tested})


def nilpotency_sample(space: MatrixSpace, trials: int, seed: int) -> Verdict:
    """Monte Carlo check; never returns VERIFIED."""
    if trials < 1:
        raise BadInput("trials must be at least 1")
    rng = random.Random(seed)
    q, d = space.field.order, space.dim
    tested = 0
    if d == 0:
        return Verdict(Status.INCONCLUSIVE, stats={"combinations_tested": 0, "trials": trials})
    for _ in range(trials):
        coeffs = [rng.randrange(q) for _ in range(d)]
        if not any(coeffs):
            continue
        tested += 1
        m = space.combination(coeffs)
        if not mat_is_nilpotent(m):
            return Verdict(Status.REFUTED, (coeffs, m), {"combinations_tested": tested, "trials": trials})
    return Verdict(Status.INCONCLUSIVE, stats={"combinations_tested": tested, "trials": trials})


def flag_certificate(space: MatrixSpace) -> list[list[Matrix]] | None:
    """Chain W_1, W_2, ... ending at {0}, where W_{i+1} is spanned by M w over basis M and w in W_i.

    W_0 is the whole space.  A returned chain proves nilpotency of every
    element; None proves nothing.
    """
    f, n = space.field, space.n
    current = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    chain: list[list[Matrix]] = []
    for _ in range(n + 1):
        images = []
        for m in space.basis:
            for w in current:
                images.append(col_tuple(m @ Matrix.column(f, list(w))))
        nxt = canonical_basis(f, images, n)
        chain.append([Matrix.column(f, list(v)) for v in nxt])
        if not nxt:
            return chain
        if len(nxt) == len(current):
            return None
        current = nxt
    return None


def trace_orthogonality(space: MatrixSpace) -> Verdict:
    """tr(M N) == 0 for all basis pairs, which holds for any nilpotent space."""
    pairs = 0
    for i, a in enumerate(space.basis):
        for j in range(i, space.dim):
            pairs += 1
            if (a @ space.basis[j]).trace():
                return Verdict(Status.REFUTED, (i, j), {"pairs": pairs})
    return Verdict(Status.VERIFIED, stats={"pairs": pairs})


# -- lemmas on isotropic vectors --------------------------------------------------------


def _establish_nilpotent(space: MatrixSpace, budget: int) -> str:
    # both routes are proofs; the flag chain is much cheaper when it exists
    if flag_certificate(space) is not None:
        return "flag"
    v = nilpotency_exhaustive(space, budget)
    if v.verified:
        return "exhaustive"
    if v.refuted:
        raise PreconditionFailed("space contains a non-nilpotent element")
    raise PreconditionFailed("nilpotency of the space could not be established within budget")


def orthogonality_lemmas_check(space: MatrixSpace, x: Matrix,
                               budget: int = DEFAULT_COMBINATION_BUDGET) -> Verdict:
    """Tensor orthogonality checks for a nilpotent space and an isotropic vector ``x``.

    * alpha * b(x, u(x)) = 0 whenever alpha x(x)x + x^y lies in the space;
    * b_a(u(x), y) = 0 whenever b(x, u(x)) = 0 and x^y lies in the space, y in x-perp;
    * the two subspaces just paired have total dimension at most n + 1, and
      exceed n only when n is odd with Witt index (n-1)/2.
    """
    form = BilinearForm(space.gram)
    f, n, d = space.field, space.n, space.dim
    if form.is_degenerate:
        raise PreconditionFailed("form is degenerate")
    xv = x.col_values()
    if x.shape != (n, 1) or not any(xv):
        raise PreconditionFailed("x must be a nonzero column of the ambient space")
    if form.q(xv):
        raise PreconditionFailed("x must be isotropic")
    if not all(is_b_symmetric(form, m) for m in space.basis):
        raise PreconditionFailed("space is not b-symmetric")
    how = _establish_nilpotent(space, budget)

    s = space.gram
    ux = [m @ x for m in space.basis]
    bx_ux = [(x.T @ s @ v)[0, 0] for v in ux]
    t0 = sym_square(form, x).flat()
    tk = [alt_tensor(form, x, Matrix.unit(f, n, k)).flat() for k in range(n)]
    mflat = [m.flat() for m in space.basis]
    # kernel of (alpha, y, c) -> alpha T0 + sum y_k T_k + sum c_i M_i
    big = Matrix.from_rows(f, [[t0[e]] + [t[e] for t in tk] + [mm[e] for mm in mflat]
                               for e in range(n * n)], cols=1 + n + d)
    stats = {"dim": d, "nilpotency_by_flag": int(how == "flag")}
    for kv in mat_kernel_basis(big):
        alpha = kv[0, 0]
        if alpha and any(bx_ux):
            i = next(i for i, v in enumerate(bx_ux) if v)
            return Verdict(Status.REFUTED, ("first", i, alpha), stats)

    # u with b(x, u(x)) = 0
    if d:
        u_kernel = mat_kernel_basis(Matrix.from_rows(f, [bx_ux], cols=d))
    else:
        u_kernel = []
    u_vecs = [space.combination(c.col_values()) @ x for c in u_kernel]
    # y in x-perp with x^y in the space
    sx = (s @ x).col_values()
    rows = [[t[e] for t in tk] + [mm[e] for mm in mflat] for e in range(n * n)]
    rows.append(sx + [0] * d)
    y_kernel = mat_kernel_basis(Matrix.from_rows(f, rows, cols=n + d))
    y_vecs = [Matrix.column(f, kv.col_values()[:n]) for kv in y_kernel]
    sa = a_transform(form)
    for i, uv in enumerate(u_vecs):
        for j, yv in enumerate(y_vecs):
            if (uv.T @ sa @ yv)[0, 0]:
                return Verdict(Status.REFUTED, ("second", uv, yv), stats)

    v1 = canonical_basis(f, [col_tuple(v) for v in u_vecs], n)
    v2 = canonical_basis(f, [col_tuple(v) for v in y_vecs], n)
    stats.update(dim_v1=len(v1), dim_v2=len(v2))
    total = len(v1) + len(v2)
    if total > n + 1:
        return Verdict(Status.REFUTED, ("pair-bound", total), stats)
    if total > n:
        nu = normal_basis(form).witt_index
        if n % 2 == 0 or 2 * nu + 1 != n:
            return Verdict(Status.REFUTED, ("pair-bound-parity", total), stats)
        kperp = canonical_basis(f, _kerq_perp(form), n)
        for sub in (v1, v2):
            if not all(span_contains(f, n, sub, k) for k in kperp):
                return Verdict(Status.REFUTED, ("pair-bound-kerq", total), stats)
    return Verdict(Status.VERIFIED, stats=stats)


def _kerq_perp(form: BilinearForm) -> list[tuple[int, ...]]:
    f, n = form.field, form.n
    ker = ker_q(form)
    if not ker:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    k = Matrix.from_columns(f, ker, n)
    return [col_tuple(c) for c in mat_kernel_basis(k.T @ form.gram)]


def isotropic_vectors(form: BilinearForm, limit: int | None = None) -> list[Matrix]:
    """Nonzero isotropic vectors of the Ker Q basis plus normal-basis isotropic vectors."""
    f, n = form.field, form.n
    out: list[tuple[int, ...]] = []
    for c in ker_q(form):
        out.append(col_tuple(c))
    if not form.is_degenerate and n:
        nb = normal_basis(form)
        p, q = nb.p_count, nb.q_count
        for j in list(range(p, p + q)) + list(range(p + 2 * q, n)):
            out.append(tuple(nb.basis_change.col_values(j)))
    seen = []
    for v in out:
        if any(v) and v not in seen and form.q(v) == 0:
            seen.append(v)
    if limit is not None:
        seen = seen[:limit]
    return [Matrix.column(f, list(v)) for v in seen]


def stable_singular_subspace(form: BilinearForm, m: Matrix,
                             budget: int = 10**6) -> tuple[list[Matrix] | None, dict[str, int]]:
    """Search for an m-stable totally singular subspace of dimension nu(b).

    Returns ``(basis, stats)``; ``basis`` is None when the budget ran out, which
    is inconclusive.
    """
    if form.is_degenerate:
        raise Degenerate("stable singular subspace search needs a non-degenerate form")
    if not is_b_symmetric(form, m) or not mat_is_nilpotent(m):
        raise PreconditionFailed("matrix must be b-symmetric and nilpotent")
    f, n = form.field, form.n
    nu = normal_basis(form).witt_index
    found: list[tuple[int, ...]] | None = None

    def visit(basis):
        nonlocal found
        if len(basis) != nu:
            return False
        for v in basis:
            img = col_tuple(m @ Matrix.column(f, list(v)))
            if not span_contains(f, n, basis, img):
                return False
        found = list(basis)
        return True

    try:
        nodes = singular_dfs(form, visit, budget, max_dim=nu)
    except BudgetExceeded as exc:
        return None, {"nodes": exc.nodes, "complete": 0}
    if found is None:
        return None, {"nodes": nodes, "complete": 1}
    return [Matrix.column(f, list(v)) for v in found], {"nodes": nodes, "complete": 1}


def kerq_stability_check(form: BilinearForm, m: Matrix) -> Verdict:
    """Nilpotent b-symmetric maps preserve Ker Q when Ker Q is totally singular."""
    f, n = form.field, form.n
    ker = [col_tuple(c) for c in ker_q(form)]
    if not is_b_symmetric(form, m) or not mat_is_nilpotent(m):
        raise PreconditionFailed("matrix must be b-symmetric and nilpotent")
    if len(ker) == n:
        return Verdict(Status.VERIFIED, stats={"dim_ker_q": n})
    if len(_sker_q_vectors(form)) != len(ker):
        raise PreconditionFailed("Ker Q is not totally singular")
    for v in ker:
        img = col_tuple(m @ Matrix.column(f, list(v)))
        if not span_contains(f, n, ker, img):
            return Verdict(Status.REFUTED, Matrix.column(f, list(v)), {"dim_ker_q": len(ker)})
    return Verdict(Status.VERIFIED, stats={"dim_ker_q": len(ker)})


# -- maximal nilpotent subspace search over GF(2) -----------------------------------------


@dataclass
class SearchResult:
    max_dim: int
    witness: MatrixSpace
    complete: bool
    nodes: int


def _nilpotent_table(basis_rows: list[list[int]], n: int) -> bytearray:
    d = len(basis_rows)
    table = bytearray(1 << d)
    cur = [0] * n
    table[0] = 1
    for i in range(1, 1 << d):
        flip = (i & -i).bit_length() - 1
        cur = [a ^ b for a, b in zip(cur, basis_rows[flip])]
        g = i ^ (i >> 1)
        table[g] = _gf2_nilpotent_rows(cur, n)
    return table


class _Search:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.best = 0
        self.best_rows: list[int] = []

    def run(self, rows: list[int], pivmask: int, top: int, cands: list[int]) -> None:
        """``top``: children need bit_length > top; ``pivmask``: bits they must avoid."""
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded("search budget exhausted", self.nodes)
        k = len(rows)
        if k > self.best:
            self.best = k
            self.best_rows = list(rows)
        children = [v for v in cands if v >> top and not v & pivmask]
        # every extension by j dimensions contributes 2^j - 1 admissible children
        if k + (len(children) + 1).bit_length() - 1 <= self.best:
            return
        cset = set(cands)
        for v in children:
            nxt = [w for w in cands if (w ^ v) in cset]
            top_v = v.bit_length()
            self.run(rows + [v], pivmask | (1 << (top_v - 1)), top_v, nxt)


def _branch_worker(args) -> tuple[int, list[int], int, bool]:
    cands, v, budget = args
    s = _Search(budget)
    cset = set(cands)
    nxt = [w for w in cands if (w ^ v) in cset]
    top_v = v.bit_length()
    try:
        s.run([v], 1 << (top_v - 1), top_v, nxt)
        return s.best, s.best_rows, s.nodes, True
    except BudgetExceeded:
        return s.best, s.best_rows, s.nodes, False


def search_max_nilpotent(form: BilinearForm, kind: "Kind | str", budget: int = DEFAULT_SEARCH_BUDGET,
                         workers: int = 1) -> SearchResult:
    """Largest nilpotent subspace of S_S (or A_S) over GF(2), by canonical DFS.

    Subspaces are enumerated once each through their reduced echelon bases
    (pivot = highest set bit, pivots increasing).  Each node carries the set
    C(U) of vectors v with v + U entirely nilpotent; extending U by w gives
    C(U + <w>) = {v in C(U) : v + w in C(U)}, so nilpotency is checked
    incrementally.  Any nilpotent extension of U lies in C(U), which bounds
    the remaining depth by log2 of the number of admissible candidates.
    """
    kind = Kind.parse(kind)
    if not form.field.is_prime:
        raise BadInput("exhaustive search is only supported over GF(2)")
    if form.is_degenerate:
        raise Degenerate("search requires a non-degenerate form")
    n = form.n
    amb = ambient_basis(form, kind)
    rows_list = [list(m.bitrows) for m in amb]
    table = _nilpotent_table(rows_list, n)
    cands = [c for c in range(len(table)) if table[c]]
    complete = True
    if workers > 1 and len(amb) > 0:
        top = [v for v in cands if v]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_branch_worker, [(cands, v, budget) for v in top]))
        best, best_rows, nodes = 0, [], 1
        for b, r, nd, ok in results:
            nodes += nd
            complete &= ok
            if b > best:
                best, best_rows = b, r
    else:
        s = _Search(budget)
        try:
            s.run([], 0, 0, cands)
        except BudgetExceeded:
            complete = False
        best, best_rows, nodes = s.best, s.best_rows, s.nodes
    f = form.field
    basis = []
    for c in best_rows:
        m = Matrix.zeros(f, n)
        for j in range(len(amb)):
            if (c >> j) & 1:
                m = m + amb[j]
        basis.append(m)
    witness = MatrixSpace(form.gram, kind, tuple(basis)).validate()
    return SearchResult(best, witness, complete, nodes)


def nonzero_nilpotent_elements(form: BilinearForm, kind: "Kind | str") -> list[Matrix]:
    """Every nonzero nilpotent element of S_S (or A_S); small GF(2) or GF(4) instances only."""
    amb = ambient_basis(form, kind)
    f = form.field
    out = []
    for coeffs in itertools.product(range(f.order), repeat=len(amb)):
        if not any(coeffs):
            continue
        m = Matrix.zeros(f, form.n)
        for c, b in zip(coeffs, amb):
            if c:
                m = m + b.scale(c)
        if mat_is_nilpotent(m):
            out.append(m)
    return out


__all__ = [
    "SearchResult", "Status", "Verdict", "check_kind", "flag_certificate", "isotropic_vectors",
    "kerq_stability_check", "nilpotency_exhaustive", "nilpotency_sample", "nonzero_nilpotent_elements",
    "orthogonality_lemmas_check", "search_max_nilpotent", "stable_singular_subspace",
    "trace_orthogonality",
]

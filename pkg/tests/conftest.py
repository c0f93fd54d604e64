from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import HealthCheck, settings

from char2forms import GF2, GF4, BilinearForm, Matrix, mat_rank

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIELDS = [GF2, GF4]


def random_matrix(rng: random.Random, f, r: int, c: int | None = None) -> Matrix:
    c = r if c is None else c
    return Matrix.from_rows(f, [[rng.randrange(f.order) for _ in range(c)] for _ in range(r)], cols=c)


def random_symmetric(rng: random.Random, f, n: int) -> Matrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randrange(f.order)
    return Matrix.from_rows(f, rows, cols=n)


def random_nondegenerate(rng: random.Random, f, n: int) -> Matrix:
    while True:
        s = random_symmetric(rng, f, n)
        if mat_rank(s) == n:
            return s


def random_invertible(rng: random.Random, f, n: int) -> Matrix:
    while True:
        p = random_matrix(rng, f, n)
        if mat_rank(p) == n:
            return p


def all_symmetric_gf2(n: int):
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in range(1 << len(idx)):
        rows = [[0] * n for _ in range(n)]
        for k, (i, j) in enumerate(idx):
            if bits >> k & 1:
                rows[i][j] = rows[j][i] = 1
        yield Matrix.from_rows(GF2, rows, cols=n)


def all_vectors(f, n: int):
    return itertools.product(range(f.order), repeat=n)


def identity_form(n: int, f=GF2) -> BilinearForm:
    return BilinearForm(Matrix.identity(f, n))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)

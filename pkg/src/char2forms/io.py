"""JSON text formats for matrices, forms and matrix spaces.

Matrix: ``{"field": "gf2", "rows": r, "cols": c, "entries": [[...], ...]}``
Form:   ``{"field": ..., "gram": [[...], ...]}``
Space:  ``{"field": ..., "gram": [[...], ...], "kind": "sym"|"alt", "basis": [[[...]], ...]}``

Entries are field elements as decimal integers.  Encoding is canonical
(fixed key order, no optional whitespace), so decode/encode round-trips
byte for byte.  Decoding re-validates every invariant and raises
:class:`ParseError` naming the one that failed.
"""

from __future__ import annotations

import json
from typing import Any

from .constructions import Kind, MatrixSpace
from .errors import Char2Error, ParseError
from .field import FieldSpec, format_field, parse_field
from .form import BilinearForm
from .matrix import Matrix, mat_is_symmetric


def _dumps(obj: dict[str, Any]) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _loads(text: str, what: str) -> dict[str, Any]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ParseError(f"{what}: top level must be an object")
    return obj


def _get(obj: dict[str, Any], key: str, what: str) -> Any:
    if key not in obj:
        raise ParseError(f"{what}: missing field {key!r}")
    return obj[key]


def _field(obj: dict[str, Any], what: str) -> FieldSpec:
    text = _get(obj, "field", what)
    if not isinstance(text, str):
        raise ParseError(f"{what}: field 'field' must be a string")
    try:
        return parse_field(text)
    except Char2Error as exc:
        raise ParseError(f"{what}: field 'field': {exc}") from None


def _entries(f: FieldSpec, data: Any, what: str, square: bool = False) -> Matrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError(f"{what}: entries must be a list of rows")
    cols = len(data[0]) if data else 0
    for i, row in enumerate(data):
        if len(row) != cols:
            raise ParseError(f"{what}: row {i} has {len(row)} entries, expected {cols}")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < f.order:
                raise ParseError(f"{what}: entry ({i},{j}) = {v!r} is not an element of {format_field(f)}")
    if square and cols != len(data):
        raise ParseError(f"{what}: matrix must be square, got {len(data)}x{cols}")
    return Matrix.from_rows(f, data, cols=cols)


# -- matrices ----------------------------------------------------------------------


def matrix_to_obj(m: Matrix) -> dict[str, Any]:
    return {"field": format_field(m.field), "rows": m.rows, "cols": m.cols, "entries": m.to_lists()}


def encode_matrix(m: Matrix) -> str:
    return _dumps(matrix_to_obj(m))


def decode_matrix(text: str) -> Matrix:
    obj = _loads(text, "matrix")
    f = _field(obj, "matrix")
    rows, cols = _get(obj, "rows", "matrix"), _get(obj, "cols", "matrix")
    m = _entries(f, _get(obj, "entries", "matrix"), "matrix")
    if rows == 0:
        m = Matrix.zeros(f, 0, cols) if isinstance(cols, int) and cols >= 0 else m
    if (m.rows, m.cols) != (rows, cols):
        raise ParseError(f"matrix: declared shape {rows}x{cols} does not match entries {m.rows}x{m.cols}")
    return m


# -- forms -------------------------------------------------------------------------


def _gram(f: FieldSpec, obj: dict[str, Any], what: str) -> Matrix:
    gram = _entries(f, _get(obj, "gram", what), f"{what} gram", square=True)
    if not mat_is_symmetric(gram):
        raise ParseError(f"{what}: gram is not symmetric")
    return gram


def encode_form(form: BilinearForm) -> str:
    return _dumps({"field": format_field(form.field), "gram": form.gram.to_lists()})


def decode_form(text: str) -> BilinearForm:
    obj = _loads(text, "form")
    f = _field(obj, "form")
    return BilinearForm(_gram(f, obj, "form"))


# -- spaces ------------------------------------------------------------------------


def encode_space(space: MatrixSpace) -> str:
    return _dumps({
        "field": format_field(space.field),
        "gram": space.gram.to_lists(),
        "kind": space.kind.value,
        "basis": [m.to_lists() for m in space.basis],
    })


def decode_space(text: str) -> MatrixSpace:
    obj = _loads(text, "space")
    f = _field(obj, "space")
    gram = _gram(f, obj, "space")
    try:
        kind = Kind.parse(_get(obj, "kind", "space"))
    except Char2Error as exc:
        raise ParseError(f"space: field 'kind': {exc}") from None
    data = _get(obj, "basis", "space")
    if not isinstance(data, list):
        raise ParseError("space: basis must be a list of matrices")
    n = gram.rows
    basis = []
    for i, entries in enumerate(data):
        m = _entries(f, entries, f"space basis[{i}]")
        if m.shape != (n, n):
            raise ParseError(f"space basis[{i}]: expected {n}x{n}, got {m.rows}x{m.cols}")
        basis.append(m)
    try:
        return MatrixSpace(gram, kind, tuple(basis)).validate()
    except Char2Error as exc:
        raise ParseError(f"space: {exc}") from None


def decode_any_gram(text: str) -> BilinearForm:
    """Gram of a form file or a space file."""
    obj = _loads(text, "gram file")
    f = _field(obj, "gram file")
    return BilinearForm(_gram(f, obj, "gram file"))


__all__ = [
    "decode_any_gram", "decode_form", "decode_matrix", "decode_space", "encode_form",
    "encode_matrix", "encode_space", "matrix_to_obj",
]

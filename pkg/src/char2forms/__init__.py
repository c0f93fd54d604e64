"""Symmetric bilinear forms over GF(2^k) and their maximal nilpotent matrix spaces."""

from __future__ import annotations

from .constructions import (
    Kind,
    MatrixSpace,
    ambient_basis,
    change_basis,
    construct_for_form,
    construct_general,
    construct_general_odd,
    construct_special_odd,
    expected_dimension,
    extend_alternating,
)
from .errors import (
    BadInput,
    BudgetExceeded,
    Char2Error,
    Degenerate,
    DivisionByZero,
    FieldMismatch,
    NotBSymmetric,
    NotSquare,
    NotSymmetric,
    ParseError,
    PreconditionFailed,
    ShapeMismatch,
    Singular,
    WrongRank,
    WrongShape,
)
from .field import GF2, GF4, FieldSpec, format_field, parse_field
from .form import (
    BilinearForm,
    NormalBasisData,
    a_transform,
    hyperbolic,
    invariants,
    ker_q,
    normal_basis,
    radical,
    reduce_by_radical,
    sker_q,
    witt_index,
    witt_index_bruteforce,
)
from .matrix import Matrix, Polynomial, mat_charpoly, mat_inverse, mat_is_nilpotent, mat_kernel_basis, mat_rank
from .tensors import alt_tensor, rank_one_decompose, small_rank_decompose, sym_square
from .verify import (
    Status,
    Verdict,
    check_kind,
    flag_certificate,
    kerq_stability_check,
    nilpotency_exhaustive,
    nilpotency_sample,
    orthogonality_lemmas_check,
    search_max_nilpotent,
    stable_singular_subspace,
    trace_orthogonality,
)

__version__ = "0.1.0"

"""Command-line front end.

Every run is determined by its arguments.  Reports are ``key=value`` lines in
sorted key order.  Exit codes: 0 success / VERIFIED, 1 REFUTED (witness written
with ``--out``), 2 usage or input error, 3 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .constructions import Kind, construct_for_form, expected_dimension
from .errors import BudgetExceeded, Char2Error
from .field import GF2, FieldSpec, format_field, parse_field
from .form import BilinearForm, a_transform, hyperbolic, invariants, normal_basis, witt_index_bruteforce
from .io import decode_any_gram, decode_space, encode_matrix, encode_space
from .matrix import Matrix, mat_is_alternating
from .verify import (
    DEFAULT_COMBINATION_BUDGET,
    DEFAULT_SEARCH_BUDGET,
    Status,
    check_kind,
    flag_certificate,
    nilpotency_exhaustive,
    nilpotency_sample,
    search_max_nilpotent,
    trace_orthogonality,
)

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
_STATUS_EXIT = {Status.VERIFIED: EXIT_OK, Status.REFUTED: EXIT_REFUTED, Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Status):
        return v.value
    return str(v)


def _report(out, items: dict) -> None:
    for k in sorted(items):
        out.write(f"{k}={_fmt(items[k])}\n")


def _field_arg(text: str | None) -> FieldSpec | None:
    return None if text is None else parse_field(text)


def load_gram(spec: str, field: FieldSpec | None) -> BilinearForm:
    """``identity:n``, ``hyperbolic:2m`` or ``file:<path>`` (form or space file)."""
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise UsageError(f"--gram: expected identity:n, hyperbolic:2m or file:<path>, got {spec!r}")
    if kind == "file":
        form = decode_any_gram(Path(arg).read_text())
        if field is not None and form.field != field:
            raise UsageError(f"--gram: file field {format_field(form.field)} differs from --field {format_field(field)}")
        return form
    f = field or GF2
    try:
        n = int(arg)
    except ValueError:
        raise UsageError(f"--gram: bad size {arg!r}") from None
    if n < 0:
        raise UsageError(f"--gram: size must be non-negative, got {n}")
    if kind == "identity":
        return BilinearForm(Matrix.identity(f, n))
    if kind == "hyperbolic":
        if n % 2:
            raise UsageError(f"--gram: hyperbolic size must be even, got {n}")
        return BilinearForm(hyperbolic(f, n))
    raise UsageError(f"--gram: unknown shape {kind!r}")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


# -- subcommands -------------------------------------------------------------------


def cmd_classify(args, out) -> int:
    form = load_gram(args.gram, _field_arg(args.field))
    rep = invariants(form).report()
    rep["field"] = format_field(form.field)
    _report(out, rep)
    return EXIT_OK


def cmd_construct(args, out) -> int:
    if args.kind is None:
        raise UsageError("construct: --kind is required")
    form = load_gram(args.gram, _field_arg(args.field))
    nb = normal_basis(form)
    kind = Kind.parse(args.kind)
    space = construct_for_form(form, nb, kind, coords=args.coords)
    inv = invariants(form)
    rep = {
        "coords": args.coords,
        "dimension": space.dim,
        "expected_dimension": expected_dimension(form.n, inv.witt_index, inv.dim_sker_q, kind),
        "field": format_field(form.field),
        "kind": kind.value,
        "n": form.n,
    }
    if args.out:
        _write(args.out, encode_space(space))
        rep["space"] = args.out
    _report(out, rep)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if not args.space:
        raise UsageError("verify: a space file is required")
    space = decode_space(Path(args.space).read_text())
    rep: dict = {"dimension": space.dim, "kind": space.kind.value, "n": space.n,
                 "field": format_field(space.field)}
    witness = None
    kv = check_kind(space)
    rep["kind_check"] = kv.status
    if kv.refuted:
        status, witness = Status.REFUTED, kv.witness
        rep["combinations_tested"] = 0
        rep["method"] = "kind"
    else:
        v = nilpotency_exhaustive(space, args.budget or DEFAULT_COMBINATION_BUDGET, args.workers)
        rep["combinations_tested"] = v.stats.get("combinations_tested", 0)
        rep["method"] = "exhaustive"
        status = v.status
        if v.refuted:
            witness = v.witness[1]
        elif status is Status.INCONCLUSIVE:
            if flag_certificate(space) is not None:
                status, rep["method"] = Status.VERIFIED, "flag"
            elif args.trials:
                s = nilpotency_sample(space, args.trials, args.seed)
                rep["method"] = "sample"
                rep["combinations_tested"] = s.stats["combinations_tested"]
                status = s.status
                if s.refuted:
                    witness = s.witness[1]
        if status is Status.VERIFIED:
            rep["trace_orthogonality"] = trace_orthogonality(space).status
    rep["status"] = status
    if witness is not None and args.out:
        _write(args.out, encode_matrix(witness))
        rep["witness"] = args.out
    _report(out, rep)
    return _STATUS_EXIT[status]


def cmd_search(args, out) -> int:
    if args.kind is None:
        raise UsageError("search: --kind is required")
    form = load_gram(args.gram, _field_arg(args.field))
    kind = Kind.parse(args.kind)
    res = search_max_nilpotent(form, kind, args.budget or DEFAULT_SEARCH_BUDGET, args.workers)
    inv = invariants(form)
    formula = expected_dimension(form.n, inv.witt_index, inv.dim_sker_q, kind)
    if not res.complete:
        status = Status.INCONCLUSIVE
    else:
        status = Status.VERIFIED if res.max_dim == formula else Status.REFUTED
    rep = {"complete": res.complete, "expected_dimension": formula, "kind": kind.value,
           "max_dim": res.max_dim, "n": form.n, "nodes": res.nodes, "status": status}
    if args.out:
        _write(args.out, encode_space(res.witness))
        rep["witness"] = args.out
    _report(out, rep)
    return _STATUS_EXIT[status]


def cmd_atransform(args, out) -> int:
    form = load_gram(args.gram, _field_arg(args.field))
    sa = a_transform(form)
    rep = {"alternating": mat_is_alternating(sa), "field": format_field(form.field), "n": form.n}
    if args.out:
        _write(args.out, encode_matrix(sa))
        rep["matrix"] = args.out
    else:
        rep["entries"] = ";".join(",".join(str(v) for v in row) for row in sa.to_lists())
    _report(out, rep)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    """Brute-force oracles next to the fast paths; REFUTED on any disagreement."""
    form = load_gram(args.gram, _field_arg(args.field))
    rep: dict = {"n": form.n}
    status = Status.VERIFIED
    inv = invariants(form)
    rep["nu"] = inv.witt_index
    try:
        nu_bf = witt_index_bruteforce(form, args.budget or 10**6)
        rep["nu_bruteforce"] = nu_bf
        if nu_bf != inv.witt_index:
            status = Status.REFUTED
    except BudgetExceeded:
        rep["nu_bruteforce"] = "budget"
        status = Status.INCONCLUSIVE
    if form.field.is_prime and not form.is_degenerate:
        nb = normal_basis(form)
        kinds = [Kind.parse(args.kind)] if args.kind else [Kind.B_SYMMETRIC, Kind.B_ALTERNATING]
        for kind in kinds:
            res = search_max_nilpotent(form, kind, args.budget or DEFAULT_SEARCH_BUDGET, args.workers)
            built = construct_for_form(form, nb, kind).dim
            rep[f"construct_dim_{kind.value}"] = built
            rep[f"max_dim_{kind.value}"] = res.max_dim
            rep[f"nodes_{kind.value}"] = res.nodes
            if not res.complete:
                if status is Status.VERIFIED:
                    status = Status.INCONCLUSIVE
            elif res.max_dim != built:
                status = Status.REFUTED
    rep["status"] = status
    _report(out, rep)
    return _STATUS_EXIT[status]


# -- argument grammar --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="gf2 (default) or gf(2^k):m=<modulus>")
    common.add_argument("--gram", help="identity:n | hyperbolic:2m | file:<path>")
    common.add_argument("--kind", choices=["sym", "alt"])
    common.add_argument("--out", help="output file (space, matrix or witness)")
    common.add_argument("--budget", type=int, help="combination / node budget")
    common.add_argument("--trials", type=int, default=0, help="random trials when enumeration is out of budget")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--coords", choices=["normal", "original"], default="original")

    parser = argparse.ArgumentParser(prog="char2forms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "classify": (cmd_classify, "normal-basis invariants of a form"),
        "construct": (cmd_construct, "build a maximal nilpotent space"),
        "verify": (cmd_verify, "check a space file (kind and nilpotency)"),
        "search": (cmd_search, "exhaustive maximal nilpotent subspace search over GF(2)"),
        "atransform": (cmd_atransform, "alternating a-transform of a Gram matrix"),
        "oracle": (cmd_oracle, "compare brute-force oracles against the fast paths"),
    }
    for name, (fn, text) in handlers.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "verify":
            p.add_argument("space", nargs="?", help="space file produced by construct or search")
        else:
            p.set_defaults(needs_gram=True)
        p.set_defaults(handler=fn)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "needs_gram", False) and not args.gram:
        err.write(f"char2forms {args.command}: error: --gram is required\n")
        return EXIT_USAGE
    for flag in ("budget", "trials", "workers"):
        v = getattr(args, flag)
        if v is not None and v < (1 if flag == "workers" else 0):
            err.write(f"char2forms {args.command}: error: --{flag} out of range: {v}\n")
            return EXIT_USAGE
    try:
        return args.handler(args, out)
    except (UsageError, Char2Error, OSError, ValueError) as exc:
        err.write(f"char2forms {args.command}: error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

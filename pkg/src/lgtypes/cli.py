"""Command line entry point.

Boolean answers print as ``true`` or ``false`` on the first line, followed
by any witness.  Exit status is 0 whenever the computation completes
(whatever the answer), 2 on bad input, 1 if an internal self-check fails.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import textio
from .algebra import FiniteAlgebra, Point, Sort, orbit_equivalent
from .errors import CheckFailed, ExtensionError, InternalCheckFailed, LGError
from .formulas import enumerate_formulas
from .freeword import semigroup_extend, verify_f2_counterexample
from .semantics import bounded_lker_eq, ef_equivalent, val_member
from .translate import translate
from .zlattice import abelian_extend, eval_u_abelian, eval_v_abelian, smith_normal_form


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load(parser, path: str, *args):
    try:
        return parser(_read(path), *args)
    except LGError as e:
        raise InputError(f"{path}: {e}") from None


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _sort_for(args, n: int) -> Sort:
    if args.sort:
        return Sort(tuple(args.sort.replace(",", " ").split()))
    return Sort(tuple(f"x{i}" for i in range(1, n + 1)))


def _point(text: str, H: FiniteAlgebra, sort: Sort) -> Point:
    try:
        return textio.parse_point(text, H, sort)
    except LGError as e:
        raise InputError(f"point {text!r}: {e}") from None


def _tuple_sort(args, text: str) -> Sort:
    """Sort of a point given as text: named variables, ``--sort``, or x1..xn."""
    toks = text.replace(",", " ").split()
    if any("=" in t for t in toks) and not args.sort:
        return Sort(tuple(t.partition("=")[0] for t in toks))
    return _sort_for(args, len(toks))


# -- verbs -----------------------------------------------------------------------


def cmd_eval(args) -> int:
    H = _load(textio.parse_algebra, args.algebra)
    u = _load(textio.parse_formula, args.formula, H.signature)
    p = _point(args.point, H, u.sort)
    print(_bool(val_member(H, u, p)))
    return 0


def cmd_lker_eq(args) -> int:
    H1 = _load(textio.parse_algebra, args.algebra)
    H2 = _load(textio.parse_algebra, args.algebra2) if args.algebra2 else H1
    sort = _tuple_sort(args, args.point1)
    p1, p2 = _point(args.point1, H1, sort), _point(args.point2, H2, sort)
    pool = _load(textio.parse_subst_pool, args.pool, H1.signature) if args.pool else []
    same, sep = bounded_lker_eq(H1, p1, H2, p2, args.max_length, args.max_term_depth, pool)
    print(_bool(same))
    if sep is not None:
        print(textio.format_formula(sep), end="")
    return 0


def cmd_type_eq(args) -> int:
    H = _load(textio.parse_algebra, args.algebra)
    a, b = textio.parse_tuple(args.tuple1), textio.parse_tuple(args.tuple2)
    for v in (*a, *b):
        if not 0 <= v < H.size:
            raise InputError(f"element {v} outside 0..{H.size - 1}")
    same, phi = orbit_equivalent(H, a, b)
    print(_bool(same))
    if phi is not None:
        print("automorphism: " + " ".join(map(str, phi)))
    return 0


def cmd_ef(args) -> int:
    H1 = _load(textio.parse_algebra, args.algebra)
    H2 = _load(textio.parse_algebra, args.algebra2) if args.algebra2 else H1
    a, b = textio.parse_tuple(args.tuple1), textio.parse_tuple(args.tuple2)
    for v, H in [*((v, H1) for v in a), *((v, H2) for v in b)]:
        if not 0 <= v < H.size:
            raise InputError(f"element {v} outside 0..{H.size - 1} of {H.name}")
    print(_bool(ef_equivalent(H1, a, H2, b, args.rounds)))
    return 0


def cmd_translate(args) -> int:
    sig = _load(textio.parse_algebra, args.algebra).signature if args.algebra else None
    u = _load(textio.parse_formula, args.formula, sig)
    print(translate(u))
    return 0


def cmd_snf(args) -> int:
    M = _load(textio.parse_matrix, args.matrix)
    snf = smith_normal_form(M)
    print("U:")
    print(snf.U)
    print("D:")
    print(snf.D)
    print("V:")
    print(snf.V)
    print("invariants: " + " ".join(map(str, snf.invariants)))
    return 0


def _vectors(path: str) -> list[tuple[int, ...]]:
    return _load(textio.parse_rows, path)


def cmd_abelian_extend(args) -> int:
    a, b = _vectors(args.source), _vectors(args.target)
    if len(a) != len(b):
        raise InputError(f"{len(a)} source vectors but {len(b)} targets")
    try:
        cert = abelian_extend(a, b, args.dim)
    except InternalCheckFailed:
        raise
    except ExtensionError as e:
        print("false")
        print(f"reason: {type(e).__name__}: {e}")
        return 0
    print("true")
    print("phi:")
    print(cert.phi)
    print(f"det: {cert.det}")
    return 0


def cmd_abelian_formula(args) -> int:
    q = textio.parse_tuple(args.q)
    g = _vectors(args.g)
    if args.kind == "u":
        print(_bool(eval_u_abelian(q, g)))
    else:
        if args.q0 is None:
            raise InputError("--kind v needs --q0")
        print(_bool(eval_v_abelian(q, args.q0, g)))
    return 0


def cmd_semigroup_extend(args) -> int:
    a = [textio.parse_sg_word(w) for w in args.a]
    b = [textio.parse_sg_word(w) for w in args.b]
    if len(a) != len(b):
        raise InputError(f"{len(a)} source words but {len(b)} targets")
    for w in (*a, *b):
        if max(w) > args.k:
            raise InputError(f"letter x{max(w)} outside the alphabet x1..x{args.k}")
    try:
        perm = semigroup_extend(args.k, a, b)
    except (ExtensionError, LGError) as e:
        print("false")
        print(f"reason: {type(e).__name__}: {e}")
        return 0
    print("true")
    for i, j in enumerate(perm, 1):
        print(f"x{i} -> x{j}")
    return 0


def cmd_f2_verify(args) -> int:
    report = verify_f2_counterexample(strict=False)
    print(report.render())
    return 0 if report.passed else 1


def cmd_enumerate(args) -> int:
    H = _load(textio.parse_algebra, args.algebra)
    sort = Sort(tuple(args.sort.replace(",", " ").split()))
    pool = _load(textio.parse_subst_pool, args.pool, H.signature) if args.pool else []
    for i, u in enumerate(enumerate_formulas(sort, H.signature, args.max_length, args.max_term_depth, pool)):
        if args.limit is not None and i >= args.limit:
            break
        print(u)
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lgtypes", description="Logical types of points in finite algebras.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, fn, help):
        sp = sub.add_parser(name, help=help, description=help)
        sp.set_defaults(func=fn)
        return sp

    def bounds(sp):
        sp.add_argument("--max-length", type=int, required=True, help="largest formula length")
        sp.add_argument("--max-term-depth", type=int, required=True, help="largest term depth")
        sp.add_argument("--pool", help="file of (map (sort ...) ((var term) ...)) substitutions")

    sp = verb("eval", cmd_eval, "Does a point satisfy a formula?")
    sp.add_argument("--algebra", required=True, help="algebra file")
    sp.add_argument("--formula", required=True, help="formula file: (sort ...) then the formula")
    sp.add_argument("--point", required=True, help="'x1=1 x2=0' or bare values in sort order")

    sp = verb("lker-eq", cmd_lker_eq, "Compare two points on all formulas within the bounds.")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--algebra2", help="second algebra (default: the first)")
    sp.add_argument("--sort", help="variables, e.g. 'x1 x2' (default x1..xn)")
    sp.add_argument("--point1", required=True)
    sp.add_argument("--point2", required=True)
    bounds(sp)

    sp = verb("type-eq", cmd_type_eq, "Is there an automorphism sending one tuple to the other?")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--tuple1", required=True, help="space-separated elements")
    sp.add_argument("--tuple2", required=True)

    sp = verb("ef", cmd_ef, "Ehrenfeucht-Fraisse game with pebbled tuples.")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--algebra2", help="second algebra (default: the first)")
    sp.add_argument("--tuple1", default="", help="space-separated elements (may be empty)")
    sp.add_argument("--tuple2", default="")
    sp.add_argument("--rounds", type=int, required=True)

    sp = verb("translate", cmd_translate, "Translate a formula into one-sorted first-order logic.")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--algebra", help="algebra whose nullary ops may appear as bare atoms")

    sp = verb("snf", cmd_snf, "Smith normal form U·M·V = D of an integer matrix.")
    sp.add_argument("--matrix", required=True, help="one row of integers per line")

    sp = verb("abelian-extend", cmd_abelian_extend, "Extend a_i -> b_i to an automorphism of Z^n.")
    sp.add_argument("--source", required=True, help="vectors a_i, one per line")
    sp.add_argument("--target", required=True, help="vectors b_i, one per line")
    sp.add_argument("--dim", type=int, help="ambient dimension (needed when the files are empty)")

    sp = verb("abelian-formula", cmd_abelian_formula, "Evaluate the u or v formula at a tuple of Z^m.")
    sp.add_argument("--kind", choices=("u", "v"), required=True)
    sp.add_argument("--q", required=True, help="coefficients q_1..q_n")
    sp.add_argument("--q0", type=int, help="coefficient of y (kind v)")
    sp.add_argument("--g", required=True, help="tuple elements, one vector per line")

    sp = verb("semigroup-extend", cmd_semigroup_extend, "Letter bijection sending each a_i to b_i.")
    sp.add_argument("--k", type=int, required=True, help="alphabet size")
    sp.add_argument("--a", action="append", required=True, help="source word, e.g. 'x1 x2' (repeatable)")
    sp.add_argument("--b", action="append", required=True, help="target word (repeatable)")

    verb("f2-verify", cmd_f2_verify, "Replay the rank-2 free group certificate.")

    sp = verb("enumerate", cmd_enumerate, "List formulas of a sort within the bounds.")
    sp.add_argument("--algebra", required=True, help="algebra supplying the signature")
    sp.add_argument("--sort", required=True, help="variables, e.g. 'x1 x2'")
    sp.add_argument("--limit", type=int, help="stop after this many formulas")
    bounds(sp)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InternalCheckFailed, CheckFailed) as e:
        print(f"internal check failed: {e}", file=sys.stderr)
        return 1
    except (InputError, LGError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

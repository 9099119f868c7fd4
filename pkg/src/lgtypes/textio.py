"""Text formats: algebras, terms and formulas, points, matrices, words.

Every parser reports problems as ``TextSyntaxError`` (malformed text) or
``ValidationError`` (well-formed text describing an invalid object), with
1-based line and column numbers where they are known.  Each ``format_*``
function produces text its parser reads back to an equal object.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from .algebra import App, FiniteAlgebra, Point, Signature, Sort, Substitution, Term, Var
from .errors import LGError, TextSyntaxError, ValidationError
from .formulas import And, Eq, Exists, MSFormula, Not, Or, Subst
from .zlattice import IntMatrix

# -- algebras ------------------------------------------------------------------


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise TextSyntaxError(f"{what} must be an integer, got {tok!r}", no) from None


def parse_algebra(text: str) -> FiniteAlgebra:
    """Read ``algebra``/``size``/``op``/``table`` lines; ``#`` starts a comment."""
    name = size = None
    ops: list[tuple[str, int, int]] = []  # (name, arity, line)
    tables: dict[str, tuple[tuple[int, ...], int]] = {}
    for no, line in _content_lines(text):
        key, *tail = line.split(None, 1)
        rest = tail[0] if tail else ""
        if key == "algebra":
            if not rest or len(rest.split()) != 1:
                raise TextSyntaxError("expected 'algebra <name>'", no)
            if name is not None:
                raise ValidationError("algebra name given twice", no)
            name = rest
        elif key == "size":
            if size is not None:
                raise ValidationError("size given twice", no)
            size = _int(rest, no, "size")
            if size < 1:
                raise ValidationError(f"size must be positive, got {size}", no)
        elif key == "op":
            parts = rest.split()
            if len(parts) != 2:
                raise TextSyntaxError("expected 'op <name> <arity>'", no)
            arity = _int(parts[1], no, "arity")
            if arity < 0:
                raise ValidationError(f"op {parts[0]}: negative arity", no)
            if any(o == parts[0] for o, _, _ in ops):
                raise ValidationError(f"op {parts[0]} declared twice", no)
            ops.append((parts[0], arity, no))
        elif key == "table":
            head, colon, values = rest.partition(":")
            op = head.strip()
            if not colon or not op or " " in op:
                raise TextSyntaxError("expected 'table <name>: v0 v1 ...'", no)
            if op in tables:
                raise ValidationError(f"table {op} given twice", no)
            tables[op] = (tuple(_int(v, no, f"table {op} entry") for v in values.split()), no)
        else:
            raise TextSyntaxError(f"unknown directive {key!r}", no)
    if name is None:
        raise ValidationError("missing 'algebra <name>' line")
    if size is None:
        raise ValidationError("missing 'size <m>' line")
    declared = {o for o, _, _ in ops}
    for op, (_, no) in tables.items():
        if op not in declared:
            raise ValidationError(f"table for undeclared op {op}", no)
    out = []
    for op, arity, no in ops:
        if op not in tables:
            raise ValidationError(f"op {op} has no table", no)
        values, tno = tables[op]
        if len(values) != size**arity:
            raise ValidationError(
                f"table {op}: expected {size**arity} entries (size {size}, arity {arity}), got {len(values)}",
                tno,
            )
        bad = [v for v in values if not 0 <= v < size]
        if bad:
            raise ValidationError(f"table {op}: value {bad[0]} out of range 0..{size - 1}", tno)
        out.append(values)
    return FiniteAlgebra(name, Signature(tuple((o, r) for o, r, _ in ops)), size, tuple(out))


def format_algebra(H: FiniteAlgebra) -> str:
    lines = [f"algebra {H.name}", f"size {H.size}"]
    lines += [f"op {n} {r}" for n, r in H.signature.ops]
    for (n, _), t in zip(H.signature.ops, H.tables):
        lines.append(f"table {n}: " + " ".join(map(str, t)))
    return "\n".join(lines) + "\n"


# -- s-expressions -------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...]
    line: int
    column: int


SExpr = Union[Atom, SList]

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s()]+")


def _tokens(text: str):
    line, col0 = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        column = m.start() - col0 + 1
        if tok[0].isspace() or tok[0] == ";":
            nl = tok.count("\n")
            if nl:
                line += nl
                col0 = m.start() + tok.rindex("\n") + 1
            continue
        yield tok, line, column


def parse_sexprs(text: str) -> list[SExpr]:
    """All top-level s-expressions in ``text``; ``;`` comments run to end of line."""
    stack: list[tuple[list, int, int]] = []
    top: list[SExpr] = []
    for tok, line, col in _tokens(text):
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise TextSyntaxError("unbalanced ')'", line, col)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else top).append(node)
        else:
            (stack[-1][0] if stack else top).append(Atom(tok, line, col))
    if stack:
        _, l0, c0 = stack[-1]
        raise TextSyntaxError("unclosed '('", l0, c0)
    return top


def _err(node: SExpr, msg: str, cls=TextSyntaxError):
    return cls(msg, node.line, node.column)


def _name(node: SExpr, what: str) -> str:
    if not isinstance(node, Atom):
        raise _err(node, f"expected {what}")
    return node.text


def term_from_sexpr(node: SExpr, signature: Signature | None = None) -> Term:
    """Bare atoms are variables unless the signature declares them nullary ops."""
    if isinstance(node, Atom):
        if signature is not None and node.text in signature and signature.arity(node.text) == 0:
            return App(node.text)
        return Var(node.text)
    if not node.items:
        raise _err(node, "empty term")
    op = _name(node.items[0], "an operation name")
    args = tuple(term_from_sexpr(a, signature) for a in node.items[1:])
    if signature is not None:
        if op not in signature:
            raise _err(node, f"unknown operation {op}", ValidationError)
        if signature.arity(op) != len(args):
            raise _err(
                node, f"operation {op} has arity {signature.arity(op)}, got {len(args)}", ValidationError
            )
    return App(op, args)


def parse_term(text: str, signature: Signature | None = None) -> Term:
    nodes = parse_sexprs(text)
    if len(nodes) != 1:
        raise TextSyntaxError(f"expected one term, found {len(nodes)} expressions")
    return term_from_sexpr(nodes[0], signature)


def _bindings(node: SExpr, codomain: Sort, signature) -> Substitution:
    if not isinstance(node, SList):
        raise _err(node, "expected ((var term) ...)")
    images: dict[str, Term] = {}
    for b in node.items:
        if not isinstance(b, SList) or len(b.items) != 2:
            raise _err(b, "expected (var term)")
        x = _name(b.items[0], "a variable")
        if x in images:
            raise _err(b, f"variable {x} bound twice", ValidationError)
        images[x] = term_from_sexpr(b.items[1], signature)
    try:
        return Substitution.from_mapping(images, codomain)
    except LGError as e:
        raise _err(node, str(e), ValidationError) from None


def formula_from_sexpr(node: SExpr, sort: Sort, signature: Signature | None = None) -> MSFormula:
    """Build a formula of the given sort; a ``subst`` body takes the sort of its bindings."""
    if not isinstance(node, SList) or not node.items:
        raise _err(node, "expected a formula")
    head = _name(node.items[0], "a connective")
    args = node.items[1:]

    def need(n):
        if len(args) != n:
            raise _err(node, f"{head} takes {n} argument(s), got {len(args)}")

    try:
        if head == "eq":
            need(2)
            return Eq(term_from_sexpr(args[0], signature), term_from_sexpr(args[1], signature), sort)
        if head == "not":
            need(1)
            return Not(formula_from_sexpr(args[0], sort, signature))
        if head in ("and", "or"):
            need(2)
            cls = And if head == "and" else Or
            return cls(formula_from_sexpr(args[0], sort, signature),
                       formula_from_sexpr(args[1], sort, signature))
        if head == "exists":
            need(2)
            return Exists(_name(args[0], "a variable"), formula_from_sexpr(args[1], sort, signature))
        if head == "subst":
            need(2)
            s = _bindings(args[0], sort, signature)
            return Subst(s, formula_from_sexpr(args[1], s.domain, signature))
    except (TextSyntaxError, ValidationError):
        raise
    except LGError as e:
        raise _err(node, str(e), ValidationError) from None
    raise _err(node, f"unknown connective {head!r}")


def _sort_header(node: SExpr) -> Sort:
    if not (isinstance(node, SList) and node.items and isinstance(node.items[0], Atom)
            and node.items[0].text == "sort"):
        raise _err(node, "expected (sort x1 ...) header")
    names = [_name(v, "a variable") for v in node.items[1:]]
    try:
        return Sort(tuple(names))
    except LGError as e:
        raise _err(node, str(e), ValidationError) from None


def parse_formula(text: str, signature: Signature | None = None) -> MSFormula:
    """A ``(sort ...)`` header followed by one formula."""
    nodes = parse_sexprs(text)
    if not nodes:
        raise TextSyntaxError("empty input: expected (sort ...) and a formula")
    sort = _sort_header(nodes[0])
    if len(nodes) != 2:
        raise TextSyntaxError(f"expected (sort ...) then one formula, found {len(nodes)} expressions")
    return formula_from_sexpr(nodes[1], sort, signature)


def format_sort(sort: Sort) -> str:
    return "(sort" + "".join(f" {x}" for x in sort) + ")"


def format_formula(u: MSFormula) -> str:
    return f"{format_sort(u.sort)}\n{u}\n"


def parse_subst_pool(text: str, signature: Signature | None = None) -> list[Substitution]:
    """Entries ``(map (sort <codomain>) ((var term) ...))``."""
    pool = []
    for node in parse_sexprs(text):
        if not (isinstance(node, SList) and len(node.items) == 3
                and isinstance(node.items[0], Atom) and node.items[0].text == "map"):
            raise _err(node, "expected (map (sort ...) ((var term) ...))")
        pool.append(_bindings(node.items[2], _sort_header(node.items[1]), signature))
    return pool


def format_subst(s: Substitution) -> str:
    return f"(map {format_sort(s.codomain)} {s})"


# -- points --------------------------------------------------------------------


def parse_point(text: str, algebra: FiniteAlgebra, sort: Sort) -> Point:
    """``x1=1 x2=3`` (any order) or bare values in the sort's variable order."""
    toks = text.replace(",", " ").split()
    if any("=" in t for t in toks):
        values: dict[str, int] = {}
        for t in toks:
            x, eq, v = t.partition("=")
            if not eq:
                raise TextSyntaxError(f"mixed 'var=value' and bare values near {t!r}")
            if x in values:
                raise ValidationError(f"variable {x} assigned twice")
            values[x] = _int(v, None, f"value of {x}")
        missing = [x for x in sort if x not in values]
        extra = [x for x in values if x not in sort]
        if missing or extra:
            raise ValidationError(f"point must assign exactly {sort}")
        vals = [values[x] for x in sort]
    else:
        vals = [_int(t, None, "point value") for t in toks]
        if len(vals) != len(sort):
            raise ValidationError(f"{len(vals)} values for sort {sort}")
    try:
        return Point(algebra, sort, tuple(vals))
    except LGError as e:
        raise ValidationError(str(e)) from None


def parse_tuple(text: str) -> tuple[int, ...]:
    return tuple(_int(t, None, "tuple entry") for t in text.replace(",", " ").split())


def format_point(p: Point) -> str:
    return " ".join(f"{x}={v}" for x, v in zip(p.sort, p.values))


# -- matrices ------------------------------------------------------------------


def parse_rows(text: str) -> list[tuple[int, ...]]:
    """One row of space-separated integers per non-blank line."""
    rows = []
    for no, line in _content_lines(text):
        row = tuple(_int(t, no, "matrix entry") for t in line.split())
        if rows and len(row) != len(rows[0]):
            raise ValidationError(f"row has {len(row)} entries, the first row has {len(rows[0])}", no)
        rows.append(row)
    return rows


def parse_matrix(text: str) -> IntMatrix:
    rows = parse_rows(text)
    if not rows:
        raise ValidationError("empty matrix")
    return IntMatrix(tuple(rows))


def format_matrix(M: IntMatrix) -> str:
    return str(M) + "\n"


# -- words ---------------------------------------------------------------------

_LETTER = re.compile(r"^([xX])([1-9]\d*)$")


def parse_sg_word(text: str) -> tuple[int, ...]:
    out = []
    for t in text.split():
        m = _LETTER.match(t)
        if not m or m.group(1) != "x":
            raise TextSyntaxError(f"bad semigroup letter {t!r}")
        out.append(int(m.group(2)))
    if not out:
        raise ValidationError("semigroup words are non-empty")
    return tuple(out)


def parse_f_word(text: str) -> tuple[int, ...]:
    """``x1 x1 x2 X1 x2``; a capital letter is an inverse; ``1`` is the empty word."""
    if text.strip() == "1":
        return ()
    out = []
    for t in text.split():
        m = _LETTER.match(t)
        if not m:
            raise TextSyntaxError(f"bad letter {t!r}")
        i = int(m.group(2))
        out.append(i if m.group(1) == "x" else -i)
    return tuple(out)


def format_sg_word(w: Sequence[int]) -> str:
    return " ".join(f"x{x}" for x in w)

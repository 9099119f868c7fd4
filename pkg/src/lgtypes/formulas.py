"""Multi-sorted formulas over W(X): AST, length, enumeration, generators.

Every node carries its sort.  Constructors reject ill-sorted input rather
than repairing it: an equality's terms must live in its sort, a quantified
variable must belong to the sort, and a substitution node ``s_* v`` needs
``v`` of sort ``s.domain`` and has sort ``s.codomain``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

from .algebra import (
    App,
    Signature,
    Sort,
    Substitution,
    Term,
    Var,
    check_term,
    term_vars,
    var_key,
)
from .errors import LengthMismatch, SortMismatch, SortOverlap, UnknownVariable, VariableClash


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term
    sort: Sort

    def __post_init__(self):
        extra = (term_vars(self.lhs) | term_vars(self.rhs)) - set(self.sort.vars)
        if extra:
            raise UnknownVariable(
                f"equality uses {', '.join(sorted(extra, key=var_key))} outside sort {self.sort}"
            )

    @cached_property
    def _text(self) -> str:
        return f"(eq {self.lhs} {self.rhs})"

    def __str__(self):
        return self._text


@dataclass(frozen=True)
class Not:
    body: "MSFormula"
    sort: Sort = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sort", self.body.sort)

    @cached_property
    def _text(self) -> str:
        return f"(not {self.body})"

    def __str__(self):
        return self._text


@dataclass(frozen=True)
class _Binary:
    left: "MSFormula"
    right: "MSFormula"
    sort: Sort = field(init=False, repr=False)

    def __post_init__(self):
        if self.left.sort != self.right.sort:
            raise SortMismatch(f"cannot combine sorts {self.left.sort} and {self.right.sort}")
        object.__setattr__(self, "sort", self.left.sort)


@dataclass(frozen=True)
class And(_Binary):
    @cached_property
    def _text(self) -> str:
        return f"(and {self.left} {self.right})"

    def __str__(self):
        return self._text


@dataclass(frozen=True)
class Or(_Binary):
    @cached_property
    def _text(self) -> str:
        return f"(or {self.left} {self.right})"

    def __str__(self):
        return self._text


@dataclass(frozen=True)
class Exists:
    var: str
    body: "MSFormula"
    sort: Sort = field(init=False, repr=False)

    def __post_init__(self):
        if self.var not in self.body.sort:
            raise UnknownVariable(f"quantified variable {self.var} not in sort {self.body.sort}")
        object.__setattr__(self, "sort", self.body.sort)

    @cached_property
    def _text(self) -> str:
        return f"(exists {self.var} {self.body})"

    def __str__(self):
        return self._text


@dataclass(frozen=True)
class Subst:
    """The formula ``s_* body``."""

    subst: Substitution
    body: "MSFormula"
    sort: Sort = field(init=False, repr=False)

    def __post_init__(self):
        if self.body.sort != self.subst.domain:
            raise SortMismatch(
                f"substitution domain {self.subst.domain} differs from body sort {self.body.sort}"
            )
        object.__setattr__(self, "sort", self.subst.codomain)

    @cached_property
    def _text(self) -> str:
        return f"(subst {self.subst} {self.body})"

    def __str__(self):
        return self._text


MSFormula = Eq | Not | And | Or | Exists | Subst


def length(u: MSFormula) -> int:
    if isinstance(u, Eq):
        return 0
    if isinstance(u, (Not, Exists, Subst)):
        return length(u.body) + 1
    return length(u.left) + length(u.right) + 1


def check_formula(u: MSFormula, signature: Signature) -> None:
    """Check every term of ``u`` against the signature's arities."""
    if isinstance(u, Eq):
        check_term(u.lhs, signature, u.sort)
        check_term(u.rhs, signature, u.sort)
    elif isinstance(u, (Not, Exists)):
        check_formula(u.body, signature)
    elif isinstance(u, Subst):
        for _, t in u.subst.images:
            check_term(t, signature, u.subst.codomain)
        check_formula(u.body, signature)
    else:
        check_formula(u.left, signature)
        check_formula(u.right, signature)


def subformulas(u: MSFormula) -> Iterator[MSFormula]:
    yield u
    if isinstance(u, (Not, Exists, Subst)):
        yield from subformulas(u.body)
    elif isinstance(u, (And, Or)):
        yield from subformulas(u.left)
        yield from subformulas(u.right)


def conj(*parts: MSFormula) -> MSFormula:
    """Right-associated conjunction of one or more formulas."""
    if not parts:
        raise LengthMismatch("empty conjunction")
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = And(f, out)
    return out


def disj(*parts: MSFormula) -> MSFormula:
    if not parts:
        raise LengthMismatch("empty disjunction")
    out = parts[-1]
    for f in reversed(parts[:-1]):
        out = Or(f, out)
    return out


def forall(var: str, body: MSFormula) -> MSFormula:
    """``∀x u`` as the derived form ``¬∃x ¬u``."""
    return Not(Exists(var, Not(body)))


def implies(a: MSFormula, b: MSFormula) -> MSFormula:
    return Or(Not(a), b)


def enumeration_key(u: MSFormula) -> tuple[int, str]:
    """Order used by every enumeration: length first, then s-expression text."""
    return (length(u), str(u))


# -- enumeration -------------------------------------------------------------


def enumerate_terms(sort: Sort, signature: Signature, max_depth: int) -> list[Term]:
    """All terms over ``sort`` of depth <= max_depth, ordered by (depth, text)."""
    layers: list[list[Term]] = []
    base: list[Term] = [Var(x) for x in sort]
    base += [App(name) for name, r in signature.ops if r == 0]
    layers.append(sorted(base, key=str))
    for d in range(1, max_depth + 1):
        allowed = [t for layer in layers for t in layer]
        newest = set(layers[-1])
        new = []
        for name, r in signature.ops:
            if r == 0:
                continue
            for args in product(allowed, repeat=r):
                # at least one argument from the previous layer
                if newest.isdisjoint(args):
                    continue
                new.append(App(name, args))
        layers.append(sorted(set(new), key=str))
    return [t for layer in layers for t in layer]


class _FormulaLevels:
    """Formulas of exact length n per sort, memoized and sorted by text."""

    def __init__(self, signature, max_term_depth, subst_pool):
        self.signature = signature
        self.max_term_depth = max_term_depth
        self.pool = tuple(subst_pool)
        self._memo: dict[tuple[Sort, int], list[MSFormula]] = {}

    def level(self, sort: Sort, n: int) -> list[MSFormula]:
        key = (sort, n)
        if key not in self._memo:
            self._memo[key] = self._build(sort, n)
        return self._memo[key]

    def _build(self, sort: Sort, n: int) -> list[MSFormula]:
        out: dict[str, MSFormula] = {}

        def add(f):
            out.setdefault(str(f), f)

        if n == 0:
            terms = enumerate_terms(sort, self.signature, self.max_term_depth)
            for lhs, rhs in product(terms, repeat=2):
                add(Eq(lhs, rhs, sort))
        else:
            for f in self.level(sort, n - 1):
                add(Not(f))
                for x in sort:
                    add(Exists(x, f))
            for s in self.pool:
                if s.codomain == sort:
                    for f in self.level(s.domain, n - 1):
                        add(Subst(s, f))
            for n1 in range(n):
                lefts, rights = self.level(sort, n1), self.level(sort, n - 1 - n1)
                for f1, f2 in product(lefts, rights):
                    add(And(f1, f2))
                    add(Or(f1, f2))
        return [out[k] for k in sorted(out)]


def enumerate_formulas(
    sort: Sort,
    signature: Signature,
    max_length: int,
    max_term_depth: int,
    subst_pool: Sequence[Substitution] = (),
) -> Iterator[MSFormula]:
    """Every formula of the sort within the bounds, once, in ``enumeration_key`` order.

    Substitution nodes are drawn only from ``subst_pool``.  The output for
    ``max_length = L - 1`` is a prefix of the output for ``L``.
    """
    if max_length < 0 or max_term_depth < 0:
        raise ValueError("bounds must be non-negative")
    levels = _FormulaLevels(signature, max_term_depth, subst_pool)
    for n in range(max_length + 1):
        yield from levels.level(sort, n)


# -- named generators --------------------------------------------------------


def presentation_formula(X: Sort, Y: Sort, words: Sequence[Term]) -> Subst:
    """``s_*(∃y1)...(∃yn)(x1≡w1 ∧ ... ∧ xk≡wk)`` with s(xi)=xi, s(yj)=x1.

    A point of sort X satisfies it iff its values are a simultaneous image
    of ``words`` under some assignment of Y.
    """
    if not X.isdisjoint(Y):
        raise SortOverlap(f"sorts {X} and {Y} share variables")
    if len(words) != len(X):
        raise LengthMismatch(f"{len(X)} variables but {len(words)} words")
    if not len(X):
        raise LengthMismatch("presentation formula needs a non-empty sort X")
    for w in words:
        extra = term_vars(w) - set(Y.vars)
        if extra:
            raise UnknownVariable(f"word {w} uses variables outside {Y}")
    Z = X.union(Y)
    body: MSFormula = conj(*(Eq(Var(x), w, Z) for x, w in zip(X, words)))
    for y in reversed(Y.vars):
        body = Exists(y, body)
    images = [(x, Var(x)) for x in X] + [(y, Var(X.vars[0])) for y in Y]
    return Subst(Substitution(Z, X, tuple(images)), body)


def proper_extension_formula(X: Sort, x_new: str, w: Term) -> Not:
    """``¬(x_new ≡ w)`` of sort X ∪ {x_new}."""
    if x_new in X:
        raise VariableClash(f"{x_new} already belongs to {X}")
    extra = term_vars(w) - set(X.vars)
    if extra:
        raise UnknownVariable(f"term {w} uses variables outside {X}")
    return Not(Eq(Var(x_new), w, X.union([x_new])))

"""Translation of multi-sorted formulas into one-sorted first-order logic.

Free variables of the output come from the ordinary variable names; every
bound variable is a tilde copy printed ``~x_k``, where ``k`` numbers the
quantifiers of one translation call in depth-first pre-order.  Numbering
per quantifier rather than per variable keeps nested ``∃x ... ∃x``
apart.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Mapping, Sequence

from .algebra import FiniteAlgebra, Sort, Term, Var, rename_vars, term_vars
from .errors import IllFormedFormula, MissingAssignment
from .formulas import And, Eq, Exists, MSFormula, Not, Or, Subst

TILDE = "~"


def is_tilde(name: str) -> bool:
    return name.startswith(TILDE)


@dataclass(frozen=True)
class FOEq:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"(eq {self.lhs} {self.rhs})"


@dataclass(frozen=True)
class FONot:
    body: "FOFormula"

    def __str__(self):
        return f"(not {self.body})"


@dataclass(frozen=True)
class FOAnd:
    left: "FOFormula"
    right: "FOFormula"

    def __str__(self):
        return f"(and {self.left} {self.right})"


@dataclass(frozen=True)
class FOOr:
    left: "FOFormula"
    right: "FOFormula"

    def __str__(self):
        return f"(or {self.left} {self.right})"


@dataclass(frozen=True)
class FOExists:
    var: str
    body: "FOFormula"

    def __post_init__(self):
        if not is_tilde(self.var):
            raise IllFormedFormula(f"bound variable {self.var} is not a tilde variable")

    def __str__(self):
        return f"(exists {self.var} {self.body})"


FOFormula = FOEq | FONot | FOAnd | FOOr | FOExists


def fo_free_vars(f: FOFormula) -> frozenset[str]:
    if isinstance(f, FOEq):
        return term_vars(f.lhs) | term_vars(f.rhs)
    if isinstance(f, FONot):
        return fo_free_vars(f.body)
    if isinstance(f, FOExists):
        return fo_free_vars(f.body) - {f.var}
    return fo_free_vars(f.left) | fo_free_vars(f.right)


def fo_bound_vars(f: FOFormula) -> list[str]:
    if isinstance(f, FOEq):
        return []
    if isinstance(f, FONot):
        return fo_bound_vars(f.body)
    if isinstance(f, FOExists):
        return [f.var, *fo_bound_vars(f.body)]
    return fo_bound_vars(f.left) + fo_bound_vars(f.right)


def check_fo(f: FOFormula) -> None:
    """Tilde variables only in bound position, ordinary ones only free."""
    free = fo_free_vars(f)
    stray = sorted(v for v in free if is_tilde(v))
    if stray:
        raise IllFormedFormula(f"tilde variables occur free: {', '.join(stray)}")
    bound = fo_bound_vars(f)
    if len(set(bound)) != len(bound):
        raise IllFormedFormula("a tilde variable is bound twice")


def _rename(f: FOFormula, mapping: Mapping[str, Term]) -> FOFormula:
    if isinstance(f, FOEq):
        return FOEq(rename_vars(f.lhs, mapping), rename_vars(f.rhs, mapping))
    if isinstance(f, FONot):
        return FONot(_rename(f.body, mapping))
    if isinstance(f, FOExists):
        # bound names are tilde copies and never keys of ``mapping``
        return FOExists(f.var, _rename(f.body, mapping))
    return type(f)(_rename(f.left, mapping), _rename(f.right, mapping))


def translate(u: MSFormula) -> FOFormula:
    """The one-sorted formula ``ũ`` with the same satisfying tuples as ``u``."""
    counter = count(1)

    def tr(u):
        if isinstance(u, Eq):
            return FOEq(u.lhs, u.rhs)
        if isinstance(u, Not):
            return FONot(tr(u.body))
        if isinstance(u, And):
            return FOAnd(tr(u.left), tr(u.right))
        if isinstance(u, Or):
            return FOOr(tr(u.left), tr(u.right))
        if isinstance(u, Exists):
            tilde = f"{TILDE}{u.var}_{next(counter)}"
            return FOExists(tilde, _rename(tr(u.body), {u.var: Var(tilde)}))
        if isinstance(u, Subst):
            return _rename(tr(u.body), u.subst.as_dict())
        raise IllFormedFormula(f"not a multi-sorted formula: {u!r}")

    return tr(u)


def _value(H: FiniteAlgebra, t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        return env[t.name]
    return H.apply(t.op, [_value(H, a, env) for a in t.args])


def _sat(H: FiniteAlgebra, f: FOFormula, env: dict[str, int]) -> bool:
    if isinstance(f, FOEq):
        return _value(H, f.lhs, env) == _value(H, f.rhs, env)
    if isinstance(f, FONot):
        return not _sat(H, f.body, env)
    if isinstance(f, FOAnd):
        return _sat(H, f.left, env) and _sat(H, f.right, env)
    if isinstance(f, FOOr):
        return _sat(H, f.left, env) or _sat(H, f.right, env)
    for v in H.elements:
        if _sat(H, f.body, {**env, f.var: v}):
            return True
    return False


def fo_sat(H: FiniteAlgebra, f: FOFormula, assignment: Mapping[str, int]) -> bool:
    """Tarskian satisfaction of ``f`` in ``H`` under ``assignment``."""
    missing = sorted(fo_free_vars(f) - set(assignment))
    if missing:
        raise MissingAssignment(f"no value for free variable(s) {', '.join(missing)}")
    return _sat(H, f, dict(assignment))


def tp_member(H: FiniteAlgebra, f: FOFormula, a: Sequence[int], variables: Sort) -> bool:
    """Is ``f`` in the type of the tuple ``a`` (assigned to ``variables`` in order)?"""
    if len(a) != len(variables):
        raise MissingAssignment(f"{len(variables)} variables but {len(a)} values")
    extra = sorted(fo_free_vars(f) - set(variables.vars))
    if extra:
        raise MissingAssignment(f"free variable(s) {', '.join(extra)} outside {variables}")
    return _sat(H, f, dict(zip(variables.vars, a)))

"""Signatures, terms of the free algebra W(X), finite algebras and points.

Elements of a finite algebra of size ``m`` are the integers ``0..m-1``.
Operation tables are flat tuples in row-major, lexicographic argument
order: the value of ``f(a1, ..., ar)`` sits at index
``a1*m**(r-1) + ... + ar``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ArityMismatch, LengthMismatch, UnknownVariable, ValidationError, VariableClash

_VAR_PATTERN = re.compile(r"^(.*?)(\d*)$")


def var_key(name: str):
    """Natural ordering for variable names: ``x2`` sorts before ``x10``."""
    prefix, digits = _VAR_PATTERN.match(name).groups()
    return (prefix, int(digits) if digits else -1, name)


@dataclass(frozen=True)
class Sort:
    """A finite set of variables, kept in natural order."""

    vars: tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.vars)
        if len(set(names)) != len(names):
            raise VariableClash(f"duplicate variable in sort {names}")
        object.__setattr__(self, "vars", tuple(sorted(names, key=var_key)))

    @classmethod
    def of(cls, *names: str) -> "Sort":
        return cls(tuple(names))

    def __iter__(self):
        return iter(self.vars)

    def __len__(self):
        return len(self.vars)

    def __contains__(self, name):
        return name in self.vars

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UnknownVariable(f"variable {name} not in sort {self}") from None

    def union(self, other: Iterable[str]) -> "Sort":
        return Sort(tuple(dict.fromkeys((*self.vars, *other))))

    def isdisjoint(self, other: Iterable[str]) -> bool:
        return set(self.vars).isdisjoint(other)

    def __str__(self):
        return "{" + ", ".join(self.vars) + "}"


@dataclass(frozen=True)
class Signature:
    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        ops = tuple((str(n), int(r)) for n, r in self.ops)
        names = [n for n, _ in ops]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate operation name in {names}")
        for n, r in ops:
            if r < 0:
                raise ValidationError(f"operation {n} has negative arity {r}")
        object.__setattr__(self, "ops", ops)

    def arity(self, name: str) -> int:
        for n, r in self.ops:
            if n == name:
                return r
        raise KeyError(name)

    def __contains__(self, name):
        return any(n == name for n, _ in self.ops)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.ops)


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @cached_property
    def _text(self) -> str:
        if not self.args:
            return f"({self.op})"
        return f"({self.op} {' '.join(map(str, self.args))})"

    def __str__(self):
        return self._text


Term = Var | App


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out = frozenset()
    for a in t.args:
        out |= term_vars(a)
    return out


def term_depth(t: Term) -> int:
    """Variables and constants have depth 0."""
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def check_term(t: Term, signature: Signature, sort: Sort | None = None) -> None:
    """Raise if ``t`` breaks an arity or uses a variable outside ``sort``."""
    if isinstance(t, Var):
        if sort is not None and t.name not in sort:
            raise UnknownVariable(f"variable {t.name} not in sort {sort}")
        return
    try:
        r = signature.arity(t.op)
    except KeyError:
        raise ArityMismatch(f"unknown operation {t.op}") from None
    if r != len(t.args):
        raise ArityMismatch(f"operation {t.op} has arity {r}, got {len(t.args)} arguments")
    for a in t.args:
        check_term(a, signature, sort)


def rename_vars(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneously replace variables by terms; unmapped variables stay."""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return App(t.op, tuple(rename_vars(a, mapping) for a in t.args))


# -- finite algebras ---------------------------------------------------------


@dataclass(frozen=True)
class FiniteAlgebra:
    name: str
    signature: Signature
    size: int
    tables: tuple[tuple[int, ...], ...]
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        m = self.size
        if m < 1:
            raise ValidationError(f"algebra {self.name}: size must be positive, got {m}")
        tables = tuple(tuple(int(v) for v in t) for t in self.tables)
        if len(tables) != len(self.signature.ops):
            raise ValidationError(f"algebra {self.name}: expected {len(self.signature.ops)} tables")
        for (name, r), t in zip(self.signature.ops, tables):
            if len(t) != m**r:
                raise ValidationError(
                    f"table {name}: expected {m**r} entries (size {m}, arity {r}), got {len(t)}"
                )
            for v in t:
                if not 0 <= v < m:
                    raise ValidationError(f"table {name}: value {v} out of range 0..{m - 1}")
        object.__setattr__(self, "tables", tables)
        object.__setattr__(
            self, "_lookup", {n: (r, t) for (n, r), t in zip(self.signature.ops, tables)}
        )

    @classmethod
    def from_functions(cls, name: str, size: int, ops: Sequence[tuple[str, int, object]]) -> "FiniteAlgebra":
        """Build tables by calling ``fn(*args)`` on every argument tuple."""
        sig = Signature(tuple((n, r) for n, r, _ in ops))
        tables = []
        for _, r, fn in ops:
            tables.append(tuple(fn(*args) % size for args in product(range(size), repeat=r)))
        return cls(name, sig, size, tuple(tables))

    @property
    def elements(self) -> range:
        return range(self.size)

    def table(self, op: str) -> tuple[int, ...]:
        return self._lookup[op][1]

    def apply(self, op: str, args: Sequence[int]) -> int:
        try:
            r, t = self._lookup[op]
        except KeyError:
            raise ArityMismatch(f"unknown operation {op}") from None
        if r != len(args):
            raise ArityMismatch(f"operation {op} has arity {r}, got {len(args)} arguments")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return t[idx]


def cyclic_group(n: int) -> FiniteAlgebra:
    return FiniteAlgebra.from_functions(
        f"Z{n}", n, [("+", 2, lambda a, b: a + b), ("neg", 1, lambda a: -a), ("0", 0, lambda: 0)]
    )


def klein_group() -> FiniteAlgebra:
    return FiniteAlgebra.from_functions(
        "Z2xZ2", 4, [("+", 2, lambda a, b: a ^ b), ("neg", 1, lambda a: a), ("0", 0, lambda: 0)]
    )


_S3 = ((0, 1, 2), (1, 0, 2), (0, 2, 1), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def symmetric_group3() -> FiniteAlgebra:
    """S3 on elements 0..5 (lexicographic one-line order), identity is 0."""
    idx = {p: i for i, p in enumerate(_S3)}

    def mul(a, b):
        p, q = _S3[a], _S3[b]
        return idx[tuple(q[p[i]] for i in range(3))]

    def inv(a):
        p = _S3[a]
        out = [0, 0, 0]
        for i, v in enumerate(p):
            out[v] = i
        return idx[tuple(out)]

    return FiniteAlgebra.from_functions("S3", 6, [("+", 2, mul), ("neg", 1, inv), ("0", 0, lambda: 0)])


def small_groups(max_order: int = 6) -> list[FiniteAlgebra]:
    """One group table per isomorphism class of order <= max_order (max 7)."""
    if max_order > 7:
        raise ValueError("only orders up to 7 are tabulated")
    out = []
    for n in range(1, max_order + 1):
        out.append(cyclic_group(n))
        if n == 4:
            out.append(klein_group())
        if n == 6:
            out.append(symmetric_group3())
    return out


# -- points and substitutions ------------------------------------------------


@dataclass(frozen=True)
class Point:
    """A homomorphism W(X) -> H, stored as the tuple of values on the sort."""

    algebra: FiniteAlgebra
    sort: Sort
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if len(values) != len(self.sort):
            raise LengthMismatch(f"point on {self.sort} needs {len(self.sort)} values, got {len(values)}")
        for v in values:
            if not 0 <= v < self.algebra.size:
                raise ValidationError(f"value {v} outside algebra {self.algebra.name}")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, algebra: FiniteAlgebra, sort: Sort, mapping: Mapping[str, int]) -> "Point":
        missing = [x for x in sort if x not in mapping]
        if missing:
            raise UnknownVariable(f"no value for {', '.join(missing)}")
        return cls(algebra, sort, tuple(mapping[x] for x in sort))

    def __getitem__(self, name: str) -> int:
        return self.values[self.sort.index(name)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.sort.vars, self.values))

    def updated(self, name: str, value: int) -> "Point":
        i = self.sort.index(name)
        return Point(self.algebra, self.sort, self.values[:i] + (value,) + self.values[i + 1:])


def points(algebra: FiniteAlgebra, sort: Sort) -> Iterator[Point]:
    """All points of the sort, lexicographic with the first variable slowest."""
    for values in product(range(algebra.size), repeat=len(sort)):
        yield Point(algebra, sort, values)


@dataclass(frozen=True)
class Substitution:
    """A homomorphism s: W(domain) -> W(codomain), given on the free generators."""

    domain: Sort
    codomain: Sort
    images: tuple[tuple[str, Term], ...]

    def __post_init__(self):
        images = dict(self.images)
        if set(images) != set(self.domain.vars) or len(images) != len(tuple(self.images)):
            raise UnknownVariable(
                f"substitution must be given exactly once on each of {self.domain}"
            )
        for x, t in images.items():
            extra = term_vars(t) - set(self.codomain.vars)
            if extra:
                raise UnknownVariable(
                    f"image of {x} uses {', '.join(sorted(extra, key=var_key))} outside {self.codomain}"
                )
        object.__setattr__(self, "images", tuple((x, images[x]) for x in self.domain))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Term | str], codomain: Sort) -> "Substitution":
        imgs = {x: Var(t) if isinstance(t, str) else t for x, t in mapping.items()}
        return cls(Sort(tuple(imgs)), codomain, tuple(imgs.items()))

    def __getitem__(self, name: str) -> Term:
        for x, t in self.images:
            if x == name:
                return t
        raise UnknownVariable(f"variable {name} not in domain {self.domain}")

    def as_dict(self) -> dict[str, Term]:
        return dict(self.images)

    def __str__(self):
        return "(" + " ".join(f"({x} {t})" for x, t in self.images) + ")"


def eval_term(t: Term, p: Point) -> int:
    if isinstance(t, Var):
        return p[t.name]
    return p.algebra.apply(t.op, [eval_term(a, p) for a in t.args])


def apply_subst(s: Substitution, t: Term) -> Term:
    if isinstance(t, Var):
        return s[t.name]
    return App(t.op, tuple(apply_subst(s, a) for a in t.args))


def compose(outer: Substitution, inner: Substitution) -> Substitution:
    """``outer ∘ inner``: first ``inner``, then ``outer``."""
    if inner.codomain != outer.domain:
        raise UnknownVariable(f"cannot compose: {inner.codomain} != {outer.domain}")
    return Substitution(
        inner.domain, outer.codomain, tuple((x, apply_subst(outer, t)) for x, t in inner.images)
    )


def pullback(p: Point, s: Substitution) -> Point:
    """The point ``p ∘ s`` on ``s.domain``."""
    if p.sort != s.codomain:
        raise UnknownVariable(f"point sort {p.sort} is not the codomain {s.codomain}")
    return Point(p.algebra, s.domain, tuple(eval_term(t, p) for _, t in s.images))


# -- automorphisms -----------------------------------------------------------


def _propagate(algebra: FiniteAlgebra, phi: list, inv: list) -> bool:
    """Close a partial bijection under the operations; False on contradiction."""
    m = algebra.size
    changed = True
    while changed:
        changed = False
        dom = [i for i in range(m) if phi[i] is not None]
        for (_, r), table in zip(algebra.signature.ops, algebra.tables):
            for args in product(dom, repeat=r):
                src = dst = 0
                for a in args:
                    src = src * m + a
                    dst = dst * m + phi[a]
                src, dst = table[src], table[dst]
                if phi[src] is None:
                    if inv[dst] is not None:
                        return False
                    phi[src], inv[dst] = dst, src
                    changed = True
                elif phi[src] != dst:
                    return False
    return True


def _search(algebra: FiniteAlgebra, phi: list, inv: list) -> Iterator[tuple[int, ...]]:
    if not _propagate(algebra, phi, inv):
        return
    try:
        i = phi.index(None)
    except ValueError:
        yield tuple(phi)
        return
    for v in range(algebra.size):
        if inv[v] is None:
            phi2, inv2 = list(phi), list(inv)
            phi2[i], inv2[v] = v, i
            yield from _search(algebra, phi2, inv2)


def _seeded(algebra: FiniteAlgebra, a: Sequence[int], b: Sequence[int]):
    m = algebra.size
    phi: list = [None] * m
    inv: list = [None] * m
    for x, y in zip(a, b):
        if phi[x] is None and inv[y] is None:
            phi[x], inv[y] = y, x
        elif phi[x] != y or inv[y] != x:
            return None
    return phi, inv


def automorphisms(algebra: FiniteAlgebra) -> list[tuple[int, ...]]:
    """All automorphisms as image tuples, in lexicographic order."""
    m = algebra.size
    return list(_search(algebra, [None] * m, [None] * m))


def orbit_equivalent(
    algebra: FiniteAlgebra, a: Sequence[int], b: Sequence[int]
) -> tuple[bool, tuple[int, ...] | None]:
    """Decide whether an automorphism sends ``a`` to ``b`` componentwise.

    Returns ``(True, witness)`` with the lexicographically least witness,
    or ``(False, None)``.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of length {len(a)} and {len(b)}")
    seed = _seeded(algebra, a, b)
    if seed is None:
        return False, None
    for phi in _search(algebra, *seed):
        return True, phi
    return False, None

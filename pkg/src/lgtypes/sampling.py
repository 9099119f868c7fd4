"""Seeded random algebras, terms, substitutions and formulas.

Every generator takes an explicit ``random.Random`` so that runs are
reproducible from a single seed.
"""
from __future__ import annotations

import random
from itertools import product
from typing import Sequence

from .algebra import App, FiniteAlgebra, Point, Signature, Sort, Substitution, Term, Var
from .formulas import And, Eq, Exists, MSFormula, Not, Or, Subst

DEFAULT_SEED = 20240601


def random_signature(rng: random.Random, max_ops: int = 3) -> Signature:
    """At least one operation of positive arity, arities at most 2."""
    n = rng.randint(1, max_ops)
    arities = [rng.choice((0, 1, 2)) for _ in range(n)]
    if not any(arities):
        arities[0] = rng.choice((1, 2))
    return Signature(tuple((f"f{i}", r) for i, r in enumerate(arities)))


def random_algebra(rng: random.Random, max_size: int = 5, signature: Signature | None = None) -> FiniteAlgebra:
    m = rng.randint(1, max_size)
    sig = signature or random_signature(rng)
    tables = tuple(tuple(rng.randrange(m) for _ in range(m**r)) for _, r in sig.ops)
    return FiniteAlgebra(f"R{m}", sig, m, tables)


def random_term(rng: random.Random, sort: Sort, signature: Signature, max_depth: int) -> Term:
    leaves = [Var(x) for x in sort] + [App(n) for n, r in signature.ops if r == 0]
    inner = [(n, r) for n, r in signature.ops if r > 0]
    if max_depth == 0 or not inner or rng.random() < 0.4:
        if leaves:
            return rng.choice(leaves)
        if max_depth == 0 or not inner:
            raise ValueError("no terms of depth 0 over an empty sort without constants")
    name, r = rng.choice(inner)
    return App(name, tuple(random_term(rng, sort, signature, max_depth - 1) for _ in range(r)))


def random_point(rng: random.Random, algebra: FiniteAlgebra, sort: Sort) -> Point:
    return Point(algebra, sort, tuple(rng.randrange(algebra.size) for _ in sort))


def random_substitution(
    rng: random.Random, domain: Sort, codomain: Sort, signature: Signature, max_depth: int
) -> Substitution:
    images = tuple((y, random_term(rng, codomain, signature, max_depth)) for y in domain)
    return Substitution(domain, codomain, images)


def random_pool(
    rng: random.Random, sorts: Sequence[Sort], signature: Signature, size: int, max_depth: int
) -> list[Substitution]:
    """``size`` substitutions between randomly chosen sorts of ``sorts``."""
    pairs = list(product(sorts, repeat=2))
    return [random_substitution(rng, *rng.choice(pairs), signature, max_depth) for _ in range(size)]


def random_formula(
    rng: random.Random,
    sort: Sort,
    signature: Signature,
    length: int,
    max_term_depth: int,
    pool: Sequence[Substitution] = (),
) -> MSFormula:
    """A random formula of exactly the given length."""
    if length == 0:
        t = lambda: random_term(rng, sort, signature, max_term_depth)  # noqa: E731
        return Eq(t(), t(), sort)
    kinds = ["not", "and", "or"]
    if len(sort):
        kinds.append("exists")
    usable = [s for s in pool if s.codomain == sort]
    if usable:
        kinds.append("subst")
    kind = rng.choice(kinds)
    if kind == "not":
        return Not(random_formula(rng, sort, signature, length - 1, max_term_depth, pool))
    if kind == "exists":
        return Exists(rng.choice(sort.vars),
                      random_formula(rng, sort, signature, length - 1, max_term_depth, pool))
    if kind == "subst":
        s = rng.choice(usable)
        return Subst(s, random_formula(rng, s.domain, signature, length - 1, max_term_depth, pool))
    n1 = rng.randint(0, length - 1)
    left = random_formula(rng, sort, signature, n1, max_term_depth, pool)
    right = random_formula(rng, sort, signature, length - 1 - n1, max_term_depth, pool)
    return (And if kind == "and" else Or)(left, right)

"""Valuation of multi-sorted formulas in finite algebras.

``val_member`` is the direct recursive reading of the valuation clauses.
``bounded_lker_eq`` compares two points on every formula within length and
term-depth bounds.  Enumerating those formulas one by one is hopeless past
tiny bounds, so it works on meanings instead: the set of satisfying points
(as a bitmask over all points of the sort) determines the meaning of every
compound formula built on top, so only the first formula reaching each
meaning is kept.  ``bounded_lker_eq_by_enumeration`` is the literal
formula-by-formula version, kept as a cross-check.

``ef_equivalent`` plays the Ehrenfeucht–Fraïssé game on the relational
encoding of the algebras (an r-ary operation becomes an (r+1)-ary relation).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .algebra import FiniteAlgebra, Point, Sort, Substitution, Term, Var, points
from .errors import LengthMismatch, SortMismatch, UnknownVariable
from .formulas import (
    And,
    Eq,
    Exists,
    MSFormula,
    Not,
    Or,
    Subst,
    enumerate_formulas,
    enumerate_terms,
)


def _eval(H: FiniteAlgebra, t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnknownVariable(f"variable {t.name} is unassigned") from None
    return H.apply(t.op, [_eval(H, a, env) for a in t.args])


def _holds(H: FiniteAlgebra, u: MSFormula, env: dict[str, int]) -> bool:
    if isinstance(u, Eq):
        return _eval(H, u.lhs, env) == _eval(H, u.rhs, env)
    if isinstance(u, Not):
        return not _holds(H, u.body, env)
    if isinstance(u, And):
        return _holds(H, u.left, env) and _holds(H, u.right, env)
    if isinstance(u, Or):
        return _holds(H, u.left, env) or _holds(H, u.right, env)
    if isinstance(u, Exists):
        saved = env[u.var]
        try:
            for v in H.elements:
                env[u.var] = v
                if _holds(H, u.body, env):
                    return True
            return False
        finally:
            env[u.var] = saved
    if isinstance(u, Subst):
        inner = {x: _eval(H, t, env) for x, t in u.subst.images}
        return _holds(H, u.body, inner)
    raise TypeError(f"not a formula: {u!r}")


def _check_point(H: FiniteAlgebra, u: MSFormula, p: Point) -> None:
    if p.sort != u.sort:
        raise SortMismatch(f"point of sort {p.sort} for formula of sort {u.sort}")
    if p.algebra != H:
        raise SortMismatch(f"point lives in {p.algebra.name}, not {H.name}")


def val_member(H: FiniteAlgebra, u: MSFormula, p: Point) -> bool:
    """Is ``p`` in Val_H(u)?"""
    _check_point(H, u, p)
    return _holds(H, u, p.as_dict())


def lker_member(H: FiniteAlgebra, u: MSFormula, p: Point) -> bool:
    """Is ``u`` in the logical kernel of ``p``?  Same thing as ``val_member``."""
    return val_member(H, u, p)


@dataclass(frozen=True)
class ValResult:
    """Val_H(u), with the satisfying value tuples optionally materialized."""

    algebra: FiniteAlgebra
    formula: MSFormula
    points: frozenset[tuple[int, ...]] | None = None

    def __contains__(self, p: Point) -> bool:
        if self.points is not None:
            _check_point(self.algebra, self.formula, p)
            return p.values in self.points
        return val_member(self.algebra, self.formula, p)

    def materialize(self) -> "ValResult":
        if self.points is not None:
            return self
        return val(self.algebra, self.formula, materialize=True)


def val(H: FiniteAlgebra, u: MSFormula, materialize: bool = False) -> ValResult:
    if not materialize:
        return ValResult(H, u)
    sat = frozenset(p.values for p in points(H, u.sort) if _holds(H, u, p.as_dict()))
    return ValResult(H, u, sat)


# -- bounded LG-type comparison ----------------------------------------------


def _mask(bools: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bools, bitorder="little").tobytes(), "little")


class _SortSpace:
    """All points of one sort across one or more algebras, as bit positions."""

    def __init__(self, algebras: tuple[FiniteAlgebra, ...], sort: Sort):
        self.algebras = algebras
        self.sort = sort
        n = len(sort)
        self.offsets = []
        cols = []
        off = 0
        for H in algebras:
            self.offsets.append(off)
            grid = np.array(list(product(range(H.size), repeat=n)), dtype=np.int64).reshape(-1, n)
            cols.append(grid)
            off += len(grid)
        self.total = off
        self.full = (1 << off) - 1
        self._grids = cols
        self._fibers: dict[str, list[int]] = {}

    def index(self, block: int, values: Sequence[int]) -> int:
        m = self.algebras[block].size
        i = 0
        for v in values:
            i = i * m + v
        return self.offsets[block] + i

    def term_vector(self, t: Term, cache: dict) -> np.ndarray:
        """Values of ``t`` at every point (blocks concatenated)."""
        key = str(t)
        if key in cache:
            return cache[key]
        parts = []
        for H, grid in zip(self.algebras, self._grids):
            parts.append(self._block_values(H, grid, t))
        vec = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        cache[key] = vec
        return vec

    def _block_values(self, H, grid, t):
        if isinstance(t, Var):
            return grid[:, self.sort.index(t.name)]
        table = np.asarray(H.table(t.op), dtype=np.int64)
        idx = np.zeros(len(grid), dtype=np.int64)
        for a in t.args:
            idx = idx * H.size + self._block_values(H, grid, a)
        return table[idx]

    def fibers(self, var: str) -> list[int]:
        """Masks of the point sets that differ only in ``var``."""
        if var not in self._fibers:
            j = self.sort.index(var)
            out: dict[tuple, int] = {}
            for b, grid in enumerate(self._grids):
                for i, row in enumerate(grid.tolist()):
                    key = (b, *row[:j], *row[j + 1:])
                    out[key] = out.get(key, 0) | (1 << (self.offsets[b] + i))
            self._fibers[var] = list(out.values())
        return self._fibers[var]

    def cylinder(self, mask: int, var: str) -> int:
        out = 0
        for fib in self.fibers(var):
            if mask & fib:
                out |= fib
        return out


class _Rep:
    __slots__ = ("text", "mask", "formula", "length")

    def __init__(self, formula, mask, length):
        self.formula = formula
        self.mask = mask
        self.length = length
        self.text = str(formula)


class _MeaningEngine:
    """Level-by-level closure of formula meanings within the bounds.

    ``levels[sort][n]`` lists, sorted by text, the formulas of length n whose
    meaning was not reachable by any shorter formula; each is the
    text-least formula of that length with its meaning.
    """

    def __init__(self, algebras, sort, max_term_depth, pool):
        self.algebras = algebras
        self.signature = algebras[0].signature
        self.max_term_depth = max_term_depth
        sorts = [sort]
        i = 0
        while i < len(sorts):
            for s in pool:
                if s.codomain == sorts[i] and s.domain not in sorts:
                    sorts.append(s.domain)
            i += 1
        self.spaces = {S: _SortSpace(algebras, S) for S in sorts}
        self.pool = {
            S: sorted(
                (s for s in pool if s.codomain == S),
                key=lambda s: f"(subst {s} ",
            )
            for S in sorts
        }
        self.levels: dict[Sort, list[list[_Rep]]] = {S: [] for S in sorts}
        self.seen: dict[Sort, set[int]] = {S: set() for S in sorts}
        self._pullbacks: dict[Substitution, list[int]] = {}

    def ensure(self, S: Sort, n: int) -> None:
        """Build levels 0..n of sort S (and n-1 of the sorts it substitutes from)."""
        levels = self.levels[S]
        while len(levels) <= n:
            k = len(levels)
            if k:
                for s in self.pool[S]:
                    self.ensure(s.domain, k - 1)
            levels.append(self._build(S, k))

    def _offer(self, S, found: dict, formula_fn, mask):
        if mask in self.seen[S] or mask in found:
            return
        found[mask] = formula_fn()

    def _build(self, S: Sort, n: int) -> list[_Rep]:
        space = self.spaces[S]
        found: dict[int, MSFormula] = {}
        if n == 0:
            cache: dict = {}
            best: dict[bytes, tuple[str, Term]] = {}
            for t in enumerate_terms(S, self.signature, self.max_term_depth):
                vec = space.term_vector(t, cache)
                key = vec.tobytes()
                text = str(t)
                if key not in best or text < best[key][0]:
                    best[key] = (text, t)
            classes = sorted(best.values(), key=lambda p: p[0])
            vecs = [space.term_vector(t, cache) for _, t in classes]
            for (_, lhs), v1 in zip(classes, vecs):
                for (_, rhs), v2 in zip(classes, vecs):
                    mask = _mask(v1 == v2)
                    self._offer(S, found, lambda l=lhs, r=rhs: Eq(l, r, S), mask)
        else:
            levels = self.levels[S]
            prev = levels[n - 1]
            shorter = sorted((r for lv in levels for r in lv), key=lambda r: r.text)
            for kind in ("and", "exists", "not", "or", "subst"):
                if kind in ("and", "or"):
                    ctor = And if kind == "and" else Or
                    for r1 in shorter:
                        n2 = n - 1 - r1.length
                        if n2 < 0:
                            continue
                        for r2 in levels[n2]:
                            mask = r1.mask & r2.mask if kind == "and" else r1.mask | r2.mask
                            self._offer(S, found, lambda a=r1.formula, b=r2.formula: ctor(a, b), mask)
                elif kind == "exists":
                    for x in sorted(S.vars, key=lambda x: x + " "):
                        for r in prev:
                            mask = space.cylinder(r.mask, x)
                            self._offer(S, found, lambda x=x, f=r.formula: Exists(x, f), mask)
                elif kind == "not":
                    for r in prev:
                        self._offer(S, found, lambda f=r.formula: Not(f), space.full ^ r.mask)
                else:
                    for s in self.pool[S]:
                        pull = self._pullback(s)
                        for r in self.levels[s.domain][n - 1]:
                            m = r.mask
                            mask = 0
                            for i, j in enumerate(pull):
                                if m >> j & 1:
                                    mask |= 1 << i
                            self._offer(S, found, lambda s=s, f=r.formula: Subst(s, f), mask)
        reps = [_Rep(f, mask, n) for mask, f in found.items()]
        self.seen[S].update(found)
        reps.sort(key=lambda r: r.text)
        return reps

    def _pullback(self, s: Substitution) -> list[int]:
        """For each codomain point index, the index of the pulled-back point."""
        if s not in self._pullbacks:
            cod, dom = self.spaces[s.codomain], self.spaces[s.domain]
            out = [0] * cod.total
            for b, H in enumerate(self.algebras):
                for p in points(H, s.codomain):
                    env = p.as_dict()
                    q = [_eval(H, t, env) for _, t in s.images]
                    out[cod.index(b, p.values)] = dom.index(b, q)
            self._pullbacks[s] = out
        return self._pullbacks[s]


@lru_cache(maxsize=32)
def _engine(algebras, sort, max_term_depth, pool) -> _MeaningEngine:
    return _MeaningEngine(algebras, sort, max_term_depth, pool)


def _check_pair(H1, p1, H2, p2):
    if p1.sort != p2.sort:
        raise SortMismatch(f"points of sorts {p1.sort} and {p2.sort}")
    if p1.algebra != H1 or p2.algebra != H2:
        raise SortMismatch("points do not live in the given algebras")
    if H1.signature != H2.signature:
        raise SortMismatch("algebras have different signatures")


def bounded_lker_eq(
    H1: FiniteAlgebra,
    p1: Point,
    H2: FiniteAlgebra,
    p2: Point,
    max_length: int,
    max_term_depth: int,
    subst_pool: Sequence[Substitution] = (),
) -> tuple[bool, MSFormula | None]:
    """Do ``p1`` and ``p2`` satisfy the same formulas within the bounds?

    On ``False`` the first separating formula in enumeration order is
    returned as well.
    """
    _check_pair(H1, p1, H2, p2)
    if max_length < 0 or max_term_depth < 0:
        raise ValueError("bounds must be non-negative")
    algebras = (H1,) if H1 == H2 else (H1, H2)
    engine = _engine(algebras, p1.sort, max_term_depth, tuple(subst_pool))
    space = engine.spaces[p1.sort]
    i1 = space.index(0, p1.values)
    i2 = space.index(len(algebras) - 1, p2.values)
    for n in range(max_length + 1):
        engine.ensure(p1.sort, n)
        for r in engine.levels[p1.sort][n]:
            if (r.mask >> i1 & 1) != (r.mask >> i2 & 1):
                return False, r.formula
    return True, None


def bounded_lker_eq_by_enumeration(
    H1, p1, H2, p2, max_length, max_term_depth, subst_pool=()
) -> tuple[bool, MSFormula | None]:
    """Reference version of ``bounded_lker_eq``: evaluate every formula."""
    _check_pair(H1, p1, H2, p2)
    for u in enumerate_formulas(p1.sort, H1.signature, max_length, max_term_depth, subst_pool):
        if val_member(H1, u, p1) != val_member(H2, u, p2):
            return False, u
    return True, None


# -- Ehrenfeucht–Fraïssé games -----------------------------------------------


def _is_partial_iso(H1: FiniteAlgebra, H2: FiniteAlgebra, pos: dict[int, int]) -> bool:
    ran = set(pos.values())
    dom = list(pos)
    m1, m2 = H1.size, H2.size
    for (_, r), t1, t2 in zip(H1.signature.ops, H1.tables, H2.tables):
        for args in product(dom, repeat=r):
            i1 = i2 = 0
            for a in args:
                i1 = i1 * m1 + a
                i2 = i2 * m2 + pos[a]
            out1, out2 = t1[i1], t2[i2]
            if out1 in pos:
                if pos[out1] != out2:
                    return False
            elif out2 in ran:
                return False
    return True


def ef_equivalent(
    H1: FiniteAlgebra, a: Sequence[int], H2: FiniteAlgebra, b: Sequence[int], rounds: int
) -> bool:
    """Does Duplicator win the ``rounds``-round game from pebbles ``a``, ``b``?

    Spoiler gains nothing by re-pebbling an element (Duplicator copies the
    matching pebble), and Duplicator must answer a fresh element with a fresh
    one, so positions are partial injections and the search is memoized on
    them.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of length {len(a)} and {len(b)}")
    if H1.signature != H2.signature:
        raise SortMismatch("algebras have different signatures")
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    pos: dict[int, int] = {}
    inv: dict[int, int] = {}
    for x, y in zip(a, b):
        if pos.get(x, y) != y or inv.get(y, x) != x:
            return False
        pos[x], inv[y] = y, x
    if not _is_partial_iso(H1, H2, pos):
        return False
    memo: dict = {}

    def wins(pos: dict[int, int], k: int) -> bool:
        if k == 0:
            return True
        key = (frozenset(pos.items()), k)
        if key in memo:
            return memo[key]
        ran = set(pos.values())
        free1 = [x for x in H1.elements if x not in pos]
        free2 = [y for y in H2.elements if y not in ran]
        result = True
        for x in free1:
            if not any(_extends(pos, x, y) and wins({**pos, x: y}, k - 1) for y in free2):
                result = False
                break
        if result:
            for y in free2:
                if not any(_extends(pos, x, y) and wins({**pos, x: y}, k - 1) for x in free1):
                    result = False
                    break
        memo[key] = result
        return result

    def _extends(pos, x, y):
        return _is_partial_iso(H1, H2, {**pos, x: y})

    return wins(pos, rounds)

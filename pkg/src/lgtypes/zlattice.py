"""Exact integer lattice algebra for free abelian groups Z^n.

Vectors are tuples of Python ints and matrices are ``IntMatrix`` values;
nothing here touches floating point.  Endomorphisms of Z^n act on column
vectors, so a matrix ``σ`` sends ``a`` to ``σ·a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import DimensionMismatch, InternalCheckFailed, NoBackwardEndo, NoForwardEndo, ZeroParameter

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int = -1

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        ncols = self.ncols if self.ncols >= 0 else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, k: int, n: int) -> "IntMatrix":
        return cls(tuple((0,) * n for _ in range(k)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        return cls(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(tuple(self.column(j) for j in range(self.ncols)), len(self.rows))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != len(other.rows):
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = [other.column(j) for j in range(other.ncols)]
            return IntMatrix(
                tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in self.rows),
                other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise DimensionMismatch(f"cannot apply {self.shape} matrix to vector of length {len(vec)}")
        return tuple(sum(x * y for x, y in zip(r, vec)) for r in self.rows)

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        n = len(self.rows)
        if n != self.ncols:
            raise DimensionMismatch(f"determinant of non-square {self.shape} matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return len(self.rows) == self.ncols and abs(self.det()) == 1

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in r) for r in self.rows)


def _as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(tuple(tuple(r) for r in m))


@dataclass(frozen=True)
class SmithForm:
    """``U·M·V = D`` with U, V unimodular and the diagonal a divisibility chain."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix
    invariants: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariants)


def smith_normal_form(M) -> SmithForm:
    """Smith decomposition by integer row and column operations.

    Pivot rule: the nonzero entry of least absolute value in the remaining
    submatrix, ties going to the first in row-major order.
    """
    M = _as_matrix(M)
    k, n = M.shape
    a = [list(r) for r in M.rows]
    U = [list(r) for r in IntMatrix.identity(k).rows]
    V = [list(r) for r in IntMatrix.identity(n).rows]
    Vi = [list(r) for r in IntMatrix.identity(n).rows]

    def row_op(dst, src, q):  # row_dst -= q * row_src
        for j in range(n):
            a[dst][j] -= q * a[src][j]
        for j in range(k):
            U[dst][j] -= q * U[src][j]

    def col_op(dst, src, q):  # col_dst -= q * col_src
        for i in range(k):
            a[i][dst] -= q * a[i][src]
        for i in range(n):
            V[i][dst] -= q * V[i][src]
        for j in range(n):
            Vi[src][j] += q * Vi[dst][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    invariants = []
    for t in range(min(k, n)):
        while True:
            pivot = None
            for i in range(t, k):
                for j in range(t, n):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            for i in range(t + 1, k):
                if a[i][t]:
                    row_op(i, t, a[i][t] // p)
            for j in range(t + 1, n):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
            if any(a[i][t] for i in range(t + 1, k)) or any(a[t][j] for j in range(t + 1, n)):
                continue
            bad = next(
                (i for i in range(t + 1, k) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is not None:
                row_op(t, bad, -1)
                continue
            break
        if pivot is None:
            break
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            U[t] = [-v for v in U[t]]
        invariants.append(a[t][t])
    return SmithForm(
        IntMatrix(tuple(map(tuple, U)), k),
        IntMatrix(tuple(map(tuple, a)), n),
        IntMatrix(tuple(map(tuple, V)), n),
        IntMatrix(tuple(map(tuple, Vi)), n),
        tuple(invariants),
    )


@dataclass(frozen=True)
class StackedBasis:
    """Rows ``g_1..g_n`` of ``basis`` form a basis of Z^n and the vectors
    ``p_i·g_i`` (i up to the rank) form a basis of the given subgroup."""

    basis: IntMatrix
    invariants: tuple[int, ...]
    inverse: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def sub_basis(self) -> list[Vector]:
        return [tuple(p * v for v in self.basis.rows[i]) for i, p in enumerate(self.invariants)]


def _dim(vectors, dim):
    if dim is None:
        if not vectors:
            raise DimensionMismatch("cannot infer the ambient dimension of an empty list")
        dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise DimensionMismatch(f"vectors must all have length {dim}")
    return dim


def stacked_basis(generators: Sequence[Sequence[int]], dim: int | None = None) -> StackedBasis:
    n = _dim(generators, dim)
    if not generators:
        return StackedBasis(IntMatrix.identity(n), (), IntMatrix.identity(n))
    snf = smith_normal_form(IntMatrix(tuple(tuple(g) for g in generators), n))
    # rows of U·A are the rows d_i * (row i of V^-1)
    return StackedBasis(snf.V_inv, snf.invariants, snf.V)


def _solve_rows(A: IntMatrix, c: Sequence[int], snf: SmithForm) -> Vector | None:
    """Canonical integer x with A·x = c: zero on the free Smith coordinates."""
    k, n = A.shape
    uc = snf.U @ tuple(c)
    y = [0] * n
    for i in range(k):
        if i < snf.rank:
            d = snf.invariants[i]
            if uc[i] % d:
                return None
            y[i] = uc[i] // d
        elif uc[i]:
            return None
    return snf.V @ tuple(y)


def solve_endo(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], dim: int | None = None
) -> IntMatrix | None:
    """An integer matrix σ with σ·a_i = b_i for all i, or ``None``.

    The solution is the canonical one from the Smith decomposition of the
    matrix with rows a_i: coordinates not fixed by the equations are 0.
    """
    if len(a) != len(b):
        raise DimensionMismatch(f"{len(a)} source vectors but {len(b)} targets")
    n = _dim([*a, *b], dim)
    if not a:
        return IntMatrix.zeros(n, n)
    At = IntMatrix(tuple(tuple(v) for v in a), n)
    snf = smith_normal_form(At)
    rows = []
    for r in range(n):
        x = _solve_rows(At, [v[r] for v in b], snf)
        if x is None:
            return None
        rows.append(x)
    return IntMatrix(tuple(rows), n)


@dataclass(frozen=True)
class ExtensionCertificate:
    """An automorphism ``phi`` of Z^n with ``phi·a_i = b_i``.

    ``s_block``/``t_block`` are the leading rank×rank blocks of σ and τ
    written in the stacked bases (g -> f and f -> g); their product is the
    identity.
    """

    phi: IntMatrix
    sigma: IntMatrix
    tau: IntMatrix
    source_basis: StackedBasis
    target_basis: StackedBasis
    s_block: IntMatrix
    t_block: IntMatrix

    @property
    def det(self) -> int:
        return self.phi.det()


def abelian_extend(
    a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], dim: int | None = None
) -> ExtensionCertificate:
    """Extend ``a_i -> b_i`` to an automorphism of Z^n.

    Succeeds exactly when the assignment extends to endomorphisms in both
    directions; raises ``NoForwardEndo`` / ``NoBackwardEndo`` otherwise.
    """
    if len(a) != len(b):
        raise DimensionMismatch(f"{len(a)} source vectors but {len(b)} targets")
    n = _dim([*a, *b], dim)
    a = [tuple(v) for v in a]
    b = [tuple(v) for v in b]
    sigma = solve_endo(a, b, n)
    if sigma is None:
        raise NoForwardEndo("no endomorphism sends the a_i to the b_i")
    tau = solve_endo(b, a, n)
    if tau is None:
        raise NoBackwardEndo("no endomorphism sends the b_i back to the a_i")

    src = stacked_basis(a, n)
    dst = stacked_basis(b, n)
    if src.rank != dst.rank:
        raise InternalCheckFailed(f"ranks differ: {src.rank} vs {dst.rank}")
    r = src.rank
    G, F = src.basis, dst.basis
    # coordinates of σ(g_i) in the basis f, and of τ(f_i) in the basis g
    S = dst.inverse.T @ sigma @ G.T
    T = src.inverse.T @ tau @ F.T
    for i in range(r):
        for j in range(r, n):
            if S[j, i] or T[j, i]:
                raise InternalCheckFailed("σ(g_i) leaves the span of f_1..f_k")
    s_block = IntMatrix(tuple(S.rows[j][:r] for j in range(r)), r)
    t_block = IntMatrix(tuple(T.rows[j][:r] for j in range(r)), r)

    cols = [S.column(i) for i in range(r)]
    cols += [tuple(int(j == i) for j in range(n)) for i in range(r, n)]
    block = IntMatrix.from_columns(cols, n)
    phi = F.T @ block @ src.inverse.T
    if abs(phi.det()) != 1:
        raise InternalCheckFailed(f"extension has determinant {phi.det()}")
    for x, y in zip(a, b):
        if phi @ x != y:
            raise InternalCheckFailed(f"extension sends {x} to {phi @ x}, expected {y}")
    return ExtensionCertificate(phi, sigma, tau, src, dst, s_block, t_block)


# -- formula families over Z^m -------------------------------------------------


def _combo(q: Sequence[int], g: Sequence[Sequence[int]]) -> Vector:
    m = len(g[0]) if g else 0
    return tuple(sum(qi * gi[c] for qi, gi in zip(q, g)) for c in range(m))


def _check_family(q, g):
    if len(q) != len(g):
        raise DimensionMismatch(f"{len(q)} coefficients for {len(g)} elements")
    if g:
        _dim(list(g), None)


def eval_u_abelian(q: Sequence[int], g: Sequence[Sequence[int]]) -> bool:
    """``q_1x_1 + ... + q_nx_n ≢ 0`` at the tuple ``g``."""
    _check_family(q, g)
    if not any(q):
        raise ZeroParameter("coefficients must not all be zero")
    return any(_combo(q, g))


def eval_v_abelian(q: Sequence[int], q0: int, g: Sequence[Sequence[int]]) -> bool:
    """``∀y (Σ q_i x_i + q0·y ≡ 0 ⇒ ⋁ y ≡ Σ k_i x_i)`` at ``g`` in Z^m,
    the disjunction over integers with ``|k_i·q0| <= |q_i|``."""
    _check_family(q, g)
    if q0 == 0:
        raise ZeroParameter("q0 must be nonzero")
    c = tuple(-v for v in _combo(q, g))
    if any(v % q0 for v in c):
        return True
    y = tuple(v // q0 for v in c)
    bounds = [abs(qi) // abs(q0) for qi in q]
    return any(_combo(k, g) == y for k in product(*(range(-bd, bd + 1) for bd in bounds)))

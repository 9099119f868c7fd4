import random
from functools import lru_cache
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from lgtypes.errors import DimensionMismatch, NoBackwardEndo, NoForwardEndo, ZeroParameter
from lgtypes.zlattice import (
    IntMatrix,
    abelian_extend,
    eval_u_abelian,
    eval_v_abelian,
    smith_normal_form,
    solve_endo,
    stacked_basis,
)

matrices = st.integers(1, 6).flatmap(
    lambda k: st.integers(1, 6).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-10, 10), min_size=n, max_size=n), min_size=k, max_size=k
        )
    )
)


def sympy_invariants(rows):
    return tuple(abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ) if d)


def _det_divisor(rows, r):
    """gcd of all r×r minors."""
    g = 0
    k, n = len(rows), len(rows[0])
    for I in combinations(range(k), r):
        for J in combinations(range(n), r):
            g = gcd(g, int(Matrix([[rows[i][j] for j in J] for i in I]).det()))
    return g


def integer_solvable(A, c):
    """Is A·x = c solvable over Z?  Equal rank and equal top determinantal divisor."""
    if not A:
        return not any(c)
    r = Matrix(A).rank()
    aug = [list(row) + [ci] for row, ci in zip(A, c)]
    if Matrix(aug).rank() != r:
        return False
    return r == 0 or _det_divisor(A, r) == _det_divisor(aug, r)


# -- IntMatrix ---------------------------------------------------------------------


def test_matrix_basics():
    M = IntMatrix(((1, 2), (3, 4)))
    assert M.det() == -2
    assert (M @ IntMatrix.identity(2)) == M
    assert M @ (1, 1) == (3, 7)
    assert M.T.rows == ((1, 3), (2, 4))
    assert str(M) == "1 2\n3 4"
    with pytest.raises(DimensionMismatch):
        IntMatrix(((1, 2), (3,)))


# -- Smith normal form ---------------------------------------------------------------


def test_snf_examples():
    assert smith_normal_form(IntMatrix.identity(2)).invariants == (1, 1)
    f = smith_normal_form([[2, 4], [6, 8]])
    assert f.D.rows == ((2, 0), (0, 4))
    assert smith_normal_form([[2, 0], [0, 3]]).D.rows == ((1, 0), (0, 6))


def check_snf(rows):
    M = IntMatrix(tuple(map(tuple, rows)))
    f = smith_normal_form(M)
    assert f.U @ M @ f.V == f.D
    assert abs(f.U.det()) == 1 and abs(f.V.det()) == 1
    assert f.V @ f.V_inv == IntMatrix.identity(M.shape[1])
    k, n = M.shape
    for i in range(k):
        for j in range(n):
            if i != j:
                assert f.D[i, j] == 0
    r = len(f.invariants)
    assert all(f.D[i, i] == f.invariants[i] > 0 for i in range(r))
    assert all(f.D[i, i] == 0 for i in range(r, min(k, n)))
    assert all(f.invariants[i + 1] % f.invariants[i] == 0 for i in range(r - 1))
    return f


@settings(max_examples=300)
@given(matrices)
def test_snf_invariants_and_sympy_agreement(rows):
    f = check_snf(rows)
    assert f.invariants == sympy_invariants(rows)


def test_snf_is_deterministic():
    rows = [[3, 5, -7], [0, 4, 2]]
    assert smith_normal_form(rows) == smith_normal_form(rows)


# -- stacked bases ---------------------------------------------------------------------


def _same_lattice(gens1, gens2, n):
    return all(integer_solvable([list(c) for c in zip(*gens1)], v) for v in gens2) and all(
        integer_solvable([list(c) for c in zip(*gens2)], v) for v in gens1
    )


def test_stacked_basis_examples():
    sb = stacked_basis([(1, 0), (0, 1)])
    assert sb.invariants == (1, 1) and sb.basis == IntMatrix.identity(2)
    sb = stacked_basis([(2, 4)])
    assert sb.invariants == (2,)
    assert sb.basis.rows[0] == (1, 2)
    assert sb.sub_basis() == [(2, 4)]
    assert abs(sb.basis.det()) == 1
    assert stacked_basis([(2, 0), (0, 3)]).invariants == (1, 6)


@settings(max_examples=150)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=1, max_size=4)
))
def test_stacked_basis_spans_the_subgroup(gens):
    n = len(gens[0])
    sb = stacked_basis(gens)
    assert abs(sb.basis.det()) == 1
    assert sb.basis @ sb.inverse == IntMatrix.identity(n)
    assert all(sb.invariants[i + 1] % sb.invariants[i] == 0 for i in range(sb.rank - 1))
    sub = sb.sub_basis()
    if sub:
        assert _same_lattice([tuple(g) for g in gens], sub, n)
    else:
        assert not any(map(any, gens))


# -- solve_endo ----------------------------------------------------------------------------


def test_solve_endo_examples():
    assert solve_endo([(2,)], [(4,)]).rows == ((2,),)
    assert solve_endo([(2,)], [(3,)]) is None
    s = solve_endo([(2, 0)], [(0, 2)])
    assert s.column(0) == (0, 1)
    assert s.rows == ((0, 0), (1, 0))
    with pytest.raises(DimensionMismatch):
        solve_endo([(1, 0)], [])


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(lambda n: st.integers(0, 3).flatmap(
    lambda k: st.tuples(
        st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=k, max_size=k),
        st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=k, max_size=k),
        st.just(n),
    ))))
def test_solve_endo_matches_solvability_oracle(case):
    a, b, n = case
    sigma = solve_endo(a, b, n)
    expected = all(integer_solvable(a, [v[r] for v in b]) for r in range(n))
    assert (sigma is not None) == expected
    if sigma is not None:
        assert all(sigma @ tuple(x) == tuple(y) for x, y in zip(a, b))


# -- abelian extension -----------------------------------------------------------------------


def random_unimodular(rng, n, steps=6):
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-2, 2)
        rows[i] = [x + q * y for x, y in zip(rows[i], rows[j])]
    if rng.random() < 0.5:
        rows[0] = [-x for x in rows[0]]
    return IntMatrix(tuple(map(tuple, rows)))


def random_extension_case(rng):
    n, k = rng.randint(1, 4), rng.randint(0, 3)
    a = [tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(k)]
    mode = rng.randrange(3)
    if mode == 0:
        b = [tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(k)]
    else:
        M = random_unimodular(rng, n) if mode == 1 else IntMatrix(
            tuple(tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n))
        )
        b = [M @ v for v in a]
    return n, a, b


def check_certificate(cert, a, b):
    n = cert.phi.shape[0]
    assert abs(cert.det) == 1
    assert all(cert.phi @ x == y for x, y in zip(a, b))
    r = cert.s_block.shape[0] if cert.s_block.rows else 0
    ident = IntMatrix.identity(r)
    if r:
        assert cert.s_block @ cert.t_block == ident
        assert cert.t_block @ cert.s_block == ident
    assert cert.phi.shape == (n, n)


def test_abelian_extend_examples():
    a = [(3, 1, 4), (1, 5, 9)]
    cert = abelian_extend(a, a)
    check_certificate(cert, a, a)
    cert = abelian_extend([(2, 0)], [(0, 2)])
    assert cert.phi.rows == ((0, 1), (1, 0)) and cert.det == -1
    with pytest.raises(NoBackwardEndo):
        abelian_extend([(2,)], [(4,)])
    with pytest.raises(NoForwardEndo):
        abelian_extend([(4,)], [(2,)])
    cert = abelian_extend([], [], 3)
    assert abs(cert.det) == 1


def test_abelian_extend_with_dependent_generators():
    a = [(2, 0), (4, 0), (0, 3)]
    M = IntMatrix(((1, 1), (0, 1)))
    b = [M @ v for v in a]
    check_certificate(abelian_extend(a, b), a, b)


def test_abelian_extend_iff_both_endos(seed):
    rng = random.Random(seed)
    for _ in range(200):
        n, a, b = random_extension_case(rng)
        both = solve_endo(a, b, n) is not None and solve_endo(b, a, n) is not None
        try:
            cert = abelian_extend(a, b, n)
        except (NoForwardEndo, NoBackwardEndo):
            assert not both
        else:
            assert both
            check_certificate(cert, a, b)


@lru_cache(maxsize=None)
def unimodular_2x2(bound=6):
    rng = range(-bound, bound + 1)
    return [((p, q), (r, s)) for p, q, r, s in product(rng, repeat=4) if abs(p * s - q * r) == 1]


def test_abelian_extend_agrees_with_brute_force_on_the_plane():
    unis = [IntMatrix(m) for m in unimodular_2x2()]
    vecs = list(product(range(-2, 3), repeat=2))
    for x, y in product(vecs, repeat=2):
        found = any(U @ x == y for U in unis)
        try:
            cert = abelian_extend([x], [y], 2)
        except (NoForwardEndo, NoBackwardEndo):
            assert not found
        else:
            check_certificate(cert, [x], [y])
            assert found


# -- formula families over Z^m ---------------------------------------------------------------


def test_eval_u_examples():
    assert eval_u_abelian((1, 1), ((1, 0), (0, 1)))
    assert not eval_u_abelian((1, -1), ((1, 0), (1, 0)))
    assert eval_u_abelian((2,), ((3,),))
    with pytest.raises(ZeroParameter):
        eval_u_abelian((0, 0), ((1, 0), (0, 1)))


def test_eval_v_examples():
    assert not eval_v_abelian((1,), 2, ((2,),))
    assert eval_v_abelian((3,), 2, ((1,),))
    with pytest.raises(ZeroParameter):
        eval_v_abelian((1,), 0, ((1,),))


def brute_v(q, q0, g):
    """Search y directly: it is pinned down by q0·y = −Σ q_i g_i."""
    m = len(g[0])
    c = [-sum(qi * gi[j] for qi, gi in zip(q, g)) for j in range(m)]
    ys = [tuple(y) for y in product(range(-60, 61), repeat=m) if all(q0 * y[j] == c[j] for j in range(m))]
    ks = [k for k in product(range(-5, 6), repeat=len(q)) if all(abs(ki * q0) <= abs(qi) for ki, qi in zip(k, q))]
    return all(any(tuple(sum(ki * gi[j] for ki, gi in zip(k, g)) for j in range(m)) == y for k in ks) for y in ys)


@given(
    st.lists(st.integers(-5, 5), min_size=1, max_size=2),
    st.integers(-5, 5).filter(bool),
    st.data(),
)
def test_eval_v_matches_brute_force(q, q0, data):
    g = data.draw(st.lists(st.tuples(st.integers(-3, 3)), min_size=len(q), max_size=len(q)))
    assert eval_v_abelian(q, q0, g) == brute_v(q, q0, g)

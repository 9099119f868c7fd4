"""Acceptance suite.

Each test prints one line, ``criterion N: PASS`` or ``criterion N: FAIL``,
with the workload size and the tolerance it was judged by.  Every check is
exact (tolerance 0): every value is compared for equality.
Each criterion must also finish inside its time budget.

    pytest tests/test_acceptance.py -v
"""
import random
import time
from contextlib import contextmanager
from itertools import product

from conftest import corpus
from lgtypes.algebra import Point, Sort, Substitution, orbit_equivalent, points, pullback, small_groups
from lgtypes.errors import ExtensionError, LengthMismatch, NoBackwardEndo, NoForwardEndo
from lgtypes.formulas import And, Not, Or, Subst
from lgtypes.freeword import IDENTITY, semigroup_extend, verify_f2_counterexample
from lgtypes.sampling import random_algebra, random_formula, random_point, random_pool, random_substitution
from lgtypes.semantics import bounded_lker_eq, ef_equivalent, val, val_member
from lgtypes.translate import fo_sat, translate
from lgtypes.zlattice import (
    IntMatrix,
    abelian_extend,
    eval_u_abelian,
    eval_v_abelian,
    smith_normal_form,
    solve_endo,
)
from test_freeword import brute_extend, random_sg_instance
from test_zlattice import check_certificate, random_extension_case, random_unimodular, unimodular_2x2

TOLERANCE = 0  # exact agreement everywhere
TIME_BUDGET = 60.0  # seconds per criterion

X1 = Sort.of("x1")
X12 = Sort.of("x1", "x2")
X123 = Sort.of("x1", "x2", "x3")


class Outcome:
    def __init__(self):
        self.failures: list[str] = []
        self.detail = ""

    def check(self, ok: bool, what: str) -> None:
        if not ok and len(self.failures) < 5:
            self.failures.append(what)
        elif not ok:
            self.failures.append("...")


@contextmanager
def criterion(number: int, title: str, capsys):
    out = Outcome()
    start = time.perf_counter()
    try:
        yield out
    except Exception as e:  # a crash is a failure of the criterion, reported like any other
        out.failures.append(f"{type(e).__name__}: {e}")
    elapsed = time.perf_counter() - start
    out.check(elapsed < TIME_BUDGET, f"took {elapsed:.1f}s, budget {TIME_BUDGET:.0f}s")
    verdict = "PASS" if not out.failures else "FAIL"
    line = f"criterion {number}: {verdict}  {title}; {out.detail}; tolerance {TOLERANCE}; {elapsed:.1f}s"
    if out.failures:
        line += "\n    " + "\n    ".join(dict.fromkeys(out.failures))
    with capsys.disabled():
        print("\n" + line)
    assert not out.failures, line


# -- 1 ----------------------------------------------------------------------------------------


def test_criterion_1_translation_soundness(seed, capsys):
    rng = random.Random(seed + 1)
    with criterion(1, "val_member agrees with fo_sat of the translation", capsys) as out:
        triples = checks = 0
        for _ in range(1000):
            H = random_algebra(rng, max_size=5)
            sorts = [X1, X12, X123]
            pool = random_pool(rng, sorts, H.signature, rng.randint(0, 3), 3)
            sort = rng.choice(sorts)
            u = random_formula(rng, sort, H.signature, rng.randint(0, 4), 3, pool)
            f = translate(u)
            pts = list(points(H, sort))
            if len(pts) > 27:
                pts = [random_point(rng, H, sort) for _ in range(8)]
            for p in pts:
                out.check(val_member(H, u, p) == fo_sat(H, f, p.as_dict()), f"{u} at {p.values} in {H.name}")
                checks += 1
            triples += 1
        out.detail = f"{triples} triples, {checks} point checks"


# -- 2 ----------------------------------------------------------------------------------------


def test_criterion_2_boolean_laws(seed, capsys):
    rng = random.Random(seed + 2)
    algebras = [H for H in corpus() if H.size <= 5]
    with criterion(2, "Boolean laws of val by exhaustive points", capsys) as out:
        pairs = 0
        for H in algebras:
            for _ in range(25):
                sort = rng.choice([X1, X12, X123])
                pool = random_pool(rng, [X1, X12, X123], H.signature, 2, 2)
                u = random_formula(rng, sort, H.signature, rng.randint(0, 3), 2, pool)
                v = random_formula(rng, sort, H.signature, rng.randint(0, 3), 2, pool)
                every = [p for p in points(H, sort)]
                U = {p.values for p in every if val_member(H, u, p)}
                V = {p.values for p in every if val_member(H, v, p)}
                allv = {p.values for p in every}
                out.check(val(H, Not(u), materialize=True).points == allv - U, f"not {u} in {H.name}")
                out.check(val(H, And(u, v), materialize=True).points == U & V, f"and in {H.name}")
                out.check(val(H, Or(u, v), materialize=True).points == U | V, f"or in {H.name}")
                pairs += 1
        out.detail = f"{len(algebras)} corpus algebras, {pairs} formula pairs"


# -- 3 ----------------------------------------------------------------------------------------


def test_criterion_3_substitution_adjunction(seed, capsys):
    rng = random.Random(seed + 3)
    with criterion(3, "val of Subst(s, v) at p equals val of v at the pullback", capsys) as out:
        cases = checks = 0
        for _ in range(500):
            H = random_algebra(rng, max_size=5)
            sort = rng.choice([X1, X12, X123])
            pool = random_pool(rng, [X1, X12, X123], H.signature, rng.randint(0, 3), 2)
            v = random_formula(rng, sort, H.signature, rng.randint(0, 3), 2, pool)
            s = random_substitution(rng, sort, rng.choice([X1, X12, X123]), H.signature, 3)
            for _ in range(4):
                p = random_point(rng, H, s.codomain)
                out.check(val_member(H, Subst(s, v), p) == val_member(H, v, pullback(p, s)), f"{s} {v}")
                checks += 1
            cases += 1
        out.detail = f"{cases} cases, {checks} point checks"


# -- 4 ----------------------------------------------------------------------------------------

# One substitution per sort keeps the bound-(3,2) search fast enough to sweep every pair.
POOLS = {
    1: (Substitution.from_mapping({"x1": "x1", "x2": "x1"}, X1),),
    2: (Substitution.from_mapping({"x1": "x2", "x2": "x1"}, X12),),
}


def test_criterion_4_finite_type_oracles(capsys):
    groups = small_groups(6)
    with criterion(4, "orbit oracle agrees with bounded kernel and EF game on groups of order <= 6", capsys) as out:
        same = diff = 0
        for H in groups:
            for n, sort in ((1, X1), (2, X12)):
                tuples = list(product(H.elements, repeat=n))
                for a, b in product(tuples, repeat=2):
                    orbit, _ = orbit_equivalent(H, a, b)
                    if orbit:
                        eq, sep = bounded_lker_eq(H, Point(H, sort, a), H, Point(H, sort, b), 3, 2, POOLS[n])
                        out.check(eq, f"{H.name} {a} {b}: separated by {sep}")
                        out.check(all(ef_equivalent(H, a, H, b, k) for k in range(5)), f"{H.name} {a} {b}: EF")
                        same += 1
                    else:
                        out.check(not ef_equivalent(H, a, H, b, H.size), f"{H.name} {a} {b}: EF |H|")
                        diff += 1
        names = ",".join(H.name for H in groups)
        out.detail = f"groups {names}; {same} orbit pairs, {diff} non-orbit pairs; bounds (3,2), rounds 0..4 and |H|"


# -- 5 ----------------------------------------------------------------------------------------


def test_criterion_5_smith_normal_form(seed, capsys):
    rng = random.Random(seed + 5)
    with criterion(5, "U M V = D, unimodular U and V, divisibility chain", capsys) as out:
        for _ in range(1000):
            k, n = rng.randint(1, 6), rng.randint(1, 6)
            M = IntMatrix(tuple(tuple(rng.randint(-10, 10) for _ in range(n)) for _ in range(k)))
            f = smith_normal_form(M)
            out.check(f.U @ M @ f.V == f.D, f"UMV != D for {M.rows}")
            out.check(abs(f.U.det()) == 1 and abs(f.V.det()) == 1, f"not unimodular for {M.rows}")
            diag = [f.D[i, i] for i in range(min(k, n))]
            off = [f.D[i, j] for i in range(k) for j in range(n) if i != j]
            r = len(f.invariants)
            out.check(not any(off), f"D not diagonal for {M.rows}")
            out.check(tuple(diag[:r]) == f.invariants and all(d > 0 for d in diag[:r]), f"diag {M.rows}")
            out.check(not any(diag[r:]), f"zero tail {M.rows}")
            out.check(all(diag[i + 1] % diag[i] == 0 for i in range(r - 1)), f"chain {M.rows}")
        out.detail = "1000 matrices, dims <= 6, entries |.| <= 10"


# -- 6 ----------------------------------------------------------------------------------------


def test_criterion_6_abelian_extension(seed, capsys):
    rng = random.Random(seed + 6)
    with criterion(6, "abelian_extend iff both endomorphisms exist, certificates replayed", capsys) as out:
        ok = refused = 0
        for _ in range(500):
            n, a, b = random_extension_case(rng)
            both = solve_endo(a, b, n) is not None and solve_endo(b, a, n) is not None
            try:
                cert = abelian_extend(a, b, n)
            except (NoForwardEndo, NoBackwardEndo):
                out.check(not both, f"refused {a} -> {b}")
                refused += 1
            else:
                out.check(both, f"extended {a} -> {b} without both endomorphisms")
                try:
                    check_certificate(cert, a, b)
                except AssertionError:
                    out.check(False, f"bad certificate for {a} -> {b}")
                ok += 1
        unis = [IntMatrix(m) for m in unimodular_2x2()]
        vecs = list(product(range(-2, 3), repeat=2))
        for x, y in product(vecs, repeat=2):
            found = any(U @ x == y for U in unis)
            try:
                abelian_extend([x], [y], 2)
            except (NoForwardEndo, NoBackwardEndo):
                out.check(not found, f"plane {x} -> {y} refused")
            else:
                out.check(found, f"plane {x} -> {y} extended")
        out.detail = f"500 instances ({ok} extended, {refused} refused), {len(vecs) ** 2} plane pairs vs brute force"


# -- 7 ----------------------------------------------------------------------------------------


def test_criterion_7_semigroup_extension(seed, capsys):
    rng = random.Random(seed + 7)
    with criterion(7, "semigroup_extend matches the k! bijection search", capsys) as out:
        found = 0
        for _ in range(500):
            k, a, b = random_sg_instance(rng)
            expected = brute_extend(k, a, b)
            try:
                got = semigroup_extend(k, a, b)
            except (ExtensionError, LengthMismatch):
                got = None
            out.check(got == expected, f"k={k} {a} -> {b}: {got} vs {expected}")
            found += expected is not None
        out.detail = f"500 instances, k <= 5, {found} extendable"


# -- 8 ----------------------------------------------------------------------------------------


def test_criterion_8_f2_certificate(capsys):
    with criterion(8, "free group certificate replay", capsys) as out:
        rep = verify_f2_counterexample(strict=False)
        text = rep.render()
        for c in rep.checks:
            out.check(c.passed, f"{c.name}: {c.detail}")
        for needle in (
            "PASS  sigma(a) = b",
            "PASS  tau(b) = a",
            "PASS  abelianize(a) = (1, 2)",
            "PASS  l1 + 2 m1 = l2 + 2 m2 = 1",
            "PASS  gamma(x1 x2) = (312)",
            "PASS  gamma(x2 x1) = (231)",
            "PASS  gamma(x1 x2 x1) = (321)",
            "contradiction cases: 6/6",
            "overall: PASS",
        ):
            out.check(needle in text, f"missing: {needle}")
        out.check(len(rep.cases) == 6 and all(R == IDENTITY for *_, R in rep.cases), "cases")
        out.detail = f"{len(rep.checks)} checks, {len(rep.cases)} cases"


# -- 9 ----------------------------------------------------------------------------------------


def _bases(rng):
    yield ((1,),)
    yield ((-1,),)
    for m in unimodular_2x2(2):
        yield m
    seen = set()
    while len(seen) < 8:
        M = random_unimodular(rng, 3, steps=8)
        if M.rows not in seen:
            seen.add(M.rows)
            yield M.rows


def test_criterion_9_formula_families(seed, capsys):
    rng = random.Random(seed + 9)
    with criterion(9, "basis tuples of Z^n satisfy both families for every parameter", capsys) as out:
        counts = {1: 0, 2: 0, 3: 0}
        evals = 0
        for g in _bases(rng):
            n = len(g)
            counts[n] += 1
            for q in product(range(-5, 6), repeat=n):
                if any(q):
                    out.check(eval_u_abelian(q, g), f"u fails: q={q} g={g}")
                for q0 in range(-5, 6):
                    if q0:
                        out.check(eval_v_abelian(q, q0, g), f"v fails: q={q} q0={q0} g={g}")
                        evals += 1
        out.check(not eval_v_abelian((1,), 2, ((2,),)), "g=(2) satisfies v with q=(1), q0=2")
        out.detail = f"bases by dimension {counts}, {evals} v-evaluations, g=(2) rejected"

"""Free semigroup letter alignment and the rank-2 free group certificate.

Semigroup words are tuples of letters ``1..k`` (``x1..xk``).  Free group
words are tuples of nonzero ints: ``i`` is ``x_i`` and ``-i`` its inverse.
Permutations of {1, 2, 3} are one-line tuples, and products are read left
to right: ``perm_mul(p, q)`` applies ``p`` first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import CheckFailed, ConflictingAlignment, LengthMismatch, NotInjective

SgWord = tuple[int, ...]
FWord = tuple[int, ...]
Perm3 = tuple[int, int, int]


# -- free semigroups -----------------------------------------------------------


def _check_sg(word: Sequence[int], k: int) -> SgWord:
    w = tuple(word)
    if not w:
        raise ValueError("semigroup words are non-empty")
    bad = [x for x in w if not 1 <= x <= k]
    if bad:
        raise ValueError(f"letters {bad} outside x1..x{k}")
    return w


def semigroup_extend(k: int, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """A letter permutation sending each ``a[i]`` to ``b[i]``.

    Returns ``perm`` with ``perm[j-1]`` the image of ``x_j``.  Letters that
    occur in ``a`` are forced position by position; the remaining letters
    are matched to the unused targets in increasing order.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} source words but {len(b)} targets")
    a = [_check_sg(w, k) for w in a]
    b = [_check_sg(w, k) for w in b]
    for u, v in zip(a, b):
        if len(u) != len(v):
            raise LengthMismatch(f"word lengths differ: {len(u)} vs {len(v)}")
    forced: dict[int, int] = {}
    for u, v in zip(a, b):
        for x, y in zip(u, v):
            if forced.setdefault(x, y) != y:
                raise ConflictingAlignment(f"x{x} must go to both x{forced[x]} and x{y}")
    targets: dict[int, int] = {}
    for x, y in forced.items():
        if targets.setdefault(y, x) != x:
            raise NotInjective(f"x{targets[y]} and x{x} both go to x{y}")
    free_src = [x for x in range(1, k + 1) if x not in forced]
    free_dst = [y for y in range(1, k + 1) if y not in targets]
    forced.update(zip(free_src, free_dst))
    return tuple(forced[x] for x in range(1, k + 1))


def apply_letter_map(perm: Sequence[int], w: Sequence[int]) -> SgWord:
    return tuple(perm[x - 1] for x in w)


# -- free groups -------------------------------------------------------------


def freduce(w: Sequence[int]) -> FWord:
    out: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def finverse(w: Sequence[int]) -> FWord:
    return tuple(-x for x in reversed(w))


def apply_f2_endo(images: Sequence[Sequence[int]], w: Sequence[int]) -> FWord:
    """Image of ``w`` under the endomorphism ``x_i -> images[i-1]``."""
    out: list[int] = []
    for x in w:
        img = tuple(images[abs(x) - 1])
        out.extend(img if x > 0 else finverse(img))
    return freduce(out)


def abelianize(w: Sequence[int], rank: int = 2) -> tuple[int, ...]:
    """Exponent sums of ``x_1..x_rank``."""
    sums = [0] * rank
    for x in w:
        sums[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(sums)


def reduced_words(max_len: int, rank: int = 2) -> list[FWord]:
    """All freely reduced words up to ``max_len``, shortest first."""
    letters = [i for r in range(1, rank + 1) for i in (r, -r)]
    out: list[FWord] = [()]
    frontier: list[FWord] = [()]
    for _ in range(max_len):
        frontier = [w + (x,) for w in frontier for x in letters if not w or w[-1] != -x]
        out.extend(frontier)
    return out


def word_str(w: Sequence[int]) -> str:
    """``x1 x1 x2 X1 x2`` style; capital letters are inverses."""
    if not w:
        return "1"
    return " ".join(f"x{x}" if x > 0 else f"X{-x}" for x in w)


# -- S3 ----------------------------------------------------------------------

IDENTITY: Perm3 = (1, 2, 3)
S3: tuple[Perm3, ...] = tuple(
    p for p in product((1, 2, 3), repeat=3) if len(set(p)) == 3
)
GAMMA: dict[int, Perm3] = {1: (2, 1, 3), 2: (1, 3, 2)}


def perm_mul(p: Perm3, q: Perm3) -> Perm3:
    """``p`` then ``q``."""
    return tuple(q[p[i] - 1] for i in range(3))


def perm_inv(p: Perm3) -> Perm3:
    out = [0, 0, 0]
    for i, v in enumerate(p):
        out[v - 1] = i + 1
    return tuple(out)


def perm_sign(p: Perm3) -> int:
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
    return -1 if inversions % 2 else 1


def perm_str(p: Perm3) -> str:
    return "(" + "".join(map(str, p)) + ")"


def perm_word(perms: Sequence[Perm3]) -> Perm3:
    out = IDENTITY
    for p in perms:
        out = perm_mul(out, p)
    return out


def generated(perms: Sequence[Perm3]) -> frozenset[Perm3]:
    group = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        g = frontier.pop()
        for p in perms:
            h = perm_mul(g, p)
            if h not in group:
                group.add(h)
                frontier.append(h)
    return frozenset(group)


def s3_image(w: Sequence[int]) -> Perm3:
    """Image under x1 -> (213), x2 -> (132)."""
    return perm_word([GAMMA[x] if x > 0 else perm_inv(GAMMA[-x]) for x in w])


# -- the counterexample certificate ------------------------------------------

A_WORD: FWord = (1, 1, 2, -1, 2)
B_WORD: FWord = (1, 2)
SIGMA: tuple[FWord, FWord] = ((1, 2), ())
TAU: tuple[FWord, FWord] = ((1, 1, 2), (-1, 2))


def relation_image(P: Perm3, Q: Perm3) -> Perm3:
    """Image of ``w1^2 w2 w1^-1 w2`` when ``w1 -> P`` and ``w2 -> Q``."""
    return perm_word([P, P, Q, perm_inv(P), Q])


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class F2Report:
    checks: list[Check] = field(default_factory=list)
    cases: list[tuple[Perm3, Perm3, Perm3]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def render(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f": {c.detail}" if c.detail else "")
                 for c in self.checks]
        lines.append("cases (gamma(w1), gamma(w2)) -> gamma(w1^2 w2 w1^-1 w2):")
        for P, Q, R in self.cases:
            lines.append(f"  {perm_str(P)} {perm_str(Q)} -> {perm_str(R)}")
        n_bad = sum(1 for *_, R in self.cases if R != s3_image(B_WORD))
        lines.append(f"contradiction cases: {n_bad}/{len(self.cases)}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def verify_f2_counterexample(strict: bool = True) -> F2Report:
    """Replay the certificate that no automorphism of F2 sends
    ``a = x1^2 x2 x1^-1 x2`` to ``b = x1 x2`` although endomorphisms
    exist in both directions.

    With ``strict`` a failed check raises ``CheckFailed``.
    """
    rep = F2Report()
    a, b = A_WORD, B_WORD

    # (i) endomorphisms in both directions
    sa, tb = apply_f2_endo(SIGMA, a), apply_f2_endo(TAU, b)
    rep.add("sigma(a) = b", sa == b, word_str(sa))
    rep.add("tau(b) = a", tb == a, word_str(tb))

    # (ii) exponent sums: phi(a) has x_j-sum l_j + 2 m_j, which must equal b's
    coeff = abelianize(a)
    rep.add("abelianize(a) = (1, 2)", coeff == (1, 2), str(coeff))
    target = abelianize(b)
    rep.add("abelianize(b) = (1, 1)", target == (1, 1), str(target))
    sample = reduced_words(3)
    linear = all(
        abelianize(apply_f2_endo((w1, w2), a))
        == tuple(coeff[0] * l + coeff[1] * m for l, m in zip(abelianize(w1), abelianize(w2)))
        for w1, w2 in product(sample, repeat=2)
    )
    rep.add("exponent sums of phi(a) are l_j + 2 m_j", linear,
            f"checked on {len(sample) ** 2} image pairs of length <= 3")
    odd = coeff[1] % 2 == 0 and coeff[0] % 2 == 1 and all(t % 2 == 1 for t in target)
    rep.add("l1 + 2 m1 = l2 + 2 m2 = 1 forces l1, l2 odd", odd)

    # (iii) S3 values and the narrowing of (gamma(w1), gamma(w2))
    table = [
        ((1, 1), IDENTITY), ((2, 2), IDENTITY), ((1, 2), (3, 1, 2)), ((2, 1), (2, 3, 1)),
        ((1, 2, 1), (3, 2, 1)), ((2, 1, 2), (3, 2, 1)),
        ((1, 2, 1, 2), s3_image((2, 1))), ((2, 1, 2, 1), s3_image((1, 2))),
    ]
    for w, want in table:
        got = s3_image(w)
        rep.add(f"gamma({word_str(w)}) = {perm_str(want)}", got == want, perm_str(got))
    rep.add("gamma is onto S3", generated([GAMMA[1], GAMMA[2]]) == frozenset(S3))

    gb = s3_image(b)
    rep.add("sign of the relation image equals sign of gamma(w1)",
            all(perm_sign(relation_image(P, Q)) == perm_sign(P) for P, Q in product(S3, S3)))
    even = [P for P in S3 if perm_sign(P) == perm_sign(gb)]
    pairs = [(P, Q) for P in even for Q in S3 if generated([P, Q]) == frozenset(S3)]
    w1_options = sorted({P for P, _ in pairs})
    w2_options = sorted({Q for _, Q in pairs})
    rep.add("sign and generation leave gamma(w1) in {gamma(x1x2), gamma(x2x1)}",
            w1_options == sorted({s3_image((1, 2)), s3_image((2, 1))}),
            " ".join(map(perm_str, w1_options)))
    rep.add("generation leaves gamma(w2) in {gamma(x1), gamma(x2), gamma(x1x2x1)}",
            w2_options == sorted({s3_image((1,)), s3_image((2,)), s3_image((1, 2, 1))}),
            " ".join(map(perm_str, w2_options)))

    # (iv) every surviving case gives the identity, never gamma(b)
    for P, Q in pairs:
        rep.cases.append((P, Q, relation_image(P, Q)))
    rep.add("6 cases remain", len(rep.cases) == 6, str(len(rep.cases)))
    rep.add("every case gives (123) != gamma(b) = (312)",
            all(R == IDENTITY for *_, R in rep.cases) and gb == (3, 1, 2))
    rep.add("no generating pair of S3 at all satisfies the relation",
            not any(relation_image(P, Q) == gb for P, Q in product(S3, S3)
                    if generated([P, Q]) == frozenset(S3)))

    if strict and not rep.passed:
        failed = ", ".join(c.name for c in rep.checks if not c.passed)
        raise CheckFailed(f"certificate check failed: {failed}")
    return rep

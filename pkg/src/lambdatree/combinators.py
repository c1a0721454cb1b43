"""Free products of groups with affine length functions.

Factors are length functions over one ordered group. An element of the free
product is a tuple of syllables ``(factor, element)`` in alternating
factors, and its length is the twisted syllable sum

    L(g_1 ... g_n) = sum_k alpha_{g_1 ... g_{k-1}} L(g_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import affine
from .lyndon import (
    ActionLength,
    BaseChangedLength,
    LengthFunction,
    LyndonError,
    b_elem,
    base_change,
    c_elem,
)
from .oag import Elem, Half, IntLex, LexPair, LinearHom, Triangular, compose_aut, identity_aut, zero
from .words import EMPTY, FpWord, Word, concat, cyclic_reduce, enumerate_ball, fmt, fp_format, invert, letter, reduce


class FreeProductError(LyndonError):
    """Incompatible factors or malformed free-product word."""


class FreeProductLength(LengthFunction):
    """The free product of ``factors`` (numbered from 1) with its twisted
    syllable-sum length function."""

    provenance = "free-product"

    def __init__(self, factors: Sequence[LengthFunction]):
        factors = list(factors)
        if not factors:
            raise FreeProductError("a free product needs at least one factor")
        desc = factors[0].desc
        owner: dict[str, int] = {}
        for i, F in enumerate(factors, start=1):
            if F.desc != desc:
                raise FreeProductError(f"factor {i} lives over {F.desc}, expected {desc}; base-change it first")
            for s in F.alphabet:
                if s in owner:
                    raise FreeProductError(f"generator {s} appears in factors {owner[s]} and {i}")
                owner[s] = i
        super().__init__(desc, [s for F in factors for s in F.alphabet])
        self.factors = factors
        self.owner = owner
        self._ids = [F.identity() for F in factors]
        self._alpha: dict = {}
        self._length: dict = {}

    def factor(self, i: int) -> LengthFunction:
        return self.factors[i - 1]

    # group structure on syllable tuples
    def letter_elem(self, sym, e):
        i = self.owner[sym]
        return ((i, self.factor(i).letter_elem(sym, e)),)

    def identity(self):
        return ()

    def mul(self, x, y):
        out = list(x)
        for i, a in y:
            if out and out[-1][0] == i:
                j, b = out.pop()
                a = self.factor(i).mul(b, a)
                if a == self._ids[i - 1]:
                    continue
            out.append((i, a))
        return tuple(out)

    def inv(self, x):
        return tuple((i, self.factor(i).inv(a)) for i, a in reversed(x))

    def alpha_elem(self, x):
        hit = self._alpha.get(x)
        if hit is None:
            if not x:
                hit = identity_aut(self.desc)
            else:
                i, a = x[-1]
                hit = compose_aut(self.alpha_elem(x[:-1]), self.factor(i).alpha_elem(a))
            self._alpha[x] = hit
        return hit

    def length_elem(self, x) -> Elem:
        # L(g_1 .. g_n) = L(g_1 .. g_{n-1}) + alpha_{g_1 .. g_{n-1}} L(g_n)
        hit = self._length.get(x)
        if hit is None:
            if not x:
                hit = zero(self.desc)
            else:
                i, a = x[-1]
                head = x[:-1]
                hit = self.length_elem(head) + self.alpha_elem(head)(self.factor(i).length_elem(a))
            self._length[x] = hit
        return hit

    # free-product words
    def trivial(self, i: int, w: Word) -> bool:
        F = self.factor(i)
        return F.element(w) == F.identity()

    def fp_element(self, w: FpWord):
        x = ()
        for i, sw in w.syllables:
            if not 1 <= i <= len(self.factors):
                raise FreeProductError(f"no factor {i}")
            x = self.mul(x, ((i, self.factor(i).element(sw)),) if not self.trivial(i, sw) else ())
        return x

    def split(self, w: Word) -> FpWord:
        """The syllable decomposition of a word over the combined alphabet."""
        syl: list = []
        for s, e in reduce(w):
            if s not in self.owner:
                raise FreeProductError(f"unknown generator symbol {s!r}")
            i = self.owner[s]
            if syl and syl[-1][0] == i:
                syl[-1] = (i, syl[-1][1] + ((s, e),))
            else:
                syl.append((i, ((s, e),)))
        return _normalize(self, syl)


def _normalize(ctx: FreeProductLength, syllables) -> FpWord:
    from .words import fp_normalize

    return fp_normalize(syllables, ctx.trivial)


FreeProductContext = FreeProductLength


def fp_length(ctx: FreeProductLength, w: FpWord) -> Elem:
    return ctx.length_elem(ctx.fp_element(w))


def fp_ancillary_c(ctx: FreeProductLength, g: FpWord, h: FpWord) -> Half:
    """``c(g, h)`` through the longest common syllable prefix ``p``:
    ``L(g_1..g_p) + alpha_{g_1..g_p} c(g_{p+1}, h_{p+1})``, where the last
    term vanishes unless both syllables exist and share a factor."""
    x, y = ctx.fp_element(g), ctx.fp_element(h)
    return c_from_syllables(ctx, x, y)


def c_from_syllables(ctx: FreeProductLength, x: tuple, y: tuple) -> Half:
    p = 0
    while p < len(x) and p < len(y) and x[p] == y[p]:
        p += 1
    head = x[:p]
    out = Half.of(ctx.length_elem(head))
    if p < len(x) and p < len(y) and x[p][0] == y[p][0]:
        i = x[p][0]
        out = out + ctx.alpha_elem(head).apply_half(c_elem(ctx.factor(i), x[p][1], y[p][1]))
    return out


# ---------------------------------------------------------------------------
# freeness certificate


@dataclass
class WordVerdict:
    word: str
    ok: bool
    reason: str

    def to_json(self):
        return {"word": self.word, "ok": self.ok, "reason": self.reason}


@dataclass
class FreenessReport:
    radius: int
    verdicts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def failures(self) -> list:
        return [v for v in self.verdicts if not v.ok]

    def summary(self) -> str:
        if self.ok:
            return f"free: true (radius {self.radius})"
        return f"free: false (radius {self.radius}; {len(self.failures)} failing words)"

    def to_json(self, full: bool = False):
        out = {"free": self.ok, "radius": self.radius, "checked": len(self.verdicts),
               "failures": [v.to_json() for v in self.failures]}
        if full:
            out["verdicts"] = [v.to_json() for v in self.verdicts]
        return out


def factor_fixes_a_point(F: LengthFunction, a) -> bool:
    """Whether the factor element ``a`` has a fixed point. Action factors
    (possibly base-changed) are solved exactly; other factors only expose
    their basepoint, so ``L(a) = 0`` or ``b(a^2) <= 0`` is reported."""
    base = F
    while isinstance(base, BaseChangedLength):
        base, a = base.base, a[0]
    if isinstance(base, ActionLength):
        return not affine.fixed_points(a).is_empty()
    return not base.length_elem(a) or b_elem(base, base.mul(a, a)).sign() <= 0


def certify_free(ctx: FreeProductLength, radius: int = 4) -> FreenessReport:
    """Certify freeness on the elements spelled by words of length at most
    ``radius`` over the combined alphabet."""
    report = FreenessReport(radius)
    seen = set()
    for w in enumerate_ball(ctx.alphabet, radius):
        fw = ctx.split(w)
        x = ctx.fp_element(fw)
        if not x or x in seen:
            continue
        seen.add(x)
        report.verdicts.append(_verdict(ctx, fw))
    return report


def _verdict(ctx: FreeProductLength, fw: FpWord) -> WordVerdict:
    label = fp_format(fw)
    r, _ = cyclic_reduce(fw, ctx.trivial)
    x = ctx.fp_element(r)
    if len(x) == 1:
        i, a = x[0]
        if factor_fixes_a_point(ctx.factor(i), a):
            return WordVerdict(label, False, f"syllable in factor {i} fixes a point")
        return WordVerdict(label, True, f"conjugate into factor {i}, which acts freely there")
    for i, a in x:
        if not ctx.factor(i).length_elem(a):
            return WordVerdict(label, False, f"syllable in factor {i} has length zero")
    L1 = ctx.length_elem(x)
    if ctx.length_elem(ctx.mul(x, x)) != L1 + ctx.alpha_elem(x)(L1):
        return WordVerdict(label, False, "L(g^2) differs from L(g) + alpha_g L(g)")
    b = b_elem(ctx, x)
    if b.sign() <= 0:
        return WordVerdict(label, False, f"b = {b} is not positive")
    return WordVerdict(label, True, f"cyclically reduced, b = {b} > 0")


def cyclic_b_failures(ctx: FreeProductLength, words: Sequence[FpWord]) -> list[str]:
    """Cyclically reduced words with at least two syllables whose ``b`` is
    not positive."""
    out = []
    for fw in words:
        x = ctx.fp_element(fw)
        if len(x) < 2 or x[0][0] == x[-1][0]:
            continue
        if b_elem(ctx, x).sign() <= 0:
            out.append(fp_format(fw))
    return out


# ---------------------------------------------------------------------------
# regularity


@dataclass(frozen=True)
class Witness:
    u: Word
    g1: Word
    h1: Word
    kind: str = field(default="witness", init=False)

    def to_json(self):
        return {"kind": self.kind, "u": fmt(self.u), "g'": fmt(self.g1), "h'": fmt(self.h1)}


@dataclass(frozen=True)
class NotFound:
    searched: int
    kind: str = field(default="not_found", init=False)

    def to_json(self):
        return {"kind": self.kind, "searched": self.searched}


def is_regular_pair(L: LengthFunction, g: Word, h: Word, search_bound: int):
    """Search words ``u`` of length at most ``search_bound`` with
    ``L(u) = c(g, h)``, ``g = u g'``, ``h = u h'``, ``L(g) = L(u) + alpha_u
    L(g')`` and ``L(h) = L(u) + alpha_u L(h')``."""
    x, y = L.element(g), L.element(h)
    c = c_elem(L, x, y)
    if not c.in_lambda:
        return NotFound(0)
    cv = c.value()
    Lg, Lh = L.length_elem(x), L.length_elem(y)
    n = 0
    for u in enumerate_ball(L.alphabet, search_bound):
        n += 1
        ue = L.element(u)
        Lu = L.length_elem(ue)
        if Lu != cv:
            continue
        ui = L.inv(ue)
        g1, h1 = L.mul(ui, x), L.mul(ui, y)
        au = L.alpha_elem(ue)
        if Lg == Lu + au(L.length_elem(g1)) and Lh == Lu + au(L.length_elem(h1)):
            gw, hw = concat(invert(u), g), concat(invert(u), h)
            assert L.element(concat(u, gw)) == x and L.element(concat(u, hw)) == y
            return Witness(u, gw, hw)
    return NotFound(n)


# ---------------------------------------------------------------------------
# ready-made products


class CyclicLength(LengthFunction):
    """The infinite cyclic group on ``symbol`` with ``L(c^n) = |n| step`` over
    ``desc`` and trivial dilations; ``step = 0`` gives a degenerate factor
    whose generator fixes the basepoint."""

    def __init__(self, desc, symbol: str, step: Elem):
        super().__init__(desc, [symbol])
        self.symbol = symbol
        self.step = step
        self._id = identity_aut(desc)

    def letter_elem(self, sym, e):
        return e

    def identity(self):
        return 0

    def mul(self, x, y):
        return x + y

    def inv(self, x):
        return -x

    def length_elem(self, x) -> Elem:
        return self.step * abs(x)

    def alpha_elem(self, x):
        return self._id


def z_star_z() -> FreeProductLength:
    """Two copies of ``Z`` translating ``Z`` by 1, on generators ``a`` and ``b``."""
    from .examples import translation_line

    return FreeProductLength([ActionLength(translation_line(1, "a")), ActionLength(translation_line(1, "b"))])


def heisenberg_star_z() -> FreeProductLength:
    """The Heisenberg action and a translation of ``Z``, both pushed into
    ``Z^3 x Z``: the first factor by ``v -> (v, 0)`` with dilations
    ``(alpha, id)``, the second by ``n -> (0, n)``."""
    from .examples import heisenberg, translation_line

    H = ActionLength(heisenberg())
    Zf = ActionLength(translation_line(1, "a"))
    common = LexPair(IntLex(3), IntLex(1))
    h1 = LinearHom(H.desc, common, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)))
    h2 = LinearHom(Zf.desc, common, ((0, 0, 0, 1),))
    ida, idz = identity_aut(common.left), identity_aut(common.right)
    bar1 = {s: Triangular(common, H.alpha(letter(s)), idz) for s in H.alphabet}
    bar2 = {s: Triangular(common, ida, Zf.alpha(letter(s))) for s in Zf.alphabet}
    return FreeProductLength([base_change(H, h1, bar1), base_change(Zf, h2, bar2)])


def with_degenerate_factor(ctx: FreeProductLength, symbol: str = "c") -> FreeProductLength:
    """``ctx`` with an extra cyclic factor whose generator has length zero."""
    return FreeProductLength(list(ctx.factors) + [CyclicLength(ctx.desc, symbol, zero(ctx.desc))])


def fp_ball(ctx: FreeProductLength, radius: int) -> list[Word]:
    """Words over the combined alphabet, one per distinct element."""
    seen, out = set(), []
    for w in enumerate_ball(ctx.alphabet, radius):
        x = ctx.element(w)
        if x not in seen:
            seen.add(x)
            out.append(w)
    return out


def fp_syllable_ball(ctx: FreeProductLength, per_factor: dict[int, int], syllables: int) -> list[Word]:
    """Words with at most ``syllables`` syllables, each syllable a nonidentity
    element of factor ``i`` spelled by a word of length at most
    ``per_factor[i]``; one word per distinct element."""
    from .words import enumerate_fp_ball

    factor_words = {}
    for i, F in enumerate(ctx.factors, start=1):
        seen, ws = set(), []
        for w in enumerate_ball(F.alphabet, per_factor.get(i, 1)):
            x = F.element(w)
            if w and x != F.identity() and x not in seen:
                seen.add(x)
                ws.append(w)
        factor_words[i] = ws
    out, seen = [], set()
    for fw in enumerate_fp_ball(factor_words, syllables):
        w = concat(*(sw for _, sw in fw.syllables)) if fw else EMPTY
        x = ctx.element(w)
        if x not in seen:
            seen.add(x)
            out.append(w)
    return out

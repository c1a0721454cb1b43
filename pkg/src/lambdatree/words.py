"""Group words, free-product words, enumeration of balls and realization.

A :class:`Word` is a tuple of ``(symbol, exponent)`` letters with exponent
``+1`` or ``-1``. Products act right to left: the word ``g h`` realizes the map
``x -> g(h(x))``. Commutators follow ``[g, h] = g h g^-1 h^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

Letter = tuple  # (symbol, +1 | -1)
Word = tuple  # tuple[Letter, ...]

EMPTY: Word = ()


class WordError(ValueError):
    """Unparseable word or unknown generator symbol."""


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def reduce(w: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for sym, e in w:
        if out and out[-1][0] == sym and out[-1][1] == -e:
            out.pop()
        else:
            out.append((sym, e))
    return tuple(out)


def concat(*ws: Word) -> Word:
    return reduce(letter for w in ws for letter in w)


def invert(w: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


def power(w: Word, n: int) -> Word:
    base = w if n >= 0 else invert(w)
    return concat(*([base] * abs(n))) if n else EMPTY


def commutator(g: Word, h: Word) -> Word:
    return concat(g, h, invert(g), invert(h))


def letter(sym: str, e: int = 1) -> Word:
    return ((sym, 1 if e > 0 else -1),) * abs(e)


def parse(text: str) -> Word:
    """Parse ``"s t^-1 s^2"``; ``""`` and ``"1"`` give the empty word."""
    text = text.strip()
    if text in ("", "1"):
        return EMPTY
    out: list[Letter] = []
    for tok in text.replace("*", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"cannot parse token {tok!r}")
        sym, exp = m.group(1), int(m.group(2) or 1)
        out.extend(letter(sym, exp))
    return reduce(out)


def fmt(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        sym, e = w[i]
        j = i
        while j < len(w) and w[j] == (sym, e):
            j += 1
        n = (j - i) * e
        parts.append(sym if n == 1 else f"{sym}^{n}")
        i = j
    return " ".join(parts)


def check_alphabet(w: Word, alphabet: Sequence[str]) -> None:
    known = set(alphabet)
    for sym, _ in w:
        if sym not in known:
            raise WordError(f"unknown generator symbol {sym!r}")


def signed_letters(alphabet: Sequence[str]) -> list[Letter]:
    """Each symbol followed by its inverse, in alphabet order."""
    return [(s, e) for s in alphabet for e in (1, -1)]


def enumerate_ball(alphabet: Sequence[str], radius: int) -> list[Word]:
    """All freely reduced words of length at most ``radius`` in
    length-lexicographic order."""
    if radius < 0:
        raise WordError("radius must be nonnegative")
    letters = signed_letters(alphabet)
    out: list[Word] = [EMPTY]
    layer: list[Word] = [EMPTY]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for s, e in letters:
                if w and w[-1] == (s, -e):
                    continue
                nxt.append(w + ((s, e),))
        out.extend(nxt)
        layer = nxt
    return out


def ball_size(k: int, radius: int) -> int:
    return 1 + sum(2 * k * (2 * k - 1) ** (i - 1) for i in range(1, radius + 1))


def realize(ctx, w: Word):
    """The map of ``w`` under the generator table of ``ctx`` (an object with
    ``generators`` mapping symbols to maps, ``inverses``, and ``space``)."""
    from .affine import compose, identity

    out = identity(ctx.space)
    for sym, e in reversed(w):
        try:
            g = ctx.generators[sym] if e == 1 else ctx.inverses[sym]
        except KeyError:
            raise WordError(f"unknown generator symbol {sym!r}") from None
        out = compose(g, out)
    return out


# ---------------------------------------------------------------------------
# free-product words


@dataclass(frozen=True)
class FpWord:
    """Alternating syllables ``((factor, word), ...)`` with nonempty words."""

    syllables: tuple = ()

    def __post_init__(self):
        prev = None
        for f, w in self.syllables:
            if not w:
                raise WordError("free-product syllables must be nonempty")
            if f == prev:
                raise WordError("adjacent syllables must lie in distinct factors")
            prev = f

    def __len__(self) -> int:
        return len(self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def prefix(self, k: int) -> "FpWord":
        return FpWord(self.syllables[:k])

    def suffix(self, k: int) -> "FpWord":
        return FpWord(self.syllables[k:])

    def __str__(self) -> str:
        return fp_format(self)


Trivial = Callable[[int, Word], bool]


def _freely_trivial(factor: int, w: Word) -> bool:
    return not w


def fp_normalize(syllables: Iterable[tuple], trivial: Trivial = _freely_trivial) -> FpWord:
    """Merge adjacent syllables from one factor and drop trivial ones.

    ``trivial(factor, word)`` decides whether a syllable is the identity of
    its factor; by default only the empty word is.
    """
    out: list[tuple] = []
    for f, w in syllables:
        w = reduce(w)
        if out and out[-1][0] == f:
            w = concat(out.pop()[1], w)
        if w and not trivial(f, w):
            out.append((f, w))
    return FpWord(tuple(out))


def fp_concat(*ws: FpWord, trivial: Trivial = _freely_trivial) -> FpWord:
    return fp_normalize((s for w in ws for s in w.syllables), trivial)


def fp_invert(w: FpWord) -> FpWord:
    return FpWord(tuple((f, invert(x)) for f, x in reversed(w.syllables)))


def fp_parse(text: str, trivial: Trivial = _freely_trivial) -> FpWord:
    """Parse ``"1:a b | 2:c | 1:a"``."""
    text = text.strip()
    if text in ("", "1"):
        return FpWord()
    syl = []
    for part in text.split("|"):
        if ":" not in part:
            raise WordError(f"syllable {part.strip()!r} lacks a factor index")
        f, w = part.split(":", 1)
        try:
            fi = int(f)
        except ValueError:
            raise WordError(f"bad factor index {f.strip()!r}") from None
        syl.append((fi, parse(w)))
    return fp_normalize(syl, trivial)


def fp_format(w: FpWord) -> str:
    if not w:
        return "1"
    return " | ".join(f"{f}:{fmt(x)}" for f, x in w.syllables)


def cyclic_reduce(w: FpWord, trivial: Trivial = _freely_trivial) -> tuple[FpWord, FpWord]:
    """``(r, c)`` with ``r = c^-1 w c`` whose end syllables lie in distinct
    factors (or ``r`` has at most one syllable)."""
    conj = FpWord()
    cur = w
    while len(cur) >= 2 and cur.syllables[0][0] == cur.syllables[-1][0]:
        first = FpWord(cur.syllables[:1])
        cur = fp_concat(fp_invert(first), cur, first, trivial=trivial)
        conj = fp_concat(conj, first, trivial=trivial)
    return cur, conj


def enumerate_fp_ball(
    factor_words: dict[int, Sequence[Word]], syllables: int
) -> Iterator[FpWord]:
    """All alternating words with at most ``syllables`` syllables whose
    syllables are drawn from ``factor_words[f]`` (nonidentity factor
    elements), in a deterministic order."""
    factors = sorted(factor_words)
    yield FpWord()
    layer = [FpWord()]
    for _ in range(syllables):
        nxt = []
        for w in layer:
            last = w.syllables[-1][0] if w else None
            for f in factors:
                if f == last:
                    continue
                for x in factor_words[f]:
                    nxt.append(FpWord(w.syllables + ((f, x),)))
        yield from nxt
        layer = nxt

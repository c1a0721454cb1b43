"""Builders for the concrete actions used throughout the package.

Every builder returns an :class:`~lambdatree.lyndon.ActionContext` (or, for
the shifting action of a free group, a length function) whose relation suite
is checked on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import affine
from ._values import ScaledCodec
from .affine import AffineMap, StarMap
from .lyndon import ActionContext, LengthFunction, LyndonError, PairArrays
from .oag import (
    Elem,
    IntLex,
    Laurent,
    LexPair,
    Localized,
    MonomialShift,
    PositiveScale,
    Triangular,
    UnipotentInt,
    identity_aut,
    zero,
)
from .trees import LinearTree, StarTree
from .words import EMPTY, Word, commutator, concat, invert, letter, power


class ExampleError(ValueError):
    """Bad builder parameter or failed relation check."""


def _checked(ctx: ActionContext) -> ActionContext:
    bad = ctx.check_relations()
    if bad:
        raise ExampleError(f"{ctx.name}: relations fail to hold: {', '.join(bad)}")
    return ctx


def _conj(g: Word, h: Word) -> Word:
    """``g h g^-1``."""
    return concat(g, h, invert(g))


# ---------------------------------------------------------------------------
# Heisenberg group on Z^3


def heisenberg() -> ActionContext:
    """``s: (x,y,z) -> (x, y+1, z)`` and ``t: (x,y,z) -> (x+1, y, z+y)``."""
    desc = IntLex(3)
    shear = UnipotentInt(desc, ((1, 0, 0), (0, 1, 1), (0, 0, 1)))
    s = AffineMap.make(desc, lam=desc(0, 1, 0))
    t = AffineMap.make(desc, auto=shear, lam=desc(1, 0, 0))
    S, T = letter("s"), letter("t")
    st = commutator(S, T)
    rels = [("[s,[s,t]]", commutator(S, st)), ("[t,[s,t]]", commutator(T, st))]
    return _checked(ActionContext("heisenberg", s.space, zero(desc), {"s": s, "t": t}, relations=rels))


# ---------------------------------------------------------------------------
# Baumslag-Solitar and wreath products on Z x Lambda_2


def _pair_action(name: str, right, scale, extra_rels=()) -> ActionContext:
    desc = LexPair(IntLex(1), right)
    auto = Triangular(desc, identity_aut(desc.left), scale, None)
    s = AffineMap.make(desc, auto=auto, lam=desc(desc.left(1), right.zero()))
    one = right.elem(1) if not isinstance(right, Laurent) else right.elem({0: 1})
    t = AffineMap.make(desc, lam=desc(desc.left(0), one))
    ctx = ActionContext(name, s.space, zero(desc), {"s": s, "t": t}, relations=list(extra_rels))
    return _checked(ctx)


def bs(a: int = 2) -> ActionContext:
    """``BS(1, a)``: ``s: (x, y) -> (x+1, a y)`` and ``t: (x, y) -> (x, y+1)``
    on ``Z x Z[1/a]``, with ``s t s^-1 = t^a``."""
    if int(a) != a or a < 2:
        raise ExampleError("bs needs an integer a >= 2")
    a = int(a)
    right = Localized(a)
    S, T = letter("s"), letter("t")
    rel = ("s t s^-1 t^-a", concat(_conj(S, T), power(T, -a)))
    return _pair_action(f"bs({a})", right, PositiveScale(right, Fraction(a)), [rel])


def bs_inverse(a: int = 2) -> ActionContext:
    """The same group with ``s`` scaling by ``1/a``: ``s^-1 t s = t^a``."""
    if int(a) != a or a < 2:
        raise ExampleError("bs_inverse needs an integer a >= 2")
    a = int(a)
    right = Localized(a)
    S, T = letter("s"), letter("t")
    rel = ("s^-1 t s t^-a", concat(_conj(invert(S), T), power(T, -a)))
    return _pair_action(f"bs_inverse({a})", right, PositiveScale(right, Fraction(1, a)), [rel])


def conjugate_scheme(k_range: int = 2) -> list[tuple[str, Word]]:
    """Commutators ``[s^-k t s^k, s^-k' t s^k']`` for ``0 <= k < k' <= k_range``."""
    S, T = letter("s"), letter("t")
    out = []
    for k in range(k_range + 1):
        for k2 in range(k + 1, k_range + 1):
            u = _conj(power(S, -k), T)
            v = _conj(power(S, -k2), T)
            out.append((f"C({k},{k2})", commutator(u, v)))
    return out


def wreath_laurent(k_range: int = 2) -> ActionContext:
    """``s: (x, y) -> (x+1, t y)`` and ``t: (x, y) -> (x, y+1)`` on
    ``Z x Z[t, t^-1]``; the formal symbol stands in for a transcendental
    dilation."""
    right = Laurent()
    return _pair_action("wreath_laurent", right, MonomialShift(right, 1), conjugate_scheme(k_range))


def w_p(coeffs) -> Word:
    """``t^l0 (s t^l1 s^-1) ... (s^n t^ln s^-n)`` for ``p = sum l_k x^k``."""
    S, T = letter("s"), letter("t")
    return concat(*(_conj(power(S, k), power(T, int(l))) for k, l in enumerate(coeffs)))


def ga_rational(a) -> ActionContext:
    """``s: (x, y) -> (x+1, a y)``, ``t: (x, y) -> (x, y+1)`` for rational
    ``a > 0`` on ``Z x Z[1/(pq)]``."""
    a = Fraction(a)
    if a <= 0 or a == 1:
        raise ExampleError("ga_rational needs a positive rational a != 1")
    base = a.numerator * a.denominator
    right = Localized(base if base > 1 else 2)
    return _pair_action(f"ga_rational({a})", right, PositiveScale(right, a), conjugate_scheme(2))


def check_w_p(ctx: ActionContext, coeffs) -> bool:
    """Whether ``w_p`` realizes the identity in ``ctx``."""
    return ctx.realize(w_p(coeffs)).is_identity()


# ---------------------------------------------------------------------------
# maps on the line and on a star


def nesting_map(desc=None) -> AffineMap:
    """``x -> 2 - x/2``."""
    desc = desc or Localized(2)
    if not isinstance(desc, Localized) or desc.base % 2:
        raise ExampleError("the nesting map needs Z[1/a] with a even")
    return AffineMap.make(desc, sign=-1, auto=PositiveScale(desc, Fraction(1, 2)), lam=desc.elem(2))


def non_subtree_map() -> AffineMap:
    """``(x, y, z) -> (x, y, z + y + x)`` on ``Z^3``."""
    desc = IntLex(3)
    return AffineMap.make(desc, auto=UnipotentInt(desc, ((1, 0, 1), (0, 1, 1), (0, 0, 1))))


def non_subtree_certificate(g: AffineMap | None = None):
    """Fixed points ``p, q`` and a point ``m`` between them moved by ``g``."""
    g = g or non_subtree_map()
    d = g.space.desc
    p, q, m = d(1, -1, 0), d(2, -2, 0), d(1, 0, 0)
    assert g(p) == p and g(q) == q
    return p, q, m


def third_map(desc=None) -> AffineMap:
    """``x -> x/3 + 1``."""
    desc = desc or Localized(3)
    return AffineMap.make(desc, auto=PositiveScale(desc, Fraction(1, 3)), lam=desc.elem(1))


def mixed_star(a=Fraction(1, 2)) -> tuple[StarTree, StarMap]:
    """Three rays glued at the origin; ``g`` scales by ``a``, swaps rays 1
    and 2 and keeps ray 3."""
    a = Fraction(a)
    if not 0 < a < 1:
        raise ExampleError("mixed_star needs 0 < a < 1")
    base = a.numerator * a.denominator
    desc = Localized(base)
    space = StarTree(desc, 3)
    return space, StarMap(space, (2, 1, 3), PositiveScale(desc, a))


def translation_line(step: int = 1, symbol: str = "a") -> ActionContext:
    """``Z`` acting on itself by ``x -> x + step``."""
    desc = IntLex(1)
    g = AffineMap.make(desc, lam=desc(step))
    return ActionContext(f"translation({step})", g.space, zero(desc), {symbol: g})


def dilated_line(base: int = 2) -> ActionContext:
    """``a: x -> x + 1`` and ``d: x -> base * x`` on ``Z[1/base]``."""
    desc = Localized(base)
    a = AffineMap.make(desc, lam=desc.elem(1))
    d = AffineMap.make(desc, auto=PositiveScale(desc, Fraction(base)))
    A, D = letter("a"), letter("d")
    rel = ("d a d^-1 a^-base", concat(_conj(D, A), power(A, -base)))
    return _checked(ActionContext(f"dilated_line({base})", a.space, zero(desc), {"a": a, "d": d}, relations=[rel]))


# ---------------------------------------------------------------------------
# shifting action of a free group


def shift_symbol(k: int) -> str:
    return f"a{k}" if k >= 0 else f"am{-k}"


def _parse_shift_symbol(s: str) -> int | None:
    if s.startswith("am") and s[2:].isdigit():
        return -int(s[2:])
    if s.startswith("a") and s[1:].isdigit():
        return int(s[1:])
    return None


def _shift(f: tuple, e: int) -> tuple:
    return tuple((k + e, x) for k, x in f) if e else f


def _freduce(letters) -> tuple:
    out: list = []
    for k, x in letters:
        if out and out[-1] == (k, -x):
            out.pop()
        else:
            out.append((k, x))
    return tuple(out)


def _finv(f: tuple) -> tuple:
    return tuple((k, -x) for k, x in reversed(f))


class FreeShiftLength(LengthFunction):
    """The free group on ``a_k`` extended by ``t`` with ``t a_k t^-1 =
    a_{k+1}``, acting on the Cayley tree of the free group whose ``a_k``
    edges have length ``2^k``; ``t`` fixes the base vertex and doubles
    distances.

    Elements are pairs ``(f, e)`` for ``f t^e`` with ``f`` a reduced word in
    the ``a_k`` (letters ``(k, +-1)``); ``L(f t^e)`` is the sum of ``2^k``
    over the letters of ``f`` and the dilation is ``2^e``.
    """

    provenance = "user-table"

    def __init__(self, n_range: int = 3):
        if n_range < 0:
            raise ExampleError("n_range must be nonnegative")
        self.n_range = n_range
        self.ks = list(range(-n_range, n_range + 1))
        alphabet = [shift_symbol(k) for k in sorted(self.ks, key=lambda k: (abs(k), k < 0))] + ["t"]
        super().__init__(Localized(2), alphabet)
        self._scale = {}

    # group structure
    def letter_elem(self, sym, e):
        if sym == "t":
            return ((), e)
        k = _parse_shift_symbol(sym)
        if k is None or abs(k) > self.n_range:
            raise LyndonError(f"unknown generator symbol {sym!r}")
        return (((k, e),), 0)

    def identity(self):
        return ((), 0)

    def mul(self, x, y):
        return (_freduce(x[0] + _shift(y[0], x[1])), x[1] + y[1])

    def inv(self, x):
        return (_shift(_finv(x[0]), -x[1]), -x[1])

    def _pow2(self, k: int) -> Fraction:
        return Fraction(2) ** k

    def length_elem(self, x) -> Elem:
        return self.desc.elem(sum((self._pow2(k) for k, _ in x[0]), Fraction(0)))

    def alpha_elem(self, x):
        e = x[1]
        a = self._scale.get(e)
        if a is None:
            a = self._scale[e] = PositiveScale(self.desc, self._pow2(e))
        return a

    def conjugate_generator(self, k: int, e: int) -> str:
        """The symbol of ``t^e a_k t^-e``, which must lie in the generating range."""
        j = k + e
        if abs(k) > self.n_range or abs(j) > self.n_range:
            raise ExampleError(f"t^{e} a{k} t^{-e} leaves the generating range |k| <= {self.n_range}")
        return shift_symbol(j)

    def to_json(self):
        return {"type": "free_shift", "n_range": self.n_range, "alphabet": self.alphabet}

    # vectorized pair engine
    def generic_pair_arrays(self, elems: list, products: bool = False) -> PairArrays:
        return LengthFunction.pair_arrays(self, elems, products)

    def pair_arrays(self, elems: list, products: bool = False) -> PairArrays:
        fs = [x[0] for x in elems]
        es = np.array([x[1] for x in elems], dtype=np.int64)
        evals = sorted(set(es.tolist()))
        lo = min((k for f in fs for k, _ in f), default=0)
        if products:
            lo = min(lo, lo + min(evals))
        codec = ScaledCodec(self.desc, max(0, -lo))
        M = codec.M

        def weight(f):
            return sum(1 << (k + M) for k, _ in f)

        W = np.array([weight(f) for f in fs], dtype=np.int64)
        delta = W[:, None] + W[None, :] - 2 * _common_prefix_weight(fs, fs, M)
        out = PairArrays(codec, W, delta)
        if products:
            n = len(elems)
            prod = np.empty((n, n), dtype=np.int64)
            twist = np.empty((n, n), dtype=np.int64)
            for e in evals:
                rows = np.nonzero(es == e)[0]
                shifted = [_shift(f, e) for f in fs]
                Ws = np.array([weight(f) for f in shifted], dtype=np.int64)
                inv_rows = [_finv(fs[i]) for i in rows]
                P = _common_prefix_weight(inv_rows, shifted, M)
                prod[rows, :] = W[rows, None] + Ws[None, :] - 2 * P
                twist[rows, :] = Ws[None, :]
            out.prod, out.twist = prod, twist
        return out


def _common_prefix_weight(us: list, vs: list, M: int) -> np.ndarray:
    """``P[i, j]`` = scaled weight of the longest common prefix of ``us[i]``
    and ``vs[j]``."""
    depth = max([len(f) for f in us] + [len(f) for f in vs] + [0])
    ids: dict = {}
    P = np.zeros((len(us), len(vs)), dtype=np.int64)
    for d in range(depth):
        def pid(f):
            return ids.setdefault(f[: d + 1], len(ids)) if len(f) > d else -1

        iu = np.array([pid(f) for f in us], dtype=np.int64)
        iv = np.array([pid(f) for f in vs], dtype=np.int64)
        wu = np.array([1 << (f[d][0] + M) if len(f) > d else 0 for f in us], dtype=np.int64)
        same = (iu[:, None] == iv[None, :]) & (iu[:, None] >= 0)
        P += np.where(same, wu[:, None], 0)
    return P


def free_shift(n_range: int = 3) -> FreeShiftLength:
    return FreeShiftLength(n_range)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class ExampleSpec:
    name: str
    builder: Callable
    params: dict = field(default_factory=dict)
    summary: str = ""

    def build(self, **overrides):
        params = dict(self.params)
        unknown = set(overrides) - set(params)
        if unknown:
            raise ExampleError(f"{self.name} takes no parameter(s) {', '.join(sorted(unknown))}")
        for k, v in overrides.items():
            params[k] = type(params[k])(v) if not isinstance(params[k], Fraction) else Fraction(v)
        return self.builder(**params)


REGISTRY: dict[str, ExampleSpec] = {
    spec.name: spec
    for spec in [
        ExampleSpec("heisenberg", heisenberg, {}, "Heisenberg group on Z^3"),
        ExampleSpec("bs", bs, {"a": 2}, "BS(1,a) on Z x Z[1/a]"),
        ExampleSpec("bs_inverse", bs_inverse, {"a": 2}, "BS(1,a) with s scaling by 1/a"),
        ExampleSpec("wreath_laurent", wreath_laurent, {"k_range": 2}, "Z wr Z on Z x Z[t,t^-1]"),
        ExampleSpec("ga_rational", ga_rational, {"a": Fraction(2, 3)}, "G_a for rational a"),
        ExampleSpec("free_shift", free_shift, {"n_range": 3}, "shifting action of a free group (length function)"),
        ExampleSpec("translation", translation_line, {"step": 1}, "Z acting on Z by translation"),
        ExampleSpec("dilated_line", dilated_line, {"base": 2}, "x+1 and base*x on Z[1/base]"),
    ]
}


def build(name: str, **params):
    try:
        spec = REGISTRY[name]
    except KeyError:
        raise ExampleError(f"unknown example {name!r}; choose from {', '.join(REGISTRY)}") from None
    return spec.build(**params)


def relation_suite(ctx: ActionContext) -> dict[str, bool]:
    return {label: ctx.realize(w).is_identity() for label, w in ctx.relations}


def freeness_failures(ctx: ActionContext, words) -> list[Word]:
    """Words realizing a nonidentity map that has a fixed point."""
    out = []
    for w in words:
        if w == EMPTY:
            continue
        g = ctx.realize(w)
        if g.is_identity():
            continue
        if not affine.fixed_points(g).is_empty():
            out.append(w)
    return out


def line_space(desc) -> LinearTree:
    return LinearTree(desc)

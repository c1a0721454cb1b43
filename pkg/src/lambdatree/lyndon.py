"""Affine Lyndon length functions.

A :class:`LengthFunction` evaluates ``L(g)`` and the dilation ``alpha_g`` on
group elements given by words. The verification suites work on the distinct
elements of a word ball and evaluate every pairwise quantity exactly:

* ``delta(g, h) = alpha_g L(g^-1 h)``;
* ``2 c(g, h) = L(g) + L(h) - delta(g, h)``;
* ``L(g h)`` and ``alpha_g L(h)`` for the twisted triangle inequality.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import affine
from ._values import ObjectCodec, equal, ranks, signs
from .oag import (
    Automorphism,
    Elem,
    Family,
    Half,
    LinearHom,
    Unique,
    compose_aut,
    identity_aut,
    sample_generators,
    zero,
)
from .trees import OrbitSpace, TreeSpace, maxmin_violations, twice_gromov_matrix
from .words import EMPTY, Word, WordError, concat, fmt, invert, letter, reduce


class LyndonError(ValueError):
    """Invalid context, unknown symbol, or failed compatibility check."""


# ---------------------------------------------------------------------------
# action contexts


@dataclass
class ActionContext:
    """Generators acting by affine maps on a tree, with a basepoint."""

    name: str
    space: TreeSpace
    basepoint: object
    generators: dict
    alphas: dict | None = None
    relations: list = field(default_factory=list)

    def __post_init__(self):
        self.space.check(self.basepoint)
        for sym, g in self.generators.items():
            if g.space != self.space:
                raise LyndonError(f"generator {sym} acts on a different space")
        self.inverses = {s: affine.inverse(g) for s, g in self.generators.items()}
        if self.alphas is None:
            self.alphas = {s: g.auto for s, g in self.generators.items()}
        for s, g in self.generators.items():
            if self.alphas.get(s) != g.auto:
                raise LyndonError(f"dilation table entry for {s} does not match the map")

    @property
    def alphabet(self) -> list[str]:
        return list(self.generators)

    @property
    def desc(self):
        return self.space.desc

    def realize(self, w: Word):
        from .words import realize

        return realize(self, w)

    def alpha_word(self, w: Word) -> Automorphism:
        out = identity_aut(self.desc)
        for s, e in w:
            a = self.alphas[s]
            out = compose_aut(out, a if e == 1 else _inv(a))
        return out

    def check_relations(self) -> list[str]:
        """Labels of relations whose realization is not the identity map."""
        return [label for label, w in self.relations if not self.realize(w).is_identity()]

    def alpha_homomorphism_violations(self, words: Sequence[Word]) -> list[str]:
        return [fmt(w) for w in words if self.alpha_word(w) != self.realize(w).auto]

    def to_json(self):
        return {
            "type": "action",
            "name": self.name,
            "space": self.space.to_json(),
            "basepoint": self.basepoint.to_json(),
            "generators": {s: g.to_json() for s, g in self.generators.items()},
            "relations": {label: fmt(w) for label, w in self.relations},
        }


def _inv(a: Automorphism) -> Automorphism:
    from .oag import invert_aut

    return invert_aut(a)


# ---------------------------------------------------------------------------
# length functions


@dataclass
class PairArrays:
    """Pairwise values over a list of distinct elements."""

    codec: object
    L: np.ndarray
    delta: np.ndarray
    prod: np.ndarray | None = None
    twist: np.ndarray | None = None

    @property
    def twice_c(self) -> np.ndarray:
        return self.L[:, None] + self.L[None, :] - self.delta


class LengthFunction:
    """Base class. Subclasses provide group elements (hashable normal forms)
    with ``mul``, ``inv``, ``length_elem`` and ``alpha_elem``."""

    provenance = "user-table"

    def __init__(self, desc, alphabet: Sequence[str]):
        self.desc = desc
        self.alphabet = list(alphabet)
        self._cache: dict = {}
        self._lock = threading.Lock()

    # -- to be provided ---------------------------------------------------
    def letter_elem(self, sym: str, e: int):
        raise NotImplementedError

    def identity(self):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def length_elem(self, x) -> Elem:
        raise NotImplementedError

    def alpha_elem(self, x) -> Automorphism:
        raise NotImplementedError

    # -- derived ----------------------------------------------------------
    def element(self, w: Word):
        w = reduce(w)
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        known = set(self.alphabet)
        x = self.identity()
        for s, e in w:
            if s not in known:
                raise WordError(f"unknown generator symbol {s!r}")
            x = self.mul(x, self.letter_elem(s, e))
        with self._lock:
            self._cache.setdefault(w, x)
        return x

    def length(self, w: Word) -> Elem:
        return self.length_elem(self.element(w))

    def alpha(self, w: Word) -> Automorphism:
        return self.alpha_elem(self.element(w))

    @property
    def codec(self):
        return ObjectCodec(self.desc)

    def pair_arrays(self, elems: list, products: bool = False) -> PairArrays:
        codec = ObjectCodec(self.desc)
        n = len(elems)
        Ls = [self.length_elem(x) for x in elems]
        als = [self.alpha_elem(x) for x in elems]
        invs = [self.inv(x) for x in elems]
        delta = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                delta[i, j] = als[i](self.length_elem(self.mul(invs[i], elems[j])))
        out = PairArrays(codec, codec.array(Ls), delta)
        if products:
            prod = np.empty((n, n), dtype=object)
            twist = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    prod[i, j] = self.length_elem(self.mul(elems[i], elems[j]))
                    twist[i, j] = als[i](Ls[j])
            out.prod, out.twist = prod, twist
        return out


class ActionLength(LengthFunction):
    """``L(g) = d(x0, g x0)`` for an action context; elements are realized maps."""

    provenance = "from-action"

    def __init__(self, ctx: ActionContext):
        super().__init__(ctx.desc, ctx.alphabet)
        self.ctx = ctx
        self._id = affine.identity(ctx.space)

    def letter_elem(self, sym, e):
        return self.ctx.generators[sym] if e == 1 else self.ctx.inverses[sym]

    def identity(self):
        return self._id

    def mul(self, x, y):
        return affine.compose(x, y)

    def inv(self, x):
        return affine.inverse(x)

    def length_elem(self, x) -> Elem:
        x0 = self.ctx.basepoint
        return self.ctx.space.distance(x0, x(x0))

    def alpha_elem(self, x) -> Automorphism:
        return x.auto


class TableLength(LengthFunction):
    """A length function tabulated on reduced words of a free group, with a
    dilation table on the generators."""

    provenance = "user-table"

    def __init__(self, desc, alphabet, alphas: dict, table: dict):
        super().__init__(desc, alphabet)
        self.alphas = dict(alphas)
        self.table = {reduce(w): v for w, v in table.items()}
        for s in self.alphabet:
            if s not in self.alphas:
                raise LyndonError(f"no dilation given for generator {s}")

    def letter_elem(self, sym, e):
        return ((sym, e),)

    def identity(self):
        return EMPTY

    def mul(self, x, y):
        return concat(x, y)

    def inv(self, x):
        return invert(x)

    def length_elem(self, x) -> Elem:
        try:
            return self.table[x]
        except KeyError:
            raise LyndonError(f"no length recorded for {fmt(x)}") from None

    def alpha_elem(self, x) -> Automorphism:
        out = identity_aut(self.desc)
        for s, e in x:
            a = self.alphas[s]
            out = compose_aut(out, a if e == 1 else _inv(a))
        return out


class PerturbedLength(LengthFunction):
    """``base`` with the lengths of some elements overridden."""

    provenance = "user-table"

    def __init__(self, base: LengthFunction, overrides: dict):
        super().__init__(base.desc, base.alphabet)
        self.base = base
        self.overrides = {base.element(w): v for w, v in overrides.items()}

    def letter_elem(self, sym, e):
        return self.base.letter_elem(sym, e)

    def identity(self):
        return self.base.identity()

    def mul(self, x, y):
        return self.base.mul(x, y)

    def inv(self, x):
        return self.base.inv(x)

    def length_elem(self, x) -> Elem:
        v = self.overrides.get(x)
        return v if v is not None else self.base.length_elem(x)

    def alpha_elem(self, x):
        return self.base.alpha_elem(x)


def tabulate(L: LengthFunction, words: Sequence[Word]) -> TableLength:
    """Freeze ``L`` on ``words`` and every ``g^-1 h`` and ``g h`` among them."""
    table = {}
    for g in words:
        for h in words:
            for w in (concat(invert(g), h), concat(g, h)):
                if w not in table:
                    table[w] = L.length(w)
    alphas = {s: L.alpha(letter(s)) for s in L.alphabet}
    return TableLength(L.desc, L.alphabet, alphas, table)


# ---------------------------------------------------------------------------
# ancillary functions


def length_of(L: LengthFunction, w: Word) -> Elem:
    return L.length(w)


def a_elem(L: LengthFunction, x) -> Half:
    xi = L.inv(x)
    return Half(L.length_elem(x) + L.length_elem(xi) - L.alpha_elem(xi)(L.length_elem(L.mul(x, x))))


def b_elem(L: LengthFunction, x) -> Half:
    xi, x2 = L.inv(x), L.mul(x, x)
    L2, Li = L.length_elem(x2), L.length_elem(xi)
    return Half((L.alpha_elem(xi)(L2) + L2) - (L.alpha_elem(x2)(Li) + Li))


def c_elem(L: LengthFunction, x, y) -> Half:
    return Half(L.length_elem(x) + L.length_elem(y) - L.alpha_elem(x)(L.length_elem(L.mul(L.inv(x), y))))


def a_value(L: LengthFunction, g: Word) -> Half:
    return a_elem(L, L.element(g))


def b_value(L: LengthFunction, g: Word) -> Half:
    return b_elem(L, L.element(g))


def c_value(L: LengthFunction, g: Word, h: Word) -> Half:
    return c_elem(L, L.element(g), L.element(h))


@dataclass(frozen=True)
class AncillaryReport:
    a: Half
    b: Half
    c: Half
    c_in_lambda: bool

    def to_json(self):
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "c_in_lambda": self.c_in_lambda}


def ancillary(L: LengthFunction, g: Word, h: Word) -> AncillaryReport:
    c = c_value(L, g, h)
    return AncillaryReport(a_value(L, g), b_value(L, g), c, c.in_lambda)


# ---------------------------------------------------------------------------
# balls


@dataclass
class Ball:
    """Distinct elements of a list of words, with a representative word each."""

    L: LengthFunction
    words: list
    elems: list
    reps: list
    index: list

    def label(self, i: int) -> str:
        return fmt(self.reps[i])


def make_ball(L: LengthFunction, words: Sequence[Word]) -> Ball:
    elems, reps, index = [], [], []
    pos: dict = {}
    for w in words:
        x = L.element(w)
        k = pos.get(x)
        if k is None:
            k = pos[x] = len(elems)
            elems.append(x)
            reps.append(reduce(w))
        index.append(k)
    return Ball(L, list(words), elems, reps, index)


# ---------------------------------------------------------------------------
# axiom and property reports


@dataclass
class CheckResult:
    name: str
    checked: int
    witnesses: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.witnesses

    def to_json(self):
        out = {"axiom": self.name, "status": "pass" if self.ok else "fail", "checked": self.checked,
               "witnesses": self.witnesses}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    kind: str
    results: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def result(self, name: str) -> CheckResult:
        return next(r for r in self.results if r.name == name)

    def to_json(self):
        return {"report": self.kind, "status": "pass" if self.ok else "fail",
                "checks": [r.to_json() for r in self.results]}


def _mask_witnesses(mask: np.ndarray, ball: Ball, limit: int) -> list:
    out = []
    for idx in zip(*np.nonzero(mask)):
        out.append([ball.label(int(i)) for i in idx])
        if len(out) >= limit:
            break
    return out


def isosceles_violations(R: np.ndarray, limit: int | None = None) -> list[tuple[int, int, int]]:
    """Triples ``(g, h, k)`` with ``c(g,h) < c(g,k)`` but ``c(g,h) != c(h,k)``
    for a rank matrix ``R`` of ``c``; symmetric inputs use the spanning-tree
    search."""
    if (R == R.T).all():
        return maxmin_violations(R, limit)
    out = []
    n = R.shape[0]
    for g in range(n):
        a = R[g, :][:, None]
        mask = (a < R[g, :][None, :]) & (a != R)
        for h, k in zip(*np.nonzero(mask)):
            out.append((g, int(h), int(k)))
            if limit and len(out) >= limit:
                return out
    return out


def verify_axioms(L: LengthFunction, words: Sequence[Word], limit: int = 20) -> Report:
    """Check (L1)-(L4) on the elements represented by ``words``."""
    ball = make_ball(L, words)
    n = len(ball.elems)
    results = []

    l2 = CheckResult("L2", 1)
    if L.length(EMPTY):
        l2.witnesses.append(["1"])
    results.append(l2)

    l3 = CheckResult("L3", n)
    for i, x in enumerate(ball.elems):
        if L.length_elem(x) != L.alpha_elem(x)(L.length_elem(L.inv(x))):
            l3.witnesses.append([ball.label(i)])
            if len(l3.witnesses) >= limit:
                break
    results.append(l3)

    if n == 0:
        results += [CheckResult("L1", 0), CheckResult("L4", 0)]
        return Report("axioms", results)
    arrs = L.pair_arrays(ball.elems)
    R, _, distinct = ranks(arrs.twice_c, arrs.codec)
    odd = [r for r, v in enumerate(distinct) if v.halve() is None]
    l1 = CheckResult("L1", n * n)
    if odd:
        l1.witnesses = _mask_witnesses(np.isin(R, odd), ball, limit)
    results.append(l1)

    l4 = CheckResult("L4", n ** 3)
    l4.witnesses = [[ball.label(a), ball.label(b), ball.label(c)] for a, b, c in isosceles_violations(R, limit)]
    results.append(l4)
    return Report("axioms", results)


def verify_length_props(L: LengthFunction, words: Sequence[Word], limit: int = 20) -> Report:
    """Check the consequences 1-8 of the axioms on ``words``."""
    ball = make_ball(L, words)
    n = len(ball.elems)
    res = {k: CheckResult(k, 0) for k in
           ("nonnegative", "triangle", "n_fold", "c_nonnegative", "c_diagonal", "c_identity",
            "delta_symmetric", "c_bound")}
    Ls = [L.length_elem(x) for x in ball.elems]

    res["nonnegative"].checked = n
    res["nonnegative"].witnesses = [[ball.label(i)] for i, v in enumerate(Ls) if v.sign() < 0][:limit]

    # n-fold inequality along the letter decomposition of each word
    nf = res["n_fold"]
    for w in ball.words:
        w = reduce(w)
        nf.checked += 1
        bound = zero(L.desc)
        for k in range(len(w)):
            bound = bound + L.alpha(w[:k])(L.length(w[k:k + 1]))
        if L.length(w) > bound:
            nf.witnesses.append([fmt(w)])
            if len(nf.witnesses) >= limit:
                break

    one = L.identity()
    L1 = L.length_elem(one)
    ci = res["c_identity"]
    ci.checked = n
    for i, x in enumerate(ball.elems):
        twice = Ls[i] + L1 - L.alpha_elem(x)(L.length_elem(L.mul(L.inv(x), one)))
        if twice:
            ci.witnesses.append([ball.label(i), "1"])
            if len(ci.witnesses) >= limit:
                break

    if n:
        arrs = L.pair_arrays(ball.elems, products=True)
        twice_c = arrs.twice_c
        Lv = arrs.L
        res["triangle"].checked = n * n
        res["triangle"].witnesses = _mask_witnesses(
            signs(Lv[:, None] + arrs.twist - arrs.prod, arrs.codec) < 0, ball, limit)
        res["c_nonnegative"].checked = n * n
        res["c_nonnegative"].witnesses = _mask_witnesses(signs(twice_c, arrs.codec) < 0, ball, limit)
        res["c_diagonal"].checked = n
        diag = np.diagonal(twice_c).copy()
        res["c_diagonal"].witnesses = [[ball.label(i)] for i in np.nonzero(~equal(diag, Lv + Lv))[0][:limit]]
        res["delta_symmetric"].checked = n * n
        res["delta_symmetric"].witnesses = _mask_witnesses(~equal(arrs.delta, arrs.delta.T), ball, limit)
        twoL = Lv + Lv
        over = (signs(twoL[:, None] - twice_c, arrs.codec) < 0) | (signs(twoL[None, :] - twice_c, arrs.codec) < 0)
        res["c_bound"].checked = n * n
        res["c_bound"].witnesses = _mask_witnesses(over | ~equal(twice_c, twice_c.T), ball, limit)
    return Report("length_props", list(res.values()))


# ---------------------------------------------------------------------------
# orbit pseudometric


@dataclass
class OrbitQuotient:
    space: OrbitSpace
    ball: Ball
    cls: list  # class index of each distinct element
    base: str

    def point(self, i: int) -> str:
        return self.space.labels[self.cls[i]]


def orbit_pseudometric(L: LengthFunction, words: Sequence[Word]) -> OrbitQuotient:
    """The space of ``words`` under ``delta(g, h) = alpha_g L(g^-1 h)`` with
    zero-distance pairs identified."""
    ball = make_ball(L, words)
    one = L.identity()
    if one not in ball.elems:
        raise LyndonError("the word list must contain the identity")
    arrs = L.pair_arrays(ball.elems)
    D = arrs.delta
    n = len(ball.elems)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in zip(*np.nonzero(signs(D, arrs.codec) == 0)):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = sorted({find(i) for i in range(n)})
    pos = {r: k for k, r in enumerate(roots)}
    cls = [pos[find(i)] for i in range(n)]
    idx = np.array(roots)
    labels = [ball.label(r) for r in roots]
    space = OrbitSpace(L.desc, labels, D[np.ix_(idx, idx)], arrs.codec)
    return OrbitQuotient(space, ball, cls, labels[cls[ball.elems.index(one)]])


def duality_mismatches(q: OrbitQuotient, limit: int = 20) -> list:
    """Pairs of ball elements whose based Gromov product in the orbit space
    differs from ``c``."""
    L, ball = q.ball.L, q.ball
    T, codec = twice_gromov_matrix(q.space, list(q.space.labels), q.base)
    cls = np.array(q.cls)
    G = T[np.ix_(cls, cls)]
    arrs = L.pair_arrays(ball.elems)
    return _mask_witnesses(~equal(G, arrs.twice_c), ball, limit)


# ---------------------------------------------------------------------------
# base change


class BaseChangedLength(LengthFunction):
    """``h o L`` with dilations ``alpha_bar`` on the generators."""

    provenance = "base-changed"

    def __init__(self, base: LengthFunction, hom: LinearHom, alpha_bar: dict):
        super().__init__(hom.dst, base.alphabet)
        self.base = base
        self.hom = hom
        self.alpha_bar = dict(alpha_bar)

    def letter_elem(self, sym, e):
        a = self.alpha_bar[sym]
        return (self.base.letter_elem(sym, e), a if e == 1 else _inv(a))

    def identity(self):
        return (self.base.identity(), identity_aut(self.desc))

    def mul(self, x, y):
        return (self.base.mul(x[0], y[0]), compose_aut(x[1], y[1]))

    def inv(self, x):
        return (self.base.inv(x[0]), _inv(x[1]))

    def length_elem(self, x) -> Elem:
        return self.hom(self.base.length_elem(x[0]))

    def alpha_elem(self, x):
        return x[1]


def base_change(L: LengthFunction, hom: LinearHom, alpha_bar: dict, samples=None) -> BaseChangedLength:
    """Push ``L`` forward along ``hom``; requires ``hom o alpha_g = alpha_bar_g
    o hom`` on every generator and sampled element."""
    if hom.src != L.desc:
        raise LyndonError("homomorphism source does not match the length function's group")
    pts = list(samples) if samples is not None else _compat_samples(L.desc)
    for s in L.alphabet:
        if s not in alpha_bar:
            raise LyndonError(f"no dilation given for generator {s}")
        a, ab = L.alpha(letter(s)), alpha_bar[s]
        if ab.desc != hom.dst:
            raise LyndonError(f"dilation for {s} acts on the wrong group")
        for lam in pts:
            if hom(a(lam)) != ab(hom(lam)):
                raise BaseChangeError(s, lam)
    return BaseChangedLength(L, hom, alpha_bar)


class BaseChangeError(LyndonError):
    def __init__(self, symbol: str, lam: Elem):
        super().__init__(f"h o alpha_{symbol} differs from alpha_bar_{symbol} o h at {lam}")
        self.symbol = symbol
        self.lam = lam


def _compat_samples(desc) -> list[Elem]:
    gens = list(sample_generators(desc))
    out = list(gens)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            out.append(gens[i] + gens[j] * 3)
    return out


# ---------------------------------------------------------------------------
# extension condition


@dataclass
class ExtensionReport:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"check": "extension_condition", "status": "pass" if self.ok else "fail",
                "checked": self.checked, "violations": self.violations}


def check_extension_condition(L: LengthFunction, normal_words: Sequence[Word], conjugators: Sequence[Word],
                              alpha_table: dict | None = None) -> ExtensionReport:
    """Compare ``l(gamma g gamma^-1)`` with ``alpha_gamma l(g)`` where ``l`` is
    the hyperbolic length ``b`` of elements acting isometrically."""
    out = []
    n = 0
    for gamma in conjugators:
        a = (alpha_table or {}).get(fmt(gamma)) or L.alpha(gamma)
        for g in normal_words:
            n += 1
            lhs = b_value(L, concat(gamma, g, invert(gamma)))
            rhs = a.apply_half(b_value(L, g))
            if lhs != rhs:
                out.append({"conjugator": fmt(gamma), "element": fmt(g), "lhs": str(lhs), "rhs": str(rhs)})
    return ExtensionReport(n, out)


# ---------------------------------------------------------------------------
# radius criterion from lengths


def radius_bounds(L: LengthFunction, g: Word, witnesses: Sequence[Word]) -> list[Half]:
    """Elements spanning the right radius of ``g``: for witnesses ``gamma``
    with ``c(g, gamma) > a(g)``, the value
    ``L(gamma) - a(g) - alpha_gamma a(gamma^-1 g gamma)``."""
    ag = a_value(L, g)
    out = []
    for gamma in witnesses:
        if c_value(L, g, gamma) > ag:
            conj = concat(invert(gamma), g, gamma)
            out.append(Half.of(L.length(gamma)) - ag - L.alpha(gamma).apply_half(a_value(L, conj)))
    return out


def elliptic_via_radius_lengths(L: LengthFunction, g: Word, witnesses: Sequence[Word]):
    """Fixed-point test from a based length function, using the radius span
    generated by ``witnesses``. Returns ``RadElliptic``, ``NotElliptic`` or
    ``Unknown``."""
    if b_value(L, g).sign() <= 0:
        raise LyndonError("the radius criterion needs b(g) > 0")
    best = None
    open_candidates = False
    for h in (g, invert(g)):
        sol = affine.solve_radius_equation(L.alpha(h), b_value(L, h))
        bounds = radius_bounds(L, h, witnesses)
        rad = affine.RadiusSpan(tuple(bounds))
        if isinstance(sol, Family):
            open_candidates = True
            continue
        if isinstance(sol, Unique) and sol.point.sign() >= 0:
            if rad.contains(sol.point):
                return affine.RadElliptic(fmt(h), sol.point)
            open_candidates = True
            b = rad.bound()
            best = b if best is None or (b is not None and b > best) else best
    return affine.Unknown(best) if open_candidates else affine.NotElliptic()


# ---------------------------------------------------------------------------
# serialization


def context_from_json(obj) -> ActionContext:
    """Inverse of :meth:`ActionContext.to_json`. Generator specs may omit
    their ``space``, which then defaults to the context's."""
    from .oag import elem_from_json
    from .trees import StarPoint, StarTree, space_from_json
    from .words import parse

    if obj.get("type", "action") != "action":
        raise LyndonError(f"expected an action spec, got type {obj.get('type')!r}")
    space = space_from_json(obj["space"])
    bp = obj.get("basepoint")
    if bp is None:
        base = space.origin if isinstance(space, StarTree) else zero(space.desc)
    elif isinstance(space, StarTree):
        base = StarPoint(int(bp["ray"]), elem_from_json(space.desc, bp["r"]))
    else:
        base = elem_from_json(space.desc, bp)
    gens = {}
    for sym, spec in obj["generators"].items():
        spec = dict(spec)
        spec.setdefault("space", obj["space"])
        gens[sym] = affine.map_from_json(spec)
    rels = [(label, parse(text)) for label, text in obj.get("relations", {}).items()]
    return ActionContext(obj.get("name", "spec"), space, base, gens, relations=rels)

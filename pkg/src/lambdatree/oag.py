"""Concrete ordered abelian groups, their order-preserving automorphisms and
an exact solver for affine displacement equations.

Four families of groups are modelled:

* ``IntLex(n)``   -- ``Z^n`` ordered lexicographically, first entry dominant;
* ``Localized(a)`` -- the ring ``Z[1/a]`` as an ordered subgroup of ``Q``;
* ``Laurent()``    -- integer Laurent polynomials in ``t`` ordered by the sign
  of the leading coefficient (``t`` is infinitely large);
* ``LexPair(L, R)`` -- ``L x R`` ordered lexicographically, ``L`` dominant.

Values are :class:`Elem` objects wrapping a canonical payload. All arithmetic
is exact and all objects are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterator

from ._intsolve import integer_solve


class OagError(ValueError):
    """Malformed element, automorphism, or mismatched descriptors."""


def _prime_factors(n: int) -> frozenset[int]:
    n = abs(n)
    out = set()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


def _smooth(n: int, primes: frozenset[int]) -> bool:
    n = abs(n)
    if n == 0:
        return False
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


# Level sentinel for subgroups with no most-dominant archimedean class.
UNBOUNDED = (-math.inf,)


# ---------------------------------------------------------------------------
# descriptors


class Descriptor:
    """Base class for group descriptors. Payload methods are pure."""

    def zero(self):
        raise NotImplementedError

    def __call__(self, *args) -> "Elem":
        return self.elem(*args)


@dataclass(frozen=True)
class IntLex(Descriptor):
    rank: int

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise OagError(f"IntLex rank must be a positive integer, got {self.rank!r}")

    def elem(self, *coords) -> "Elem":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return Elem(self, self.canon(coords))

    def canon(self, v):
        v = tuple(v)
        if len(v) != self.rank or not all(isinstance(c, int) for c in v):
            raise OagError(f"IntLex({self.rank}) needs {self.rank} integers, got {v!r}")
        return v

    def zero(self):
        return (0,) * self.rank

    def add(self, v, w):
        return tuple(a + b for a, b in zip(v, w))

    def neg(self, v):
        return tuple(-a for a in v)

    def mul_int(self, v, n):
        return tuple(n * a for a in v)

    def sign(self, v):
        for a in v:
            if a:
                return 1 if a > 0 else -1
        return 0

    def halve(self, v):
        if any(a % 2 for a in v):
            return None
        return tuple(a // 2 for a in v)

    def level(self, v):
        for i, a in enumerate(v):
            if a:
                return (i,)
        return None

    def coord_kinds(self):
        return [("int",)] * self.rank

    def coords(self, v):
        return list(v)

    def from_coords(self, cs):
        out = []
        for c in cs:
            c = Fraction(c)
            if c.denominator != 1:
                raise OagError(f"{c} is not an integer coordinate")
            out.append(int(c))
        return tuple(out)

    def payload_json(self, v):
        return [str(a) for a in v]

    def payload_from_json(self, obj):
        return self.canon(int(a) for a in obj)

    def fmt(self, v):
        return "(" + ",".join(str(a) for a in v) + ")" if self.rank > 1 else str(v[0])

    def to_json(self):
        return {"type": "int_lex", "rank": self.rank}


@dataclass(frozen=True)
class Localized(Descriptor):
    base: int

    def __post_init__(self):
        if not isinstance(self.base, int) or self.base < 2:
            raise OagError(f"Localized base must be an integer >= 2, got {self.base!r}")

    @property
    def primes(self) -> frozenset[int]:
        return _prime_factors(self.base)

    def elem(self, value=0, den=None) -> "Elem":
        v = Fraction(value) if den is None else Fraction(value, den)
        return Elem(self, self.canon(v))

    def member(self, v) -> bool:
        v = Fraction(v)
        return v.denominator == 1 or _smooth(v.denominator, self.primes)

    def canon(self, v):
        v = Fraction(v)
        if not self.member(v):
            raise OagError(f"{v} is not in Z[1/{self.base}]")
        return v

    def zero(self):
        return Fraction(0)

    def add(self, v, w):
        return v + w

    def neg(self, v):
        return -v

    def mul_int(self, v, n):
        return v * n

    def sign(self, v):
        return (v > 0) - (v < 0)

    def halve(self, v):
        h = v / 2
        return h if self.member(h) else None

    def level(self, v):
        return (0,) if v else None

    def coord_kinds(self):
        return [("loc", self.base)]

    def coords(self, v):
        return [v]

    def from_coords(self, cs):
        (c,) = cs
        return self.canon(c)

    def payload_json(self, v):
        return str(v)

    def payload_from_json(self, obj):
        return self.canon(Fraction(obj))

    def fmt(self, v):
        return str(v)

    def to_json(self):
        return {"type": "localized", "base": self.base}


@dataclass(frozen=True)
class Laurent(Descriptor):
    """Finite-support integer Laurent polynomials; payload is a sorted tuple of
    ``(degree, coefficient)`` pairs with nonzero coefficients."""

    def elem(self, coeffs=None) -> "Elem":
        return Elem(self, self.canon(coeffs or {}))

    def canon(self, v):
        items = v.items() if isinstance(v, dict) else v
        acc: dict[int, int] = {}
        for d, c in items:
            if not isinstance(d, int) or not isinstance(c, int):
                raise OagError(f"Laurent terms need integer degree and coefficient, got {(d, c)!r}")
            acc[d] = acc.get(d, 0) + c
        return tuple(sorted((d, c) for d, c in acc.items() if c))

    def zero(self):
        return ()

    def add(self, v, w):
        if not v:
            return w
        if not w:
            return v
        acc = dict(v)
        for d, c in w:
            acc[d] = acc.get(d, 0) + c
        return tuple(sorted((d, c) for d, c in acc.items() if c))

    def neg(self, v):
        return tuple((d, -c) for d, c in v)

    def mul_int(self, v, n):
        if n == 0:
            return ()
        return tuple((d, n * c) for d, c in v)

    def sign(self, v):
        if not v:
            return 0
        return 1 if v[-1][1] > 0 else -1

    def halve(self, v):
        if any(c % 2 for _, c in v):
            return None
        return tuple((d, c // 2) for d, c in v)

    def shift(self, v, k):
        return tuple((d + k, c) for d, c in v)

    def level(self, v):
        return (-v[-1][0],) if v else None

    def coord_kinds(self):
        return None

    def payload_json(self, v):
        return {str(d): str(c) for d, c in v}

    def payload_from_json(self, obj):
        return self.canon({int(d): int(c) for d, c in obj.items()})

    def fmt(self, v):
        if not v:
            return "0"
        parts = []
        for d, c in reversed(v):
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {"type": "laurent"}


@dataclass(frozen=True)
class LexPair(Descriptor):
    left: Descriptor
    right: Descriptor

    def __post_init__(self):
        if not isinstance(self.left, Descriptor) or not isinstance(self.right, Descriptor):
            raise OagError("LexPair components must be descriptors")

    def elem(self, left, right) -> "Elem":
        lv = left.v if isinstance(left, Elem) else self.left.canon(left)
        rv = right.v if isinstance(right, Elem) else self.right.canon(right)
        return Elem(self, (lv, rv))

    def canon(self, v):
        lv, rv = v
        return (self.left.canon(lv), self.right.canon(rv))

    def zero(self):
        return (self.left.zero(), self.right.zero())

    def add(self, v, w):
        return (self.left.add(v[0], w[0]), self.right.add(v[1], w[1]))

    def neg(self, v):
        return (self.left.neg(v[0]), self.right.neg(v[1]))

    def mul_int(self, v, n):
        return (self.left.mul_int(v[0], n), self.right.mul_int(v[1], n))

    def sign(self, v):
        s = self.left.sign(v[0])
        return s if s else self.right.sign(v[1])

    def halve(self, v):
        lh = self.left.halve(v[0])
        if lh is None:
            return None
        rh = self.right.halve(v[1])
        return None if rh is None else (lh, rh)

    def level(self, v):
        lv = self.left.level(v[0])
        if lv is not None:
            return (0, lv)
        rv = self.right.level(v[1])
        return None if rv is None else (1, rv)

    def coord_kinds(self):
        lk, rk = self.left.coord_kinds(), self.right.coord_kinds()
        if lk is None or rk is None:
            return None
        return lk + rk

    def _nleft(self):
        return len(self.left.coord_kinds())

    def coords(self, v):
        return self.left.coords(v[0]) + self.right.coords(v[1])

    def from_coords(self, cs):
        n = self._nleft()
        return (self.left.from_coords(cs[:n]), self.right.from_coords(cs[n:]))

    def payload_json(self, v):
        return [self.left.payload_json(v[0]), self.right.payload_json(v[1])]

    def payload_from_json(self, obj):
        return (self.left.payload_from_json(obj[0]), self.right.payload_from_json(obj[1]))

    def fmt(self, v):
        return f"({self.left.fmt(v[0])} ; {self.right.fmt(v[1])})"

    def to_json(self):
        return {"type": "lex_pair", "left": self.left.to_json(), "right": self.right.to_json()}


def descriptor_from_json(obj) -> Descriptor:
    kind = obj.get("type")
    if kind == "int_lex":
        return IntLex(int(obj["rank"]))
    if kind == "localized":
        return Localized(int(obj["base"]))
    if kind == "laurent":
        return Laurent()
    if kind == "lex_pair":
        return LexPair(descriptor_from_json(obj["left"]), descriptor_from_json(obj["right"]))
    raise OagError(f"unknown descriptor type {kind!r}")


def is_integral(desc: Descriptor) -> bool:
    """True when every coordinate of ``desc`` is a plain integer."""
    kinds = desc.coord_kinds()
    return kinds is not None and all(k[0] == "int" for k in kinds)


# ---------------------------------------------------------------------------
# elements


@total_ordering
class Elem:
    """An element of a concrete ordered abelian group."""

    __slots__ = ("desc", "v")

    def __init__(self, desc: Descriptor, v):
        self.desc = desc
        self.v = v

    def _check(self, other: "Elem") -> None:
        if not isinstance(other, Elem):
            raise TypeError(f"expected Elem, got {type(other).__name__}")
        if other.desc != self.desc:
            raise OagError(f"descriptor mismatch: {self.desc} vs {other.desc}")

    def __add__(self, other: "Elem") -> "Elem":
        self._check(other)
        return Elem(self.desc, self.desc.add(self.v, other.v))

    def __sub__(self, other: "Elem") -> "Elem":
        self._check(other)
        return Elem(self.desc, self.desc.add(self.v, self.desc.neg(other.v)))

    def __neg__(self) -> "Elem":
        return Elem(self.desc, self.desc.neg(self.v))

    def __mul__(self, n: int) -> "Elem":
        if not isinstance(n, int):
            return NotImplemented
        return Elem(self.desc, self.desc.mul_int(self.v, n))

    __rmul__ = __mul__

    def sign(self) -> int:
        return self.desc.sign(self.v)

    def __abs__(self) -> "Elem":
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return self.sign() != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Half):
            return other == self
        if not isinstance(other, Elem):
            return NotImplemented
        return self.desc == other.desc and self.v == other.v

    def __lt__(self, other) -> bool:
        if isinstance(other, Half):
            return Half.of(self) < other
        self._check(other)
        return self.desc.sign(self.desc.add(self.v, self.desc.neg(other.v))) < 0

    def __hash__(self) -> int:
        return hash((self.desc, self.v))

    def halve(self) -> "Elem | None":
        h = self.desc.halve(self.v)
        return None if h is None else Elem(self.desc, h)

    def level(self):
        return self.desc.level(self.v)

    @property
    def left(self) -> "Elem":
        return Elem(self.desc.left, self.v[0])

    @property
    def right(self) -> "Elem":
        return Elem(self.desc.right, self.v[1])

    def to_json(self):
        return self.desc.payload_json(self.v)

    def __repr__(self) -> str:
        return f"Elem({self.desc.fmt(self.v)})"

    def __str__(self) -> str:
        return self.desc.fmt(self.v)


def zero(desc: Descriptor) -> Elem:
    return Elem(desc, desc.zero())


def elem_from_json(desc: Descriptor, obj) -> Elem:
    return Elem(desc, desc.payload_from_json(obj))


def add(x: Elem, y: Elem) -> Elem:
    return x + y


def cmp(x: Elem, y: Elem) -> int:
    """Three-way comparison: -1, 0 or 1."""
    x._check(y)
    return x.desc.sign(x.desc.add(x.v, x.desc.neg(y.v)))


@total_ordering
class Half:
    """An element of the 2-divisible hull, stored as its double.

    ``Half(t)`` denotes ``t/2``. The denominator flag is 1 exactly when
    ``t`` is divisible by 2 in the underlying group.
    """

    __slots__ = ("twice",)

    def __init__(self, twice: Elem):
        self.twice = twice

    @classmethod
    def of(cls, x: Elem) -> "Half":
        return cls(x * 2)

    @property
    def desc(self) -> Descriptor:
        return self.twice.desc

    @property
    def in_lambda(self) -> bool:
        return self.twice.halve() is not None

    @property
    def den(self) -> int:
        return 1 if self.in_lambda else 2

    @property
    def numerator(self) -> Elem:
        h = self.twice.halve()
        return self.twice if h is None else h

    def value(self) -> Elem:
        h = self.twice.halve()
        if h is None:
            raise OagError(f"{self} is not in the group")
        return h

    def sign(self) -> int:
        return self.twice.sign()

    def _lift(self, other) -> "Half":
        if isinstance(other, Half):
            return other
        if isinstance(other, Elem):
            return Half.of(other)
        raise TypeError(f"cannot combine Half with {type(other).__name__}")

    def __add__(self, other) -> "Half":
        return Half(self.twice + self._lift(other).twice)

    __radd__ = __add__

    def __sub__(self, other) -> "Half":
        return Half(self.twice - self._lift(other).twice)

    def __rsub__(self, other) -> "Half":
        return Half(self._lift(other).twice - self.twice)

    def __neg__(self) -> "Half":
        return Half(-self.twice)

    def __abs__(self) -> "Half":
        return -self if self.sign() < 0 else self

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Half, Elem)):
            return NotImplemented
        return self.twice == self._lift(other).twice

    def __lt__(self, other) -> bool:
        return self.twice < self._lift(other).twice

    def __hash__(self) -> int:
        return hash(("half", self.twice))

    def to_json(self):
        return {"numerator": self.numerator.to_json(), "den": self.den}

    def __repr__(self) -> str:
        return f"Half({self})"

    def __str__(self) -> str:
        if self.in_lambda:
            return str(self.value())
        return f"({self.twice})/2"


# ---------------------------------------------------------------------------
# automorphisms


def _matmul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)) for i in range(n))


def _matadd(A, B):
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _matinv_unitriangular(M):
    n = len(M)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # Solve M X = I by back substitution (upper triangular, unit diagonal).
    for j in range(n):
        for i in range(n - 1, -1, -1):
            s = Fraction(int(i == j))
            for k in range(i + 1, n):
                s -= M[i][k] * inv[k][j]
            inv[i][j] = s / M[i][i]
    return inv


def _vecmat(v, M):
    """Row vector times matrix."""
    return [sum(v[i] * M[i][j] for i in range(len(v))) for j in range(len(M[0]))] if M else []


class Automorphism:
    """Order-preserving automorphism of a concrete group (base class)."""

    desc: Descriptor

    def __call__(self, x: Elem) -> Elem:
        if x.desc != self.desc:
            raise OagError(f"automorphism of {self.desc} applied to element of {x.desc}")
        return Elem(self.desc, self.apply(x.v))

    def apply_half(self, h: Half) -> Half:
        return Half(self(h.twice))

    def is_identity(self) -> bool:
        return self == identity_aut(self.desc)

    def then(self, other: "Automorphism") -> "Automorphism":
        """``other`` after ``self``."""
        return compose_aut(other, self)


@dataclass(frozen=True)
class UnipotentInt(Automorphism):
    """Unit upper-triangular integer matrix acting on row vectors: the image of
    ``x`` has entries ``sum_i x_i M[i][j]``, so dominant coordinates feed into
    subordinate ones."""

    desc: IntLex
    matrix: tuple

    def __post_init__(self):
        n = self.desc.rank
        M = tuple(tuple(int(a) for a in row) for row in self.matrix)
        if len(M) != n or any(len(r) != n for r in M):
            raise OagError(f"UnipotentInt needs a {n}x{n} matrix")
        for i in range(n):
            if M[i][i] != 1 or any(M[i][j] != 0 for j in range(i)):
                raise OagError("UnipotentInt matrix must be upper triangular with unit diagonal")
        object.__setattr__(self, "matrix", M)

    def apply(self, v):
        M, n = self.matrix, self.desc.rank
        return tuple(sum(v[i] * M[i][j] for i in range(j + 1)) for j in range(n))

    def mat(self):
        return tuple(tuple(Fraction(a) for a in row) for row in self.matrix)

    def to_json(self):
        return {"kind": "unipotent", "matrix": [[str(a) for a in r] for r in self.matrix]}


@dataclass(frozen=True)
class PositiveScale(Automorphism):
    """Multiplication by a positive unit of ``Z[1/a]``."""

    desc: Localized
    factor: Fraction

    def __post_init__(self):
        f = Fraction(self.factor)
        if f <= 0:
            raise OagError(f"scale factor must be positive, got {f}")
        primes = self.desc.primes
        if not (_smooth(f.numerator, primes) and _smooth(f.denominator, primes)):
            raise OagError(f"{f} is not a unit of Z[1/{self.desc.base}]")
        object.__setattr__(self, "factor", f)

    def apply(self, v):
        return v * self.factor

    def mat(self):
        return ((self.factor,),)

    def to_json(self):
        return {"kind": "scale", "factor": str(self.factor)}


@dataclass(frozen=True)
class MonomialShift(Automorphism):
    """Multiplication by ``t^k``."""

    desc: Laurent
    k: int

    def apply(self, v):
        return tuple((d + self.k, c) for d, c in v) if self.k else v

    def mat(self):
        raise OagError("Laurent automorphisms have no coordinate matrix")

    def to_json(self):
        return {"kind": "shift", "k": str(self.k)}


@dataclass(frozen=True)
class Triangular(Automorphism):
    """``(x, y) -> (left(x), right(y) + hom(x))`` on a lexicographic pair.

    ``hom`` is ``None`` (zero) or a rational matrix from the coordinates of the
    left factor to those of the right factor, acting on row vectors.
    """

    desc: LexPair
    left: Automorphism
    right: Automorphism
    hom: tuple | None = None

    def __post_init__(self):
        if self.left.desc != self.desc.left or self.right.desc != self.desc.right:
            raise OagError("Triangular components do not match the pair descriptor")
        hom = self.hom
        if hom is not None:
            hom = tuple(tuple(Fraction(a) for a in row) for row in hom)
            if all(a == 0 for row in hom for a in row):
                hom = None
        if hom is not None:
            lk, rk = self.desc.left.coord_kinds(), self.desc.right.coord_kinds()
            if lk is None or rk is None:
                raise OagError("nonzero homomorphisms are only supported between coordinate groups")
            if len(hom) != len(lk) or any(len(r) != len(rk) for r in hom):
                raise OagError(f"hom matrix must be {len(lk)}x{len(rk)}")
            for kind, row in zip(lk, hom):
                self.desc.right.from_coords(row)
                if kind[0] == "loc":
                    src = _prime_factors(kind[1])
                    for tk, a in zip(rk, row):
                        if a and (tk[0] == "int" or not src <= _prime_factors(tk[1])):
                            raise OagError("hom does not map Z[1/a] into the target group")
        object.__setattr__(self, "hom", hom)

    def apply(self, v):
        x, y = v
        nx = self.left.apply(x)
        ny = self.right.apply(y)
        if self.hom is not None:
            hx = self.desc.right.from_coords(_vecmat(self.desc.left.coords(x), self.hom))
            ny = self.desc.right.add(ny, hx)
        return (nx, ny)

    def mat(self):
        A, B = self.left.mat(), self.right.mat()
        nl, nr = len(A), len(B)
        H = self.hom or tuple((Fraction(0),) * nr for _ in range(nl))
        top = tuple(tuple(A[i]) + tuple(H[i]) for i in range(nl))
        bot = tuple((Fraction(0),) * nl + tuple(B[i]) for i in range(nr))
        return top + bot

    def to_json(self):
        return {
            "kind": "triangular",
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "hom": None if self.hom is None else [[str(a) for a in r] for r in self.hom],
        }


def identity_aut(desc: Descriptor) -> Automorphism:
    if isinstance(desc, IntLex):
        n = desc.rank
        return UnipotentInt(desc, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))
    if isinstance(desc, Localized):
        return PositiveScale(desc, Fraction(1))
    if isinstance(desc, Laurent):
        return MonomialShift(desc, 0)
    if isinstance(desc, LexPair):
        return Triangular(desc, identity_aut(desc.left), identity_aut(desc.right), None)
    raise OagError(f"unknown descriptor {desc!r}")


def apply_aut(alpha: Automorphism, x: Elem) -> Elem:
    return alpha(x)


def compose_aut(a: Automorphism, b: Automorphism) -> Automorphism:
    """``a`` after ``b``."""
    if a.desc != b.desc:
        raise OagError(f"descriptor mismatch: {a.desc} vs {b.desc}")
    return _compose(a, b)


# Pure memo tables: automorphisms are immutable and hashable.
@lru_cache(maxsize=1 << 16)
def _compose(a: Automorphism, b: Automorphism) -> Automorphism:
    if isinstance(a, UnipotentInt):
        return UnipotentInt(a.desc, _matmul(b.matrix, a.matrix))
    if isinstance(a, PositiveScale):
        return PositiveScale(a.desc, a.factor * b.factor)
    if isinstance(a, MonomialShift):
        return MonomialShift(a.desc, a.k + b.k)
    if isinstance(a, Triangular):
        left = compose_aut(a.left, b.left)
        right = compose_aut(a.right, b.right)
        hom = None
        if a.hom is not None or b.hom is not None:
            parts = []
            if b.hom is not None:
                parts.append(_matmul(b.hom, a.right.mat()))
            if a.hom is not None:
                parts.append(_matmul(b.left.mat(), a.hom))
            hom = parts[0] if len(parts) == 1 else _matadd(*parts)
        return Triangular(a.desc, left, right, hom)
    raise OagError(f"unknown automorphism {a!r}")


@lru_cache(maxsize=1 << 14)
def invert_aut(a: Automorphism) -> Automorphism:
    if isinstance(a, UnipotentInt):
        inv = _matinv_unitriangular(a.matrix)
        if any(x.denominator != 1 for row in inv for x in row):
            raise AssertionError("unipotent inverse is not integral")
        return UnipotentInt(a.desc, tuple(tuple(int(x) for x in row) for row in inv))
    if isinstance(a, PositiveScale):
        return PositiveScale(a.desc, 1 / a.factor)
    if isinstance(a, MonomialShift):
        return MonomialShift(a.desc, -a.k)
    if isinstance(a, Triangular):
        li, ri = invert_aut(a.left), invert_aut(a.right)
        hom = None
        if a.hom is not None:
            hom = _matmul(_matmul(li.mat(), a.hom), ri.mat())
            hom = tuple(tuple(-x for x in row) for row in hom)
        return Triangular(a.desc, li, ri, hom)
    raise OagError(f"unknown automorphism {a!r}")


def aut_from_json(desc: Descriptor, obj) -> Automorphism:
    kind = obj.get("kind")
    if kind == "identity":
        return identity_aut(desc)
    if kind == "unipotent" and isinstance(desc, IntLex):
        return UnipotentInt(desc, tuple(tuple(int(a) for a in r) for r in obj["matrix"]))
    if kind == "scale" and isinstance(desc, Localized):
        return PositiveScale(desc, Fraction(obj["factor"]))
    if kind == "shift" and isinstance(desc, Laurent):
        return MonomialShift(desc, int(obj["k"]))
    if kind == "triangular" and isinstance(desc, LexPair):
        hom = obj.get("hom")
        return Triangular(
            desc,
            aut_from_json(desc.left, obj["left"]),
            aut_from_json(desc.right, obj["right"]),
            None if hom is None else tuple(tuple(Fraction(a) for a in r) for r in hom),
        )
    raise OagError(f"automorphism kind {kind!r} does not fit descriptor {desc}")


def displacement_min_level(a: Automorphism):
    """Most dominant archimedean level among nonzero elements of the image
    of ``x -> a(x) - x``; ``None`` when that image is trivial."""
    desc = a.desc
    if isinstance(a, UnipotentInt):
        levels = []
        for i, row in enumerate(a.matrix):
            r = list(row)
            r[i] -= 1
            lv = desc.level(tuple(r))
            if lv is not None:
                levels.append(lv)
        return min(levels) if levels else None
    if isinstance(a, PositiveScale):
        return (0,) if a.factor != 1 else None
    if isinstance(a, MonomialShift):
        return UNBOUNDED if a.k else None
    if isinstance(a, Triangular):
        ll = displacement_min_level(a.left)
        if ll is not None:
            return (0, ll)
        cands = []
        rl = displacement_min_level(a.right)
        if rl is not None:
            cands.append(rl)
        if a.hom is not None:
            for row in a.hom:
                lv = desc.right.level(desc.right.from_coords(row))
                if lv is not None:
                    cands.append(lv)
        if not cands:
            return None
        return (1, min(cands))
    raise OagError(f"unknown automorphism {a!r}")


# ---------------------------------------------------------------------------
# solution sets for x = s * alpha(x) + lam


class Subgroup:
    """A subgroup of a concrete group, used as the kernel of a solution family."""

    def contains(self, x: Elem) -> bool:
        raise NotImplementedError

    def generators(self) -> list[Elem]:
        """Finitely many sample elements that lie in the subgroup."""
        raise NotImplementedError


@dataclass(frozen=True)
class Lattice(Subgroup):
    """Z-span of finitely many elements of an integral descriptor."""

    desc: Descriptor
    gens: tuple

    def contains(self, x: Elem) -> bool:
        if not self.gens:
            return not x
        A = [[int(g.desc.coords(g.v)[i]) for g in self.gens] for i in range(len(x.desc.coords(x.v)))]
        b = [int(c) for c in x.desc.coords(x.v)]
        return integer_solve(A, b) is not None

    def generators(self) -> list[Elem]:
        return list(self.gens)

    def describe(self) -> str:
        if not self.gens:
            return "{0}"
        return "span_Z{" + ", ".join(str(g) for g in self.gens) + "}"


@dataclass(frozen=True)
class Whole(Subgroup):
    desc: Descriptor

    def contains(self, x: Elem) -> bool:
        return x.desc == self.desc

    def generators(self) -> list[Elem]:
        return list(sample_generators(self.desc))

    def describe(self) -> str:
        return f"all of {describe_descriptor(self.desc)}"


@dataclass(frozen=True)
class ProductKernel(Subgroup):
    desc: LexPair
    left: Subgroup
    right: Subgroup

    def contains(self, x: Elem) -> bool:
        return self.left.contains(x.left) and self.right.contains(x.right)

    def generators(self) -> list[Elem]:
        zl, zr = zero(self.desc.left), zero(self.desc.right)
        out = [self.desc.elem(g, zr) for g in self.left.generators()]
        out += [self.desc.elem(zl, g) for g in self.right.generators()]
        return out

    def describe(self) -> str:
        return f"{self.left.describe()} x {self.right.describe()}"


def sample_generators(desc: Descriptor) -> Iterator[Elem]:
    if isinstance(desc, IntLex):
        for i in range(desc.rank):
            yield desc.elem(tuple(int(i == j) for j in range(desc.rank)))
    elif isinstance(desc, Localized):
        yield desc.elem(1)
    elif isinstance(desc, Laurent):
        yield desc.elem({0: 1})
        yield desc.elem({1: 1})
        yield desc.elem({-1: 1})
    else:
        for g in sample_generators(desc.left):
            yield desc.elem(g, zero(desc.right))
        for g in sample_generators(desc.right):
            yield desc.elem(zero(desc.left), g)


def describe_descriptor(desc: Descriptor) -> str:
    if isinstance(desc, IntLex):
        return f"Z^{desc.rank}" if desc.rank > 1 else "Z"
    if isinstance(desc, Localized):
        return f"Z[1/{desc.base}]"
    if isinstance(desc, Laurent):
        return "Z[t,1/t]"
    return f"{describe_descriptor(desc.left)} x {describe_descriptor(desc.right)}"


class SolutionSet:
    def is_empty(self) -> bool:
        return False

    def contains(self, x: Elem) -> bool:
        raise NotImplementedError

    def witness(self) -> Elem | None:
        raise NotImplementedError


@dataclass(frozen=True)
class NoSolution(SolutionSet):
    def is_empty(self) -> bool:
        return True

    def contains(self, x: Elem) -> bool:
        return False

    def witness(self):
        return None

    def to_json(self):
        return {"kind": "none"}


@dataclass(frozen=True)
class Unique(SolutionSet):
    point: Elem

    def contains(self, x: Elem) -> bool:
        return x == self.point

    def witness(self):
        return self.point

    def to_json(self):
        return {"kind": "unique", "point": self.point.to_json(), "text": str(self.point)}


@dataclass(frozen=True)
class Family(SolutionSet):
    particular: Elem
    kernel: Subgroup

    def contains(self, x: Elem) -> bool:
        return x.desc == self.particular.desc and self.kernel.contains(x - self.particular)

    def witness(self):
        return self.particular

    def points(self) -> list[Elem]:
        """The particular point and its translates by each kernel generator."""
        p = self.particular
        return [p] + [p + g for g in self.kernel.generators()]

    def describe(self) -> str:
        return f"{self.particular} + {self.kernel.describe()}"

    def to_json(self):
        return {"kind": "family", "particular": self.particular.to_json(), "text": self.describe()}


def _family_or_unique(p: Elem, kernel: Subgroup) -> SolutionSet:
    if isinstance(kernel, Lattice) and not kernel.gens:
        return Unique(p)
    return Family(p, kernel)


def solve_displacement(alpha: Automorphism, s: int, lam: Elem) -> SolutionSet:
    """All ``x`` with ``x = s * alpha(x) + lam`` (``s`` is +1 or -1)."""
    if s not in (1, -1):
        raise OagError("orientation sign must be +1 or -1")
    if lam.desc != alpha.desc:
        raise OagError(f"descriptor mismatch: {alpha.desc} vs {lam.desc}")
    result = _solve(alpha, s, lam)
    for x in ([result.witness()] if not result.is_empty() else []):
        assert x == (alpha(x) if s == 1 else -alpha(x)) + lam, "solver produced a non-solution"
    return result


def _solve(alpha: Automorphism, s: int, lam: Elem) -> SolutionSet:
    desc = alpha.desc
    if is_integral(desc):
        return _solve_integral(alpha, s, lam)
    if isinstance(desc, Localized):
        coef = 1 - s * alpha.factor
        if coef == 0:
            return Family(zero(desc), Whole(desc)) if not lam else NoSolution()
        x = lam.v / coef
        return Unique(Elem(desc, x)) if desc.member(x) else NoSolution()
    if isinstance(desc, Laurent):
        return _solve_laurent(alpha.k, s, lam)
    if isinstance(desc, LexPair):
        left = _solve(alpha.left, s, lam.left)
        if left.is_empty():
            return NoSolution()
        if isinstance(left, Unique) or alpha.hom is None:
            x1 = left.witness()
            lam2 = lam.right
            if alpha.hom is not None:
                hx = desc.right.from_coords(_vecmat(desc.left.coords(x1.v), alpha.hom))
                lam2 = lam2 + Elem(desc.right, hx) * s
            right = _solve(alpha.right, s, lam2)
            if right.is_empty():
                return NoSolution()
            x = desc.elem(x1, right.witness())
            if isinstance(left, Unique) and isinstance(right, Unique):
                return Unique(x)
            lk = left.kernel if isinstance(left, Family) else Lattice(desc.left, ())
            rk = right.kernel if isinstance(right, Family) else Lattice(desc.right, ())
            return Family(x, ProductKernel(desc, lk, rk))
        raise OagError(
            "coupled solution families over mixed coordinate groups are not supported"
        )
    raise OagError(f"unknown descriptor {desc!r}")


def _solve_integral(alpha: Automorphism, s: int, lam: Elem) -> SolutionSet:
    desc = alpha.desc
    M = alpha.mat()
    n = len(M)
    # x (I - s M) = lam  <=>  (I - s M)^T x^T = lam^T
    C = [[int(i == j) - s * M[i][j] for j in range(n)] for i in range(n)]
    A = [[int(C[i][j]) for i in range(n)] for j in range(n)]
    b = [int(c) for c in desc.coords(lam.v)]
    sol = integer_solve(A, b)
    if sol is None:
        return NoSolution()
    x0, kernel = sol
    p = Elem(desc, desc.from_coords(x0))
    gens = tuple(Elem(desc, desc.from_coords(k)) for k in kernel)
    return _family_or_unique(p, Lattice(desc, gens))


def _solve_laurent(k: int, s: int, lam: Elem) -> SolutionSet:
    desc = lam.desc
    if k == 0:
        if s == 1:
            return Family(zero(desc), Whole(desc)) if not lam else NoSolution()
        h = lam.halve()
        return Unique(h) if h is not None else NoSolution()
    if not lam:
        return Unique(lam)
    # coefficient recurrence x_d - s x_{d-k} = lam_d
    lc = dict(lam.v)
    lo, hi = lam.v[0][0], lam.v[-1][0]
    x: dict[int, int] = {}
    if k > 0:
        for d in range(lo, hi - k + 1):
            x[d] = lc.get(d, 0) + s * x.get(d - k, 0)
    else:
        for d in range(hi, lo - k - 1, -1):
            x[d] = lc.get(d, 0) + s * x.get(d - k, 0)
    cand = Elem(desc, desc.canon(x))
    shifted = Elem(desc, desc.shift(cand.v, k))
    if cand - shifted * s == lam:
        return Unique(cand)
    return NoSolution()


# ---------------------------------------------------------------------------
# homomorphisms between coordinate groups


@dataclass(frozen=True)
class LinearHom:
    """A homomorphism ``src -> dst`` given by a rational matrix acting on the
    coordinate row vector of ``src``."""

    src: Descriptor
    dst: Descriptor
    matrix: tuple

    def __post_init__(self):
        if self.src.coord_kinds() is None or self.dst.coord_kinds() is None:
            raise OagError("linear homomorphisms need coordinate groups on both sides")
        M = tuple(tuple(Fraction(a) for a in row) for row in self.matrix)
        n, m = len(self.src.coord_kinds()), len(self.dst.coord_kinds())
        if len(M) != n or any(len(r) != m for r in M):
            raise OagError(f"homomorphism matrix must be {n}x{m}")
        for row in M:
            self.dst.from_coords(row)
        object.__setattr__(self, "matrix", M)

    def __call__(self, x: Elem) -> Elem:
        if x.desc != self.src:
            raise OagError(f"homomorphism from {self.src} applied to element of {x.desc}")
        return Elem(self.dst, self.dst.from_coords(_vecmat(self.src.coords(x.v), self.matrix)))

    def to_json(self):
        return {
            "src": self.src.to_json(),
            "dst": self.dst.to_json(),
            "matrix": [[str(a) for a in r] for r in self.matrix],
        }

    @classmethod
    def from_json(cls, obj) -> "LinearHom":
        src, dst = descriptor_from_json(obj["src"]), descriptor_from_json(obj["dst"])
        return cls(src, dst, tuple(tuple(Fraction(a) for a in r) for r in obj["matrix"]))


def scaling_hom(desc: Descriptor, k: int) -> LinearHom:
    n = len(desc.coord_kinds())
    return LinearHom(desc, desc, tuple(tuple(k * int(i == j) for j in range(n)) for i in range(n)))


def is_order_preserving(h: LinearHom, samples=None) -> bool:
    """Sampled check that nonnegative elements map to nonnegative elements."""
    pts = list(samples) if samples is not None else list(sample_generators(h.src))
    return all(h(abs(x)).sign() >= 0 for x in pts)

"""Affine automorphisms of linear and star trees.

A map of the linear tree over ``Lambda`` is ``x -> s*alpha(x) + lam`` with
``s = +1/-1`` and ``alpha`` an order-preserving automorphism. A map of a star
tree permutes the rays and rescales every ray by one common automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .oag import (
    Automorphism,
    Descriptor,
    Elem,
    Family,
    Half,
    Lattice,
    NoSolution,
    SolutionSet,
    Unique,
    Whole,
    aut_from_json,
    compose_aut,
    displacement_min_level,
    elem_from_json,
    identity_aut,
    sample_generators,
    invert_aut,
    solve_displacement,
    zero,
)
from .trees import LinearTree, StarPoint, StarTree, TreeSpace, space_from_json


class AffineError(ValueError):
    """Invalid affine map, space mismatch, or unsupported operation."""


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class AffineMap:
    """``x -> sign * auto(x) + lam`` on the linear tree over ``auto.desc``."""

    space: LinearTree
    sign: int
    auto: Automorphism
    lam: Elem

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise AffineError("orientation sign must be +1 or -1")
        if self.auto.desc != self.space.desc or self.lam.desc != self.space.desc:
            raise AffineError("automorphism, translation and space must share one group")

    @classmethod
    def make(cls, desc: Descriptor, sign: int = 1, auto: Automorphism | None = None, lam: Elem | None = None):
        return cls(LinearTree(desc), sign, auto or identity_aut(desc), lam if lam is not None else zero(desc))

    @property
    def alpha(self) -> Automorphism:
        return self.auto

    def __call__(self, p):
        if isinstance(p, Half):
            h = self.auto.apply_half(p)
            return (h if self.sign == 1 else -h) + self.lam
        self.space.check(p)
        y = self.auto(p)
        return (y if self.sign == 1 else -y) + self.lam

    def is_identity(self) -> bool:
        return self.sign == 1 and self.auto.is_identity() and not self.lam

    def to_json(self):
        return {
            "space": self.space.to_json(),
            "sign": self.sign,
            "auto": self.auto.to_json(),
            "translation": self.lam.to_json(),
        }

    def __str__(self) -> str:
        s = "" if self.sign == 1 else "-"
        return f"x -> {s}alpha(x) + {self.lam}"


@dataclass(frozen=True)
class StarMap:
    """``(ray i, r) -> (ray perm[i-1], auto(r))`` on a star tree."""

    space: StarTree
    perm: tuple
    auto: Automorphism

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(1, self.space.rays + 1)):
            raise AffineError(f"{perm} is not a permutation of the rays 1..{self.space.rays}")
        if self.auto.desc != self.space.desc:
            raise AffineError("the scaling automorphism must act on the star tree's group")
        object.__setattr__(self, "perm", perm)

    @property
    def alpha(self) -> Automorphism:
        return self.auto

    def __call__(self, p: StarPoint) -> StarPoint:
        self.space.check(p)
        if p.ray == 0:
            return p
        return self.space.point(self.perm[p.ray - 1], self.auto(p.r))

    def is_identity(self) -> bool:
        return self.auto.is_identity() and self.perm == tuple(range(1, self.space.rays + 1))

    def to_json(self):
        return {"space": self.space.to_json(), "perm": list(self.perm), "auto": self.auto.to_json()}


def map_from_json(obj) -> AffineMap | StarMap:
    space = space_from_json(obj["space"])
    if isinstance(space, LinearTree):
        return AffineMap(
            space,
            int(obj.get("sign", 1)),
            aut_from_json(space.desc, obj.get("auto", {"kind": "identity"})),
            elem_from_json(space.desc, obj["translation"]),
        )
    if isinstance(space, StarTree):
        return StarMap(space, tuple(obj["perm"]), aut_from_json(space.desc, obj.get("auto", {"kind": "identity"})))
    raise AffineError("affine maps are defined on linear and star trees only")


def identity(space: TreeSpace):
    if isinstance(space, LinearTree):
        return AffineMap.make(space.desc)
    if isinstance(space, StarTree):
        return StarMap(space, tuple(range(1, space.rays + 1)), identity_aut(space.desc))
    raise AffineError(f"no affine maps on {type(space).__name__}")


def apply(g, p):
    return g(p)


def compose(g, h):
    """``g`` after ``h``."""
    if g.space != h.space:
        raise AffineError("cannot compose maps of different spaces")
    if isinstance(g, AffineMap):
        lam = g.auto(h.lam)
        return AffineMap(g.space, g.sign * h.sign, compose_aut(g.auto, h.auto), (lam if g.sign == 1 else -lam) + g.lam)
    perm = tuple(g.perm[h.perm[i] - 1] for i in range(g.space.rays))
    return StarMap(g.space, perm, compose_aut(g.auto, h.auto))


def inverse(g):
    ai = invert_aut(g.auto)
    if isinstance(g, AffineMap):
        t = ai(g.lam)
        return AffineMap(g.space, g.sign, ai, -t if g.sign == 1 else t)
    perm = [0] * g.space.rays
    for i, p in enumerate(g.perm):
        perm[p - 1] = i + 1
    return StarMap(g.space, tuple(perm), ai)


def power(g, n: int):
    base = g if n >= 0 else inverse(g)
    out = identity(g.space)
    for _ in range(abs(n)):
        out = compose(base, out)
    return out


def conjugate(h, g):
    """``h g h^-1``."""
    return compose(h, compose(g, inverse(h)))


# ---------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class StarFixedSet:
    """Fixed points of a star map: the origin plus, on each invariant ray,
    the positive solutions of ``auto(r) = r``."""

    space: StarTree
    per_ray: tuple  # ((ray, SolutionSet), ...)

    def is_empty(self) -> bool:
        return False

    def witness(self) -> StarPoint:
        return self.space.origin

    def contains(self, p: StarPoint) -> bool:
        if p.ray == 0:
            return True
        for ray, sol in self.per_ray:
            if ray == p.ray:
                return sol.contains(p.r)
        return False

    def to_json(self):
        return {"kind": "star", "origin": True, "rays": {str(r): s.to_json() for r, s in self.per_ray}}


def fixed_points(g):
    if isinstance(g, AffineMap):
        sol = solve_displacement(g.auto, g.sign, g.lam)
        if not sol.is_empty():
            w = sol.witness()
            if g(w) != w:
                raise AssertionError(f"reported fixed point {w} is moved by the map")
        return sol
    if isinstance(g, StarMap):
        per = []
        for i, p in enumerate(g.perm, start=1):
            if p == i:
                per.append((i, solve_displacement(g.auto, 1, zero(g.space.desc))))
        return StarFixedSet(g.space, tuple(per))
    raise AffineError(f"fixed points are not available for {type(g).__name__}")


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Elliptic:
    witness: object
    kind: str = field(default="elliptic", init=False)

    def to_json(self):
        return {"kind": self.kind, "witness": _point_json(self.witness), "text": str(self.witness)}


@dataclass(frozen=True)
class Inversion:
    witness: Half
    kind: str = field(default="inversion", init=False)

    def to_json(self):
        return {"kind": self.kind, "witness": self.witness.to_json(), "text": str(self.witness)}


@dataclass(frozen=True)
class NestingReflection:
    kind: str = field(default="nesting_reflection", init=False)

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Hyperbolic:
    witness: object
    displacement: Elem
    axis: str = "whole line"
    kind: str = field(default="hyperbolic", init=False)

    def to_json(self):
        return {
            "kind": self.kind,
            "witness": _point_json(self.witness),
            "displacement": self.displacement.to_json(),
            "axis": self.axis,
        }


def _point_json(p):
    return p.to_json() if hasattr(p, "to_json") else str(p)


def classify(g):
    """Elliptic, inversion, nesting reflection or hyperbolic."""
    if isinstance(g, StarMap):
        return Elliptic(g.space.origin)
    if not isinstance(g, AffineMap):
        raise AffineError(f"cannot classify {type(g).__name__}")
    fp = fixed_points(g)
    if not fp.is_empty():
        return Elliptic(fp.witness())
    if g.sign == 1:
        # An increasing fixed-point-free map of a line moves every point the
        # same way as its inverse moves it back, so every point is on the axis.
        u = zero(g.space.desc)
        return Hyperbolic(u, g.space.distance(u, g(u)))
    g2 = compose(g, g)
    fp2 = fixed_points(g2)
    if not fp2.is_empty():
        y = fp2.witness()
        m = Half(y + g(y))
        if g(m) != m:
            raise AssertionError("inversion midpoint is not fixed")
        return Inversion(m)
    return NestingReflection()


def classify_on_ray(g: StarMap, ray: int):
    """Classify the restriction of ``g`` to the punctured ray ``ray``, which
    must be invariant under ``g``."""
    if not isinstance(g, StarMap):
        raise AffineError("ray restriction applies to star maps")
    if not 1 <= ray <= g.space.rays or g.perm[ray - 1] != ray:
        raise AffineError(f"ray {ray} is not invariant under the map")
    sol = solve_displacement(g.auto, 1, zero(g.space.desc))
    positive = _positive_member(sol)
    if positive is not None:
        return Elliptic(g.space.point(ray, positive))
    desc = g.space.desc
    one = next(iter(sample_generators(desc)))
    u = g.space.point(ray, one)
    return Hyperbolic(u, g.space.distance(u, g(u)), axis=f"punctured ray {ray}")


def _positive_member(sol: SolutionSet) -> Elem | None:
    if isinstance(sol, Family):
        for k in sol.kernel.generators():
            if k:
                return abs(k)
    return None


# ---------------------------------------------------------------------------
# rigidity


def is_rigid(g: AffineMap) -> bool:
    """Whether no closed segment is mapped properly into itself by ``g`` or
    its inverse."""
    if not isinstance(g, AffineMap):
        raise AffineError("rigidity is decided for linear-tree maps only")
    if g.sign == -1:
        # A reflection that is an isometry cannot shrink a segment; any
        # nontrivial dilation shrinks some segment about the reflection centre.
        return g.auto.is_identity()
    if not fixed_points(g).is_empty():
        return g.is_identity()
    lev = displacement_min_level(g.auto)
    if lev is None:
        return True
    return lev > g.lam.level()


def nesting_witness(g: AffineMap, box) -> tuple | None:
    """Brute force: a pair ``(p, q, h)`` with ``h`` in ``{g, g^-1}`` mapping
    ``[p, q]`` properly into itself, searching ``p, q`` in ``box``."""
    gi = inverse(g)
    pts = sorted(set(box))
    for h in (g, gi):
        img = {p: h(p) for p in pts}
        for i, p in enumerate(pts):
            for q in pts[i + 1:]:
                a, b = sorted((img[p], img[q]))
                if p <= a and b <= q and (a, b) != (p, q):
                    return (p, q, h)
    return None


# ---------------------------------------------------------------------------
# displacement and radius


def axis_point(g, x):
    """``Y(g^-1 x, x, g x)``."""
    return g.space.median(inverse(g)(x), x, g(x))


def displacement_b(g, x) -> Half:
    """Signed displacement at the projection ``u`` of ``x``: ``+d(u, gu)``
    when ``u`` lies strictly inside ``[g^-1 u, gu]`` and ``-d(u, gu)``
    otherwise."""
    space = g.space
    u = axis_point(g, x)
    gu, giu = g(u), inverse(g)(u)
    d = space.distance(u, gu)
    on_axis = gu != u and giu != u and space.between(giu, u, gu)
    return Half.of(d if on_axis else -d)


def length_at(g, x) -> Elem:
    return g.space.distance(x, g(x))


def displacement_b_formula(g, x) -> Half:
    """``b`` expanded from the based lengths of ``g``, ``g^-1`` and ``g^2``."""
    gi, g2 = inverse(g), compose(g, g)
    L2, Li = length_at(g2, x), length_at(gi, x)
    t = (gi.auto(L2) + L2) - (g2.auto(Li) + Li)
    return Half(t)


def a_formula(g, x) -> Half:
    gi, g2 = inverse(g), compose(g, g)
    return Half(length_at(g, x) + length_at(gi, x) - gi.auto(length_at(g2, x)))


def a_geometric(g, x) -> Elem:
    return g.space.distance(x, axis_point(g, x))


@dataclass(frozen=True)
class RadiusSpan:
    """An initial segment ``[0, sup]`` of the nonnegative cone described by
    finitely many upper bounds, or the whole cone."""

    bounds: tuple = ()
    unbounded: bool = False

    def contains(self, lam) -> bool:
        lam = lam if isinstance(lam, Half) else Half.of(lam)
        if lam.sign() < 0:
            return False
        if self.unbounded:
            return True
        return any(lam <= b for b in self.bounds)

    def bound(self):
        return None if self.unbounded or not self.bounds else max(self.bounds)

    def to_json(self):
        if self.unbounded:
            return {"kind": "unbounded"}
        return {"kind": "bounded", "bounds": [b.to_json() for b in self.bounds]}


def radius_r(g, x) -> RadiusSpan:
    """Right radius of the axis of ``g`` seen from ``x`` on a linear tree,
    where the axis is the whole line."""
    if not isinstance(g, AffineMap):
        raise AffineError("exact radius is available for linear trees only")
    if displacement_b(g, x).sign() <= 0:
        raise AffineError("the radius is defined when b is positive")
    return RadiusSpan(unbounded=True)


@dataclass(frozen=True)
class RadElliptic:
    witness: object
    radius: Half | Elem
    kind: str = field(default="elliptic", init=False)

    def to_json(self):
        return {"kind": self.kind, "witness": _point_json(self.witness), "radius": str(self.radius)}


@dataclass(frozen=True)
class NotElliptic:
    kind: str = field(default="not_elliptic", init=False)

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Unknown:
    bound: object
    kind: str = field(default="unknown", init=False)

    def to_json(self):
        return {"kind": self.kind, "bound": None if self.bound is None else str(self.bound)}


def solve_radius_equation(alpha: Automorphism, b: Half) -> SolutionSet:
    """Solutions ``lam`` in the group of ``(1 - alpha)(lam) = b``."""
    if not b.in_lambda:
        return NoSolution()
    return solve_displacement(alpha, 1, b.value())


def _radius_candidates(sol: SolutionSet) -> list[Elem]:
    if sol.is_empty():
        return []
    if isinstance(sol, Unique):
        return [sol.point]
    out = [sol.particular]
    if isinstance(sol.kernel, (Lattice, Whole)):
        for k in sol.kernel.generators():
            out.append(sol.particular + abs(k))
    return out


def elliptic_via_radius(g: AffineMap, x):
    """Decide whether ``g`` fixes a point using ``b`` at ``x`` and the
    right radii of ``g`` and ``g^-1``."""
    if not isinstance(g, AffineMap):
        raise AffineError("the exact radius criterion runs on linear trees")
    if displacement_b(g, x).sign() <= 0:
        raise AffineError("the radius criterion needs b(g) > 0 at the basepoint")
    undecided = False
    for h in (g, inverse(g)):
        b = displacement_b(h, x)
        rad = radius_r(h, x)
        u = axis_point(h, x)
        sol = solve_radius_equation(h.auto, b)
        if isinstance(sol, Family) and not isinstance(sol.kernel, Lattice):
            undecided = True
        for lam in _radius_candidates(sol):
            if not rad.contains(lam):
                continue
            y = u + lam if h(u) > u else u - lam
            if h(y) == y:
                return RadElliptic(y, lam)
            undecided = True
    return Unknown(None) if undecided else NotElliptic()

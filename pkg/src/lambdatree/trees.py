"""Lambda-tree point sets: linear trees, star trees and finite orbit spaces.

Only the metric is stored; segments are handled through the ``between`` and
``median`` predicates, never as point sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree

from ._values import ObjectCodec, equal, ranks, signs
from .oag import Descriptor, Elem, Half, descriptor_from_json, elem_from_json, zero


class TreeError(ValueError):
    """Points from different spaces, malformed coordinates, unsupported op."""


class TreeSpace:
    desc: Descriptor

    def distance(self, p, q):
        raise NotImplementedError

    def check(self, p) -> None:
        raise NotImplementedError

    def between(self, p, q, r) -> bool:
        """Whether ``q`` lies on the segment ``[p, r]``."""
        return self.distance(p, q) + self.distance(q, r) == self.distance(p, r)

    def gromov_product(self, p, q, v) -> Half:
        """``((p.q)_v)`` as an element of the half-divisible hull."""
        parts = [self.distance(p, v), self.distance(q, v), self.distance(p, q)]
        if any(isinstance(d, Half) for d in parts):
            raise TreeError("Gromov products are only defined for points with group-valued distances")
        return Half(parts[0] + parts[1] - parts[2])

    def median(self, p, q, r):
        raise TreeError(f"median is not available on {type(self).__name__}")


@dataclass(frozen=True)
class LinearTree(TreeSpace):
    """The group itself as a tree. Points are :class:`Elem` values, or
    :class:`Half` values for points of the barycentric subdivision."""

    desc: Descriptor

    def check(self, p) -> None:
        if not isinstance(p, (Elem, Half)) or p.desc != self.desc:
            raise TreeError(f"{p!r} is not a point of the linear tree over {self.desc}")

    def distance(self, p, q):
        self.check(p)
        self.check(q)
        if isinstance(p, Half) or isinstance(q, Half):
            h = abs(Half.of(p) - q if isinstance(p, Elem) else p - q)
            return h.value() if h.in_lambda else h
        return abs(p - q)

    def between(self, p, q, r) -> bool:
        self.check(p)
        self.check(q)
        self.check(r)
        return (p <= q <= r) or (r <= q <= p)

    def median(self, p, q, r):
        for x in (p, q, r):
            self.check(x)
        lo, mid, hi = sorted((p, q, r))
        return mid

    def point_on_segment(self, p, q, t):
        """The point of ``[p, q]`` at distance ``t`` from ``p``."""
        return p + t if p <= q else p - t

    def to_json(self):
        return {"type": "linear", "group": self.desc.to_json()}


@dataclass(frozen=True)
class StarPoint:
    ray: int
    r: Elem

    def __str__(self) -> str:
        return "origin" if self.ray == 0 else f"(ray{self.ray}, {self.r})"

    def to_json(self):
        return {"ray": self.ray, "r": self.r.to_json()}


@dataclass(frozen=True)
class StarTree(TreeSpace):
    """Finitely many copies of the nonnegative cone glued at 0.

    Rays are numbered ``1..rays``; the common origin has ray index 0.
    """

    desc: Descriptor
    rays: int

    def __post_init__(self):
        if not isinstance(self.rays, int) or self.rays < 1:
            raise TreeError("a star tree needs at least one ray")

    @property
    def origin(self) -> StarPoint:
        return StarPoint(0, zero(self.desc))

    def point(self, ray: int, r) -> StarPoint:
        if not isinstance(r, Elem):
            r = self.desc.elem(r)
        if r.desc != self.desc or r.sign() < 0:
            raise TreeError(f"star tree coordinates must be nonnegative elements of {self.desc}")
        if not r:
            return self.origin
        if not 1 <= ray <= self.rays:
            raise TreeError(f"ray index {ray} outside 1..{self.rays}")
        return StarPoint(ray, r)

    def check(self, p) -> None:
        if not isinstance(p, StarPoint) or p.r.desc != self.desc:
            raise TreeError(f"{p!r} is not a point of {self}")
        if p.r.sign() < 0 or (p.ray == 0) != (not p.r) or p.ray > self.rays:
            raise TreeError(f"{p!r} is not in canonical form")

    def distance(self, p, q) -> Elem:
        self.check(p)
        self.check(q)
        if p.ray == q.ray:
            return abs(p.r - q.r)
        return p.r + q.r

    def point_on_segment(self, p: StarPoint, q: StarPoint, t: Elem) -> StarPoint:
        if p.ray == q.ray or q.ray == 0:
            return self.point(p.ray, p.r + t if p.r <= q.r and q.ray else p.r - t)
        if p.ray == 0:
            return self.point(q.ray, t)
        if t <= p.r:
            return self.point(p.ray, p.r - t)
        return self.point(q.ray, t - p.r)

    def median(self, p, q, r) -> StarPoint:
        for x in (p, q, r):
            self.check(x)
        t = self.gromov_product(q, r, p).value()
        return self.point_on_segment(p, q, t)

    def to_json(self):
        return {"type": "star", "group": self.desc.to_json(), "rays": self.rays}


class OrbitSpace(TreeSpace):
    """A finite pseudometric space: labels plus a distance matrix.

    The matrix is a numpy array of exact values in the encoding of ``codec``
    (object arrays of elements, or scaled integer codes).
    """

    def __init__(self, desc: Descriptor, labels, matrix, codec=None):
        self.desc = desc
        self.labels = tuple(labels)
        self.codec = codec or ObjectCodec(desc)
        if not isinstance(matrix, np.ndarray):
            rows = [list(r) for r in matrix]
            matrix = np.empty((len(rows), len(rows)), dtype=object)
            for i, r in enumerate(rows):
                if len(r) != len(rows):
                    raise TreeError("distance matrix must be square")
                matrix[i, :] = r
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise TreeError("orbit space labels must be distinct")
        if matrix.shape != (n, n):
            raise TreeError("distance matrix must be square and match the labels")
        self.matrix = matrix
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, p) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise TreeError(f"unknown point label {p!r}") from None

    def check(self, p) -> None:
        self.index(p)

    def distance(self, p, q) -> Elem:
        return self.codec.decode(self.matrix[self.index(p), self.index(q)])

    def metric_violations(self, limit: int = 50) -> list[dict]:
        """Symmetry, zero diagonal and nonnegativity failures."""
        out = []
        M = self.matrix
        for i in np.nonzero(signs(np.diagonal(M).copy(), self.codec))[0]:
            out.append({"kind": "diagonal", "points": [self.labels[i]]})
        asym = ~equal(M, M.T)
        for i, j in zip(*np.nonzero(np.triu(asym, 1))):
            out.append({"kind": "symmetry", "points": [self.labels[i], self.labels[j]]})
        for i, j in zip(*np.nonzero(signs(M, self.codec) < 0)):
            out.append({"kind": "negative", "points": [self.labels[i], self.labels[j]]})
        return out[:limit]

    def with_entry(self, p, q, value: Elem) -> "OrbitSpace":
        """A copy with the distance between ``p`` and ``q`` replaced."""
        M = self.matrix.copy()
        i, j = self.index(p), self.index(q)
        M[i, j] = M[j, i] = self.codec.encode(value)
        return OrbitSpace(self.desc, self.labels, M, self.codec)

    def to_json(self):
        dec = self.codec.decode
        return {
            "type": "orbit",
            "group": self.desc.to_json(),
            "labels": list(self.labels),
            "matrix": [[dec(d).to_json() for d in row] for row in self.matrix],
        }

    @classmethod
    def from_json(cls, obj) -> "OrbitSpace":
        desc = descriptor_from_json(obj["group"])
        mat = [[elem_from_json(desc, d) for d in row] for row in obj["matrix"]]
        return cls(desc, obj["labels"], mat)


def space_from_json(obj) -> TreeSpace:
    kind = obj.get("type")
    if kind == "linear":
        return LinearTree(descriptor_from_json(obj["group"]))
    if kind == "star":
        return StarTree(descriptor_from_json(obj["group"]), int(obj["rays"]))
    if kind == "orbit":
        return OrbitSpace.from_json(obj)
    raise TreeError(f"unknown space type {kind!r}")


def distance(space: TreeSpace, p, q):
    return space.distance(p, q)


def between(space: TreeSpace, p, q, r) -> bool:
    return space.between(p, q, r)


def median(space: TreeSpace, p, q, r):
    return space.median(p, q, r)


def gromov_product(space: TreeSpace, p, q, v) -> Half:
    return space.gromov_product(p, q, v)


# ---------------------------------------------------------------------------
# 0-hyperbolicity certification


@dataclass
class CertReport:
    ok: bool
    points: int
    triples: list = field(default_factory=list)
    non_integral: list = field(default_factory=list)
    metric: list = field(default_factory=list)
    mode: str = "exhaustive"

    def to_json(self):
        return {
            "check": "zero_hyperbolic",
            "status": "pass" if self.ok else "fail",
            "points": self.points,
            "mode": self.mode,
            "violating_triples": self.triples,
            "non_integral_pairs": self.non_integral,
            "metric_violations": self.metric,
        }


def maxmin_violations(G: np.ndarray, limit: int | None = None) -> list[tuple[int, int, int]]:
    """Triples ``(x, y, z)`` with ``G[x,y] < min(G[x,z], G[z,y])``.

    ``G`` is a symmetric integer matrix (ranks). The condition over all triples
    holds exactly when every off-diagonal entry equals the bottleneck value of
    the best path between its endpoints, which a maximum spanning tree
    exposes. One witness triple is returned per violating pair; triples with a
    repeated index reduce to the bound ``G[x,y] <= min(G[x,x], G[y,y])``.
    """
    n = G.shape[0]
    out: list[tuple[int, int, int]] = []
    if n == 0:
        return out
    diag = np.diagonal(G)
    bad = np.triu(G > np.minimum(diag[:, None], diag[None, :]), 1)
    for x, y in zip(*np.nonzero(bad)):
        x, y = int(x), int(y)
        z, w = (x, y) if G[x, x] < G[x, y] else (y, x)
        # (z, z) against (z, w): G[z,z] < min(G[z,w], G[w,z])
        out.append((z, z, w))
        if limit and len(out) >= limit:
            return out
    if n == 1:
        return out

    top = int(G.max()) + 1
    W = np.triu(top - G, 1).astype(np.float64)
    mst = minimum_spanning_tree(W).tocoo()
    edges = sorted(zip(mst.row.tolist(), mst.col.tolist()), key=lambda e: G[e[0], e[1]], reverse=True)
    if len(edges) != n - 1:
        raise AssertionError("spanning tree is disconnected")
    parent = list(range(n))
    members = {i: [i] for i in range(n)}
    adj: dict[int, list[int]] = {i: [] for i in range(n)}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        wt = G[a, b]
        ra, rb = find(a), find(b)
        A, B = members[ra], members[rb]
        sub = G[np.ix_(A, B)]
        if (sub != wt).any():
            for ia, ib in zip(*np.nonzero(sub != wt)):
                out.append(_path_witness(G, adj, A[ia], B[ib], a, b))
                if limit and len(out) >= limit:
                    return out
        adj[a].append(b)
        adj[b].append(a)
        if len(A) < len(B):
            ra, rb, A, B = rb, ra, B, A
        parent[rb] = ra
        A.extend(B)
        del members[rb]
    return out


def _path_witness(G, adj, x, y, a, b) -> tuple[int, int, int]:
    """A violating triple on the spanning-tree path ``x .. a - b .. y``, all of
    whose edges exceed ``G[x, y]``."""
    path = _tree_path(adj, x, a) + _tree_path(adj, b, y)
    target = G[x, y]
    prev = path[0]
    for z in path[1:]:
        if G[x, z] <= target:
            # G[x, prev] > target >= G[x, z] and G[prev, z] > target
            return (int(x), int(z), int(prev))
        prev = z
    raise AssertionError("no witness along the spanning-tree path")


def _tree_path(adj, s: int, t: int) -> list[int]:
    if s == t:
        return [s]
    prev = {s: None}
    stack = [s]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in prev:
                prev[v] = u
                stack.append(v)
    out = [t]
    while out[-1] != s:
        out.append(prev[out[-1]])
    return out[::-1]


def exhaustive_violations(G: np.ndarray, limit: int | None = None) -> list[tuple[int, int, int]]:
    """All triples ``(x, y, z)`` with ``G[x,y] < min(G[x,z], G[z,y])``."""
    out = []
    n = G.shape[0]
    for z in range(n):
        m = np.minimum(G[:, z][:, None], G[z, :][None, :])
        for x, y in zip(*np.nonzero(G < m)):
            out.append((int(x), int(y), z))
            if limit and len(out) >= limit:
                return out
    out.sort()
    return out


def twice_gromov_matrix(space: TreeSpace, points: list, base) -> tuple[np.ndarray, object]:
    """``2 (x.y)_base`` for all pairs, with the codec of the entries."""
    if isinstance(space, OrbitSpace):
        idx = np.array([space.index(p) for p in points])
        M = space.matrix[np.ix_(idx, idx)]
        dv = space.matrix[idx, space.index(base)]
        return dv[:, None] + dv[None, :] - M, space.codec
    codec = ObjectCodec(space.desc)
    n = len(points)
    dv = codec.array([space.distance(p, base) for p in points])
    M = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            M[i, j] = M[j, i] = space.distance(points[i], points[j])
    return dv[:, None] + dv[None, :] - M, codec


def certify_zero_hyperbolic(space: TreeSpace, points: list, base, exhaustive: bool | None = None,
                            limit: int = 1000) -> CertReport:
    """Check that every Gromov product based at ``base`` lies in the group and
    that ``(x.y) >= min((x.z), (y.z))`` for all triples of ``points``.

    With ``exhaustive`` every violating triple is listed (up to ``limit``);
    otherwise one witness per violating pair is reported. The default is
    exhaustive for at most 60 points.
    """
    pts = list(points)
    if len(pts) < 3:
        raise TreeError("0-hyperbolicity certification needs at least 3 points")
    n = len(pts)
    if exhaustive is None:
        exhaustive = n <= 60
    labels = [_label(p) for p in pts]
    report = CertReport(ok=True, points=n, mode="exhaustive" if exhaustive else "spanning_tree")
    if isinstance(space, OrbitSpace):
        report.metric = space.metric_violations()
    T, codec = twice_gromov_matrix(space, pts, base)
    R, _, distinct = ranks(T, codec)
    odd = [r for r, v in enumerate(distinct) if v.halve() is None]
    if odd:
        for i, j in zip(*np.nonzero(np.triu(np.isin(R, odd)))):
            report.non_integral.append([labels[i], labels[j]])
            if len(report.non_integral) >= limit:
                break
    if not equal(T, T.T).all():
        exhaustive = True
        report.mode = "exhaustive"
    finder = exhaustive_violations if exhaustive else maxmin_violations
    report.triples = [[labels[x], labels[y], labels[z]] for x, y, z in finder(R, limit)]
    report.ok = not (report.triples or report.non_integral or report.metric)
    return report


def _label(p) -> str:
    return p if isinstance(p, str) else str(p)

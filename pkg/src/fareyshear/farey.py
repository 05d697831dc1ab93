"""Combinatorics of the Farey tessellation of the upper half-plane.

Vertices are reduced fractions p/q with q >= 0 (1/0 is infinity); two
vertices span an edge iff |p q' - q p'| = 1.  The base triangle is
(0, 1, inf) and everything else is produced by mediants on the dual tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional
from fractions import Fraction
from math import gcd

from .errors import DepthLimit, NotNeighbors, UnknownTriangle, ValidationError
from .geom import INF, MobiusMap, cyclic_sign, is_exact

DEPTH_GUARD = 30


def _normalize(p: int, q: int) -> tuple[int, int]:
    if q < 0 or (q == 0 and p < 0):
        return -p, -q
    return p, q


@dataclass(frozen=True, slots=True)
class FareyVertex:
    p: int
    q: int

    def __post_init__(self):
        if self.q < 0:
            raise ValidationError(f"negative denominator in {self.p}/{self.q}")
        if self.q == 0:
            if self.p != 1:
                raise ValidationError("infinity must be written 1/0")
        elif gcd(self.p, self.q) != 1:
            raise ValidationError(f"unreduced vertex {self.p}/{self.q}")

    @classmethod
    def of(cls, x) -> "FareyVertex":
        if isinstance(x, FareyVertex):
            return x
        if x is INF:
            return INFINITY
        if isinstance(x, tuple):
            return cls(*_normalize(*x))
        if not is_exact(x):
            raise ValidationError(f"{x!r} is not rational")
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def value(self):
        """Exact boundary point: an int, a Fraction, or INF."""
        if self.q == 0:
            return INF
        if self.q == 1:
            return self.p
        return Fraction(self.p, self.q)

    def sort_key(self):
        return (1, 0) if self.q == 0 else (0, Fraction(self.p, self.q))

    def __lt__(self, other: "FareyVertex") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.q == 0:
            return "inf"
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"

    def __repr__(self):
        return f"FareyVertex({self})"


INFINITY = FareyVertex(1, 0)
ZERO = FareyVertex(0, 1)
ONE = FareyVertex(1, 1)


def is_unimodular(u: FareyVertex, v: FareyVertex) -> bool:
    return abs(u.p * v.q - u.q * v.p) == 1


def mediant(a: FareyVertex, b: FareyVertex) -> FareyVertex:
    if not is_unimodular(a, b):
        raise NotNeighbors(f"{a} and {b} are not Farey neighbours")
    return FareyVertex(*_normalize(a.p + b.p, a.q + b.q))


def _difference(a: FareyVertex, b: FareyVertex) -> FareyVertex:
    return FareyVertex(*_normalize(a.p - b.p, a.q - b.q))


@dataclass(frozen=True, slots=True)
class Edge:
    """A Farey edge; endpoints in canonical order (smaller finite first)."""

    a: FareyVertex
    b: FareyVertex

    def __post_init__(self):
        if not is_unimodular(self.a, self.b):
            raise NotNeighbors(f"non-unimodular/unreduced edge ({self.a}, {self.b})")
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @classmethod
    def of(cls, u, v) -> "Edge":
        return cls(FareyVertex.of(u), FareyVertex.of(v))

    @property
    def endpoints(self) -> tuple[FareyVertex, FareyVertex]:
        return (self.a, self.b)

    def third_vertices(self) -> tuple[FareyVertex, FareyVertex]:
        """Third vertices of the two triangles adjacent to this edge."""
        return mediant(self.a, self.b), _difference(self.a, self.b)

    def sort_key(self):
        # file order: by (q, p) of the smaller endpoint, infinity last
        def k(v):
            return (1, 0, 0) if v.q == 0 else (0, v.q, v.p)

        return (k(self.a), k(self.b))

    def __str__(self):
        return f"({self.a}, {self.b})"


@dataclass(frozen=True, slots=True)
class Triangle:
    v1: FareyVertex
    v2: FareyVertex
    v3: FareyVertex

    def __post_init__(self):
        vs = sorted((self.v1, self.v2, self.v3))
        for x, y in ((vs[0], vs[1]), (vs[1], vs[2]), (vs[0], vs[2])):
            if not is_unimodular(x, y):
                raise NotNeighbors(f"({x}, {y}) is not a Farey edge")
        object.__setattr__(self, "v1", vs[0])
        object.__setattr__(self, "v2", vs[1])
        object.__setattr__(self, "v3", vs[2])

    @classmethod
    def of(cls, x, y, z) -> "Triangle":
        return cls(FareyVertex.of(x), FareyVertex.of(y), FareyVertex.of(z))

    @property
    def vertices(self) -> tuple[FareyVertex, FareyVertex, FareyVertex]:
        return (self.v1, self.v2, self.v3)

    @property
    def edges(self) -> tuple[Edge, Edge, Edge]:
        return (Edge(self.v1, self.v2), Edge(self.v2, self.v3), Edge(self.v1, self.v3))

    def opposite(self, edge: Edge) -> FareyVertex:
        for v in self.vertices:
            if v != edge.a and v != edge.b:
                return v
        raise ValidationError(f"{edge} is not a side of {self}")

    def __str__(self):
        return f"({self.v1}, {self.v2}, {self.v3})"


BASE_TRIANGLE = Triangle(ZERO, ONE, INFINITY)


def reflect(tri: Triangle, edge: Edge) -> Triangle:
    """The triangle on the other side of ``edge``."""
    w = tri.opposite(edge)
    m, d = edge.third_vertices()
    return Triangle(edge.a, edge.b, d if m == w else m)


def left_oriented(edge: Edge, side: FareyVertex) -> tuple[FareyVertex, FareyVertex]:
    """Endpoints of ``edge`` ordered so that ``side`` lies to the left."""
    if cyclic_sign(edge.a.value, edge.b.value, side.value) > 0:
        return edge.a, edge.b
    return edge.b, edge.a


# --------------------------------------------------------------------------
# tessellation


@dataclass
class Tessellation:
    depth: int
    triangles: list[Triangle]
    parent: dict[Triangle, tuple[Triangle, Edge]]
    level: dict[Triangle, int]
    edges: list[Edge] = field(default_factory=list)
    vertices: list[FareyVertex] = field(default_factory=list)
    _interior: Optional[set] = field(default=None, repr=False, compare=False)

    def __contains__(self, tri) -> bool:
        return tri in self.level

    def interior_edges(self) -> list[Edge]:
        """Edges whose two adjacent triangles both lie in the tessellation."""
        return [self.parent[t][1] for t in self.triangles[1:]]

    def is_interior(self, edge: Edge) -> bool:
        if self._interior is None:
            self._interior = set(self.interior_edges())
        return edge in self._interior

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=Edge.sort_key)


def _check_depth(depth: int, guard: int = DEPTH_GUARD):
    if depth < 0:
        raise ValidationError("depth must be nonnegative")
    if depth > guard:
        raise DepthLimit(f"depth {depth} exceeds guard {guard}")


def tessellation_to_depth(depth: int, guard: int = DEPTH_GUARD) -> Tessellation:
    """All triangles within ``depth`` dual-tree steps of (0, 1, inf), in
    breadth-first order."""
    _check_depth(depth, guard)
    triangles = [BASE_TRIANGLE]
    level = {BASE_TRIANGLE: 0}
    parent: dict[Triangle, tuple[Triangle, Edge]] = {}
    edges = list(BASE_TRIANGLE.edges)
    vertices = list(BASE_TRIANGLE.vertices)
    queue = deque([BASE_TRIANGLE])
    while queue:
        tri = queue.popleft()
        if level[tri] == depth:
            continue
        came_from = parent[tri][1] if tri in parent else None
        for e in tri.edges:
            if e == came_from:
                continue
            child = reflect(tri, e)
            if child in level:
                raise ValidationError(f"dual graph has a cycle at {child}")
            level[child] = level[tri] + 1
            parent[child] = (tri, e)
            triangles.append(child)
            new = child.opposite(e)
            vertices.append(new)
            edges.append(Edge(e.a, new))
            edges.append(Edge(e.b, new))
            queue.append(child)
    return Tessellation(depth, triangles, parent, level, edges, vertices)


def dual_path(tri: Triangle, tess: Tessellation) -> list[Edge]:
    """Edges crossed on the way from the base triangle to ``tri``."""
    if tri not in tess:
        raise UnknownTriangle(f"{tri} is not in the depth-{tess.depth} tessellation")
    path = []
    while tri in tess.parent:
        tri, e = tess.parent[tri]
        path.append(e)
    path.reverse()
    return path


def _in_closed_arc(t, x, y, z) -> bool:
    """Is t on the closed arc from x to y that avoids z?"""
    if t == x or t == y:
        return True
    return cyclic_sign(x.value, t.value, y.value) != cyclic_sign(x.value, z.value, y.value)


def path_to(target: Triangle) -> list[tuple[Triangle, Edge]]:
    """Walk the dual tree from the base triangle to ``target`` without
    building a tessellation.  Returns (triangle, crossed edge) pairs where
    ``triangle`` is the one being left."""
    path = []
    tri, came_from = BASE_TRIANGLE, None
    while tri != target:
        for e in tri.edges:
            if e == came_from:
                continue
            z = tri.opposite(e)
            if all(_in_closed_arc(t, e.a, e.b, z) for t in target.vertices):
                path.append((tri, e))
                tri, came_from = reflect(tri, e), e
                break
        else:  # pragma: no cover - every Farey triangle is reachable
            raise UnknownTriangle(f"cannot reach {target}")
    return path


def farey_parents(v: FareyVertex) -> tuple[FareyVertex, FareyVertex]:
    """The two older neighbours spanning the edge across which ``v`` first
    appears (their mediant, or their difference for negative integers)."""
    if v in (ZERO, ONE, INFINITY):
        raise ValidationError(f"{v} is a vertex of the base triangle")
    if v.q == 1:
        return (FareyVertex(v.p - 1, 1), INFINITY) if v.p > 1 else (FareyVertex(v.p + 1, 1), INFINITY)
    b = pow(v.p, -1, v.q)
    a = (v.p * b - 1) // v.q
    return FareyVertex(a, b), FareyVertex(v.p - a, v.q - b)


def anchor_triangle(v: FareyVertex) -> Triangle:
    """The triangle closest to the base triangle having ``v`` as a vertex."""
    if v in (ZERO, ONE, INFINITY):
        return BASE_TRIANGLE
    left, right = farey_parents(v)
    return Triangle(left, v, right)


# --------------------------------------------------------------------------
# integer Mobius action and fans


def act(m: MobiusMap, v: FareyVertex) -> FareyVertex:
    """Image of a vertex under an integer unimodular map."""
    return FareyVertex(*_normalize(m.a * v.p + m.b * v.q, m.c * v.p + m.d * v.q))


def act_edge(m: MobiusMap, e: Edge) -> Edge:
    return Edge(act(m, e.a), act(m, e.b))


def _conjugator_inverse(tip: FareyVertex) -> tuple[int, int, int, int]:
    """Entries of the integer map sending (inf, 0, 1) to (tip, u, w), where
    (tip, u, w) is the anchor triangle read in positive cyclic order."""
    tri = anchor_triangle(tip)
    others = [v for v in tri.vertices if v != tip]
    P0, P1 = tip.p, tip.q
    for u, w in (others, others[::-1]):
        for sign in (1, -1):
            U0, U1 = sign * u.p, sign * u.q
            if P0 * U1 - U0 * P1 != 1:
                continue
            if FareyVertex(*_normalize(P0 + U0, P1 + U1)) == w:
                return P0, U0, P1, U1
    raise AssertionError(f"no unimodular frame at {tip}")  # pragma: no cover


def canonical_conjugator(tip: FareyVertex) -> MobiusMap:
    """Integer map with tip -> inf taking the anchor triangle at ``tip`` to
    (0, 1, inf)."""
    P0, U0, P1, U1 = _conjugator_inverse(tip)
    return MobiusMap(U1, -U0, -P1, P0)


@dataclass(frozen=True)
class Fan:
    tip: FareyVertex
    k_min: int
    k_max: int
    edges: tuple[Edge, ...]
    conjugator: MobiusMap

    def __getitem__(self, k: int) -> Edge:
        if not self.k_min <= k <= self.k_max:
            raise IndexError(k)
        return self.edges[k - self.k_min]

    def indices(self) -> range:
        return range(self.k_min, self.k_max + 1)


def fan_vertex(tip: FareyVertex, k: int, frame=None) -> FareyVertex:
    """Other endpoint of the k-th fan edge at ``tip``."""
    P0, U0, P1, U1 = frame or _conjugator_inverse(tip)
    return FareyVertex(*_normalize(P0 * k + U0, P1 * k + U1))


def fan_window(tip: FareyVertex, k_min: int, k_max: int) -> Fan:
    """Fan edges f_k, k_min <= k <= k_max, at ``tip``.

    After the canonical conjugation f_k becomes the vertical line at k;
    f_0 and f_1 bound the anchor triangle.
    """
    if k_min > k_max:
        raise ValidationError("empty fan window")
    frame = _conjugator_inverse(tip)
    edges = tuple(Edge(tip, fan_vertex(tip, k, frame)) for k in range(k_min, k_max + 1))
    return Fan(tip, k_min, k_max, edges, canonical_conjugator(tip))


def fan_index(tip: FareyVertex, edge: Edge) -> int:
    """Index of ``edge`` in the fan at ``tip``."""
    if tip not in edge.endpoints:
        raise ValidationError(f"{edge} does not end at {tip}")
    other = edge.b if edge.a == tip else edge.a
    x = act(canonical_conjugator(tip), other)
    assert x.q == 1
    return x.p

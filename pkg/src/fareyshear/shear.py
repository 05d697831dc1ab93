"""Shear functions on the Farey tessellation and the maps they develop into.

Conventions (half-plane, base triangle (0, 1, inf)):

* the translation across a crossed edge is taken along the edge oriented
  with the base-triangle side on its left, and a nonnegative shear makes
  the initial endpoint repelling;
* the shear of an image pair, seen from a tip sent to infinity by an
  orientation-preserving map, is log(right gap / left gap);
* fan edges f_k at a tip are indexed by ``farey.fan_window``; the arc
  delta_k lies between f_k and f_{k+1}, so delta_k / delta_{k-1} = e^{s(f_k)}.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath

from .errors import (
    ConsistencyFailure,
    MissingVertexImage,
    NotFareyAutomorphism,
    OrderViolation,
    ValidationError,
    WindowExceedsDepth,
)
from .farey import (
    BASE_TRIANGLE,
    INFINITY,
    Edge,
    FareyVertex,
    Tessellation,
    Triangle,
    _conjugator_inverse,
    act_edge,
    anchor_triangle,
    fan_vertex,
    left_oriented,
    path_to,
    reflect,
    tessellation_to_depth,
)
from .geom import (
    DEFAULT_PREC,
    INF,
    Horocycle,
    MobiusMap,
    OrientedGeodesic,
    cyclic_sign,
    horocycle_conjugator,
    horocyclic_arc_length,
    is_exact,
    mobius_apply,
    to_mpf,
    translation_matrix,
)

CONSISTENCY_TOL = 1e-10
WINDOW_GUARD = 10_000


def _num(x):
    """Shear values: keep exact rationals exact, everything else -> mpf."""
    if is_exact(x):
        return x
    return to_mpf(x)


def _exp(x):
    return 1 if x == 0 else mpmath.exp(to_mpf(x))


def _div(a, b):
    if is_exact(a) and is_exact(b):
        q = Fraction(a) / Fraction(b)
        return q.numerator if q.denominator == 1 else q
    return to_mpf(a) / to_mpf(b)


def _close(x, y, tol) -> bool:
    if x is INF or y is INF:
        return x is y
    if is_exact(x) and is_exact(y) and x == y:
        return True
    x, y = to_mpf(x), to_mpf(y)
    return abs(x - y) <= tol * max(1, abs(x), abs(y))


class Neumaier:
    """Compensated running sum."""

    __slots__ = ("s", "c")

    def __init__(self, start=0):
        self.s = start
        self.c = 0

    def add(self, x):
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self):
        return self.s + self.c


# --------------------------------------------------------------------------
# shear functions


class ShearFunction:
    """A real function on Farey edges.

    Lookup order: explicit ``table`` entry, then ``rule(edge)`` if given,
    then ``default``.
    """

    def __init__(self, table: Optional[Mapping] = None, default=0,
                 rule: Optional[Callable[[Edge], object]] = None):
        self.table = {}
        for e, v in (table or {}).items():
            if not isinstance(e, Edge):
                raise ValidationError(f"table key {e!r} is not an Edge")
            self.table[e] = v
        self.default = default
        self.rule = rule

    @classmethod
    def zero(cls) -> "ShearFunction":
        return cls()

    @classmethod
    def on_fan(cls, tip: FareyVertex, values: Mapping[int, object]) -> "ShearFunction":
        """Shears given by fan index at ``tip``; zero elsewhere."""
        frame = _conjugator_inverse(tip)
        return cls({Edge(tip, fan_vertex(tip, k, frame)): v for k, v in values.items()})

    def __call__(self, edge: Edge):
        v = self.table.get(edge)
        if v is not None:
            return v
        if self.rule is not None:
            return self.rule(edge)
        return self.default

    @property
    def is_finitely_supported(self) -> bool:
        return self.rule is None and self.default == 0

    def support(self) -> list[Edge]:
        return sorted((e for e, v in self.table.items() if v != 0), key=Edge.sort_key)

    def __repr__(self):
        extra = ", rule" if self.rule is not None else ""
        return f"ShearFunction({len(self.table)} entries, default={self.default}{extra})"


def pullback(s: ShearFunction, A: MobiusMap) -> ShearFunction:
    """(s o A)(f) = s(A f) for A in PSL(2, Z)."""
    if not (A.is_integral and A.det == 1):
        raise NotFareyAutomorphism(f"{A.entries()} is not an integer unimodular matrix")
    inv = A.inverse()
    table = {act_edge(inv, e): v for e, v in s.table.items()}
    rule = None
    if s.rule is not None:
        base_rule = s.rule
        rule = lambda e: base_rule(act_edge(A, e))  # noqa: E731
    return ShearFunction(table, s.default, rule)


def _mirror_edge(e: Edge) -> Edge:
    return Edge(FareyVertex.of(-Fraction(e.a.p, e.a.q)) if e.a.q else INFINITY,
                FareyVertex.of(-Fraction(e.b.p, e.b.q)) if e.b.q else INFINITY)


def mirror(s: ShearFunction) -> ShearFunction:
    """Shears of the map conjugated by x -> -x: s'(f) = -s(-f)."""
    table = {_mirror_edge(e): -_num(v) for e, v in s.table.items()}
    rule = None
    if s.rule is not None:
        base_rule = s.rule
        rule = lambda e: -_num(base_rule(_mirror_edge(e)))  # noqa: E731
    return ShearFunction(table, -_num(s.default), rule)


# --------------------------------------------------------------------------
# developing map


@dataclass
class DevelopedMap:
    """Images of the Farey vertices up to some depth."""

    images: dict
    depth: Optional[int]
    precision: int = DEFAULT_PREC
    normalization: tuple = (0, 1, INF)

    def __getitem__(self, v: FareyVertex):
        try:
            return self.images[v]
        except KeyError:
            raise MissingVertexImage(f"no image for vertex {v}") from None

    def __call__(self, v: FareyVertex):
        return self[v]

    def __contains__(self, v) -> bool:
        return v in self.images

    def __len__(self):
        return len(self.images)

    def vertices(self) -> list[FareyVertex]:
        return sorted(self.images)

    def is_identity(self) -> bool:
        return all(is_exact(x) or x is INF for x in self.images.values()) and all(
            self.images[v] == v.value if v.q else self.images[v] is INF for v in self.images
        )

    def check_order(self):
        """Raise OrderViolation unless finite images increase strictly."""
        prev_v = prev_x = None
        for v in self.vertices():
            x = self.images[v]
            if v.is_infinite:
                if x is not INF:
                    raise OrderViolation(f"image of inf is {x}, expected inf")
                continue
            if x is INF:
                raise OrderViolation(f"finite vertex {v} maps to inf")
            if prev_x is not None and not to_mpf(x) > to_mpf(prev_x):
                raise OrderViolation(f"images of {prev_v} and {v} are out of order",
                                     (prev_v, v))
            prev_v, prev_x = v, x

    def is_order_preserving(self) -> bool:
        try:
            self.check_order()
        except OrderViolation:
            return False
        return True


class _Developer:
    """Composes translations along dual-tree paths, memoized per triangle."""

    def __init__(self, s: ShearFunction):
        self.s = s
        self.maps: dict[Triangle, Optional[MobiusMap]] = {BASE_TRIANGLE: None}

    def child(self, parent: Triangle, edge: Edge) -> Optional[MobiusMap]:
        m = self.maps[parent]
        a = self.s(edge)
        if a == 0:
            return m
        u, v = left_oriented(edge, parent.opposite(edge))
        T = translation_matrix(OrientedGeodesic(u.value, v.value), _num(a))
        return T if m is None else m @ T

    def map_for(self, tri: Triangle) -> Optional[MobiusMap]:
        if tri not in self.maps:
            for parent, edge in path_to(tri):
                nxt = reflect(parent, edge)
                if nxt not in self.maps:
                    self.maps[nxt] = self.child(parent, edge)
        return self.maps[tri]

    @staticmethod
    def apply(m: Optional[MobiusMap], v: FareyVertex):
        return v.value if m is None else mobius_apply(m, v.value)


def develop(s: ShearFunction, depth: int, prec: int = DEFAULT_PREC,
            tess: Optional[Tessellation] = None, tol: float = CONSISTENCY_TOL) -> DevelopedMap:
    """Develop ``s`` over every triangle within ``depth`` of the base.

    Each triangle gets the composite of the translations crossed on its
    dual path; the two vertices it shares with its parent are recomputed
    and must agree with the images already recorded.
    """
    if tess is None:
        tess = tessellation_to_depth(depth)
    with mpmath.workprec(prec):
        dev = _Developer(s)
        images = {v: v.value for v in BASE_TRIANGLE.vertices}
        for tri in tess.triangles[1:]:
            parent, edge = tess.parent[tri]
            m = dev.child(parent, edge)
            dev.maps[tri] = m
            for v in tri.vertices:
                x = dev.apply(m, v)
                if v in images:
                    if not _close(images[v], x, tol):
                        raise ConsistencyFailure(
                            f"vertex {v}: {images[v]} from one side, {x} from triangle {tri}")
                else:
                    images[v] = x
    return DevelopedMap(images, tess.depth, prec)


def develop_vertices(s: ShearFunction, vertices, prec: int = DEFAULT_PREC) -> dict:
    """Images of selected vertices, each developed along the dual path to
    its anchor triangle (no tessellation is built)."""
    out = {}
    with mpmath.workprec(prec):
        dev = _Developer(s)
        for v in vertices:
            v = FareyVertex.of(v)
            out[v] = dev.apply(dev.map_for(anchor_triangle(v)), v)
    return out


# --------------------------------------------------------------------------
# shear extraction


def _evaluate(h, v: FareyVertex):
    if isinstance(h, (DevelopedMap, Mapping)):
        try:
            return h[v]
        except KeyError:
            raise MissingVertexImage(f"no image for vertex {v}") from None
    return h(v)


def _endpoint_shear(t, o, wa, wb):
    """Shear at the image edge (t, o) seen from a horocycle at t; wa, wb are
    the images of the two opposite vertices."""
    conj = horocycle_conjugator(t)
    xo = mobius_apply(conj, o)
    xa = mobius_apply(conj, wa)
    right, left = (wa, wb) if cyclic_sign(xo, xa, INF) > 0 else (wb, wa)
    h = Horocycle(t)
    d_right = horocyclic_arc_length(h, (t, o), (t, right))
    d_left = horocyclic_arc_length(h, (t, o), (t, left))
    ratio = _div(d_right, d_left)
    if is_exact(ratio):
        return 0 if ratio == 1 else mpmath.log(to_mpf(ratio))
    return mpmath.log(ratio)


def shear_from_map(h, f: Edge, tess: Optional[Tessellation] = None,
                   tol: float = CONSISTENCY_TOL, prec: int = DEFAULT_PREC):
    """Shear of the image of ``f`` under a vertex map ``h``.

    ``h`` is a DevelopedMap, a mapping FareyVertex -> point, or a callable
    on FareyVertex.  Computed at both endpoints of h(f); the two values
    must agree within ``tol``.
    """
    if tess is not None and not tess.is_interior(f):
        raise MissingVertexImage(f"{f} is not interior to the depth-{tess.depth} tessellation")
    w1, w2 = f.third_vertices()
    quad = (f.a, w1, f.b, w2)
    with mpmath.workprec(prec):
        img = {v: _evaluate(h, v) for v in quad}
        for i in range(4):
            for j in range(i + 1, 4):
                for k in range(j + 1, 4):
                    x, y, z = quad[i], quad[j], quad[k]
                    dom = cyclic_sign(x.value, y.value, z.value)
                    if cyclic_sign(img[x], img[y], img[z]) != dom:
                        raise OrderViolation(
                            f"images of {tuple(str(q) for q in quad)} are not in cyclic order",
                            quad)
        sa = _endpoint_shear(img[f.a], img[f.b], img[w1], img[w2])
        sb = _endpoint_shear(img[f.b], img[f.a], img[w1], img[w2])
        if not (sa == sb or abs(to_mpf(sa) - to_mpf(sb)) <= tol):
            raise ConsistencyFailure(f"shear of {f}: {sa} at one end, {sb} at the other")
    return sa


# --------------------------------------------------------------------------
# single fan at infinity


def fan_edge_at_infinity(n: int) -> Edge:
    return Edge(FareyVertex(n, 1), INFINITY)


class SingleFanMap:
    """The developed map of a shear function supported on the fan at inf,
    in closed form: increasing, piecewise affine with breaks at the
    integers, identity on [0, 1]."""

    def __init__(self, s: ShearFunction, prec: int = DEFAULT_PREC):
        self.s = s
        self.prec = prec
        self._node = {0: 0, 1: 1}
        self._delta = {0: 1}
        self._hi = 0  # largest n with delta[n] known
        self._lo = 0

    def shear(self, n: int):
        return _num(self.s(fan_edge_at_infinity(n)))

    def delta(self, n: int):
        """Length of [h(n), h(n+1)]."""
        with mpmath.workprec(self.prec):
            while n > self._hi:
                k = self._hi + 1
                self._delta[k] = self._delta[k - 1] * _exp(self.shear(k))
                self._node[k + 1] = self._node[k] + self._delta[k]
                self._hi = k
            while n < self._lo:
                k = self._lo - 1
                self._delta[k] = self._delta[k + 1] * _exp(-self.shear(k + 1))
                self._node[k] = self._node[k + 1] - self._delta[k]
                self._lo = k
        return self._delta[n]

    def node(self, n: int):
        self.delta(n)
        return self._node[n]

    def __call__(self, x):
        if isinstance(x, FareyVertex):
            x = x.value
        if x is INF:
            return INF
        n = math.floor(x) if is_exact(x) else int(mpmath.floor(x))
        d = self.delta(n)
        base = self._node[n]
        if x == n:
            return base
        with mpmath.workprec(self.prec):
            if is_exact(x) and is_exact(d) and is_exact(base):
                return base + (Fraction(x) - n) * d
            return to_mpf(base) + (to_mpf(x) - n) * to_mpf(d)


def single_fan_map(s: ShearFunction, x, prec: int = DEFAULT_PREC):
    return SingleFanMap(s, prec)(x)


# --------------------------------------------------------------------------
# horocyclic arcs in a fan


@dataclass
class FanDeltas:
    tip: FareyVertex
    k_min: int
    deltas: list
    scale: object = 1

    def __getitem__(self, k: int):
        return self.deltas[k - self.k_min]

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.deltas) - 1


def _recurrence_deltas(shears: dict, k_min: int, k_max: int) -> dict:
    d = {0: 1}
    for k in range(1, max(k_max, 0) + 1):
        d[k] = d[k - 1] * _exp(shears[k])
    for k in range(-1, min(k_min, 0) - 1, -1):
        d[k] = d[k + 1] * _exp(-shears[k + 1])
    return d


def fan_deltas(s: ShearFunction, tip: FareyVertex, k_min: int, k_max: int,
               depth: Optional[int] = None, developed: Optional[DevelopedMap] = None,
               prec: int = DEFAULT_PREC, tol: float = 1e-9) -> FanDeltas:
    """Image-side horocyclic arcs delta_k, k_min <= k <= k_max, normalized
    so delta_0 = 1.

    Computed by the shear recurrence and directly from the developed
    vertices; the two must agree within ``tol`` (relative).
    """
    if developed is None:
        if depth is None:
            raise ValidationError("need a depth or a developed map")
        developed = develop(s, depth, prec)
    frame = _conjugator_inverse(tip)
    lo, hi = min(k_min, 0), max(k_max, 0) + 1
    ks = range(lo, hi + 1)
    verts = {k: fan_vertex(tip, k, frame) for k in ks}
    missing = [str(v) for v in [tip, *verts.values()] if v not in developed]
    if missing:
        raise WindowExceedsDepth(
            f"fan window [{k_min}, {k_max}] at {tip} needs vertices {', '.join(missing[:5])} "
            f"beyond depth {developed.depth}")
    with mpmath.workprec(prec):
        shears = {k: _num(s(Edge(tip, verts[k]))) for k in ks}
        rec = _recurrence_deltas(shears, k_min, k_max)
        t = developed[tip]
        hc = Horocycle(t)
        raw = {k: horocyclic_arc_length(hc, (t, developed[verts[k]]), (t, developed[verts[k + 1]]))
               for k in range(lo, hi)}
        direct = {k: _div(raw[k], raw[0]) for k in raw}
        for k in range(k_min, k_max + 1):
            if not _close(rec[k], direct[k], tol):
                raise ConsistencyFailure(
                    f"delta_{k} at {tip}: recurrence {rec[k]} vs horocycle {direct[k]}")
    return FanDeltas(tip, k_min, [rec[k] for k in range(k_min, k_max + 1)])


# --------------------------------------------------------------------------
# the fan condition


def fan_shears(s: ShearFunction, tip: FareyVertex, window: int) -> list:
    """s(f_j) for j = -window .. window."""
    frame = _conjugator_inverse(tip)
    return [_num(s(Edge(tip, fan_vertex(tip, j, frame)))) for j in range(-window, window + 1)]


def ratio_table(shears: list, window: int) -> dict:
    """Fan-condition ratios keyed by (m, k), |m| + k <= window, from the
    shears s(f_j), j = -window .. window, in exponential-sum form."""
    K = window
    out = {}
    for m in range(-K, K + 1):
        em = _exp(shears[m + K])
        num, den = Neumaier(1), Neumaier(1)
        up = down = 0
        out[(m, 0)] = em
        for k in range(1, K - abs(m) + 1):
            up += shears[m + k + K]
            down -= shears[m - k + K]
            num.add(_exp(up))
            den.add(_exp(down))
            out[(m, k)] = _div(em * num.value, den.value)
    return out


def fan_ratios(s: ShearFunction, tip: FareyVertex, window: int,
               prec: int = DEFAULT_PREC) -> dict:
    with mpmath.workprec(prec):
        return ratio_table(fan_shears(s, tip, window), window)


def _spread(r):
    return r if r >= 1 else _div(1, r)


@dataclass
class FanCondition:
    tip: FareyVertex
    worst_ratio: object
    m: int
    k: int

    @property
    def spread(self):
        return _spread(self.worst_ratio)


@dataclass
class ConditionReport:
    """Worst fan-condition ratio over the examined fans and windows.

    ``M`` is a lower bound for the optimal constant: only tips at
    ``depth`` or less and indices within ``window`` are examined.
    """

    M: object
    witness: Optional[FanCondition]
    depth: int
    window: int
    fans: list = field(default_factory=list)

    @property
    def fans_examined(self) -> int:
        return len(self.fans)


def check_condition(s: ShearFunction, depth: int, window: int,
                    prec: int = DEFAULT_PREC) -> ConditionReport:
    if not 0 <= window <= WINDOW_GUARD:
        raise ValidationError(f"window {window} outside [0, {WINDOW_GUARD}]")
    tess = tessellation_to_depth(depth)
    active = None
    if s.is_finitely_supported:
        active = {v for e in s.support() for v in e.endpoints}
    fans = []
    best = None
    with mpmath.workprec(prec):
        for tip in sorted(tess.vertices):
            if active is not None and tip not in active:
                fans.append(FanCondition(tip, 1, 0, 0))
                continue
            shears = fan_shears(s, tip, window)
            if all(x == 0 for x in shears):
                fans.append(FanCondition(tip, 1, 0, 0))
                continue
            worst = None
            for (m, k), r in ratio_table(shears, window).items():
                if worst is None or _spread(r) > _spread(worst[0]):
                    worst = (r, m, k)
            fc = FanCondition(tip, worst[0], worst[1], worst[2])
            fans.append(fc)
            if best is None or fc.spread > best.spread:
                best = fc
    if best is None:
        return ConditionReport(1, None, depth, window, fans)
    return ConditionReport(best.spread, best, depth, window, fans)

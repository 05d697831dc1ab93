from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fareyshear.errors import DepthLimit, NotNeighbors, UnknownTriangle, ValidationError
from fareyshear.farey import (
    BASE_TRIANGLE,
    INFINITY,
    ONE,
    ZERO,
    Edge,
    FareyVertex,
    Triangle,
    act,
    act_edge,
    anchor_triangle,
    canonical_conjugator,
    dual_path,
    fan_index,
    fan_vertex,
    fan_window,
    farey_parents,
    is_unimodular,
    mediant,
    path_to,
    reflect,
    tessellation_to_depth,
)
from fareyshear.geom import INF, MobiusMap, cyclic_sign, mobius_apply

V = FareyVertex.of


def E(x, y):
    return Edge.of(x, y)


# --------------------------------------------------------------------------
# vertices and edges


def test_vertex_normalization():
    assert V((1, -2)) == V(Fraction(-1, 2))
    with pytest.raises(ValidationError):
        V((2, -4))
    assert V((-1, 0)) is not None and V((-1, 0)) == INFINITY
    assert V(INF) == INFINITY and INFINITY.value is INF
    assert V(3).value == 3 and V(Fraction(1, 3)).value == Fraction(1, 3)
    with pytest.raises(ValidationError):
        FareyVertex(2, 4)
    with pytest.raises(ValidationError):
        FareyVertex(1, -2)
    with pytest.raises(ValidationError):
        V(0.5)


def test_vertex_order_puts_infinity_last():
    vs = [INFINITY, V(2), V(Fraction(-1, 2)), ZERO]
    assert sorted(vs) == [V(Fraction(-1, 2)), ZERO, V(2), INFINITY]


def test_edge_validation_and_canonical_order():
    assert E(INF, 0).endpoints == (ZERO, INFINITY)
    assert E(1, 0) == E(0, 1)
    with pytest.raises(NotNeighbors, match="non-unimodular/unreduced edge"):
        E(0, 2)
    with pytest.raises(NotNeighbors):
        E(Fraction(1, 3), 1)


def test_mediant_and_third_vertices():
    assert mediant(ZERO, ONE) == V(Fraction(1, 2))
    assert mediant(ONE, INFINITY) == V(2)
    assert set(E(0, 1).third_vertices()) == {V(Fraction(1, 2)), INFINITY}
    assert set(E(1, INF).third_vertices()) == {V(2), ZERO}
    with pytest.raises(NotNeighbors):
        mediant(ZERO, V(2))


def test_triangle_and_reflection():
    t = Triangle.of(1, 0, INF)
    assert t == BASE_TRIANGLE
    assert BASE_TRIANGLE.opposite(E(0, 1)) == INFINITY
    assert reflect(BASE_TRIANGLE, E(0, 1)) == Triangle.of(0, Fraction(1, 2), 1)
    assert reflect(BASE_TRIANGLE, E(1, INF)) == Triangle.of(1, 2, INF)
    assert reflect(BASE_TRIANGLE, E(0, INF)) == Triangle.of(-1, 0, INF)
    with pytest.raises(NotNeighbors):
        Triangle.of(0, 1, 2)


# --------------------------------------------------------------------------
# tessellations


def test_depth_zero():
    t = tessellation_to_depth(0)
    assert t.triangles == [BASE_TRIANGLE]
    assert set(t.edges) == {E(0, 1), E(1, INF), E(0, INF)}


@pytest.mark.parametrize("depth", range(0, 8))
def test_counts_follow_binary_tree(depth):
    t = tessellation_to_depth(depth)
    n = 1 + 3 * (2 ** depth - 1)
    assert len(t.triangles) == n
    assert len(set(t.triangles)) == n
    # every new triangle adds one vertex and two edges
    assert len(set(t.vertices)) == len(t.vertices) == n + 2
    assert len(set(t.edges)) == len(t.edges) == 2 * n + 1
    assert len(t.interior_edges()) == n - 1


def test_depth_eight_vertex_count():
    assert len(tessellation_to_depth(8).vertices) == 1 + 3 * (2 ** 8 - 1) + 2


def test_tessellation_structure():
    t = tessellation_to_depth(5)
    for tri in t.triangles:
        a, b, c = tri.vertices
        assert is_unimodular(a, b) and is_unimodular(b, c) and is_unimodular(a, c)
        assert set(tri.edges) <= set(t.edges)
    for tri, (parent, e) in t.parent.items():
        assert reflect(parent, e) == tri
        assert t.level[tri] == t.level[parent] + 1
    keys = [(e.a.q, e.a.p) for e in t.sorted_edges() if e.a.q]
    assert keys == sorted(keys)
    assert t.sorted_edges()[0] == E(-5, -4)


def test_depth_guard():
    with pytest.raises(DepthLimit):
        tessellation_to_depth(31)
    with pytest.raises(DepthLimit):
        tessellation_to_depth(5, guard=4)
    with pytest.raises(ValidationError):
        tessellation_to_depth(-1)


def test_dual_path_matches_path_to():
    t = tessellation_to_depth(6)
    for tri in t.triangles:
        crossed = dual_path(tri, t)
        assert [e for _, e in path_to(tri)] == crossed
        assert len(crossed) == t.level[tri]
    assert [e for _, e in path_to(Triangle.of(1, Fraction(3, 2), 2))] == [E(1, INF), E(1, 2)]
    with pytest.raises(UnknownTriangle):
        dual_path(Triangle.of(3, 4, INF), tessellation_to_depth(2))


# --------------------------------------------------------------------------
# parents, frames and fans

reduced = st.builds(
    lambda p, q: V(Fraction(p, q)),
    st.integers(-60, 60), st.integers(1, 40),
)


@given(reduced)
def test_farey_parents(v):
    if v in (ZERO, ONE, INFINITY):
        with pytest.raises(ValidationError):
            farey_parents(v)
        return
    a, b = farey_parents(v)
    assert is_unimodular(a, b)
    assert v in Edge(a, b).third_vertices()
    if v.q > 1 or v.p > 1:
        assert mediant(a, b) == v
    assert anchor_triangle(v) == Triangle(a, v, b)


def test_anchor_triangle_is_nearest_to_base():
    t = tessellation_to_depth(6)
    first = {}
    for tri in t.triangles:
        for v in tri.vertices:
            first.setdefault(v, tri)
    for v, tri in first.items():
        assert anchor_triangle(v) == tri


@pytest.mark.parametrize("tip, entries", [
    (ZERO, (-1, 1, -1, 0)),
    (V(Fraction(1, 2)), (-1, 1, -2, 1)),
    (V(-3), (-1, -2, -1, -3)),
    (INFINITY, (1, 0, 0, 1)),
])
def test_canonical_conjugator_values(tip, entries):
    assert canonical_conjugator(tip).entries() == entries


@given(reduced)
def test_canonical_conjugator_frames_anchor(tip):
    A = canonical_conjugator(tip)
    assert A.is_integral and A.det == 1
    assert act(A, tip) == INFINITY
    assert {act(A, v) for v in anchor_triangle(tip).vertices} == {ZERO, ONE, INFINITY}


def test_fan_at_zero():
    fan = fan_window(ZERO, -2, 2)
    assert list(fan.edges) == [E(0, Fraction(1, 3)), E(0, Fraction(1, 2)), E(0, 1),
                               E(0, INF), E(-1, 0)]
    assert fan[0] == E(0, 1) and list(fan.indices()) == [-2, -1, 0, 1, 2]
    with pytest.raises(IndexError):
        fan[3]


@given(reduced, st.integers(-30, 30))
def test_fan_index_inverts_fan_vertex(tip, k):
    e = Edge(tip, fan_vertex(tip, k))
    assert fan_index(tip, e) == k


@given(reduced, st.integers(-20, 20))
def test_fan_is_cyclically_ordered(tip, k):
    # consecutive fan vertices turn the same way around the tip
    a, b, c = (fan_vertex(tip, j).value for j in (k, k + 1, k + 2))
    assert cyclic_sign(a, b, c) == cyclic_sign(*(fan_vertex(tip, j).value for j in (0, 1, 2)))


def test_fan_index_rejects_foreign_edge():
    with pytest.raises(ValidationError):
        fan_index(ZERO, E(1, INF))


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_act_edge_matches_mobius(n, k):
    A = MobiusMap(1, n, 0, 1) @ MobiusMap(0, -1, 1, 0)
    e = E(k, INF)
    img = act_edge(A, e)
    assert {v.value for v in img.endpoints} == {mobius_apply(A, v.value) for v in e.endpoints}

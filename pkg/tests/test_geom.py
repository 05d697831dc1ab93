from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from fareyshear.errors import (
    DegenerateAxis,
    DegenerateMap,
    DegenerateQuadruple,
    DegenerateTriple,
    NotBasedAtTip,
    OrientationMismatch,
    ValidationError,
)
from fareyshear.geom import (
    INF,
    Horocycle,
    MobiusMap,
    OrientedGeodesic,
    cross_ratio,
    cyclic_sign,
    horocycle_conjugator,
    horocyclic_arc_length,
    mobius_apply,
    mobius_from_triples,
    model_map_halfplane_to_disk,
    to_disk,
    translation_matrix,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
points = st.one_of(rationals, st.just(INF))


@st.composite
def integer_maps(draw):
    """SL(2, Z) elements as words in x -> x + n and x -> -1/x."""
    m = MobiusMap.identity()
    for n in draw(st.lists(st.integers(-4, 4), max_size=6)):
        m = m @ MobiusMap(1, n, 0, 1) @ MobiusMap(0, -1, 1, 0)
    return m


@st.composite
def rational_maps(draw):
    a, b, c = (draw(st.fractions(min_value=-9, max_value=9, max_denominator=9)) for _ in range(3))
    assume(a != 0)
    return MobiusMap(a, b, c, (1 + b * c) / a)


def distinct(*xs):
    return len({("inf",) if x is INF else x for x in xs}) == len(xs)


# --------------------------------------------------------------------------
# cross-ratio


def test_cross_ratio_circle_model_exact():
    z = [to_disk(x) for x in (0, 1, INF, -1)]
    assert z == [1, mpmath.mpc(0, 1), -1, mpmath.mpc(0, -1)]
    assert cross_ratio(*z) == 1
    assert cross_ratio(1, mpmath.mpc(0, 1), -1, mpmath.mpc(0, -1)) == 1


def test_cross_ratio_symmetric_triple_and_limit():
    assert cross_ratio(0, 1, 2, INF) == 1
    assert cross_ratio(0, 1, 3, INF) == 2
    # the full formula converges to the limiting value
    with mpmath.workprec(128):
        far = cross_ratio(0, 1, 3, mpmath.mpf(10) ** 9)
    assert abs(far - 2) < 1e-8


def test_cross_ratio_exact_types():
    r = cross_ratio(0, 1, 2, 5)
    assert r == Fraction(5, 3) and isinstance(r, Fraction)
    assert isinstance(cross_ratio(0, 1, 2, INF), int)


@pytest.mark.parametrize("quad", [(1, 1, 2, 3), (0, 2, 0, INF), (INF, 1, 2, INF), (3, 1, 2, 1)])
def test_cross_ratio_degenerate(quad):
    with pytest.raises(DegenerateQuadruple):
        cross_ratio(*quad)


@given(points, points, points, points)
def test_cross_ratio_matches_homogeneous_oracle(a, b, c, d):
    assume(distinct(a, b, c, d))
    assert cross_ratio(a, b, c, d) == oracles.cross_ratio(a, b, c, d)


@given(integer_maps(), points, points, points, points)
def test_cross_ratio_invariant_exact(m, a, b, c, d):
    assume(distinct(a, b, c, d))
    img = [mobius_apply(m, x) for x in (a, b, c, d)]
    assert cross_ratio(*img) == cross_ratio(a, b, c, d)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3),
       st.lists(st.floats(-20, 20), min_size=4, max_size=4, unique=True))
def test_cross_ratio_invariant_high_precision(a, b, c, xs):
    assume(abs(a) > 1e-3)
    with mpmath.workprec(128):
        a, b, c = map(mpmath.mpf, (a, b, c))
        m = MobiusMap(a, b, c, (1 + b * c) / a)
        xs = [mpmath.mpf(x) for x in xs]
        ys = sorted(xs)
        assume(all(hi - lo > 1e-3 for lo, hi in zip(ys, ys[1:])))
        assume(all(mobius_apply(m, x) is not INF for x in xs))
        before = cross_ratio(*xs)
        after = cross_ratio(*[mobius_apply(m, x) for x in xs])
        assert abs(after - before) <= 1e-12 * abs(before)


# --------------------------------------------------------------------------
# Mobius maps


def test_mobius_examples():
    assert mobius_apply(MobiusMap.identity(), Fraction(7, 3)) == Fraction(7, 3)
    assert mobius_apply(MobiusMap(1, 1, 0, 1), INF) is INF
    assert mobius_apply(MobiusMap(0, -1, 1, 0), 0) is INF
    assert mobius_apply(MobiusMap(0, -1, 1, 0), INF) == 0
    assert mobius_apply(MobiusMap(2, 1, 1, 1), 3) == Fraction(7, 4)


def test_mobius_normalization():
    m = MobiusMap(2, 0, 0, 2)
    assert m.entries() == (1, 0, 0, 1)
    m = MobiusMap(4, 2, 0, 1)  # det 4 -> divide by 2
    assert m.entries() == (2, 1, 0, Fraction(1, 2))
    with mpmath.workprec(128):
        m = MobiusMap(mpmath.mpf(3), 0, 0, 1)
        assert abs(m.det - 1) < mpmath.mpf(2) ** -120
    # non-square exact determinant: exact entries kept, action unchanged
    m = MobiusMap(2, 0, 0, 1)
    assert m.det == 2 and mobius_apply(m, 3) == 6


@pytest.mark.parametrize("entries", [(0, 0, 0, 0), (1, 0, 0, -1), (0, 1, 1, 0), (1, 2, 2, 4)])
def test_mobius_rejects_nonpositive_det(entries):
    with pytest.raises(DegenerateMap):
        MobiusMap(*entries)


@given(rational_maps(), rational_maps(), points)
def test_composition_is_action(m1, m2, x):
    assert mobius_apply(m1 @ m2, x) == mobius_apply(m1, mobius_apply(m2, x))


@given(rational_maps(), rational_maps(), rational_maps())
def test_composition_associative(m1, m2, m3):
    assert ((m1 @ m2) @ m3).close_to(m1 @ (m2 @ m3))


@given(rational_maps(), points)
def test_identity_and_inverse(m, x):
    e = MobiusMap.identity()
    assert (m @ e).close_to(m) and (e @ m).close_to(m)
    assert (m @ m.inverse()).close_to(e)
    assert mobius_apply(m.inverse(), mobius_apply(m, x)) == x


@given(rational_maps(), points)
def test_apply_matches_homogeneous_oracle(m, x):
    assert mobius_apply(m, x) == oracles.apply(m.entries(), x)


# --------------------------------------------------------------------------
# three-point maps


def test_from_triples_examples():
    assert mobius_from_triples((0, 1, INF), (0, 1, INF)).close_to(MobiusMap.identity())
    m = mobius_from_triples((0, 1, INF), (1, 2, INF))
    assert mobius_apply(m, Fraction(5, 2)) == Fraction(7, 2)
    assert m.close_to(MobiusMap(1, 1, 0, 1))
    m = mobius_from_triples((0, 1, INF), (0, 2, INF))
    assert all(mobius_apply(m, x) == 2 * x for x in (-3, Fraction(1, 7), 11))


@given(st.lists(points, min_size=3, max_size=3), st.lists(points, min_size=3, max_size=3))
def test_from_triples_sends_points(src, dst):
    assume(distinct(*src) and distinct(*dst))
    if cyclic_sign(*src) != cyclic_sign(*dst):
        dst = [dst[1], dst[0], dst[2]]
    m = mobius_from_triples(src, dst)
    assert [mobius_apply(m, x) for x in src] == list(dst)


def test_from_triples_errors():
    with pytest.raises(DegenerateTriple):
        mobius_from_triples((0, 0, 1), (0, 1, 2))
    with pytest.raises(OrientationMismatch):
        mobius_from_triples((0, 1, INF), (1, 0, INF))


# --------------------------------------------------------------------------
# translations


def test_translation_standard_axis():
    with mpmath.workprec(128):
        a = mpmath.log(4)
        T = translation_matrix(OrientedGeodesic(0, INF), a)
        assert T.close_to(MobiusMap(mpmath.mpf(2), 0, 0, mpmath.mpf(0.5)), 1e-30)
        assert abs(mobius_apply(T, 1) - 4) < 1e-30
    assert translation_matrix(OrientedGeodesic(3, 5), 0).entries() == (1, 0, 0, 1)


def test_translation_degenerate_axis():
    with pytest.raises(DegenerateAxis):
        OrientedGeodesic(2, 2)


axes = st.tuples(points, points).filter(lambda uv: distinct(*uv))
lengths = st.floats(-3, 3)


@given(axes, lengths)
def test_translation_fixes_axis_and_repels_initial(uv, a):
    u, v = uv
    assume(abs(a) > 1e-3)
    with mpmath.workprec(128):
        T = translation_matrix(OrientedGeodesic(u, v), a)
        for x in (u, v):
            y = mobius_apply(T, x)
            assert y is INF if x is INF else abs(y - x) < 1e-25 * max(1, abs(x))
        # conjugated to the axis (0 -> inf) it is x -> e^a x
        w = _off_axis(u, v)
        t = 1 if cyclic_sign(u, v, w) == cyclic_sign(0, INF, 1) else -1
        C = mobius_from_triples((u, v, w), (0, INF, t))
        D = C @ T @ C.inverse()
        assert abs(mobius_apply(D, t) / t - mpmath.exp(a)) < 1e-25 * mpmath.exp(abs(a))


def _off_axis(u, v):
    if u is INF:
        return v - 1
    if v is INF:
        return u + 1
    return max(u, v) + 1


@given(axes, lengths, lengths)
def test_translation_additive(uv, a, b):
    with mpmath.workprec(128):
        ax = OrientedGeodesic(*uv)
        lhs = translation_matrix(ax, a) @ translation_matrix(ax, b)
        assert lhs.close_to(translation_matrix(ax, mpmath.mpf(a) + mpmath.mpf(b)), 1e-12)


@given(axes, lengths)
def test_translation_reversal(uv, a):
    with mpmath.workprec(128):
        ax = OrientedGeodesic(*uv)
        assert ax.reversed().endpoints() == (uv[1], uv[0])
        assert translation_matrix(ax.reversed(), a).close_to(translation_matrix(ax, -a), 1e-12)


# --------------------------------------------------------------------------
# horocycles


def test_horocycle_examples():
    g0, g1 = OrientedGeodesic(0, INF), OrientedGeodesic(1, INF)
    assert horocyclic_arc_length(Horocycle(INF), g0, g1) == 1
    assert horocyclic_arc_length(Horocycle(INF, 2), g0, g1) == Fraction(1, 2)
    assert horocyclic_arc_length(Horocycle(0), OrientedGeodesic(0, INF), OrientedGeodesic(0, 1)) == 1


def test_horocycle_errors():
    with pytest.raises(NotBasedAtTip):
        horocyclic_arc_length(Horocycle(0), OrientedGeodesic(1, INF), OrientedGeodesic(0, 1))
    with pytest.raises(ValidationError):
        Horocycle(INF, 0)


@given(st.fractions(min_value=-20, max_value=20, max_denominator=40))
def test_canonical_conjugator(p):
    m = horocycle_conjugator(p)
    assert m.is_integral and m.det == 1
    assert mobius_apply(m, p) is INF
    assert 0 <= m.a < m.c or m.c == 1 and m.a == 0


@given(st.fractions(min_value=-5, max_value=5, max_denominator=9), st.lists(
    st.fractions(min_value=-9, max_value=9, max_denominator=9), min_size=4, max_size=4, unique=True))
def test_horocycle_scale_independence(base, others):
    assume(base not in others)
    g = [OrientedGeodesic(base, x) for x in others]
    r1 = (horocyclic_arc_length(Horocycle(base), g[0], g[1])
          / horocyclic_arc_length(Horocycle(base), g[2], g[3]))
    s = Fraction(7, 3)
    r2 = (horocyclic_arc_length(Horocycle(base, s), g[0], g[1])
          / horocyclic_arc_length(Horocycle(base, s), g[2], g[3]))
    assert r1 == r2


# --------------------------------------------------------------------------
# disk model


def test_model_map():
    m = model_map_halfplane_to_disk()
    assert mobius_apply(m, 0) == 1
    assert mobius_apply(m, 1) == mpmath.mpc(0, 1)
    assert mobius_apply(m, INF) == -1


@given(rationals)
def test_model_map_lands_on_circle(x):
    with mpmath.workprec(128):
        assert abs(abs(to_disk(x)) - 1) < 1e-30

"""Boundary points, Mobius maps and horocycles in the upper half-plane.

Boundary points of the half-plane are plain numbers: ``int`` and
``Fraction`` when exact, ``mpmath.mpf`` once something transcendental
(an exponential of a shear) enters, ``mpmath.mpc``/``complex`` only on the
disk side of the model map.  The point at infinity is the singleton
``INF``; every formula that can meet it is written out case by case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

import mpmath
from mpmath import mpc, mpf

from .errors import (
    DegenerateAxis,
    DegenerateMap,
    DegenerateQuadruple,
    DegenerateTriple,
    NotBasedAtTip,
    OrientationMismatch,
    ValidationError,
)

DEFAULT_PREC = 128


class Infinity:
    """The point at infinity of the extended real line (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

Real = Union[int, Fraction, mpf, float]
BoundaryPoint = Union[int, Fraction, mpf, float, mpc, complex, Infinity]


def is_inf(x) -> bool:
    return x is INF


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _is_complex(x) -> bool:
    return isinstance(x, (complex, mpc))


def to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def _exact(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _lift(*xs):
    """Bring finite values to one common number type."""
    kinds = {type(x) for x in xs}
    if kinds == {mpf}:
        return list(xs)
    if kinds == {int}:
        return list(xs)
    if all(is_exact(x) for x in xs):
        return [_exact(x) for x in xs]
    if any(_is_complex(x) for x in xs):
        return [mpc(to_mpf(x)) if is_exact(x) else mpc(x) for x in xs]
    return [to_mpf(x) for x in xs]


def points_equal(x, y) -> bool:
    if x is INF or y is INF:
        return x is y
    x, y = _lift(x, y)
    return x == y


def cyclic_sign(x, y, z) -> int:
    """+1 if (x, y, z) is positively (increasingly) ordered on the circle
    R u {inf}, -1 if negatively, 0 if two points coincide."""
    if x is INF:
        x, y, z = y, z, x
    elif y is INF:
        x, y, z = z, x, y
    if z is INF:
        if x is INF or y is INF:
            return 0
        x, y = _lift(x, y)
        d = y - x
        return (d > 0) - (d < 0)
    x, y, z = _lift(x, y, z)
    p = (y - x) * (z - y) * (z - x)
    return (p > 0) - (p < 0)


# --------------------------------------------------------------------------
# cross-ratio


def cross_ratio(a, b, c, d):
    """cr(a,b,c,d) = (c-b)(d-a) / ((b-a)(d-c)), with the two factors
    containing an infinite argument cancelled."""
    if type(a) is type(b) is type(c) is type(d) is mpf:
        ba, cb, dc, da = b - a, c - b, d - c, d - a
        if not (ba and cb and dc and da) or a == c or b == d:
            raise DegenerateQuadruple(f"coincident points in {(a, b, c, d)!r}")
        return cb * da / (ba * dc)
    pts = (a, b, c, d)
    finite = [x for x in pts if x is not INF]
    lifted = _lift(*finite)
    if len(finite) < 3 or any(lifted[i] == lifted[j] for i in range(len(lifted))
                              for j in range(i + 1, len(lifted))):
        raise DegenerateQuadruple(f"coincident points in {pts!r}")
    it = iter(lifted)
    a, b, c, d = (INF if x is INF else next(it) for x in pts)
    if a is INF:
        return _quotient(c - b, d - c)
    if b is INF:
        return _quotient(-(d - a), d - c)
    if c is INF:
        return _quotient(-(d - a), b - a)
    if d is INF:
        return _quotient(c - b, b - a)
    return _quotient((c - b) * (d - a), (b - a) * (d - c))


def _quotient(num, den):
    if type(num) is mpf:
        return num / den
    if is_exact(num) and is_exact(den):
        return _exact(Fraction(num, den))
    return num / den


# --------------------------------------------------------------------------
# Mobius maps


def _exact_sqrt(x: Fraction):
    """Square root of a positive rational if it is rational, else None."""
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d).

    Real maps are normalized to determinant 1 on construction and
    orientation-reversing matrices are rejected.  Exact rational matrices
    whose determinant is not a rational square keep their exact entries
    (the action is unchanged; see ``det``).  Complex matrices, used only
    for the disk model map, are stored as given.
    """

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        a, b, c, d = _lift(self.a, self.b, self.c, self.d)
        det = a * d - b * c
        if not _is_complex(a):
            if det <= 0:
                raise DegenerateMap(f"determinant {det} <= 0")
            if det != 1:
                if is_exact(det):
                    r = _exact_sqrt(Fraction(det))
                    if r is not None:
                        a, b, c, d = (_exact(v / r) for v in (a, b, c, d))
                else:
                    r = mpmath.sqrt(det)
                    a, b, c, d = a / r, b / r, c / r, d / r
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def is_exact(self) -> bool:
        return is_exact(self.a)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in (self.a, self.b, self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __call__(self, x):
        return mobius_apply(self, x)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        """Composition ``self o other``."""
        a, b, c, d, e, f, g, h = _lift(*self.entries(), *other.entries())
        return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def close_to(self, other: "MobiusMap", tol=1e-12) -> bool:
        """Equality as Mobius maps (matrices agree up to sign)."""
        if self.is_exact and other.is_exact:
            return self.entries() == other.entries() or self.entries() == tuple(
                -v for v in other.entries()
            )
        x = _lift(*self.entries(), *other.entries())
        scale = max(1, *(abs(v) for v in x))
        plus = max(abs(x[i] - x[i + 4]) for i in range(4))
        minus = max(abs(x[i] + x[i + 4]) for i in range(4))
        return min(plus, minus) <= tol * scale


def mobius_apply(m: MobiusMap, x):
    if x is INF:
        if m.c == 0:
            return INF
        a, c = _lift(m.a, m.c)
        return _quotient(a, c)
    if type(x) is mpf and type(m.a) is type(m.b) is type(m.c) is type(m.d) is mpf:
        a, b, c, d = m.a, m.b, m.c, m.d
    else:
        a, b, c, d, x = _lift(m.a, m.b, m.c, m.d, x)
    den = c * x + d
    if den == 0:
        return INF
    return _quotient(a * x + b, den)


def _to_zero_one_inf(z1, z2, z3):
    """Unnormalized matrix entries of the map z1, z2, z3 -> 0, 1, inf."""
    if z1 is INF:
        z2, z3 = _lift(z2, z3)
        return (0, z2 - z3, 1, -z3)
    if z2 is INF:
        z1, z3 = _lift(z1, z3)
        return (1, -z1, 1, -z3)
    if z3 is INF:
        z1, z2 = _lift(z1, z2)
        return (1, -z1, 0, z2 - z1)
    z1, z2, z3 = _lift(z1, z2, z3)
    return (z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))


def mobius_from_triples(src, dst) -> MobiusMap:
    """The unique orientation-preserving map with src[i] -> dst[i]."""
    for triple in (src, dst):
        if len(triple) != 3:
            raise DegenerateTriple("need exactly three points")
        x, y, z = triple
        if points_equal(x, y) or points_equal(y, z) or points_equal(x, z):
            raise DegenerateTriple(f"coincident points in {tuple(triple)!r}")
    if cyclic_sign(*src) != cyclic_sign(*dst):
        raise OrientationMismatch("triples have opposite cyclic orientation")
    sa, sb, sc, sd = _to_zero_one_inf(*src)
    ta, tb, tc, td = _to_zero_one_inf(*dst)
    # adj(T) @ S
    ia, ib, ic, id_ = td, -tb, -tc, ta
    a, b, c, d = (
        ia * sa + ib * sc,
        ia * sb + ib * sd,
        ic * sa + id_ * sc,
        ic * sb + id_ * sd,
    )
    det = a * d - b * c
    if det < 0:
        a, b, c, d = -a, -b, -c, -d  # projectively equal; fix sign of det
        det = a * d - b * c
    if det < 0:  # pragma: no cover - both triples were checked above
        raise OrientationMismatch("orientation-reversing result")
    return MobiusMap(a, b, c, d)


# --------------------------------------------------------------------------
# geodesics, translations, horocycles


@dataclass(frozen=True)
class OrientedGeodesic:
    initial: object
    terminal: object

    def __post_init__(self):
        if points_equal(self.initial, self.terminal):
            raise DegenerateAxis("geodesic endpoints coincide")

    def reversed(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.terminal, self.initial)

    def endpoints(self):
        return (self.initial, self.terminal)


def translation_matrix(axis: OrientedGeodesic, a) -> MobiusMap:
    """Hyperbolic translation of signed length ``a`` along ``axis``.

    For a >= 0 the initial endpoint is repelling.  Conjugate of
    diag(e^{a/2}, e^{-a/2}) by the map sending (initial, terminal) to
    (0, inf).
    """
    u, v = axis.initial, axis.terminal
    if points_equal(u, v):
        raise DegenerateAxis("axis endpoints coincide")
    if a == 0:
        return MobiusMap.identity()
    e = mpmath.exp(to_mpf(a) / 2)
    ie = 1 / e
    if v is INF:
        u = to_mpf(u)
        return MobiusMap(e, u * (ie - e), 0, ie)
    if u is INF:
        v = to_mpf(v)
        return MobiusMap(ie, v * (e - ie), 0, e)
    u, v = to_mpf(u), to_mpf(v)
    return MobiusMap(u * ie - v * e, u * v * (e - ie), ie - e, u * e - v * ie)


@dataclass(frozen=True)
class Horocycle:
    """Horocycle at ``base``; ``scale`` is its Euclidean height after the
    canonical conjugation sending ``base`` to infinity."""

    base: object
    scale: object = 1

    def __post_init__(self):
        if not self.scale > 0:
            raise ValidationError("horocycle scale must be positive")


def horocycle_conjugator(base) -> MobiusMap:
    """Canonical map sending ``base`` to infinity.

    Rational p/q goes by the integer matrix [[a, b], [q, -p]] with
    0 <= a < q; other finite points by x -> -1/(x - base).
    """
    if base is INF:
        return MobiusMap.identity()
    if is_exact(base):
        base = Fraction(base)
        p, q = base.numerator, base.denominator
        a = 0 if q == 1 else pow(-p, -1, q)
        b = -(1 + p * a) // q
        return MobiusMap(a, b, q, -p)
    return MobiusMap(0, -1, 1, -base)


def _other_endpoint(g, base):
    x, y = g.endpoints() if isinstance(g, OrientedGeodesic) else tuple(g)
    if points_equal(x, base):
        other = y
    elif points_equal(y, base):
        other = x
    else:
        raise NotBasedAtTip(f"geodesic {(x, y)!r} does not end at {base!r}")
    if points_equal(other, base):
        raise NotBasedAtTip("degenerate geodesic")
    return other


def horocyclic_arc_length(h: Horocycle, g1, g2):
    """Length of the arc of ``h`` cut out by two geodesics ending at its base."""
    conj = horocycle_conjugator(h.base)
    x1 = mobius_apply(conj, _other_endpoint(g1, h.base))
    x2 = mobius_apply(conj, _other_endpoint(g2, h.base))
    x1, x2, scale = _lift(x1, x2, h.scale)
    return _quotient(abs(x1 - x2), scale)


# --------------------------------------------------------------------------
# half-plane -> disk


def model_map_halfplane_to_disk() -> MobiusMap:
    """The fixed map z -> (i - z)/(i + z), sending (0, 1, inf) to (1, i, -1)."""
    return MobiusMap(mpc(-1), mpc(0, 1), mpc(1), mpc(0, 1))


def to_disk(x):
    """Image of a boundary point of the half-plane on the unit circle."""
    return mobius_apply(model_map_halfplane_to_disk(), x)

"""Quasisymmetry estimates and degeneration diagnostics for developed maps."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import mpmath

from .errors import InsufficientDepth, NonMonotone, OrderViolation, ValidationError
from .farey import (
    INFINITY,
    Edge,
    FareyVertex,
    _conjugator_inverse,
    fan_vertex,
    tessellation_to_depth,
)
from .geom import DEFAULT_PREC, INF, cross_ratio, to_mpf
from .shear import (
    DevelopedMap,
    ShearFunction,
    _div,
    _num,
    _recurrence_deltas,
    _spread,
    check_condition,
    fan_shears,
    shear_from_map,
)

SHEAR_CUTOFF = 10
HEAD_TAIL_CUTOFF = 1e3


def ba_ratio(h, x, t):
    """(h(x+t) - h(x)) / (h(x) - h(x-t))."""
    if not t > 0:
        raise ValidationError("t must be positive")
    lo, mid, hi = h(x - t), h(x), h(x + t)
    r = _div(hi - mid, mid - lo)
    if not r > 0:
        raise NonMonotone(f"h is not increasing at {x} +- {t}")
    return r


def lemma_constant(M):
    """max{3 M^3, M^10}: the quasisymmetry constant guaranteed for
    single-fan shears satisfying the fan condition with constant M."""
    return max(3 * M ** 3, M ** 10)


# --------------------------------------------------------------------------
# cross-ratio sampling


@dataclass
class QsEstimate:
    M_observed: object
    samples: int
    witness: Optional[tuple]  # (domain quadruple, image quadruple)
    method: str = "mobius-quadruples"
    seed: int = 0


def _fan_ranges(dm: DevelopedMap):
    """For each tip, the integer range [lo, hi] whose fan vertices all have
    images, restricted to ranges that hold a symmetric triple."""
    out = []
    for tip in dm.vertices():
        frame = _conjugator_inverse(tip)
        if fan_vertex(tip, 0, frame) not in dm:
            continue
        lo = hi = 0
        while fan_vertex(tip, hi + 1, frame) in dm:
            hi += 1
        while fan_vertex(tip, lo - 1, frame) in dm:
            lo -= 1
        if hi - lo >= 2:
            out.append((tip, frame, lo, hi))
    return out


def _quadruple(tip, frame, x, t):
    return (fan_vertex(tip, x - t, frame), fan_vertex(tip, x, frame),
            fan_vertex(tip, x + t, frame), tip)


def estimate_qs_constant(dm: DevelopedMap, seed: int = 0, samples: int = 10_000,
                         prec: Optional[int] = None) -> QsEstimate:
    """Largest cross-ratio distortion over sampled quadruples of cross-ratio 1.

    Each quadruple is the image of (x - t, x, x + t, inf) under the integer
    frame of a fan, so its cross-ratio is exactly 1.  Sample 0 is
    (0, 1, 2, inf); later ones come from one ``random.Random(seed)``
    stream, so raising ``samples`` only appends quadruples.
    """
    if samples < 1:
        raise ValidationError("need at least one sample")
    prec = prec or dm.precision
    ranges = _fan_ranges(dm)
    if not ranges:
        raise InsufficientDepth("developed map has no fan with a symmetric triple")
    rng = random.Random(seed)
    worst, witness = 1, None
    with mpmath.workprec(prec):
        for i in range(samples):
            if i == 0:
                quad = (FareyVertex(0, 1), FareyVertex(1, 1), FareyVertex(2, 1), INFINITY)
            else:
                tip, frame, lo, hi = ranges[int(rng.random() * len(ranges))]
                t = 1 + int(rng.random() * ((hi - lo) // 2))
                x = lo + t + int(rng.random() * (hi - lo - 2 * t + 1))
                quad = _quadruple(tip, frame, x, t)
            try:
                img = tuple(dm.images[v] for v in quad)
            except KeyError as exc:
                raise InsufficientDepth(f"sampled vertex {exc.args[0]} has no image") from None
            cr = to_mpf(cross_ratio(*img))
            if not cr > 0:
                raise OrderViolation("image quadruple is not cyclically ordered", quad)
            d = _spread(cr)
            if d > worst:
                worst, witness = d, (quad, img)
    return QsEstimate(worst, samples, witness, seed=seed)


# --------------------------------------------------------------------------
# degeneration scan


@dataclass
class DegenerationReport:
    mode: str  # "arc-summability" | "shear-blowup" | "none-detected"
    flags: tuple
    head_tail: object  # largest block ratio of image arcs found
    head_tail_witness: Optional[tuple]  # (tip, m, k)
    max_abs_shear: object
    shear_witness: Optional[tuple]  # consecutive edges (f, g, h)
    depth: int
    window: int


def _head_tail(deltas: list, K: int):
    """Largest ratio between sums of two adjacent equal-length blocks of arcs,
    either way round.  ``deltas`` holds delta_j, j = -K .. K."""
    prefix = [0]
    for d in deltas:
        prefix.append(prefix[-1] + d)
    best = (1, None)
    n = len(deltas)
    for start in range(n):
        for k in range(1, (n - start) // 2 + 1):
            head = prefix[start + k] - prefix[start]
            tail = prefix[start + 2 * k] - prefix[start + k]
            r = _spread(_div(head, tail))
            if r > best[0]:
                best = (r, (start - K, k))
    return best


def degeneration_scan(s: ShearFunction, depth: int, window: int,
                      shear_cutoff=SHEAR_CUTOFF, ratio_cutoff=HEAD_TAIL_CUTOFF,
                      prec: int = DEFAULT_PREC) -> DegenerationReport:
    """Look for the two ways a developed map can fail to be a homeomorphism.

    arc-summability: along some fan the image arcs shrink so fast that a
    block of arcs dwarfs the next block of the same length.  shear-blowup:
    some interior edge (the middle of a consecutive zigzag triple) carries
    a shear beyond ``shear_cutoff``.  A heuristic at finite depth, not a proof.
    """
    tess = tessellation_to_depth(depth)
    active = None
    if s.is_finitely_supported:
        active = {v for e in s.support() for v in e.endpoints}
    head_tail, ht_witness = 1, None
    max_abs, sh_witness = 0, None
    with mpmath.workprec(prec):
        for tip in sorted(tess.vertices):
            if active is not None and tip not in active:
                continue
            shears = fan_shears(s, tip, window)
            if all(x == 0 for x in shears):
                continue
            d = _recurrence_deltas({j: shears[j + window] for j in range(-window, window + 1)},
                                   -window, window)
            r, where = _head_tail([d[j] for j in range(-window, window + 1)], window)
            if r > head_tail:
                head_tail, ht_witness = r, (tip, *where)
        for e in tess.interior_edges():
            a = abs(_num(s(e)))
            if a > max_abs:
                w1, w2 = e.third_vertices()
                max_abs, sh_witness = a, (Edge(e.a, w1), e, Edge(e.b, w2))
    flags = []
    if head_tail >= ratio_cutoff:
        flags.append("arc-summability")
    if max_abs > shear_cutoff:
        flags.append("shear-blowup")
    mode = flags[0] if flags else "none-detected"
    return DegenerationReport(mode, tuple(flags), head_tail, ht_witness, max_abs,
                              sh_witness, depth, window)


# --------------------------------------------------------------------------
# necessity


def extracted_shears(h, prec: int = DEFAULT_PREC) -> ShearFunction:
    """The shear function of a vertex map, evaluated lazily edge by edge."""
    cache = {}

    def rule(e: Edge):
        if e not in cache:
            cache[e] = shear_from_map(h, e, prec=prec)
        return cache[e]

    return ShearFunction(rule=rule)


def necessity_experiment(h, depth: int, window: int, prec: int = DEFAULT_PREC):
    """Fan-condition report for the shears of a known boundary map ``h``
    (a callable on Farey vertices fixing 0, 1 and inf)."""
    for v in (FareyVertex(0, 1), FareyVertex(1, 1)):
        if h(v) != v.value:
            raise ValidationError(f"map must fix {v}")
    if h(INFINITY) is not INF:
        raise ValidationError("map must fix inf")
    return check_condition(extracted_shears(h, prec), depth, window, prec)


def fan_normalized_map(h, tip: FareyVertex):
    """Integer-indexed view of ``h`` in the frame of the fan at ``tip``:
    n -> image of the n-th fan vertex after sending h(tip) to inf and
    renormalizing so that 0 -> 0 and 1 -> 1."""
    from .geom import horocycle_conjugator, mobius_apply

    frame = _conjugator_inverse(tip)
    conj = horocycle_conjugator(h(tip))
    x0 = mobius_apply(conj, h(fan_vertex(tip, 0, frame)))
    x1 = mobius_apply(conj, h(fan_vertex(tip, 1, frame)))

    def g(n):
        x = mobius_apply(conj, h(fan_vertex(tip, n, frame)))
        return _div(x - x0, x1 - x0)

    return g

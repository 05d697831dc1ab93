"""Line-oriented JSON files for shear tables and vertex maps.

Line 1 is a header object; every later non-blank line is one record.
Reals are decimal strings; integers and "p/q" are read exactly.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from pathlib import Path

import mpmath

from .errors import FormatError, InsufficientDepth, ValidationError
from .farey import INFINITY, ONE, ZERO, Edge, FareyVertex, tessellation_to_depth
from .geom import DEFAULT_PREC, INF
from .shear import DevelopedMap, ShearFunction

SHEAR_FORMAT = "fareyshear/shears"
MAP_FORMAT = "fareyshear/vertex-map"
VERSION = 1
FIXED_POINTS = [[0, 1], [1, 1], [1, 0]]

_INT = re.compile(r"[+-]?\d+")
_RATIONAL = re.compile(r"[+-]?\d+/\d+")
_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


def digits_for(prec: int) -> int:
    """Significant digits that round-trip a ``prec``-bit binary float."""
    return int(prec * math.log10(2)) + 2


def format_real(x, prec: int = DEFAULT_PREC) -> str:
    if x is INF:
        return "inf"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if not isinstance(x, mpmath.mpf):
        with mpmath.workprec(prec):
            x = mpmath.mpf(x)  # never re-round an mpf: that would use 53 bits
    if x == 0:
        return "0"
    return mpmath.libmp.to_str(x._mpf_, digits_for(prec))


def parse_real(text, prec: int = DEFAULT_PREC, allow_inf: bool = False):
    if not isinstance(text, str):
        raise FormatError(f"expected a decimal string, got {text!r}")
    t = text.strip()
    if t == "inf":
        if allow_inf:
            return INF
        raise FormatError("infinite value not allowed here")
    if _INT.fullmatch(t):
        return int(t)
    if _RATIONAL.fullmatch(t):
        p, q = t.split("/")
        if int(q) == 0:
            raise FormatError(f"zero denominator in {text!r}")
        return Fraction(int(p), int(q))
    if _DECIMAL.fullmatch(t):
        with mpmath.workprec(prec):
            return mpmath.mpf(t)
    raise FormatError(f"not a decimal number: {text!r}")


def _vertex(obj) -> FareyVertex:
    if (not isinstance(obj, list) or len(obj) != 2
            or not all(isinstance(n, int) and not isinstance(n, bool) for n in obj)):
        raise FormatError(f"vertex must be [p, q] with integer entries, got {obj!r}")
    p, q = obj
    if q < 0 or math.gcd(p, q) != 1:
        raise ValidationError(f"non-unimodular/unreduced edge: vertex {obj} is not reduced")
    return FareyVertex(p, q)


def _pair(v: FareyVertex) -> list:
    return [v.p, v.q]


def _lines(path):
    text = Path(path).read_text(encoding="utf-8")
    for n, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            try:
                yield n, json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{n}: invalid JSON ({exc.msg})") from None


def _header(lines, path, fmt):
    try:
        n, head = next(lines)
    except StopIteration:
        raise FormatError(f"{path}: empty file") from None
    if not isinstance(head, dict) or head.get("format") != fmt:
        raise FormatError(f"{path}:{n}: header must declare format {fmt!r}")
    if head.get("version") != VERSION:
        raise FormatError(f"{path}:{n}: unsupported version {head.get('version')!r}")
    prec = head.get("precision", DEFAULT_PREC)
    if not isinstance(prec, int) or prec < 16:
        raise FormatError(f"{path}:{n}: bad precision {prec!r}")
    return head, prec


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


# --------------------------------------------------------------------------
# shear files


def read_shears(path) -> tuple[ShearFunction, int]:
    """Parse a shear file; returns the shear function and declared precision."""
    lines = _lines(path)
    head, prec = _header(lines, path, SHEAR_FORMAT)
    model = head.get("model", "halfplane")
    if model != "halfplane":
        raise FormatError(f"{path}:1: unsupported model {model!r}")
    try:
        default = parse_real(head.get("default", "0"), prec)
    except ValidationError as exc:
        raise FormatError(f"{path}:1: default: {exc}") from None
    table = {}
    for n, rec in lines:
        try:
            if not isinstance(rec, dict) or set(rec) != {"edge", "s"}:
                raise FormatError("record must have exactly the keys 'edge' and 's'")
            ends = rec["edge"]
            if not isinstance(ends, list) or len(ends) != 2:
                raise FormatError("edge must be a pair of vertices")
            e = Edge(_vertex(ends[0]), _vertex(ends[1]))
            if e in table:
                raise ValidationError(f"duplicate edge {e}")
            table[e] = parse_real(rec["s"], prec)
        except ValidationError as exc:
            raise type(exc)(f"{path}:{n}: {exc}") from None
    return ShearFunction(table, default=default), prec


def write_shears(path, table: dict, prec: int = DEFAULT_PREC, default=0):
    head = {"format": SHEAR_FORMAT, "version": VERSION, "model": "halfplane",
            "default": format_real(default, prec), "precision": prec}
    out = [_dump(head)]
    for e in sorted(table, key=Edge.sort_key):
        out.append(_dump({"edge": [_pair(e.a), _pair(e.b)], "s": format_real(table[e], prec)}))
    _write(path, "\n".join(out) + "\n")


# --------------------------------------------------------------------------
# vertex maps


def read_vertex_map(path, check_order: bool = True) -> DevelopedMap:
    lines = _lines(path)
    head, prec = _header(lines, path, MAP_FORMAT)
    depth = head.get("depth")
    if not isinstance(depth, int) or depth < 0:
        raise FormatError(f"{path}:1: bad depth {depth!r}")
    if head.get("fixed_points", FIXED_POINTS) != FIXED_POINTS:
        raise FormatError(f"{path}:1: only the normalization fixing 0, 1, inf is supported")
    images = {}
    for n, rec in lines:
        try:
            if not isinstance(rec, dict) or set(rec) != {"vertex", "image"}:
                raise FormatError("record must have exactly the keys 'vertex' and 'image'")
            v = _vertex(rec["vertex"])
            if v in images:
                raise ValidationError(f"duplicate vertex {v}")
            images[v] = parse_real(rec["image"], prec, allow_inf=True)
        except ValidationError as exc:
            raise type(exc)(f"{path}:{n}: {exc}") from None
    for v, want in ((ZERO, 0), (ONE, 1), (INFINITY, INF)):
        got = images.get(v)
        if got is None or (got is not want and (got is INF or want is INF or got != want)):
            raise FormatError(f"{path}: vertex {v} must map to {format_real(want)}")
    dm = DevelopedMap(images, depth, prec)
    if check_order:
        dm.check_order()
    return dm


def require_coverage(dm: DevelopedMap, depth: int):
    """Raise unless ``dm`` has an image for every vertex up to ``depth``."""
    if dm.depth is not None and depth > dm.depth:
        raise InsufficientDepth(f"requested depth {depth} exceeds file depth {dm.depth}")
    missing = [v for v in tessellation_to_depth(depth).vertices if v not in dm]
    if missing:
        raise InsufficientDepth(f"no image for vertex {min(missing)} (depth {depth})")


def write_vertex_map(path, dm: DevelopedMap):
    head = {"format": MAP_FORMAT, "version": VERSION, "depth": dm.depth,
            "precision": dm.precision, "fixed_points": FIXED_POINTS}
    out = [_dump(head)]
    for v in dm.vertices():
        out.append(_dump({"vertex": _pair(v), "image": format_real(dm.images[v], dm.precision)}))
    _write(path, "\n".join(out) + "\n")


def _write(path, text: str):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


_FLAT_ARRAY = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")
_PAIR_ARRAY = re.compile(r"\[\s+(\[[^\[\]{}]*\](?:,\s+\[[^\[\]{}]*\])*)\s+\]")


def _inline(m) -> str:
    return "[" + re.sub(r",\s+", ", ", m.group(1)) + "]"


def dump_json(path, obj):
    """Indented JSON report; arrays of scalars and arrays of such arrays stay
    on one line.  Trailing newline."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    text = _PAIR_ARRAY.sub(_inline, _FLAT_ARRAY.sub(_inline, text))
    _write(path, text + "\n")


__all__ = [
    "SHEAR_FORMAT", "MAP_FORMAT", "VERSION", "digits_for", "format_real", "parse_real",
    "read_shears", "write_shears", "read_vertex_map", "write_vertex_map",
    "require_coverage", "dump_json",
]

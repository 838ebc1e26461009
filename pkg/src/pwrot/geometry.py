"""Exact open convex regions of the plane, possibly unbounded.

A region is an intersection of open half-planes ``a*x + b*y + c > 0`` with
coefficients in the real subfield of Q(zeta_N).  Regions are kept in a
canonical H-representation (redundant constraints dropped, constraints
normalized and sorted), so set equality is tuple equality.

All coordinates need ``i`` in the field, so geometry requires ``4 | N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .cyclotomic import Cyclo, zeta

__all__ = [
    "HalfPlane",
    "ConvexRegion",
    "Similarity",
    "Isometry",
    "region_from_halfplanes",
    "clip",
    "contains",
    "vertices_and_rays",
    "transform",
    "area",
    "regions_equal",
    "point",
    "re_im",
    "polygon",
    "convex_hull",
    "difference",
]

INTERIOR, BOUNDARY, OUTSIDE = "interior", "boundary", "outside"


def _i(n: int) -> Cyclo:
    if n % 4:
        raise ValueError(f"geometry needs i in the field; N={n} is not a multiple of 4")
    return zeta(n, n // 4)


def point(x, y, n: int) -> Cyclo:
    """The complex number x + iy in Q(zeta_n)."""
    x = x if isinstance(x, Cyclo) else Cyclo.from_rational(n, x)
    y = y if isinstance(y, Cyclo) else Cyclo.from_rational(n, y)
    return x + _i(n) * y


def re_im(z: Cyclo) -> tuple[Cyclo, Cyclo]:
    return z.real_part(), z.imag_part()


@dataclass(frozen=True)
class HalfPlane:
    """Open half-plane a*x + b*y + c > 0, stored normalized."""

    a: Cyclo
    b: Cyclo
    c: Cyclo

    @classmethod
    def make(cls, a, b, c, n: int | None = None) -> "HalfPlane":
        if n is None:
            n = next(v.n for v in (a, b, c) if isinstance(v, Cyclo))
        a, b, c = (v if isinstance(v, Cyclo) else Cyclo.from_rational(n, v) for v in (a, b, c))
        if a.is_zero() and b.is_zero():
            raise ValueError("degenerate half-plane: (a, b) = (0, 0)")
        lead = a if not a.is_zero() else b
        s = lead.sign()
        if lead == s:
            return cls(a, b, c)
        inv = lead.inverse() * s
        return cls(a * inv, b * inv, c * inv)

    @classmethod
    def left_of(cls, p: Cyclo, q: Cyclo) -> "HalfPlane":
        """Points strictly left of the directed line p -> q."""
        px, py = re_im(p)
        qx, qy = re_im(q)
        a = py - qy
        b = qx - px
        return cls.make(a, b, -(a * px + b * py))

    @property
    def n(self) -> int:
        return self.a.n

    def value(self, x: Cyclo, y: Cyclo) -> Cyclo:
        return self.a * x + self.b * y + self.c

    def side(self, z: Cyclo) -> int:
        x, y = re_im(z)
        return self.value(x, y).sign()

    def complement(self) -> "HalfPlane":
        return HalfPlane(-self.a, -self.b, -self.c)

    def key(self) -> tuple:
        return (self.a.key(), self.b.key(), self.c.key())

    def normal(self) -> Cyclo:
        return self.a + _i(self.n) * self.b

    def direction(self) -> tuple[Cyclo, Cyclo]:
        # boundary traversed with the interior on the left
        return self.b, -self.a

    def base_point(self) -> tuple[Cyclo, Cyclo]:
        zero = self.a * 0
        if not self.a.is_zero():
            return -self.c * self.a, zero  # a is +-1
        return zero, -self.c * self.b


def _lt(p: tuple[Cyclo, Cyclo], q: tuple[Cyclo, Cyclo]) -> bool:
    # p, q are (num, den) pairs with den > 0
    return (p[0] * q[1] - q[0] * p[1]).sign() < 0


def _segment(h: HalfPlane, others: Iterable[HalfPlane]):
    """Parameter interval of h's boundary line inside all others (closed).

    Returns (lo, hi) as (num, den) pairs or None for infinite ends, the string
    'empty' if the interval is empty or degenerate, or 'void' if the whole
    region is empty (coincident opposite constraint).
    """
    px, py = h.base_point()
    dx, dy = h.direction()
    lo = hi = None
    for g in others:
        v = g.value(px, py)
        s = g.a * dx + g.b * dy
        ss = s.sign()
        if ss == 0:
            sv = v.sign()
            if sv < 0:
                return "empty"
            if sv == 0:
                if g == h:
                    continue
                return "void"
            continue
        # v + t s >= 0
        if ss > 0:
            bound = (-v, s)
            if lo is None or _lt(lo, bound):
                lo = bound
        else:
            bound = (v, -s)
            if hi is None or _lt(bound, hi):
                hi = bound
    if lo is not None and hi is not None and not _lt(lo, hi):
        return "empty"
    return lo, hi


class ConvexRegion:
    """Open convex region in canonical H-representation."""

    __slots__ = ("n", "halfplanes", "empty", "_segments", "__dict__")

    def __init__(self, n: int, halfplanes: Sequence[HalfPlane] = (), *, _canonical=None):
        self.n = n
        if _canonical is not None:
            self.halfplanes, self.empty, self._segments = _canonical
            return
        self.halfplanes, self.empty, self._segments = _canonicalize(list(halfplanes))

    # identity -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, ConvexRegion):
            return NotImplemented
        if self.empty or other.empty:
            return self.empty and other.empty
        return self.halfplanes == other.halfplanes

    def __hash__(self) -> int:
        return hash(("empty",) if self.empty else self.halfplanes)

    def __repr__(self) -> str:
        if self.empty:
            return "ConvexRegion(empty)"
        return f"ConvexRegion({len(self.halfplanes)} constraints)"

    def is_empty(self) -> bool:
        return self.empty

    def is_bounded(self) -> bool:
        if self.empty:
            return True
        if not self.halfplanes:
            return False
        return all(lo is not None and hi is not None for lo, hi in self._segments)

    @cached_property
    def _ordered(self):
        """Facets with their segments, in counterclockwise boundary order."""
        items = list(zip(self.halfplanes, self._segments))
        items.sort(key=lambda it: _AngleKey(it[0].direction()))
        if not items:
            return items
        starts = [k for k, (_, (lo, _hi)) in enumerate(items) if lo is None]
        if starts:
            k = starts[0]
            # with two unbounded-start facets (a strip), start after the other's end
            items = items[k:] + items[:k]
        return items

    def vertices(self) -> list[Cyclo]:
        return vertices_and_rays(self)[0]

    def key(self) -> tuple:
        return tuple(h.key() for h in self.halfplanes) if not self.empty else ("empty",)


class _AngleKey:
    """Exact counterclockwise angle order of direction vectors."""

    __slots__ = ("dx", "dy", "half")

    def __init__(self, d):
        self.dx, self.dy = d
        sy = self.dy.sign()
        self.half = 0 if (sy > 0 or (sy == 0 and self.dx.sign() > 0)) else 1

    def __lt__(self, other: "_AngleKey") -> bool:
        if self.half != other.half:
            return self.half < other.half
        return (self.dx * other.dy - self.dy * other.dx).sign() > 0


def _canonicalize(hs: list[HalfPlane]):
    uniq: dict[tuple, HalfPlane] = {}
    for h in hs:
        uniq.setdefault(h.key(), h)
    hs = list(uniq.values())
    facets = []
    segs = []
    for k, h in enumerate(hs):
        seg = _segment(h, hs[:k] + hs[k + 1:])
        if seg == "void":
            return (), True, ()
        if seg == "empty":
            continue
        facets.append(h)
        segs.append(seg)
    if hs and not facets:
        return (), True, ()
    order = sorted(range(len(facets)), key=lambda k: facets[k].key())
    return tuple(facets[k] for k in order), False, tuple(segs[k] for k in order)


def region_from_halfplanes(hs: Iterable[HalfPlane], n: int | None = None) -> ConvexRegion:
    hs = list(hs)
    if n is None:
        if not hs:
            raise ValueError("field order needed for the whole plane")
        n = hs[0].n
    return ConvexRegion(n, hs)


def whole_plane(n: int) -> ConvexRegion:
    return ConvexRegion(n, ())


def empty_region(n: int) -> ConvexRegion:
    return ConvexRegion(n, _canonical=((), True, ()))


def clip(r: ConvexRegion, h: HalfPlane | Sequence[HalfPlane]) -> ConvexRegion:
    if r.empty:
        return r
    extra = [h] if isinstance(h, HalfPlane) else list(h)
    if r.halfplanes and _redundant(r, extra):
        return r
    return ConvexRegion(r.n, list(r.halfplanes) + extra)


def _redundant(r: ConvexRegion, extra: list[HalfPlane]) -> bool:
    # cheap check: all vertices strictly inside and no escaping ray
    if not r.is_bounded():
        return False
    verts = r.vertices()
    for h in extra:
        for v in verts:
            if h.side(v) <= 0:
                return False
    return True


def intersect(r: ConvexRegion, s: ConvexRegion) -> ConvexRegion:
    if r.empty:
        return r
    if s.empty:
        return s
    return ConvexRegion(r.n, list(r.halfplanes) + list(s.halfplanes))


def contains(r: ConvexRegion, p: Cyclo) -> str:
    if r.empty:
        return OUTSIDE
    x, y = re_im(p)
    worst = 1
    for h in r.halfplanes:
        s = h.value(x, y).sign()
        if s < 0:
            return OUTSIDE
        worst = min(worst, s)
    return INTERIOR if worst > 0 else BOUNDARY


def _seg_point(h: HalfPlane, t) -> Cyclo:
    px, py = h.base_point()
    dx, dy = h.direction()
    num, den = t
    tt = num / den
    return point(px + tt * dx, py + tt * dy, h.n)


def vertices_and_rays(r: ConvexRegion) -> tuple[list[Cyclo], list[Cyclo]]:
    """Counterclockwise vertices and recession rays (as complex directions)."""
    if r.empty:
        raise ValueError("empty region has no vertices")
    cached = r.__dict__.get("_vr")
    if cached is not None:
        return cached
    items = r._ordered
    verts = []
    for h, (lo, _hi) in items:
        if lo is not None:
            verts.append(_seg_point(h, lo))
    rays = []
    if items and items[0][1][0] is None:
        first, last = items[0][0], items[-1][0]
        dx, dy = first.direction()
        rays.append(point(-dx, -dy, r.n))
        dx, dy = last.direction()
        rays.append(point(dx, dy, r.n))
    r.__dict__["_vr"] = (verts, rays)
    return verts, rays


def polygon(pts: Sequence[Cyclo]) -> ConvexRegion:
    """Open convex polygon from counterclockwise vertices."""
    n = pts[0].n
    hs = [HalfPlane.left_of(pts[k], pts[(k + 1) % len(pts)]) for k in range(len(pts))]
    return ConvexRegion(n, hs)


def convex_hull(pts: Sequence[Cyclo]) -> ConvexRegion:
    """Interior of the convex hull of finitely many points."""
    pts = list(dict.fromkeys(pts))
    hs = []
    for p in pts:
        for q in pts:
            if p == q:
                continue
            h = HalfPlane.left_of(p, q)
            sides = [h.side(z) for z in pts]
            if min(sides) >= 0 and max(sides) > 0:
                hs.append(h)
    if not hs:
        # collinear points have an empty interior
        return empty_region(pts[0].n)
    return ConvexRegion(pts[0].n, hs)


def area(r: ConvexRegion):
    """Exact area (a real field element), or ``math.inf`` when unbounded."""
    if r.empty:
        return Cyclo.from_rational(r.n, 0)
    if not r.is_bounded():
        return math.inf
    verts = vertices_and_rays(r)[0]
    total = Cyclo.from_rational(r.n, 0)
    pts = [re_im(v) for v in verts]
    for k in range(len(pts)):
        x0, y0 = pts[k]
        x1, y1 = pts[(k + 1) % len(pts)]
        total = total + (x0 * y1 - x1 * y0)
    return total * Fraction(1, 2)


def regions_equal(r1: ConvexRegion, r2: ConvexRegion) -> bool:
    return r1 == r2


def difference(r: ConvexRegion, cutters: Iterable[ConvexRegion]) -> list[ConvexRegion]:
    """r minus the union of cutters, as disjoint convex pieces (up to boundaries)."""
    pieces = [] if r.empty else [r]
    for s in cutters:
        if s.empty:
            continue
        out = []
        for p in pieces:
            out.extend(_subtract(p, s))
        pieces = out
        if not pieces:
            break
    return pieces


def _subtract(p: ConvexRegion, s: ConvexRegion) -> list[ConvexRegion]:
    if intersect(p, s).empty:
        return [p]
    out = []
    cur = p
    for h in s.halfplanes:
        piece = clip(cur, h.complement())
        if not piece.empty:
            out.append(piece)
        cur = clip(cur, h)
        if cur.empty:
            break
    return out


def subset(r: ConvexRegion, s: ConvexRegion) -> bool:
    """r is contained in s (up to boundaries)."""
    if r.empty:
        return True
    return not difference(r, [s])


class Similarity:
    """Orientation-preserving similarity z -> mul*z + trans."""

    __slots__ = ("mul", "trans")

    def __init__(self, mul: Cyclo, trans: Cyclo):
        if mul.is_zero():
            raise ValueError("similarity with zero multiplier")
        self.mul = mul
        self.trans = trans

    @property
    def n(self) -> int:
        return self.mul.n

    def __call__(self, z: Cyclo) -> Cyclo:
        return self.mul * z + self.trans

    def __matmul__(self, other: "Similarity") -> "Similarity":
        """Composition self o other."""
        cls = Isometry if isinstance(self, Isometry) and isinstance(other, Isometry) else Similarity
        return cls(self.mul * other.mul, self.mul * other.trans + self.trans)

    def inverse(self) -> "Similarity":
        inv = self.mul.inverse()
        return type(self)(inv, -(inv * self.trans))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Similarity):
            return NotImplemented
        return self.mul == other.mul and self.trans == other.trans

    def __hash__(self) -> int:
        return hash((self.mul, self.trans))

    def is_identity(self) -> bool:
        return self.mul == 1 and self.trans.is_zero()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.mul!r}, {self.trans!r})"

    def apply_halfplane(self, h: HalfPlane) -> HalfPlane:
        n = h.n
        nn = h.normal() * self.mul
        a2, b2 = re_im(nn)
        tx, ty = re_im(self.trans)
        scale = self.mul * self.mul.conj()
        return HalfPlane.make(a2, b2, h.c * scale - (a2 * tx + b2 * ty), n)


class Isometry(Similarity):
    """z -> rot*z + trans with |rot| = 1."""

    __slots__ = ()

    def __init__(self, rot: Cyclo, trans: Cyclo):
        super().__init__(rot, trans)

    @property
    def rot(self) -> Cyclo:
        return self.mul

    @classmethod
    def identity(cls, n: int) -> "Isometry":
        return cls(Cyclo.from_rational(n, 1), Cyclo.from_rational(n, 0))

    @classmethod
    def rotation_about(cls, rot: Cyclo, center: Cyclo) -> "Isometry":
        return cls(rot, center - rot * center)

    def check(self) -> bool:
        return self.rot * self.rot.conj() == 1

    def rotation_power(self) -> int | None:
        """k with rot == zeta_N^k, or None if rot is not a root of unity power."""
        for k in range(self.n):
            if zeta(self.n, k) == self.rot:
                return k
        return None


def transform(r: ConvexRegion, g: Similarity) -> ConvexRegion:
    if r.empty or not r.halfplanes:
        return r
    hs = [g.apply_halfplane(h) for h in r.halfplanes]
    order = sorted(range(len(hs)), key=lambda k: hs[k].key())
    # facets map to facets; segments are recomputed lazily through a fresh canonical pass
    return ConvexRegion(r.n, [hs[k] for k in order])

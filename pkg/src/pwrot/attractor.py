"""Uncovered sets, forward images and invariant compact sets of non-bijective maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cyclotomic import Cyclo
from .dynamics import PiecewiseMap, classify
from .geometry import (
    ConvexRegion,
    Isometry,
    area,
    difference,
    intersect,
    polygon,
    transform,
    whole_plane,
)
from .symbolic import min_rotation, rotation_order

__all__ = [
    "RegionSet",
    "Tile",
    "TilingReport",
    "CertificationError",
    "Certificate",
    "image_complement",
    "forward_regions",
    "attractor_candidate",
    "verify_tiling",
    "step_regions",
    "adjacent",
    "encloses_origin",
    "connected_components",
]


class RegionSet:
    """Finite union of pairwise-disjoint open convex regions."""

    def __init__(self, n: int, regions: Iterable[ConvexRegion] = (), check: bool = False):
        self.n = n
        self.regions = [r for r in regions if not r.empty]
        if check:
            for i, r in enumerate(self.regions):
                for s in self.regions[i + 1:]:
                    if not intersect(r, s).empty:
                        raise ValueError("regions overlap")

    @classmethod
    def from_polygons(cls, n: int, polys: Sequence[Sequence[Cyclo]]) -> "RegionSet":
        return cls(n, [polygon(p) for p in polys], check=True)

    def __iter__(self):
        return iter(self.regions)

    def __len__(self) -> int:
        return len(self.regions)

    def __bool__(self) -> bool:
        return bool(self.regions)

    def __repr__(self) -> str:
        return f"RegionSet({len(self.regions)} regions)"

    def is_bounded(self) -> bool:
        return all(r.is_bounded() for r in self.regions)

    def area(self):
        total = Cyclo.from_rational(self.n, 0)
        for r in self.regions:
            a = area(r)
            if not isinstance(a, Cyclo):
                return a
            total = total + a
        return total

    def union(self, other: Iterable[ConvexRegion]) -> "RegionSet":
        out = list(self.regions)
        for r in other:
            out.extend(difference(r, out))
        return RegionSet(self.n, out)

    def minus(self, other: Iterable[ConvexRegion]) -> "RegionSet":
        other = list(other)
        out = []
        for r in self.regions:
            out.extend(difference(r, other))
        return RegionSet(self.n, out)

    def meet(self, other: Iterable[ConvexRegion]) -> "RegionSet":
        other = list(other)
        return RegionSet(self.n, [intersect(r, s) for r in self.regions for s in other])

    def covers(self, r: ConvexRegion) -> bool:
        return not difference(r, self.regions)


class CertificationError(ValueError):
    """Raised when a candidate set is not invariant; ``witness`` escapes it."""

    def __init__(self, message: str, witness: ConvexRegion):
        super().__init__(message)
        self.witness = witness


@dataclass
class Certificate:
    kind: str
    attractor: RegionSet
    area: object
    depth: int | None = None


def step_regions(m: PiecewiseMap, regions: Iterable[ConvexRegion]) -> list[ConvexRegion]:
    """Images of the given regions, split along the branch domains."""
    out = []
    for r in regions:
        for _, d, g in m.pieces():
            part = intersect(r, d)
            if not part.empty:
                out.append(transform(part, g))
    return out


def image_complement(m: PiecewiseMap) -> RegionSet:
    """The open part of the plane missed by every branch image."""
    images = [transform(d, g) for _, d, g in m.pieces()]
    return RegionSet(m.n, difference(whole_plane(m.n), images))


def forward_regions(m: PiecewiseMap, rs: RegionSet | Iterable[ConvexRegion], n: int) -> RegionSet:
    """Union of T^k(rs) for k = 0..n, as disjoint pieces."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not isinstance(rs, RegionSet):
        rs = RegionSet(m.n, rs)
    out = RegionSet(m.n, rs.regions)
    frontier = list(rs.regions)
    for _ in range(n):
        frontier = step_regions(m, frontier)
        if not frontier:
            break
        out = out.union(frontier)
    return out


def attractor_candidate(m: PiecewiseMap, seed: RegionSet, depth: int = 5) -> Certificate:
    """Certify a declared compact candidate.

    Every candidate must be forward invariant.  For non-surjective maps it must
    in addition avoid the first ``depth`` forward images of the uncovered set.
    """
    if not seed:
        raise ValueError("empty seed")
    for img in step_regions(m, seed):
        rest = difference(img, seed.regions)
        if rest:
            raise CertificationError("image leaves the candidate", rest[0])
    tag, _ = classify(m)
    if tag == "non-surjective":
        forbidden = forward_regions(m, image_complement(m), depth)
        hit = seed.meet(forbidden)
        if hit:
            raise CertificationError("candidate meets a forward image of the uncovered set", hit.regions[0])
        return Certificate(tag, seed, seed.area(), depth)
    return Certificate(tag, seed, seed.area())


# ----------------------------------------------------------------------------
# tilings


@dataclass
class Tile:
    region: ConvexRegion
    word: str
    orbit: str | None
    # number of distinct tiles in the orbit (T^period maps the tile onto itself)
    period: int | None
    # steps after which every point of the tile is back (g_word is the identity)
    return_time: int | None = None


@dataclass
class TilingReport:
    tiles: list[Tile]
    leftover: RegionSet
    depth: int
    max_period: int
    orbits: dict[str, list[Tile]] = field(default_factory=dict)
    # cells that land inside a periodic tile after ``preperiod`` steps
    transient: list[tuple[ConvexRegion, int]] = field(default_factory=list)

    @property
    def periods(self) -> set[int]:
        return {t.period for t in self.tiles if t.period is not None}

    def tile_area(self):
        return RegionSet(self.leftover.n, [t.region for t in self.tiles]).area()

    def transient_area(self):
        return RegionSet(self.leftover.n, [r for r, _ in self.transient]).area()

    def leftover_area(self):
        return self.leftover.area()

    def to_json(self) -> dict:
        from .cyclotomic import format_cyclo

        def verts(r):
            return [[format_cyclo(x) for x in _xy(v)] for v in r.vertices()]

        return {
            "depth": self.depth,
            "max_period": self.max_period,
            "tiles": [
                {"word": t.word, "orbit": t.orbit, "period": t.period, "vertices": verts(t.region)}
                for t in self.tiles
            ],
            "transient": [{"preperiod": k, "vertices": verts(r)} for r, k in self.transient],
            "leftover": [verts(r) for r in self.leftover],
            "leftover_area": format_cyclo(self.leftover_area()),
        }


def _xy(v):
    from .geometry import re_im

    return re_im(v)


def verify_tiling(m: PiecewiseMap, attractor: RegionSet | Certificate, max_period: int, depth: int) -> TilingReport:
    """Split the attractor into cells of codings of length <= depth.

    A cell C with word w is a periodic tile of period len(w) as soon as
    T^len(w) maps C onto itself by a finite-order isometry.  Cells left over
    after that pass are refined again: those mapped inside the periodic tiles
    within ``depth`` steps are transient; the rest is the leftover.
    """
    if isinstance(attractor, Certificate):
        attractor = attractor.attractor
    limit = min(depth, max_period)
    n = m.n
    tiles: list[Tile] = []
    leftover: list[ConvexRegion] = []
    ident = Isometry.identity(n)
    stack = [(r, "", ident, r) for r in reversed(attractor.regions)]
    while stack:
        cell, word, g, cur = stack.pop()
        if word:
            tile = _periodic_tile(m, cell, word, cur == cell)
            if tile is not None:
                tiles.append(tile)
                continue
        if len(word) >= limit:
            leftover.append(cell)
            continue
        children = []
        for label, d, f in m.pieces():
            part = intersect(cur, d)
            if part.empty:
                continue
            g2 = f @ g
            img = transform(part, f)
            children.append((transform(part, g.inverse()), word + label, g2, img))
        stack.extend(reversed(children))
    tiles = _merge_tiles(tiles)
    orbits: dict[str, list[Tile]] = {}
    for t in tiles:
        orbits.setdefault(t.orbit, []).append(t)
    transient, leftover = _transients(m, leftover, [t.region for t in tiles], depth)
    return TilingReport(tiles, RegionSet(n, leftover), depth, max_period, orbits, transient)


def _transients(m: PiecewiseMap, cells: list[ConvexRegion], tiles: list[ConvexRegion], depth: int):
    if not tiles:
        return [], cells
    ident = Isometry.identity(m.n)
    transient, rest = [], []
    stack = [(c, 0, ident, c) for c in reversed(cells)]
    while stack:
        cell, k, g, cur = stack.pop()
        if k and not difference(cur, tiles):
            transient.append((cell, k))
            continue
        if k >= depth:
            rest.append(cell)
            continue
        children = []
        for _, d, f in m.pieces():
            part = intersect(cur, d)
            if not part.empty:
                children.append((transform(part, g.inverse()), k + 1, f @ g, transform(part, f)))
        stack.extend(reversed(children))
    return transient, rest


def _periodic_tile(m: PiecewiseMap, cell: ConvexRegion, word: str, invariant: bool) -> Tile | None:
    """Periodic tile for a cell read along ``word``, if one is certified.

    Either T^len(word) maps the cell onto itself by a finite-order isometry,
    or the word is u^k with k at least the order r of g_u; every point of the
    cell is then fixed by T^(r |u|) even if the cell was clipped.
    """
    for p in range(1, len(word) + 1):
        u = word[:p]
        if not invariant and word != (u * (len(word) // p + 1))[: len(word)]:
            continue
        g = m.word_isometry(u)
        r = rotation_order(g)
        if r is None:
            continue
        if invariant:
            if transform(cell, g) == cell:
                return Tile(cell, u, min_rotation(u), p, r * p)
        elif len(word) >= r * p:
            return Tile(cell, u, min_rotation(u), p, r * p)
    return None


def _merge_tiles(tiles: list[Tile]) -> list[Tile]:
    from .induction import merge_convex

    by_word: dict[str, list[Tile]] = {}
    for t in tiles:
        by_word.setdefault(t.word, []).append(t)
    out = []
    for word in sorted(by_word):
        group = by_word[word]
        for r in merge_convex([t.region for t in group]):
            out.append(Tile(r, word, group[0].orbit, group[0].period, group[0].return_time))
    return out


# ----------------------------------------------------------------------------
# connectivity


def adjacent(r: ConvexRegion, s: ConvexRegion) -> bool:
    """The closures of two bounded regions meet (exact)."""
    vr, vs = r.vertices(), s.vertices()
    if any(_on_closure(s, v) for v in vr) or any(_on_closure(r, v) for v in vs):
        return True
    for a, b in zip(vr, vr[1:] + vr[:1]):
        for c, d in zip(vs, vs[1:] + vs[:1]):
            if _segments_meet(a, b, c, d):
                return True
    return False


def _cross(u: Cyclo, v: Cyclo) -> int:
    return (u.conj() * v).imag_part().sign()


def _segments_meet(a, b, c, d) -> bool:
    d1, d2 = _cross(b - a, c - a), _cross(b - a, d - a)
    d3, d4 = _cross(d - c, a - c), _cross(d - c, b - c)
    return d1 * d2 < 0 and d3 * d4 < 0


def _on_closure(r: ConvexRegion, p: Cyclo) -> bool:
    return all(h.side(p) >= 0 for h in r.halfplanes)


def connected_components(regions: Sequence[ConvexRegion]) -> list[list[int]]:
    parent = list(range(len(regions)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if find(i) != find(j) and adjacent(regions[i], regions[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(regions)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def encloses_origin(regions: Sequence[ConvexRegion]) -> bool:
    """The origin lies in a bounded component of the complement of the
    closed union.

    A box around the union is cut into convex pieces of the complement; two
    pieces communicate only across a common segment of positive length, so
    cells touching at a single vertex still separate.  The origin is enclosed
    when no piece reachable from it meets the border of the box.
    """
    n = regions[0].n
    zero = Cyclo.from_rational(n, 0)
    if any(_on_closure(r, zero) for r in regions):
        return False
    box = _bounding_box(regions, zero)
    pieces = difference(box, list(regions))
    frame = [h for h in box.halfplanes]
    todo = [k for k, r in enumerate(pieces) if _on_closure(r, zero)]
    seen = set(todo)
    while todo:
        k = todo.pop()
        r = pieces[k]
        if any(_touches_line(r, h) for h in frame):
            return False
        for j, t in enumerate(pieces):
            if j not in seen and _share_segment(r, t):
                seen.add(j)
                todo.append(j)
    return True


def _bounding_box(regions: Sequence[ConvexRegion], extra: Cyclo) -> ConvexRegion:
    from .geometry import point

    n = extra.n
    xs, ys = [extra.real_part()], [extra.imag_part()]
    for r in regions:
        for v in r.vertices():
            xs.append(v.real_part())
            ys.append(v.imag_part())
    one = Cyclo.from_rational(n, 1)
    lo_x, hi_x = _extreme(xs, -1) - one, _extreme(xs, 1) + one
    lo_y, hi_y = _extreme(ys, -1) - one, _extreme(ys, 1) + one
    return polygon([point(lo_x, lo_y, n), point(hi_x, lo_y, n), point(hi_x, hi_y, n), point(lo_x, hi_y, n)])


def _extreme(vals, sgn: int):
    best = vals[0]
    for v in vals[1:]:
        if (v - best).sign() * sgn > 0:
            best = v
    return best


def _touches_line(r: ConvexRegion, h) -> bool:
    return any(h.side(v) == 0 for v in r.vertices())


def _share_segment(r: ConvexRegion, s: ConvexRegion) -> bool:
    """Some edge of r and some edge of s overlap in a segment of positive length."""
    vr, vs = r.vertices(), s.vertices()
    for a, b in zip(vr, vr[1:] + vr[:1]):
        d = b - a
        for c, e in zip(vs, vs[1:] + vs[:1]):
            if _cross(d, c - a) != 0 or _cross(d, e - a) != 0:
                continue
            # collinear: compare parameters along d
            dd = (d.conj() * d).real_part()
            tc = (d.conj() * (c - a)).real_part() / dd
            te = (d.conj() * (e - a)).real_part() / dd
            lo, hi = (tc, te) if (te - tc).sign() > 0 else (te, tc)
            zero, one = lo - lo, dd / dd
            if (_max(lo, zero) - _min(hi, one)).sign() < 0:
                return True
    return False


def _max(a, b):
    return a if (a - b).sign() >= 0 else b


def _min(a, b):
    return a if (a - b).sign() <= 0 else b

"""First-return maps, renormalization and substitution extraction."""

from __future__ import annotations

import os
import string
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cyclotomic import Cyclo, sign_re_im, zeta
from .dynamics import Branch, PiecewiseMap, fixed_point
from .geometry import (
    ConvexRegion,
    HalfPlane,
    Isometry,
    Similarity,
    difference,
    intersect,
    re_im,
    transform,
    vertices_and_rays,
)

__all__ = [
    "ReturnPiece",
    "ReturnStructure",
    "Substitution",
    "StepCapExceeded",
    "base_cone",
    "fixed_cell",
    "first_return",
    "induced_map",
    "extract_substitution",
    "find_conjugacy",
    "renormalize",
    "relabel",
    "default_max_steps",
]


class StepCapExceeded(RuntimeError):
    pass


@dataclass
class ReturnPiece:
    label: str
    regions: tuple[ConvexRegion, ...]
    word: str
    map: Isometry


@dataclass
class ReturnStructure:
    base: tuple[ConvexRegion, ...]
    pieces: list[ReturnPiece]
    unresolved: list[tuple[ConvexRegion, str]] = field(default_factory=list)
    parent: PiecewiseMap | None = None

    def table(self) -> dict[str, str]:
        return {p.label: p.word for p in self.pieces}

    def piece(self, label: str) -> ReturnPiece:
        for p in self.pieces:
            if p.label == label:
                return p
        raise KeyError(label)


@dataclass(frozen=True)
class Substitution:
    images: dict

    @property
    def alphabet(self) -> str:
        return "".join(self.images)

    def __post_init__(self):
        for a, w in self.images.items():
            if not w:
                raise ValueError(f"image of {a!r} is empty")
            bad = set(w) - set(self.images)
            if bad:
                raise ValueError(f"image of {a!r} uses letters outside the alphabet: {sorted(bad)}")

    def __call__(self, word: str) -> str:
        try:
            return "".join(self.images[a] for a in word)
        except KeyError as exc:
            raise KeyError(f"letter {exc.args[0]!r} not in alphabet {self.alphabet!r}") from None

    def power(self, word: str, k: int) -> str:
        for _ in range(k):
            word = self(word)
        return word

    def __eq__(self, other) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return dict(self.images) == dict(other.images)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.images.items())))


def default_max_steps(q: int) -> int:
    env = os.environ.get("PWROT_MAX_STEPS")
    if env:
        return int(env)
    return 4 * q


def _as_regions(base) -> tuple[ConvexRegion, ...]:
    if isinstance(base, ConvexRegion):
        return (base,)
    return tuple(base)


# ----------------------------------------------------------------------------
# base cone


def fixed_cell(m: PiecewiseMap, label: str = "0") -> ConvexRegion:
    """Cell of the periodic word label^omega around the fixed center."""
    from .symbolic import cell_of_prefix

    br = m.branch(label)
    c = fixed_point(br.map)
    if c is None or not any(_inside(d, c) for d in br.domains):
        raise ValueError(f"branch {label} has no fixed center inside its domain")
    prev = None
    k = 1
    limit = 2 * m.n + 2
    while k <= limit:
        cells = cell_of_prefix(m, label * k)
        cur = next(r for r in cells if _inside(r, c))
        if cur == prev:
            return cur
        prev = cur
        k += 1
    return prev


def _inside(r: ConvexRegion, z: Cyclo) -> bool:
    from .geometry import INTERIOR, contains

    return contains(r, z) == INTERIOR


def base_cone(m: PiecewiseMap) -> ConvexRegion:
    """The open cone at the leftmost real-axis vertex of the 0-cell."""
    try:
        cell = fixed_cell(m, "0")
        upper = True
    except ValueError:
        cell = fixed_cell(m, "1")
        upper = False
    verts = [v for v in vertices_and_rays(cell)[0] if sign_re_im(v)[1] == 0]
    if not verts:
        raise ValueError("periodic cell does not touch the discontinuity line")
    pick = min if upper else max
    v = verts[0]
    for w in verts[1:]:
        if (pick is min and w.real_part() < v.real_part()) or (pick is max and w.real_part() > v.real_part()):
            v = w
    x, y = re_im(v)
    n = m.n
    axis = HalfPlane.make(0, 1 if upper else -1, 0, n)
    edges = [h for h in cell.halfplanes if h.value(x, y).is_zero() and h != axis]
    if len(edges) != 1:
        raise ValueError("could not identify the cell edge adjacent to the cone vertex")
    return ConvexRegion(n, [axis, edges[0].complement()])


# ----------------------------------------------------------------------------
# first return


def first_return(m: PiecewiseMap, base, max_steps: int, strict: bool = False) -> ReturnStructure:
    """First-return partition of ``base`` (a convex region or disjoint list).

    Breadth-first: each frontier entry is the current image of a set of
    starting points, the word read so far and the composed isometry.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    base = _as_regions(base)
    if all(b.empty for b in base):
        raise ValueError("empty base")
    pieces = m.pieces()
    frontier = [(b, "", Isometry.identity(m.n)) for b in base if not b.empty]
    found: list[tuple[ConvexRegion, str, Isometry]] = []
    for _ in range(max_steps):
        nxt = []
        for cur, word, g in frontier:
            for label, dom, f in pieces:
                part = intersect(cur, dom)
                if part.empty:
                    continue
                img = transform(part, f)
                g2 = f @ g
                w2 = word + label
                ginv = g2.inverse()
                for b in base:
                    back = intersect(img, b)
                    if not back.empty:
                        found.append((transform(back, ginv), w2, g2))
                for rest in difference(img, base):
                    nxt.append((rest, w2, g2))
        frontier = nxt
        if not frontier:
            break
    unresolved = [(transform(cur, g.inverse()), w) for cur, w, g in frontier]
    if strict and unresolved:
        raise StepCapExceeded(f"{len(unresolved)} regions did not return within {max_steps} steps")
    groups: dict[str, list] = {}
    for reg, w, g in found:
        groups.setdefault(w, []).append((reg, g))
    out = []
    for k, w in enumerate(sorted(groups)):
        regs = merge_convex([r for r, _ in groups[w]])
        out.append(ReturnPiece(_letter(k), tuple(regs), w, groups[w][0][1]))
    return ReturnStructure(base, out, unresolved, m)


def _letter(k: int) -> str:
    letters = string.ascii_uppercase + string.ascii_lowercase
    return letters[k] if k < len(letters) else chr(0x100 + k)


def merge_convex(regs: list[ConvexRegion]) -> list[ConvexRegion]:
    """Merge pairs of regions whose union is convex (up to the shared edge)."""
    regs = sorted(regs, key=lambda r: r.key())
    changed = True
    while changed:
        changed = False
        for i in range(len(regs)):
            for j in range(i + 1, len(regs)):
                u = _convex_union(regs[i], regs[j])
                if u is not None:
                    regs = [r for k, r in enumerate(regs) if k not in (i, j)] + [u]
                    regs.sort(key=lambda r: r.key())
                    changed = True
                    break
            if changed:
                break
    return regs


def _convex_union(r1: ConvexRegion, r2: ConvexRegion) -> ConvexRegion | None:
    keys2 = {h.key(): h for h in r2.halfplanes}
    for h in r1.halfplanes:
        hc = h.complement()
        if hc.key() in keys2:
            rest = [g for g in r1.halfplanes if g != h] + [g for g in r2.halfplanes if g.key() != hc.key()]
            u = ConvexRegion(r1.n, rest)
            if ConvexRegion(r1.n, list(u.halfplanes) + [h]) == r1 and ConvexRegion(
                r1.n, list(u.halfplanes) + [hc]
            ) == r2:
                return u
    return None


def relabel(rs: ReturnStructure, table: dict[str, str]) -> ReturnStructure:
    """Rename pieces so that label -> return word matches ``table``."""
    by_word = {p.word: p for p in rs.pieces}
    if set(by_word) != set(table.values()):
        raise ValueError("return words do not match the expected table")
    pieces = [
        ReturnPiece(label, by_word[w].regions, w, by_word[w].map) for label, w in table.items()
    ]
    return ReturnStructure(rs.base, pieces, rs.unresolved, rs.parent)


def induced_map(rs: ReturnStructure, name: str = "") -> PiecewiseMap:
    if rs.unresolved:
        raise ValueError(f"{len(rs.unresolved)} regions are unresolved; induced map is not total")
    branches = tuple(Branch(p.label, p.regions, p.map) for p in rs.pieces)
    theta = rs.parent.theta if rs.parent is not None else None
    return PiecewiseMap(rs.base[0].n, branches, theta=theta, name=name or "induced", base=rs.base)


# ----------------------------------------------------------------------------
# renormalization


def _frame(regions: Sequence[ConvexRegion]):
    verts, rays = [], []
    for r in regions:
        v, ry = vertices_and_rays(r)
        verts.extend(v)
        rays.extend(ry)
    return verts, rays


def _candidates(src: Sequence[ConvexRegion], dst: Sequence[ConvexRegion]) -> list[Similarity]:
    sv, sr = _frame(src)
    dv, dr = _frame(dst)
    n = src[0].n
    muls: list[Cyclo] = [Cyclo.from_rational(n, 1)]
    src_edges = [b - a for a, b in zip(sv, sv[1:] + sv[:1])] if len(sv) > 1 else []
    dst_edges = [b - a for a, b in zip(dv, dv[1:] + dv[:1])] if len(dv) > 1 else []
    for e in src_edges[:1]:
        if e.is_zero():
            continue
        for d in dst_edges:
            m = d / e
            if m.is_real() and m.sign() > 0 and m not in muls:
                muls.append(m)
    out = []
    seen = set()
    if not sv:
        return out
    for mul in muls:
        for p in dv:
            t = p - mul * sv[0]
            key = (mul, t)
            if key not in seen:
                seen.add(key)
                out.append(Similarity(mul, t))
    return out


def find_conjugacy(parent: PiecewiseMap, rs: ReturnStructure, target=None):
    """Search a similarity h with h(parent piece X) = induced piece(s) and
    h o f_X = g_Y o h.  Returns (h, mapping induced label -> parent label) or None.
    """
    src = parent.base if parent.base is not None else tuple(d for _, d, _ in parent.pieces())
    for h in _candidates(src, rs.base):
        mapping = _verify_conjugacy(h, parent, rs)
        if mapping is not None:
            return h, mapping
    return None


def _verify_conjugacy(h: Similarity, parent: PiecewiseMap, rs: ReturnStructure):
    # cheap filter first: every frame vertex of the base must land in the target closure
    mapping: dict[str, str] = {}
    hinv = h.inverse()
    for b in parent.branches:
        target = [transform(d, h) for d in b.domains]
        # conjugated map of branch b
        want = h @ b.map @ hinv
        covering = []
        for p in rs.pieces:
            hits = [r for r in p.regions if any(not intersect(r, t).empty for t in target)]
            if not hits:
                continue
            if p.map.mul != want.mul or p.map.trans != want.trans:
                return None
            if difference_list(hits, target):
                return None
            covering.extend(hits)
            if p.label in mapping and mapping[p.label] != b.label:
                return None
            mapping[p.label] = b.label
        if difference_list(target, covering):
            return None
    if set(mapping) != {p.label for p in rs.pieces}:
        return None
    return mapping


def difference_list(regs: Iterable[ConvexRegion], cutters: list[ConvexRegion]) -> list[ConvexRegion]:
    out = []
    for r in regs:
        out.extend(difference(r, cutters))
    return out


def extract_substitution(
    parent: PiecewiseMap, piece_label: str, max_steps: int | None = None
) -> tuple[Substitution, Similarity | None, ReturnStructure]:
    """Induce ``parent`` on one of its pieces and read off the substitution."""
    br = parent.branch(piece_label)
    if max_steps is None:
        max_steps = 4 * max(len(parent.branches), 4)
    rs = first_return(parent, br.domains, max_steps)
    if rs.unresolved:
        raise StepCapExceeded(
            f"return to {piece_label} unresolved after {max_steps} steps ({len(rs.unresolved)} regions)"
        )
    found = find_conjugacy(parent, rs)
    if found is None:
        sub = Substitution({p.label: p.word for p in rs.pieces}) if _closed(rs) else None
        return sub, None, rs
    h, mapping = found
    return _substitution_from(parent, rs, mapping), h, _merged(parent, rs, mapping)


def _substitution_from(parent: PiecewiseMap, rs: ReturnStructure, mapping: dict[str, str]) -> Substitution:
    images: dict[str, str] = {}
    for b in parent.branches:
        words = {p.word for p in rs.pieces if mapping[p.label] == b.label}
        if len(words) != 1:
            raise ValueError(f"letter {b.label} corresponds to several return words {sorted(words)}")
        images[b.label] = words.pop()
    return Substitution(images)


def _merged(parent: PiecewiseMap, rs: ReturnStructure, mapping: dict[str, str]) -> ReturnStructure:
    pieces = []
    for b in parent.branches:
        ys = [p for p in rs.pieces if mapping[p.label] == b.label]
        regs = tuple(r for p in ys for r in p.regions)
        pieces.append(ReturnPiece(b.label, tuple(merge_convex(list(regs))), ys[0].word, ys[0].map))
    return ReturnStructure(rs.base, pieces, rs.unresolved, parent)


def renormalize(
    parent: PiecewiseMap,
    scales: Sequence[Cyclo],
    anchors: Sequence[tuple[Cyclo, Cyclo]],
    max_steps: int,
) -> tuple[Substitution, Similarity, ReturnStructure] | None:
    """Self-similarity of a map on a bounded invariant base.

    Tries h(z) = s zeta^k z + b for each scale s, each k and each anchor pair
    (p, q) with h(p) = q.  A candidate is kept when h(base) lies in the base
    and the first return to h(base) is conjugate to the map by h.  The first
    success, in the order given, is returned.
    """
    if parent.base is None:
        raise ValueError("renormalize needs a map with a declared base")
    base = list(parent.base)
    n = parent.n
    for s in scales:
        for p, q in anchors:
            for k in range(n):
                mul = s * zeta(n, k)
                h = Similarity(mul, q - mul * p)
                image = [transform(r, h) for r in base]
                if difference_list(image, base):
                    continue
                rs = first_return(parent, tuple(image), max_steps)
                if rs.unresolved:
                    continue
                mapping = _verify_conjugacy(h, parent, rs)
                if mapping is not None:
                    return _substitution_from(parent, rs, mapping), h, _merged(parent, rs, mapping)
    return None


def _closed(rs: ReturnStructure) -> bool:
    labels = {p.label for p in rs.pieces}
    return all(set(p.word) <= labels for p in rs.pieces)

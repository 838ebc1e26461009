"""Piecewise rotations of the plane and their symbolic codings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Cyclo, field_for_angle, sign_re_im, zeta
from .geometry import (
    BOUNDARY,
    INTERIOR,
    ConvexRegion,
    HalfPlane,
    Isometry,
    contains,
    difference,
    intersect,
    transform,
    whole_plane,
)

__all__ = [
    "Branch",
    "PiecewiseMap",
    "Coding",
    "BoundaryError",
    "build_map",
    "centers",
    "classify",
    "step",
    "code_orbit",
    "inverse_map",
    "upper_half_plane",
    "lower_half_plane",
]


class BoundaryError(ValueError):
    """The point lies on a discontinuity line (or outside every branch)."""

    def __init__(self, z: Cyclo, step: int = 0):
        super().__init__(f"point {z!r} is not in any open branch domain (step {step})")
        self.z = z
        self.step = step


@dataclass(frozen=True)
class Branch:
    label: str
    domains: tuple[ConvexRegion, ...]
    map: Isometry


@dataclass(frozen=True)
class PiecewiseMap:
    n: int
    branches: tuple[Branch, ...]
    theta: Fraction | None = None
    # the two top-level half-planes are tested by the sign of Im(z) directly
    halfplane_split: bool = False
    name: str = ""
    # region the map is considered on (induced maps); None means the plane
    base: tuple[ConvexRegion, ...] | None = None

    @property
    def alphabet(self) -> str:
        return "".join(b.label for b in self.branches)

    def branch(self, label: str) -> Branch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(label)

    def maps(self) -> dict[str, Isometry]:
        return {b.label: b.map for b in self.branches}

    def pieces(self) -> list[tuple[str, ConvexRegion, Isometry]]:
        return [(b.label, d, b.map) for b in self.branches for d in b.domains]

    def word_isometry(self, word: str) -> Isometry:
        g = Isometry.identity(self.n)
        maps = self.maps()
        for a in word:
            g = maps[a] @ g
        return g


@dataclass
class Coding:
    word: str
    hit_boundary_at: int | None = None
    points: list[Cyclo] = field(default_factory=list, repr=False)


def upper_half_plane(n: int) -> ConvexRegion:
    return ConvexRegion(n, [HalfPlane.make(0, 1, 0, n)])


def lower_half_plane(n: int) -> ConvexRegion:
    return ConvexRegion(n, [HalfPlane.make(0, -1, 0, n)])


def centers(theta, sigma, n: int | None = None) -> tuple[Cyclo, Cyclo]:
    """Rotation centers of the bijective map with parameter sigma."""
    theta = Fraction(theta)
    sigma = Fraction(sigma)
    n = n or field_for_angle(theta)
    rot = zeta(n, int(theta * n))
    return rot * (sigma + 1) / (1 - rot), rot * (sigma - 1) / (1 - rot)


def build_map(
    theta,
    sigma=None,
    centers_: Sequence[Cyclo] | None = None,
    n: int | None = None,
) -> PiecewiseMap:
    """The two-branch rotation by 2*pi*theta.

    Give either ``sigma`` (bijective form z -> e(z + sigma +- 1)) or the two
    centers (``centers_``; upper branch first).
    """
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    n = n or field_for_angle(theta)
    if (theta * n).denominator != 1:
        raise ValueError(f"e^(2 i pi {theta}) is not in Q(zeta_{n})")
    rot = zeta(n, int(theta * n))
    if (sigma is None) == (centers_ is None):
        raise ValueError("give exactly one of sigma or centers")
    if sigma is not None:
        if not isinstance(sigma, (int, Fraction)):
            raise TypeError("sigma must be an exact rational")
        sigma = Fraction(sigma)
        f0 = Isometry(rot, rot * (sigma + 1))
        f1 = Isometry(rot, rot * (sigma - 1))
        name = f"theta={theta} sigma={sigma}"
    else:
        c0, c1 = centers_
        for c in (c0, c1):
            if c.n != n:
                raise ValueError(f"center {c!r} is not in Q(zeta_{n})")
            if sign_re_im(c)[1] == 0:
                raise ValueError(f"center {c!r} lies on the discontinuity line")
        f0 = Isometry.rotation_about(rot, c0)
        f1 = Isometry.rotation_about(rot, c1)
        name = f"theta={theta} centers={c0!r},{c1!r}"
    return PiecewiseMap(
        n,
        (
            Branch("0", (upper_half_plane(n),), f0),
            Branch("1", (lower_half_plane(n),), f1),
        ),
        theta=theta,
        halfplane_split=True,
        name=name,
    )


def fixed_point(g: Isometry) -> Cyclo | None:
    if g.rot == 1:
        return None
    return g.trans / (1 - g.rot)


def _images(m: PiecewiseMap) -> list[tuple[str, ConvexRegion]]:
    return [(label, transform(d, g)) for label, d, g in m.pieces()]


def classify(m: PiecewiseMap, domain: ConvexRegion | None = None):
    """Return (tag, witness) with tag in bijective|non-injective|non-surjective.

    The witness is the list of overlap regions (non-injective) or the list of
    uncovered regions (non-surjective); empty for bijective maps.
    """
    images = _images(m)
    overlaps = []
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            ov = intersect(images[i][1], images[j][1])
            if not ov.empty:
                overlaps.append(ov)
    if overlaps:
        return "non-injective", overlaps
    if domain is None:
        domain = whole_plane(m.n) if m.halfplane_split else None
    if domain is None:
        domain_pieces = [d for _, d, _ in m.pieces()]
    else:
        domain_pieces = [domain]
    uncovered = []
    for d in domain_pieces:
        uncovered.extend(difference(d, [im for _, im in images]))
    if uncovered:
        return "non-surjective", uncovered
    return "bijective", []


def step(m: PiecewiseMap, z: Cyclo, k: int = 0) -> tuple[str, Cyclo]:
    if m.halfplane_split:
        s = sign_re_im(z)[1]
        if s == 0:
            raise BoundaryError(z, k)
        b = m.branches[0] if s > 0 else m.branches[1]
        return b.label, b.map(z)
    for b in m.branches:
        for d in b.domains:
            where = contains(d, z)
            if where == INTERIOR:
                return b.label, b.map(z)
            if where == BOUNDARY:
                raise BoundaryError(z, k)
    raise BoundaryError(z, k)


def code_orbit(m: PiecewiseMap, z: Cyclo, n: int, keep_points: bool = False) -> Coding:
    if n < 0:
        raise ValueError("n must be non-negative")
    word = []
    pts = []
    for k in range(n):
        try:
            a, z2 = step(m, z, k)
        except BoundaryError:
            return Coding("".join(word), k, pts)
        word.append(a)
        if keep_points:
            pts.append(z)
        z = z2
    return Coding("".join(word), None, pts)


def inverse_map(m: PiecewiseMap) -> PiecewiseMap:
    tag, _ = classify(m)
    if tag != "bijective":
        raise ValueError(f"map is {tag}; only bijective maps have an inverse")
    branches = tuple(
        Branch(b.label, tuple(transform(d, b.map) for d in b.domains), b.map.inverse())
        for b in m.branches
    )
    return PiecewiseMap(m.n, branches, theta=m.theta, halfplane_split=False, name=f"inverse of {m.name}")

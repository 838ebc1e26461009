from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import rat
from pwrot.cyclotomic import zeta
from pwrot.geometry import (
    BOUNDARY,
    INTERIOR,
    OUTSIDE,
    HalfPlane,
    Isometry,
    area,
    clip,
    contains,
    convex_hull,
    difference,
    intersect,
    point,
    polygon,
    region_from_halfplanes,
    subset,
    transform,
    vertices_and_rays,
)

N = 8
R2 = zeta(N) + zeta(N, 7)
coord = st.fractions(min_value=-3, max_value=3, max_denominator=4)
# points with coordinates in Q(sqrt 2) so that clipping meets irrational lines
real8 = st.tuples(coord, coord).map(lambda ab: ab[0] + ab[1] * R2 * Fraction(1, 2))
points8 = st.tuples(real8, real8).map(lambda xy: point(xy[0], xy[1], N))


@st.composite
def hulls(draw, max_points=5):
    pts = draw(st.lists(points8, min_size=3, max_size=max_points, unique=True))
    r = convex_hull(pts)
    assume(not r.empty)
    return r


@st.composite
def halfplanes(draw):
    a, b = draw(real8), draw(real8)
    assume(not (a.is_zero() and b.is_zero()))
    return HalfPlane.make(a, b, draw(real8))


isometries = st.tuples(st.integers(0, N - 1), points8).map(lambda kt: Isometry(zeta(N, kt[0]), kt[1]))


def square(x0, y0, side, n=N):
    return polygon([point(x0, y0, n), point(x0 + side, y0, n), point(x0 + side, y0 + side, n), point(x0, y0 + side, n)])


def test_unit_square_area_and_vertices():
    s = square(0, 0, 1)
    assert area(s) == 1
    assert len(vertices_and_rays(s)[0]) == 4
    assert s.is_bounded()


def test_contains_classification():
    s = square(0, 0, 2)
    assert contains(s, point(1, 1, N)) == INTERIOR
    assert contains(s, point(0, 1, N)) == BOUNDARY
    assert contains(s, point(3, 1, N)) == OUTSIDE


def test_halfplane_normalization_is_canonical():
    assert HalfPlane.make(2, 4, -6, N) == HalfPlane.make(1, 2, -3, N)
    with pytest.raises(ValueError):
        HalfPlane.make(0, 0, 1, N)


def test_quadrant_has_one_vertex_and_two_rays():
    q = region_from_halfplanes([HalfPlane.make(1, 0, 0, N), HalfPlane.make(0, 1, 0, N)])
    verts, rays = vertices_and_rays(q)
    assert len(verts) == 1 and len(rays) == 2
    assert not q.is_bounded()
    tri = intersect(q, polygon([point(1, 0, N), point(0, 1, N), point(-1, 0, N)]))
    assert area(tri) == Fraction(1, 2)


def test_octagon_rotation_invariance():
    pts = [zeta(N, k) for k in range(N)]
    oct_ = convex_hull(pts)
    assert transform(oct_, Isometry(zeta(N), rat(N, 0))) == oct_
    assert area(oct_) == 2 * R2


def test_difference_pieces_are_disjoint():
    pieces = difference(square(0, 0, 4), [square(1, 1, 2)])
    assert sum((area(p) for p in pieces), rat(N, 0)) == 12
    for i, p in enumerate(pieces):
        for q in pieces[i + 1:]:
            assert intersect(p, q).empty


def test_geometry_needs_i():
    with pytest.raises(ValueError):
        point(1, 1, 6)


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(hulls(), halfplanes())
def test_clip_splits_area(r, h):
    a1, a2 = clip(r, h), clip(r, h.complement())
    assert area(a1) + area(a2) == area(r)
    assert subset(a1, r) and subset(a2, r)
    assert intersect(a1, a2).empty


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(hulls(), isometries)
def test_transform_preserves_area_and_inverts(r, g):
    img = transform(r, g)
    assert area(img) == area(r)
    assert transform(img, g.inverse()) == r
    for v in vertices_and_rays(r)[0]:
        assert contains(img, g(v)) == BOUNDARY


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(hulls(max_points=4), hulls(max_points=4))
def test_intersection_and_difference_partition(r, s):
    inter = intersect(r, s)
    rest = difference(r, [s])
    assert area(inter) + sum((area(p) for p in rest), rat(N, 0)) == area(r)
    assert subset(inter, s)


def test_hull_of_collinear_points_is_empty():
    assert convex_hull([point(0, 0, N), point(1, 1, N), point(2, 2, N)]).empty

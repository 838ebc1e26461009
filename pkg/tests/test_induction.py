from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwrot.dynamics import build_map, code_orbit
from pwrot.geometry import INTERIOR, area, contains, intersect, transform, vertices_and_rays
from pwrot.induction import (
    StepCapExceeded,
    Substitution,
    base_cone,
    extract_substitution,
    first_return,
    induced_map,
    relabel,
)
from pwrot.symbolic import SubstitutionGraph, cell_of_prefix, graph_language, project_word

SIGMA6 = {"A": "A", "B": "AB", "C": "AC", "D": "ACB", "E": "ACCBB"}


@pytest.fixture(scope="module")
def sixth():
    m = build_map(Fraction(1, 6), sigma=0)
    rs = first_return(m, base_cone(m), 20)
    return m, rs, induced_map(rs)


def test_substitution_apply_and_power():
    s = Substitution(SIGMA6)
    assert s("BE") == "ABACCBB"
    assert s.power("B", 2) == s(s("B"))
    with pytest.raises(ValueError):
        Substitution({"A": ""})


def test_sixth_return_pieces_partition_cone(sixth):
    m, rs, _ = sixth
    assert not rs.unresolved
    assert len(rs.pieces) == 5
    regs = [r for p in rs.pieces for r in p.regions]
    for i, r in enumerate(regs):
        for s in regs[i + 1:]:
            assert intersect(r, s).empty


def test_sixth_substitution_by_translation(sixth):
    _, _, ind = sixth
    sub, h, _ = extract_substitution(ind, "A")
    assert sub == Substitution(SIGMA6)
    assert h.mul == 1 and h.trans == -4


def test_quarter_substitution():
    m = build_map(Fraction(1, 4), sigma=0)
    rs = first_return(m, base_cone(m), 20)
    rs = relabel(rs, {"A": "011100", "B": "01110", "C": "01100", "D": "0110"})
    sub, h, _ = extract_substitution(induced_map(rs), "D")
    assert sub == Substitution({"A": "DBC", "B": "DB", "C": "DC", "D": "D"})


def test_relabel_rejects_wrong_words(sixth):
    _, rs, _ = sixth
    with pytest.raises(ValueError):
        relabel(rs, {"A": "01"})


def test_step_cap_is_reported():
    m = build_map(Fraction(1, 8), sigma=0)
    rs = first_return(m, base_cone(m), 3)
    assert rs.unresolved
    with pytest.raises(ValueError):
        induced_map(rs)
    with pytest.raises(StepCapExceeded):
        first_return(m, base_cone(m), 3, strict=True)


def test_return_preserves_area():
    m = build_map(Fraction(1, 4), sigma=0)
    rs = first_return(m, base_cone(m), 20)
    for p in rs.pieces:
        for r in p.regions:
            if r.is_bounded():
                assert area(transform(r, p.map)) == area(r)


def _interior_point(r):
    verts, rays = vertices_and_rays(r)
    c = sum(verts[1:], verts[0]) / len(verts)
    if rays:
        c = c + rays[0] + rays[1]
    assert contains(r, c) == INTERIOR
    return c


def _language():
    m = build_map(Fraction(1, 6), sigma=0)
    rs = first_return(m, base_cone(m), 20)
    sub, _, _ = extract_substitution(induced_map(rs), "A")
    words = graph_language(SubstitutionGraph.loop(sub, "ABCDE"), 20, 4)
    return m, rs, sorted(words, key=lambda w: (len(w), w))


_M6, _RS6, _L6 = _language()
_IND6 = induced_map(_RS6)


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(st.sampled_from(_L6))
def test_substitution_soundness(u):
    # every generated factor is realized by the induced map, and a point of
    # its cell follows the projected binary word under the original map
    cells = cell_of_prefix(_IND6, u)
    assert cells
    w = project_word(_RS6.table(), u)
    z = _interior_point(cells[0])
    assert code_orbit(_M6, z, len(w)).word == w

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwrot.dynamics import build_map
from pwrot.geometry import Isometry, point
from pwrot.cyclotomic import zeta
from pwrot.induction import Substitution
from pwrot.symbolic import (
    SubstitutionGraph,
    approx_sequence,
    cyclic_equal,
    factors,
    family_theta_third,
    graph_language,
    load_graph,
    min_rotation,
    periodic_cell,
    periodic_factors,
    primitive_root,
    project_word,
    rotation_order,
    rotation_words,
    smallest_period,
)

words = st.text(alphabet="ABC", min_size=1, max_size=12)


def test_min_rotation_and_cyclic_equal():
    assert min_rotation("CAB") == "ABC"
    assert cyclic_equal("000111", "011100")
    assert not cyclic_equal("0011", "0101")


def test_primitive_root_and_period():
    assert primitive_root("ABAB") == "AB"
    assert smallest_period("ABCABCABCA", 5) == 3
    assert smallest_period("ABCD", 2) is None


def test_factors():
    assert factors("ABA", 2) - {""} == {"A", "B", "AB", "BA"}
    assert "BA" in periodic_factors("AB", 2)


def test_rotation_words():
    assert rotation_words(1, 4) == {"0011"}
    assert rotation_words(1, 3) == {"011", "001"}
    with pytest.raises(ValueError):
        rotation_words(2, 4)


def test_approx_sequence_converges_to_c_over_d():
    a = [approx_sequence(1, 3, k) for k in (0, 1, 5, 50)]
    assert all(x < Fraction(1, 3) for x in a)
    assert abs(a[-1] - Fraction(1, 3)) < abs(a[0] - Fraction(1, 3))


def test_graph_words_and_language():
    g = SubstitutionGraph.loop(Substitution({"A": "AB", "B": "A"}), ["A"])
    assert g.words(3) == {"A", "AB", "ABA", "ABAAB"}
    lang = graph_language(g, 2, 3)
    assert "BB" not in lang and "AA" in lang


def test_load_graph_rejects_unknown_vertex():
    with pytest.raises(ValueError):
        load_graph({"vertices": {"v": ["A"]}, "edges": [{"from": "v", "to": "w", "substitution": {"A": "A"}}]})


def test_family_theta_third_small():
    assert family_theta_third(1) == ["C", "AC", "BC", "ABC", "AABC", "BBAC"]


def test_rotation_order():
    n = 8
    assert rotation_order(Isometry(zeta(n, 2), point(1, 1, n))) == 4
    assert rotation_order(Isometry(zeta(n, 0), point(1, 0, n))) is None
    assert rotation_order(Isometry.identity(n)) == 1


def test_fixed_cell_of_quarter_map_is_square():
    m = build_map(Fraction(1, 4), sigma=0)
    rep = periodic_cell(m, "011100")
    assert rep.nonempty and rep.shape == 4


def test_translation_word_has_no_cell():
    m = build_map(Fraction(1, 4), sigma=0)
    rep = periodic_cell(m, "0011")
    assert not rep.periodic and not rep.nonempty


def test_project_word_unknown_letter():
    with pytest.raises(KeyError):
        project_word({"A": "01"}, "AB")


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(words, st.integers(0, 11))
def test_min_rotation_is_rotation_invariant(w, k):
    k %= len(w)
    assert min_rotation(w[k:] + w[:k]) == min_rotation(w)
    assert cyclic_equal(w, w[k:] + w[:k])


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(words, st.integers(1, 5))
def test_power_has_root_period(w, r):
    root = primitive_root(w)
    assert smallest_period(root * (r + 1), len(root)) == len(root)

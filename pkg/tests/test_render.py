import os
from fractions import Fraction
from pathlib import Path

import pytest

from pwrot.dynamics import build_map
from pwrot.induction import Substitution, base_cone, first_return
from pwrot.render import compact_word, emit_tables, render_svg, window_region

GOLDEN = Path(__file__).parent / "golden" / "quarter_return.svg"


def _partition():
    m = build_map(Fraction(1, 4), sigma=0)
    rs = first_return(m, base_cone(m), 20)
    return [(p.label, r) for p in rs.pieces for r in p.regions], rs


def test_compact_word():
    assert compact_word("0111000") == "0 1^3 0^3"
    assert compact_word("") == ""


def test_tables_list_every_piece():
    _, rs = _partition()
    text = emit_tables(rs)
    assert text.splitlines()[0].startswith("label")
    for p in rs.pieces:
        assert p.word in text
    sub = emit_tables(Substitution({"A": "AB", "B": "A"}))
    assert "AB" in sub


def test_window_must_be_ordered():
    with pytest.raises(ValueError):
        window_region([1, 0, 0, 1], 4)


def test_svg_matches_golden(tmp_path):
    items, _ = _partition()
    text = render_svg(items, [-9, 0, 1, 10], str(tmp_path / "out.svg"))
    assert (tmp_path / "out.svg").read_text() == text
    if os.environ.get("UPDATE_GOLDEN"):
        GOLDEN.write_text(text)
    assert text == GOLDEN.read_text()


def test_svg_is_deterministic():
    items, _ = _partition()
    assert render_svg(items, [-9, 0, 1, 10]) == render_svg(items, [-9, 0, 1, 10])

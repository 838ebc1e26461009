from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIELDS, cyclos
from pwrot.cyclotomic import (
    Cyclo,
    approx,
    cyclo_new,
    field_for_angle,
    format_cyclo,
    lift,
    parse_cyclo,
    sign_re_im,
    zeta,
)

pairs = st.sampled_from(FIELDS).flatmap(lambda n: st.tuples(cyclos(n), cyclos(n), cyclos(n)))


def _oracle(z: Cyclo) -> mpmath.mpc:
    """Evaluate the coefficient vector at exp(2 i pi / N) with 80 digits."""
    with mpmath.workdps(80):
        w = mpmath.exp(2j * mpmath.pi / z.n)
        return sum(mpmath.mpf(c.numerator) / c.denominator * w**k for k, c in enumerate(z.coeffs))


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 10, 12])
def test_zeta_has_order_n(n):
    z = zeta(n)
    assert z**n == 1
    assert all(z**k != 1 for k in range(1, n))


def test_sqrt2_in_eighth_field():
    z = zeta(8)
    r2 = z + z**7
    assert r2 * r2 == 2
    assert r2.sign() == 1


def test_near_cancellation_sign():
    # 665857/470832 is a convergent of sqrt(2); the difference is about 1.6e-12
    z = zeta(8)
    r2 = z + z**7
    d = r2 - Fraction(665857, 470832)
    assert not d.is_zero()
    assert d.sign() == -1
    assert (r2 - Fraction(1393, 985)).sign() == 1


def test_parse_format_round_trip():
    z = cyclo_new(8, [Fraction(1, 2), -3, 0, Fraction(5, 7)])
    assert parse_cyclo(format_cyclo(z)) == z


def test_mismatched_fields_raise():
    with pytest.raises(ValueError):
        zeta(8) + zeta(12)


def test_lift_preserves_value():
    z = zeta(4) + Fraction(1, 3)
    assert complex(lift(z, 12)) == pytest.approx(complex(z))
    assert lift(z, 12) == zeta(12, 3) + Fraction(1, 3)


def test_field_for_angle_contains_i():
    for q, n in [(4, 4), (6, 12), (8, 8), (3, 12), (5, 20)]:
        assert field_for_angle(Fraction(1, q)) == n


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        zeta(8) / (zeta(8) - zeta(8))


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(pairs)
def test_ring_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a * 1 == a
    if not a.is_zero():
        assert a * a.inverse() == 1
    assert (a * b).conj() == a.conj() * b.conj()


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(st.sampled_from([4, 8, 12]).flatmap(cyclos))
def test_sign_agrees_with_float_oracle(z):
    ref = _oracle(z)
    sx, sy = sign_re_im(z)
    for s, v in ((sx, ref.real), (sy, ref.imag)):
        if abs(v) > mpmath.mpf(10) ** -60:
            assert s == (1 if v > 0 else -1)
        else:
            assert s == 0


@pytest.mark.property
@settings(max_examples=1000, deadline=None)
@given(st.sampled_from(FIELDS).flatmap(cyclos))
def test_approx_box_contains_oracle(z):
    re_iv, im_iv = approx(z, 64)
    ref = _oracle(z)
    with mpmath.workdps(40):
        assert re_iv.a <= ref.real <= re_iv.b
        assert im_iv.a <= ref.imag <= im_iv.b

from fractions import Fraction

import mpmath
import pytest

from graphcalc.quadrature import (asymptotic_order_report,
                                  gaussian_log_integral, orders_pass,
                                  quartic_layer)


def test_quartic_layers():
    a4 = Fraction(-1)
    assert quartic_layer(0, Fraction(1), a4) == 0
    assert quartic_layer(1, Fraction(1), a4) == 0
    assert quartic_layer(2, Fraction(1), a4) == Fraction(-1, 8)
    assert quartic_layer(3, Fraction(1), a4) == Fraction(1, 12)


def test_integral_certified_and_sane():
    val = gaussian_log_integral(Fraction(-1, 24), Fraction(1),
                                Fraction(1, 10))
    # the leading correction is -h/8 = -0.0125; the value must be close
    assert abs(val + mpmath.mpf("0.0125")) < mpmath.mpf("0.001")
    assert val < 0


def test_integral_rejects_divergent_potential():
    with pytest.raises(ValueError):
        gaussian_log_integral(Fraction(1, 24), Fraction(1), Fraction(1, 10))


def test_observed_orders():
    rows = asymptotic_order_report(max_terms=3)
    assert orders_pass(rows)
    # every G contributes one row per ladder step
    assert len(rows) == 3 * 4
    # orders sharpen as h decreases
    for g in (1, 2, 3):
        obs = [r.observed for r in rows
               if r.order_terms == g and r.observed is not None]
        assert obs == sorted(obs)
        assert float(obs[-1]) > g - 0.3

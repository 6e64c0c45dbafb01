import random
from fractions import Fraction
from math import factorial

import pytest

from graphcalc.properties import _random_series
from graphcalc.series import (NonTerminatingExpansion, Series, SeriesMatrix,
                              TruncationSpec, hbar_layer,
                              matrix_geom_inverse, series_diff, series_exp,
                              series_from_obj, series_inverse, series_log1p,
                              series_substitute_X, series_to_obj, trace_log)
from graphcalc.symbols import HBAR, monomial, s_var, x_var


T = TruncationSpec(3, 2, 2)
X1 = Series.variable(x_var(1), T)
S11 = Series.variable(s_var(1, 1), T)
H = Series.variable(HBAR, T)


def naive_exp(a: Series) -> Series:
    out = Series.one(a.trunc)
    power = Series.one(a.trunc)
    for n in range(1, 40):
        power = power * a
        if not power:
            break
        out = out + power * Fraction(1, factorial(n))
    return out


def test_constructor_merges_and_drops():
    m = monomial([(x_var(1), 1)])
    s = Series([(m, Fraction(1, 2)), (m, Fraction(1, 2))], T)
    assert s.coefficient(m) == 1
    big = monomial([(x_var(1), T.dx + 1)])
    assert not Series({big: Fraction(1)}, T)


def test_arithmetic_basics():
    a = X1 + S11
    assert a - X1 == S11
    assert (X1 * S11).coefficient(monomial([(x_var(1), 1),
                                            (s_var(1, 1), 1)])) == 1
    assert X1 * 0 == Series.zero(T)
    assert (X1 ** 2) == X1 * X1
    assert 1 - S11 == Series.one(T) - S11


def test_truncation_bounds_products():
    assert not X1 ** (T.dx + 1)
    assert not S11 ** (T.ds + 1)
    assert not H * H  # h-exponent capped at g - 1


def test_exp_matches_naive_on_random_instances():
    rng = random.Random(2024)
    for _ in range(60):
        r = rng.choice((1, 2))
        trunc = TruncationSpec(rng.randint(1, 3), rng.randint(1, 2),
                               rng.randint(1, 3))
        a = _random_series(rng, r, trunc, closed_positive=True)
        assert series_exp(a) == naive_exp(a)


def test_exp_of_sum_is_product():
    a = X1 * Fraction(1, 3) + S11 * H
    b = X1 * S11 - H
    assert series_exp(a + b) == series_exp(a) * series_exp(b)


def test_exp_rejects_divergent_argument():
    div = Series.term(1, [(HBAR, -1)], T)
    with pytest.raises(NonTerminatingExpansion):
        series_exp(div)


def test_log_exp_roundtrip():
    a = X1 + S11 * X1 + H
    assert series_log1p(series_exp(a) - 1) == a


def test_inverse():
    a = 1 - S11 * X1
    assert series_inverse(a) * a == Series.one(T)


def test_diff_leibniz():
    a = X1 ** 2 + S11 * X1
    b = X1 + S11
    v = x_var(1)
    rt = T.reduce(dx=1)   # differentiation loses one order in x
    assert series_diff(a * b, v) == (series_diff(a, v) * b.restrict(rt)
                                     + a.restrict(rt) * series_diff(b, v))


def test_substitute_x_composition():
    a = X1 ** 2
    image = [X1 + S11 * X1]
    assert series_substitute_X(a, image) == (X1 + S11 * X1) ** 2


def test_hbar_layer_picks_single_power():
    a = X1 * H + S11
    layer = hbar_layer(a, 2)   # h^(g-1) with g=2 is h^1
    assert layer.coefficient(monomial([(x_var(1), 1)])) == 1
    assert len(layer) == 1


def test_matrix_geometric_inverse():
    m = SeriesMatrix([[S11 * X1]])
    inv = matrix_geom_inverse(m)
    prod = (SeriesMatrix.identity(1, T) - m) @ inv
    assert prod == SeriesMatrix.identity(1, T)


def test_trace_log_of_rank_one():
    # trace_log(M) is tr ln(E - M); for a 1x1 matrix that is log1p(-m)
    m = SeriesMatrix([[S11 * X1]])
    assert trace_log(m) == series_log1p(-(S11 * X1))


def test_json_roundtrip():
    a = X1 ** 2 * Fraction(3, 7) + S11 * H - Series.term(
        Fraction(1, 2), [(("a", 1, (2,)), 1), (HBAR, -1), (x_var(1), 1)], T)
    assert series_from_obj(series_to_obj(a)) == a

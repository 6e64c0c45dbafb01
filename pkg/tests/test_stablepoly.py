from fractions import Fraction as F

import pytest

from graphcalc.ring import Poly
from graphcalc.stablepoly import (StablePolyError, comb_poly_str, derive,
                                  solve_P, solve_P_comb, specialize_comb,
                                  stable_poly_enumerated)
from graphcalc.symbols import monomial


GOLDEN = {
    2: {2: F(1, 8), 3: F(5, 24)},
    3: {3: F(1, 48), 4: F(11, 48), 5: F(25, 48), 6: F(5, 16)},
    4: {4: F(1, 384), 5: F(223, 1920), 6: F(515, 576), 7: F(1373, 576),
        8: F(985, 384), 9: F(1105, 1152)},
    5: {5: F(1, 3840), 6: F(27, 640), 7: F(9583, 11520), 8: F(2089, 384),
        9: F(12227, 768), 10: F(26581, 1152), 11: F(12455, 768),
        12: F(565, 128)},
    6: {6: F(1, 46080), 7: F(803, 64512), 8: F(2597, 4608),
        9: F(1573507, 207360), 10: F(519883, 11520), 11: F(121207, 864),
        12: F(10154003, 41472), 13: F(371195, 1536), 14: F(387005, 3072),
        15: F(82825, 3072)},
}


def test_golden_tables():
    for g, table in GOLDEN.items():
        assert solve_P_comb(g) == table


def test_string_rendering():
    assert comb_poly_str(solve_P_comb(2)) == "5/24*s^3 + 1/8*s^2"


def test_genus2_symbolic_single_color():
    p = solve_P(2, 1)
    expected = (
        Poly.term(F(5, 24), [(("s", 1, 1), 3), (("a", 0, (3,)), 2)])
        + Poly.term(F(1, 2), [(("s", 1, 1), 2), (("a", 0, (3,)), 1),
                              (("a", 1, (1,)), 1)])
        + Poly.term(F(1, 8), [(("s", 1, 1), 2), (("a", 0, (4,)), 1)])
        + Poly.term(F(1, 2), [(("s", 1, 1), 1), (("a", 1, (1,)), 2)])
        + Poly.term(F(1, 2), [(("s", 1, 1), 1), (("a", 1, (2,)), 1)])
        + Poly.term(F(1), [(("a", 2, (0,)), 1)])
    )
    assert p == expected


def test_specialization_matches_comb():
    for g in range(2, 7):
        assert specialize_comb(solve_P(g, 1)) == solve_P_comb(g)


def test_matches_enumeration():
    for g, r in ((2, 1), (3, 1), (2, 2)):
        assert solve_P(g, r) == stable_poly_enumerated(g, r)


def test_homogeneous_and_bounded():
    for g, r in ((2, 1), (3, 1), (4, 1), (2, 2), (3, 2)):
        p = solve_P(g, r)
        assert p.is_homogeneous(1 - g)
        assert max(p.s_degrees()) <= 3 * g - 3


def test_derive_is_color_symmetric():
    p = solve_P(2, 2)
    d12 = derive(derive(p, 1, 2), 2, 2)
    d21 = derive(derive(p, 2, 2), 1, 2)
    assert d12 == d21


def test_rejects_low_genus():
    with pytest.raises(StablePolyError):
        solve_P(1, 1)
    with pytest.raises(StablePolyError):
        solve_P_comb(1)


def test_symbolic_two_color_mirror_symmetry():
    # swapping the two colors permutes the monomials of P_g
    p = solve_P(2, 2)

    def flip_sym(sym):
        if sym[0] == "s":
            return ("s", 3 - sym[2], 3 - sym[1])
        if sym[0] == "a":
            return ("a", sym[1], sym[2][::-1])
        return sym

    def flip(m):
        return monomial([(flip_sym(s) if s[0] != "s"
                          else ("s", min(3 - s[1], 3 - s[2]),
                                max(3 - s[1], 3 - s[2])), e)
                         for s, e in m])

    flipped = Poly([(flip(m), c) for m, c in p.terms.items()])
    assert flipped == p

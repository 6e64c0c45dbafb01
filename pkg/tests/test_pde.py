from fractions import Fraction

import pytest

from graphcalc.pde import (PdeProblem, default_vertex_ok, psi_tilde_via_exp,
                           residual, solve, u_counting, u_quartic,
                           u_symbolic)
from graphcalc.graphs import psi_by_enumeration
from graphcalc.series import TruncationSpec, series_exp
from graphcalc.symbols import monomial


TR = TruncationSpec(2, 2, 2)


def test_invalid_kind_rejected():
    with pytest.raises(ValueError):
        PdeProblem("diffusion", 1, u_symbolic(1), TR)


def test_residuals_vanish():
    for kind in ("burgers", "heat"):
        problem = PdeProblem(kind, 1, u_symbolic(1), TR)
        res = residual(problem, solve(problem))
        assert all(not v for v in res.values())


def test_connected_solution_matches_enumeration():
    conn = solve(PdeProblem("burgers", 1, u_symbolic(1), TR))
    assert conn == psi_by_enumeration(1, TR, vertex_ok=default_vertex_ok,
                                      connected=True)


def test_heat_solution_is_exp_of_connected():
    heat = solve(PdeProblem("heat", 1, u_symbolic(1), TR))
    assert heat == psi_tilde_via_exp(1, u_symbolic(1), TR)
    # plain exp inside the same box is NOT exact: products of tree terms
    # leave the box and come back, so the inflated-box bridge is required
    conn = solve(PdeProblem("burgers", 1, u_symbolic(1), TR))
    assert series_exp(conn) != heat


def test_two_colors_small_box():
    tr = TruncationSpec(1, 1, 2)
    conn = solve(PdeProblem("burgers", 2, u_symbolic(2), tr))
    assert conn == psi_by_enumeration(2, tr, vertex_ok=default_vertex_ok,
                                      connected=True)


def test_counting_potential_support():
    tr = TruncationSpec(4, 1, 1)
    stable = u_counting("stable")(tr)
    comb = u_counting("comb")(tr)
    for n in (0, 1, 2):
        assert not stable.coefficient(monomial([(("x", 1), n), (("h",), -1)]))
    assert comb.coefficient(monomial([(("x", 1), 3), (("h",), -1)])) \
        == Fraction(1, 6)
    with pytest.raises(ValueError):
        u_counting("other")


def test_quartic_potential():
    tr = TruncationSpec(4, 1, 1)
    u = u_quartic()(tr)
    assert u.coefficient(monomial([(("x", 1), 4), (("h",), -1)])) \
        == Fraction(-1, 24)
    assert len(u) == 1


def test_initial_condition_recovered_at_s_zero():
    sol = solve(PdeProblem("burgers", 1, u_symbolic(1), TR))
    u0 = u_symbolic(1)(TR)
    at_s0 = {m: c for m, c in sol.terms.items()
             if not any(sym[0] == "s" for sym, _ in m)}
    assert at_s0 == u0.terms

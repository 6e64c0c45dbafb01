from fractions import Fraction

import pytest

from graphcalc.graphs import (EnumerationError, GraphBounds, ModularGraph,
                              automorphism_order, cycle_class_oracle,
                              enumerate_graphs, graph_series,
                              psi_by_enumeration)
from graphcalc.pde import default_vertex_ok
from graphcalc.series import TruncationSpec, series_exp
from graphcalc.symbols import monomial


def closed_classes(g, stable=False):
    bounds = GraphBounds(max_genus=g, max_tails=(0,),
                         max_s_vertices=3 * g - 3 if stable else 3 * g)
    return enumerate_graphs(1, bounds, connected_only=True,
                            stable_only=stable, min_genus=g,
                            vertex_ok=None if stable else default_vertex_ok)


def test_closed_genus2_stable_classes():
    classes = closed_classes(2, stable=True)
    # one vertex of genus 2; loop on genus 1; two genus-1 vertices joined;
    # genus-1 vertex with a looped 3-valent one; figure-eight; theta;
    # dumbbell
    assert len(classes) == 7
    by_aut = sorted(c.aut_order for c in classes)
    assert by_aut == [1, 2, 2, 2, 8, 8, 12]


def test_theta_and_dumbbell_weights():
    classes = closed_classes(2, stable=True)
    mu_theta_dumbbell = monomial([(("s", 1, 1), 3), (("a", 0, (3,)), 2)])
    coef = sum(Fraction(1, c.aut_order) for c in classes
               if c.mu == mu_theta_dumbbell)
    # 1/12 (theta) + 1/8 (dumbbell)
    assert coef == Fraction(5, 24)


def _theta():
    # two vertices joined by three parallel edges
    return ModularGraph(r=1, genera=(0, 0),
                        s_pairs=(((0, 0), (1, 0)),) * 3,
                        tails=((0,), (0,)))


def test_single_vertex_automorphisms():
    # one genus-0 vertex with a single loop: swapping the loop ends
    loop = ModularGraph(r=1, genera=(0,), s_pairs=((((0, 0)), (0, 0)),),
                        tails=((0,),))
    assert automorphism_order(loop) == 2
    assert automorphism_order(_theta()) == 12


def test_genus_formula():
    assert _theta().genus() == 2
    assert _theta().is_connected()


def test_connected_series_exponentiates_to_full_series():
    trunc = TruncationSpec(2, 2, 2)
    conn = psi_by_enumeration(1, trunc, vertex_ok=default_vertex_ok,
                              connected=True)
    full = psi_by_enumeration(1, trunc, vertex_ok=default_vertex_ok,
                              connected=False)
    # the multiset-union assembly must agree with the exponential formula
    tinf = TruncationSpec(trunc.dx, trunc.ds, trunc.g + trunc.dx + trunc.ds,
                          phi_cap=trunc.g - 1 + trunc.dx + trunc.ds)
    bounds = GraphBounds(max_genus=tinf.g, max_tails=(trunc.dx,),
                         max_s_vertices=trunc.ds)
    pool = enumerate_graphs(
        1, bounds, connected_only=True,
        vertex_ok=lambda g, n: g <= trunc.g and default_vertex_ok(g, n),
        max_vertex_genus=trunc.g, phi_cap=tinf.phi_cap)
    via_exp = series_exp(graph_series(pool, tinf)).restrict(trunc)
    assert full == via_exp
    assert conn != full


def test_divergence_guard():
    trunc = TruncationSpec(1, 1, 2)
    with pytest.raises(EnumerationError):
        psi_by_enumeration(1, trunc, vertex_ok=None, connected=False)


def test_class_limit_guard(monkeypatch):
    monkeypatch.setenv("GRAPHCALC_MAX_CLASSES", "3")
    with pytest.raises(EnumerationError):
        closed_classes(2, stable=True)


def test_cycle_oracle_single_loop():
    # k=1: a single a-vertex with a loop, weight s/2 per symmetry
    trunc = TruncationSpec(0, 1, 2)
    cyc = cycle_class_oracle(1, 1, trunc, vertex_ok=default_vertex_ok)
    m = monomial([(("s", 1, 1), 1), (("a", 0, (2,)), 1)])
    assert cyc.coefficient(m) == Fraction(1, 2)

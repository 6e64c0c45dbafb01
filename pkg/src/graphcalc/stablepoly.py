"""Closed stable graph polynomials and their counting specialization.

P_g collects mu(G)/|Aut G| over closed stable genus-g graphs: vertices carry
a_{m,N} (genus-0 vertices at least trivalent, genus-1 at least univalent),
edges carry s_ij.  The polynomials are computed by an edge-insertion
recurrence: differentiating in s_ij marks an edge, and cutting it leaves
either one genus-(g-1) graph with two extra tails or an ordered pair of
lower-genus pieces.  Genus 1 contributes no honest polynomial; the cut
pieces it would produce are supplied in closed form (`q1`).

The derivation D_k adds a tail of color k in all possible ways: directly on
a vertex, or on a new trivalent vertex splitting an edge.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .ring import Poly, mono_s_degree
from .symbols import (a_var, mi_add, mi_unit, mono_exponent, mono_mul,
                      mono_str, monomial, pair_factorial, s_var)


class StablePolyError(Exception):
    pass


def _mi(r: int, *colors: int) -> tuple:
    return mi_add(*(mi_unit(c, r) for c in colors)) if colors else (0,) * r


@lru_cache(maxsize=None)
def _d_symbol(sym, k: int, r: int) -> Poly:
    """D_k on a single generator."""
    if sym[0] == "a":
        return Poly.variable(a_var(sym[1], mi_add(sym[2], mi_unit(k, r))))
    if sym[0] == "s":
        i, j = sym[1], sym[2]
        terms: dict = {}
        for p in range(1, r + 1):
            for q in range(1, r + 1):
                m = monomial([(s_var(i, p), 1), (s_var(j, q), 1),
                              (a_var(0, _mi(r, p, q, k)), 1)])
                terms[m] = terms.get(m, Fraction(0)) + 1
        return Poly(terms)
    raise StablePolyError("D_k is undefined on %r" % (sym,))


def derive(p: Poly, k: int, r: int) -> Poly:
    """The derivation with D_k(a_{m,N}) = a_{m,N+{k}} and
    D_k(s_ij) = sum_{p,q} s_ip s_jq a_{0,{pqk}}."""
    out: dict = {}
    for m, c in p.terms.items():
        for sym, e in m:
            rest = monomial([pp for pp in m if pp[0] != sym] + [(sym, e - 1)])
            for im, ic in _d_symbol(sym, k, r).terms.items():
                mm = mono_mul(rest, im)
                out[mm] = out.get(mm, Fraction(0)) + c * e * ic
    return Poly(out)


def q1(i: int, r: int) -> Poly:
    """What cutting an edge off a genus-1 piece leaves: the one-tail sum
    a_{1,{i}} + (1/2) sum_{p,q} s_pq a_{0,{ipq}} standing in for D_i(P_1)."""
    terms = {monomial([(a_var(1, mi_unit(i, r)), 1)]): Fraction(1)}
    for p in range(1, r + 1):
        for q in range(1, r + 1):
            m = monomial([(s_var(p, q), 1), (a_var(0, _mi(r, i, p, q)), 1)])
            terms[m] = terms.get(m, Fraction(0)) + Fraction(1, 2)
    return Poly(terms)


@lru_cache(maxsize=None)
def _d_p(g: int, i: int, r: int) -> Poly:
    return q1(i, r) if g == 1 else derive(solve_P(g, r), i, r)


@lru_cache(maxsize=None)
def solve_P(g: int, r: int) -> Poly:
    """The genus-g stable graph polynomial in a_{m,N} and s_ij.

    Solved from d P_g / d s_ij = (1/{ij}!) [ D_i D_j (P_{g-1})
        + sum_{p,q} D_p(P_{g-1}) s_pq a_{0,{ijq}}
        + sum_{m=1}^{g-1} D_i(P_m) D_j(P_{g-m}) ]
    with P_g(S=0) = a_{g,0}; every s_ij flow must assign consistent
    coefficients, which checks the right-hand sides against each other.
    """
    if g < 2:
        raise StablePolyError("closed stable graphs need genus >= 2")
    rhs_by_pair = {}
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            rhs = derive(_d_p(g - 1, j, r), i, r)
            for p in range(1, r + 1):
                for q in range(1, r + 1):
                    rhs = rhs + _d_p(g - 1, p, r) * Poly.term(
                        1, [(s_var(p, q), 1), (a_var(0, _mi(r, i, j, q)), 1)])
            for m in range(1, g):
                rhs = rhs + _d_p(m, i, r) * _d_p(g - m, j, r)
            rhs_by_pair[(i, j)] = Fraction(1, pair_factorial(i, j)) * rhs

    coeffs: dict = {}
    for (i, j), rhs in rhs_by_pair.items():
        sij = s_var(i, j)
        for m, c in rhs.terms.items():
            mm = mono_mul(m, ((sij, 1),))
            val = c / mono_exponent(mm, sij)
            old = coeffs.setdefault(mm, val)
            if old != val:
                raise StablePolyError("inconsistent flows at %s" % mono_str(mm))
    # every edge variable of an assigned monomial must predict the same value
    for mm, val in coeffs.items():
        for (i, j), rhs in rhs_by_pair.items():
            e = mono_exponent(mm, s_var(i, j))
            if not e:
                continue
            lower = monomial([p for p in mm if p[0] != s_var(i, j)]
                             + [(s_var(i, j), e - 1)])
            if rhs.coefficient(lower) / e != val:
                raise StablePolyError("flows disagree at %s" % mono_str(mm))

    p_g = Poly(coeffs) + Poly.variable(a_var(g, (0,) * r))
    if not p_g.is_homogeneous(1 - g):
        raise StablePolyError("P_%d is not homogeneous of degree %d" % (g, 1 - g))
    if max(p_g.s_degrees()) > 3 * g - 3:
        raise StablePolyError("P_%d exceeds edge degree %d" % (g, 3 * g - 3))
    return p_g


def stable_poly_enumerated(g: int, r: int) -> Poly:
    """Independent brute-force path: sum mu/|Aut| over the enumerated
    isomorphism classes of closed stable genus-g graphs."""
    from .graphs import GraphBounds, enumerate_graphs

    bounds = GraphBounds(max_genus=g, max_tails=(0,) * r,
                         max_s_vertices=3 * g - 3)
    classes = enumerate_graphs(r, bounds, connected_only=True,
                               stable_only=True, min_genus=g)
    return Poly((cls.mu, Fraction(1, cls.aut_order)) for cls in classes)


# -- counting specialization -------------------------------------------------
#
# Setting a_{0,N} := 1 and a_{m,N} := 0 for m > 0 turns P_g into a univariate
# polynomial in a single edge weight s, the generating function of closed
# stable graphs with all vertices of genus 0, counted by number of edges.
# Univariate polynomials are plain {exponent: Fraction} dicts below.

def specialize_comb(p: Poly) -> dict:
    out: dict = {}
    for m, c in p.terms.items():
        if any(sym[0] == "a" and sym[1] > 0 for sym, _ in m):
            continue
        d = mono_s_degree(m)
        out[d] = out.get(d, Fraction(0)) + c
    return {d: c for d, c in out.items() if c}


def _u_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        c = out.get(e, Fraction(0)) + c
        if c:
            out[e] = c
        elif e in out:
            del out[e]
    return out


def _u_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _u_scale(a: dict, c) -> dict:
    c = Fraction(c)
    return {e: v * c for e, v in a.items() if v * c}


def _shifted_derivation(w: dict, degree: int) -> dict:
    """s(s+1) dw/ds - degree*w: the one-variable image of the derivation
    under a_{0,N} -> 1, s_ij -> s, acting on a degree-homogeneous image."""
    out: dict = {}
    for e, c in w.items():
        for shift in (0, 1):
            out[e + shift] = out.get(e + shift, Fraction(0)) + c * e
        out[e] = out.get(e, Fraction(0)) - c * degree
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def _q_comb(g: int) -> dict:
    if g == 1:
        return {1: Fraction(1, 2)}
    return _shifted_derivation(_comb_dict(g), g - 1)


@lru_cache(maxsize=None)
def _comb_dict(g: int) -> dict:
    if g < 2:
        raise StablePolyError("closed stable graphs need genus >= 2")
    rhs = _shifted_derivation(_q_comb(g - 1), g - 2)
    rhs = _u_add(rhs, {e + 1: c for e, c in _q_comb(g - 1).items()})
    for m in range(1, g):
        rhs = _u_add(rhs, _u_mul(_q_comb(m), _q_comb(g - m)))
    p_g = {e + 1: c / (2 * (e + 1)) for e, c in rhs.items() if c}
    if p_g and not (g <= min(p_g) and max(p_g) <= 3 * g - 3):
        raise StablePolyError(
            "P_%d^comb has edge degrees outside [%d, %d]" % (g, g, 3 * g - 3))
    return p_g


def solve_P_comb(g: int) -> dict:
    return dict(_comb_dict(g))


def comb_poly_str(p: dict) -> str:
    """Render a univariate polynomial like '5/24*s^3 + 1/8*s^2'."""
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        cs = ("%d/%d" % (c.numerator, c.denominator)
              if c.denominator != 1 else str(c.numerator))
        if e == 0:
            parts.append(cs)
        else:
            se = "s" if e == 1 else "s^%d" % e
            parts.append(se if c == 1 else "%s*%s" % (cs, se))
    return " + ".join(parts)

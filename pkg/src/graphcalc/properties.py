"""Randomized property checks shared by the test suite and the verify CLI.

Every check takes a seed and an instance count, raises AssertionError with a
description on the first failure, and returns the number of instances it
actually verified.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .ring import Poly
from .series import Series, TruncationSpec, series_exp, series_log1p
from .stablepoly import derive, solve_P, solve_P_comb
from .symbols import HBAR, a_var, monomial, s_var, x_var


def _fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def _random_monomial(rng: random.Random, r: int, trunc: TruncationSpec,
                     closed_positive: bool = False):
    """A random kept monomial with h-exponent >= 0 (>= 1 on terms with no
    x/s content when closed_positive, the shape series_exp accepts).

    Nonnegative h-exponents make the monomials outside the truncation box
    an ideal, so ring identities hold exactly; series with negative
    h-powers are only combined through the inflated working boxes that the
    solvers build internally."""
    while True:
        pairs = []
        xd = sd = 0
        for i in range(1, r + 1):
            e = rng.randint(0, 2)
            if e:
                pairs.append((x_var(i), e))
                xd += e
        for i in range(1, r + 1):
            for j in range(i, r + 1):
                e = rng.randint(0, 1)
                if e:
                    pairs.append((s_var(i, j), e))
                    sd += e
        if rng.random() < 0.5:
            g = rng.randint(0, 2)
            n = tuple(rng.randint(0, 2) for _ in range(r))
            pairs.append((a_var(g, n), 1))
        low = 1 if (closed_positive and xd + sd == 0) else 0
        if low > trunc.g - 1:
            continue
        h = rng.randint(low, trunc.g - 1)
        if h:
            pairs.append((HBAR, h))
        m = monomial(pairs)
        if trunc.keeps(m):
            return m


def _random_series(rng: random.Random, r: int, trunc: TruncationSpec,
                   n_terms: int = 4, closed_positive: bool = False) -> Series:
    terms = {}
    for _ in range(n_terms):
        terms[_random_monomial(rng, r, trunc, closed_positive)] = \
            _fraction(rng)
    return Series(terms, trunc)


def _random_poly(rng: random.Random, r: int, n_terms: int = 4) -> Poly:
    terms = []
    for _ in range(n_terms):
        pairs = []
        for i in range(1, r + 1):
            for j in range(i, r + 1):
                e = rng.randint(0, 2)
                if e:
                    pairs.append((s_var(i, j), e))
        g = rng.randint(0, 2)
        n = tuple(rng.randint(0, 3) for _ in range(r))
        pairs.append((a_var(g, n), rng.randint(1, 2)))
        terms.append((monomial(pairs), _fraction(rng)))
    return Poly(terms)


def check_ring_axioms(seed: int = 0, count: int = 100) -> int:
    """Associativity, commutativity, distributivity and units for both the
    truncated series ring and the polynomial ring."""
    rng = random.Random(seed)
    for k in range(count):
        r = rng.choice((1, 2))
        if k % 2 == 0:
            trunc = TruncationSpec(rng.randint(1, 3), rng.randint(1, 2),
                                   rng.randint(1, 3))
            a = _random_series(rng, r, trunc)
            b = _random_series(rng, r, trunc)
            c = _random_series(rng, r, trunc)
            one = Series.one(trunc)
        else:
            a = _random_poly(rng, r)
            b = _random_poly(rng, r)
            c = _random_poly(rng, r)
            one = Poly.constant(1)
        assert (a + b) + c == a + (b + c), "addition not associative"
        assert a + b == b + a, "addition not commutative"
        assert (a * b) * c == a * (b * c), "multiplication not associative"
        assert a * b == b * a, "multiplication not commutative"
        assert a * (b + c) == a * b + a * c, "not distributive"
        assert a * one == a, "unit law fails"
        assert a - a == a * 0, "additive inverse fails"
    return count


def check_leibniz(seed: int = 0, count: int = 100) -> int:
    """derive(-, k) is a derivation of the polynomial ring."""
    rng = random.Random(seed)
    for _ in range(count):
        r = rng.choice((1, 2))
        k = rng.randint(1, r)
        p = _random_poly(rng, r)
        q = _random_poly(rng, r)
        lhs = derive(p * q, k, r)
        rhs = derive(p, k, r) * q + p * derive(q, k, r)
        assert lhs == rhs, "Leibniz rule fails for D_%d" % k
    return count


def check_homogeneity(seed: int = 0, count: int = 100) -> int:
    """P_g is homogeneous of degree 1-g; each derivative drops the degree
    by one (D_k(P_g) has degree -g, D_i D_j(P_g) has degree -g-1)."""
    rng = random.Random(seed)
    for _ in range(count):
        r = rng.choice((1, 2))
        g = rng.randint(2, 3 if r == 2 else 4)
        p = solve_P(g, r)
        assert p.is_homogeneous(1 - g), "P_%d not of degree %d" % (g, 1 - g)
        i = rng.randint(1, r)
        j = rng.randint(1, r)
        di = derive(p, i, r)
        assert di.is_homogeneous(-g), "D(P_%d) not of degree %d" % (g, -g)
        assert derive(di, j, r).is_homogeneous(-g - 1), \
            "DD(P_%d) not of degree %d" % (g, -g - 1)
    return count


def check_s_degree_bounds(seed: int = 0, count: int = 100) -> int:
    """Edge counts of genus-g stable graphs are at most 3g-3; with all
    vertices of genus 0 (the pure combinatorial case) at least g."""
    rng = random.Random(seed)
    for _ in range(count):
        if rng.random() < 0.5:
            r = rng.choice((1, 2))
            g = rng.randint(2, 3 if r == 2 else 5)
            degrees = solve_P(g, r).s_degrees()
            low = 0      # the single genus-g vertex with no edges
        else:
            g = rng.randint(2, 6)
            degrees = set(solve_P_comb(g))
            low = g
        assert degrees, "P_%d vanished" % g
        assert min(degrees) >= low and max(degrees) <= 3 * g - 3, \
            "edge-count bounds violated for g=%d: %s" % (g, sorted(degrees))
    return count


def check_exp_log_roundtrip(seed: int = 0, count: int = 100) -> int:
    """log(exp a) == a and exp(log(1+b)) == 1+b on admissible arguments."""
    rng = random.Random(seed)
    for _ in range(count):
        r = rng.choice((1, 2))
        trunc = TruncationSpec(rng.randint(1, 3), rng.randint(1, 2),
                               rng.randint(1, 3))
        a = _random_series(rng, r, trunc, closed_positive=True)
        e = series_exp(a)
        assert series_log1p(e - 1) == a, "log(exp(a)) != a"
        assert series_exp(series_log1p(e - 1)) == e, "exp(log(e)) != e"
    return count


ALL_CHECKS = (
    ("ring axioms", check_ring_axioms),
    ("Leibniz rule", check_leibniz),
    ("homogeneity degrees", check_homogeneity),
    ("edge-count bounds", check_s_degree_bounds),
    ("exp/log round trip", check_exp_log_roundtrip),
)


def run_all(seed: int = 0, count: int = 100, report=None) -> bool:
    """Run every check; report(line) receives one line per property."""
    ok = True
    for name, check in ALL_CHECKS:
        try:
            n = check(seed, count)
            line = "PASS %s (%d instances)" % (name, n)
        except AssertionError as exc:
            ok = False
            line = "FAIL %s: %s" % (name, exc)
        if report is not None:
            report(line)
    return ok

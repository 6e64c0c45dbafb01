"""Numeric check of the asymptotic expansion of the one-variable integral.

For a single color the connected series at X = 0 is the asymptotic
expansion, as h -> 0+, of

    log [ (2 pi h s)^(-1/2) * Integral exp(U(xi, h) - xi^2/(2 h s)) d xi ].

With a quartic potential U = c * xi^4 / h the only nonzero vertex symbol is
a_{0,4} = 24 c, the genus-0 and genus-1 layers vanish at X = 0, and the
genus-g layer is the stable graph polynomial P_g evaluated at that vertex
weight.  Truncating the expansion after the h^(G-1) term must leave an
error of order h^G: numerically, halving h divides the error by about 2^G.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .stablepoly import solve_P


DEFAULT_PRECISION = 256


def quartic_layer(g: int, s: Fraction, a4: Fraction) -> Fraction:
    """The genus-g coefficient at X = 0 for the potential with fourth
    derivative a4 at the origin and all other vertex weights zero."""
    if g <= 1:
        return Fraction(0)
    total = Fraction(0)
    for m, c in solve_P(g, 1).terms.items():
        for sym, e in m:
            if sym[0] == "a":
                if sym[1] != 0 or sym[2] != (4,):
                    c = Fraction(0)
                    break
                c *= a4 ** e
            else:
                c *= s ** e
        if c:
            total += c
    return total


def gaussian_log_integral(quartic: Fraction, s: Fraction, hbar: Fraction,
                          prec_bits: int = DEFAULT_PRECISION):
    """log of the normalized integral for U = quartic * xi^4 / h at X = 0.

    Evaluated twice, at prec_bits and at doubled precision; raises if the
    two disagree beyond 1e-12 relative, so the returned value is trustworthy
    far below the asymptotic errors it is compared against.
    """
    if quartic >= 0:
        raise ValueError("the quartic coefficient must be negative for the "
                         "integral to converge")

    def compute(bits: int):
        with mpmath.workprec(bits):
            c = mpmath.mpf(quartic.numerator) / quartic.denominator
            sv = mpmath.mpf(s.numerator) / s.denominator
            hv = mpmath.mpf(hbar.numerator) / hbar.denominator

            def f(xi):
                return mpmath.exp(c * xi ** 4 / hv - xi ** 2 / (2 * hv * sv))

            # the integrand is even and decays past the Gaussian width
            cut = mpmath.sqrt(hv * sv) * 40
            val = 2 * mpmath.quad(f, [0, cut, 4 * cut])
            return mpmath.log(val / mpmath.sqrt(2 * mpmath.pi * hv * sv))

    lo, hi = compute(prec_bits), compute(2 * prec_bits)
    with mpmath.workprec(2 * prec_bits):
        if abs(lo - hi) > abs(hi) * mpmath.mpf("1e-12"):
            raise ArithmeticError("quadrature did not certify 1e-12 accuracy")
    return hi


@dataclass(frozen=True)
class OrderRow:
    order_terms: int      # G: partial sum kept through h^(G-1)
    hbar: Fraction
    numeric: object       # mpf
    partial: object       # mpf
    error: object         # mpf
    observed: object      # mpf order vs the next rung, None on the last


def asymptotic_order_report(max_terms: int = 3,
                            quartic: Fraction = Fraction(-1, 24),
                            s: Fraction = Fraction(1),
                            hbars=(Fraction(1, 10), Fraction(1, 20),
                                   Fraction(1, 40), Fraction(1, 80)),
                            prec_bits: int = DEFAULT_PRECISION):
    """Rows (G, h, numeric, partial sum, error, observed order) for
    G = 1..max_terms over the h ladder."""
    a4 = 24 * quartic
    numeric = {h: gaussian_log_integral(quartic, s, h, prec_bits)
               for h in hbars}
    rows = []
    with mpmath.workprec(prec_bits):
        for g_terms in range(1, max_terms + 1):
            errs = []
            for h in hbars:
                hv = mpmath.mpf(h.numerator) / h.denominator
                partial = mpmath.mpf(0)
                for g in range(2, g_terms + 1):
                    coeff = quartic_layer(g, s, a4)
                    partial += (mpmath.mpf(coeff.numerator)
                                / coeff.denominator) * hv ** (g - 1)
                err = abs(numeric[h] - partial)
                errs.append(err)
                rows.append([g_terms, h, numeric[h], partial, err, None])
            for i in range(len(hbars) - 1):
                ratio = hbars[i] / hbars[i + 1]
                logr = mpmath.log(ratio.numerator) - mpmath.log(
                    ratio.denominator)
                rows[-len(hbars) + i][5] = mpmath.log(
                    errs[i] / errs[i + 1]) / logr
    return [OrderRow(*row) for row in rows]


def orders_pass(rows, slack=Fraction(3, 10)) -> bool:
    """For every ladder the observed orders at the two smallest step pairs
    are at least G - slack (the coarse end of the ladder may still be
    outside the asymptotic regime)."""
    by_terms = {}
    for row in rows:
        if row.observed is not None:
            by_terms.setdefault(row.order_terms, []).append(row.observed)
    ok = bool(by_terms)
    for g_terms, observed in by_terms.items():
        for value in observed[-2:]:
            if value < g_terms - float(slack):
                ok = False
    return ok

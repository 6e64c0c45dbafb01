"""Exact polynomial ring in the vertex symbols a_{g,N} and edge symbols s_ij.

Unlike Series there is no truncation: stable graph polynomials are honest
polynomials.  The grading deg a_{g,N} = 1 - |N| - g, deg s_ij = 1 makes every
P_g homogeneous of degree 1 - g.
"""

from __future__ import annotations

from fractions import Fraction

from .symbols import (ONE, Monomial, Symbol, mono_mul, monomial, mono_str,
                      coeff_str, mi_total, symbol_key)


def symbol_degree(sym: Symbol) -> int:
    if sym[0] == "s":
        return 1
    if sym[0] == "a":
        return 1 - mi_total(sym[2]) - sym[1]
    raise ValueError("no grading for symbol %r" % (sym,))


def mono_degree(m: Monomial) -> int:
    return sum(symbol_degree(sym) * e for sym, e in m)


def mono_s_degree(m: Monomial) -> int:
    return sum(e for sym, e in m if sym[0] == "s")


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=()):
        clean = {}
        for m, c in (terms.items() if isinstance(terms, dict) else terms):
            c = Fraction(c)
            if c:
                c0 = clean.get(m)
                c = c if c0 is None else c0 + c
                if c:
                    clean[m] = c
                elif m in clean:
                    del clean[m]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def constant(c) -> "Poly":
        return Poly({ONE: Fraction(c)})

    @staticmethod
    def variable(sym: Symbol) -> "Poly":
        return Poly({monomial([(sym, 1)]): Fraction(1)})

    @staticmethod
    def term(c, pairs) -> "Poly":
        return Poly({monomial(pairs): Fraction(c)})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            c = out.get(m, Fraction(0)) + c
            if c:
                out[m] = c
            elif m in out:
                del out[m]
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly({m: v * c for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = out.get(m, Fraction(0)) + c1 * c2
                if c:
                    out[m] = c
                elif m in out:
                    del out[m]
        return Poly(out)

    __rmul__ = __mul__

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def diff_s(self, sym: Symbol) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            for s, e in m:
                if s == sym:
                    dm = monomial([p for p in m if p[0] != sym] + [(sym, e - 1)])
                    out[dm] = out.get(dm, Fraction(0)) + c * e
                    break
        return Poly(out)

    def s_degrees(self):
        return {mono_s_degree(m) for m in self.terms}

    def is_homogeneous(self, degree: int) -> bool:
        return all(mono_degree(m) == degree for m in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (-mono_s_degree(kv[0]),
                                      tuple((symbol_key(s), e) for s, e in kv[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            if m == ONE:
                parts.append(coeff_str(c))
            elif c == 1:
                parts.append(mono_str(m))
            else:
                parts.append("%s*%s" % (coeff_str(c), mono_str(m)))
        return " + ".join(parts)

    __repr__ = __str__

"""Symbols, multi-indices and sparse monomials shared by all rings.

A symbol is a plain tuple:

    ("x", i)        tail variable of color i (1-based)
    ("s", i, j)     edge variable, unordered pair stored with i <= j
    ("a", g, N)     vertex variable a_{g,N}, N a tuple of r tail counts
    ("h",)          the genus-counting variable (may carry negative exponents)

A monomial is a tuple of (symbol, exponent) pairs sorted in the canonical
order: s-symbols, then x-symbols, then a-symbols, then h; within a class,
lexicographically on the index data.  Zero exponents are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable

HBAR = ("h",)

_CLASS_RANK = {"s": 0, "x": 1, "a": 2, "h": 3}

Symbol = tuple
Monomial = tuple

ONE: Monomial = ()


def x_var(i: int) -> Symbol:
    if i < 1:
        raise ValueError("color index must be >= 1")
    return ("x", i)


def s_var(i: int, j: int) -> Symbol:
    if i < 1 or j < 1:
        raise ValueError("color indices must be >= 1")
    return ("s", min(i, j), max(i, j))


def a_var(g: int, n: Iterable[int]) -> Symbol:
    n = tuple(n)
    if g < 0 or any(c < 0 for c in n):
        raise ValueError("genus and valences must be nonnegative")
    return ("a", g, n)


def symbol_key(sym: Symbol):
    return (_CLASS_RANK[sym[0]],) + sym[1:]


def symbol_str(sym: Symbol) -> str:
    kind = sym[0]
    if kind == "x":
        return "x%d" % sym[1]
    if kind == "s":
        return "s%d%d" % (sym[1], sym[2])
    if kind == "a":
        return "a[%d;%s]" % (sym[1], ",".join(str(c) for c in sym[2]))
    return "h"


def parse_symbol(text: str) -> Symbol:
    if text == "h":
        return HBAR
    if text.startswith("x"):
        return x_var(int(text[1:]))
    if text.startswith("s"):
        digits = text[1:]
        if len(digits) != 2:
            raise ValueError("ambiguous s-symbol %r" % text)
        return s_var(int(digits[0]), int(digits[1]))
    if text.startswith("a[") and text.endswith("]"):
        g_part, n_part = text[2:-1].split(";")
        return a_var(int(g_part), (int(c) for c in n_part.split(",")))
    raise ValueError("cannot parse symbol %r" % text)


# -- multi-index helpers ----------------------------------------------------

def mi_unit(i: int, r: int) -> tuple:
    """The multi-index {i} with a single 1 at (1-based) position i."""
    return tuple(1 if k == i else 0 for k in range(1, r + 1))


def mi_add(*indices: tuple) -> tuple:
    return tuple(sum(col) for col in zip(*indices))


def mi_total(n: tuple) -> int:
    return sum(n)


def mi_factorial(n: tuple) -> int:
    out = 1
    for c in n:
        out *= factorial(c)
    return out


def pair_factorial(i: int, j: int) -> int:
    """{ij}! = 2 for i == j and 1 otherwise."""
    return 2 if i == j else 1


# -- monomials --------------------------------------------------------------

def monomial(pairs: Iterable[tuple]) -> Monomial:
    """Build a canonical monomial from (symbol, exponent) pairs."""
    acc: dict = {}
    for sym, e in pairs:
        if e:
            acc[sym] = acc.get(sym, 0) + e
    for sym, e in acc.items():
        if e < 0 and sym != HBAR:
            raise ValueError("negative exponent on %s" % symbol_str(sym))
    return tuple(sorted(((s, e) for s, e in acc.items() if e),
                        key=lambda p: symbol_key(p[0])))


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return monomial(list(m1) + list(m2))


def mono_degrees(m: Monomial) -> tuple:
    """Return (x-degree, s-degree, h-exponent) of a monomial."""
    xd = sd = hd = 0
    for sym, e in m:
        kind = sym[0]
        if kind == "x":
            xd += e
        elif kind == "s":
            sd += e
        elif kind == "h":
            hd = e
    return xd, sd, hd


def mono_exponent(m: Monomial, sym: Symbol) -> int:
    for s, e in m:
        if s == sym:
            return e
    return 0


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for sym, e in m:
        parts.append(symbol_str(sym) if e == 1 else "%s^%d" % (symbol_str(sym), e))
    return "*".join(parts)


def coeff_str(c: Fraction) -> str:
    return "%d/%d" % (c.numerator, c.denominator) if c.denominator != 1 else str(c.numerator)

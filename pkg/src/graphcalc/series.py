"""Truncated sparse power series over exact rationals.

A Series is a finite map monomial -> Fraction together with a TruncationSpec.
Monomials outside the spec's box (x-degree, s-degree, h-exponent window) are
dropped on construction, so every operation is exact within the box.  Series
values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .symbols import (HBAR, ONE, Monomial, Symbol, mono_degrees, mono_mul,
                      monomial, mono_str, coeff_str, parse_symbol, symbol_key,
                      symbol_str)

_EXP_ITERATION_CAP = 100000


class SeriesError(ValueError):
    pass


class TruncationMismatch(SeriesError):
    pass


class NonTerminatingExpansion(SeriesError):
    pass


@dataclass(frozen=True)
class TruncationSpec:
    """Order bounds: x-degree <= dx, s-degree <= ds, h-exponent <= g - 1.

    The h-exponent is bounded below by -(dx + ds); more negative powers can
    only arise from products of many tree components, each of which carries
    at least one tail or edge.

    `phi_cap`, when set, additionally bounds xd + sd + hd.  This combination
    is additive under multiplication and nonnegative on every genus-0
    factor, so a sub-product of a monomial inside the plain box never
    exceeds cap dx + ds + (g-1): the cap gives intermediate products exactly
    the h-headroom that later genus-0 factors can absorb, and no more.
    """

    dx: int
    ds: int
    g: int
    phi_cap: int | None = None

    def __post_init__(self):
        if self.dx < 0 or self.ds < 0 or self.g < 0:
            raise ValueError("truncation bounds must be nonnegative")

    @property
    def hfloor(self) -> int:
        return -(self.dx + self.ds)

    def keeps(self, m: Monomial) -> bool:
        xd, sd, hd = mono_degrees(m)
        if self.phi_cap is not None and xd + sd + hd > self.phi_cap:
            return False
        return xd <= self.dx and sd <= self.ds and self.hfloor <= hd <= self.g - 1

    def reduce(self, dx: int = 0, ds: int = 0) -> "TruncationSpec":
        return TruncationSpec(max(0, self.dx - dx), max(0, self.ds - ds),
                              self.g, self.phi_cap)


def _mono_sort_key(m: Monomial):
    return tuple((symbol_key(s), e) for s, e in m)


class Series:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms, trunc: TruncationSpec):
        clean = {}
        for m, c in (terms.items() if isinstance(terms, dict) else terms):
            c = Fraction(c)
            if c and trunc.keeps(m):
                c0 = clean.get(m)
                c = c if c0 is None else c0 + c
                if c:
                    clean[m] = c
                elif m in clean:
                    del clean[m]
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *_):
        raise AttributeError("Series is immutable")

    # -- construction helpers ------------------------------------------

    @staticmethod
    def zero(trunc: TruncationSpec) -> "Series":
        return Series({}, trunc)

    @staticmethod
    def one(trunc: TruncationSpec) -> "Series":
        return Series({ONE: Fraction(1)}, trunc)

    @staticmethod
    def constant(c, trunc: TruncationSpec) -> "Series":
        return Series({ONE: Fraction(c)}, trunc)

    @staticmethod
    def variable(sym: Symbol, trunc: TruncationSpec) -> "Series":
        return Series({monomial([(sym, 1)]): Fraction(1)}, trunc)

    @staticmethod
    def term(c, pairs, trunc: TruncationSpec) -> "Series":
        return Series({monomial(pairs): Fraction(c)}, trunc)

    # -- basic protocol -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.trunc, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _mono_sort_key(kv[0]))

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

    def _check_compat(self, other: "Series"):
        if self.trunc != other.trunc:
            raise TruncationMismatch(
                "truncation specs differ: %s vs %s" % (self.trunc, other.trunc))

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.constant(other, self.trunc)
        if not isinstance(other, Series):
            return NotImplemented
        self._check_compat(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            c = out.get(m, Fraction(0)) + c
            if c:
                out[m] = c
            elif m in out:
                del out[m]
        return Series(out, self.trunc)

    __radd__ = __add__

    def __neg__(self):
        return Series({m: -c for m, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.constant(other, self.trunc)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Series({m: v * c for m, v in self.terms.items()}, self.trunc)
        if not isinstance(other, Series):
            return NotImplemented
        self._check_compat(other)
        trunc = self.trunc
        out: dict = {}
        small, big = (self.terms, other.terms)
        if len(small) > len(big):
            small, big = big, small
        for m1, c1 in small.items():
            for m2, c2 in big.items():
                m = mono_mul(m1, m2)
                if trunc.keeps(m):
                    c = out.get(m, Fraction(0)) + c1 * c2
                    if c:
                        out[m] = c
                    elif m in out:
                        del out[m]
        return Series(out, trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise SeriesError("negative powers not supported; use series_inverse")
        out = Series.one(self.trunc)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def restrict(self, trunc: TruncationSpec) -> "Series":
        return Series(self.terms, trunc)


# -- named operations ---------------------------------------------------

def series_add(a: Series, b: Series) -> Series:
    return a + b


def series_mul(a: Series, b: Series) -> Series:
    return a * b


def _constant_like(terms) -> Monomial | None:
    """First monomial that neither gains (x, s)-degree nor raises h."""
    for m in terms:
        xd, sd, hd = mono_degrees(m)
        if xd == 0 and sd == 0 and hd <= 0:
            return m
    return None


def series_exp(a: Series) -> Series:
    bad = _constant_like(a.terms)
    if bad is not None:
        raise NonTerminatingExpansion(
            "exp does not terminate: monomial %s has no (x, s)-degree and "
            "h-exponent <= 0" % mono_str(bad))
    trunc = a.trunc
    # Terms without x- or s-degree carry h-exponent >= 1 (checked above), so
    # their exponential terminates by plain powers under the h-ceiling.
    closed: dict = {}
    by_weight: dict = {}
    for m, c in a.terms.items():
        xd, sd, _ = mono_degrees(m)
        if xd + sd == 0:
            closed[m] = c
        else:
            by_weight.setdefault(xd + sd, {})[m] = c
    out = Series.one(trunc)
    if closed:
        base = Series(closed, trunc)
        power = base
        k = 1
        while power:
            out = out + power * Fraction(1, factorial(k))
            power = power * base
            k += 1
            if k > _EXP_ITERATION_CAP:
                raise NonTerminatingExpansion(
                    "exp expansion failed to terminate")
    if by_weight:
        # exp(b) recovered degree by degree in the total (x, s)-degree w:
        # w * exp(b)_w = sum_v v * b_v * exp(b)_{w-v}.
        parts = {0: {ONE: Fraction(1)}}
        merged: dict = {}
        for w in range(1, trunc.dx + trunc.ds + 1):
            acc: dict = {}
            for v, av in by_weight.items():
                prev = parts.get(w - v)
                if v > w or not prev:
                    continue
                for m1, c1 in av.items():
                    vc1 = v * c1
                    for m2, c2 in prev.items():
                        m = mono_mul(m1, m2)
                        if trunc.keeps(m):
                            acc[m] = acc.get(m, Fraction(0)) + vc1 * c2
            parts[w] = {m: c / w for m, c in acc.items() if c}
            merged.update(parts[w])
        out = out * (Series.one(trunc) + Series(merged, trunc))
    return out


def series_log1p(a: Series) -> Series:
    if a.coefficient(ONE):
        raise SeriesError("log1p requires zero constant term")
    bad = _constant_like(a.terms)
    if bad is not None:
        raise NonTerminatingExpansion(
            "log1p does not terminate on monomial %s" % mono_str(bad))
    out = Series.zero(a.trunc)
    power = a
    k = 1
    while power:
        out = out + power * Fraction((-1) ** (k + 1), k)
        power = power * a
        k += 1
        if k > _EXP_ITERATION_CAP:
            raise NonTerminatingExpansion("log1p expansion failed to terminate")
    return out


def series_inverse(a: Series) -> Series:
    c0 = a.coefficient(ONE)
    if not c0:
        raise SeriesError("series with zero constant term is not invertible")
    u = a * Fraction(1, 1) * (1 / c0) - 1
    bad = _constant_like(u.terms)
    if bad is not None:
        raise NonTerminatingExpansion(
            "inverse does not terminate on monomial %s" % mono_str(bad))
    out = Series.one(a.trunc)
    power = u
    sign = -1
    while power:
        out = out + power * sign
        power = power * u
        sign = -sign
    return out * (1 / c0)


def series_diff(a: Series, v: Symbol) -> Series:
    """Formal partial derivative.

    The returned trunc is reduced by one in the differentiated variable: a
    series exact to x-degree dx determines its x-derivative only to dx - 1.
    """
    kind = v[0]
    if kind not in ("x", "s"):
        raise SeriesError("can only differentiate by x- or s-variables, not %s"
                          % symbol_str(v))
    trunc = a.trunc.reduce(dx=1) if kind == "x" else a.trunc.reduce(ds=1)
    out: dict = {}
    for m, c in a.terms.items():
        for sym, e in m:
            if sym == v:
                dm = monomial([p for p in m if p[0] != v] + [(v, e - 1)])
                out[dm] = out.get(dm, Fraction(0)) + c * e
                break
    return Series(out, trunc)


def series_substitute_X(a: Series, images, allow_constant: bool = False,
                        out_trunc=None) -> Series:
    """Substitute x_i -> images[i-1] (colors are 1-based).

    Without `allow_constant` every image must be free of (x, s)-constant
    terms; the flag is for substitutions like X -> X + S*Phi whose extra
    terms gain s-degree, which keeps the composition exact within trunc.

    `out_trunc` computes the result directly inside a smaller box: the
    images and all partial products are restricted up front.  This is
    exact when no image term has negative h-degree, because degrees then
    only grow under multiplication and nothing dropped can contribute to
    a kept monomial.
    """
    trunc = a.trunc
    for img in images:
        if img.trunc != trunc:
            raise TruncationMismatch("image truncation differs from argument")
        if not allow_constant:
            for m in img.terms:
                xd, sd, _ = mono_degrees(m)
                if xd == 0 and sd == 0:
                    raise SeriesError(
                        "substitution image has constant term %s" % mono_str(m))
    if out_trunc is not None:
        images = [img.restrict(out_trunc) for img in images]
        trunc = out_trunc
    powers = [{0: Series.one(trunc)} for _ in images]

    def img_power(i: int, e: int) -> Series:
        cache = powers[i]
        if e not in cache:
            cache[e] = img_power(i, e - 1) * images[i]
        return cache[e]

    out = Series.zero(trunc)
    for m, c in a.terms.items():
        rest = []
        xexp: dict = {}
        for sym, e in m:
            if sym[0] == "x":
                if sym[1] > len(images):
                    raise SeriesError("no image for %s" % symbol_str(sym))
                xexp[sym[1] - 1] = e
            else:
                rest.append((sym, e))
        piece = Series.term(c, rest, trunc)
        for i, e in xexp.items():
            piece = piece * img_power(i, e)
        out = out + piece
    return out


def series_substitute_A(a: Series, value_of) -> Series:
    """Specialize every a_{g,N} to the rational value_of(g, N)."""
    out: dict = {}
    for m, c in a.terms.items():
        rest = []
        for sym, e in m:
            if sym[0] == "a":
                c = c * Fraction(value_of(sym[1], sym[2])) ** e
                if not c:
                    break
            else:
                rest.append((sym, e))
        if c:
            rm = monomial(rest)
            c = out.get(rm, Fraction(0)) + c
            if c:
                out[rm] = c
            elif rm in out:
                del out[rm]
    return Series(out, a.trunc)


def hbar_layer(a: Series, genus: int) -> Series:
    """The coefficient series of h^(genus-1); the h variable is stripped."""
    want = genus - 1
    out = {}
    for m, c in a.terms.items():
        if mono_degrees(m)[2] == want:
            out[monomial(p for p in m if p[0] != HBAR)] = c
    return Series(out, a.trunc)


def common_restrict(a: Series, b: Series):
    """Restrict both series to the intersection of their truncation boxes."""
    t = TruncationSpec(min(a.trunc.dx, b.trunc.dx),
                       min(a.trunc.ds, b.trunc.ds),
                       min(a.trunc.g, b.trunc.g))
    return a.restrict(t), b.restrict(t)


# -- matrices of series --------------------------------------------------

class SeriesMatrix:
    __slots__ = ("rows", "trunc")

    def __init__(self, rows):
        rows = tuple(tuple(row) for row in rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise SeriesError("matrix must be square")
        trunc = rows[0][0].trunc
        for row in rows:
            for entry in row:
                if entry.trunc != trunc:
                    raise TruncationMismatch("mixed truncations in matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *_):
        raise AttributeError("SeriesMatrix is immutable")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, SeriesMatrix) and self.rows == other.rows

    @staticmethod
    def identity(n: int, trunc: TruncationSpec) -> "SeriesMatrix":
        one, zero = Series.one(trunc), Series.zero(trunc)
        return SeriesMatrix([[one if i == j else zero for j in range(n)]
                             for i in range(n)])

    @staticmethod
    def zero(n: int, trunc: TruncationSpec) -> "SeriesMatrix":
        z = Series.zero(trunc)
        return SeriesMatrix([[z] * n for _ in range(n)])

    def __add__(self, other):
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return SeriesMatrix([[a - b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.rows, other.rows)])

    def __matmul__(self, other):
        n = self.n
        return SeriesMatrix(
            [[sum((self.rows[i][k] * other.rows[k][j] for k in range(n)),
                  Series.zero(self.trunc)) for j in range(n)]
             for i in range(n)])

    def is_symmetric(self) -> bool:
        return all(self.rows[i][j] == self.rows[j][i]
                   for i in range(self.n) for j in range(i))

    def trace(self) -> Series:
        return sum((self.rows[i][i] for i in range(self.n)),
                   Series.zero(self.trunc))


def _check_no_constant_entries(m: SeriesMatrix, what: str):
    for row in m.rows:
        for entry in row:
            bad = _constant_like(entry.terms)
            if bad is not None:
                raise SeriesError(
                    "%s requires entries without constant terms; found %s"
                    % (what, mono_str(bad)))


def matrix_geom_inverse(m: SeriesMatrix) -> SeriesMatrix:
    """(E - M)^{-1} = E + M + M^2 + ... for M with no constant entries."""
    _check_no_constant_entries(m, "matrix_geom_inverse")
    out = SeriesMatrix.identity(m.n, m.trunc)
    power = m
    while any(e for row in power.rows for e in row):
        out = out + power
        power = power @ m
    return out


def trace_log(m: SeriesMatrix) -> Series:
    """tr ln(E - M) = -sum_k tr(M^k)/k for M with no constant entries."""
    _check_no_constant_entries(m, "trace_log")
    out = Series.zero(m.trunc)
    power = m
    k = 1
    while any(e for row in power.rows for e in row):
        out = out - power.trace() * Fraction(1, k)
        power = power @ m
        k += 1
    return out


# -- serialization --------------------------------------------------------

def series_to_obj(a: Series):
    return {
        "trunc": {"Dx": a.trunc.dx, "Ds": a.trunc.ds, "G": a.trunc.g},
        "terms": [
            {"monomial": [[symbol_str(s), e] for s, e in m],
             "coeff": "%d/%d" % (c.numerator, c.denominator)}
            for m, c in a.sorted_terms()
        ],
    }


def series_from_obj(obj) -> Series:
    t = obj["trunc"]
    trunc = TruncationSpec(t["Dx"], t["Ds"], t["G"])
    terms = {}
    for rec in obj["terms"]:
        m = monomial((parse_symbol(s), e) for s, e in rec["monomial"])
        terms[m] = Fraction(rec["coeff"])
    return Series(terms, trunc)

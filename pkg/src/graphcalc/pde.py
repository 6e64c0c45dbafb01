"""Evolution of the graph generating functions in the edge variables.

Two flows are implemented, both driven by the same right-hand sides:

    heat:     dF/ds_ij = (h / {ij}!) d^2F/dx_i dx_j          F|_{S=0} = exp(U)
    burgers:  dF/ds_ij = (h / {ij}!) (d^2F/dx_i dx_j
                                      + dF/dx_i * dF/dx_j)   F|_{S=0} = U

The solution is built degree by degree in S.  Each x-derivative costs one
order of x-accuracy, so the solver works internally at x-degree
dx + 2*ds and returns the restriction to the requested truncation.  The
s-degree-d layer is exact up to x-degree dx + 2*(ds - d), which is all the
later layers ever consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import (Series, SeriesError, TruncationSpec, common_restrict,
                     series_diff, series_exp)
from .symbols import (HBAR, a_var, mi_factorial, mono_degrees, mono_exponent,
                      mono_mul, mono_str, monomial, pair_factorial, s_var,
                      x_var)


class PdeConsistencyError(SeriesError):
    pass


@dataclass(frozen=True)
class PdeProblem:
    """kind is "heat" or "burgers"; u_builder(trunc) returns the vertex
    potential U as a Series in the x and h variables at the given trunc."""

    kind: str
    r: int
    u_builder: object
    trunc: TruncationSpec

    def __post_init__(self):
        if self.kind not in ("heat", "burgers"):
            raise ValueError("kind must be 'heat' or 'burgers'")


def internal_trunc(trunc: TruncationSpec) -> TruncationSpec:
    # xd + sd + hd is conserved by one flow step (two x-derivatives, one
    # s-edge, one h), so a phi_cap carries over unchanged.
    return TruncationSpec(trunc.dx + 2 * trunc.ds, trunc.ds, trunc.g,
                          trunc.phi_cap)


def _shift_h(a: Series, k: int) -> Series:
    """Multiply by h^k exactly (no boxed h-variable involved)."""
    return Series({mono_mul(m, ((HBAR, k),)): c for m, c in a.terms.items()},
                  a.trunc)


def _pairs(r: int):
    return [(i, j) for i in range(1, r + 1) for j in range(i, r + 1)]


def _rhs(kind: str, psi: Series, i: int, j: int) -> Series:
    # h is applied before the x-derivatives; see _layer_rhs_map
    d2 = series_diff(series_diff(_shift_h(psi, 1), x_var(i)), x_var(j))
    if kind == "burgers":
        di = series_diff(psi, x_var(i))
        dj = series_diff(psi, x_var(j))
        prod = _shift_h(di * dj, 1)
        d2, prod = common_restrict(d2, prod)
        d2 = d2 + prod
    return d2 * Fraction(1, pair_factorial(i, j))


def _filter_box(a: Series, max_xd: int, max_sd: int) -> Series:
    return Series({m: c for m, c in a.terms.items()
                   if mono_degrees(m)[0] <= max_xd
                   and mono_degrees(m)[1] <= max_sd}, a.trunc)


def _diff_terms(terms: dict, v) -> dict:
    out: dict = {}
    for m, c in terms.items():
        for sym, e in m:
            if sym == v:
                dm = monomial([p for p in m if p[0] != v] + [(v, e - 1)])
                out[dm] = out.get(dm, Fraction(0)) + c * e
                break
    return out


def _layer_rhs_map(kind: str, psi: Series, r: int, d: int, xcap: int):
    """Raw term maps, one per edge pair, of d^2 psi/dx_i dx_j (plus the
    quadratic burgers term), restricted to what can feed the s-degree-d
    layer.  Series truncation boxes cannot be applied to intermediates
    here: a derivative lowers the combined degree that the h-shift of the
    flow restores, so premature box filtering on either side loses terms.
    Only the final predicate (will m*s_ij*h be kept?) is safe.
    """
    ti = psi.trunc
    cap = ti.phi_cap

    def feeds(m) -> bool:
        xd, sd, hd = mono_degrees(m)
        if xd > xcap or sd != d - 1:
            return False
        if not (ti.hfloor - 1 <= hd <= ti.g - 2):
            return False
        return cap is None or xd + sd + hd + 2 <= cap

    base = {m: c for m, c in psi.terms.items()
            if mono_degrees(m)[0] <= xcap + 2 and mono_degrees(m)[1] <= d - 1}
    d1 = {i: _diff_terms(base, x_var(i)) for i in range(1, r + 1)}
    d1f = {i: {m: c for m, c in d1[i].items()
               if mono_degrees(m)[0] <= xcap and mono_degrees(m)[1] <= d - 1}
           for i in d1}
    out = {}
    for i, j in _pairs(r):
        rhs = {m: c for m, c in _diff_terms(d1[i], x_var(j)).items() if feeds(m)}
        if kind == "burgers":
            for m1, c1 in d1f[i].items():
                for m2, c2 in d1f[j].items():
                    m = mono_mul(m1, m2)
                    if feeds(m):
                        rhs[m] = rhs.get(m, Fraction(0)) + c1 * c2
        pf = Fraction(1, pair_factorial(i, j))
        out[(i, j)] = {m: c * pf for m, c in rhs.items() if c}
    return out


def solve(problem: PdeProblem) -> Series:
    """Unique solution within the requested truncation box."""
    target = problem.trunc
    ti = internal_trunc(target)
    u = problem.u_builder(ti)
    for m in u.terms:
        _, sd, _ = mono_degrees(m)
        if sd:
            raise SeriesError("initial data must not involve s-variables")
    if problem.kind == "heat":
        # exp assembles multi-component terms whose intermediate partial
        # products may exceed the h-ceiling before genus-0 factors bring
        # them back below it; give exp exactly that headroom and restrict.
        cap = ti.g - 1 + ti.dx
        if ti.phi_cap is not None:
            cap = min(cap, ti.phi_cap)
        tinf = TruncationSpec(ti.dx, ti.ds, ti.g + ti.dx, phi_cap=cap)
        psi = series_exp(u.restrict(tinf)).restrict(ti)
    else:
        psi = u
    pairs = _pairs(problem.r)

    for d in range(1, target.ds + 1):
        xcap = target.dx + 2 * (target.ds - d)
        rhs_map = _layer_rhs_map(problem.kind, psi, problem.r, d, xcap)
        layer: dict = {}
        for i, j in pairs:
            sij = s_var(i, j)
            for m, c in rhs_map[(i, j)].items():
                target_m = mono_mul(m, ((sij, 1), (HBAR, 1)))
                if not ti.keeps(target_m):
                    continue
                value = c / mono_exponent(target_m, sij)
                known = layer.get(target_m)
                if known is None:
                    layer[target_m] = value
                elif known != value:
                    raise PdeConsistencyError(
                        "conflicting values for coefficient of %s"
                        % mono_str(target_m))
        # the equations for every s-variable of a monomial must agree, also
        # when one of them predicts a zero coefficient
        for i, j in pairs:
            sij = s_var(i, j)
            rhs = rhs_map[(i, j)]
            for m, value in layer.items():
                e = mono_exponent(m, sij)
                if not e:
                    continue
                lower = monomial([p for p in m if p[0] != sij] + [(sij, e - 1),
                                                                  (HBAR, -1)])
                if rhs.get(lower, Fraction(0)) / e != value:
                    raise PdeConsistencyError(
                        "flows in s%d%d and the assigning edge disagree on %s"
                        % (i, j, mono_str(m)))
        psi = psi + Series(layer, ti)

    return psi.restrict(target)


def residual(problem: PdeProblem, solution: Series):
    """Per-pair defect d(solution)/ds_ij - rhs_ij, each exact within its box.

    All entries are the zero series when `solution` solves the flow.
    """
    if solution.trunc.dx < 2:
        raise SeriesError(
            "residual needs x-degree >= 2: two x-derivatives leave no "
            "trustworthy coefficients below that")
    out = {}
    for i, j in _pairs(problem.r):
        lhs = series_diff(solution, s_var(i, j))
        rhs = _rhs(problem.kind, solution, i, j)
        lhs, rhs = common_restrict(lhs, rhs)
        out[(i, j)] = lhs - rhs
    return out


def psi_tilde_via_exp(r: int, u_builder, trunc: TruncationSpec) -> Series:
    """exp of the connected solution, valid within the full box.

    The connected series is solved with an inflated h-ceiling first; its
    restriction to `trunc` alone would not determine every multi-component
    coefficient of the exponential.
    """
    tinf = TruncationSpec(trunc.dx, trunc.ds, trunc.g + trunc.dx + trunc.ds,
                          phi_cap=trunc.g - 1 + trunc.dx + trunc.ds)

    def capped(t: TruncationSpec) -> Series:
        # keep the vertex support of U tied to the requested genus bound
        return u_builder(TruncationSpec(t.dx, t.ds, trunc.g)).restrict(t)

    psi = solve(PdeProblem("burgers", r, capped, tinf))
    return series_exp(psi).restrict(trunc)


# -- initial data builders -------------------------------------------------

def default_vertex_ok(g: int, n) -> bool:
    """Exclude the two closed vertex types whose exponential diverges."""
    return not (g <= 1 and not any(n))


def u_symbolic(r: int, vertex_ok=default_vertex_ok):
    """All vertex symbols a_{g,N} X^N/N! h^{g-1} that fit the truncation."""

    def build(trunc: TruncationSpec) -> Series:
        terms = {}
        for g in range(trunc.g + 1):
            for n in _multi_indices(r, trunc.dx):
                if vertex_ok is not None and not vertex_ok(g, n):
                    continue
                pairs = [(a_var(g, n), 1), (HBAR, g - 1)]
                pairs += [(x_var(c + 1), e) for c, e in enumerate(n)]
                terms[monomial(pairs)] = Fraction(1, mi_factorial(n))
        return Series(terms, trunc)

    return build


def _multi_indices(r: int, max_total: int):
    if r == 1:
        for t in range(max_total + 1):
            yield (t,)
        return
    for first in range(max_total + 1):
        for rest in _multi_indices(r - 1, max_total - first):
            yield (first,) + rest


def u_counting(kind: str):
    """Single-color counting potentials: genus-0 vertices of unit weight.

    kind "comb" admits every valence (U = e^x / h, so solutions count
    ordinary graphs by first Betti number); kind "stable" admits only
    valences >= 3 (U = (e^x - 1 - x - x^2/2) / h).
    """
    if kind not in ("comb", "stable"):
        raise ValueError("kind must be 'comb' or 'stable'")
    n_min = 3 if kind == "stable" else 0

    def build(trunc: TruncationSpec) -> Series:
        terms = {}
        for n in range(n_min, trunc.dx + 1):
            m = monomial([(x_var(1), n), (HBAR, -1)])
            terms[m] = Fraction(1, mi_factorial((n,)))
        return Series(terms, trunc)

    return build


def u_quartic(coeff=Fraction(-1, 24)):
    """The one-color potential coeff * x^4 / h used by the analytic checks."""

    def build(trunc: TruncationSpec) -> Series:
        return Series.term(coeff, [(x_var(1), 4), (HBAR, -1)], trunc)

    return build

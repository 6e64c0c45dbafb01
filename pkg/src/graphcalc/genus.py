"""Genus-by-genus assembly of the connected series from tree-level data.

Everything here works with x,s-series (no genus variable): the genus-(g)
coefficient of the connected series is reconstructed from

    Phi   -- the vector of one-marked-tail tree series, the fixed point of
             Phi = F(X + S Phi) with F = grad U_0;
    Psi_0 -- the tree series, integrated from d Psi_0/d s_ij =
             (1/{ij}!) Phi_i Phi_j with Psi_0(0, X) = U_0(X);
    Psi_1 -- U_1(X + S Phi) - (1/2) tr ln(E - S H(X + S Phi)), H the
             Hessian of U_0: trees of genus-1 vertices plus single cycles,
             with trees clutched onto every tail;
    Psi_g -- the stable graph polynomial P_g with a_{m,N} replaced by
             d^N U_m at the shifted point and the edge weight replaced by
             (E - S H)^{-1} S, which restores the chains of two-valent
             pieces that stability contracted away.

All functions take the initial-data builder used by the flow solver (a
callable trunc -> sum_m U_m(X) h^(m-1)) and return series exact within the
requested truncation; intermediates are carried at x-degree dx + ds since
every substituted tail costs one s.
"""

from __future__ import annotations

from fractions import Fraction

from .series import (Series, SeriesError, SeriesMatrix, TruncationSpec,
                     hbar_layer, matrix_geom_inverse, series_diff,
                     series_inverse, series_substitute_X, trace_log)
from .stablepoly import solve_P, solve_P_comb
from .symbols import (mi_total, mono_mul, mono_str, monomial,
                      pair_factorial, s_var, x_var)


class GenusError(SeriesError):
    pass


def _work(trunc: TruncationSpec) -> TruncationSpec:
    return TruncationSpec(trunc.dx + trunc.ds, trunc.ds, trunc.g)


def u_layer(u_builder, m: int, trunc: TruncationSpec) -> Series:
    """The genus-m potential U_m as an x-series at the given truncation."""
    src = u_builder(TruncationSpec(trunc.dx, trunc.ds, max(trunc.g, m)))
    return Series(hbar_layer(src, m).terms, trunc)


def _gradient(u_builder, r: int, trunc: TruncationSpec):
    """F = grad U_0 with every entry exact at `trunc`."""
    u0 = u_layer(u_builder, 0, TruncationSpec(trunc.dx + 1, trunc.ds, trunc.g))
    return [series_diff(u0, x_var(i)) for i in range(1, r + 1)]


def _hessian(u_builder, r: int, trunc: TruncationSpec) -> SeriesMatrix:
    u0 = u_layer(u_builder, 0, TruncationSpec(trunc.dx + 2, trunc.ds, trunc.g))
    return SeriesMatrix(
        [[series_diff(series_diff(u0, x_var(i)), x_var(j))
          for j in range(1, r + 1)] for i in range(1, r + 1)])


def s_matrix(r: int, trunc: TruncationSpec) -> SeriesMatrix:
    return SeriesMatrix([[Series.variable(s_var(i, j), trunc)
                          for j in range(1, r + 1)] for i in range(1, r + 1)])


def _shifted_point(phi, r: int):
    """The vector X + S Phi at the truncation of the phi entries."""
    trunc = phi[0].trunc
    return [Series.variable(x_var(i), trunc)
            + sum((Series.variable(s_var(i, j), trunc) * phi[j - 1]
                   for j in range(1, r + 1)), Series.zero(trunc))
            for i in range(1, r + 1)]


_phi_cache: dict = {}


def _phi_work(u_builder, r: int, w: TruncationSpec):
    """Fixed point of Phi = F(X + S Phi) at the working truncation w.

    Each pass extends exactness by one s-degree, so w.ds passes starting
    from F(X) settle every coefficient in the box.  Pass k is exact only
    up to s-degree k, so its output (and hence the images of the next
    pass) may be restricted accordingly.  The result is cached: every
    genus layer of the same potential starts from the same tree series.
    """
    key = (u_builder, r, w)
    if key not in _phi_cache:
        f = _gradient(u_builder, r, w)
        phi = list(f)
        for k in range(1, w.ds + 1):
            point = _shifted_point([p.restrict(w) for p in phi], r)
            cut = TruncationSpec(w.dx, k, w.g)
            phi = [series_substitute_X(fi, point, allow_constant=True,
                                       out_trunc=cut) for fi in f]
        phi = [p.restrict(w) for p in phi]
        _phi_cache[key] = phi
    return _phi_cache[key]


def phi_vector(u_builder, r: int, trunc: TruncationSpec):
    """One-marked-tail tree series, one entry per tail color."""
    return [p.restrict(trunc) for p in _phi_work(u_builder, r, _work(trunc))]


def fixed_point_defect(u_builder, r: int, trunc: TruncationSpec,
                       phi=None):
    """Phi - F(X + S Phi); identically zero entrywise for the tree series.

    `phi` may be supplied from an independent source (e.g. the gradient of
    the flow solution's leading genus layer) at the working truncation."""
    w = _work(trunc)
    if phi is None:
        phi = _phi_work(u_builder, r, w)
    f = _gradient(u_builder, r, w)
    point = _shifted_point(phi, r)
    return [(phi[i] - series_substitute_X(f[i], point, allow_constant=True)
             ).restrict(trunc) for i in range(r)]


def psi0_series(u_builder, r: int, trunc: TruncationSpec) -> Series:
    """Tree series: d Psi_0/d s_ij = (1/{ij}!) Phi_i Phi_j, Psi_0(0,X)=U_0.

    Every edge variable of a coefficient must be integrable to the same
    value; a mismatch means the supplied data do not come from a gradient.
    """
    w = _work(trunc)
    phi = _phi_work(u_builder, r, w)
    # the products only feed coefficients one s-degree up inside the
    # target box, so the factors may be cut down before multiplying
    t0 = TruncationSpec(trunc.dx, trunc.ds, trunc.g)
    tp = TruncationSpec(trunc.dx, max(trunc.ds - 1, 0), trunc.g)
    phi0 = [p.restrict(tp) for p in phi]
    coeffs = dict(u_layer(u_builder, 0, t0).terms)
    rhs_by_pair = {}
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            rhs_by_pair[(i, j)] = (phi0[i - 1] * phi0[j - 1]
                                   * Fraction(1, pair_factorial(i, j)))
    for (i, j), rhs in rhs_by_pair.items():
        sij = s_var(i, j)
        for m, c in rhs.terms.items():
            mm = mono_mul(m, ((sij, 1),))
            if not t0.keeps(mm):
                continue
            e = next(ee for sym, ee in mm if sym == sij)
            val = c / e
            old = coeffs.setdefault(mm, val)
            if old != val:
                raise GenusError("tree integration conflict at %s"
                                 % mono_str(mm))
    for mm, val in coeffs.items():
        for (i, j), rhs in rhs_by_pair.items():
            sij = s_var(i, j)
            e = next((ee for sym, ee in mm if sym == sij), 0)
            if not e:
                continue
            lower = monomial([p for p in mm if p[0] != sij] + [(sij, e - 1)])
            if rhs.coefficient(lower) / e != val:
                raise GenusError("tree flows disagree at %s" % mono_str(mm))
    return Series(coeffs, t0).restrict(trunc)


def _hessian_at(u_builder, r: int, point, w: TruncationSpec,
                out=None) -> SeriesMatrix:
    h = _hessian(u_builder, r, w)
    return SeriesMatrix(
        [[series_substitute_X(h[i, j], point, allow_constant=True,
                              out_trunc=out)
          for j in range(r)] for i in range(r)])


def curvature_matrix(u_builder, r: int, trunc: TruncationSpec) -> SeriesMatrix:
    """The Hessian of the tree series, computed as grad Phi."""
    w = _work(trunc)
    wp = TruncationSpec(w.dx + 1, w.ds, w.g)
    phi = _phi_work(u_builder, r, wp)
    return SeriesMatrix([[series_diff(phi[i - 1], x_var(j)).restrict(trunc)
                          for j in range(1, r + 1)] for i in range(1, r + 1)])


def curvature_defect(u_builder, r: int, trunc: TruncationSpec,
                     theta: SeriesMatrix | None = None) -> SeriesMatrix:
    """(E + S Theta) - (E - S H(X + S Phi))^{-1}, entrywise zero.

    Marking two tails of a tree singles out the chain between them; the
    right side rebuilds that chain link by link.
    """
    w = _work(trunc)
    if theta is None:
        theta = curvature_matrix(u_builder, r, w)
    elif theta.trunc != w:
        raise GenusError("supply theta at the working truncation %s" % (w,))
    phi = _phi_work(u_builder, r, w)
    point = _shifted_point(phi, r)
    s = s_matrix(r, w)
    lhs = SeriesMatrix.identity(r, w) + s @ theta
    rhs = matrix_geom_inverse(s @ _hessian_at(u_builder, r, point, w))
    return SeriesMatrix([[(lhs[i, j] - rhs[i, j]).restrict(trunc)
                          for j in range(r)] for i in range(r)])


def forward_map(u_builder, r: int, trunc: TruncationSpec):
    """A(X) = X - S F(X)."""
    f = _gradient(u_builder, r, trunc)
    return [Series.variable(x_var(i), trunc)
            - sum((Series.variable(s_var(i, j), trunc) * f[j - 1]
                   for j in range(1, r + 1)), Series.zero(trunc))
            for i in range(1, r + 1)]


def backward_map(u_builder, r: int, trunc: TruncationSpec):
    """B(X) = X + S Phi(S, X), the inverse of the forward map."""
    return [p.restrict(trunc)
            for p in _shifted_point(_phi_work(u_builder, r, _work(trunc)),
                                    r)]


def compose_maps(outer, inner, trunc: TruncationSpec):
    """Entrywise substitution outer(inner(X)), both maps at _work(trunc)."""
    return [series_substitute_X(o, inner, allow_constant=True).restrict(trunc)
            for o in outer]


def inverse_map_defects(u_builder, r: int, trunc: TruncationSpec):
    """A(B(X)) - X and B(A(X)) - X, all entries zero."""
    w = _work(trunc)
    a = forward_map(u_builder, r, w)
    b = backward_map(u_builder, r, w)
    x = [Series.variable(x_var(i), trunc) for i in range(1, r + 1)]
    ab = compose_maps(a, b, trunc)
    ba = compose_maps(b, a, trunc)
    return ([ab[i] - x[i] for i in range(r)],
            [ba[i] - x[i] for i in range(r)])


def psi1_series(u_builder, r: int, trunc: TruncationSpec) -> Series:
    """Genus-1 layer: one-cycle cores and genus-1 vertices, trees clutched
    onto every tail via the shifted point."""
    w = _work(trunc)
    phi = _phi_work(u_builder, r, w)
    point = _shifted_point(phi, r)
    # every factor is h-free and later only multiplied, so the whole
    # expansion can run in the target box
    t0 = TruncationSpec(trunc.dx, trunc.ds, trunc.g)
    u1 = series_substitute_X(u_layer(u_builder, 1, w), point,
                             allow_constant=True, out_trunc=t0)
    sh0 = s_matrix(r, t0) @ _hessian_at(u_builder, r, point, w, out=t0)
    return (u1 - Fraction(1, 2) * trace_log(sh0)).restrict(trunc)


def psi_g_series(g: int, u_builder, r: int, trunc: TruncationSpec) -> Series:
    """Genus-g layer for g > 1 by substitution into the stable graph
    polynomial: vertex symbols become shifted derivatives of the
    potentials, the edge weight becomes (E - S H)^{-1} S."""
    if g < 2:
        raise GenusError("substitution layers start at genus 2")
    w = _work(trunc)
    phi = _phi_work(u_builder, r, w)
    point = _shifted_point(phi, r)
    # all factors below are h-free and only enter products, which can only
    # grow x- and s-degrees, so the substitutions may run directly in the
    # target box
    t0 = TruncationSpec(trunc.dx, trunc.ds, trunc.g)
    sh0 = s_matrix(r, t0) @ _hessian_at(u_builder, r, point, w, out=t0)
    y = matrix_geom_inverse(sh0) @ s_matrix(r, t0)

    factors: dict = {}

    def factor_power(sym, e: int) -> Series:
        key = (sym, e)
        if key in factors:
            return factors[key]
        if e > 1:
            out = factor_power(sym, e - 1) * factor_power(sym, 1)
        elif sym[0] == "a":
            m, n = sym[1], sym[2]
            um = u_layer(u_builder, m,
                         TruncationSpec(w.dx + mi_total(n), w.ds, w.g))
            for color, cnt in enumerate(n, start=1):
                for _ in range(cnt):
                    um = series_diff(um, x_var(color))
            out = series_substitute_X(um, point, allow_constant=True,
                                      out_trunc=t0)
        else:
            out = y[sym[1] - 1, sym[2] - 1]
        factors[key] = out
        return out

    acc = Series.zero(t0)
    for mono, c in solve_P(g, r).terms.items():
        piece = Series.constant(c, t0)
        for sym, e in mono:
            piece = piece * factor_power(sym, e)
        acc = acc + piece
    return acc.restrict(trunc)


def chain_matrix(k: int, u_builder, r: int, trunc: TruncationSpec):
    """H (S H)^(k-1): chains of k bare vertices with two marked end tails."""
    if k < 1:
        raise GenusError("chains have at least one vertex")
    h = _hessian(u_builder, r, trunc)
    out = h
    sh = s_matrix(r, trunc) @ h
    for _ in range(k - 1):
        out = out @ sh
    return out


def cycle_series(k: int, u_builder, r: int, trunc: TruncationSpec) -> Series:
    """(1/2k) tr (S H)^k: single cycles of k bare vertices."""
    if k < 1:
        raise GenusError("cycles have at least one vertex")
    sh = s_matrix(r, trunc) @ _hessian(u_builder, r, trunc)
    power = sh
    for _ in range(k - 1):
        power = power @ sh
    return power.trace() * Fraction(1, 2 * k)


# -- single-color counting functions ----------------------------------------

def counting_comb(g: int, trunc: TruncationSpec) -> Series:
    """Genus-g layer counting all single-color graphs, from the closed
    form Phi^(1-g) * P_g^comb(s Phi / (1 - s Phi)) with Phi = e^(x + s Phi).

    This path never touches the symbolic polynomial: it only needs the
    one-variable edge-count polynomial and the tree series.
    """
    from .pde import u_counting

    if g < 2:
        raise GenusError("the closed counting form starts at genus 2")
    w = _work(trunc)
    phi = _phi_work(u_counting("comb"), 1, w)[0]
    s = Series.variable(s_var(1, 1), w)
    y = s * phi * series_inverse(Series.one(w) - s * phi)
    phi_inv = series_inverse(phi)
    acc = Series.zero(w)
    for e, c in solve_P_comb(g).items():
        acc = acc + Series.constant(c, w) * y ** e
    return (acc * phi_inv ** (g - 1)).restrict(trunc)


def counting_stable(g: int, trunc: TruncationSpec) -> Series:
    """Genus-g layer counting single-color graphs with all vertices of
    genus 0 and valence >= 3, via the stable polynomial substitution."""
    from .pde import u_counting

    return psi_g_series(g, u_counting("stable"), 1, trunc)

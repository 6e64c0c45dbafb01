"""Bipartite colored modular graphs: enumeration, automorphisms, series.

An a-vertex carries a genus label and tails; an s-vertex is two-valent and
is stored as an unordered pair of attachment points (a-vertex, color).  A
point may repeat, which realizes a loop through the s-vertex.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import factorial

from .series import Series, TruncationSpec
from .symbols import (Monomial, a_var, mi_total, mono_mul, monomial,
                      s_var, x_var)

DEFAULT_MAX_CLASSES = 200000


class EnumerationError(ValueError):
    pass


def _class_limit() -> int:
    return int(os.environ.get("GRAPHCALC_MAX_CLASSES", DEFAULT_MAX_CLASSES))


@dataclass(frozen=True)
class ModularGraph:
    """A labeled bipartite colored modular graph.

    genera[v] is the genus of a-vertex v; tails[v] is a tuple of r per-color
    tail counts; s_pairs is a sorted tuple of s-vertices, each an ordered
    2-tuple of points (v, color) with the smaller point first.
    """

    r: int
    genera: tuple
    s_pairs: tuple
    tails: tuple

    def __post_init__(self):
        if len(self.tails) != len(self.genera):
            raise ValueError("tails and genera must cover the same vertices")
        for p1, p2 in self.s_pairs:
            if p1 > p2:
                raise ValueError("s-vertex points must be sorted")

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_s(self) -> int:
        return len(self.s_pairs)

    def valences(self):
        """Per-vertex multi-index of incident edges plus tails."""
        val = [list(t) for t in self.tails]
        for p1, p2 in self.s_pairs:
            for v, c in (p1, p2):
                val[v][c - 1] += 1
        return [tuple(row) for row in val]

    def components(self) -> int:
        parent = list(range(self.n_vertices))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for (v1, _), (v2, _) in self.s_pairs:
            parent[find(v1)] = find(v2)
        return len({find(v) for v in range(self.n_vertices)})

    def genus(self) -> int:
        # sum g(v) + b1 - b0 + 1 collapses to this, independent of b0:
        # b1 = #edges - #vertices + b0 = 2k - (m + k) + b0.
        return sum(self.genera) + self.n_s - self.n_vertices + 1

    def is_connected(self) -> bool:
        return self.components() == 1

    def tail_index(self) -> tuple:
        return tuple(sum(t[c] for t in self.tails) for c in range(self.r))

    def mu(self) -> Monomial:
        pairs = []
        for g, n in zip(self.genera, self.valences()):
            pairs.append((a_var(g, n), 1))
        for (_, c1), (_, c2) in self.s_pairs:
            pairs.append((s_var(c1, c2), 1))
        return monomial(pairs)

    def relabel(self, perm) -> tuple:
        """Encoding of the graph with a-vertex v renamed to perm[v]."""
        m = self.n_vertices
        genera = [0] * m
        tails = [None] * m
        for v in range(m):
            genera[perm[v]] = self.genera[v]
            tails[perm[v]] = self.tails[v]
        pairs = tuple(sorted(
            tuple(sorted(((perm[v], c) for v, c in pair)))
            for pair in self.s_pairs))
        return (tuple(genera), tuple(tails), pairs)

    def _vertex_invariants(self):
        """A relabeling-invariant fingerprint per vertex; automorphisms can
        only permute vertices with equal fingerprints."""
        m = self.n_vertices
        rough = [(self.genera[v], self.tails[v]) for v in range(m)]
        incid = [[] for _ in range(m)]
        for (v1, c1), (v2, c2) in self.s_pairs:
            if v1 == v2:
                incid[v1].append((1, c1, c2, -1, ()))
            else:
                incid[v1].append((0, c1, c2) + rough[v2])
                incid[v2].append((0, c2, c1) + rough[v1])
        return [rough[v] + (tuple(sorted(incid[v])),) for v in range(m)]

    def canonical_and_stab(self):
        """Minimal encoding over invariant-respecting relabelings, and the
        number of vertex permutations fixing the graph."""
        m = self.n_vertices
        inv = self._vertex_invariants()
        blocks: dict = {}
        for v in range(m):
            blocks.setdefault(inv[v], []).append(v)
        ordered = sorted(blocks.items())
        slot_groups = []
        pos = 0
        for _, verts in ordered:
            slot_groups.append((verts, list(range(pos, pos + len(verts)))))
            pos += len(verts)

        best = None
        count = 0
        perm = [0] * m

        def rec(b):
            nonlocal best, count
            if b == len(slot_groups):
                enc = self.relabel(tuple(perm))
                nonlocal_best = best
                if nonlocal_best is None or enc < nonlocal_best:
                    best = enc
                    count = 1
                elif enc == nonlocal_best:
                    count += 1
                return
            verts, slots = slot_groups[b]
            for assignment in permutations(slots):
                for v, s in zip(verts, assignment):
                    perm[v] = s
                rec(b + 1)

        rec(0)
        return best, count


def automorphism_order(g: ModularGraph) -> int:
    """|Aut| of the graph with tails unordered within equal colors."""
    _, stab = g.canonical_and_stab()
    order = stab
    mult: dict = {}
    for pair in g.s_pairs:
        mult[pair] = mult.get(pair, 0) + 1
    for pair, k in mult.items():
        order *= factorial(k)
        if pair[0] == pair[1]:
            order *= 2 ** k
    for t in g.tails:
        for c in t:
            order *= factorial(c)
    return order


@dataclass(frozen=True)
class GraphClass:
    canonical_form: bytes
    aut_order: int
    mu: Monomial
    genus: int
    tails: tuple
    n_s: int


@dataclass(frozen=True)
class GraphBounds:
    max_genus: int
    max_tails: tuple
    max_s_vertices: int


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _tail_assignments(r: int, m: int, max_tails: tuple, max_total=None):
    """All per-vertex tail matrices with per-color totals within bounds."""
    if max_total is None:
        max_total = sum(max_tails)
    per_color = []
    for c in range(r):
        rows = []
        for total in range(min(max_tails[c], max_total) + 1):
            rows.extend((total, comp) for comp in _compositions(total, m))
        per_color.append(rows)

    def rec(c, budget):
        for total, choice in per_color[c]:
            if total > budget:
                continue
            if c == r - 1:
                yield (choice,)
            else:
                for rest in rec(c + 1, budget - total):
                    yield (choice,) + rest

    for cols in rec(0, max_total):
        # cols[c][v] -> tails[v][c]
        yield tuple(tuple(cols[c][v] for c in range(r)) for v in range(m))


def _min_slots(genus: int) -> int:
    """Edge/tail slots a vertex of this genus needs in a stable graph."""
    if genus == 0:
        return 3
    if genus == 1:
        return 1
    return 0


def is_stable(g: ModularGraph) -> bool:
    """Closed graph with genus-0 vertices >= trivalent, genus-1 >= univalent."""
    if any(any(t) for t in g.tails):
        return False
    return all(mi_total(n) >= _min_slots(gv)
               for gv, n in zip(g.genera, g.valences()))


def enumerate_graphs(r: int, bounds: GraphBounds, connected_only: bool = True,
                     vertex_ok=None, stable_only: bool = False,
                     min_genus: int | None = None,
                     max_vertex_genus: int | None = None,
                     phi_cap: int | None = None):
    """One GraphClass per isomorphism class within the bounds.

    vertex_ok(genus, valence_multiindex) filters the a-vertex labels; it
    must match the support of the initial-condition series when the result
    is compared against a PDE solution.  For stable_only the genus-0/1
    minimum valences are also used to prune impossible genus assignments.
    """
    if r < 1:
        raise EnumerationError("need at least one color")
    if len(bounds.max_tails) != r:
        raise EnumerationError("max_tails must have one entry per color")
    limit = _class_limit()
    classes: dict = {}
    tails_budget = sum(bounds.max_tails)

    def consider(graph: ModularGraph):
        genus = graph.genus()
        if genus > bounds.max_genus:
            return
        if min_genus is not None and genus < min_genus:
            return
        if stable_only and not is_stable(graph):
            return
        if vertex_ok is not None:
            if not all(vertex_ok(gv, n)
                       for gv, n in zip(graph.genera, graph.valences())):
                return
        key, _ = graph.canonical_and_stab()
        ckey = repr(key).encode()
        if ckey in classes:
            return
        classes[ckey] = GraphClass(
            canonical_form=ckey,
            aut_order=automorphism_order(graph),
            mu=graph.mu(),
            genus=genus,
            tails=graph.tail_index(),
            n_s=graph.n_s,
        )
        if len(classes) > limit:
            raise EnumerationError(
                "class count exceeds GRAPHCALC_MAX_CLASSES=%d" % limit)

    for k in range(bounds.max_s_vertices + 1):
        for m in range(1, k + 2):
            b1 = k - m + 1  # first Betti number of a connected candidate
            if b1 < 0:
                continue
            genus_budget = bounds.max_genus - b1
            if genus_budget < 0:
                continue
            if phi_cap is not None:
                # phi = (genus - 1) + tails + edges is minimized at 0 tails
                genus_budget = min(genus_budget, phi_cap + 1 - k - b1)
                if genus_budget < 0:
                    continue
            points = [(v, c) for v in range(m) for c in range(1, r + 1)]
            pair_pool = list(combinations_with_replacement(points, 2))
            for total_genus in range(genus_budget + 1):
                genus = total_genus + b1
                tails_cap = None
                if phi_cap is not None:
                    tails_cap = phi_cap + 1 - genus - k
                for genera in _compositions(total_genus, m):
                    if max_vertex_genus is not None and \
                            any(gv > max_vertex_genus for gv in genera):
                        continue
                    if stable_only:
                        need = sum(_min_slots(gv) for gv in genera)
                        if need > 2 * k + tails_budget:
                            continue
                    for pairs in combinations_with_replacement(pair_pool, k):
                        graph0 = ModularGraph(r, genera, tuple(pairs),
                                              tuple((0,) * r for _ in range(m)))
                        if not graph0.is_connected():
                            continue
                        for tails in _tail_assignments(r, m, bounds.max_tails,
                                                       max_total=tails_cap):
                            consider(ModularGraph(r, genera, tuple(pairs), tails))

    connected = sorted(classes.values(),
                       key=lambda c: (c.n_s, c.genus, c.tails, c.canonical_form))
    if connected_only:
        return connected
    return _disjoint_unions(connected, bounds, min_genus)


def _disjoint_unions(connected, bounds: GraphBounds, min_genus):
    """All finite multisets of connected classes within the bounds.

    Includes the empty graph (genus 1 by the Betti-number convention, so it
    contributes the constant term at h^0).
    """
    if min_genus is None:
        min_genus = 1 - sum(bounds.max_tails) - bounds.max_s_vertices
    limit = _class_limit()
    out = [GraphClass(b"empty", 1, (), 1, (0,) * len(bounds.max_tails), 0)]
    # Components are taken in increasing genus so that the running h-exponent
    # first decreases (genus-0 parts) and then only increases; both phases
    # then respect the box below and the recursion terminates.
    items = sorted(connected, key=lambda c: (c.genus, c.canonical_form))
    for cls in items:
        if cls.genus <= 1 and cls.n_s == 0 and not any(cls.tails):
            raise EnumerationError(
                "a closed genus-%d component with no edges admits arbitrarily "
                "many disjoint copies inside any truncation box" % cls.genus)
    hexp_cap = max(0, bounds.max_genus - 1)
    # Every genus-0 component consumes at least one tail or s-vertex, so no
    # running h-exponent can dip below this before later parts raise it.
    hexp_floor = -(sum(bounds.max_tails) + bounds.max_s_vertices)

    def fits(tails, n_s, hexp):
        return (n_s <= bounds.max_s_vertices
                and hexp_floor <= hexp <= hexp_cap
                and all(t <= mt for t, mt in zip(tails, bounds.max_tails)))

    def rec(start, chosen, tails, n_s, hexp):
        if len(out) > limit:
            raise EnumerationError(
                "class count exceeds GRAPHCALC_MAX_CLASSES=%d" % limit)
        if chosen and hexp >= min_genus - 1:
            out.append(_union_class(items, chosen, tails, n_s, hexp))
        for idx in range(start, len(items)):
            cls = items[idx]
            nt = tuple(a + b for a, b in zip(tails, cls.tails))
            ns = n_s + cls.n_s
            nh = hexp + cls.genus - 1
            if fits(nt, ns, nh):
                rec(idx, chosen + [idx], nt, ns, nh)

    rec(0, [], (0,) * len(bounds.max_tails), 0, 0)
    return sorted(out, key=lambda c: (c.n_s, c.genus, c.tails, c.canonical_form))


def _union_class(items, chosen, tails, n_s, hexp):
    mu: Monomial = ()
    aut = 1
    parts = []
    for idx in sorted(set(chosen)):
        cls = items[idx]
        mult = chosen.count(idx)
        aut *= cls.aut_order ** mult * factorial(mult)
        for _ in range(mult):
            mu = mono_mul(mu, cls.mu)
        parts.append((cls.canonical_form, mult))
    key = repr(tuple(parts)).encode()
    return GraphClass(key, aut, mu, hexp + 1, tails, n_s)


def graph_series(classes, trunc: TruncationSpec,
                 bounds: GraphBounds | None = None) -> Series:
    """Sum of mu(G) X^{N(G)} h^{genus-1} / |Aut G| over the classes."""
    if bounds is not None:
        if (bounds.max_s_vertices < trunc.ds
                or any(t < trunc.dx for t in bounds.max_tails)
                or bounds.max_genus < trunc.g):
            raise EnumerationError(
                "enumeration bounds %s do not cover truncation %s"
                % (bounds, trunc))
    terms: dict = {}
    for cls in classes:
        pairs = list(cls.mu)
        for c, t in enumerate(cls.tails, start=1):
            if t:
                pairs.append((x_var(c), t))
        if cls.genus != 1:
            pairs.append((("h",), cls.genus - 1))
        m = monomial(pairs)
        if trunc.keeps(m):
            terms[m] = terms.get(m, Fraction(0)) + Fraction(1, cls.aut_order)
    return Series(terms, trunc)


def psi_by_enumeration(r: int, trunc: TruncationSpec, vertex_ok=None,
                       connected: bool = True) -> Series:
    """The graph-sum oracle for the connected (Psi) or full (Psi-tilde) series.

    Vertex genera are capped at trunc.g in both cases, matching an initial
    potential truncated at the same h-ceiling.  In the disconnected case a
    single component may exceed the ceiling as long as enough genus-0
    components pull the total back inside the box, so the component pool is
    enumerated with extra genus headroom.
    """
    max_genus = trunc.g if connected else trunc.g + trunc.dx + trunc.ds

    def capped_ok(g, n):
        if g > trunc.g:
            return False
        return vertex_ok is None or vertex_ok(g, n)

    bounds = GraphBounds(max_genus=max_genus,
                         max_tails=(trunc.dx,) * r,
                         max_s_vertices=trunc.ds)
    min_genus = None if connected else trunc.hfloor + 1
    phi_cap = None if connected else trunc.g - 1 + trunc.dx + trunc.ds
    classes = enumerate_graphs(r, bounds, connected_only=connected,
                               vertex_ok=capped_ok, min_genus=min_genus,
                               max_vertex_genus=trunc.g, phi_cap=phi_cap)
    return graph_series(classes, trunc)


def chain_matrix_oracle(r: int, k: int, trunc: TruncationSpec, vertex_ok=None):
    """The k-vertex chain generating matrix built by direct graph summation.

    Entry (i, j): genus-0 chains of k a-vertices interleaved with k-1
    s-vertices, a marked tail of color i at one end and j at the other,
    summed with weight mu(G) * prod_v X^{T_v}/T_v! over the unmarked tails.
    Marked tails are ordered, so no automorphism factor appears.
    """
    from itertools import product

    def tail_choices():
        out = []
        for total in range(trunc.dx + 1):
            for comp in _compositions(total, r):
                out.append(comp)
        return out

    tails = tail_choices()
    colors = range(1, r + 1)

    def entry(i, j):
        total = Series.zero(trunc)
        # edge color patterns: c[t] on the left slot, d[t] on the right slot
        for cs in product(colors, repeat=k - 1):
            for ds in product(colors, repeat=k - 1):
                svars = [(s_var(c, d), 1) for c, d in zip(cs, ds)]
                base_val = []
                for t in range(k):
                    n = [0] * r
                    if t == 0:
                        n[i - 1] += 1
                    if t == k - 1:
                        n[j - 1] += 1
                    if t > 0:
                        n[ds[t - 1] - 1] += 1
                    if t < k - 1:
                        n[cs[t] - 1] += 1
                    base_val.append(n)
                for extra in product(tails, repeat=k):
                    if sum(sum(t) for t in extra) > trunc.dx:
                        continue
                    coeff = Fraction(1)
                    pairs = list(svars)
                    xtot = [0] * r
                    ok = True
                    for t in range(k):
                        n = tuple(b + e for b, e in zip(base_val[t], extra[t]))
                        if vertex_ok is not None and not vertex_ok(0, n):
                            ok = False
                            break
                        pairs.append((a_var(0, n), 1))
                        for c in range(r):
                            coeff /= factorial(extra[t][c])
                            xtot[c] += extra[t][c]
                    if not ok:
                        continue
                    for c in range(r):
                        if xtot[c]:
                            pairs.append((x_var(c + 1), xtot[c]))
                    total = total + Series.term(coeff, pairs, trunc)
        return total

    from .series import SeriesMatrix
    return SeriesMatrix([[entry(i, j) for j in colors] for i in colors])


def cycle_class_oracle(r: int, k: int, trunc: TruncationSpec, vertex_ok=None):
    """Genus-1 single cycles of k genus-0 vertices, by direct class listing.

    Every coloring of the 2k edge endpoints and every tail assignment is
    generated, reduced to isomorphism classes, and summed with weight
    mu(G) X^{N(G)} / |Aut G|.  The h-variable is left out: all classes have
    genus 1.
    """
    from itertools import product

    classes: dict = {}
    for cols in product(range(1, r + 1), repeat=2 * k):
        pairs = []
        for t in range(k):
            a = (t, cols[2 * t])
            b = ((t + 1) % k, cols[2 * t + 1])
            pairs.append((min(a, b), max(a, b)))
        skeleton = tuple(sorted(pairs))
        for tails in _tail_assignments(r, k, (trunc.dx,) * r,
                                       max_total=trunc.dx):
            graph = ModularGraph(r, (0,) * k, skeleton, tails)
            if vertex_ok is not None and not all(
                    vertex_ok(0, n) for n in graph.valences()):
                continue
            key = repr(graph.canonical_and_stab()[0]).encode()
            if key in classes:
                continue
            classes[key] = GraphClass(
                canonical_form=key,
                aut_order=automorphism_order(graph),
                mu=graph.mu(),
                genus=1,
                tails=graph.tail_index(),
                n_s=k,
            )
    out: dict = {}
    for cls in classes.values():
        pairs = list(cls.mu)
        for c, t in enumerate(cls.tails, start=1):
            if t:
                pairs.append((x_var(c), t))
        m = monomial(pairs)
        if trunc.keeps(m):
            out[m] = out.get(m, Fraction(0)) + Fraction(1, cls.aut_order)
    return Series(out, trunc)

"""Strong standard bases over the base DVR.

Leading coefficients participate in divisibility: a term c*x^b is reducible
by g only when LM(g) | x^b and val(lc(g)) <= val(c).  Over a DVR the
coefficient divisibility order is total, so Buchberger with coefficient-lcm
s-pairs (no gcd-polynomials) already yields a strong basis for global
orders.  Local orders go through Lazard homogenization for the basis and
Mora's weak normal form for reduction; weak means reduction may multiply by
a unit of the local ring, which is invisible to ideal membership.

Leading-term convention for local orders: the leading term is the
order-maximal one under 1 > x_i, i.e. the lowest total degree part.
"""

from __future__ import annotations

import heapq

from .config import DEFAULT_CONFIG
from .dvr import INF
from .errors import DegreeBoundExceeded, NonIntegralEntry
from .poly import (MonomialOrder, Poly, PolyRing, monomial_div,
                   monomial_divides, monomial_lcm)


def _check_caps(poly: Poly, config):
    if poly.degree() > config.degree_cap:
        raise DegreeBoundExceeded(
            f"monomial degree cap {config.degree_cap} exceeded")
    dvr = poly.ring.dvr
    for c in poly.terms.values():
        v = dvr.val(c)
        if v is not INF and v > config.valuation_cap:
            raise DegreeBoundExceeded(
                f"coefficient valuation cap {config.valuation_cap} exceeded")


def _normalize_lead(poly: Poly, order) -> Poly:
    """Scale by a unit so the leading coefficient is exactly pi^v."""
    lt = order.leading(poly)
    if lt is None:
        return poly
    u = poly.ring.dvr.unit_part(lt[1])
    if u == poly.ring.dvr.one:
        return poly
    return poly.scale(poly.ring.dvr.one / u)


class StdBasis:
    """A strong standard basis together with its order.  Bases here are
    always coefficient-strong: s-pairs match leading coefficients through
    pi-divisions, and reducibility requires coefficient divisibility."""

    coefficient_strong = True

    def __init__(self, ring: PolyRing, order: MonomialOrder, gens, config=DEFAULT_CONFIG):
        self.ring = ring
        self.order = order
        self.gens = list(gens)
        self.config = config
        self._leads = [order.leading(g) for g in self.gens]

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __repr__(self):
        return f"StdBasis({self.order!r}, {[str(g) for g in self.gens]})"


def _find_reducer(term, leads, dvr):
    e, c = term
    vc = dvr.val(c)
    for idx, lt in enumerate(leads):
        if lt is None:
            continue
        le, lc = lt
        if monomial_divides(le, e) and dvr.val(lc) <= vc:
            return idx
    return None


def reduce_strong(f: Poly, gens, order, config=DEFAULT_CONFIG) -> Poly:
    """Full strong normal form for a global (well-) order."""
    ring = f.ring
    dvr = ring.dvr
    leads = [order.leading(g) for g in gens]
    out = ring.zero
    h = f
    _check_caps(h, config)
    while h.terms:
        e, c = order.leading(h)
        idx = _find_reducer((e, c), leads, dvr)
        if idx is None:
            t = Poly(ring, {e: c})
            out = out + t
            h = h - t
        else:
            le, lc = leads[idx]
            factor = Poly(ring, {monomial_div(e, le): c / lc})
            h = h - factor * gens[idx]
            _check_caps(h, config)
    return out


def _ecart(poly: Poly, order) -> int:
    lt = order.leading(poly)
    return poly.degree() - sum(lt[0])


def mora_normal_form(f: Poly, gens, order, config=DEFAULT_CONFIG) -> Poly:
    """Mora's weak normal form: u*f - result lies in the ideal for some unit
    u of the local ring.  Reduction touches leading terms only."""
    ring = f.ring
    dvr = ring.dvr
    T = list(gens)
    h = f
    steps = 0
    while h.terms:
        e, c = order.leading(h)
        vc = dvr.val(c)
        best = None
        for idx, g in enumerate(T):
            le, lc = order.leading(g)
            if monomial_divides(le, e) and dvr.val(lc) <= vc:
                ec = _ecart(g, order)
                if best is None or ec < best[0]:
                    best = (ec, idx)
        if best is None:
            return h
        ec, idx = best
        g = T[idx]
        if ec > _ecart(h, order):
            T.append(h)
        le, lc = order.leading(g)
        h = h - Poly(ring, {monomial_div(e, le): c / lc}) * g
        _check_caps(h, config)
        steps += 1
        if steps > 10000:
            raise DegreeBoundExceeded("local normal form did not stabilize")
    return h


def _spoly(f: Poly, g: Poly, order):
    ring = f.ring
    dvr = ring.dvr
    (ef, cf) = order.leading(f)
    (eg, cg) = order.leading(g)
    m = monomial_lcm(ef, eg)
    v = max(dvr.val(cf), dvr.val(cg))
    c = dvr.pi_pow(v)
    uf = Poly(ring, {monomial_div(m, ef): c / cf})
    ug = Poly(ring, {monomial_div(m, eg): c / cg})
    return uf * f - ug * g


def _buchberger(gens, order, config) -> list:
    ring = gens[0].ring
    dvr = ring.dvr
    G = []
    for g in gens:
        if g.terms:
            _check_caps(g, config)
            G.append(_normalize_lead(g, order))
    heap = []
    counter = 0

    def push_pairs(new_idx):
        nonlocal counter
        for i in range(new_idx):
            ei = order.leading(G[i])[0]
            ej = order.leading(G[new_idx])[0]
            deg = sum(monomial_lcm(ei, ej))
            heapq.heappush(heap, (deg, i, new_idx, counter))
            counter += 1

    for k in range(1, len(G)):
        push_pairs(k)
    while heap:
        _, i, j, _ = heapq.heappop(heap)
        ei, ci = order.leading(G[i])
        ej, cj = order.leading(G[j])
        coprime = all(a == 0 or b == 0 for a, b in zip(ei, ej))
        if coprime and dvr.val(ci) == 0 and dvr.val(cj) == 0:
            continue
        s = _spoly(G[i], G[j], order)
        r = reduce_strong(s, G, order, config)
        if r.terms:
            _check_caps(r, config)
            G.append(_normalize_lead(r, order))
            push_pairs(len(G) - 1)
    return _interreduce(G, order, config)


def _interreduce(G, order, config):
    dvr = G[0].ring.dvr if G else None
    kept = []
    leads = [order.leading(g) for g in G]
    for i, g in enumerate(G):
        ei, ci = leads[i]
        redundant = False
        for j, other in enumerate(G):
            if i == j or (j in kept and False):
                continue
            ej, cj = leads[j]
            if (monomial_divides(ej, ei) and dvr.val(cj) <= dvr.val(ci)
                    and (ej, dvr.val(cj)) != (ei, dvr.val(ci))):
                redundant = True
                break
            if (ej, dvr.val(cj)) == (ei, dvr.val(ci)) and j < i:
                redundant = True
                break
        if not redundant:
            kept.append(i)
    out = []
    basis = [G[i] for i in kept]
    for i, idx in enumerate(kept):
        others = [b for k, b in enumerate(basis) if k != i]
        g = G[idx]
        if others and not order.is_local:
            lt = order.leading(g)
            head = Poly(g.ring, {lt[0]: lt[1]})
            tail = reduce_strong(g - head, others, order, config)
            g = head + tail
        out.append(_normalize_lead(g, order))
    out.sort(key=lambda g: order.key(order.leading(g)[0]))
    return out


class _HomogenizedOrder:
    """Global order used by Lazard's method: total degree first, ties by the
    base local order on the original variables (the homogenizing variable is
    the last one)."""

    is_local = False

    def __init__(self, base: MonomialOrder):
        self.base = base

    def key(self, exps):
        return (sum(exps), self.base.key(exps[:-1]))

    def leading(self, poly: Poly):
        if not poly.terms:
            return None
        e = max(poly.terms, key=self.key)
        return e, poly.terms[e]


def _homogenize(poly: Poly, target: PolyRing) -> Poly:
    d = poly.degree()
    return Poly(target, {e + (d - sum(e),): c for e, c in poly.terms.items()})


def _dehomogenize(poly: Poly, target: PolyRing) -> Poly:
    out = {}
    for e, c in poly.terms.items():
        key = e[:-1]
        nv = out.get(key)
        nv = c if nv is None else nv + c
        if nv:
            out[key] = nv
        else:
            out.pop(key, None)
    return Poly(target, out)


def std_basis(gens, order: MonomialOrder, config=DEFAULT_CONFIG) -> StdBasis:
    """Strong standard basis of the ideal generated by gens."""
    gens = [g for g in gens if g.terms]
    if not gens:
        raise NonIntegralEntry("empty generating set")
    ring = gens[0].ring
    for g in gens:
        if g.min_coeff_val() < 0:
            raise NonIntegralEntry(f"coefficients of {g} are not all in O")
    if not order.is_local:
        basis = _buchberger(gens, order, config)
        return StdBasis(ring, order, basis, config)
    hring = PolyRing(ring.dvr, ring.names + ("_h",))
    horder = _HomogenizedOrder(order)
    hgens = [_homogenize(g, hring) for g in gens]
    hbasis = _buchberger(hgens, horder, config)
    basis = [_dehomogenize(g, ring) for g in hbasis]
    basis = [g for g in basis if g.terms]
    basis = _minimalize_local(basis, order, config)
    return StdBasis(ring, order, basis, config)


def _minimalize_local(G, order, config):
    dvr = G[0].ring.dvr
    leads = [order.leading(g) for g in G]
    kept = []
    for i in range(len(G)):
        ei, ci = leads[i]
        redundant = False
        for j in kept:
            ej, cj = leads[j]
            if monomial_divides(ej, ei) and dvr.val(cj) <= dvr.val(ci):
                redundant = True
                break
        if not redundant:
            kept.append(i)
    out = [_normalize_lead(G[i], order) for i in kept]
    out.sort(key=lambda g: order.key(order.leading(g)[0]))
    return out


def normal_form(f: Poly, basis: StdBasis) -> Poly:
    """Irreducible remainder of f against the basis; for local orders this is
    Mora's weak normal form (zero exactly on local-ideal members)."""
    if basis.order.is_local:
        return mora_normal_form(f, basis.gens, basis.order, basis.config)
    return reduce_strong(f, basis.gens, basis.order, basis.config)


def in_ideal(f: Poly, basis: StdBasis) -> bool:
    return not normal_form(f, basis).terms

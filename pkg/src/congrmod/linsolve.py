"""Bounded-degree linear algebra over polynomial quotient rings.

Kernels and solves of matrices over A = O[x]/I are reduced to exact
O-linear algebra on monomial coefficient vectors.  Quotient conditions are
encoded either by explicit ideal-multiple absorber columns, or, when every
element of the global standard basis has a unit leading coefficient (so
strong normal forms are O-linear), by reducing products to normal form
first.  Completeness holds only up to the multiplier degree bound; callers
supply bounds that are provably sufficient for module-finite algebras and
record a bounded certification status otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import DEFAULT_CONFIG
from .errors import DegreeBoundExceeded
from .poly import Poly, monomial_mul, monomials_up_to
from .stdbasis import reduce_strong


@dataclass(frozen=True)
class Cert:
    kind: str  # "certified" | "bounded" | "user_supplied_verified"
    degree: object = None

    def merge(self, other: "Cert") -> "Cert":
        order = {"certified": 0, "user_supplied_verified": 1, "bounded": 2}
        if order[self.kind] >= order[other.kind]:
            a, b = self, other
        else:
            a, b = other, self
        if a.kind == "bounded":
            degs = [c.degree for c in (self, other) if c.kind == "bounded"]
            return Cert("bounded", min(degs))
        return a

    def label(self) -> str:
        if self.kind == "bounded":
            return f"bounded_search(degree {self.degree})"
        return self.kind


CERTIFIED = Cert("certified")
USER_VERIFIED = Cert("user_supplied_verified")


def bounded(degree: int) -> Cert:
    return Cert("bounded", degree)


def _max_degree(columns):
    d = 0
    for col in columns:
        for p in col:
            d = max(d, p.degree())
    return d


class _System:
    """Sparse O-linear system for sum_j a_j * col_j = target (mod I).

    The column echelon is computed once and reused across solves, so one
    instance answers many membership queries against the same span cheaply.
    """

    def __init__(self, ring, gb_global, columns, nrows, deg_bounds, absorb_degree,
                 config=DEFAULT_CONFIG):
        self.ring = ring
        self.dvr = ring.dvr
        self.nrows = nrows
        self.config = config
        self._echelon = None
        if max(deg_bounds, default=0) > config.degree_cap:
            raise DegreeBoundExceeded(
                f"multiplier degree {max(deg_bounds)} above cap {config.degree_cap}")
        self.gb = gb_global
        self.linear_nf = gb_global is not None and all(
            self.dvr.val(self.gb.order.leading(g)[1]) == 0 for g in gb_global.gens)
        self.row_index = {}
        self.sparse_cols = []
        self.meta = []  # ("var", j, exps) | ("abs", ...)
        for j, col in enumerate(columns):
            for u in monomials_up_to(ring.nvars, deg_bounds[j]):
                scol = self._expand(col, u)
                self.sparse_cols.append(scol)
                self.meta.append(("var", j, u))
        if not self.linear_nf and gb_global is not None:
            for i in range(nrows):
                for g in gb_global.gens:
                    gdeg = g.degree()
                    lim = absorb_degree - gdeg
                    if lim < 0:
                        continue
                    for u in monomials_up_to(ring.nvars, lim):
                        scol = {}
                        for e, c in g.terms.items():
                            rid = self._rid(i, monomial_mul(e, u))
                            scol[rid] = c
                        self.sparse_cols.append(scol)
                        self.meta.append(("abs", i, u))

    def _rid(self, i, exps):
        key = (i, exps)
        rid = self.row_index.get(key)
        if rid is None:
            rid = len(self.row_index)
            self.row_index[key] = rid
        return rid

    def _expand(self, col, u):
        """Coefficient vector of u * col, NF-reduced when that is linear."""
        scol = {}
        for i, p in enumerate(col):
            if not p.terms:
                continue
            q = Poly(self.ring, {monomial_mul(e, u): c for e, c in p.terms.items()})
            if self.linear_nf:
                q = reduce_strong(q, self.gb.gens, self.gb.order, self.config)
            for e, c in q.terms.items():
                rid = self._rid(i, e)
                prev = scol.get(rid)
                nv = c if prev is None else prev + c
                if nv:
                    scol[rid] = nv
                else:
                    scol.pop(rid, None)
        return scol

    def _to_target(self, target):
        rhs = {}
        for i, p in enumerate(target):
            if not p.terms:
                continue
            q = p
            if self.linear_nf:
                q = reduce_strong(q, self.gb.gens, self.gb.order, self.config)
            for e, c in q.terms.items():
                key = (i, e)
                rid = self.row_index.get(key)
                if rid is None:
                    # target touches a monomial no column can reach
                    rid = self._rid(i, e)
                rhs[rid] = rhs.get(rid, self.dvr.zero) + c
        return {k: v for k, v in rhs.items() if v}

    def _vector_to_polys(self, vec, ncols):
        polys = [dict() for _ in range(ncols)]
        for cid, c in vec.items():
            tag = self.meta[cid]
            if tag[0] != "var":
                continue
            _, j, u = tag
            polys[j][u] = polys[j].get(u, self.dvr.zero) + c
        return tuple(Poly(self.ring, {e: c for e, c in d.items() if c})
                     for d in polys)

    def _ech(self):
        if self._echelon is None:
            from .omodule import _Echelon
            self._echelon = _Echelon(self.dvr, len(self.sparse_cols),
                                     self.sparse_cols)
        return self._echelon

    def kernel(self, ncols):
        out = []
        seen = set()
        for vec in self._ech().kernel():
            polys = self._vector_to_polys(vec, ncols)
            if all(p.is_zero for p in polys):
                continue
            key = tuple(tuple(sorted(p.terms.items())) for p in polys)
            if key in seen:
                continue
            seen.add(key)
            out.append(polys)
        return out

    def solve(self, target, ncols):
        rhs = self._to_target(target)
        sol = self._ech().solve(rhs)
        if sol is None:
            return None
        return self._vector_to_polys(sol, ncols)


def poly_kernel(ring, gb_global, columns, nrows, deg_bound, absorb_degree=None,
                config=DEFAULT_CONFIG, per_bounds=None):
    """Generators of {a : sum a_j col_j = 0 mod I} with deg a_j <= deg_bound."""
    if not columns:
        return []
    bounds = per_bounds if per_bounds is not None else [deg_bound] * len(columns)
    if absorb_degree is None:
        absorb_degree = deg_bound + _max_degree(columns)
    sys_ = _System(ring, gb_global, columns, nrows, bounds, absorb_degree, config)
    return sys_.kernel(len(columns))


def poly_solve(ring, gb_global, columns, target, deg_bound, absorb_degree=None,
               config=DEFAULT_CONFIG):
    """Multipliers a with sum a_j col_j = target mod I, or None."""
    bounds = [deg_bound] * len(columns)
    if absorb_degree is None:
        absorb_degree = deg_bound + max(_max_degree(columns),
                                        _max_degree([target]))
    sys_ = _System(ring, gb_global, columns, nrows=len(target),
                   deg_bounds=bounds, absorb_degree=absorb_degree, config=config)
    return sys_.solve(target, len(columns))


class SpanSolver:
    """Reusable membership oracle for the A-span of a fixed column set."""

    def __init__(self, ring, gb_global, columns, nrows, deg_bound,
                 absorb_degree=None, config=DEFAULT_CONFIG, per_bounds=None):
        self.columns = list(columns)
        self.nrows = nrows
        if absorb_degree is None:
            absorb_degree = deg_bound + _max_degree(self.columns)
        bounds = per_bounds if per_bounds is not None else \
            [deg_bound] * len(self.columns)
        self._sys = _System(ring, gb_global, self.columns, nrows,
                            bounds, absorb_degree, config)

    def solve(self, target):
        return self._sys.solve(target, len(self.columns))

    def contains(self, target):
        if all(p.is_zero for p in target):
            return True
        return self.solve(target) is not None


def span_contains(ring, gb_global, columns, target, deg_bound, config=DEFAULT_CONFIG):
    if all(p.is_zero for p in target):
        return True
    solver = SpanSolver(ring, gb_global, columns, len(target), deg_bound,
                        deg_bound + max(_max_degree(columns), _max_degree([target])),
                        config)
    return solver.contains(target)


def prune_generators(ring, gb_global, vectors, deg_bound, config=DEFAULT_CONFIG):
    """Greedy removal of vectors lying in the span of the ones kept; the
    membership oracle is rebuilt only when a vector is actually kept, and
    candidates in between reuse its echelon."""

    def sort_key(v):
        return (max((p.degree() for p in v), default=-1),
                sum(len(p.terms) for p in v),
                tuple(str(p) for p in v))

    vecs = sorted(vectors, key=sort_key)
    if not vecs:
        return []
    nrows = len(vecs[0])
    absorb = deg_bound + max(_max_degree(vecs), 0)
    kept = []
    solver = None
    for v in vecs:
        if kept:
            if solver is None:
                solver = SpanSolver(ring, gb_global, kept, nrows, deg_bound,
                                    absorb, config)
            if solver.contains(v):
                continue
        kept.append(v)
        solver = None
    return kept

"""Exact O-module structure for module-finite quotient algebras.

A quotient O[x]/I is recognized as module-finite over O when, for every
variable, the global standard basis contains an element whose leading term
is a pure power with unit coefficient; the monomials outside the staircase
of unit-lead leading monomials then span the quotient over O, and every
kernel or torsion computation reduces to exact linear algebra over O with
provably sufficient degree bounds.
"""

from __future__ import annotations

from itertools import product

from .errors import NotFiniteOverBase
from .omodule import FinOModule, o_kernel, o_solve
from .poly import Poly, monomial_divides
from .stdbasis import reduce_strong


class FiniteStructure:
    """Box basis of a module-finite algebra A = O[x]/I over O."""

    def __init__(self, ring, gb_global, box, config):
        self.ring = ring
        self.dvr = ring.dvr
        self.gb = gb_global
        self.box = box
        self.index = {e: i for i, e in enumerate(box)}
        self.maxdeg = max((sum(e) for e in box), default=0)
        self.config = config
        self._relations = None

    @classmethod
    def try_build(cls, ring, gb_global, config):
        dvr = ring.dvr
        unit_leads = []
        for g in gb_global.gens:
            e, c = gb_global.order.leading(g)
            if dvr.val(c) == 0:
                unit_leads.append(e)
        bounds = []
        for i in range(ring.nvars):
            k = None
            for e in unit_leads:
                if e[i] and all(x == 0 for j, x in enumerate(e) if j != i):
                    k = e[i] if k is None else min(k, e[i])
            if k is None:
                return None
            bounds.append(k)
        box = []
        for e in product(*[range(k) for k in bounds]):
            if not any(monomial_divides(le, e) for le in unit_leads):
                box.append(e)
        box.sort(key=lambda e: (sum(e), e))
        return cls(ring, gb_global, box, config)

    @property
    def rank(self):
        return len(self.box)

    def coords(self, poly: Poly):
        """O-coordinates of the class of poly on the box monomials."""
        nf = reduce_strong(poly, self.gb.gens, self.gb.order, self.config)
        out = [self.dvr.zero] * len(self.box)
        for e, c in nf.terms.items():
            out[self.index[e]] = c
        return out

    def to_poly(self, vec):
        return Poly(self.ring, {e: c for e, c in zip(self.box, vec) if c})

    def algebra_relations(self):
        """O-relations among the box monomials inside A (nonzero only when
        the quotient has O-torsion, e.g. a relation pi^m * x)."""
        if self._relations is None:
            from .linsolve import _System
            cols = [(self.to_poly([self.dvr.one if i == j else self.dvr.zero
                                   for i in range(self.rank)]),)
                    for j in range(self.rank)]
            maxg = max((g.degree() for g in self.gb.gens), default=0)
            sys_ = _System(self.ring, self.gb, cols, 1,
                           [0] * self.rank, self.maxdeg + maxg, self.config)
            rels = []
            for vec in sys_.kernel(self.rank):
                rels.append([p.constant_value() for p in vec])
            self._relations = rels
        return self._relations

    def mult_matrix(self, poly: Poly):
        """Columns: coordinates of poly * m_k for each box monomial m_k."""
        cols = []
        for e in self.box:
            m = Poly(self.ring, {e: self.dvr.one})
            cols.append(self.coords(poly * m))
        return cols  # list of columns


class FiniteModule:
    """O-coordinates for a finitely presented module over a module-finite
    algebra: generator-major blocks of box coordinates."""

    def __init__(self, fstruct: FiniteStructure, gens: int, pres_columns):
        self.fs = fstruct
        self.dvr = fstruct.dvr
        self.gens = gens
        self.dim = fstruct.rank * gens
        rel = []
        arel = fstruct.algebra_relations()
        for l in range(gens):
            for r in arel:
                rel.append(self._block_vector(l, r))
        for col in pres_columns:
            for e in fstruct.box:
                m = Poly(fstruct.ring, {e: self.dvr.one})
                vec = []
                for l in range(gens):
                    vec.extend(fstruct.coords(m * col[l]))
                rel.append(vec)
        self.rel_cols = rel

    def _block_vector(self, l, coords):
        vec = [self.dvr.zero] * self.dim
        n = self.fs.rank
        for k, c in enumerate(coords):
            vec[l * n + k] = c
        return vec

    def element_coords(self, vec_polys):
        out = []
        for l in range(self.gens):
            out.extend(self.fs.coords(vec_polys[l]))
        return out

    def as_module(self) -> FinOModule:
        return FinOModule.from_presentation(
            self.dvr, _cols_to_rows(self.dvr, self.rel_cols, self.dim))

    def kernel_of_operators(self, op_polys):
        """O-generators of {x in M : q * x = 0 for every q}, as coordinate
        vectors on the box basis blocks."""
        fs = self.fs
        nops = len(op_polys)
        mults = [fs.mult_matrix(q) for q in op_polys]
        nrel = len(self.rel_cols)
        ncols = self.dim + nops * nrel
        columns = []
        n = fs.rank
        for j in range(self.dim):
            l, k = divmod(j, n)
            col = {}
            for t in range(nops):
                mcol = mults[t][k]
                for i, c in enumerate(mcol):
                    if c:
                        col[t * self.dim + l * n + i] = c
            columns.append(col)
        for t in range(nops):
            for r in self.rel_cols:
                col = {}
                for i, c in enumerate(r):
                    if c:
                        col[t * self.dim + i] = -c
                columns.append(col)
        out = []
        for vec in o_kernel(self.dvr, ncols, columns):
            v = [vec.get(j, self.dvr.zero) for j in range(self.dim)]
            if any(v):
                out.append(v)
        # drop generators that are zero in M
        kept = []
        for v in out:
            if self._in_relation_span(v, kept):
                continue
            kept.append(v)
        return kept

    def _in_relation_span(self, v, extra):
        cols = []
        for w in self.rel_cols + extra:
            cols.append({i: c for i, c in enumerate(w) if c})
        rhs = {i: c for i, c in enumerate(v) if c}
        return o_solve(self.dvr, len(cols), cols, rhs) is not None

    def present_submodule(self, vectors) -> FinOModule:
        """The submodule generated by the vectors, in invariant-factor form."""
        if not vectors:
            return FinOModule.zero(self.dvr)
        cols = [{i: c for i, c in enumerate(v) if c} for v in vectors]
        cols += [{i: c for i, c in enumerate(r) if c} for r in self.rel_cols]
        rels = []
        for vec in o_kernel(self.dvr, len(cols), cols):
            w = [vec.get(j, self.dvr.zero) for j in range(len(vectors))]
            if any(w):
                rels.append(w)
        return FinOModule.from_presentation(
            self.dvr, _cols_to_rows(self.dvr, rels, len(vectors)))

    def quotient_module(self, extra_vectors) -> FinOModule:
        cols = self.rel_cols + list(extra_vectors)
        return FinOModule.from_presentation(
            self.dvr, _cols_to_rows(self.dvr, cols, self.dim))


def _cols_to_rows(dvr, cols, nrows):
    if not cols:
        return [[] for _ in range(nrows)]
    return [[col[i] for col in cols] for i in range(nrows)]


def require_finite(fstruct, what="this operation"):
    if fstruct is None:
        raise NotFiniteOverBase(f"{what} needs a module-finite algebra over O")

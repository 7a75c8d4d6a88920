"""Augmented local O-algebras and their cotangent invariants.

An algebra is a polynomial presentation O[x_1..x_n]/(f_1..f_m) together
with an O-algebra augmentation x_i -> a_i (all a_i of positive valuation)
and a declared codimension c.  The declared c is never inferred; two
independent computations (cotangent rank and the vanishing of the
congruence ideal) corroborate or refute it.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .config import DEFAULT_CONFIG
from .dvr import IdealO
from .errors import (AugmentationNotWellDefined, InconsistentCodim,
                     NonIntegralEntry, NonLocalAugmentation)
from .finite import FiniteStructure
from .linsolve import (CERTIFIED, SpanSolver, bounded, poly_kernel, poly_solve,
                       prune_generators, span_contains)
from .omodule import FinOModule, fitting_ideal
from .poly import GLOBAL, LOCAL, Poly, PolyRing, taylor_division
from .stdbasis import StdBasis, mora_normal_form, reduce_strong, std_basis

_NOTSET = object()


class AugmentedAlgebra:
    def __init__(self, ring: PolyRing, relations, augmentation, codim,
                 claimed_ci=False, claimed_depth=None, claimed_mcm=False,
                 claimed_gorenstein=False, claimed_dim=None,
                 config=DEFAULT_CONFIG, name="A"):
        self.ring = ring
        self.dvr = ring.dvr
        self.relations = [r for r in relations if r.terms]
        self.augmentation = list(augmentation)
        self.codim = int(codim)
        self.claimed_ci = claimed_ci
        self.claimed_depth = claimed_depth
        self.claimed_mcm = claimed_mcm
        self.claimed_gorenstein = claimed_gorenstein
        self.claimed_dim = claimed_dim
        self.config = config
        self.name = name
        self._lock = threading.RLock()
        self._gb_global = None
        self._gb_local = None
        self._finite = _NOTSET
        self._cotangent = None
        self._resolutions = {}
        self._validate()

    def assertion_notes(self):
        """Heuristic cross-checks of the user assertions; recorded, never
        enforced."""
        notes = []
        if self.claimed_ci and self.claimed_dim is not None:
            expected = self.ring.nvars + 1 - self.claimed_dim
            if len(self.relations) != expected:
                notes.append(
                    f"ci assertion vs declared dim {self.claimed_dim}: "
                    f"{len(self.relations)} relations, a complete intersection "
                    f"presentation would have {expected}")
        return notes

    def _validate(self):
        if self.codim < 0:
            raise InconsistentCodim("negative codimension")
        if len(self.augmentation) != self.ring.nvars:
            raise AugmentationNotWellDefined("augmentation must assign every variable")
        for a in self.augmentation:
            v = self.dvr.val(a)
            if v < 0:
                raise NonIntegralEntry("augmentation value outside O")
            if v <= 0:
                raise NonLocalAugmentation(
                    "augmentation values must have positive valuation")
        for f in self.relations:
            if f.min_coeff_val() < 0:
                raise NonIntegralEntry(f"relation {f} has a coefficient outside O")
            if self.lam(f):
                raise AugmentationNotWellDefined(
                    f"relation {f} does not vanish under the augmentation")

    # -- basic structure --
    @property
    def nvars(self):
        return self.ring.nvars

    def lam(self, poly: Poly):
        """The augmentation, applied to any representative polynomial."""
        return poly.evaluate(self.augmentation)

    def lam_matrix(self, columns):
        """Entry-wise augmentation of a column list; rows-major result."""
        nrows = len(columns[0]) if columns else 0
        return [[self.lam(col[i]) for col in columns] for i in range(nrows)]

    def p_gens(self):
        return [self.ring.var(i) - self.ring.const(a)
                for i, a in enumerate(self.augmentation)]

    # -- cached bases and finiteness --
    @property
    def gb_global(self) -> StdBasis:
        with self._lock:
            if self._gb_global is None:
                if self.relations:
                    self._gb_global = std_basis(self.relations, GLOBAL, self.config)
                else:
                    self._gb_global = StdBasis(self.ring, GLOBAL, [], self.config)
            return self._gb_global

    @property
    def gb_local(self) -> StdBasis:
        with self._lock:
            if self._gb_local is None:
                if self.relations:
                    self._gb_local = std_basis(self.relations, LOCAL, self.config)
                else:
                    self._gb_local = StdBasis(self.ring, LOCAL, [], self.config)
            return self._gb_local

    @property
    def finite(self):
        with self._lock:
            if self._finite is _NOTSET:
                self._finite = FiniteStructure.try_build(
                    self.ring, self.gb_global, self.config)
            return self._finite

    @property
    def is_module_finite(self):
        return self.finite is not None

    # -- reduction and membership --
    def nf(self, poly: Poly) -> Poly:
        """Global-order strong normal form: a canonical representative."""
        return reduce_strong(poly, self.gb_global.gens, GLOBAL, self.config)

    def in_ideal(self, poly: Poly) -> bool:
        """Membership in the localized ideal (Mora normal form)."""
        if not poly.terms:
            return True
        if not self.relations:
            return False
        return not mora_normal_form(poly, self.gb_local.gens, LOCAL, self.config).terms

    def reduce_columns(self, columns):
        return [tuple(self.nf(p) for p in col) for col in columns]

    # -- bounded linear algebra over the quotient --
    def _degree_bound(self, bound):
        if self.is_module_finite:
            return max(self.finite.maxdeg, 0), CERTIFIED
        b = bound if bound is not None else self.config.search_degree
        return b, bounded(b)

    def kernel_columns(self, columns, nrows, bound=None, per_bounds=None):
        """Generators of {a : sum a_j col_j = 0 over A}; certified when the
        algebra is module-finite, bounded search otherwise."""
        b, cert = self._degree_bound(bound)
        if per_bounds is not None:
            per_bounds = [b if x is None else x for x in per_bounds]
        vecs = poly_kernel(self.ring, self.gb_global, columns, nrows, b,
                           config=self.config, per_bounds=per_bounds)
        return vecs, cert

    def solve_columns(self, columns, target, bound=None):
        b, cert = self._degree_bound(bound)
        sol = poly_solve(self.ring, self.gb_global, columns, target, b,
                         config=self.config)
        return sol, cert

    def span_contains(self, columns, target, bound=None):
        b, cert = self._degree_bound(bound)
        ok = span_contains(self.ring, self.gb_global, columns, target, b,
                           config=self.config)
        return ok, cert

    def span_solver(self, columns, nrows, bound=None):
        """Reusable membership oracle; pair with the matching certificate."""
        b, cert = self._degree_bound(bound)
        solver = SpanSolver(self.ring, self.gb_global, columns, nrows, b,
                            config=self.config)
        return solver, cert

    def prune(self, vectors, bound=None):
        b, _ = self._degree_bound(bound)
        return prune_generators(self.ring, self.gb_global, vectors, b,
                                config=self.config)

    # -- derived algebras --
    def quotient_by(self, f: Poly, codim=None, name=None) -> "AugmentedAlgebra":
        return AugmentedAlgebra(
            self.ring, self.relations + [f], self.augmentation,
            self.codim - 1 if codim is None else codim,
            claimed_ci=self.claimed_ci, claimed_depth=None,
            claimed_mcm=False, claimed_gorenstein=False,
            config=self.config, name=name or (self.name + "/(f)"))

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations) or "0"
        return f"O[{', '.join(self.ring.names)}]/({rels})"


def build_algebra(ring: PolyRing, relations, augmentation, codim,
                  **flags) -> AugmentedAlgebra:
    """Validate and build; lam(f_j) is checked exactly."""
    return AugmentedAlgebra(ring, relations, augmentation, codim, **flags)


@dataclass(frozen=True)
class CotangentData:
    cotangent: FinOModule
    phi: FinOModule
    fitt_c: IdealO


def jacobian_at_lambda(A: AugmentedAlgebra):
    """Rows indexed by variables, columns by relations, evaluated at the
    augmentation; presents p/p^2 on the generators x_i - a_i."""
    rows = []
    for i in range(A.nvars):
        rows.append([A.lam(f.partial(i)) for f in A.relations])
    return rows


def cotangent_invariants(A: AugmentedAlgebra) -> CotangentData:
    with A._lock:
        if A._cotangent is None:
            jac = jacobian_at_lambda(A)
            cot = FinOModule.from_presentation(A.dvr, jac, generators=A.nvars)
            phi = cot.torsion_part()
            fitt = fitting_ideal(A.dvr, jac, A.codim)
            A._cotangent = CotangentData(cot, phi, fitt)
        return A._cotangent


def cotangent_class_coords(A: AugmentedAlgebra, f: Poly):
    """Coordinates of [f] in p/p^2 on the generators x_i - a_i."""
    gs, _ = taylor_division(f, A.augmentation)
    return [A.lam(g) for g in gs]


def symbolic_power_test(A: AugmentedAlgebra, f: Poly) -> dict:
    """Membership of f in p and in the second symbolic power, the latter
    read off from the torsion of its cotangent class."""
    in_p = not A.lam(f)
    if not in_p:
        return {"in_p": False, "in_p2_symbolic": False, "ord_class": None}
    cot = cotangent_invariants(A).cotangent
    coords = cotangent_class_coords(A, f)
    ord_class = cot.order_ideal(coords)
    return {"in_p": True, "in_p2_symbolic": ord_class.is_zero,
            "ord_class": ord_class}


def regularity_at_lambda(A: AugmentedAlgebra) -> dict:
    """Two independent signals must agree: the torsion-free cotangent rank
    equals the declared c, and the congruence ideal of the ring is nonzero."""
    from .congruence import eta_raw
    from .resolution import resolve_O

    cot = cotangent_invariants(A)
    rank = cot.cotangent.free_rank
    if rank < A.codim:
        raise InconsistentCodim(
            f"cotangent torsion-free rank {rank} is below declared codim {A.codim}")
    res = resolve_O(A)
    eta, cert = eta_raw(A, None, A.codim, res)
    rank_test = rank == A.codim
    eta_test = not eta.is_zero
    if rank_test != eta_test:
        raise InconsistentCodim(
            f"cotangent rank test ({rank_test}) and eta test ({eta_test}) disagree "
            f"at declared codim {A.codim}")
    return {
        "regular_at_p": rank_test,
        "regular_global": rank_test and eta.is_unit,
        "evidence": {
            "cotangent_rank": rank,
            "declared_codim": A.codim,
            "eta": eta,
            "certification": cert.label(),
        },
    }

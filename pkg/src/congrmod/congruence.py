"""Congruence modules and congruence ideals through Ext over the algebra.

For O-valued coefficients the Hom complex of a resolution has augmented
differentials over O and cohomology is pure Smith-form linear algebra.  For
module coefficients, cocycles and the relations among their classes come
from bounded kernel searches over the quotient ring; since every Ext class
here is killed by the augmentation ideal, evaluating an A-presentation of
the cohomology under the augmentation presents it over O.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import comb

from .algebra import (AugmentedAlgebra, cotangent_invariants,
                      regularity_at_lambda, symbolic_power_test)
from .dvr import IdealO, INF
from .errors import (InSymbolicSquare, InputError,
                     InternalInvariantViolation, KappaNotInjective,
                     NotASurjection, NotSameCodim, ProductLiftFailed,
                     ResolutionTooShort, ZeroDivisorSuspected)
from .fpmodule import FpModule
from .linsolve import CERTIFIED, Cert, SpanSolver
from .omodule import (FinOModule, k_rank, o_kernel_dense, o_solve_dense,
                      smith_form)
from .poly import Poly
from .resolution import FreeResolution, _apply_columns, resolve_O


class RegularityWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# Ext modules

@dataclass
class ExtModule:
    degree: int
    structure: FinOModule
    reps: list
    kind: str  # "O" | "M"
    resolution: FreeResolution
    cert: Cert
    ker_basis: list = field(default_factory=list)
    _class_solver: object = None
    _class_cols: list = field(default_factory=list)
    _nz: int = 0

    # -- O-valued classes --
    def o_class_free_values(self, w):
        """Free (torsion-free quotient) coordinates of the class of the
        cocycle w in O^{r_i}."""
        if not self.ker_basis:
            if any(w):
                raise InternalInvariantViolation("cocycle outside the kernel")
            return []
        dvr = self.structure.dvr
        rows = [[kb[i] for kb in self.ker_basis] for i in range(len(w))]
        y = o_solve_dense(dvr, rows, list(w))
        if y is None:
            raise InternalInvariantViolation("cocycle outside the kernel")
        coords = self.structure.normal_coords(y)
        return [coords[i] for i in self.structure.free_indices()]

    # -- M-valued classes --
    def m_class_coords(self, psi_flat):
        """Coordinates, on the stored generators, of an M-valued cocycle
        given flattened as (generator, resolution index) -> polynomial."""
        if self._class_solver is None:
            raise InternalInvariantViolation("class solver not initialized")
        sol = self._class_solver.solve(psi_flat)
        if sol is None:
            raise InternalInvariantViolation(
                "cocycle not reachable from the computed generators; "
                "increase the degree bound")
        A = self.resolution.algebra
        return [A.lam(sol[j]) for j in range(self._nz)]

    def m_class_free_values(self, psi_flat):
        coords = self.m_class_coords(psi_flat)
        full = self.structure.normal_coords(coords)
        return [full[i] for i in self.structure.free_indices()]


def ext_module(A: AugmentedAlgebra, M, i: int, res: FreeResolution) -> ExtModule:
    """Ext^i_A(O, M) with structure, representatives and witnesses."""
    if i + 1 > res.length:
        raise ResolutionTooShort(
            f"need d_{i + 1}; resolution has length {res.length}")
    if isinstance(M, FpModule) and not M.is_O:
        return _ext_general(A, M, i, res)
    return _ext_O(A, i, res)


def _ext_O(A, i, res):
    dvr = A.dvr
    r_i = res.rank(i)
    if r_i == 0:
        return ExtModule(i, FinOModule.zero(dvr), [], "O", res, res.cert)
    dnext = res.lam_rows(i + 1)  # r_i x r_(i+1)
    rows_t = [list(col) for col in zip(*dnext)] if dnext and dnext[0] else []
    if rows_t:
        ker = o_kernel_dense(dvr, rows_t)
    else:
        ker = [[dvr.one if k == j else dvr.zero for k in range(r_i)]
               for j in range(r_i)]
    im_coords = []
    if i > 0 and res.rank(i - 1):
        dprev = res.lam_rows(i)  # r_(i-1) x r_i
        rows = [[kb[t] for kb in ker] for t in range(r_i)]
        for row in dprev:
            if not any(row):
                continue
            y = o_solve_dense(dvr, rows, list(row))
            if y is None:
                raise InternalInvariantViolation(
                    "coboundary escapes the cocycle lattice")
            im_coords.append(y)
    pres = [[v[j] for v in im_coords] for j in range(len(ker))]
    structure = FinOModule.from_presentation(dvr, pres, generators=len(ker))
    return ExtModule(i, structure, list(ker), "O", res, res.cert,
                     ker_basis=list(ker))


def _flat_index(g, r, l, k):
    return l * r + k


def _ext_general(A, M, i, res):
    ring = A.ring
    g = M.gens
    r_i = res.rank(i)
    r_n = res.rank(i + 1)
    dvr = A.dvr
    if r_i == 0:
        return ExtModule(i, FinOModule.zero(dvr), [], "M", res, res.cert)
    zero = ring.zero
    cert = res.cert

    # cocycles: psi with psi . d_(i+1) = 0 in M^(r_(i+1))
    if r_n == 0:
        reps = []
        for l in range(g):
            for k in range(r_i):
                vec = [zero] * (g * r_i)
                vec[_flat_index(g, r_i, l, k)] = ring.one
                reps.append(tuple(vec))
    else:
        dnext = res.differential(i + 1)
        cols = []
        for l in range(g):
            for k in range(r_i):
                vec = [zero] * (g * r_n)
                for j, col in enumerate(dnext):
                    if col[k].terms:
                        vec[l * r_n + j] = col[k]
                cols.append(tuple(vec))
        nvar = len(cols)
        for j in range(r_n):
            for pcol in M.columns:
                vec = [zero] * (g * r_n)
                for l in range(g):
                    if pcol[l].terms:
                        vec[l * r_n + j] = pcol[l]
                cols.append(tuple(vec))
        vecs, c1 = A.kernel_columns(cols, nrows=g * r_n)
        cert = cert.merge(c1)
        reps = []
        seen = set()
        for v in vecs:
            head = tuple(v[:nvar])
            if all(p.is_zero for p in head):
                continue
            if head in seen:
                continue
            seen.add(head)
            reps.append(head)

    # coboundaries
    cob = []
    if i > 0 and res.rank(i - 1):
        dprev = res.differential(i)
        for l in range(g):
            for kp in range(res.rank(i - 1)):
                vec = [zero] * (g * r_i)
                for k, col in enumerate(dprev):
                    if col[kp].terms:
                        vec[_flat_index(g, r_i, l, k)] = col[kp]
                cob.append(tuple(vec))
    pblocks = []
    for k in range(r_i):
        for pcol in M.columns:
            vec = [zero] * (g * r_i)
            for l in range(g):
                if pcol[l].terms:
                    vec[_flat_index(g, r_i, l, k)] = pcol[l]
            pblocks.append(tuple(vec))

    all_cols = list(reps) + cob + pblocks
    s = len(reps)
    if s == 0:
        return ExtModule(i, FinOModule.zero(dvr), [], "M", res, cert)
    # p kills Ext classes, so constant multipliers on the generators reach
    # every relation image; only coboundary and relation multipliers need
    # polynomial degrees
    per_bounds = [0] * s + [None] * (len(all_cols) - s)
    rel_vecs, c2 = A.kernel_columns(all_cols, nrows=g * r_i,
                                    per_bounds=per_bounds)
    cert = cert.merge(c2)
    rel_cols = []
    for v in rel_vecs:
        coeffs = [A.lam(v[j]) for j in range(s)]
        if any(coeffs):
            rel_cols.append(coeffs)
    pres = [[col[j] for col in rel_cols] for j in range(s)]
    structure = FinOModule.from_presentation(dvr, pres, generators=s)
    ext = ExtModule(i, structure, reps, "M", res, cert)
    b, _ = A._degree_bound(None)
    ext._class_solver = SpanSolver(ring, A.gb_global, all_cols, g * r_i, b,
                                   config=A.config,
                                   per_bounds=[0] * s + [b] * (len(all_cols) - s))
    ext._class_cols = all_cols
    ext._nz = s
    return ext


# ---------------------------------------------------------------------------
# eta and psi

def _as_module(A, M):
    if M is None:
        return FpModule.ring_module(A, asserted_depth=A.claimed_depth,
                                    asserted_mcm=A.claimed_mcm)
    return M


def _push_values(A, ext_OM, ext_OO, M, rep, row):
    """Push an Ext^c(O,M) representative through a functional row, landing
    in the free part of Ext^c(O,O)."""
    r_c = ext_OO.resolution.rank(ext_OO.degree)
    dvr = A.dvr
    if ext_OM.kind == "O":
        w = [row[0] * x for x in rep]
    else:
        g = M.gens
        w = []
        for k in range(r_c):
            acc = dvr.zero
            for l in range(g):
                p = rep[_flat_index(g, r_c, l, k)]
                if p.terms:
                    acc = acc + row[l] * A.lam(p)
            w.append(acc)
    return ext_OO.o_class_free_values(w)


def eta_raw(A: AugmentedAlgebra, M, c: int, res: FreeResolution):
    """The congruence ideal as the image of the Ext pairing; no regularity
    gate, so a zero ideal is a possible (meaningful) outcome."""
    MA = _as_module(A, M)
    ext_OO = ext_module(A, FpModule.o_module(A), c, res)
    ext_OM = ext_OO if MA.is_O else ext_module(A, MA, c, res)
    cert = ext_OO.cert.merge(ext_OM.cert)
    rows = MA.hom_to_O_generators()
    r = ext_OO.structure.free_rank
    best = INF
    nonzero_vec = False
    for rep in ext_OM.reps:
        for row in rows:
            vals = _push_values(A, ext_OM, ext_OO, MA, rep, row)
            for x in vals:
                if x:
                    nonzero_vec = True
                    v = A.dvr.val(x)
                    if v < best:
                        best = v
    if nonzero_vec and r != 1:
        raise InternalInvariantViolation(
            "nonzero pairing image inside a torsion-free part of rank != 1")
    return IdealO(A.dvr, best), cert


def psi_raw(A: AugmentedAlgebra, M, c: int, res: FreeResolution):
    """Cokernel of Ext^c(O,M) -> tfree Ext^c(O, M/pM), in normal form."""
    MA = _as_module(A, M)
    ext_OO = ext_module(A, FpModule.o_module(A), c, res)
    ext_OM = ext_OO if MA.is_O else ext_module(A, MA, c, res)
    cert = ext_OO.cert.merge(ext_OM.cert)
    if ext_OO.structure.free_rank != 1:
        raise InternalInvariantViolation(
            "tfree Ext^c(O,O) is not of rank one at the declared codimension")
    rows = MA.hom_to_O_generators()  # dual basis rows of tfree(M/pM)
    mu = len(rows)
    image_cols = []
    for rep in ext_OM.reps:
        col = []
        for row in rows:
            vals = _push_values(A, ext_OM, ext_OO, MA, rep, row)
            col.append(vals[0] if vals else A.dvr.zero)
        if any(col):
            image_cols.append(col)
    pres = [[col[i] for col in image_cols] for i in range(mu)]
    out = FinOModule.from_presentation(A.dvr, pres, generators=mu)
    if out.free_rank:
        raise InternalInvariantViolation(
            "congruence module came out non-torsion: the algebra is not "
            "regular at the augmentation, or the search bound is too small")
    return out, cert, mu


def eta(A: AugmentedAlgebra, M=None, res=None) -> IdealO:
    """Congruence ideal at the declared codimension; zero with a warning
    when the algebra is not regular at the augmentation."""
    reg = regularity_at_lambda(A)
    if res is None:
        res = resolve_O(A)
    value, _ = eta_raw(A, M, A.codim, res)
    if not reg["regular_at_p"]:
        warnings.warn(
            "algebra is not regular at the augmentation; the congruence "
            "ideal vanishes", RegularityWarning)
    return value


def psi(A: AugmentedAlgebra, M=None, res=None) -> FinOModule:
    regularity_at_lambda(A)
    if res is None:
        res = resolve_O(A)
    out, _, _ = psi_raw(A, M, A.codim, res)
    return out


# ---------------------------------------------------------------------------
# codimension-zero oracles

def psi_direct_codim0(A: AugmentedAlgebra, M=None) -> FinOModule:
    """M/(M[p] + M[I]) with I = A[p]; the independent oracle at c = 0."""
    if A.codim != 0:
        raise InputError("the direct congruence module needs codimension 0")
    MA = _as_module(A, M)
    ring_mod = FpModule.ring_module(A)
    p_gens = A.p_gens()
    a_p_vecs = ring_mod.torsion_submodule_vectors(p_gens)
    fs = A.finite
    ideal_gens = [fs.to_poly(v) for v in a_p_vecs]
    fm = MA.finite_module()
    m_p = fm.kernel_of_operators(p_gens)
    m_i = fm.kernel_of_operators(ideal_gens) if ideal_gens else []
    return fm.quotient_module(m_p + m_i)


def eta_codim0_oracle(A: AugmentedAlgebra, M=None) -> IdealO:
    """Values of all functionals on the p-torsion of M: the image of the
    classical composition-pairing at c = 0."""
    if A.codim != 0:
        raise InputError("the pairing oracle needs codimension 0")
    MA = _as_module(A, M)
    fm = MA.finite_module()
    vecs = fm.kernel_of_operators(A.p_gens())
    rows = MA.hom_to_O_generators()
    fs = fm.fs
    lam_box = [Poly(A.ring, {e: A.dvr.one}).evaluate(A.augmentation)
               for e in fs.box]
    best = INF
    for v in vecs:
        for row in rows:
            acc = A.dvr.zero
            for l in range(MA.gens):
                for k in range(fs.rank):
                    c = v[l * fs.rank + k]
                    if c and lam_box[k]:
                        acc = acc + c * lam_box[k] * row[l]
            if acc:
                best = min(best, A.dvr.val(acc))
    return IdealO(A.dvr, best)


# ---------------------------------------------------------------------------
# defect formula

def kappa_defect(A: AugmentedAlgebra, M, c=None, res=None) -> dict:
    """The Kunneth comparison map on torsion-free parts, its cokernel
    annihilator, and the two defect identities."""
    if c is None:
        c = A.codim
    if res is None:
        res = resolve_O(A, length=max(c + 2, 2))
    MA = _as_module(A, M)
    ext_OO = ext_module(A, FpModule.o_module(A), c, res)
    ext_OA = ext_module(A, FpModule.ring_module(A), c, res)
    dvr = A.dvr
    if ext_OA.structure.free_rank != 1:
        raise InternalInvariantViolation(
            "tfree Ext^c(O,A) is not of rank one; not regular at the augmentation?")
    # representative of the rank-one generator of tfree Ext^c(O,A)
    gen_coords = ext_OA.structure.free_generator_reps()[0]
    r_c = res.rank(c)
    zeta = [A.ring.zero] * r_c
    for coef, rep in zip(gen_coords, ext_OA.reps):
        if coef:
            for k in range(r_c):
                if rep[k].terms:
                    zeta[k] = zeta[k] + rep[k].scale(coef)
    red = MA.reduce_mod_p()
    mu = red["mu"]
    quotient = red["quotient"]
    if mu == 0:
        return {"kappa": [], "coker_ann": IdealO.unit(dvr),
                "diff_identity": True, "sequence_identity": True, "mu": 0}
    free_reps = quotient.free_generator_reps()  # vectors over O^gens
    ext_OM = ext_OO if MA.is_O else ext_module(A, MA, c, res)
    if ext_OM.structure.free_rank != mu:
        raise InternalInvariantViolation(
            "rank of Ext^c(O,M) does not match the generator count of M_p")
    kappa_cols = []
    for ms in free_reps:
        if MA.is_O:
            w = [A.lam(p) * ms[0] for p in zeta]
            kappa_cols.append(ext_OO.o_class_free_values(w))
        else:
            psi_flat = []
            for l in range(MA.gens):
                for k in range(r_c):
                    psi_flat.append(zeta[k].scale(ms[l]) if ms[l] else A.ring.zero)
            kappa_cols.append(ext_OM.m_class_free_values(tuple(psi_flat)))
    rows = [[col[i] for col in kappa_cols] for i in range(mu)]
    if k_rank(dvr, rows) < mu:
        raise KappaNotInjective("the Kunneth comparison map is not injective")
    sf = smith_form(dvr, rows)
    coker_len = sum(sf.diag_vals)
    coker_ann = IdealO(dvr, max(sf.diag_vals) if sf.diag_vals else 0)
    eta_A, _ = eta_raw(A, None, c, res)
    eta_M, _ = eta_raw(A, MA, c, res)
    psi_A, _, _ = psi_raw(A, None, c, res)
    psi_M, _, _ = psi_raw(A, MA, c, res)
    diff_identity = eta_A.exponent == coker_ann.exponent + eta_M.exponent
    sequence_identity = (psi_M.torsion_length ==
                         mu * psi_A.torsion_length - coker_len)
    return {
        "kappa": rows,
        "coker_ann": coker_ann,
        "coker_length": coker_len,
        "diff_identity": diff_identity,
        "sequence_identity": sequence_identity,
        "mu": mu,
        "eta_A": eta_A,
        "eta_M": eta_M,
    }


# ---------------------------------------------------------------------------
# numerical criteria

def _depth_hypothesis(M: FpModule, c: int):
    if M.asserted_mcm:
        return True
    return M.asserted_depth is not None and M.asserted_depth >= c + 1


def numerical_criterion(A: AugmentedAlgebra, M=None, mode="defect0",
                        surjection=None, res=None) -> dict:
    """The complete-intersection-and-freeness test and its isomorphism
    variants.  Verdicts are "holds"/"fails"; missing depth or ring-theoretic
    assertions downgrade the status to hypothesis_unverified."""
    c = A.codim
    if mode == "wld" and c != 0:
        raise InputError("the classical criterion lives at codimension 0")
    if mode in ("defect0", "wld"):
        MA = _as_module(A, M)
        if res is None:
            res = resolve_O(A)
        cot = cotangent_invariants(A)
        eta_M, cert1 = eta_raw(A, MA, c, res)
        psi_M, cert2, mu = psi_raw(A, MA, c, res)
        ext_OM = ext_module(A, MA, c, res) if not MA.is_O else None
        ext_tfree = (ext_OM is None or not ext_OM.structure.torsion_exponents)
        phi_len = cot.phi.torsion_length
        cond2 = cot.fitt_c.exponent == eta_M.exponent
        cond3 = mu * phi_len == psi_M.torsion_length
        asserted = _depth_hypothesis(MA, c)
        status = "certified" if (asserted and ext_tfree) else "hypothesis_unverified"
        return {
            "mode": mode,
            "condition_2": cond2,
            "condition_3": cond3,
            "verdict": "holds" if (cond2 and cond3) else "fails",
            "status": status,
            "depth_asserted": asserted,
            "ext_torsion_free": ext_tfree,
            "certification": cert1.merge(cert2).label(),
            "data": {
                "fitt_c": cot.fitt_c,
                "eta": eta_M,
                "psi": psi_M,
                "phi_length": phi_len,
                "mu": mu,
            },
        }
    if mode in ("iso", "cotangent_iso"):
        if surjection is None:
            raise InputError(f"mode {mode} needs a surjection target")
        B, images = surjection
        section = check_surjection(A, B, images)
        phi_A = cotangent_invariants(A).phi.torsion_length
        if mode == "cotangent_iso":
            phi_B = cotangent_invariants(B).phi.torsion_length
            equal = phi_A == phi_B
            hyp = B.claimed_ci
            data = {"phi_A_length": phi_A, "phi_B_length": phi_B}
        else:
            if A.codim != B.codim:
                raise NotSameCodim("source and target declare different codims")
            N = module_over_source(A, B, images, section, None)
            if res is None:
                res = resolve_O(A)
            psi_N, _, _ = psi_raw(A, N, c, res)
            equal = phi_A == psi_N.torsion_length
            hyp = A.claimed_gorenstein and B.claimed_mcm
            data = {"phi_A_length": phi_A, "psi_B_length": psi_N.torsion_length}
        return {
            "mode": mode,
            "verdict": "holds" if equal else "fails",
            "status": "certified" if hyp else "hypothesis_unverified",
            "data": data,
        }
    raise InputError(f"unknown criterion mode {mode!r}")


# ---------------------------------------------------------------------------
# deformation

def deformation_step(A: AugmentedAlgebra, M, f: Poly) -> dict:
    """Cut by f in p outside the second symbolic power and compare the
    congruence ideals of M over A and of M/fM over A/(f) through the order
    ideal of the cotangent class of f."""
    if A.codim < 1:
        raise InputError("deformation needs declared codimension >= 1")
    sp = symbolic_power_test(A, f)
    if not sp["in_p"]:
        raise InputError("the element does not lie in the augmentation ideal")
    if sp["in_p2_symbolic"]:
        raise InSymbolicSquare(
            "the element lies in the second symbolic power; its cotangent "
            "class is torsion")
    MA = _as_module(A, M)
    # bounded annihilator search for zero divisors on M
    g = MA.gens
    zero = A.ring.zero
    cols = []
    for l in range(g):
        vec = [zero] * g
        vec[l] = f
        cols.append(tuple(vec))
    cols_p = [tuple(col) for col in MA.columns]
    vecs, cert = A.kernel_columns(cols + cols_p, nrows=g)
    reg_cert = cert
    for v in vecs:
        head = tuple(v[:g])
        if all(p.is_zero for p in head):
            continue
        ok, c2 = A.span_contains(cols_p, head) if cols_p else (
            all(A.in_ideal(p) for p in head), CERTIFIED)
        reg_cert = reg_cert.merge(c2)
        if not ok:
            raise ZeroDivisorSuspected(
                "a bounded search found an annihilator of the element on M")
    B = A.quotient_by(f)
    N = FpModule(B, MA.gens, MA.columns, asserted_depth=MA.asserted_depth,
                 asserted_mcm=MA.asserted_mcm, name=MA.name + "/f")
    res_A = resolve_O(A)
    res_B = resolve_O(B)
    eta_A_M, c1 = eta_raw(A, MA, A.codim, res_A)
    eta_B_N, c2 = eta_raw(B, N, B.codim, res_B)
    ordf = sp["ord_class"]
    lhs = eta_B_N.colength
    rhs = eta_A_M.colength + ordf.colength
    return {
        "B": B,
        "N": N,
        "lhs": lhs,
        "rhs": rhs,
        "ord_f": ordf,
        "eta_A": eta_A_M,
        "eta_B": eta_B_N,
        "exact_sequence_holds": lhs == rhs,
        "certification": c1.merge(c2).merge(reg_cert).label(),
    }


# ---------------------------------------------------------------------------
# Serre-type rank structure

def serre_check(A: AugmentedAlgebra, res=None, with_products=False) -> dict:
    c = A.codim
    if res is None:
        res = resolve_O(A, length=max(c + 2, 2))
    ranks = []
    top = min(res.length - 1, c + 1)
    ok = True
    for i in range(top + 1):
        ext = ext_module(A, FpModule.o_module(A), i, res)
        r = ext.structure.free_rank
        ranks.append(r)
        if r != comb(c, i):
            ok = False
    out = {"ranks": ranks, "expected": [comb(c, i) for i in range(top + 1)],
           "verdict": "holds" if ok else "fails"}
    if with_products and ok and c >= 1:
        out["product_generates"] = _product_check(A, res, c)
        if not out["product_generates"]:
            out["verdict"] = "fails"
    return out


def _product_check(A, res, c):
    """Lift a basis of degree-one classes to chain self-maps and test that
    the c-fold composite generates the top torsion-free part."""
    ext1 = ext_module(A, FpModule.o_module(A), 1, res)
    gens = []
    for coords in ext1.structure.free_generator_reps():
        w = [A.dvr.zero] * res.rank(1)
        for coef, kb in zip(coords, ext1.ker_basis):
            if coef:
                for t in range(len(w)):
                    w[t] = w[t] + coef * kb[t]
        gens.append(w)
    if len(gens) != c:
        return False
    ring = A.ring
    # chain lift of each phi: u_k with d_k u_k = u_(k-1) d_(k+1)
    lifts = []
    for t, w in enumerate(gens):
        levels_needed = t  # generator t composes at level t (0-indexed)
        u_prev = [(ring.const(x),) for x in w]  # columns of F_1 -> F_0
        u_levels = [u_prev]
        for k in range(1, levels_needed + 1):
            dk = res.differential(k)
            dk1 = res.differential(k + 1)
            solver, _ = A.span_solver(dk, res.rank(k - 1))
            cols = []
            for col in dk1:
                target = _apply_columns(ring, u_prev, col)
                sol = solver.solve(target)
                if sol is None:
                    raise ProductLiftFailed(
                        f"chain lift at level {k} did not complete")
                cols.append(tuple(sol))
            u_prev = cols
            u_levels.append(cols)
        lifts.append(u_levels)
    # composite F_c -> F_0: u^(0)_0 o u^(1)_1 o ... o u^(c-1)_(c-1)
    composite = lifts[c - 1][c - 1]
    for t in range(c - 2, -1, -1):
        upper = lifts[t][t]
        composite = [tuple(_apply_columns(ring, upper, col)) for col in composite]
    ext_c = ext_module(A, FpModule.o_module(A), c, res)
    w = [A.lam(col[0]) for col in composite]
    vals = ext_c.o_class_free_values(w)
    return any(x and A.dvr.val(x) == 0 for x in vals)


# ---------------------------------------------------------------------------
# surjections and invariance of domain

def check_surjection(A: AugmentedAlgebra, B: AugmentedAlgebra, images):
    """Validate a surjection given by images of the source variables and
    return the section matching each target variable to a source variable."""
    if len(images) != A.nvars:
        raise InputError("one image polynomial per source variable")
    for i, img in enumerate(images):
        if B.lam(img) != A.augmentation[i]:
            raise InputError(
                "images do not commute with the augmentations")
    for fA in A.relations:
        if not B.in_ideal(fA.substitute(B.ring, images)):
            raise InputError("images do not carry the relations into the target")
    section = []
    for j, name in enumerate(B.ring.names):
        hit = None
        yj = B.ring.var(j)
        for i, img in enumerate(images):
            if B.nf(img - yj).is_zero:
                hit = i
                break
        if hit is None:
            raise NotASurjection(f"target generator {name} is not hit")
        section.append(hit)
    return section


def _pull_to_source(A, B, section, q: Poly) -> Poly:
    images = [A.ring.var(section[j]) for j in range(B.nvars)]
    return q.substitute(A.ring, images)


def kernel_generators(A, B, images, section):
    gens = []
    for h in B.relations:
        gens.append(_pull_to_source(A, B, section, h))
    for i in range(A.nvars):
        pulled = _pull_to_source(A, B, section, images[i])
        gens.append(A.ring.var(i) - pulled)
    return [A.nf(p) for p in gens if p.terms]


def module_over_source(A, B, images, section, N: FpModule | None) -> FpModule:
    """A B-module viewed over A through the surjection: same generators,
    pulled-back relations plus the kernel acting on each generator."""
    if N is None:
        N = FpModule.ring_module(B)
    g = N.gens
    zero = A.ring.zero
    cols = []
    for col in N.columns:
        cols.append(tuple(_pull_to_source(A, B, section, p) for p in col))
    for kgen in kernel_generators(A, B, images, section):
        for l in range(g):
            vec = [zero] * g
            vec[l] = kgen
            cols.append(tuple(vec))
    return FpModule(A, g, cols, asserted_depth=N.asserted_depth,
                    asserted_mcm=N.asserted_mcm, name=N.name + "|A")


def invariance_check(A: AugmentedAlgebra, B: AugmentedAlgebra, images,
                     N: FpModule | None = None) -> dict:
    """eta computed over the source and over the target of a surjection in
    the same declared codimension must agree."""
    if A.codim != B.codim:
        raise NotSameCodim(
            f"declared codimensions differ: {A.codim} vs {B.codim}")
    section = check_surjection(A, B, images)
    if N is None:
        N = FpModule.ring_module(B)
    NA = module_over_source(A, B, images, section, N)
    eta_B, c1 = eta_raw(B, N, B.codim, resolve_O(B))
    eta_A, c2 = eta_raw(A, NA, A.codim, resolve_O(A))
    return {
        "eta_source": eta_A,
        "eta_target": eta_B,
        "verdict": "holds" if eta_A.exponent == eta_B.exponent else "fails",
        "certification": c1.merge(c2).label(),
    }


# ---------------------------------------------------------------------------
# report assembly

@dataclass
class CongruenceReport:
    algebra: str
    codim: int
    regularity: dict
    cotangent: dict
    resolution: dict
    serre: dict
    modules: dict

    def to_dict(self):
        return {
            "algebra": self.algebra,
            "codim": self.codim,
            "regularity": _plain(self.regularity),
            "cotangent": _plain(self.cotangent),
            "resolution": _plain(self.resolution),
            "serre": _plain(self.serre),
            "modules": _plain(self.modules),
        }


def _plain(value):
    from .omodule import FinOModule as _F
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, IdealO):
        return str(value)
    if isinstance(value, _F):
        return str(value)
    if value is INF:
        return "inf"
    if isinstance(value, float) and value == INF:
        return "inf"
    return value


def analyze(A: AugmentedAlgebra, modules=None, strategy="auto", length=None,
            res=None) -> CongruenceReport:
    """Full report: regularity, cotangent invariants, Serre ranks, and the
    congruence data with criterion verdicts for each module."""
    reg = regularity_at_lambda(A)
    if res is None:
        res = resolve_O(A, length=length, strategy=strategy)
    cot = cotangent_invariants(A)
    serre = serre_check(A, res=res)
    module_map = {"ring": FpModule.ring_module(
        A, asserted_depth=A.claimed_depth, asserted_mcm=A.claimed_mcm)}
    if modules:
        module_map.update(modules)
    eta_A, _ = eta_raw(A, None, A.codim, res)
    out_modules = {}
    for name, M in module_map.items():
        eta_M, c1 = eta_raw(A, M, A.codim, res)
        psi_M, c2, mu = psi_raw(A, M, A.codim, res)
        crit = numerical_criterion(
            A, M, mode="wld" if A.codim == 0 else "defect0", res=res)
        entry = {
            "eta": eta_M,
            "psi": psi_M,
            "psi_length": psi_M.torsion_length,
            "mu": mu,
            "criterion": crit,
            "certification": c1.merge(c2).label(),
        }
        if mu == 1:
            exps = psi_M.torsion_exponents
            e1 = exps[0] if len(exps) == mu else 0
            if eta_M.exponent != e1:
                raise InternalInvariantViolation(
                    "smallest congruence-module exponent disagrees with eta")
        if M.asserted_mcm and A.claimed_gorenstein:
            entry["splitting_verdict"] = (
                "holds" if eta_M.exponent == eta_A.exponent else "fails")
        else:
            entry["splitting_verdict"] = "hypothesis_unverified"
        kd = kappa_defect(A, M, res=res)
        entry["kappa"] = {
            "coker_ann": kd["coker_ann"],
            "diff_identity": kd["diff_identity"],
            "sequence_identity": kd["sequence_identity"],
        }
        out_modules[name] = entry
    notes = A.assertion_notes()
    if notes:
        reg = dict(reg)
        reg["assertion_notes"] = notes
    return CongruenceReport(
        algebra=repr(A),
        codim=A.codim,
        regularity=reg,
        cotangent={"cotangent": cot.cotangent, "phi": cot.phi,
                   "phi_length": cot.phi.torsion_length, "fitt_c": cot.fitt_c},
        resolution=res.describe(),
        serre=serre,
        modules=out_modules,
    )

"""Codimension-zero congruence modules of lattices in a K-vector space.

Everything is computed in lattice coordinates: the lattice is O^n there,
the two subspaces become column spans over K, and the three quotients
L^1/L_1, L/(L_1 + L_2), L^2/L_2 are formed independently and compared.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dvr import Dvr, IdealO
from .errors import (DegenerateLattice, InternalInvariantViolation,
                     NotADirectSum, RankMismatch, TorsionQuotient)
from .omodule import (FinOModule, k_det, k_invert, k_rank, mat_mul,
                      o_kernel_dense, smith_form)


@dataclass
class LatticeSplit:
    dvr: Dvr
    lattice_basis: list  # n x n over K, columns span L
    v1: list             # n x d1 over K, columns span V1
    v2: list             # n x d2 over K, columns span V2

    @property
    def ambient_dim(self):
        return len(self.lattice_basis)

    def dims(self):
        return len(self.v1[0]) if self.v1 else 0, len(self.v2[0]) if self.v2 else 0


def _columns(rows):
    return [list(c) for c in zip(*rows)] if rows else []


def _saturate_in_On(dvr, vectors, n):
    """Basis of span_K(vectors) ∩ O^n (a saturated sublattice of O^n)."""
    if not vectors:
        return []
    # clear valuations columnwise; the K-span is unchanged
    cleared = []
    for v in vectors:
        vals = [dvr.val(x) for x in v if x]
        if not vals:
            continue
        m = min(vals)
        scale = dvr.pi_pow(-m) if m < 0 else dvr.one
        cleared.append([x * scale for x in v])
    if not cleared:
        return []
    rows = [[v[i] for v in cleared] for i in range(n)]
    sf = smith_form(dvr, rows)
    rank = sf.rank
    out = []
    for j in range(rank):
        out.append([sf.Linv[i][j] for i in range(n)])
    return out


def _lattice_basis_of_span(dvr, vectors, n):
    """O-basis of the O-span of the given K-vectors (not saturated)."""
    vals = [dvr.val(x) for v in vectors for x in v if x]
    if not vals:
        return []
    shift = min(min(vals), 0)
    scale = dvr.pi_pow(-shift)
    rows = [[v[i] * scale for v in vectors] for i in range(n)]
    sf = smith_form(dvr, rows)
    unscale = dvr.pi_pow(shift)
    out = []
    for j in range(sf.rank):
        d = dvr.pi_pow(sf.diag_vals[j])
        out.append([sf.Linv[i][j] * d * unscale for i in range(n)])
    return out


def _quotient_of_lattices(dvr, big, small, n):
    """small ⊆ big sublattices of K^n of equal rank: coker as FinOModule."""
    r = len(big)
    rows_big = [[b[i] for b in big] for i in range(n)]
    coords = []
    for s in small:
        sol = _solve_over_K(dvr, rows_big, s)
        if sol is None:
            raise InternalInvariantViolation("sublattice escapes the big lattice")
        for x in sol:
            if dvr.val(x) < 0:
                raise InternalInvariantViolation("sublattice escapes the big lattice")
        coords.append(sol)
    pres = [[c[i] for c in coords] for i in range(r)]
    return FinOModule.from_presentation(dvr, pres, generators=r)


def _solve_over_K(dvr, rows, rhs):
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    piv_cols = []
    rank = 0
    for j in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][j]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][j]
        m[rank] = [a / pv for a in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][j]:
                f = m[i][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        piv_cols.append(j)
        rank += 1
    sol = [dvr.zero] * ncols
    for r, j in enumerate(piv_cols):
        sol[j] = m[r][ncols]
    for i in range(rank, len(m)):
        if m[i][ncols]:
            return None
    return sol


def split_and_congruence(split: LatticeSplit) -> dict:
    """The paper's three quotients, computed independently; they must agree
    in normal form and the common value is the congruence module."""
    dvr = split.dvr
    n = split.ambient_dim
    B = split.lattice_basis
    if k_rank(dvr, B) != n:
        raise DegenerateLattice("lattice basis is singular over K")
    Binv = k_invert(dvr, B)
    d1, d2 = split.dims()
    if d1 + d2 != n:
        raise NotADirectSum("subspace dimensions do not add up to the ambient")
    Y1 = mat_mul(dvr, Binv, split.v1)  # subspaces in lattice coordinates
    Y2 = mat_mul(dvr, Binv, split.v2)
    T = [Y1[i] + Y2[i] for i in range(n)]
    Tinv = k_invert(dvr, T)
    if Tinv is None:
        raise NotADirectSum("the subspaces intersect nontrivially")

    L1 = _saturate_in_On(dvr, _columns(Y1), n)
    L2 = _saturate_in_On(dvr, _columns(Y2), n)
    if len(L1) != d1 or len(L2) != d2:
        raise InternalInvariantViolation("intersection lattice has wrong rank")
    # projections pi_i(L): columns of Y_i * (first rows of Tinv applied to e_j)
    proj1, proj2 = [], []
    for j in range(n):
        t = [Tinv[i][j] for i in range(n)]
        p1 = [sum_mul(dvr, Y1[i], t[:d1]) for i in range(n)]
        p2 = [sum_mul(dvr, Y2[i], t[d1:]) for i in range(n)]
        proj1.append(p1)
        proj2.append(p2)
    Lsup1 = _lattice_basis_of_span(dvr, proj1, n)
    Lsup2 = _lattice_basis_of_span(dvr, proj2, n)

    # torsion-freeness of L/L_i (holds for saturated intersections)
    for Li in (L1, L2):
        pres = [[v[i] for v in Li] for i in range(n)]
        q = FinOModule.from_presentation(dvr, pres, generators=n)
        if q.torsion_exponents:
            raise TorsionQuotient("L/L_i acquired torsion")

    q1 = _quotient_of_lattices(dvr, Lsup1, L1, n)
    q2 = _quotient_of_lattices(dvr, Lsup2, L2, n)
    middle_cols = [list(v) for v in L1 + L2]
    pres = [[v[i] for v in middle_cols] for i in range(n)]
    qm = FinOModule.from_presentation(dvr, pres, generators=n)
    if not (q1.signature == q2.signature == (qm.torsion_exponents, 0)):
        if qm.free_rank or not (q1.signature == q2.signature ==
                                (qm.torsion_exponents, qm.free_rank)):
            raise InternalInvariantViolation(
                f"the three congruence quotients disagree: "
                f"{q1.signature} / {qm.signature} / {q2.signature}")
    cong = FinOModule.of_invariants(dvr, qm.torsion_exponents, 0)

    def back(vectors):
        return [[sum_mul(dvr, B[i], v) for v in vectors] for i in range(n)]

    return {
        "L1": back(L1), "L2": back(L2),
        "Lsup1": back(Lsup1), "Lsup2": back(Lsup2),
        "cong": cong,
        "coords": {"L1": L1, "L2": L2, "Lsup1": Lsup1, "Lsup2": Lsup2},
    }


def sum_mul(dvr, row, vec):
    acc = dvr.zero
    for a, b in zip(row, vec):
        if a and b:
            acc = acc + a * b
    return acc


def pairing_discriminant(split: LatticeSplit, pairing=None) -> IdealO:
    """(det <f_i, x_j>) for a basis x of L_1 and f of Hom(L/L_2, O); equals
    Fitt_0 of the congruence module.  The optional pairing matrix Q twists
    the canonical evaluation to <f, x> = f^T Q x in lattice coordinates."""
    dvr = split.dvr
    n = split.ambient_dim
    data = split_and_congruence(split)
    L1 = data["coords"]["L1"]
    L2 = data["coords"]["L2"]
    d1 = len(L1)
    # functionals on O^n vanishing on L_2: kernel of the transpose
    if L2:
        rows = [list(v) for v in L2]  # d2 x n; kernel = Hom(L/L2, O)
        fs = o_kernel_dense(dvr, rows)
    else:
        fs = [[dvr.one if i == j else dvr.zero for i in range(n)]
              for j in range(n)]
    if len(fs) != d1:
        raise RankMismatch(
            f"Hom(L/L_2, O) has rank {len(fs)}, expected {d1}")
    if d1 == 0:
        return IdealO.unit(dvr)
    if pairing is not None:
        fs = [[sum_mul(dvr, f, [pairing[i][j] for i in range(n)])
               for j in range(n)] for f in fs]
    gram = [[sum_mul(dvr, f, x) for x in L1] for f in fs]
    det = k_det(dvr, gram)
    if not det:
        return IdealO.zero(dvr)
    return IdealO(dvr, dvr.val(det))

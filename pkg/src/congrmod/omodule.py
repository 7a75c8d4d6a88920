"""Structure theory of finitely generated O-modules via Smith normal form.

All matrices are lists of rows unless a function says otherwise.  The dense
Smith form tracks full row witnesses (L, L^-1) so cokernels remember how to
transport element coordinates into normal form; the sparse column echelon
only tracks column operations and backs the big kernel/solve computations.
"""

from __future__ import annotations

from .dvr import Dvr, IdealO, INF
from .errors import DimensionMismatch, NonIntegralEntry


# ---------------------------------------------------------------------------
# generic dense helpers (entries in the fraction field K)

def identity_matrix(dvr, n):
    return [[dvr.one if i == j else dvr.zero for j in range(n)] for i in range(n)]


def mat_mul(dvr, a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    zero = dvr.zero
    out = []
    for i in range(rows):
        ai = a[i]
        row = []
        for j in range(cols):
            acc = zero
            for k in range(inner):
                if ai[k]:
                    acc = acc + ai[k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(dvr, a, v):
    zero = dvr.zero
    out = []
    for row in a:
        acc = zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def transpose(rows):
    return [list(col) for col in zip(*rows)] if rows else []


# ---------------------------------------------------------------------------
# dense Smith normal form over O with witnesses

class SmithForm:
    """L * A * R = D with L, R unimodular over O and D = diag(pi^v_1, ...).

    diag_vals are the pivot valuations, non-decreasing.  normal coordinates
    of a column vector x are L*x; Linv columns are representatives of the
    normal-form generators on the original ones.
    """

    def __init__(self, dvr, diag_vals, L, Linv, R, nrows, ncols):
        self.dvr = dvr
        self.diag_vals = diag_vals
        self.L = L
        self.Linv = Linv
        self.R = R
        self.nrows = nrows
        self.ncols = ncols

    @property
    def rank(self):
        return len(self.diag_vals)


def smith_form(dvr: Dvr, matrix) -> SmithForm:
    """Diagonalize over O, pivoting on a minimal-valuation entry with ties
    broken by lowest (row, column)."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    A = [list(r) for r in matrix]
    L = identity_matrix(dvr, m)
    Linv = identity_matrix(dvr, m)
    R = identity_matrix(dvr, n)
    val = dvr.val
    diag = []
    for s in range(min(m, n)):
        best = None
        for i in range(s, m):
            Ai = A[i]
            for j in range(s, n):
                if Ai[j]:
                    v = val(Ai[j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, bi, bj = best
        if bi != s:
            A[s], A[bi] = A[bi], A[s]
            L[s], L[bi] = L[bi], L[s]
            for row in Linv:
                row[s], row[bi] = row[bi], row[s]
        if bj != s:
            for row in A:
                row[s], row[bj] = row[bj], row[s]
            for row in R:
                row[s], row[bj] = row[bj], row[s]
        piv = A[s][s]
        u = dvr.unit_part(piv)
        if u != dvr.one:
            uinv = dvr.one / u
            A[s] = [x * uinv for x in A[s]]
            L[s] = [x * uinv for x in L[s]]
            for row in Linv:
                row[s] = row[s] * u
        piv = A[s][s]
        # clear column s with row ops, then row s with column ops
        for i in range(m):
            if i != s and A[i][s]:
                f = A[i][s] / piv
                As, Ai, Ls, Li = A[s], A[i], L[s], L[i]
                for j in range(s, n):
                    if As[j]:
                        Ai[j] = Ai[j] - f * As[j]
                for j in range(m):
                    if Ls[j]:
                        Li[j] = Li[j] - f * Ls[j]
                for row in Linv:
                    if row[i]:
                        row[s] = row[s] + f * row[i]
        for j in range(n):
            if j != s and A[s][j]:
                f = A[s][j] / piv
                A[s][j] = dvr.zero
                for row in R:
                    if row[s]:
                        row[j] = row[j] - f * row[s]
        diag.append(v)
    return SmithForm(dvr, diag, L, Linv, R, m, n)


# ---------------------------------------------------------------------------
# finitely generated O-modules in invariant-factor normal form

class FinOModule:
    """A sum of O/(pi^e_i) and O^free_rank, with optional coordinate
    witnesses back to the presentation generators."""

    def __init__(self, dvr, torsion_exponents, free_rank, gens=None, smith=None, kinds=None):
        self.dvr = dvr
        self.torsion_exponents = tuple(sorted(torsion_exponents))
        self.free_rank = int(free_rank)
        self.gens = gens
        self.smith = smith
        self.kinds = kinds  # aligned to normal coordinates: ('u',0)|('t',e)|('f',0)

    # -- constructors --
    @classmethod
    def from_presentation(cls, dvr, matrix, generators=None):
        """Cokernel of the column span; rows are generators."""
        m = len(matrix)
        if generators is None:
            generators = m
        if m != generators:
            raise DimensionMismatch(f"{m} rows for {generators} generators")
        for row in matrix:
            for x in row:
                if x and dvr.val(x) < 0:
                    raise NonIntegralEntry(f"entry {x!r} has negative valuation")
        if m == 0:
            return cls(dvr, (), 0, gens=0)
        if not matrix[0]:
            sf = smith_form(dvr, [[dvr.zero] for _ in range(m)])
            sf.diag_vals = []
            kinds = [("f", 0)] * m
            return cls(dvr, (), m, gens=m, smith=sf, kinds=kinds)
        sf = smith_form(dvr, matrix)
        kinds = []
        tors = []
        for i in range(m):
            if i < sf.rank:
                v = sf.diag_vals[i]
                if v == 0:
                    kinds.append(("u", 0))
                else:
                    kinds.append(("t", v))
                    tors.append(v)
            else:
                kinds.append(("f", 0))
        return cls(dvr, tors, m - sf.rank, gens=m, smith=sf, kinds=kinds)

    @classmethod
    def zero(cls, dvr):
        return cls(dvr, (), 0, gens=0)

    @classmethod
    def free(cls, dvr, rank):
        return cls.from_presentation(dvr, [[] for _ in range(rank)])

    @classmethod
    def of_invariants(cls, dvr, exponents, free_rank):
        return cls(dvr, exponents, free_rank)

    # -- structure --
    @property
    def signature(self):
        return (self.torsion_exponents, self.free_rank)

    def same_module(self, other) -> bool:
        return self.signature == other.signature

    @property
    def is_zero(self):
        return not self.torsion_exponents and self.free_rank == 0

    @property
    def length(self):
        """Sum of torsion exponents, or inf when a free part is present."""
        if self.free_rank:
            return INF
        return sum(self.torsion_exponents)

    @property
    def torsion_length(self):
        return sum(self.torsion_exponents)

    def torsion_part(self):
        return FinOModule(self.dvr, self.torsion_exponents, 0)

    # -- coordinate transport (requires witnesses) --
    def _require_witness(self):
        if self.smith is None:
            raise DimensionMismatch("module carries no presentation witnesses")

    def normal_coords(self, vec):
        self._require_witness()
        if len(vec) != self.gens:
            raise DimensionMismatch(
                f"coordinate length {len(vec)} != generator count {self.gens}")
        return mat_vec(self.dvr, self.smith.L, vec)

    def free_indices(self):
        return [i for i, k in enumerate(self.kinds) if k[0] == "f"]

    def free_coords(self, vec):
        w = self.normal_coords(vec)
        return [w[i] for i in self.free_indices()]

    def order_ideal(self, vec) -> IdealO:
        """{alpha(x) : alpha in Hom(U, O)} = (pi^min val of free coordinates);
        the zero ideal exactly when the class is torsion."""
        best = INF
        for x in self.free_coords(vec):
            if x:
                v = self.dvr.val(x)
                if v < best:
                    best = v
        return IdealO(self.dvr, best)

    def free_generator_reps(self):
        """Representatives (on the original generators) of the free
        normal-form generators: columns of L^-1."""
        self._require_witness()
        cols = []
        for i in self.free_indices():
            cols.append([self.smith.Linv[r][i] for r in range(self.gens)])
        return cols

    def dual_free_rows(self):
        """Functionals on the original generators dual to the free
        normal-form generators: rows of L at the free indices."""
        self._require_witness()
        return [list(self.smith.L[i]) for i in self.free_indices()]

    def __str__(self):
        parts = [f"O/pi^{e}" if e != 1 else "O/pi" for e in self.torsion_exponents]
        if self.free_rank == 1:
            parts.append("O")
        elif self.free_rank > 1:
            parts.append(f"O^{self.free_rank}")
        return " (+) ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FinOModule({self})"


def o_module_from_presentation(dvr, matrix, generators=None) -> FinOModule:
    return FinOModule.from_presentation(dvr, matrix, generators)


def fitting_ideal(dvr, matrix, k: int) -> IdealO:
    """Fitt_k of the cokernel of the column span: the ideal of all
    (n-k)-minors, n the number of generators (rows)."""
    n = len(matrix)
    size = n - k
    if size <= 0:
        return IdealO.unit(dvr)
    for row in matrix:
        for x in row:
            if x and dvr.val(x) < 0:
                raise NonIntegralEntry(f"entry {x!r} has negative valuation")
    if not matrix or not matrix[0]:
        return IdealO.zero(dvr)
    sf = smith_form(dvr, matrix)
    if size > sf.rank:
        return IdealO.zero(dvr)
    return IdealO(dvr, sum(sf.diag_vals[:size]))


def order_ideal(module: FinOModule, vec) -> IdealO:
    return module.order_ideal(vec)


# ---------------------------------------------------------------------------
# sparse column echelon: kernels and solves over O

def _unit_content_scale(dvr, col, extra):
    """Divide col (and extra, kept consistent) by a unit of O to tame
    coefficient growth.  Only implemented for the rational case."""
    if dvr.kind != "p_adic" or not col:
        return
    from math import gcd
    g = 0
    lden = 1
    for x in col.values():
        g = gcd(g, abs(x.numerator))
        lden = lden // gcd(lden, x.denominator) * x.denominator
    if g == 0:
        return
    p = dvr.p
    while g % p == 0:
        g //= p
    while lden % p == 0:
        lden //= p
    if g == lden:
        return
    from fractions import Fraction
    c = Fraction(g, lden)
    for k in list(col):
        col[k] = col[k] / c
    for k in list(extra):
        extra[k] = extra[k] / c


class _Echelon:
    """Column echelon over O with tracked column operations.  Each live
    column caches its minimal-valuation entry so pivot selection is linear
    in the number of columns."""

    def __init__(self, dvr, ncols, columns):
        self.dvr = dvr
        self.ncols = ncols
        self.cols = [dict(c) for c in columns]
        self.R = [{j: dvr.one} for j in range(ncols)]
        self.pivots = []  # (row, col) in retirement order
        self._run()

    def _colmin(self, col):
        val = self.dvr.val
        best = None
        for i, x in col.items():
            v = val(x)
            if best is None or (v, i) < best:
                best = (v, i)
        return best

    def _run(self):
        dvr = self.dvr
        remaining = set(range(self.ncols))
        colmin = {j: self._colmin(self.cols[j]) for j in remaining}
        while True:
            best = None
            for j in remaining:
                m = colmin[j]
                if m is not None and (best is None or (m[0], m[1], j) < best):
                    best = (m[0], m[1], j)
            if best is None:
                break
            _, pi, pj = best
            pcol = self.cols[pj]
            pval = pcol[pi]
            remaining.discard(pj)
            for k in remaining:
                ck = self.cols[k]
                if pi in ck:
                    f = ck[pi] / pval
                    for r, x in pcol.items():
                        nv = ck.get(r, dvr.zero) - f * x
                        if nv:
                            ck[r] = nv
                        else:
                            ck.pop(r, None)
                    rk = self.R[k]
                    for r, x in self.R[pj].items():
                        nv = rk.get(r, dvr.zero) - f * x
                        if nv:
                            rk[r] = nv
                        else:
                            rk.pop(r, None)
                    _unit_content_scale(dvr, ck, rk)
                    colmin[k] = self._colmin(ck)
            self.pivots.append((pi, pj))

    def kernel(self):
        """O-basis (as dicts col-index -> O) of the kernel of the column map."""
        pivot_cols = {j for _, j in self.pivots}
        out = []
        for j in range(self.ncols):
            if j not in pivot_cols and not self.cols[j]:
                out.append(self.R[j])
        return out

    def solve(self, rhs):
        """x (dict) with columns * x = rhs, entries in O; None if unsolvable."""
        dvr = self.dvr
        b = {i: x for i, x in rhs.items() if x}
        ys = []
        for (pi, pj) in self.pivots:
            if pi not in b:
                ys.append((pj, dvr.zero))
                continue
            y = b[pi] / self.cols[pj][pi]
            if dvr.val(y) < 0:
                return None
            ys.append((pj, y))
            for r, x in self.cols[pj].items():
                nv = b.get(r, dvr.zero) - y * x
                if nv:
                    b[r] = nv
                else:
                    b.pop(r, None)
        if b:
            return None
        x = {}
        for pj, y in ys:
            if y:
                for r, c in self.R[pj].items():
                    nv = x.get(r, dvr.zero) + y * c
                    if nv:
                        x[r] = nv
                    else:
                        x.pop(r, None)
        return x


def o_kernel(dvr, ncols, columns):
    """Saturated kernel basis of the column map O^ncols -> O^rows."""
    return _Echelon(dvr, ncols, columns).kernel()


def o_solve(dvr, ncols, columns, rhs):
    return _Echelon(dvr, ncols, columns).solve(rhs)


def o_kernel_dense(dvr, rows):
    """Kernel basis (dense vectors) of a dense row matrix over O."""
    ncols = len(rows[0]) if rows else 0
    columns = []
    for j in range(ncols):
        col = {}
        for i, row in enumerate(rows):
            if row[j]:
                col[i] = row[j]
        columns.append(col)
    ker = o_kernel(dvr, ncols, columns)
    return [[v.get(j, dvr.zero) for j in range(ncols)] for v in ker]


def o_solve_dense(dvr, rows, rhs):
    ncols = len(rows[0]) if rows else 0
    columns = []
    for j in range(ncols):
        col = {}
        for i, row in enumerate(rows):
            if row[j]:
                col[i] = row[j]
        columns.append(col)
    sol = o_solve(dvr, ncols, columns, {i: x for i, x in enumerate(rhs) if x})
    if sol is None:
        return None
    return [sol.get(j, dvr.zero) for j in range(ncols)]


# ---------------------------------------------------------------------------
# linear algebra over the fraction field K

def k_rank(dvr, rows):
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    for j in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if m[i][j]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][j]
        for i in range(nrows):
            if i != rank and m[i][j]:
                f = m[i][j] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def k_kernel(dvr, rows):
    """Kernel basis over K of a dense row matrix."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for j in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if m[i][j]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][j]
        m[rank] = [a / pv for a in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][j]:
                f = m[i][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(j)
        rank += 1
        if rank == nrows:
            break
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [dvr.zero] * ncols
        v[j] = dvr.one
        for r, pj in enumerate(pivots):
            v[pj] = -m[r][j]
        basis.append(v)
    return basis


def k_invert(dvr, rows):
    """Inverse of a square matrix over K, or None if singular."""
    n = len(rows)
    m = [list(r) + [dvr.one if i == j else dvr.zero for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [a / pv for a in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [row[n:] for row in m]


def k_det(dvr, rows):
    n = len(rows)
    m = [list(r) for r in rows]
    det = dvr.one
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            return dvr.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        pv = m[col][col]
        det = det * pv
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det

from fractions import Fraction as F

import pytest

from congrmod import Dvr, fitting_ideal, o_module_from_presentation
from congrmod.errors import DimensionMismatch, NonIntegralEntry
from congrmod.omodule import o_kernel_dense, o_solve_dense, smith_form


def expected_invariants_via_sympy(p, matrix, generators):
    """Independent oracle: integer Smith form, then p-valuations."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    if not matrix or not matrix[0]:
        return (), generators
    m = Matrix([[int(x) for x in row] for row in matrix])
    d = smith_normal_form(m, domain=ZZ)
    exps = []
    nonzero = 0
    for i in range(min(d.rows, d.cols)):
        entry = int(d[i, i])
        if entry == 0:
            continue
        nonzero += 1
        v = 0
        entry = abs(entry)
        while entry % p == 0:
            entry //= p
            v += 1
        if v:
            exps.append(v)
    return tuple(sorted(exps)), generators - nonzero


def random_int_matrix(rng, rows, cols, p):
    out = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            row.append(F(rng.randint(-4, 4) * p ** rng.randint(0, 2)))
        out.append(row)
    return out


def test_spec_examples(O5):
    free2 = o_module_from_presentation(O5, [[], []])
    assert free2.signature == ((), 2)

    diag = o_module_from_presentation(O5, [[F(1), F(0)], [F(0), F(25)]])
    assert diag.signature == ((2,), 0)

    jac = o_module_from_presentation(O5, [[F(-5), F(0)], [F(25), F(0)]])
    assert jac.signature == ((1,), 1)


def test_non_integral_entry(O5):
    with pytest.raises(NonIntegralEntry):
        o_module_from_presentation(O5, [[F(1, 5)]])


def test_against_integer_smith_oracle(rng):
    p = 3
    O = Dvr.p_adic(p)
    for _ in range(40):
        rows = rng.randint(1, 4)
        cols = rng.randint(0, 4)
        m = random_int_matrix(rng, rows, cols, p)
        got = o_module_from_presentation(O, m)
        exps, free = expected_invariants_via_sympy(p, m, rows)
        assert got.signature == (exps, free)


def test_pivot_order_invariance(rng):
    """Permuting rows and columns presents an isomorphic module."""
    O = Dvr.p_adic(5)
    for _ in range(25):
        rows, cols = rng.randint(2, 4), rng.randint(1, 4)
        m = random_int_matrix(rng, rows, cols, 5)
        base = o_module_from_presentation(O, m).signature
        rp = list(range(rows))
        cp = list(range(cols))
        rng.shuffle(rp)
        rng.shuffle(cp)
        perm = [[m[i][j] for j in cp] for i in rp]
        assert o_module_from_presentation(O, perm).signature == base


def test_unimodular_presentation_invariance(rng):
    O = Dvr.p_adic(5)
    for _ in range(25):
        rows, cols = rng.randint(2, 3), rng.randint(1, 3)
        m = random_int_matrix(rng, rows, cols, 5)
        base = o_module_from_presentation(O, m).signature
        # random row operation (unimodular over O) and an extra redundant column
        i, j = rng.sample(range(rows), 2) if rows > 1 else (0, 0)
        c = F(rng.randint(-3, 3))
        m2 = [row[:] for row in m]
        if i != j:
            m2[i] = [a + c * b for a, b in zip(m2[i], m2[j])]
        if cols:
            extra = [sum(row[k] * (k + 1) for k in range(cols)) for row in m2]
            m2 = [row + [e] for row, e in zip(m2, extra)]
        assert o_module_from_presentation(O, m2).signature == base


class TestFitting:
    def test_examples(self, O5):
        assert fitting_ideal(O5, [[F(5), F(0)], [F(0), F(125)]], 0).exponent == 4
        assert fitting_ideal(O5, [[F(-5), F(0)], [F(25), F(0)]], 1).exponent == 1
        assert fitting_ideal(O5, [[F(-5), F(0)], [F(25), F(0)]], 2).is_unit
        assert fitting_ideal(O5, [[F(-5), F(0)], [F(25), F(0)]], 0).is_zero

    def test_fitt0_is_length_and_chain(self, rng, O5):
        for _ in range(20):
            rows = rng.randint(1, 3)
            m = random_int_matrix(rng, rows, rows + 1, 5)
            mod = o_module_from_presentation(O5, m)
            f0 = fitting_ideal(O5, m, 0)
            if mod.free_rank == 0:
                assert f0.exponent == mod.torsion_length
            else:
                assert f0.is_zero
            prev = f0
            for k in range(1, rows + 1):
                fk = fitting_ideal(O5, m, k)
                assert fk.contains(prev)
                prev = fk


class TestOrderIdeal:
    def brute_force(self, O, mod, vec, scan=3):
        """Scan O-combinations of the dual free functionals."""
        rows = mod.dual_free_rows()
        if not rows:
            return None
        best = None
        coeffs = range(-scan, scan + 1)

        def rec(i, acc):
            nonlocal best
            if i == len(rows):
                if any(acc):
                    val = O.val(sum(acc[k] * vec[k] for k in range(len(vec))))
                    if best is None or val < best:
                        best = val
                return
            for c in coeffs:
                rec(i + 1, [a + F(c) * b for a, b in zip(acc, rows[i])])

        rec(0, [F(0)] * len(vec))
        return best

    def test_zero_is_torsion(self, O5):
        mod = o_module_from_presentation(O5, [[F(5), F(0)], [F(0), F(0)]])
        assert mod.order_ideal([F(0), F(0)]).is_zero
        assert mod.order_ideal([F(1), F(0)]).is_zero  # torsion class
        assert mod.order_ideal([F(0), F(5)]).exponent == 1

    def test_dimension_mismatch(self, O5):
        mod = o_module_from_presentation(O5, [[F(5)]])
        with pytest.raises(DimensionMismatch):
            mod.order_ideal([F(1), F(2)])

    def test_against_functional_scan(self, rng):
        O = Dvr.p_adic(5)
        for _ in range(15):
            rows = rng.randint(1, 3)
            m = random_int_matrix(rng, rows, rng.randint(0, 2), 5)
            mod = o_module_from_presentation(O, m)
            vec = [F(rng.randint(-10, 10)) for _ in range(rows)]
            got = mod.order_ideal(vec)
            brute = self.brute_force(O, mod, vec)
            if brute is None:
                assert got.is_zero
            else:
                assert got.exponent == brute
            # torsion iff zero order ideal
            frees = mod.free_coords(vec)
            assert got.is_zero == all(not x for x in frees)


def test_kernel_and_solve_roundtrip(rng):
    O = Dvr.p_adic(5)
    for _ in range(20):
        rows, cols = rng.randint(1, 3), rng.randint(1, 4)
        m = random_int_matrix(rng, rows, cols, 5)
        for v in o_kernel_dense(O, m):
            assert all(O.in_O(x) for x in v)
            for row in m:
                assert sum(a * b for a, b in zip(row, v)) == 0
        x = [F(rng.randint(-3, 3)) for _ in range(cols)]
        rhs = [sum(row[j] * x[j] for j in range(cols)) for row in m]
        sol = o_solve_dense(O, m, rhs)
        assert sol is not None
        for row in m:
            assert sum(a * b for a, b in zip(row, sol)) == \
                sum(a * b for a, b in zip(row, x))


def test_smith_witnesses(rng):
    """L * A * R = D exactly, with the recorded diagonal valuations."""
    O = Dvr.p_adic(5)
    from congrmod.omodule import mat_mul
    for _ in range(15):
        rows, cols = rng.randint(1, 3), rng.randint(1, 3)
        m = random_int_matrix(rng, rows, cols, 5)
        sf = smith_form(O, m)
        lar = mat_mul(O, mat_mul(O, sf.L, m), sf.R)
        for i in range(rows):
            for j in range(cols):
                if i == j and i < sf.rank:
                    assert lar[i][j] == O.pi_pow(sf.diag_vals[i])
                else:
                    assert not lar[i][j]
        ident = mat_mul(O, sf.L, sf.Linv)
        for i in range(rows):
            for j in range(rows):
                assert ident[i][j] == (O.one if i == j else O.zero)

import itertools
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st_

from fimkit import combinat as cb
from fimkit import homology as ho
from fimkit import module as md
from fimkit import stability as st
from fimkit.formats import parse_presentation
from fimkit.linalg import Field, Q

from conftest import FIXTURES

F5 = Field(5)


def fixture(name):
    return md.from_presentation(parse_presentation((FIXTURES / name).read_text(), name))


class TestCharacters:
    @pytest.mark.parametrize("k", range(1, 7))
    def test_orthogonality(self, k):
        T = st.character_table(k)
        rows = {lam: dict(zip(T.classes, T.row(lam))) for lam in T.partitions}
        for a, b in itertools.product(T.partitions, repeat=2):
            assert T.inner(rows[a], rows[b]) == (1 if a == b else 0)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_hook_formula_is_degree(self, k):
        T = st.character_table(k)
        ident = (1,) * k
        for lam in T.partitions:
            assert st.hook_dimension(lam) == T.values[(lam, ident)]
        assert sum(st.hook_dimension(lam) ** 2 for lam in T.partitions) == factorial(k)

    @pytest.mark.parametrize("k", range(1, 6))
    def test_trivial_row(self, k):
        assert all(st.irreducible_character((k,), mu) == 1 for mu in cb.partitions(k))

    def test_known_values(self):
        assert st.irreducible_character((2, 1), (1, 1, 1)) == 2
        assert st.irreducible_character((2, 1), (3,)) == -1
        assert st.irreducible_character((2, 2), (2, 2)) == 2
        assert st.irreducible_character((3, 1, 1), (5,)) == 1
        assert st.irreducible_character((1, 1, 1), (2, 1)) == -1
        assert st.hook_dimension((3, 2)) == 5

    def test_cache_returns_same_object(self):
        assert st.character_table(5) is st.character_table(5)


class TestSeminormal:
    @pytest.mark.parametrize("lam", [(2, 1), (3, 1), (2, 2), (3, 2), (2, 1, 1)])
    def test_specht_character(self, lam):
        k = sum(lam)
        W = md.specht_rep([lam], Q)
        assert W.dim == st.hook_dimension(lam) == len(st.standard_tableaux(lam))
        assert W.coxeter_violations() == []
        V = md.basic_relative_projective((k,), W, (k,))
        assert st.decompose(V, (k,)) == {(lam,): 1}

    def test_modular_seminormal(self):
        mats, d = st.seminormal_matrices((2, 1), F5)
        assert d == 2 and len(mats) == 2


class TestDecompose:
    def test_free_point(self):
        V = md.free_module((1, 0), (3, 2), Q)
        assert st.decompose(V, (3, 0)) == {((3,), ()): 1, ((2, 1), ()): 1}

    @pytest.mark.parametrize("n", range(2, 6))
    def test_permutation_character(self, n):
        V = md.free_module((1,), (5,), Q)
        assert st.decompose(V, (n,)) == {((n,),): 1, ((n - 1, 1),): 1}

    def test_trivial_module(self):
        V = md.free_module((0, 0), (3, 3), Q)
        for n in V.shapes():
            assert st.decompose(V, n) == {(tuple(x for x in [n[0]] if x), tuple(x for x in [n[1]] if x)): 1}

    def test_regular_rep(self):
        V = md.free_module((3,), (3,), Q)
        assert st.decompose(V, (3,)) == {((3,),): 1, ((2, 1),): 2, ((1, 1, 1),): 1}

    def test_completeness(self):
        for V in [md.free_module((1, 1), (3, 3), Q), fixture("free_1_0_plus_axis.fim"),
                  md.basic_relative_projective((2,), md.sign_rep((2,), Q), (5,))]:
            for n in V.shapes():
                dec = st.decompose(V, n)
                assert sum(c * st.irreducible_dim(l) for l, c in dec.items()) == V.dims[n]

    def test_char_p_refused(self):
        with pytest.raises(NotImplementedError):
            st.decompose(md.free_module((1,), (2,), F5), (2,))

    def test_outside_box(self):
        with pytest.raises(md.BoxError):
            st.decompose(md.free_module((1,), (2,), Q), (3,))

    def test_class_sizes(self):
        for n in [(3,), (2, 2), (4, 1)]:
            total = sum(size for _, _, size in st.class_representatives(n))
            assert total == factorial(n[0]) * (factorial(n[1]) if len(n) > 1 else 1)


class TestStability:
    def test_free_1_0(self):
        V = md.free_module((1, 0), (6, 6), Q)
        rep = st.stability_report(V)
        assert rep.threshold == (2, 2)
        assert rep.verdict is True
        assert rep.stable == {((1,), ()): 1, ((), ()): 1}

    def test_sign_m1(self):
        V = md.basic_relative_projective((2,), md.sign_rep((2,), Q), (7,))
        rep = st.stability_report(V)
        assert rep.threshold == (4,) and rep.verdict is True
        assert rep.stable == {((1, 1),): 1, ((1,),): 1}

    def test_torsion_injectivity(self):
        V = fixture("killed_at_2_m1.fim")
        rep = st.stability_report(V)
        td = ho.torsion_degrees(V)[0]
        by_n = {s.n[0]: s.injective for s in rep.steps}
        assert by_n[td] is False
        assert all(by_n[n] for n in by_n if n > td)

    def test_onsets_reported(self):
        rep = st.stability_report(md.free_module((1, 1), (5, 5), Q))
        assert rep.empirical_onset is not None and rep.empirical_onset <= 4
        assert all(cb.leq(n, (5, 5)) for n in rep.onsets.values())

    def test_char_p_refused(self):
        with pytest.raises(NotImplementedError):
            st.stability_report(md.free_module((1,), (3,), F5))


class TestPolynomials:
    def test_lagrange_recovers(self):
        p = (Fraction(3), Fraction(-1, 2), Fraction(0), Fraction(2))
        pts = [(x, st.poly_eval(p, x)) for x in range(5, 9)]
        assert st.lagrange(pts) == p

    @given(st_.integers(0, 6), st_.integers(0, 12))
    def test_binomial_poly(self, l, x):
        from math import comb
        assert st.poly_eval(st.binomial_poly(l), x) == comb(x, l)

    def test_format(self):
        assert st.format_poly(st.binomial_poly(2)) == "1/2*x^2 - 1/2*x"
        assert st.format_poly(()) == "0"
        assert st.format_poly((Fraction(-1), Fraction(1))) == "x - 1"

    def test_content(self):
        assert st.binomial_content(tuple(2 * c for c in st.binomial_poly(3))) == 2
        assert st.binomial_content((Fraction(0), Fraction(-1, 3))) == Fraction(-1, 3)


class TestHilbert:
    def test_trivial_11(self):
        V = md.basic_relative_projective((1, 1), md.trivial_rep((1, 1), Q), (4, 4))
        fit = st.hilbert_fit(V)
        assert fit.ok and [st.format_poly(p) for p in fit.polys] == ["x", "x"]

    def test_zero(self):
        fit = st.hilbert_fit(md.zero_module(2, (2, 2), Q))
        assert fit.ok and [st.format_poly(p) for p in fit.polys] == ["0", "0"]

    def test_sum_of_axes_does_not_factor(self):
        V = md.direct_sum(md.free_module((1, 0), (4, 4), Q), md.free_module((0, 1), (4, 4), Q))
        fit = st.hilbert_fit(V)
        assert fit.status == "non-factorizable" and fit.residuals

    def test_box_too_small(self):
        assert st.hilbert_fit(md.free_module((1, 1), (3, 3), Q)).status == "box too small"

    def test_runs_in_char_p(self):
        V = md.basic_relative_projective((2, 1), md.regular_rep((2, 1), F5), (6, 6))
        fit = st.hilbert_fit(V)
        assert fit.ok and fit.matches_binomial((2, 1), 2)

    def test_gauge_is_the_only_freedom(self):
        # the product read off a second axis line agrees with the fit
        V = md.basic_relative_projective((2, 1), md.regular_rep((2, 1), Q), (6, 6))
        fit = st.hilbert_fit(V)
        g = fit.grid_start
        other = tuple(g[i] + 1 for i in range(2))
        line = [(x, Fraction(V.dims[(x, other[1])])) for x in range(g[0], g[0] + 4)]
        P = st.lagrange(line)
        for x in range(g[0], V.box[0] + 1):
            assert st.poly_eval(P, x) == fit.product_at((x, other[1]))

    def test_torsion_shifted_grid(self):
        fit = st.hilbert_fit(fixture("free_1_0_plus_axis.fim"))
        assert fit.grid_start == (1, 1)
        assert fit.ok and [st.format_poly(p) for p in fit.polys] == ["x", "1"]

from math import factorial, prod

import pytest
from hypothesis import given, settings, strategies as st

from fimkit import combinat as cb
from fimkit import functors as fn
from fimkit import homology as ho
from fimkit import module as md
from fimkit.formats import parse_presentation
from fimkit.linalg import Field, Matrix, Q

from conftest import FIXTURES, fuzz_corpus

F2, F3 = Field(2), Field(3)


def fixture(name):
    return md.from_presentation(parse_presentation((FIXTURES / name).read_text(), name))


class TestH0:
    def test_free(self):
        V = md.free_module((1, 1), (3, 3), Q)
        h = ho.h0_dims(V)
        assert {n: d for n, d in h.items() if d} == {(1, 1): 1}
        assert ho.generating_degree(V) == 2

    def test_relative_projective_top(self):
        W = md.regular_rep((2, 1), Q)
        V = md.basic_relative_projective((2, 1), W, (3, 2))
        assert {n: d for n, d in ho.h0_dims(V).items() if d} == {(2, 1): 2}

    def test_zero(self):
        assert ho.generating_degree(md.zero_module(2, (2, 2), Q)) == -1

    def test_representation_of_top(self):
        W = md.sign_rep((2,), Q)
        V = md.basic_relative_projective((2,), W, (3,))
        R = ho.h0_representation(V, (2,))
        assert R.dim == 1 and R.gens[(0, 1)] == W.gens[(0, 1)]

    def test_generators_generate(self):
        for V in fuzz_corpus(2, (3, 3), 5, seed=31):
            gens = ho.h0_generators(V)
            G = md.submodule_generated(V, gens)
            assert G.module.dims == V.dims


class TestResolution:
    def test_free_is_acyclic(self):
        hom = ho.homology(md.free_module((1, 0), (3, 3), Q), 3)
        assert all(hom[s].is_zero() for s in (1, 2, 3))

    def test_axis_quotient(self):
        hom = ho.homology(fixture("axis_quotient.fim"), 2)
        assert hom[0].support() == [(0, 0)]
        assert hom[1].support() == [(0, 1)] and hom[1][(0, 1)] == 1
        assert hom[2].support() == [(0, 2)]

    def test_point_at_three(self):
        hom = ho.homology(fixture("point_3_0.fim"), 1)
        assert hom[0][(3, 0)] == 6
        assert hom[1][(4, 0)] == 24 and hom[1][(3, 1)] == 6

    def test_first_homology_as_relations(self):
        # H_1 of M(0)/(relation at 2) is a single relation at (2)
        hom = ho.homology(fixture("killed_at_2_m1.fim"), 1)
        assert hom[1].support() == [(2,)] and hom[1][(2,)] == 1

    def test_negative_s(self):
        with pytest.raises(ValueError):
            ho.homology(md.free_module((0,), (2,), Q), -1)

    @pytest.mark.parametrize("case", range(5))
    def test_matches_tor_oracle(self, case):
        V = [
            md.basic_relative_projective((2,), md.trivial_rep((2,), F2), (4,)),
            md.basic_relative_projective((3,), md.trivial_rep((3,), F3), (4,)),
            md.restrict(fixture("killed_at_2_m1.fim"), (4,)),
            fuzz_corpus(1, (4,), 2, seed=4)[1],
            fuzz_corpus(1, (4,), 1, seed=8, field=F2)[0],
        ][case]
        a, b = ho.homology(V, 3), ho.tor_bruteforce(V, 3)
        for s in range(4):
            assert {n: a[s][n] for n in V.shapes()} == b[s]

    def test_matches_tor_oracle_two_directions(self):
        V = md.restrict(fixture("axis_quotient.fim"), (2, 2))
        a, b = ho.homology(V, 2), ho.tor_bruteforce(V, 2)
        for s in range(3):
            assert {n: a[s][n] for n in V.shapes()} == b[s]

    @given(st.integers(0, 10 ** 6), st.sampled_from([Q, F2]))
    @settings(max_examples=20)
    def test_h1_zero_forces_h2_zero(self, seed, field):
        V = fuzz_corpus(2, (3, 3), 1, seed=seed, field=field)[0]
        hom = ho.homology(V, 2)
        if hom[0].interior() and hom[1].is_zero():
            assert hom[2].is_zero()

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=20)
    def test_free_cover_is_onto(self, seed):
        V = fuzz_corpus(1, (4,), 1, seed=seed)[0]
        hom = ho.homology(V, 1)
        gens = ho.h0_generators(V)
        P = md.FreeSum([g for g, _ in gens], V.box, V.field)
        for t in V.shapes():
            rank = Matrix(V.dims[t], P.dim(t),
                          [V.apply(h, gens[r][1]) for r, h in P.basis(t)], V.field).rank()
            assert rank == V.dims[t]
        hp = {n: sum(prod(factorial(k) for k in g) for g, _ in gens if g == n) for n in V.shapes()}
        assert all(hp[n] >= hom[0][n] for n in V.shapes())


class TestRelativeProjective:
    @pytest.mark.parametrize("field", [Q, F2, F3])
    def test_basic_relative_projectives_pass(self, field):
        for l, W in [((1, 1), md.trivial_rep((1, 1), field)), ((2, 0), md.sign_rep((2, 0), field)),
                     ((2, 1), md.regular_rep((2, 1), field))]:
            V = md.basic_relative_projective(l, W, (3, 3))
            v = ho.relative_projective_test(V)
            assert v.value is True and not v.h2_violation

    def test_sum_of_relative_projectives(self):
        V = md.direct_sum(md.free_module((1, 0), (3, 3), Q),
                          md.basic_relative_projective((0, 2), md.trivial_rep((0, 2), Q), (3, 3)))
        assert ho.relative_projective_test(V).value is True

    @pytest.mark.parametrize("name,witness", [
        ("axis_quotient.fim", (0, 1)),
        ("free_1_0_plus_axis.fim", (0, 1)),
        ("gd_drop_2_0.fim", (2, 1)),
        ("killed_at_2_m1.fim", (2,)),
    ])
    def test_torsion_quotients_fail_with_witness(self, name, witness):
        v = ho.relative_projective_test(fixture(name))
        assert v.value is False and v.witness == witness

    def test_boundary_is_inconclusive(self):
        v = ho.relative_projective_test(md.free_module((2, 2), (2, 2), Q))
        assert v.value is None and v.label == "inconclusive"


class TestProjectiveDimension:
    def test_higman(self):
        assert ho.is_projective_rep(md.regular_rep((2,), F2))
        assert not ho.is_projective_rep(md.trivial_rep((2,), F2))
        assert ho.is_projective_rep(md.trivial_rep((2,), F3))
        assert not ho.is_projective_rep(md.trivial_rep((3,), F3))
        assert ho.is_projective_rep(md.sign_rep((3,), Q))
        assert ho.is_projective_rep(md.trivial_rep((1, 1), F2))

    def test_char_zero_relative_projective_is_finite(self):
        V = md.basic_relative_projective((2,), md.trivial_rep((2,), Q), (4,))
        assert ho.projective_dim_classifier(V).label == "finite"

    def test_modular_trivial_is_infinite(self):
        V = md.basic_relative_projective((2,), md.trivial_rep((2,), F2), (4,))
        pd = ho.projective_dim_classifier(V)
        assert pd.label == "infinite" and pd.nonprojective_tops == [(2,)]

    def test_modular_regular_is_finite(self):
        V = md.basic_relative_projective((2,), md.regular_rep((2,), F2), (4,))
        assert ho.projective_dim_classifier(V).label == "finite"

    def test_torsion_is_infinite(self):
        assert ho.projective_dim_classifier(fixture("axis_quotient.fim")).label == "infinite"


class TestTorsion:
    def test_axis_quotient_degrees(self):
        rep = ho.torsion_analysis(fixture("axis_quotient.fim"))
        assert rep.td == [-1, 0] and rep.td_total == 0
        assert rep.torsion_dims.support() == [n for n in cb.boxed_shapes((4, 4)) if n[1] == 0]

    def test_free_has_no_torsion(self):
        rep = ho.torsion_analysis(md.free_module((1, 1), (3, 3), Q))
        assert rep.td == [-1, -1] and rep.torsion_dims.is_zero()

    def test_point_degrees(self):
        rep = ho.torsion_analysis(fixture("point_3_3.fim"))
        assert rep.td == [3, 3]
        assert rep.margin == [0, 0] and not rep.certified

    def test_kernel_matches_pi(self):
        for V in fuzz_corpus(2, (3, 3), 4, seed=41):
            rep = ho.torsion_analysis(V, check_shift=False)
            for i in range(2):
                for n, E in rep.kernel_spaces[i].items():
                    X = V.evaluate(cb.pi(n, i))
                    assert all(not X.apply(v) for v in E.basis())
                    assert E.rank == X.ncols - X.rank()

    def test_torsion_free_part_is_torsion_free(self):
        V = fixture("free_1_0_plus_axis.fim")
        VF = ho.torsion_free_part(V).module
        assert all(VF.dims[n] == n[0] for n in VF.shapes())
        assert ho.torsion_degrees(VF) == [-1, -1]
        T = ho.torsion_part(V)
        assert all(T.dims[n] + VF.dims[n] == V.dims[n] for n in V.shapes())

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25)
    def test_shift_lowers_torsion_degree(self, seed):
        V = fuzz_corpus(2, (4, 4), 1, seed=seed, rel_degree=2)[0]
        rep = ho.torsion_analysis(V)
        for i, before, after, ok in rep.shift_check:
            if rep.margin[i] >= 1:
                assert ok, (i, before, after)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25)
    def test_kernel_dies_after_enough_shifts(self, seed):
        V = fuzz_corpus(2, (5, 5), 1, seed=seed, rel_degree=2)[0]
        rep = ho.torsion_analysis(V, check_shift=False)
        for i, t in enumerate(rep.td):
            if rep.margin[i] >= 1 and t + 1 <= V.box[i]:
                W = fn.shift_by(V, cb.unit(2, i) if t < 0 else tuple(t + 1 if a == i else 0 for a in range(2))).output
                assert ho.torsion_degrees(W)[i] == -1


class TestNagpal:
    def test_free(self):
        cx = ho.nagpal_complex(md.free_module((1, 0), (4, 4), Q))
        assert cx.l == 0 and cx.N == [-1, -1] and cx.complete

    def test_axis_quotient(self):
        V = fixture("axis_quotient.fim")
        cx = ho.nagpal_complex(V)
        assert cx.N == [-1, 0] and cx.l == -1 and cx.F == []
        assert cx.homology[0].dims == {n: V.dims[n] for n in V.shapes()}
        assert cx.degree_bounds_hold()
        assert ho.shifted_relative_projectivity(V, (1, 0), cx)[0].value is False
        assert ho.shifted_relative_projectivity(V, (1, 1), cx)[0].value is True
        assert ho.shifted_relative_projectivity(V, (0, 1), cx)[0].value is True

    def test_m1_needs_shift(self):
        cx = ho.nagpal_complex(fixture("killed_at_2_m1.fim"))
        assert cx.shift == (1,) and cx.N == [1]

    @pytest.mark.parametrize("name", ["free_1_0_plus_axis.fim", "axis_quotient.fim", "free_1_1.fim"])
    def test_threshold(self, name):
        V = fixture(name)
        cx = ho.nagpal_complex(V)
        n = tuple(x + 1 for x in cx.N)
        v, predicted = ho.shifted_relative_projectivity(V, tuple(max(a, 0) for a in n), cx)
        assert predicted and v.value is True

    def test_N_independent_of_shift(self):
        for V in fuzz_corpus(2, (6, 6), 8, seed=71):
            auto = ho.nagpal_complex(V)
            for a in [(2, 2), (3, 3)]:
                cx = ho.nagpal_complex(V, a)
                assert cx.complete and cx.N == auto.N
                # a large shift can leave H_0 on the boundary, so only refutations count
                assert all(s.F_verdict.value is not False for s in cx.stages if s.F is not None)

    def test_threshold_is_not_necessary(self):
        # N = (0, 0), yet Sigma^(0,1) V = M(0,0) is relative projective with
        # n_1 = N_1, so the threshold is sufficient but not necessary for m >= 2
        V = fixture("free_0_0_plus_point.fim")
        cx = ho.nagpal_complex(V)
        assert cx.N == [0, 0]
        v, _ = ho.shifted_relative_projectivity(V, (0, 1), cx)
        assert v.value is True
        v, _ = ho.shifted_relative_projectivity(V, (1, 1), cx)
        assert v.value is True

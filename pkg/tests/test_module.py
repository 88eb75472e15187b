import itertools
import random
from math import comb, factorial, prod

import pytest
from hypothesis import given, strategies as st

from fimkit import combinat as cb
from fimkit import module as md
from fimkit.linalg import Field, Matrix, Q
from fimkit.module import BoxError, CoxeterError, Presentation, Relation

from conftest import fuzz_corpus

F2, F3 = Field(2), Field(3)


def free_dim(l, t):
    return prod(factorial(b) // factorial(b - a) for a, b in zip(l, t)) if cb.leq(l, t) else 0


def presented_relative_projective(shape, W, box):
    """``M(shape)^{dim W}`` modulo ``g_k s - sum_r W(s)_{rk} g_r``: an
    independent route to ``M(shape) (x)_{kS} W``."""
    gens = [(tuple(shape), f"w{k}") for k in range(W.dim)]
    rels = []
    ident = cb.identity(shape)
    for (i, j), A in sorted(W.gens.items()):
        s = md._transposition(tuple(shape), i, j)
        for k in range(W.dim):
            terms = [(k, s, 1)] + [(r, ident, -v) for r, v in A.cols[k].items()]
            rels.append(Relation(tuple(shape), terms))
    return md.from_presentation(Presentation(W.field, len(shape), gens, rels, box))


def characters(V):
    return {n: [V.permutation_matrix(n, sigma).trace() for sigma in cb.multi_permutations(n)]
            for n in V.shapes() if sum(n) <= 5}


class TestFree:
    def test_zero_shape(self):
        V = md.free_module((0, 0), (3, 3), Q)
        assert all(d == 1 for d in V.dims.values())

    def test_small_dims(self):
        assert md.free_module((1, 1), (3, 3), Q).dims[(2, 1)] == 2
        assert md.free_module((2,), (4,), Q).dims[(4,)] == 12

    def test_dims_exhaustive(self):
        for l in [(0, 1), (1, 1), (2, 0), (2, 1)]:
            V = md.free_module(l, (4, 3), Q)
            assert all(V.dims[t] == free_dim(l, t) for t in V.shapes())

    def test_outside_box(self):
        with pytest.raises(BoxError):
            md.free_module((3, 0), (2, 2), Q)

    def test_evaluate_is_post_composition(self):
        l, box = (1, 1), (3, 3)
        V = md.free_module(l, box, Q)
        rng = random.Random(1)
        for _ in range(30):
            t = tuple(rng.randint(a, b) for a, b in zip(l, box))
            u = tuple(rng.randint(a, b) for a, b in zip(t, box))
            f = md.random_injection(rng, t, u)
            A = V.evaluate(f)
            src = cb.enumerate_injections(l, t)
            dst = {h: k for k, h in enumerate(cb.enumerate_injections(l, u))}
            for k, h in enumerate(src):
                assert A.cols[k] == {dst[cb.compose(f, h)]: 1}

    def test_identity_evaluates_to_identity(self):
        V = md.free_module((1, 0), (3, 2), Q)
        for n in V.shapes():
            assert V.evaluate(cb.identity(n)).is_identity()

    def test_axioms(self):
        assert md.check_module_axioms(md.free_module((1, 1), (3, 3), F2)).ok

    def test_factorization_independence_many(self):
        rep = md.check_module_axioms(md.free_module((2, 1), (4, 3), Q), samples=200, seed=7)
        assert rep.results["factorization"] is None


class TestRelativeProjective:
    def test_trivial_11(self):
        V = md.basic_relative_projective((1, 1), md.trivial_rep((1, 1), Q), (4, 4))
        assert all(V.dims[n] == n[0] * n[1] for n in V.shapes())

    def test_sign_2(self):
        V = md.basic_relative_projective((2,), md.sign_rep((2,), Q), (5,))
        assert V.dims[(4,)] == 6

    def test_dims_formula(self):
        for l, W in [((2, 1), md.regular_rep((2, 1), Q)), ((2, 0), md.specht_rep([(1, 1), ()], Q)),
                     ((1, 2), md.sign_rep((1, 2), F3))]:
            V = md.basic_relative_projective(l, W, (4, 3))
            for n in V.shapes():
                expect = W.dim * prod(comb(a, b) for a, b in zip(n, l)) if cb.leq(l, n) else 0
                assert V.dims[n] == expect

    @pytest.mark.parametrize("field", [Q, F2, F3])
    @pytest.mark.parametrize("shape,rep", [
        ((2,), md.sign_rep), ((2,), md.trivial_rep), ((1, 1), md.trivial_rep), ((2, 1), md.regular_rep),
    ])
    def test_matches_quotient_construction(self, field, shape, rep):
        self._compare(shape, rep(shape, field))

    @pytest.mark.parametrize("field", [Q, Field(5)])
    def test_specht_matches_quotient_construction(self, field):
        # seminormal entries have denominators 2 and 3
        self._compare((3,), md.specht_rep([(2, 1)], field))

    @staticmethod
    def _compare(shape, W):
        box = tuple(min(x + 2, 4) for x in shape)
        A = md.basic_relative_projective(shape, W, box)
        B = presented_relative_projective(shape, W, box)
        assert A.dims == B.dims
        assert characters(A) == characters(B)
        assert md.check_module_axioms(A).ok

    def test_regular_is_free(self):
        l, box = (2, 1), (4, 3)
        A = md.basic_relative_projective(l, md.regular_rep(l, Q), box)
        B = md.free_module(l, box, Q)
        assert A.dims == B.dims and characters(A) == characters(B)

    def test_torsion_free(self):
        V = md.basic_relative_projective((2, 1), md.regular_rep((2, 1), F2), (4, 3))
        for (n, i), X in V.incl.items():
            assert X.rank() == X.ncols

    def test_coxeter_failure(self):
        bad = md.GroupRep((2,), 1, {(0, 1): Matrix(1, 1, [{0: Q(2)}], Q)}, Q)
        with pytest.raises(CoxeterError):
            md.basic_relative_projective((2,), bad, (3,))


class TestPresentation:
    def test_no_relations_is_free(self):
        p = Presentation(Q, 2, [((1, 1), "g")], [], (3, 3))
        A, B = md.from_presentation(p), md.free_module((1, 1), (3, 3), Q)
        assert A.dims == B.dims and A.trans == B.trans and A.incl == B.incl

    def test_empty_relations_additive(self):
        p = Presentation(Q, 2, [((1, 0), "a"), ((0, 1), "b")], [], (3, 3))
        V = md.from_presentation(p)
        assert all(V.dims[n] == n[0] + n[1] for n in V.shapes())

    def test_axis_quotient(self):
        rel = Relation((0, 1), [(0, cb.pi((0, 0), 1), 1)])
        V = md.from_presentation(Presentation(Q, 2, [((0, 0), "g")], [rel], (4, 4)))
        assert all(V.dims[t] == (1 if t[1] == 0 else 0) for t in V.shapes())

    def test_killed_at_one(self):
        rel = Relation((1,), [(0, cb.pi((0,), 0), 1)])
        V = md.from_presentation(Presentation(Q, 1, [((0,), "g")], [rel], (4,)))
        assert V.hilbert() == {(0,): 1, (1,): 0, (2,): 0, (3,): 0, (4,): 0}

    def test_bad_relation(self):
        rel = Relation((1, 1), [(0, cb.identity((1, 1)), 1)])
        with pytest.raises(ValueError):
            md.from_presentation(Presentation(Q, 2, [((1, 0), "g")], [rel], (2, 2)))

    @given(st.integers(0, 10 ** 6), st.sampled_from([Q, F2, F3]), st.integers(1, 2))
    def test_random_presentations_lawful(self, seed, field, m):
        rng = random.Random(seed)
        box = (4,) if m == 1 else (3, 3)
        V = md.from_presentation(md.random_presentation(rng, field, m, box))
        assert md.check_module_axioms(V, samples=15, seed=seed).ok


class TestDirectSum:
    def test_with_zero(self):
        V = md.free_module((1, 0), (3, 3), Q)
        S = md.direct_sum(V, md.zero_module(2, (3, 3), Q))
        assert S.dims == V.dims and S.trans == V.trans and S.incl == V.incl

    def test_dim(self):
        S = md.direct_sum(md.free_module((1, 0), (3, 3), Q), md.free_module((0, 1), (3, 3), Q))
        assert S.dims[(1, 1)] == 2

    def test_min_box_and_hilbert(self):
        V, W = md.free_module((1, 1), (3, 4), Q), md.free_module((0, 1), (4, 2), Q)
        S = md.direct_sum(V, W)
        assert S.box == (3, 2)
        assert all(S.dims[n] == V.dims[n] + W.dims[n] for n in S.shapes())
        assert md.check_module_axioms(S).ok

    def test_field_mismatch(self):
        with pytest.raises(ValueError):
            md.direct_sum(md.free_module((1,), (2,), Q), md.free_module((1,), (2,), F2))


class TestSubmodules:
    def test_whole_module(self):
        V = md.free_module((0, 0), (3, 3), Q)
        G = md.submodule_generated(V, [((0, 0), {0: Q(1)})])
        assert G.module.dims == V.dims

    def test_empty_seeds(self):
        G = md.submodule_generated(md.free_module((1, 1), (3, 3), Q), [])
        assert G.module.is_zero()

    def test_sum_of_injections_seed(self):
        V = md.free_module((1, 0), (5, 2), Q)
        G = md.submodule_generated(V, [((2, 0), [1, 1])])
        for n in V.shapes():
            # the pair sums e_a + e_b span everything once n_1 >= 3
            expect = 0 if n[0] < 2 else (1 if n[0] == 2 else n[0])
            assert G.module.dims[n] == expect
        assert md.check_module_axioms(G.module).ok
        assert G.generator_profile == {(2, 0): 1}

    def test_invariant_seed(self):
        V = md.free_module((1, 0), (5, 2), Q)
        G = md.submodule_generated(V, [((2, 0), [1, 1]), ((1, 0), [1])])
        assert G.module.dims == V.dims

    def test_seed_outside_box(self):
        with pytest.raises(BoxError):
            md.submodule_generated(md.free_module((0,), (2,), Q), [((3,), {0: 1})])

    def test_submodule_closed(self):
        for V in fuzz_corpus(2, (3, 3), 5, seed=11):
            seeds = [(n, {0: V.field.one()}) for n in V.shapes() if V.dims[n] and sum(n) == 2]
            G = md.submodule_generated(V, seeds[:2])
            assert md.check_module_axioms(G.module, samples=10).ok


class TestCorruption:
    def test_cross_direction_located(self):
        V = md.free_module((1, 1), (3, 3), Q)
        X = V.incl[((1, 1), 0)]
        V.incl[((1, 1), 0)] = X + X
        rep = md.check_module_axioms(V)
        assert not rep.ok
        assert rep.results["cross_direction"].startswith("(1,1)")

    def test_coxeter_located(self):
        V = md.free_module((2,), (3,), Q)
        V.trans[((3,), 0, 1)] = Matrix.identity(V.dims[(3,)], Q) + Matrix.identity(V.dims[(3,)], Q)
        rep = md.check_module_axioms(V)
        assert rep.results["coxeter"].startswith("(3)")


class TestGroupReps:
    @pytest.mark.parametrize("shape", [(2,), (3,), (2, 2), (1, 3)])
    def test_builtin_reps_are_lawful(self, shape):
        for W in (md.trivial_rep(shape, Q), md.sign_rep(shape, Q), md.regular_rep(shape, F2)):
            assert W.coxeter_violations() == []

    def test_tensor_rep(self):
        W = md.tensor_rep([md.sign_rep((2,), Q), md.regular_rep((3,), Q)], Q)
        assert W.dim == 6 and W.coxeter_violations() == []

    def test_group_orders(self):
        for n in itertools.product(range(4), repeat=2):
            assert len(list(cb.multi_permutations(n))) == factorial(n[0]) * factorial(n[1])

"""Homology, torsion, relative projectivity and the shift-resolution complex.

``H_s(V)`` is computed from a free resolution built degreewise inside the
box: a free cover of ``V`` on module generators, its kernel, a cover of
that kernel, and so on.  The value of ``H_s`` at ``n`` only involves
shapes below ``n``, so every reported number is exact on the whole box.
"""

from __future__ import annotations

import itertools
from math import factorial, prod
from dataclasses import dataclass, field as dc_field

from . import combinat as cb
from .combinat import Shape
from .functors import kernel_spaces_dir, shift, shift_by
from .linalg import Echelon, Field, Matrix
from .module import (
    FreeSum,
    GroupRep,
    TruncatedModule,
    closure,
    orbit_close,
    quotient,
    submodule,
)


@dataclass
class GradedDims:
    """Dimensions indexed by shape, exact for every shape below ``box``."""

    dims: dict
    box: Shape

    def support(self) -> list[Shape]:
        return [n for n in sorted(self.dims) if self.dims[n]]

    def top_degree(self) -> int:
        """Largest degree in the support, or -1."""
        return max((sum(n) for n in self.support()), default=-1)

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def __getitem__(self, n: Shape) -> int:
        return self.dims.get(tuple(n), 0)

    def interior(self) -> bool:
        """Support strictly inside the box in every coordinate."""
        return all(all(a < b for a, b in zip(n, self.box)) for n in self.support())


# -- H_0 -----------------------------------------------------------------------

def m_spaces(V: TruncatedModule) -> dict:
    """``mV_n``: the span of images of all non-invertible morphisms into ``n``."""
    out = {}
    for n in V.shapes():
        E = Echelon(V.field, V.dims[n])
        queue = []
        for i in range(V.m):
            if n[i] > 0:
                X = V.incl[(cb.bump(n, i, -1), i)]
                for c in X.cols:
                    if E.add(c):
                        queue.append(c)
        orbit_close(E, V.transpositions(n), queue)
        out[n] = E
    return out


def h0_dims(V: TruncatedModule) -> dict:
    ms = m_spaces(V)
    return {n: V.dims[n] - ms[n].rank for n in V.shapes()}


def generating_degree(V: TruncatedModule) -> int:
    return GradedDims(h0_dims(V), V.box).top_degree()


def h0_generators(V: TruncatedModule) -> list[tuple[Shape, dict]]:
    """Vectors generating ``V`` as a module, chosen greedily degree by degree."""
    amb = _ModuleAmbient(V)
    full = {n: Echelon(V.field, V.dims[n], [{k: V.field.one()} for k in range(V.dims[n])])
            for n in V.shapes()}
    return _module_generators(amb, full, m_spaces(V))


def h0_representation(V: TruncatedModule, n: Shape) -> GroupRep:
    """``H_0(V)_n`` as a representation of ``S_n``."""
    E = m_spaces(V)[n]
    comp = E.complement_indices()
    pos = {k: a for a, k in enumerate(comp)}
    gens = {}
    for i in range(V.m):
        for j in range(1, n[i]):
            A = V.trans[(n, i, j)]
            cols = [{pos[k]: v for k, v in E.reduce(A.cols[c]).items()} for c in comp]
            gens[(i, j)] = Matrix(len(comp), len(comp), cols, V.field)
    return GroupRep(n, len(comp), gens, V.field, "H0")


# -- resolution ------------------------------------------------------------------

@dataclass
class Homology:
    """``H_0 .. H_{s_max}`` with generating and homological degrees."""

    groups: list  # GradedDims per s
    box: Shape

    @property
    def gd(self) -> int:
        return self.groups[0].top_degree()

    def hd(self, s: int) -> int:
        return self.groups[s].top_degree()

    def __getitem__(self, s: int) -> GradedDims:
        return self.groups[s]


class _ModuleAmbient:
    def __init__(self, V: TruncatedModule):
        self.V = V
        self.field = V.field

    def act(self, f, vec):
        return self.V.apply(f, vec)

    def transpositions(self, n):
        return self.V.transpositions(n)


class _FreeAmbient:
    def __init__(self, P: FreeSum):
        self.P = P
        self.field = P.field
        self._trans: dict = {}

    def act(self, f, vec):
        return self.P.act(f, vec)

    def transpositions(self, n):
        gens = self._trans.get(n)
        if gens is None:
            gens = [self.P.action_matrix(_swap(n, i, j)) for i in range(len(n)) for j in range(1, n[i])]
            self._trans[n] = gens
        return gens


def _sub_m_spaces(amb, K: dict, box: Shape) -> dict:
    """``mK`` for a submodule ``K`` given by subspaces of an ambient module."""
    out = {}
    for n in cb.shapes_by_degree(box):
        E = Echelon(amb.field, K[n].dim)
        queue = []
        for i in range(len(box)):
            if n[i] > 0:
                below = cb.bump(n, i, -1)
                f = cb.pi(below, i)
                for b in K[below].basis():
                    w = amb.act(f, b)
                    if E.add(w):
                        queue.append(w)
        if queue:
            orbit_close(E, amb.transpositions(n), queue)
        out[n] = E
    return out


def _module_generators(amb, K: dict, mK: dict) -> list:
    """Greedy module generators of ``K`` modulo ``mK``, degree by degree."""
    gens = []
    for n in sorted(K, key=lambda x: (sum(x), x)):
        E = mK[n].copy()
        for b in K[n].basis():
            if E.add(b):
                gens.append((n, b))
                orbit_close(E, amb.transpositions(n), [b])
    return gens


def _swap(n: Shape, i: int, j: int) -> cb.Injection:
    maps = []
    for a, k in enumerate(n):
        img = list(range(1, k + 1))
        if a == i:
            img[j - 1], img[j] = img[j], img[j - 1]
        maps.append(tuple(img))
    return cb.Injection(tuple(maps), tuple(n))


def _h0(K: dict, mK: dict) -> dict:
    return {n: K[n].rank - mK[n].rank for n in K}


def _free_h0(gens, shapes) -> dict:
    """``H_0`` of the free module on ``gens``: ``k S_n`` at each generator."""
    out = {n: 0 for n in shapes}
    for n, _ in gens:
        out[n] += prod(factorial(k) for k in n)
    return out


def homology(V: TruncatedModule, s_max: int = 2) -> Homology:
    """``H_s(V)`` for ``s = 0..s_max`` on the whole box of ``V``.

    With ``0 -> K_s -> P_{s-1} -> K_{s-1} -> 0`` (``K_0 = V``, ``P`` free)
    the long exact sequence gives
    ``dim H_s(V) = h_0(K_s) - h_0(P_{s-1}) + h_0(K_{s-1})`` for ``s >= 1``,
    since ``H_s(V) = H_1(K_{s-1})``.
    """
    if s_max < 0:
        raise ValueError("s_max must be non-negative")
    box = V.box
    shapes = cb.boxed_shapes(box)
    field = V.field
    amb = _ModuleAmbient(V)
    K = {n: Echelon(field, V.dims[n], [{k: field.one()} for k in range(V.dims[n])]) for n in shapes}
    mK = m_spaces(V)
    h_prev = _h0(K, mK)
    groups = [GradedDims(h_prev, box)]
    for s in range(1, s_max + 1):
        gens = _module_generators(amb, K, mK)
        P = FreeSum([g for g, _ in gens], box, field)
        K2 = {}
        for t in shapes:
            cols = [amb.act(h, gens[r][1]) for r, h in P.basis(t)]
            ker = Matrix(K[t].dim, len(cols), cols, field).kernel()
            K2[t] = Echelon(field, P.dim(t), ker.cols)
        amb = _FreeAmbient(P)
        mK2 = _sub_m_spaces(amb, K2, box)
        h_next = _h0(K2, mK2)
        hp = _free_h0(gens, shapes)
        groups.append(GradedDims({n: h_next[n] - hp[n] + h_prev[n] for n in shapes}, box))
        K, mK, h_prev = K2, mK2, h_next
    return Homology(groups, box)


# -- relative projectivity -------------------------------------------------------

@dataclass
class Verdict:
    """``value`` is True, False, or None for inconclusive."""

    value: bool | None
    witness: Shape | None = None
    reason: str = ""
    h2_violation: bool = False

    def __bool__(self) -> bool:
        return bool(self.value)

    @property
    def label(self) -> str:
        return {True: "true", False: "false", None: "inconclusive"}[self.value]


def relative_projective_test(V: TruncatedModule, hom: Homology | None = None) -> Verdict:
    """Relative projective iff ``H_1 = 0``, with ``H_0`` required inside the box."""
    hom = hom or homology(V, 2)
    h0, h1 = hom[0], hom[1]
    if not h0.interior():
        return Verdict(None, reason="H_0 support touches the box boundary")
    if not h1.is_zero():
        witness = min(h1.support(), key=lambda n: (sum(n), n))
        return Verdict(False, witness, "H_1 nonzero")
    viol = len(hom.groups) > 2 and not hom[2].is_zero()
    return Verdict(True, reason="H_1 = 0", h2_violation=viol)


# -- torsion --------------------------------------------------------------------

@dataclass
class TorsionReport:
    kernel_dims: list  # GradedDims of K_i V (box minus o_i)
    kernel_spaces: list
    torsion_spaces: dict  # V_T as subspaces of V on the full box
    torsion_dims: GradedDims
    td: list
    margin: list  # box_i - 1 - td_i; the layer n_i = box_i is never observed
    shift_check: list = dc_field(default_factory=list)  # (i, td_i(V), td_i(Sigma_i V), ok)

    @property
    def td_total(self) -> int:
        return max(self.td, default=-1)

    @property
    def certified(self) -> bool:
        return all(x >= 1 for x in self.margin)


def torsion_degrees(V: TruncatedModule) -> list[int]:
    out = []
    for i in range(V.m):
        ks = kernel_spaces_dir(V, i)
        out.append(max((n[i] for n, E in ks.items() if E.rank), default=-1))
    return out


def torsion_analysis(V: TruncatedModule, check_shift: bool = True) -> TorsionReport:
    """Kernels ``K_i V``, torsion degrees and the boxed torsion submodule."""
    kdims, kspaces, td = [], [], []
    seeds: dict = {}
    for i in range(V.m):
        ks = kernel_spaces_dir(V, i)
        kspaces.append(ks)
        kdims.append(GradedDims({n: E.rank for n, E in ks.items()}, cb.bump(V.box, i, -1) if V.box[i] else V.box))
        td.append(max((n[i] for n, E in ks.items() if E.rank), default=-1))
        for n, E in ks.items():
            seeds.setdefault(n, []).extend(E.basis())
    VT = closure(V, seeds)
    margin = [V.box[i] - 1 - td[i] for i in range(V.m)]
    rep = TorsionReport(kdims, kspaces, VT, GradedDims({n: E.rank for n, E in VT.items()}, V.box),
                        td, margin)
    if check_shift:
        for i in range(V.m):
            if td[i] >= 0 and V.box[i] >= 2:
                after = torsion_degrees(shift(V, i).output)[i]
                rep.shift_check.append((i, td[i], after, after <= td[i] - 1))
    return rep


def torsion_free_part(V: TruncatedModule, rep: TorsionReport | None = None):
    rep = rep or torsion_analysis(V, check_shift=False)
    return quotient(V, rep.torsion_spaces, name=f"{V.name}_F")


def torsion_part(V: TruncatedModule, rep: TorsionReport | None = None) -> TruncatedModule:
    rep = rep or torsion_analysis(V, check_shift=False)
    return submodule(V, rep.torsion_spaces, name=f"{V.name}_T").module


# -- the complex F^* -----------------------------------------------------------------

@dataclass
class ComplexStage:
    V: TruncatedModule  # V^j
    torsion: TorsionReport
    F: TruncatedModule | None  # F^j = Sigma^shift (V^j)_F
    F_verdict: Verdict | None
    gd_F: int


@dataclass
class NagpalComplex:
    shift: Shape
    stages: list
    homology: list  # GradedDims of H^j; H^0 = V_T, H^{j+1} = (V^{j+1})_T
    homology_td: list  # td vectors of each H^j
    N: list
    gd_V: int
    complete: bool  # False when the box ran out before V^{j} vanished

    @property
    def l(self) -> int:
        return sum(1 for st in self.stages if st.F is not None) - 1

    @property
    def F(self) -> list:
        return [st.F for st in self.stages if st.F is not None]

    @property
    def gd_F(self) -> list:
        return [st.gd_F for st in self.stages if st.F is not None]

    @property
    def N_total(self) -> int:
        return max(self.N, default=-1)

    def degree_bounds_hold(self) -> bool:
        return self.l <= self.gd_V and all(g <= self.gd_V - j for j, g in enumerate(self.gd_F))

    def all_F_relative_projective(self) -> bool:
        return all(st.F_verdict is None or st.F_verdict.value is True
                   for st in self.stages if st.F is not None)


def nagpal_complex(V: TruncatedModule, shift_amount: Shape | None = None,
                   max_shift: int = 3) -> NagpalComplex:
    """``0 -> V -> F^0 -> F^1 -> ...`` built from torsion-free parts and shifts.

    ``F^j = Sigma^a (V^j)_F`` and ``V^{j+1} = F^j / (V^j)_F``.  Without an
    explicit shift, the smallest uniform amount making every ``F^j``
    relative projective is used.
    """
    if shift_amount is None:
        last = None
        for c in range(0, max_shift + 1):
            a = (c,) * V.m
            if not cb.leq(a, V.box):
                break
            cx = _build_complex(V, a)
            last = cx
            if cx.all_F_relative_projective() and all(
                st.F_verdict is not None and st.F_verdict.value is True
                for st in cx.stages if st.F is not None
            ):
                return cx
        if last is None:
            return _build_complex(V, (0,) * V.m)
        return last
    return _build_complex(V, tuple(shift_amount))


def _build_complex(V: TruncatedModule, a: Shape) -> NagpalComplex:
    stages, hom, hom_td = [], [], []
    gd_V = generating_degree(V)
    cur = V
    complete = True
    while True:
        rep = torsion_analysis(cur, check_shift=False)
        hom.append(rep.torsion_dims)
        hom_td.append(list(rep.td))
        q = quotient(cur, rep.torsion_spaces, name=f"{cur.name}_F")
        VF = q.module
        if VF.is_zero():
            stages.append(ComplexStage(cur, rep, None, None, -1))
            break
        if not cb.leq(a, VF.box) or any(b - x < 0 for b, x in zip(VF.box, a)):
            stages.append(ComplexStage(cur, rep, None, None, -1))
            complete = False
            break
        sh = shift_by(VF, a)
        F = sh.output
        F.name = f"F{len(stages)}"
        hF = homology(F, 2)
        verdict = relative_projective_test(F, hF)
        stages.append(ComplexStage(cur, rep, F, verdict, hF.gd))
        img = {n: Echelon(F.field, F.dims[n], M.cols) for n, M in sh.natural.items()}
        cur = quotient(F, img, name=f"V{len(stages)}").module
        if cur.is_zero():
            break
    N = [max((t[i] for t in hom_td), default=-1) for i in range(V.m)]
    return NagpalComplex(a, stages, hom, hom_td, N, gd_V, complete)


def shifted_relative_projectivity(V: TruncatedModule, n: Shape,
                                  cx: NagpalComplex | None = None) -> tuple[Verdict, bool | None]:
    """Relative projectivity of ``Sigma^n V`` and the prediction ``n_i > N_i``.

    Returns the verdict and the threshold prediction (None if no complex).
    """
    n = tuple(n)
    if not cb.leq(n, V.box):
        return Verdict(None, reason="box exhausted"), None
    W = shift_by(V, n).output
    verdict = relative_projective_test(W)
    predicted = None
    if cx is not None:
        predicted = all(a > b for a, b in zip(n, cx.N))
    return verdict, predicted


# -- projective dimension ---------------------------------------------------------

def is_projective_rep(W: GroupRep) -> bool:
    """Higman's criterion: ``W`` is projective over ``k S_n`` iff some
    ``phi`` in ``End_k(W)`` has ``sum_g g phi g^{-1} = id``."""
    field = W.field
    d = W.dim
    if d == 0:
        return True
    if field.p == 0:
        return True
    elems = list(cb.multi_permutations(W.shape))
    mats = [(W.matrix(g), W.matrix(cb.inverse(g))) for g in elems]
    one = field.one()
    # unknown phi_{ab} -> column index a*d + b; equation row r*d + c
    cols = []
    for a in range(d):
        for b in range(d):
            col: dict = {}
            for G, Gi in mats:
                # (G E_ab Gi)_{rc} = G[r,a] * Gi[b,c]
                ga = G.cols[a]
                for c in range(d):
                    gb = Gi.cols[c].get(b)
                    if not gb:
                        continue
                    for r, gv in ga.items():
                        key = r * d + c
                        w = (col.get(key, 0) + gv * gb) % field.p
                        if w:
                            col[key] = w
                        else:
                            col.pop(key, None)
            cols.append(col)
    A = Matrix(d * d, d * d, cols, field)
    target = {r * d + r: one for r in range(d)}
    from .linalg import NoSolution, solve

    try:
        solve(A, target)
    except NoSolution:
        return False
    return True


@dataclass
class PdVerdict:
    finite: bool | None
    relative_projective: Verdict
    nonprojective_tops: list = dc_field(default_factory=list)

    @property
    def label(self) -> str:
        return {True: "finite", False: "infinite", None: "inconclusive"}[self.finite]


def projective_dim_classifier(V: TruncatedModule, hom: Homology | None = None) -> PdVerdict:
    """Finite projective dimension over a field iff ``V`` is projective."""
    rp = relative_projective_test(V, hom)
    if rp.value is not True:
        return PdVerdict(rp.value, rp)
    if V.field.p == 0:
        return PdVerdict(True, rp)
    hom = hom or homology(V, 1)
    bad = []
    for n in hom[0].support():
        if not is_projective_rep(h0_representation(V, n)):
            bad.append(n)
    return PdVerdict(not bad, rp, bad)


# -- brute-force Tor over the boxed category algebra -------------------------------

def tor_bruteforce(V: TruncatedModule, s_max: int) -> list[dict]:
    """``Tor_s(kC/m, V)`` dims via projective resolutions of the right
    modules ``kS_t`` over the explicit algebra on the boxed category.

    Works with full hom-sets and generic right-module linear algebra; shares
    nothing with :func:`homology` beyond evaluating ``V`` on morphisms.
    """
    shapes = cb.boxed_shapes(V.box)
    out = [{t: 0 for t in shapes} for _ in range(s_max + 1)]
    for t in shapes:
        for s, d in enumerate(_tor_at(V, t, s_max)):
            out[s][t] = d
    return out


def _tor_at(V: TruncatedModule, t: Shape, s_max: int) -> list[int]:
    field = V.field
    one = field.one()
    below = [n for n in cb.boxed_shapes(V.box) if cb.leq(n, t)]

    # a right module element: dict over (generator index, f) pairs, where the
    # generator lives at object u and f: n -> u; the "domain" of the element is n.
    # Q_0 = e_t A with one generator at t; augmentation onto kS_t kills non-isos.
    gens = [t]  # objects of the generators of Q_s
    # kernel of the augmentation, by domain
    kernel = {}
    for n in below:
        vecs = []
        for f in cb.enumerate_injections(n, t):
            if n != t:
                vecs.append({(0, f): one})
        kernel[n] = vecs
    complexes = []  # generator objects of Q_1, Q_2, ...
    boundary_images = [None]  # images of generators of Q_s in Q_{s-1}
    for s in range(1, s_max + 2):
        # generators of the kernel: a complement of kernel * m by domain
        new_gens, images = [], []
        rad = {}
        # kernel * m at domain n: z o g for z in kernel at n' > n, g: n -> n' non-iso
        for n in below:
            E = _ElemSpace(field)
            for n2 in below:
                if n2 == n or not cb.leq(n, n2):
                    continue
                for z in kernel[n2]:
                    for g in cb.enumerate_injections(n, n2):
                        E.add(_right_act(z, g))
            rad[n] = E
        for n in sorted(below, key=lambda x: (sum(x), x)):
            E = rad[n].copy()
            for z in kernel[n]:
                if E.add(z):
                    new_gens.append(n)
                    images.append(z)
        boundary_images.append(images)
        complexes.append(new_gens)
        # next kernel: elements of Q_s (free on new_gens) mapping to 0 in Q_{s-1}
        if s == s_max + 1:
            break
        kernel = {}
        for n in below:
            basis = [(r, f) for r, u in enumerate(new_gens) if cb.leq(n, u)
                     for f in cb.enumerate_injections(n, u)]
            cols = []
            keys: dict = {}
            for r, f in basis:
                img = _right_act(images[r], f)
                col = {}
                for key, v in img.items():
                    col[keys.setdefault(key, len(keys))] = v
                cols.append(col)
            K = Matrix(len(keys), len(basis), cols, field).kernel()
            kernel[n] = [{basis[j]: v for j, v in c.items()} for c in K.cols]
    # tensor with V: Q_s (x) V = sum over generators u of V_u
    chain_gens = [gens] + complexes  # generators of Q_0, Q_1, ...
    dims = []
    mats = []
    for s in range(1, len(chain_gens)):
        src, dst = chain_gens[s], chain_gens[s - 1]
        off_src = _offsets([V.dims[u] for u in src])
        off_dst = _offsets([V.dims[u] for u in dst])
        cols = []
        for r, u in enumerate(src):
            z = boundary_images[s][r]
            for k in range(V.dims[u]):
                col: dict = {}
                for (r2, f), c in z.items():
                    w = V.apply(f, {k: one})
                    for idx, val in w.items():
                        key = off_dst[r2] + idx
                        x = col.get(key, 0) + c * val
                        if field.p:
                            x %= field.p
                        if x:
                            col[key] = x
                        else:
                            col.pop(key, None)
                cols.append(col)
        mats.append(Matrix(off_dst[-1], off_src[-1], cols, field))
    sizes = [_offsets([V.dims[u] for u in g])[-1] for g in chain_gens]
    ranks = [M.rank() for M in mats]
    for s in range(s_max + 1):
        r_out = ranks[s - 1] if s >= 1 else 0
        r_in = ranks[s] if s < len(ranks) else 0
        dims.append(sizes[s] - r_out - r_in)
    return dims


def _offsets(sizes) -> list[int]:
    return list(itertools.accumulate(sizes, initial=0))


def _right_act(z: dict, g: cb.Injection) -> dict:
    """``z . g``: precompose every morphism in ``z`` with ``g``."""
    return {(r, cb.compose(f, g)): v for (r, f), v in z.items()}


class _ElemSpace:
    """Span of dict-keyed vectors (keys are arbitrary hashables)."""

    def __init__(self, field: Field):
        self.field = field
        self.keys: dict = {}
        self.E = Echelon(field, 0)

    def _vec(self, z: dict) -> dict:
        out = {}
        for key, v in z.items():
            k = self.keys.get(key)
            if k is None:
                k = self.keys[key] = len(self.keys)
                self.E.dim = len(self.keys)
            out[k] = v
        return out

    def add(self, z: dict) -> bool:
        return self.E.add(self._vec(z))

    def copy(self) -> "_ElemSpace":
        c = _ElemSpace(self.field)
        c.keys = dict(self.keys)
        c.E = self.E.copy()
        return c

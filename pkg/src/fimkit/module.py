"""Truncated FI^m-modules.

A :class:`TruncatedModule` is known exactly on every shape below its box.
It stores only generator actions: the adjacent transpositions ``s_{i,j}``
at each shape and one inclusion ``X_{n,i}`` (the action of ``pi_{n,i}``)
per direction.  Every other morphism is evaluated through its canonical
factorization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from . import combinat as cb
from .combinat import Injection, Shape
from .linalg import Echelon, Field, Matrix, axpy, projection


class BoxError(ValueError):
    """A shape or morphism falls outside the stored box."""


class TruncatedModule:
    """A functor from FI^m to vector spaces, stored on ``shape <= box``.

    ``trans[(n, i, j)]`` is the action of the transposition ``(j, j+1)`` in
    factor ``i`` at ``n`` (``1 <= j < n_i``); ``incl[(n, i)]`` is the
    ``dim(n + o_i) x dim(n)`` action of ``pi_{n,i}``.
    """

    def __init__(self, field: Field, box: Shape, dims: dict, trans: dict, incl: dict,
                 name: str = ""):
        self.field = field
        self.box = tuple(box)
        self.dims = dims
        self.trans = trans
        self.incl = incl
        self.name = name

    # -- basic data --------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.box)

    def shapes(self) -> list[Shape]:
        return cb.boxed_shapes(self.box)

    def contains(self, n: Shape) -> bool:
        return len(n) == self.m and all(0 <= a <= b for a, b in zip(n, self.box))

    def dim(self, n: Shape) -> int:
        if not self.contains(n):
            raise BoxError(f"{cb.format_shape(n)} is outside box {cb.format_shape(self.box)}")
        return self.dims[n]

    def hilbert(self) -> dict:
        return {n: self.dims[n] for n in self.shapes()}

    def support(self) -> list[Shape]:
        return [n for n in self.shapes() if self.dims[n]]

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def X(self, n: Shape, i: int) -> Matrix:
        try:
            return self.incl[(n, i)]
        except KeyError:
            raise BoxError(f"pi at {cb.format_shape(n)} in direction {i + 1} leaves the box") from None

    def s(self, n: Shape, i: int, j: int) -> Matrix:
        return self.trans[(n, i, j)]

    def transpositions(self, n: Shape) -> list[Matrix]:
        return [self.trans[(n, i, j)] for i in range(self.m) for j in range(1, n[i])]

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<TruncatedModule{label} m={self.m} box={cb.format_shape(self.box)} over {self.field.name}>"

    # -- evaluation --------------------------------------------------------

    def apply_permutation(self, n: Shape, sigma: Injection, vec: dict) -> dict:
        for i, perm in enumerate(sigma.maps):
            for j in reversed(cb.permutation_word(perm)):
                vec = self.trans[(n, i, j)].apply(vec)
        return vec

    def apply(self, f: Injection, vec: dict, order: Sequence[int] | None = None) -> dict:
        """``V(f) vec`` via ``f = sigma o rho`` and a staircase path for ``rho``."""
        n, t = f.domain, f.codomain
        if not (self.contains(n) and self.contains(t)):
            raise BoxError(f"morphism {f} leaves box {cb.format_shape(self.box)}")
        sigma, k = cb.canonical_factorization(f)
        cur = n
        for i in (order if order is not None else range(self.m)):
            for _ in range(k[i]):
                vec = self.incl[(cur, i)].apply(vec)
                cur = cb.bump(cur, i)
        return self.apply_permutation(t, sigma, vec)

    def evaluate(self, f: Injection, order: Sequence[int] | None = None) -> Matrix:
        d = self.dim(f.domain)
        one = self.field.one()
        cols = [self.apply(f, {j: one}, order) for j in range(d)]
        return Matrix(self.dim(f.codomain), d, cols, self.field)

    def permutation_matrix(self, n: Shape, sigma: Injection) -> Matrix:
        one = self.field.one()
        d = self.dims[n]
        return Matrix(d, d, [self.apply_permutation(n, sigma, {j: one}) for j in range(d)], self.field)


def evaluate(V: TruncatedModule, f: Injection) -> Matrix:
    return V.evaluate(f)


def zero_module(m: int, box: Shape, field: Field) -> TruncatedModule:
    shapes = cb.boxed_shapes(box)
    dims = {n: 0 for n in shapes}
    trans = {(n, i, j): Matrix.zero(0, 0, field) for n in shapes for i in range(m) for j in range(1, n[i])}
    incl = {}
    for n in shapes:
        for i in range(m):
            if n[i] < box[i]:
                incl[(n, i)] = Matrix.zero(0, 0, field)
    return TruncatedModule(field, box, dims, trans, incl, name="0")


def restrict(V: TruncatedModule, box: Shape) -> TruncatedModule:
    """The same module on a smaller box."""
    box = tuple(box)
    if not cb.leq(box, V.box):
        raise BoxError("restriction box must lie inside the module box")
    shapes = cb.boxed_shapes(box)
    dims = {n: V.dims[n] for n in shapes}
    trans = {k: v for k, v in V.trans.items() if k[0] in dims}
    incl = {(n, i): V.incl[(n, i)] for n in shapes for i in range(V.m) if n[i] < box[i]}
    return TruncatedModule(V.field, box, dims, trans, incl, V.name)


# -- free modules ------------------------------------------------------------

class FreeSum:
    """``M(g_1) + ... + M(g_r)`` with basis ``(r, h)``, generator-major,
    injections in lexicographic order."""

    def __init__(self, shapes: Sequence[Shape], box: Shape, field: Field):
        self.gens = [tuple(g) for g in shapes]
        self.box = tuple(box)
        self.field = field
        m = len(self.box)
        for g in self.gens:
            if len(g) != m:
                raise cb.DimensionError("generator shape has wrong m")
            if not cb.leq(g, self.box):
                raise BoxError(f"generator {cb.format_shape(g)} outside box {cb.format_shape(self.box)}")
        self._basis: dict[Shape, list] = {}
        self._index: dict[Shape, dict] = {}

    @property
    def m(self) -> int:
        return len(self.box)

    def basis(self, t: Shape) -> list:
        b = self._basis.get(t)
        if b is None:
            b = [(r, h) for r, g in enumerate(self.gens) for h in cb.enumerate_injections(g, t)]
            self._basis[t] = b
            self._index[t] = {x: k for k, x in enumerate(b)}
        return b

    def index(self, t: Shape) -> dict:
        self.basis(t)
        return self._index[t]

    def dim(self, t: Shape) -> int:
        return len(self.basis(t))

    def act(self, f: Injection, vec: dict) -> dict:
        """Post-composition by ``f`` on a vector at ``f.domain``."""
        src = self.basis(f.domain)
        idx = self.index(f.codomain)
        out = {}
        for k, v in vec.items():
            r, h = src[k]
            out[idx[(r, cb.compose(f, h))]] = v
        return out

    def action_matrix(self, f: Injection) -> Matrix:
        one = self.field.one()
        src = self.basis(f.domain)
        idx = self.index(f.codomain)
        cols = [{idx[(r, cb.compose(f, h))]: one} for r, h in src]
        return Matrix(len(self.basis(f.codomain)), len(src), cols, self.field)

    def module(self, name: str = "") -> TruncatedModule:
        box, m = self.box, self.m
        shapes = cb.boxed_shapes(box)
        dims = {n: self.dim(n) for n in shapes}
        trans, incl = {}, {}
        for n in shapes:
            for i in range(m):
                for j in range(1, n[i]):
                    trans[(n, i, j)] = self.action_matrix(_transposition(n, i, j))
                if n[i] < box[i]:
                    incl[(n, i)] = self.action_matrix(cb.pi(n, i))
        return TruncatedModule(self.field, box, dims, trans, incl, name)


def _transposition(n: Shape, i: int, j: int) -> Injection:
    maps = []
    for a, k in enumerate(n):
        img = list(range(1, k + 1))
        if a == i:
            img[j - 1], img[j] = img[j], img[j - 1]
        maps.append(tuple(img))
    return Injection(tuple(maps), tuple(n))


def free_module(shape: Shape, box: Shape, field: Field) -> TruncatedModule:
    """``M(shape)`` on ``box``; basis at ``t`` is ``C(shape, t)`` in lex order."""
    return FreeSum([shape], box, field).module(name=f"M{cb.format_shape(tuple(shape))}")


# -- group representations of S_l ---------------------------------------------

class GroupRep:
    """A representation of ``S_l = S_{l_1} x ... x S_{l_m}``.

    ``gens[(i, j)]`` is the matrix of the transposition ``(j, j+1)`` in
    factor ``i``.
    """

    def __init__(self, shape: Shape, dim: int, gens: dict, field: Field, name: str = ""):
        self.shape = tuple(shape)
        self.dim = dim
        self.gens = gens
        self.field = field
        self.name = name
        self._cache: dict = {}

    def matrix(self, sigma: Injection) -> Matrix:
        M = self._cache.get(sigma.maps)
        if M is None:
            one = self.field.one()
            cols = []
            for k in range(self.dim):
                v = {k: one}
                for i, perm in enumerate(sigma.maps):
                    for j in reversed(cb.permutation_word(perm)):
                        v = self.gens[(i, j)].apply(v)
                cols.append(v)
            M = Matrix(self.dim, self.dim, cols, self.field)
            self._cache[sigma.maps] = M
        return M

    def coxeter_violations(self) -> list[str]:
        bad = []
        I = Matrix.identity(self.dim, self.field)
        keys = sorted(self.gens)
        for key in keys:
            A = self.gens[key]
            if A @ A != I:
                bad.append(f"s{key}^2 != 1")
        for a in keys:
            for b in keys:
                if a >= b:
                    continue
                A, B = self.gens[a], self.gens[b]
                if a[0] == b[0] and b[1] == a[1] + 1:
                    if A @ B @ A != B @ A @ B:
                        bad.append(f"braid {a},{b}")
                elif A @ B != B @ A:
                    bad.append(f"commute {a},{b}")
        expected = {(i, j) for i, k in enumerate(self.shape) for j in range(1, k)}
        if set(keys) != expected:
            bad.append("generator set does not match shape")
        return bad

    def character(self, sigma: Injection):
        return self.matrix(sigma).trace()


class CoxeterError(ValueError):
    """Generator matrices violate the Coxeter relations."""


def trivial_rep(shape: Shape, field: Field) -> GroupRep:
    one = field.one()
    gens = {(i, j): Matrix(1, 1, [{0: one}], field) for i, k in enumerate(shape) for j in range(1, k)}
    return GroupRep(shape, 1, gens, field, "trivial")


def sign_rep(shape: Shape, field: Field, factors: Iterable[int] | None = None) -> GroupRep:
    """Sign character on the chosen factors (all by default), trivial elsewhere."""
    factors = set(range(len(shape)) if factors is None else factors)
    gens = {}
    for i, k in enumerate(shape):
        v = field(-1) if i in factors else field.one()
        for j in range(1, k):
            gens[(i, j)] = Matrix(1, 1, [{0: v}], field)
    return GroupRep(shape, 1, gens, field, "sign")


def regular_rep(shape: Shape, field: Field) -> GroupRep:
    """``k S_shape`` acting on itself by left multiplication."""
    elems = list(cb.multi_permutations(tuple(shape)))
    idx = {g: k for k, g in enumerate(elems)}
    one = field.one()
    gens = {}
    for i, k in enumerate(shape):
        for j in range(1, k):
            s = _transposition(tuple(shape), i, j)
            cols = [{idx[cb.compose(s, g)]: one} for g in elems]
            gens[(i, j)] = Matrix(len(elems), len(elems), cols, field)
    return GroupRep(shape, len(elems), gens, field, "regular")


def specht_rep(lams: Sequence[cb.Partition], field: Field) -> GroupRep:
    """Outer tensor product of Young seminormal representations.

    Basis: tuples of standard tableaux.  Requires characteristic 0 or a
    prime larger than every factor size.
    """
    from .stability import seminormal_matrices

    shape = tuple(sum(lam) for lam in lams)
    factor_mats = [seminormal_matrices(lam, field) for lam in lams]
    dims = [fm[1] for fm in factor_mats]
    total = 1
    for d in dims:
        total *= d
    gens = {}
    for i, (mats, d) in enumerate(factor_mats):
        for j, A in mats.items():
            gens[(i, j)] = _kron_factor(A, i, dims, field)
    return GroupRep(shape, total, gens, field, "specht" + cb.format_multipartition(lams))


def _kron_factor(A: Matrix, i: int, dims: Sequence[int], field: Field) -> Matrix:
    """``I x ... x A x ... x I`` with ``A`` in slot ``i`` (row-major index)."""
    import itertools

    total = 1
    for d in dims:
        total *= d
    strides = []
    acc = 1
    for d in reversed(dims):
        strides.append(acc)
        acc *= d
    strides.reverse()
    cols = []
    for multi in itertools.product(*(range(d) for d in dims)):
        base = sum(x * s for x, s in zip(multi, strides)) - multi[i] * strides[i]
        cols.append({base + r * strides[i]: v for r, v in A.cols[multi[i]].items()})
    return Matrix(total, total, cols, field)


def tensor_rep(reps: Sequence[GroupRep], field: Field) -> GroupRep:
    """Outer tensor product of single-factor representations."""
    shape = tuple(r.shape[0] for r in reps)
    dims = [r.dim for r in reps]
    gens = {}
    total = 1
    for d in dims:
        total *= d
    for i, r in enumerate(reps):
        for (_, j), A in r.gens.items():
            gens[(i, j)] = _kron_factor(A, i, dims, field)
    return GroupRep(shape, total, gens, field, "x".join(r.name for r in reps))


# -- basic relative projectives ---------------------------------------------

def _sort_with_perm(h: Injection) -> tuple[Injection, Injection]:
    """``h = h' o sigma`` with ``h'`` increasing in every factor."""
    hs, perms = [], []
    for f in h.maps:
        srt = tuple(sorted(f))
        pos = {y: k + 1 for k, y in enumerate(srt)}
        hs.append(srt)
        perms.append(tuple(pos[y] for y in f))
    return Injection(tuple(hs), h.codomain), Injection(tuple(perms), h.domain)


def basic_relative_projective(shape: Shape, W: GroupRep, box: Shape, check: bool = True) -> TruncatedModule:
    """``M(shape) (x)_{k S_shape} W`` on ``box``.

    Basis at ``t``: increasing injections ``shape -> t`` (lex order) times
    the basis of ``W``; a morphism ``g`` sends ``h (x) w`` to
    ``h' (x) sigma w`` where ``g o h = h' o sigma``.
    """
    shape, box = tuple(shape), tuple(box)
    field = W.field
    if check:
        bad = W.coxeter_violations()
        if bad:
            raise CoxeterError("; ".join(bad))
    if W.shape != shape:
        raise cb.DimensionError("representation is for a different shape")
    if not cb.leq(shape, box):
        raise BoxError(f"{cb.format_shape(shape)} outside box {cb.format_shape(box)}")
    m = len(box)
    d = W.dim
    shapes = cb.boxed_shapes(box)
    bases = {}
    for t in shapes:
        bases[t] = [h for h in cb.enumerate_injections(shape, t)
                    if all(list(f) == sorted(f) for f in h.maps)]
    index = {t: {h: k for k, h in enumerate(b)} for t, b in bases.items()}
    dims = {t: len(bases[t]) * d for t in shapes}

    def action(g: Injection) -> Matrix:
        src = bases[g.domain]
        idx = index[g.codomain]
        cols = []
        for h in src:
            h2, sigma = _sort_with_perm(cb.compose(g, h))
            M = W.matrix(sigma)
            off = idx[h2] * d
            for k in range(d):
                cols.append({off + r: v for r, v in M.cols[k].items()})
        return Matrix(dims[g.codomain], dims[g.domain], cols, field)

    trans, incl = {}, {}
    for n in shapes:
        for i in range(m):
            for j in range(1, n[i]):
                trans[(n, i, j)] = action(_transposition(n, i, j))
            if n[i] < box[i]:
                incl[(n, i)] = action(cb.pi(n, i))
    return TruncatedModule(field, box, dims, trans, incl,
                           name=f"M{cb.format_shape(shape)}(x){W.name or 'W'}")


# -- sub and quotient modules ------------------------------------------------

def closure(V: TruncatedModule, seeds: dict) -> dict:
    """Smallest family of subspaces containing ``seeds`` and closed under V.

    Computed degreewise: at ``n`` take the images of the closed subspaces
    one step below plus the seeds at ``n``, then close under ``S_n``.
    """
    field = V.field
    out: dict[Shape, Echelon] = {}
    for n in cb.shapes_by_degree(V.box):
        E = Echelon(field, V.dims[n])
        queue = []
        for i in range(V.m):
            if n[i] > 0:
                below = cb.bump(n, i, -1)
                X = V.incl[(below, i)]
                for b in out[below].basis():
                    w = X.apply(b)
                    if E.add(w):
                        queue.append(w)
        for v in seeds.get(n, ()):
            if E.add(v):
                queue.append(dict(v))
        orbit_close(E, V.transpositions(n), queue)
        out[n] = E
    return out


def orbit_close(E: Echelon, gens: Sequence[Matrix], queue: list) -> Echelon:
    while queue and E.rank < E.dim:
        v = queue.pop()
        for g in gens:
            w = g.apply(v)
            if E.add(w):
                queue.append(w)
    return E


@dataclass
class Quotient:
    """``V / U`` together with the projection ``V -> V / U`` objectwise."""

    module: TruncatedModule
    proj: dict  # n -> Matrix
    complement: dict  # n -> list of ambient indices forming the quotient basis


def quotient(V: TruncatedModule, sub: dict, name: str = "") -> Quotient:
    """Quotient of ``V`` by a closed family of subspaces (``n -> Echelon``)."""
    field = V.field
    proj, comp, pos = {}, {}, {}
    dims = {}
    for n in V.shapes():
        E = sub.get(n) or Echelon(field, V.dims[n])
        P, q = projection(E)
        proj[n] = P
        comp[n] = E.complement_indices()
        pos[n] = {i: k for k, i in enumerate(comp[n])}
        dims[n] = q

    def induced(A: Matrix, src: Shape, dst: Shape) -> Matrix:
        E = sub.get(dst) or Echelon(field, V.dims[dst])
        p = pos[dst]
        cols = []
        for j in comp[src]:
            r = E.reduce(A.cols[j])
            cols.append({p[i]: v for i, v in r.items()})
        return Matrix(dims[dst], dims[src], cols, field)

    trans = {(n, i, j): induced(A, n, n) for (n, i, j), A in V.trans.items()}
    incl = {(n, i): induced(A, n, cb.bump(n, i)) for (n, i), A in V.incl.items()}
    Q = TruncatedModule(field, V.box, dims, trans, incl, name)
    return Quotient(Q, proj, comp)


@dataclass
class Submodule:
    """A submodule with its own basis and the inclusion into the ambient."""

    module: TruncatedModule
    inclusion: dict  # n -> Matrix (ambient x sub)
    spaces: dict  # n -> Echelon in ambient coordinates


def submodule(V: TruncatedModule, sub: dict, name: str = "") -> Submodule:
    """A closed family of subspaces as a module in its own right."""
    field = V.field
    spaces = {n: (sub.get(n) or Echelon(field, V.dims[n])) for n in V.shapes()}
    bases = {n: E.basis() for n, E in spaces.items()}
    dims = {n: len(b) for n, b in bases.items()}

    def induced(A: Matrix, src: Shape, dst: Shape) -> Matrix:
        E = spaces[dst]
        cols = [E.coordinates(A.apply(b)) for b in bases[src]]
        return Matrix(dims[dst], dims[src], cols, field)

    trans = {(n, i, j): induced(A, n, n) for (n, i, j), A in V.trans.items()}
    incl = {(n, i): induced(A, n, cb.bump(n, i)) for (n, i), A in V.incl.items()}
    inclusion = {n: Matrix(V.dims[n], dims[n], bases[n], field) for n in V.shapes()}
    return Submodule(TruncatedModule(field, V.box, dims, trans, incl, name), inclusion, spaces)


def image_spaces(maps: dict, target: TruncatedModule) -> dict:
    """Objectwise column spans of a family of matrices into ``target``."""
    return {n: Echelon(target.field, target.dims[n], M.cols) for n, M in maps.items()}


def kernel_spaces(maps: dict, source: TruncatedModule) -> dict:
    out = {}
    for n, M in maps.items():
        out[n] = Echelon(source.field, source.dims[n], M.kernel().cols)
    return out


@dataclass
class Generated:
    """Result of :func:`submodule_generated`."""

    sub: Submodule
    spaces: dict
    generator_profile: dict  # shape -> number of minimal generators there

    @property
    def module(self) -> TruncatedModule:
        return self.sub.module


def submodule_generated(V: TruncatedModule, seeds: Iterable[tuple[Shape, dict]]) -> Generated:
    """The smallest boxed submodule containing the seed vectors."""
    by_shape: dict = {}
    for n, v in seeds:
        n = tuple(n)
        if not V.contains(n):
            raise BoxError(f"seed at {cb.format_shape(n)} outside box {cb.format_shape(V.box)}")
        if isinstance(v, (list, tuple)):
            v = {k: V.field(x) for k, x in enumerate(v) if V.field(x)}
        if any(not 0 <= k < V.dims[n] for k in v):
            raise ValueError(f"seed vector does not live in V at {cb.format_shape(n)}")
        by_shape.setdefault(n, []).append(v)
    spaces = closure(V, by_shape)
    sub = submodule(V, spaces, name=f"<{V.name}>")
    from .homology import h0_dims

    profile = {n: d for n, d in h0_dims(sub.module).items() if d}
    return Generated(sub, spaces, profile)


def direct_sum(V: TruncatedModule, W: TruncatedModule) -> TruncatedModule:
    if V.field != W.field:
        raise ValueError("direct sum over different fields")
    if V.m != W.m:
        raise cb.DimensionError("direct sum of modules with different m")
    box = tuple(min(a, b) for a, b in zip(V.box, W.box))
    V, W = restrict(V, box), restrict(W, box)
    dims = {n: V.dims[n] + W.dims[n] for n in V.shapes()}

    def bd(A, B, rows):
        cols = [dict(c) for c in A.cols] + [{i + A.rows: v for i, v in c.items()} for c in B.cols]
        return Matrix(rows, A.ncols + B.ncols, cols, V.field)

    trans = {k: bd(A, W.trans[k], dims[k[0]]) for k, A in V.trans.items()}
    incl = {k: bd(A, W.incl[k], dims[cb.bump(*k)]) for k, A in V.incl.items()}
    return TruncatedModule(V.field, box, dims, trans, incl, name=f"{V.name}+{W.name}")


def direct_sum_all(mods: Sequence[TruncatedModule]) -> TruncatedModule:
    out = mods[0]
    for W in mods[1:]:
        out = direct_sum(out, W)
    return out


# -- presentations -----------------------------------------------------------

@dataclass
class Relation:
    shape: Shape
    terms: list  # (generator index, Injection, coefficient)


@dataclass
class Presentation:
    """Generators (shape, label) and relations in the free module on them."""

    field: Field
    m: int
    generators: list  # (Shape, label)
    relations: list = dc_field(default_factory=list)
    box: Shape | None = None
    name: str = ""

    def validate(self) -> None:
        for g, _ in self.generators:
            if len(g) != self.m:
                raise cb.DimensionError(f"generator {cb.format_shape(g)} has wrong m")
        for k, rel in enumerate(self.relations):
            if len(rel.shape) != self.m:
                raise cb.DimensionError(f"relation {k} has wrong m")
            for r, f, _ in rel.terms:
                if not 0 <= r < len(self.generators):
                    raise ValueError(f"relation {k}: unknown generator {r}")
                g = self.generators[r][0]
                if f.domain != g or f.codomain != rel.shape:
                    raise ValueError(
                        f"relation {k}: injection {f} is not "
                        f"{cb.format_shape(g)} -> {cb.format_shape(rel.shape)}"
                    )


@dataclass
class Presented:
    """A module built from a presentation, with its free cover."""

    module: TruncatedModule
    free: FreeSum
    relations: dict  # n -> Echelon in free coordinates
    proj: dict


def from_presentation(p: Presentation, box: Shape | None = None) -> TruncatedModule:
    return present(p, box).module


def present(p: Presentation, box: Shape | None = None) -> Presented:
    box = tuple(box if box is not None else p.box)
    p.validate()
    if len(box) != p.m:
        raise cb.DimensionError("box has wrong m")
    F = FreeSum([g for g, _ in p.generators], box, p.field)
    Fm = F.module()
    seeds: dict = {}
    for rel in p.relations:
        if not cb.leq(rel.shape, box):
            continue
        idx = F.index(rel.shape)
        v: dict = {}
        for r, f, c in rel.terms:
            axpy(p.field, v, p.field(c), {idx[(r, f)]: p.field.one()})
        if v:
            seeds.setdefault(rel.shape, []).append(v)
    R = closure(Fm, seeds)
    q = quotient(Fm, R, name=p.name)
    return Presented(q.module, F, R, q.proj)


# -- axiom checks ------------------------------------------------------------

@dataclass
class AxiomReport:
    results: dict  # check name -> None (pass) or first counterexample string

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.results.values())

    def lines(self) -> list[str]:
        return [f"{k}: {'pass' if v is None else 'FAIL at ' + v}" for k, v in self.results.items()]


def random_injection(rng: random.Random, n: Shape, t: Shape) -> Injection:
    return Injection(tuple(tuple(rng.sample(range(1, b + 1), a)) for a, b in zip(n, t)), tuple(t))


def random_presentation(rng: random.Random, field: Field, m: int, box: Shape,
                        max_gens: int = 2, max_rels: int = 3, gen_degree: int = 1,
                        rel_degree: int = 3, max_terms: int = 3) -> Presentation:
    """A seeded random presentation with small generators and relations."""
    gens = []
    for k in range(rng.randint(1, max_gens)):
        g = [0] * m
        for _ in range(rng.randint(0, gen_degree)):
            g[rng.randrange(m)] += 1
        gens.append((tuple(g), f"g{k}"))
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        r, (g, _) = rng.choice(list(enumerate(gens)))
        t = list(g)
        for _ in range(rng.randint(0, rel_degree - sum(g))):
            t[rng.randrange(m)] += 1
        t = tuple(min(a, b) for a, b in zip(t, box))
        terms = []
        for _ in range(rng.randint(1, max_terms)):
            r2, (g2, _) = rng.choice(list(enumerate(gens)))
            if cb.leq(g2, t):
                terms.append((r2, random_injection(rng, g2, t), rng.choice([-2, -1, 1, 1, 2])))
        if terms and cb.leq(g, t):
            rels.append(Relation(t, terms))
    return Presentation(field, m, gens, rels, tuple(box), name="random")


def check_module_axioms(V: TruncatedModule, samples: int = 50, seed: int = 0) -> AxiomReport:
    """Check the defining relations of a lawful module; report first failures."""
    fs = cb.format_shape
    res: dict = {"coxeter": None, "equivariance": None, "cross_direction": None,
                 "same_direction": None, "factorization": None, "functoriality": None}
    m = V.m
    for n in V.shapes():
        d = V.dims[n]
        I = Matrix.identity(d, V.field)
        gens = [(i, j) for i in range(m) for j in range(1, n[i])]
        if res["coxeter"] is None:
            for a in gens:
                A = V.trans[(n,) + a]
                if A.shape != (d, d) or A @ A != I:
                    res["coxeter"] = f"{fs(n)} s{a}^2"
                    break
                for b in gens:
                    if b <= a:
                        continue
                    B = V.trans[(n,) + b]
                    if a[0] == b[0] and b[1] == a[1] + 1:
                        if A @ B @ A != B @ A @ B:
                            res["coxeter"] = f"{fs(n)} braid s{a} s{b}"
                    elif A @ B != B @ A:
                        res["coxeter"] = f"{fs(n)} commute s{a} s{b}"
                if res["coxeter"]:
                    break
        for i in range(m):
            if n[i] >= V.box[i]:
                continue
            up = cb.bump(n, i)
            X = V.incl[(n, i)]
            if X.shape != (V.dims[up], d):
                res["equivariance"] = res["equivariance"] or f"{fs(n)} X{i} has wrong shape"
                continue
            if res["equivariance"] is None:
                for (a, j) in gens:
                    jj = j + 1 if a == i else j
                    if X @ V.trans[(n, a, j)] != V.trans[(up, a, jj)] @ X:
                        res["equivariance"] = f"{fs(n)} X{i} vs s({a},{j})"
                        break
            if res["same_direction"] is None and up[i] < V.box[i]:
                XX = V.incl[(up, i)] @ X
                if V.trans[(cb.bump(up, i), i, 1)] @ XX != XX:
                    res["same_direction"] = f"{fs(n)} direction {i + 1}"
            if res["cross_direction"] is None:
                for j in range(m):
                    if j == i or n[j] >= V.box[j]:
                        continue
                    upj = cb.bump(n, j)
                    if V.incl[(up, j)] @ X != V.incl[(upj, i)] @ V.incl[(n, j)]:
                        res["cross_direction"] = f"{fs(n)} directions {i + 1},{j + 1}"
                        break
    rng = random.Random(seed)
    shapes = V.shapes()
    if m > 1:
        rev = list(reversed(range(m)))
        for _ in range(samples):
            t = rng.choice(shapes)
            n = tuple(rng.randint(0, x) for x in t)
            f = random_injection(rng, n, t)
            if V.evaluate(f) != V.evaluate(f, order=rev):
                res["factorization"] = f"{f} ({fs(n)} -> {fs(t)})"
                break
    for _ in range(samples):
        u = rng.choice(shapes)
        t = tuple(rng.randint(0, x) for x in u)
        n = tuple(rng.randint(0, x) for x in t)
        f = random_injection(rng, n, t)
        g = random_injection(rng, t, u)
        if V.evaluate(cb.compose(g, f)) != V.evaluate(g) @ V.evaluate(f):
            res["functoriality"] = f"{g} o {f}"
            break
    return AxiomReport(res)

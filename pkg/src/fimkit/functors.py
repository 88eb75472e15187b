"""Shift, derivative, kernel and truncation functors on truncated modules."""

from __future__ import annotations

from dataclasses import dataclass

from . import combinat as cb
from .combinat import Shape
from .linalg import Echelon, Matrix
from .module import (
    BoxError,
    TruncatedModule,
    image_spaces,
    kernel_spaces,
    quotient,
    restrict,
    submodule,
)


@dataclass
class FunctorResult:
    """Output module, how much the box shrank, and the natural map ``V -> output``.

    ``natural[n]`` is defined for every ``n`` in the output box.
    """

    output: TruncatedModule
    box_loss: Shape
    natural: dict


def shift(V: TruncatedModule, i: int) -> FunctorResult:
    """Pull back along the self-embedding in direction ``i``.

    ``(Sigma_i V)_n = V_{n + o_i}``; transpositions in factor ``i`` move up
    by one index, and the inclusion in direction ``i`` becomes
    ``s_{i,1} X_{n+o_i,i}``.
    """
    if not 0 <= i < V.m:
        raise IndexError(f"direction {i} out of range")
    if V.box[i] < 1:
        raise BoxError(f"box exhausted in direction {i + 1}")
    box = cb.bump(V.box, i, -1)
    shapes = cb.boxed_shapes(box)
    dims = {n: V.dims[cb.bump(n, i)] for n in shapes}
    trans, incl, natural = {}, {}, {}
    for n in shapes:
        up = cb.bump(n, i)
        natural[n] = V.incl[(n, i)]
        for a in range(V.m):
            for j in range(1, n[a]):
                trans[(n, a, j)] = V.trans[(up, a, j + 1 if a == i else j)]
            if n[a] < box[a]:
                if a == i:
                    incl[(n, a)] = V.trans[(cb.bump(up, i), i, 1)] @ V.incl[(up, i)]
                else:
                    incl[(n, a)] = V.incl[(up, a)]
    out = TruncatedModule(V.field, box, dims, trans, incl, name=f"S{i + 1}({V.name})")
    return FunctorResult(out, cb.unit(V.m, i), natural)


def shift_by(V: TruncatedModule, amounts: Shape) -> FunctorResult:
    """``Sigma_1^{a_1} ... Sigma_m^{a_m} V`` with the composite natural map."""
    amounts = tuple(amounts)
    if len(amounts) != V.m:
        raise cb.DimensionError("shift amount has wrong m")
    if not cb.leq(amounts, V.box):
        raise BoxError(f"shift {cb.format_shape(amounts)} exceeds box {cb.format_shape(V.box)}")
    cur = V
    for i, a in enumerate(amounts):
        for _ in range(a):
            cur = shift(cur, i).output
    natural = {}
    for n in cur.shapes():
        f = cb.standard_chain(n, cb.add(n, amounts))
        natural[n] = V.evaluate(f)
    return FunctorResult(cur, amounts, natural)


@dataclass
class DerivativeKernel:
    kernel: TruncatedModule  # K_i V as a submodule of V (on the shrunk box)
    kernel_spaces: dict
    derivative: TruncatedModule  # D_i V as a quotient of Sigma_i V
    shifted: TruncatedModule
    certificate: dict  # n -> (dim K, dim Sigma V, dim V, dim D)

    @property
    def exact(self) -> bool:
        return all(k + s == v + d for k, s, v, d in self.certificate.values())


def derivative_and_kernel(V: TruncatedModule, i: int) -> DerivativeKernel:
    """Objectwise kernel and cokernel of the natural map ``V -> Sigma_i V``."""
    sh = shift(V, i)
    S = sh.output
    Vr = restrict(V, S.box)
    kspaces = kernel_spaces(sh.natural, Vr)
    K = submodule(Vr, kspaces, name=f"K{i + 1}({V.name})").module
    D = quotient(S, image_spaces(sh.natural, S), name=f"D{i + 1}({V.name})").module
    cert = {n: (K.dims[n], S.dims[n], Vr.dims[n], D.dims[n]) for n in S.shapes()}
    return DerivativeKernel(K, kspaces, D, S, cert)


def kernel_spaces_dir(V: TruncatedModule, i: int) -> dict:
    """``{n: ker X_{n,i}}`` for every ``n`` where the inclusion is stored."""
    out = {}
    for n in V.shapes():
        if n[i] < V.box[i]:
            out[n] = Echelon(V.field, V.dims[n], V.incl[(n, i)].kernel().cols)
    return out


def four_term(V: TruncatedModule) -> dict:
    """``dim kV + dim sV - dim V^m - dim dV`` per shape on the common box."""
    parts = [derivative_and_kernel(V, i) for i in range(V.m) if V.box[i] >= 1]
    if len(parts) < V.m:
        raise BoxError("box exhausted in some direction")
    box = tuple(b - 1 for b in V.box)
    out = {}
    for n in cb.boxed_shapes(box):
        k = sum(p.kernel.dims[n] for p in parts)
        s = sum(p.shifted.dims[n] for p in parts)
        d = sum(p.derivative.dims[n] for p in parts)
        out[n] = k + s - V.m * V.dims[n] - d
    return out


def truncation_and_ideal(V: TruncatedModule, i: int) -> tuple[TruncatedModule, TruncatedModule]:
    """``(tau_i V, J_i V)``: values on the hyperplane ``n_i = 0`` and off it."""
    field = V.field
    spaces = {}
    for n in V.shapes():
        d = V.dims[n]
        spaces[n] = Echelon(field, d, [{k: field.one()} for k in range(d)] if n[i] > 0 else [])
    tau = quotient(V, spaces, name=f"tau{i + 1}({V.name})").module
    J = submodule(V, spaces, name=f"J{i + 1}({V.name})").module
    return tau, J


@dataclass
class Filtration:
    stages: list  # V^0, V^1, ... (each on a box one step smaller)
    stabilized_at: int | None  # first j with V^j -> Sigma V^j injective
    direction: int

    @property
    def exhausted(self) -> bool:
        return self.stabilized_at is None


def iterated_image_filtration(V: TruncatedModule, direction: int = 0, steps: int | None = None) -> Filtration:
    """``V^{j+1}`` = image of the natural map ``V^j -> Sigma V^j``."""
    stages = [V]
    cur = V
    limit = V.box[direction] if steps is None else steps
    for j in range(limit + 1):
        if cur.box[direction] < 1:
            break
        sh = shift(cur, direction)
        kern = any(M.rank() < M.ncols for M in sh.natural.values())
        if not kern:
            return Filtration(stages, j, direction)
        if j == limit:
            break
        img = submodule(sh.output, image_spaces(sh.natural, sh.output),
                        name=f"{V.name}^{j + 1}").module
        stages.append(img)
        cur = img
    return Filtration(stages, None, direction)


def same_module(V: TruncatedModule, W: TruncatedModule) -> bool:
    """Identical boxes, dimensions and generator matrices."""
    return (V.box == W.box and V.dims == W.dims and V.trans == W.trans and V.incl == W.incl)


def sigma_d_isomorphism(V: TruncatedModule, i: int, j: int) -> bool:
    """Check ``Sigma_i D_j V ~ D_j Sigma_i V`` through the explicit map.

    Both sides are quotients of ``V_{n+o_i+o_j}``; the map is the identity
    for ``i != j`` and the action of ``s_{i,1}`` for ``i == j``.  Verifies
    that it carries one subspace onto the other at every shape.
    """
    if V.box[i] < 1 or V.box[j] < 1 or (i == j and V.box[i] < 2):
        raise BoxError("box too small")
    box = cb.bump(V.box, i, -1)
    box = cb.bump(box, j, -1)
    for n in cb.boxed_shapes(box):
        top = cb.bump(cb.bump(n, i), j)
        mid = cb.bump(n, i)
        # Sigma_i D_j V: V_top / pi_{n+o_i, j} V_{n+o_i}
        A = Echelon(V.field, V.dims[top], V.incl[(mid, j)].cols)
        # D_j Sigma_i V: V_top / iota_i(pi_{n,j}) V_{n+o_i}
        if i == j:
            Bmat = V.trans[(top, i, 1)] @ V.incl[(mid, i)]
            g = V.trans[(top, i, 1)]
        else:
            Bmat = V.incl[(mid, j)]
            g = Matrix.identity(V.dims[top], V.field)
        B = Echelon(V.field, V.dims[top], Bmat.cols)
        moved = Echelon(V.field, V.dims[top], [g.apply(b) for b in A.basis()])
        if moved != B:
            return False
    return True

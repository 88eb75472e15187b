"""Exact sparse linear algebra over Q and prime fields.

Vectors are dicts ``{index: scalar}`` without zero entries.  Matrices store
their columns as such dicts.  Rationals are ``gmpy2.mpq``; residues mod
``p`` are plain ints in ``range(p)``.  Nothing here ever rounds.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq


class NoSolution(ArithmeticError):
    """Raised by :func:`solve` for an inconsistent system."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """``Field(0)`` is Q, ``Field(p)`` is F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "Field":
        s = str(text).strip()
        if s in ("Q", "QQ", "0"):
            return cls(0)
        for prefix in ("Fp:", "F", "GF"):
            if s.startswith(prefix) and s[len(prefix):].isdigit():
                return cls(int(s[len(prefix):]))
        raise ValueError(f"unknown field {text!r}; use Q or Fp:p")

    @property
    def name(self) -> str:
        return f"Fp:{self.p}" if self.p else "Q"

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> object:
        if self.p:
            if isinstance(x, str):
                x = mpq(x)
            if not isinstance(x, int):
                x = mpq(x)
                return int(x.numerator) * pow(int(x.denominator), self.p - 2, self.p) % self.p
            return x % self.p
        return mpq(x)

    def inv(self, x):
        if self.p:
            if x % self.p == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(int(x), self.p - 2, self.p)
        return 1 / mpq(x)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def __str__(self) -> str:
        return self.name


Q = Field(0)


def fmt_scalar(x) -> str:
    return str(x)


# -- vectors -----------------------------------------------------------------

def axpy(field: Field, y: dict, a, x: dict) -> None:
    """``y += a * x`` in place."""
    p = field.p
    if p:
        for k, v in x.items():
            w = (y.get(k, 0) + a * v) % p
            if w:
                y[k] = w
            else:
                y.pop(k, None)
    else:
        for k, v in x.items():
            w = y.get(k, 0) + a * v
            if w:
                y[k] = w
            else:
                y.pop(k, None)


def scale(field: Field, a, x: dict) -> dict:
    if not a:
        return {}
    if field.p:
        return {k: v * a % field.p for k, v in x.items()}
    return {k: v * a for k, v in x.items()}


def dense(vec: dict, n: int, field: Field) -> list:
    z = field.zero()
    return [vec.get(i, z) for i in range(n)]


def sparse(values: Iterable, field: Field) -> dict:
    out = {}
    for i, v in enumerate(values):
        v = field(v)
        if v:
            out[i] = v
    return out


# -- matrices ----------------------------------------------------------------

class Matrix:
    """A ``rows x cols`` matrix with sparse columns."""

    __slots__ = ("rows", "ncols", "cols", "field")

    def __init__(self, rows: int, cols: int, columns: Sequence[dict] | None, field: Field):
        self.rows = rows
        self.ncols = cols
        self.field = field
        self.cols = [dict(c) for c in columns] if columns is not None else [{} for _ in range(cols)]
        if len(self.cols) != cols:
            raise ValueError("column count mismatch")

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.ncols

    @classmethod
    def zero(cls, rows: int, cols: int, field: Field) -> "Matrix":
        return cls(rows, cols, None, field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "Matrix":
        one = field.one()
        return cls(n, n, [{j: one} for j in range(n)], field)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field, ncols: int | None = None) -> "Matrix":
        nr = len(rows)
        nc = len(rows[0]) if rows else (ncols or 0)
        cols = [{} for _ in range(nc)]
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                v = field(v)
                if v:
                    cols[j][i] = v
        return cls(nr, nc, cols, field)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict], field: Field) -> "Matrix":
        return cls(rows, len(columns), columns, field)

    def to_rows(self) -> list[list]:
        z = self.field.zero()
        out = [[z] * self.ncols for _ in range(self.rows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, self.field.zero())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(c.items())) for c in self.cols)))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.ncols}, {self.field.name}, {self.to_rows()})"

    def apply(self, vec: dict) -> dict:
        """Matrix-vector product on a sparse vector."""
        out: dict = {}
        cols = self.cols
        for j, a in vec.items():
            axpy(self.field, out, a, cols[j])
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.rows, other.ncols, [self.apply(c) for c in other.cols], self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        cols = [dict(c) for c in self.cols]
        one = self.field.one()
        for c, d in zip(cols, other.cols):
            axpy(self.field, c, one, d)
        return Matrix(self.rows, self.ncols, cols, self.field)

    def __neg__(self) -> "Matrix":
        m1 = self.field(-1)
        return Matrix(self.rows, self.ncols, [scale(self.field, m1, c) for c in self.cols], self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def transpose(self) -> "Matrix":
        cols = [{} for _ in range(self.rows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return Matrix(self.ncols, self.rows, cols, self.field)

    T = property(transpose)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def is_identity(self) -> bool:
        return self.rows == self.ncols and all(
            c == {j: 1} for j, c in enumerate(self.cols)
        )

    def trace(self):
        t = self.field.zero()
        for j, c in enumerate(self.cols):
            t = t + c.get(j, 0)
        return self.field(t)

    def row_vectors(self) -> list[dict]:
        return self.transpose().cols

    def rank(self) -> int:
        return rank(self)

    def kernel(self) -> "Matrix":
        return kernel_basis(self)


def block_diag(blocks: Sequence[Matrix], field: Field) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = []
    off = 0
    for b in blocks:
        for c in b.cols:
            cols.append({i + off: v for i, v in c.items()})
        off += b.rows
    return Matrix(rows, len(cols), cols, field)


def hstack(mats: Sequence[Matrix], rows: int, field: Field) -> Matrix:
    cols = [c for m in mats for c in m.cols]
    return Matrix(rows, len(cols), cols, field)


# -- echelon subspaces -------------------------------------------------------

class Echelon:
    """A subspace of ``k^dim`` kept as a pivot-indexed echelon basis.

    Every basis vector is normalised to 1 at its pivot, which is its
    smallest index.  ``reduce`` returns canonical residues: the residue of
    ``v`` has no pivot indices in its support, so it depends only on the
    coset ``v + U``.
    """

    __slots__ = ("field", "dim", "pivots")

    def __init__(self, field: Field, dim: int, vectors: Iterable[dict] = ()):
        self.field = field
        self.dim = dim
        self.pivots: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def copy(self) -> "Echelon":
        e = Echelon(self.field, self.dim)
        e.pivots = dict(self.pivots)
        return e

    def reduce(self, vec: dict, coeffs: dict | None = None) -> dict:
        """Full reduction of ``vec`` modulo the subspace.

        If ``coeffs`` is given, it accumulates ``{pivot: c}`` with
        ``vec = residue + sum c * basis[pivot]``.
        """
        v = dict(vec)
        piv = self.pivots
        if not piv or not v:
            return v
        p = self.field.p
        heap = [k for k in v if k in piv]
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen:
                continue
            seen.add(k)
            c = v.get(k)
            if not c:
                continue
            b = piv[k]
            if coeffs is not None:
                coeffs[k] = c
            for kk, bv in b.items():
                w = v.get(kk, 0) - c * bv
                if p:
                    w %= p
                if w:
                    v[kk] = w
                    if kk in piv and kk not in seen:
                        heapq.heappush(heap, kk)
                else:
                    v.pop(kk, None)
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; returns False when it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        k = min(r)
        inv = self.field.inv(r[k])
        self.pivots[k] = scale(self.field, inv, r)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def __contains__(self, vec: dict) -> bool:
        return self.contains(vec)

    def basis(self) -> list[dict]:
        """Basis vectors ordered by pivot."""
        return [self.pivots[k] for k in sorted(self.pivots)]

    def coordinates(self, vec: dict) -> dict:
        """Coordinates of a member of the subspace w.r.t. :meth:`basis`."""
        coeffs: dict = {}
        r = self.reduce(vec, coeffs)
        if r:
            raise ValueError("vector not in subspace")
        order = {k: idx for idx, k in enumerate(sorted(self.pivots))}
        return {order[k]: c for k, c in coeffs.items() if c}

    def complement_indices(self) -> list[int]:
        return [i for i in range(self.dim) if i not in self.pivots]

    def issubset(self, other: "Echelon") -> bool:
        return all(other.contains(b) for b in self.pivots.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Echelon):
            return NotImplemented
        return self.dim == other.dim and self.rank == other.rank and self.issubset(other)

    def matrix(self) -> Matrix:
        """Basis as matrix columns."""
        return Matrix(self.dim, self.rank, self.basis(), self.field)


def span(field: Field, dim: int, vectors: Iterable[dict]) -> Echelon:
    return Echelon(field, dim, vectors)


# -- operations --------------------------------------------------------------

def rank(A: Matrix) -> int:
    return Echelon(A.field, A.rows, A.cols).rank


def kernel_basis(A: Matrix) -> Matrix:
    """Columns spanning the null space, one per non-pivot column of ``A``.

    Column elimination: each input column is reduced against earlier ones
    while the combination used is tracked.
    """
    field = A.field
    p = field.p
    pivots: dict[int, tuple[dict, dict]] = {}
    kernel = []
    one = field.one()
    for j, col in enumerate(A.cols):
        v = dict(col)
        t = {j: one}
        while v:
            r = min(v)
            if r not in pivots:
                inv = field.inv(v[r])
                pivots[r] = (scale(field, inv, v), scale(field, inv, t))
                break
            pv, pt = pivots[r]
            c = v[r]
            axpy(field, v, -c if not p else (p - c) % p, pv)
            axpy(field, t, -c if not p else (p - c) % p, pt)
        else:
            kernel.append(t)
    return Matrix(A.ncols, len(kernel), kernel, field)


def solve(A: Matrix, b: dict | Sequence) -> dict:
    """A sparse ``x`` with ``A x = b``; raises :class:`NoSolution`."""
    field = A.field
    if not isinstance(b, dict):
        if len(b) != A.rows:
            raise ValueError("dimension mismatch")
        b = sparse(b, field)
    p = field.p
    pivots: dict[int, tuple[dict, dict]] = {}
    one = field.one()
    for j, col in enumerate(A.cols):
        v = dict(col)
        t = {j: one}
        while v:
            r = min(v)
            if r not in pivots:
                inv = field.inv(v[r])
                pivots[r] = (scale(field, inv, v), scale(field, inv, t))
                break
            pv, pt = pivots[r]
            c = v[r]
            neg = -c if not p else (p - c) % p
            axpy(field, v, neg, pv)
            axpy(field, t, neg, pt)
    v = dict(b)
    x: dict = {}
    while v:
        r = min(v)
        if r not in pivots:
            raise NoSolution("inconsistent system")
        pv, pt = pivots[r]
        c = v[r]
        neg = -c if not p else (p - c) % p
        axpy(field, v, neg, pv)
        axpy(field, x, c, pt)
    return x


def quotient_structure(S: Matrix, d: int | None = None) -> tuple[Matrix, int]:
    """Projection ``k^d -> k^d / span(S)`` in complement coordinates.

    Returns ``(P, q)`` where ``P`` is ``q x d`` of full row rank and
    ``P S = 0``.  The quotient basis is the set of non-pivot unit vectors.
    """
    d = S.rows if d is None else d
    E = Echelon(S.field, d, S.cols)
    return projection(E)


def projection(E: Echelon) -> tuple[Matrix, int]:
    comp = E.complement_indices()
    pos = {i: k for k, i in enumerate(comp)}
    one = E.field.one()
    cols = []
    for j in range(E.dim):
        if j in pos:
            cols.append({pos[j]: one})
        else:
            r = E.reduce({j: one})
            cols.append({pos[i]: v for i, v in r.items()})
    return Matrix(len(comp), E.dim, cols, E.field), len(comp)


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    Dense and row-pivoting; kept independent of the sparse routines above
    so the two can check each other.
    """
    M = [list(map(int, r)) for r in rows]
    if not M:
        return 0
    nr, nc = len(M), len(M[0])
    prev = 1
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                M[i][j] = (M[r][c] * M[i][j] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == nr:
            break
    return r

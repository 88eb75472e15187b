"""Symmetric-group characters, decompositions, stability checks and Hilbert fits."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, factorial, gcd, lcm, prod

from . import combinat as cb
from .combinat import Partition, Shape
from .linalg import Echelon, Field, Matrix
from .module import BoxError, TruncatedModule, orbit_close


# -- characters -----------------------------------------------------------------

def _beta(lam: Partition, length: int) -> tuple[int, ...]:
    lam = tuple(lam) + (0,) * (length - len(lam))
    return tuple(lam[i] + length - 1 - i for i in range(length))


def _from_beta(beads) -> Partition:
    beads = sorted(beads, reverse=True)
    length = len(beads)
    lam = tuple(b - (length - 1 - i) for i, b in enumerate(beads))
    return tuple(x for x in lam if x)


@lru_cache(maxsize=None)
def _mn(lam: Partition, mu: Partition) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beads = _beta(lam, len(lam) + r)
    occupied = set(beads)
    total = 0
    for b in beads:
        if b - r < 0 or (b - r) in occupied:
            continue
        height = sum(1 for c in beads if b - r < c < b)
        moved = (occupied - {b}) | {b - r}
        total += (-1) ** height * _mn(_from_beta(moved), rest)
    return total


def irreducible_character(lam: Partition, mu: Partition) -> int:
    """``chi_lam(mu)`` by the Murnaghan-Nakayama rule."""
    lam, mu = tuple(lam), tuple(sorted(mu, reverse=True))
    if sum(lam) != sum(mu):
        raise ValueError(f"size mismatch: |{lam}| != |{mu}|")
    return _mn(lam, mu)


def hook_dimension(lam: Partition) -> int:
    """Number of standard Young tableaux of shape ``lam``."""
    lam = tuple(lam)
    conj = [sum(1 for x in lam if x > j) for j in range(lam[0])] if lam else []
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return factorial(sum(lam)) // hooks


@dataclass(frozen=True)
class CharacterTable:
    k: int
    partitions: tuple  # irreducible labels, increasing lex
    classes: tuple  # cycle types, same order
    class_sizes: tuple
    values: dict  # (lam, mu) -> int

    def row(self, lam: Partition) -> list[int]:
        return [self.values[(lam, mu)] for mu in self.classes]

    def inner(self, f: dict, g: dict) -> Fraction:
        """Class-size inner product of two class functions (real valued)."""
        s = sum(size * f[mu] * g[mu] for mu, size in zip(self.classes, self.class_sizes))
        return Fraction(s, factorial(self.k))


_tables: dict = {}
_tables_lock = threading.Lock()


def character_table(k: int) -> CharacterTable:
    table = _tables.get(k)
    if table is None:
        with _tables_lock:
            table = _tables.get(k)
            if table is None:
                parts = tuple(cb.partitions(k))
                data = cb.conjugacy_data(k)
                values = {(lam, mu): irreducible_character(lam, mu) for lam in parts for mu, _ in data}
                table = CharacterTable(k, parts, tuple(mu for mu, _ in data),
                                       tuple(s for _, s in data), values)
                _tables[k] = table
    return table


# -- seminormal form ----------------------------------------------------------------

def standard_tableaux(lam: Partition) -> list[tuple]:
    """Standard tableaux as tuples ``pos[k] = (row, col)`` for entries 1..|lam|.

    Ordered by the row sequence of the entries, lexicographically.
    """
    lam = tuple(lam)
    n = sum(lam)
    out = []

    def rec(filled, pos):
        if len(pos) == n:
            out.append(tuple(pos))
            return
        for r in range(len(lam)):
            c = filled[r]
            if c < lam[r] and (r == 0 or filled[r - 1] > c):
                filled[r] += 1
                pos.append((r, c))
                rec(filled, pos)
                pos.pop()
                filled[r] -= 1

    rec([0] * len(lam), [])
    return out


def seminormal_matrices(lam: Partition, field: Field) -> tuple[dict, int]:
    """Young's seminormal matrices ``{j: s_j}`` for ``s_j = (j, j+1)``.

    On a pair ``T, T' = s_j T`` with ``j`` in an earlier row than ``j+1``
    in ``T`` and axial distance ``r = c_T(j+1) - c_T(j)``, the action is
    ``[[1/r, 1 - 1/r^2], [1, -1/r]]``.  Needs ``char = 0`` or ``p > |lam|``.
    """
    lam = tuple(lam)
    k = sum(lam)
    if field.p and field.p <= k:
        raise ValueError(f"seminormal form needs p > {k}")
    tabs = standard_tableaux(lam)
    index = {t: a for a, t in enumerate(tabs)}
    d = len(tabs)
    mats = {}
    for j in range(1, k):
        cols = []
        for T in tabs:
            (r1, c1), (r2, c2) = T[j - 1], T[j]
            r = (c2 - r2) - (c1 - r1)
            diag = field(Fraction(1, r))
            col = {index[T]: diag}
            if r1 != r2 and c1 != c2:
                swapped = list(T)
                swapped[j - 1], swapped[j] = swapped[j], swapped[j - 1]
                other = index[tuple(swapped)]
                if r1 < r2:
                    col[other] = field.one()
                else:
                    col[other] = field(1 - Fraction(1, r * r))
            cols.append(col)
        mats[j] = Matrix(d, d, cols, field)
    return mats, d


# -- decomposition --------------------------------------------------------------

def class_representatives(n: Shape):
    """Multi cycle types with representatives and sizes, in lex order."""
    for mus in itertools.product(*(cb.partitions(k) for k in n)):
        sigma = cb.Injection(tuple(cb.cycle_representative(mu) for mu in mus), tuple(n))
        yield mus, sigma, prod(cb.class_size(mu) for mu in mus)


def module_character(V: TruncatedModule, n: Shape) -> dict:
    """``{multi cycle type: trace}`` of ``S_n`` on ``V_n``."""
    n = tuple(n)
    one = V.field.one()
    out = {}
    for mus, sigma, _ in class_representatives(n):
        tr = V.field.zero()
        for k in range(V.dims[n]):
            tr += V.apply_permutation(n, sigma, {k: one}).get(k, 0)
        out[mus] = tr
    return out


def decompose(V: TruncatedModule, n: Shape) -> dict:
    """Irreducible multiplicities ``{multipartition: c}`` of ``V_n`` (char 0)."""
    if V.field.p:
        raise NotImplementedError("decomposition needs characteristic 0")
    n = tuple(n)
    if not V.contains(n):
        raise BoxError(f"{cb.format_shape(n)} outside box")
    chi = module_character(V, n)
    order = prod(factorial(k) for k in n)
    tables = [character_table(k) for k in n]
    out = {}
    for lams in itertools.product(*(t.partitions for t in tables)):
        s = 0
        for mus, _, size in class_representatives(n):
            s += size * chi[mus] * prod(t.values[(lam, mu)] for t, lam, mu in zip(tables, lams, mus))
        c = Fraction(int(s.numerator), int(s.denominator) * order)
        if c.denominator != 1 or c < 0:
            raise ArithmeticError(f"non-integral multiplicity {c} for {cb.format_multipartition(lams)}")
        if c:
            out[lams] = int(c)
    return out


def irreducible_dim(lams) -> int:
    return prod(hook_dimension(lam) for lam in lams)


def stripped(mult: dict) -> dict:
    """Re-key a multiplicity map by the stable labels (first rows dropped)."""
    return {tuple(cb.strip_partition(lam) for lam in lams): c for lams, c in mult.items()}


# -- representation stability --------------------------------------------------------

@dataclass
class StepCheck:
    n: Shape
    i: int
    injective: bool
    generates: bool
    multiplicities_match: bool

    @property
    def ok(self) -> bool:
        return self.injective and self.generates and self.multiplicities_match


@dataclass
class StabilityVerdict:
    threshold: Shape
    gd: int
    N: list
    steps: list
    stable: dict  # stable label -> multiplicity at the top of the box
    onsets: dict  # stable label -> onset shape
    empirical_onset: int | None  # smallest uniform c from which every step passes
    multiplicities: dict = dc_field(default_factory=dict)

    def in_range(self) -> list:
        return [s for s in self.steps if cb.leq(self.threshold, s.n)]

    @property
    def verdict(self) -> bool | None:
        rng = self.in_range()
        if not rng:
            return None
        return all(s.ok for s in rng)

    def bullet(self, name: str) -> bool | None:
        rng = self.in_range()
        if not rng:
            return None
        return all(getattr(s, name) for s in rng)


def stability_report(V: TruncatedModule, N: list | None = None) -> StabilityVerdict:
    """Injectivity, surjective generation and padded multiplicity constancy."""
    from .homology import generating_degree, nagpal_complex

    if V.field.p:
        raise NotImplementedError("representation stability needs characteristic 0")
    gd = generating_degree(V)
    if N is None:
        N = nagpal_complex(V).N
    threshold = tuple(max(2 * gd, N[i] + 1, 0) for i in range(V.m))
    mult = {n: stripped(decompose(V, n)) for n in V.shapes()}
    steps = []
    for n in V.shapes():
        for i in range(V.m):
            if n[i] >= V.box[i]:
                continue
            t = cb.bump(n, i)
            X = V.incl[(n, i)]
            inj = X.rank() == X.ncols
            E = Echelon(V.field, V.dims[t])
            queue = [c for c in X.cols if E.add(c)]
            orbit_close(E, V.transpositions(t), queue)
            gen = E.rank == V.dims[t]
            steps.append(StepCheck(n, i, inj, gen, mult[n] == mult[t]))
    top = V.box
    stable = mult[top]
    onsets = {}
    order = sorted(V.shapes(), key=lambda s: (sum(s), s))
    for label in sorted(set(itertools.chain.from_iterable(mult.values())) | set(stable)):
        target = stable.get(label, 0)
        for n in order:
            if all(mult[u].get(label, 0) == target for u in V.shapes() if cb.leq(n, u)):
                onsets[label] = n
                break
    onset = None
    for c in range(max(V.box, default=0) + 1):
        floor = (c,) * V.m
        sel = [s for s in steps if cb.leq(floor, s.n)]
        if sel and all(s.ok for s in sel):
            onset = c
            break
    return StabilityVerdict(threshold, gd, list(N), steps, stable, onsets, onset, mult)


# -- Hilbert polynomial fit ---------------------------------------------------------

Poly = tuple  # ascending Fraction coefficients


def _trim(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_eval(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for a, x in enumerate(p):
        for b, y in enumerate(q):
            out[a + b] += x * y
    return _trim(out)


def poly_degree(p: Poly) -> int:
    return len(_trim(p)) - 1


def lagrange(points: list[tuple[int, Fraction]]) -> Poly:
    """Interpolating polynomial through ``points`` with exact coefficients."""
    out: Poly = ()
    for a, (xa, ya) in enumerate(points):
        basis: Poly = (Fraction(1),)
        denom = Fraction(1)
        for b, (xb, _) in enumerate(points):
            if a != b:
                basis = poly_mul(basis, (Fraction(-xb), Fraction(1)))
                denom *= xa - xb
        term = tuple(c * Fraction(ya) / denom for c in basis)
        width = max(len(out), len(term))
        out = _trim(tuple((out[k] if k < len(out) else 0) + (term[k] if k < len(term) else 0)
                          for k in range(width)))
    return out


def binomial_poly(l: int) -> Poly:
    """``C(x, l)`` as a polynomial in ``x``."""
    p: Poly = (Fraction(1),)
    for j in range(l):
        p = poly_mul(p, (Fraction(-j, j + 1), Fraction(1, j + 1)))
    return p


def binomial_content(p: Poly) -> Fraction:
    """Signed content of ``p`` in the basis ``C(x, k)``.

    Dividing by it leaves coprime integer coordinates with a positive top one.
    """
    p = _trim(p)
    if not p:
        return Fraction(1)
    d = len(p) - 1
    vals = [poly_eval(p, x) for x in range(d + 1)]
    coords = []
    for k in range(d + 1):
        coords.append(sum((-1) ** (k - j) * comb(k, j) * vals[j] for j in range(k + 1)))
    num = reduce(gcd, (c.numerator for c in coords))
    den = reduce(lcm, (c.denominator for c in coords))
    c = Fraction(num, den)
    return -c if coords[-1] < 0 else c


def format_poly(p: Poly, var: str = "x") -> str:
    p = _trim(p)
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        coef = str(mag) if (mag != 1 or not mono) else ""
        body = coef + ("*" if coef and mono else "") + mono
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    head_sign, head = terms[0]
    s = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


@dataclass
class HilbertFit:
    polys: list  # one Poly per direction
    grid_start: Shape
    region: list  # shapes where the product was checked
    residuals: dict  # shape -> dim - prod P_i(n_i), nonzero entries only
    gd: int
    status: str  # "ok", "non-factorizable", "box too small"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def degrees_ok(self) -> bool:
        return all(poly_degree(p) <= max(self.gd, 0) for p in self.polys)

    def product_at(self, n: Shape) -> Fraction:
        return prod((poly_eval(p, x) for p, x in zip(self.polys, n)), start=Fraction(1))

    def matches_binomial(self, l: Shape, dim_w: int) -> bool:
        """Each ``P_i`` is a constant times ``C(x, l_i)``, constants multiplying to ``dim W``."""
        consts = []
        for p, li in zip(self.polys, l):
            b = binomial_poly(li)
            if len(_trim(p)) != len(b):
                return False
            c = p[-1] / b[-1]
            if _trim(tuple(c * x for x in b)) != _trim(p):
                return False
            consts.append(c)
        return prod(consts, start=Fraction(1)) == dim_w


def hilbert_fit(V: TruncatedModule, N: list | None = None, gd: int | None = None) -> HilbertFit:
    """Fit ``dim V_n = prod_i P_i(n_i)`` on the stable grid.

    ``P_1`` is read off the axis line through the grid origin ``g``;
    ``P_i`` for ``i >= 2`` is the axis line divided by ``dim V_g``.  Only the
    product is canonical, so each ``P_i`` with ``i >= 2`` is then rescaled to
    primitive integer coordinates in the ``C(x, k)`` basis and ``P_1`` takes
    the constants.
    """
    from .homology import generating_degree, nagpal_complex

    if gd is None:
        gd = generating_degree(V)
    if gd < 0:
        return HilbertFit([() for _ in range(V.m)], (0,) * V.m, list(V.shapes()),
                          {n: V.dims[n] for n in V.shapes() if V.dims[n]}, gd,
                          "ok" if V.is_zero() else "non-factorizable")
    if N is None:
        N = nagpal_complex(V).N
    g = tuple(max(gd, N[i] + 1, 0) for i in range(V.m))
    if any(g[i] + gd > V.box[i] for i in range(V.m)):
        return HilbertFit([], g, [], {}, gd, "box too small")
    c = V.dims[g]
    polys = []
    for i in range(V.m):
        pts = []
        for x in range(g[i], g[i] + gd + 1):
            val = Fraction(V.dims[cb.bump(g, i, x - g[i])])
            pts.append((x, val if i == 0 or c == 0 else val / c))
        polys.append(lagrange(pts))
    for i in range(1, V.m):
        if polys[i] and polys[0]:
            c = binomial_content(polys[i])
            polys[i] = tuple(x / c for x in polys[i])
            polys[0] = tuple(x * c for x in polys[0])
    region = [n for n in V.shapes() if cb.leq(g, n)]
    fit = HilbertFit(polys, g, region, {}, gd, "ok")
    for n in region:
        r = V.dims[n] - fit.product_at(n)
        if r:
            fit.residuals[n] = r
    if fit.residuals or (c == 0 and any(V.dims[n] for n in region)):
        fit.status = "non-factorizable"
    return fit

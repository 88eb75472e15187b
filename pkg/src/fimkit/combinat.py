"""Combinatorics of the category FI^m.

Objects are shapes: tuples ``(n_1, ..., n_m)`` of non-negative integers,
standing for the tuple of sets ``([n_1], ..., [n_m])``.  Morphisms are
:class:`Injection` values, one injective image list per factor, with
1-based points.  Direction indices in the Python API are 0-based.
"""

from __future__ import annotations

import itertools
import re
from math import factorial, prod
from typing import Iterator, NamedTuple, Sequence

Shape = tuple  # tuple[int, ...]
Partition = tuple  # weakly decreasing positive ints


class DimensionError(ValueError):
    """Shapes of different lengths were combined."""


class PaddingError(ValueError):
    """A padded partition was requested below its valid range."""


# -- shapes ------------------------------------------------------------------

def degree(n: Shape) -> int:
    return sum(n)


def leq(n: Shape, t: Shape) -> bool:
    _same_m(n, t)
    return all(a <= b for a, b in zip(n, t))


def unit(m: int, i: int) -> Shape:
    return tuple(1 if j == i else 0 for j in range(m))


def add(n: Shape, t: Shape) -> Shape:
    _same_m(n, t)
    return tuple(a + b for a, b in zip(n, t))


def sub(n: Shape, t: Shape) -> Shape:
    _same_m(n, t)
    return tuple(a - b for a, b in zip(n, t))


def bump(n: Shape, i: int, k: int = 1) -> Shape:
    """``n + k * o_i``."""
    return n[:i] + (n[i] + k,) + n[i + 1:]


def boxed_shapes(box: Shape) -> list[Shape]:
    """All shapes below ``box``, row-major (last coordinate fastest)."""
    return list(itertools.product(*(range(b + 1) for b in box)))


def shapes_by_degree(box: Shape) -> list[Shape]:
    """All shapes below ``box`` sorted by degree, then row-major."""
    return sorted(boxed_shapes(box), key=lambda n: (sum(n), n))


def format_shape(n: Shape) -> str:
    return "(" + ",".join(str(x) for x in n) + ")"


def parse_shape(text) -> Shape:
    if isinstance(text, (list, tuple)):
        vals = list(text)
    else:
        s = str(text).strip()
        if not re.fullmatch(r"\(?\s*\d*(\s*,\s*\d+)*\s*,?\s*\)?", s):
            raise ValueError(f"bad shape {text!r}")
        vals = [x for x in s.strip("()").split(",") if x.strip()]
    try:
        out = tuple(int(x) for x in vals)
    except (TypeError, ValueError):
        raise ValueError(f"bad shape {text!r}") from None
    if not out or any(x < 0 for x in out):
        raise ValueError(f"bad shape {text!r}")
    return out


def _same_m(n: Shape, t: Shape) -> None:
    if len(n) != len(t):
        raise DimensionError(f"shapes {n} and {t} have different m")


# -- injections --------------------------------------------------------------

class Injection(NamedTuple):
    """A morphism ``domain -> codomain`` of FI^m.

    ``maps[i]`` lists the images of ``1..n_i`` inside ``[t_i]``.
    """

    maps: tuple
    codomain: Shape

    @property
    def domain(self) -> Shape:
        return tuple(len(f) for f in self.maps)

    @property
    def m(self) -> int:
        return len(self.codomain)

    @property
    def degree(self) -> int:
        return degree(self.codomain) - degree(self.domain)

    def __call__(self, i: int, x: int) -> int:
        return self.maps[i][x - 1]

    def __str__(self) -> str:
        return format_injection(self)


def make_injection(maps: Sequence[Sequence[int]], codomain: Shape) -> Injection:
    maps = tuple(tuple(int(x) for x in f) for f in maps)
    codomain = tuple(codomain)
    if len(maps) != len(codomain):
        raise DimensionError("injection and codomain have different m")
    for f, t in zip(maps, codomain):
        if len(set(f)) != len(f) or any(not 1 <= x <= t for x in f):
            raise ValueError(f"{list(f)} is not an injection into [{t}]")
    return Injection(maps, codomain)


def identity(n: Shape) -> Injection:
    return Injection(tuple(tuple(range(1, k + 1)) for k in n), tuple(n))


def pi(n: Shape, i: int) -> Injection:
    """The inclusion ``n -> n + o_i`` shifting factor ``i`` up by one."""
    maps = tuple(
        tuple(range(2, k + 2)) if j == i else tuple(range(1, k + 1))
        for j, k in enumerate(n)
    )
    return Injection(maps, bump(n, i))


def standard_chain(n: Shape, t: Shape) -> Injection:
    """The composite of pi-inclusions ``n -> t``: ``x -> x + (t_i - n_i)``."""
    return Injection(
        tuple(tuple(range(b - a + 1, b + 1)) for a, b in zip(n, t)), tuple(t)
    )


def count_injections(n: Shape, t: Shape) -> int:
    _same_m(n, t)
    if not leq(n, t):
        return 0
    return prod(factorial(b) // factorial(b - a) for a, b in zip(n, t))


def enumerate_injections(n: Shape, t: Shape) -> list[Injection]:
    """All of ``C(n, t)``, lexicographic on the concatenated image lists."""
    _same_m(n, t)
    if not leq(n, t):
        return []
    t = tuple(t)
    factors = [itertools.permutations(range(1, b + 1), a) for a, b in zip(n, t)]
    return [Injection(maps, t) for maps in itertools.product(*factors)]


def compose(g: Injection, f: Injection) -> Injection:
    """``g o f``."""
    if f.codomain != g.domain:
        raise DimensionError(
            f"cannot compose {format_shape(g.domain)} <- {format_shape(f.codomain)}"
        )
    return Injection(
        tuple(tuple(gi[x - 1] for x in fi) for gi, fi in zip(g.maps, f.maps)),
        g.codomain,
    )


def self_embed(i: int, f: Injection) -> Injection:
    """The degree-one self-embedding functor in direction ``i`` on a morphism.

    Factor ``i`` becomes ``1 -> 1`` and ``x -> f_i(x - 1) + 1``.
    """
    if not 0 <= i < f.m:
        raise IndexError(f"direction {i} out of range for m={f.m}")
    maps = list(f.maps)
    maps[i] = (1,) + tuple(x + 1 for x in f.maps[i])
    return Injection(tuple(maps), bump(f.codomain, i))


def canonical_factorization(f: Injection) -> tuple[Injection, Shape]:
    """Split ``f = sigma o rho`` with ``rho`` the standard chain.

    ``sigma`` is the permutation of the codomain agreeing with ``f`` on the
    shifted points and mapping ``1..k_i`` increasingly onto the complement
    of the image.  Returns ``(sigma, k)`` with ``k = t - n``.
    """
    t = f.codomain
    perms = []
    for fi, ti in zip(f.maps, t):
        k = ti - len(fi)
        used = set(fi)
        perms.append(tuple(x for x in range(1, ti + 1) if x not in used) + fi)
        assert len(perms[-1]) == ti and k >= 0
    return Injection(tuple(perms), t), sub(t, f.domain)


def inverse(p: Injection) -> Injection:
    maps = []
    for f in p.maps:
        inv = [0] * len(f)
        for x, y in enumerate(f, 1):
            inv[y - 1] = x
        maps.append(tuple(inv))
    return Injection(tuple(maps), p.codomain)


def multi_permutations(n: Shape) -> Iterator[Injection]:
    """All of ``S_n``; order ``prod n_i!``."""
    return iter(enumerate_injections(n, n))


def permutation_word(p: Sequence[int]) -> list[int]:
    """Adjacent-transposition word of a permutation in one-line notation.

    Returns ``[w_1, ..., w_L]`` with ``p = s_{w_1} o s_{w_2} o ... o s_{w_L}``
    where ``s_j`` swaps ``j`` and ``j + 1``; so a representation evaluates
    ``p`` as the matrix product ``A(s_{w_1}) A(s_{w_2}) ... A(s_{w_L})``.
    """
    cur = list(p)
    swaps = []
    changed = True
    while changed:
        changed = False
        for j in range(len(cur) - 1):
            if cur[j] > cur[j + 1]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                swaps.append(j + 1)
                changed = True
    swaps.reverse()
    return swaps


def word_to_permutation(word: Sequence[int], k: int) -> tuple[int, ...]:
    """Inverse of :func:`permutation_word` (one-line notation of the product)."""
    img = list(range(1, k + 1))
    # compose right-to-left: x -> s_{w_1}(s_{w_2}(... s_{w_L}(x)))
    for j in reversed(word):
        img = [j + 1 if y == j else j if y == j + 1 else y for y in img]
    return tuple(img)


def format_injection(f: Injection) -> str:
    return "[" + ",".join("[" + ",".join(map(str, fi)) + "]" for fi in f.maps) + "]"


def parse_injection(text, domain: Shape | None = None, codomain: Shape | None = None) -> Injection:
    """Parse ``[[images of f_1],[images of f_2],...]`` (1-based entries)."""
    if isinstance(text, str):
        s = text.strip()
        if not re.fullmatch(r"\[\s*(\[\s*(\d+\s*(,\s*\d+\s*)*)?\]\s*,?\s*)*\]", s):
            raise ValueError(f"malformed injection {text!r}")
        maps = [
            [int(x) for x in grp.split(",") if x.strip()]
            for grp in re.findall(r"\[([^\[\]]*)\]", s)
        ]
    elif isinstance(text, (list, tuple)) and all(isinstance(f, (list, tuple)) for f in text):
        maps = [list(f) for f in text]
        if any(not isinstance(x, int) for f in maps for x in f):
            raise ValueError(f"malformed injection {text!r}")
    else:
        raise ValueError(f"malformed injection {text!r}")
    if codomain is None:
        codomain = tuple(max(f, default=0) for f in maps)
    f = make_injection(maps, codomain)
    if domain is not None and f.domain != tuple(domain):
        raise ValueError(
            f"injection {text!r} has domain {format_shape(f.domain)}, "
            f"expected {format_shape(domain)}"
        )
    return f


# -- partitions --------------------------------------------------------------

def partitions(k: int) -> list[Partition]:
    """Partitions of ``k`` in increasing lexicographic order."""
    out: list[Partition] = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for part in range(min(rest, maxpart), 0, -1):
            rec(rest - part, part, acc + [part])

    rec(k, k, [])
    out.sort()
    return out


def multipartitions(n: Shape) -> list[tuple]:
    return list(itertools.product(*(partitions(k) for k in n)))


def padded_partition(lam: Partition, t: int) -> Partition:
    """Prepend ``t - |lam|`` as a new first row."""
    size = sum(lam)
    first = lam[0] if lam else 0
    if t < size + first:
        raise PaddingError(f"cannot pad {lam} to {t}: need t >= {size + first}")
    return (t - size,) + tuple(lam)


def padded_multipartition(lams: Sequence[Partition], t: Shape) -> tuple:
    return tuple(padded_partition(lam, ti) for lam, ti in zip(lams, t))


def strip_partition(lam: Partition) -> Partition:
    """The stable label of ``lam``: drop the first row."""
    return tuple(lam[1:])


def class_size(mu: Partition) -> int:
    k = sum(mu)
    denom = 1
    for j in set(mu):
        c = mu.count(j)
        denom *= j ** c * factorial(c)
    return factorial(k) // denom


def conjugacy_data(k: int) -> list[tuple[Partition, int]]:
    """Cycle types of ``S_k`` with class sizes ``k! / prod j^{m_j} m_j!``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return [(mu, class_size(mu)) for mu in partitions(k)]


def cycle_representative(mu: Partition) -> tuple[int, ...]:
    """One-line permutation with cycle type ``mu``.

    Cycles occupy consecutive integers, longest first:
    ``(1 2 .. mu_1)(mu_1+1 ..)...``.
    """
    img = []
    start = 1
    for length in mu:
        img.extend(range(start + 1, start + length))
        img.append(start)
        start += length
    return tuple(img)


def format_partition(lam: Partition) -> str:
    return "(" + ",".join(map(str, lam)) + ")"


def format_multipartition(lams: Sequence[Partition]) -> str:
    return "|".join(format_partition(lam) for lam in lams)

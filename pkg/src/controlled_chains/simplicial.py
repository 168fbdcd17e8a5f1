"""Simplicial sets, Moore complexes and the Eilenberg-Zilber chain maps.

Keys are plain tuples interpreted by the owning simplicial set:

* ``Delta``: a nondecreasing vertex tuple ``(v0, ..., vk)`` of degree ``k``;
* ``BarComplex``: a tuple of group elements ``(g1, ..., gk)`` of degree ``k``;
* ``Product``: a pair ``(sigma, tau)`` of equal-degree keys.

Vertex maps are tuples ``(a(0), ..., a(m))`` describing a nondecreasing map
``[m] -> [n]``.
"""

from __future__ import annotations

import itertools
import random
from math import comb
from typing import Sequence

from .chains import BasedComplex, ChainMap, TensorComplex, add_into
from .groups import Group

__all__ = [
    "SimplicialSet",
    "Delta",
    "BarComplex",
    "Product",
    "check_vertex_map",
    "compose_vertex_maps",
    "moore_complex",
    "normalized_projection",
    "tensor_complex",
    "aw",
    "shuffle",
    "lambda_parts",
    "aw_map",
    "shuffle_map",
    "shuffles",
    "split_top_level",
]


def split_top_level(text: str) -> list[str]:
    """Split on commas that are not nested in brackets or parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ValueError(f"unbalanced brackets in {text!r}")
    tail = "".join(cur)
    if parts or tail.strip():
        parts.append(tail)
    return [p.strip() for p in parts]


def check_vertex_map(a: Sequence[int], n: int | None = None) -> tuple:
    a = tuple(a)
    if not a:
        raise ValueError("vertex map must have a non-empty domain")
    if any(x > y for x, y in zip(a, a[1:])):
        raise ValueError(f"vertex map {a} is not monotone")
    if a[0] < 0 or (n is not None and a[-1] > n):
        raise ValueError(f"vertex map {a} does not land in [{n}]")
    return a


def compose_vertex_maps(a: Sequence[int], b: Sequence[int]) -> tuple:
    """``a o b`` where ``b: [l] -> [m]`` and ``a: [m] -> [n]``."""
    return tuple(a[i] for i in b)


class SimplicialSet:
    """Face and degeneracy rules plus enumeration of degree slices."""

    name = "X"
    tag = "?"

    def degree(self, s) -> int:
        raise NotImplementedError

    def _face(self, i: int, s):
        raise NotImplementedError

    def _degeneracy(self, i: int, s):
        raise NotImplementedError

    def face(self, i: int, s):
        n = self.degree(s)
        if n <= 0 or not 0 <= i <= n:
            raise IndexError(f"face d_{i} undefined in degree {n}")
        return self._face(i, s)

    def degeneracy(self, i: int, s):
        n = self.degree(s)
        if not 0 <= i <= n:
            raise IndexError(f"degeneracy s_{i} undefined in degree {n}")
        return self._degeneracy(i, s)

    def degenerate_indices(self, s) -> set:
        """Indices ``i`` such that ``s`` lies in the image of ``s_i``."""
        n = self.degree(s)
        return {i for i in range(n) if self._degeneracy(i, self._face(i, s)) == s}

    def is_degenerate(self, s) -> bool:
        return bool(self.degenerate_indices(s))

    def simplices(self, n: int) -> list | None:
        """All ``n``-simplices in canonical order, or ``None`` if unavailable."""
        return None

    def random_simplex(self, n: int, rng: random.Random):
        sl = self.simplices(n)
        if not sl:
            raise ValueError(f"no {n}-simplices to sample in {self.name}")
        return rng.choice(sl)

    def apply_vertex_map(self, s, a: Sequence[int]):
        """Act on ``s`` by the simplicial operator with vertex map ``a``.

        Missing values are removed as faces in decreasing order, then repeats
        are inserted as degeneracies in increasing order.
        """
        n = self.degree(s)
        a = check_vertex_map(a, n)
        image = sorted(set(a))
        for j in reversed(range(n + 1)):
            if j not in image:
                s = self.face(j, s)
        for i in range(len(a) - 1):
            if a[i] == a[i + 1]:
                s = self.degeneracy(i, s)
        return s

    def boundary(self, s) -> dict:
        n = self.degree(s)
        out: dict = {}
        if n == 0:
            return out
        for i in range(n + 1):
            add_into(out, {self._face(i, s): -1 if i % 2 else 1})
        return out

    def format_key(self, s) -> str:
        raise NotImplementedError

    def parse_key(self, text: str):
        raise NotImplementedError

    def sort_key(self, s):
        return repr(s)


class Delta(SimplicialSet):
    """The standard simplex ``Delta^n`` (``n=None`` allows any vertex)."""

    tag = "d"

    def __init__(self, n: int | None):
        self.n = n
        self.name = f"Delta^{n}"

    def __eq__(self, other):
        return isinstance(other, Delta) and other.n == self.n

    def __hash__(self):
        return hash(("Delta", self.n))

    def top(self) -> tuple:
        return tuple(range(self.n + 1))

    def degree(self, s):
        return len(s) - 1

    def _face(self, i, s):
        return s[:i] + s[i + 1:]

    def _degeneracy(self, i, s):
        return s[: i + 1] + s[i:]

    def degenerate_indices(self, s):
        return {i for i in range(len(s) - 1) if s[i] == s[i + 1]}

    def apply_vertex_map(self, s, a):
        a = check_vertex_map(a, len(s) - 1)
        return tuple(s[i] for i in a)

    def simplices(self, k):
        if self.n is None:
            return None
        if k < 0:
            return []
        return list(itertools.combinations_with_replacement(range(self.n + 1), k + 1))

    def contains(self, s) -> bool:
        return (
            len(s) >= 1
            and all(x <= y for x, y in zip(s, s[1:]))
            and s[0] >= 0
            and (self.n is None or s[-1] <= self.n)
        )

    def format_key(self, s):
        return "d:[" + ",".join(map(str, s)) + "]"

    def parse_key(self, text):
        text = text.strip()
        if not (text.startswith("d:[") and text.endswith("]")):
            raise ValueError(f"bad simplex key {text!r}")
        s = tuple(int(v) for v in split_top_level(text[3:-1]))
        if not self.contains(s):
            raise ValueError(f"{text!r} is not a simplex of {self.name}")
        return s

    def sort_key(self, s):
        return (len(s), s)


class BarComplex(SimplicialSet):
    """The nerve ``BG``: ``n``-simplices are tuples ``(g1, ..., gn)``."""

    tag = "b"

    def __init__(self, group: Group, cap: int = 2_000_000):
        self.group = group
        self.cap = cap
        self.name = f"B{group!r}"

    def __eq__(self, other):
        return isinstance(other, BarComplex) and other.group == self.group

    def __hash__(self):
        return hash(("B", id(self.group)))

    def degree(self, s):
        return len(s)

    def _face(self, i, s):
        n = len(s)
        if i == 0:
            return s[1:]
        if i == n:
            return s[:-1]
        return s[: i - 1] + (self.group.mul(s[i - 1], s[i]),) + s[i + 1:]

    def _degeneracy(self, i, s):
        return s[:i] + (self.group.identity,) + s[i:]

    def degenerate_indices(self, s):
        G = self.group
        return {i for i, g in enumerate(s) if G.is_identity(g)}

    def apply_vertex_map(self, s, a):
        a = check_vertex_map(a, len(s))
        G = self.group
        return tuple(G.prod(s[a[j - 1]: a[j]]) for j in range(1, len(a)))

    def simplices(self, n):
        if n < 0:
            return []
        if not self.group.finite:
            return None
        els = self.group.elements()
        if len(els) ** n > self.cap:
            return None
        return [tuple(t) for t in itertools.product(els, repeat=n)]

    def random_simplex(self, n, rng):
        return tuple(self.group.random_element(rng) for _ in range(n))

    def format_key(self, s):
        return "b:[" + ",".join(self.group.format(g) for g in s) + "]"

    def parse_key(self, text):
        text = text.strip()
        if not (text.startswith("b:[") and text.endswith("]")):
            raise ValueError(f"bad simplex key {text!r}")
        return tuple(self.group.parse(p) for p in split_top_level(text[3:-1]))

    def sort_key(self, s):
        return (len(s), tuple(self.group.sort_key(g) for g in s))


class Product(SimplicialSet):
    """Binary product; simplices are pairs of equal-degree simplices."""

    tag = "p"

    def __init__(self, left: SimplicialSet, right: SimplicialSet):
        self.left, self.right = left, right
        self.name = f"({left.name}x{right.name})"

    def __eq__(self, other):
        return isinstance(other, Product) and other.left == self.left and other.right == self.right

    def __hash__(self):
        return hash(("P", self.left, self.right))

    def degree(self, s):
        d = self.left.degree(s[0])
        if self.right.degree(s[1]) != d:
            raise ValueError("product simplex with unequal degrees")
        return d

    def _face(self, i, s):
        return (self.left._face(i, s[0]), self.right._face(i, s[1]))

    def _degeneracy(self, i, s):
        return (self.left._degeneracy(i, s[0]), self.right._degeneracy(i, s[1]))

    def degenerate_indices(self, s):
        return self.left.degenerate_indices(s[0]) & self.right.degenerate_indices(s[1])

    def apply_vertex_map(self, s, a):
        return (self.left.apply_vertex_map(s[0], a), self.right.apply_vertex_map(s[1], a))

    def simplices(self, n):
        a, b = self.left.simplices(n), self.right.simplices(n)
        if a is None or b is None:
            return None
        return [(x, y) for x in a for y in b]

    def random_simplex(self, n, rng):
        return (self.left.random_simplex(n, rng), self.right.random_simplex(n, rng))

    def format_key(self, s):
        return f"p({self.left.format_key(s[0])},{self.right.format_key(s[1])})"

    def parse_key(self, text):
        text = text.strip()
        if not (text.startswith("p(") and text.endswith(")")):
            raise ValueError(f"bad simplex key {text!r}")
        parts = split_top_level(text[2:-1])
        if len(parts) != 2:
            raise ValueError(f"bad product key {text!r}")
        s = (self.left.parse_key(parts[0]), self.right.parse_key(parts[1]))
        self.degree(s)
        return s

    def sort_key(self, s):
        return (self.left.sort_key(s[0]), self.right.sort_key(s[1]))


# ---------------------------------------------------------------------------
# chain complexes


def moore_complex(X: SimplicialSet) -> BasedComplex:
    """Unnormalized chains ``ZX_*`` with ``d = sum (-1)^i d_i``."""
    return BasedComplex(X.boundary, X.simplices, X.random_simplex, name=f"Z{X.name}")


def normalized_projection(X: SimplicialSet) -> ChainMap:
    """Kill degenerate simplices, keep the rest."""
    return ChainMap(lambda s: {} if X.is_degenerate(s) else {s: 1}, "p")


def tensor_complex(X: SimplicialSet, Y: SimplicialSet) -> TensorComplex:
    return TensorComplex(moore_complex(X), moore_complex(Y), X.degree)


def aw(P: Product, s) -> dict:
    """Alexander-Whitney: ``sum_i (front i-face of sigma) (x) (back (n-i)-face of tau)``."""
    sigma, tau = s
    n = P.degree(s)
    out: dict = {}
    for i in range(n + 1):
        key = (P.left.apply_vertex_map(sigma, range(i + 1)), P.right.apply_vertex_map(tau, range(i, n + 1)))
        add_into(out, {key: 1})
    return out


def shuffles(p: int, q: int):
    """Yield ``(sign, mu, nu)`` for ``(p,q)``-shuffles of ``{0, ..., p+q-1}``."""
    for mu in itertools.combinations(range(p + q), p):
        ms = set(mu)
        nu = tuple(i for i in range(p + q) if i not in ms)
        inv = sum(1 for m in mu for v in nu if m > v)
        yield (-1 if inv % 2 else 1), mu, nu


def shuffle(P: Product, key) -> dict:
    """Eilenberg-Zilber shuffle map on ``sigma (x) tau``.

    ``sigma`` is degenerated at the indices in ``nu`` and ``tau`` at those in
    ``mu``, each applied in increasing order.
    """
    sigma, tau = key
    X, Y = P.left, P.right
    p, q = X.degree(sigma), Y.degree(tau)
    out: dict = {}
    for sign, mu, nu in shuffles(p, q):
        a = sigma
        for i in nu:
            a = X._degeneracy(i, a)
        b = tau
        for i in mu:
            b = Y._degeneracy(i, b)
        add_into(out, {(a, b): sign})
    return out


def lambda_parts(P: Product, s) -> tuple[dict, dict, dict]:
    """``(Lambda_G, Lambda_H, Lambda)`` with ``Lambda = AW - Lambda_G - Lambda_H``.

    ``Lambda_G`` keeps the whole left factor, ``Lambda_H`` the whole right
    factor; both are single AW terms.
    """
    sigma, tau = s
    n = P.degree(s)
    lg = {(sigma, P.right.apply_vertex_map(tau, (n,))): 1}
    lh = {(P.left.apply_vertex_map(sigma, (0,)), tau): 1}
    lam = aw(P, s)
    add_into(lam, lg, -1)
    add_into(lam, lh, -1)
    return lg, lh, lam


def aw_map(P: Product) -> ChainMap:
    return ChainMap(lambda s: aw(P, s), "AW")


def shuffle_map(P: Product) -> ChainMap:
    return ChainMap(lambda k: shuffle(P, k), "EZ")


def shuffle_term_bound(k: int) -> int:
    """Largest number of shuffle terms in total degree ``k``."""
    return comb(k, k // 2)

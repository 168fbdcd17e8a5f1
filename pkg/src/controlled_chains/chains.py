"""Integer chains over based complexes and the diameter calculus.

A chain is a finite formal sum of basis keys with integer coefficients.
The diameter of a chain is its L1 norm; the diameter function of a chain
map or homotopy ``P`` is ``d_P(k) = max d(P(c))`` over basis elements
``c`` of degree at most ``k``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Hashable, Iterable, Mapping

from .exactalg import SparseIntMatrix, elementary_divisors

__all__ = [
    "Chain",
    "add_into",
    "scale",
    "diameter",
    "BasedComplex",
    "TensorComplex",
    "ChainMap",
    "ChainHomotopy",
    "DegreeRangeError",
    "HomotopyReport",
    "verify_chain_homotopy",
    "verify_chain_map",
    "diameter_function",
    "homotopy_sum",
    "homotopy_compose",
    "homotopy_tensor",
    "tensor_map",
    "boundary_matrix",
    "homology_ranks",
]

Key = Hashable
Terms = dict


def add_into(acc: dict, terms: Mapping, coef: int = 1) -> dict:
    """``acc += coef * terms`` in place, dropping zeros."""
    if not coef:
        return acc
    for k, v in terms.items():
        nv = acc.get(k, 0) + coef * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def scale(terms: Mapping, coef: int) -> dict:
    if not coef:
        return {}
    return {k: coef * v for k, v in terms.items()}


def diameter(c) -> int:
    """L1 norm of a chain (a :class:`Chain` or a plain term dict)."""
    terms = c.terms if isinstance(c, Chain) else c
    return sum(abs(v) for v in terms.values())


class Chain:
    """An integer chain of fixed degree.  Zero coefficients are never stored."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping | Iterable | None = None):
        self.degree = degree
        if terms is None:
            self.terms = {}
        elif isinstance(terms, Mapping):
            self.terms = {k: int(v) for k, v in terms.items() if v}
        else:
            acc: dict = {}
            for coef, key in terms:
                add_into(acc, {key: int(coef)})
            self.terms = acc

    @classmethod
    def basis(cls, degree: int, key) -> "Chain":
        return cls(degree, {key: 1})

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        return Chain(self.degree, add_into(dict(self.terms), other.terms))

    def __sub__(self, other: "Chain") -> "Chain":
        self._check(other)
        return Chain(self.degree, add_into(dict(self.terms), other.terms, -1))

    def __neg__(self) -> "Chain":
        return Chain(self.degree, scale(self.terms, -1))

    def __rmul__(self, k: int) -> "Chain":
        return Chain(self.degree, scale(self.terms, k))

    def __eq__(self, other):
        if isinstance(other, Chain):
            return self.terms == other.terms and (not self.terms or self.degree == other.degree)
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def _check(self, other):
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    @property
    def diameter(self) -> int:
        return diameter(self.terms)

    def items_sorted(self, key=repr):
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]))

    def __repr__(self):
        body = " + ".join(f"{v}*{k!r}" for k, v in self.items_sorted()) or "0"
        return f"Chain[{self.degree}]({body})"


class BasedComplex:
    """A positive based chain complex given by a boundary rule.

    ``basis(n)`` returns the list of basis keys in degree ``n`` or ``None``
    when that slice is infinite or too large to list.
    """

    def __init__(
        self,
        boundary: Callable[[Key], Mapping],
        basis: Callable[[int], list | None] = lambda n: None,
        sampler: Callable[[int, random.Random], Key] | None = None,
        name: str = "complex",
    ):
        self._boundary = boundary
        self._basis = basis
        self._sampler = sampler
        self.name = name

    def boundary(self, key) -> dict:
        return dict(self._boundary(key))

    def boundary_chain(self, terms: Mapping) -> dict:
        out: dict = {}
        for k, v in terms.items():
            add_into(out, self._boundary(k), v)
        return out

    def basis(self, n: int):
        if n < 0:
            return []
        return self._basis(n)

    def sample(self, n: int, rng: random.Random):
        if self._sampler is not None:
            return self._sampler(n, rng)
        b = self.basis(n)
        if not b:
            raise ValueError(f"cannot sample degree {n} of {self.name}")
        return rng.choice(b)

    def check_d_squared(self, n: int, keys: Iterable | None = None) -> list:
        """Keys of degree ``n`` where the boundary of the boundary is non-zero."""
        keys = self.basis(n) if keys is None else keys
        return [k for k in keys if self.boundary_chain(self._boundary(k))]


class TensorComplex(BasedComplex):
    """Tensor product ``C (x) D`` with basis keys ``(a, b)``.

    ``d(a (x) b) = da (x) b + (-1)^|a| a (x) db``.  ``degree_left`` reports
    the degree of a left key.
    """

    def __init__(self, left: BasedComplex, right: BasedComplex, degree_left: Callable[[Key], int]):
        self.left, self.right = left, right
        self.degree_left = degree_left
        super().__init__(self._tensor_boundary, self._tensor_basis, name=f"{left.name}(x){right.name}")

    def _tensor_boundary(self, key):
        a, b = key
        out: dict = {}
        for a2, v in self.left.boundary(a).items():
            add_into(out, {(a2, b): v})
        s = -1 if self.degree_left(a) % 2 else 1
        for b2, v in self.right.boundary(b).items():
            add_into(out, {(a, b2): s * v})
        return out

    def _tensor_basis(self, n):
        out = []
        for p in range(n + 1):
            la, lb = self.left.basis(p), self.right.basis(n - p)
            if la is None or lb is None:
                return None
            out.extend((a, b) for a in la for b in lb)
        return out


class DegreeRangeError(IndexError):
    """A partial homotopy was evaluated outside its declared degrees."""


class ChainMap:
    """Degree-preserving linear map given on basis keys."""

    def __init__(self, on_basis: Callable[[Key], Mapping], name: str = "map"):
        self.on_basis = on_basis
        self.name = name

    def __call__(self, key) -> dict:
        return dict(self.on_basis(key))

    def apply(self, terms: Mapping) -> dict:
        out: dict = {}
        for k, v in terms.items():
            add_into(out, self.on_basis(k), v)
        return out

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(lambda k: add_into(dict(self.on_basis(k)), other.on_basis(k)), f"({self.name}+{other.name})")

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(lambda k: add_into(dict(self.on_basis(k)), other.on_basis(k), -1), f"({self.name}-{other.name})")

    def __neg__(self):
        return ChainMap(lambda k: scale(self.on_basis(k), -1), f"-{self.name}")

    def then(self, other: "ChainMap") -> "ChainMap":
        """``other o self``."""
        return ChainMap(lambda k: other.apply(self.on_basis(k)), f"{other.name}.{self.name}")

    @staticmethod
    def identity():
        return ChainMap(lambda k: {k: 1}, "id")

    @staticmethod
    def zero():
        return ChainMap(lambda k: {}, "0")


class ChainHomotopy:
    """Degree-raising linear map, optionally defined only up to ``max_degree``.

    ``degree_of(key)`` gives the source degree of a basis key; evaluation on
    a key above ``max_degree`` raises :class:`DegreeRangeError`.
    """

    def __init__(
        self,
        on_basis: Callable[[Key], Mapping],
        degree_of: Callable[[Key], int],
        max_degree: int | None = None,
        name: str = "P",
    ):
        self._on_basis = on_basis
        self.degree_of = degree_of
        self.max_degree = max_degree
        self.name = name

    def __call__(self, key) -> dict:
        if self.max_degree is not None and self.degree_of(key) > self.max_degree:
            raise DegreeRangeError(f"{self.name} is defined in degrees <= {self.max_degree} only")
        return dict(self._on_basis(key))

    def apply(self, terms: Mapping) -> dict:
        out: dict = {}
        for k, v in terms.items():
            add_into(out, self(k), v)
        return out

    def __neg__(self):
        return ChainHomotopy(lambda k: scale(self._on_basis(k), -1), self.degree_of, self.max_degree, f"-{self.name}")

    @staticmethod
    def zero(degree_of, max_degree=None):
        return ChainHomotopy(lambda k: {}, degree_of, max_degree, "0")


@dataclass
class HomotopyReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)  # (key, residual dict)
    diameters: dict = field(default_factory=dict)  # degree -> max diameter seen

    def __bool__(self):
        return self.ok


def verify_chain_homotopy(
    P: ChainHomotopy,
    phi: ChainMap,
    psi: ChainMap,
    source: BasedComplex,
    target: BasedComplex,
    keys: Iterable,
    max_failures: int = 5,
) -> HomotopyReport:
    """Check ``P d + d P = psi - phi`` exactly on each key."""
    rep = HomotopyReport(True, 0)
    for key in keys:
        res = target.boundary_chain(P(key))
        add_into(res, P.apply(source.boundary(key)))
        add_into(res, psi(key), -1)
        add_into(res, phi(key))
        rep.checked += 1
        deg = P.degree_of(key)
        rep.diameters[deg] = max(rep.diameters.get(deg, 0), diameter(P(key)))
        if res:
            rep.ok = False
            if len(rep.failures) < max_failures:
                rep.failures.append((key, res))
    return rep


def verify_chain_map(f: ChainMap, source: BasedComplex, target: BasedComplex, keys: Iterable) -> list:
    """Keys where ``d f != f d``."""
    bad = []
    for key in keys:
        res = target.boundary_chain(f(key))
        add_into(res, f.apply(source.boundary(key)), -1)
        if res:
            bad.append((key, res))
    return bad


def diameter_function(P, keys_by_degree: Mapping[int, Iterable]) -> dict:
    """``d_P(k)`` for each listed degree (cumulative max over degrees <= k)."""
    out, run = {}, 0
    for k in sorted(keys_by_degree):
        for key in keys_by_degree[k]:
            run = max(run, diameter(P(key)))
        out[k] = run
    return out


# ---------------------------------------------------------------------------
# constructions with diameter bounds


def homotopy_sum(P: ChainHomotopy, Q: ChainHomotopy) -> ChainHomotopy:
    """``P + Q : phi + zeta ~ psi + xi``; ``d_{P+Q}(k) <= d_P(k) + d_Q(k)``."""
    md = _min_range(P.max_degree, Q.max_degree)
    return ChainHomotopy(lambda k: add_into(P(k), Q(k)), P.degree_of, md, f"({P.name}+{Q.name})")


def homotopy_compose(zeta: ChainMap, P: ChainHomotopy, Q: ChainHomotopy, psi: ChainMap) -> ChainHomotopy:
    """``zeta P + Q psi : zeta phi ~ xi psi``.

    Bound: ``d(k) <= d_zeta(k+1) d_P(k) + d_Q(k) d_psi(k)`` (the chain maps
    are measured in the degrees they are applied in).
    """
    md = _min_range(P.max_degree, Q.max_degree)
    return ChainHomotopy(
        lambda k: add_into(zeta.apply(P(k)), Q.apply(psi(k))),
        P.degree_of,
        md,
        f"({zeta.name}{P.name}+{Q.name}{psi.name})",
    )


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    def on(key):
        a, b = key
        fa, gb = f(a), g(b)
        return {(x, y): u * v for x, u in fa.items() for y, v in gb.items()}

    return ChainMap(on, f"{f.name}(x){g.name}")


def homotopy_tensor(
    P: ChainHomotopy, zeta: ChainMap, psi: ChainMap, Q: ChainHomotopy, degree_left: Callable[[Key], int]
) -> ChainHomotopy:
    """``(P (x) zeta + (-1)^|a| psi (x) Q)(a (x) b)``: ``phi(x)zeta ~ psi(x)xi``."""

    def on(key):
        a, b = key
        out: dict = {}
        pa, zb = P(a), zeta(b)
        for x, u in pa.items():
            for y, v in zb.items():
                add_into(out, {(x, y): u * v})
        s = -1 if degree_left(a) % 2 else 1
        sa, qb = psi(a), Q(b)
        for x, u in sa.items():
            for y, v in qb.items():
                add_into(out, {(x, y): s * u * v})
        return out

    def deg(key):
        return P.degree_of(key[0]) + Q.degree_of(key[1])

    md = _min_range(P.max_degree, Q.max_degree)
    return ChainHomotopy(on, deg, md, f"({P.name}(x){zeta.name}+{psi.name}(x){Q.name})")


def _min_range(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# homology


def boundary_matrix(C: BasedComplex, n: int) -> tuple[SparseIntMatrix, list, list]:
    """Matrix of ``d : C_n -> C_{n-1}`` with the basis lists used for rows/cols."""
    src = C.basis(n)
    tgt = C.basis(n - 1)
    if src is None or tgt is None:
        raise ValueError(f"degree {n} or {n - 1} of {C.name} has no finite basis")
    idx = {k: i for i, k in enumerate(tgt)}
    ent = {}
    for j, key in enumerate(src):
        for k, v in C.boundary(key).items():
            ent[(idx[k], j)] = v
    return SparseIntMatrix(len(tgt), len(src), ent), tgt, src


def homology_ranks(C: BasedComplex, up_to: int, start: int = 0) -> list[tuple[int, list[int]]]:
    """``(free rank, torsion divisors)`` of ``H_i`` for ``start <= i <= up_to``."""
    ranks, divs = {}, {}
    sizes = {}
    for n in range(max(start - 1, 0), up_to + 2):
        b = C.basis(n)
        if b is None:
            raise ValueError(f"degree {n} of {C.name} is infinite")
        sizes[n] = len(b)
    for n in range(max(start, 1), up_to + 2):
        if n not in sizes or n - 1 not in sizes:
            continue
        M, _, _ = boundary_matrix(C, n)
        d = elementary_divisors(M)
        ranks[n], divs[n] = len(d), d
    out = []
    for i in range(start, up_to + 1):
        rk_out = ranks.get(i, 0)
        rk_in = ranks.get(i + 1, 0)
        free = sizes[i] - rk_out - rk_in
        torsion = [d for d in divs.get(i + 1, []) if d > 1]
        out.append((free, torsion))
    return out


def shuffle_count(p: int, q: int) -> int:
    return comb(p + q, p)

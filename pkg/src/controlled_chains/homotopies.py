"""Conjugation homotopies, mitosis maps and the tower homotopies ``Phi^n``.

Sign conventions used here, checked numerically in the tests:

* ``conj_homotopy(G, g)`` satisfies ``dS + Sd = mu_g - id`` with
  ``mu_g(h) = g h g^-1``;
* the model homotopy ``P`` satisfies ``dP + Pd = shuffle o AW - id``, so the
  product homotopy is ``T = -P(f x g - e x g) + shuffle (Q (x) g) Lambda``
  and satisfies ``dT + Td = f x g - f x e - e x g + e x e``;
* ``R = -f T D + S^t f(phi x phi) i - S^u f(phi x phi) i`` satisfies
  ``dR + Rd = k o phi - e``.

Tower-valued chains are collected syntactically on reduced words; exact
identities are decided after projecting through a :class:`WitnessTower`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable

from .chains import ChainHomotopy, ChainMap, DegreeRangeError, add_into, diameter
from .ez_models import PAPER_DELTA_EZ, ModelTable, ez_apply, paper_table
from .groups import Group, TowerGroup, WitnessTower
from .simplicial import BarComplex, Product, lambda_parts, shuffle

__all__ = [
    "conj_homotopy",
    "induced_map",
    "trivial_map",
    "MitosisMaps",
    "mitosis_maps",
    "t_homotopy",
    "r_homotopy",
    "PhiTower",
    "phi_tower",
    "delta_bdh",
    "delta_bdh_table",
    "delta_bdh_corrected",
    "t_bound_corrected",
    "t_bound",
    "r_bound",
    "TowerTooShallow",
    "ControlledFamilyReport",
    "project_chain",
    "verify_phi",
]


# ---------------------------------------------------------------------------
# conjugation


def conj_homotopy(G: Group, g, max_degree: int | None = None) -> ChainHomotopy:
    """``S[g1..gn] = sum_i (-1)^i [g1..gi, g^-1, g_{i+1}^g, ..., g_n^g]``."""
    gi = G.inv(g)

    def conj(h):
        return G.mul(G.mul(g, h), gi)

    def on(s):
        n = len(s)
        c = tuple(conj(h) for h in s)
        out: dict = {}
        for i in range(n + 1):
            add_into(out, {s[:i] + (gi,) + c[i:]: -1 if i % 2 else 1})
        return out

    return ChainHomotopy(on, len, max_degree, "S")


def induced_map(phi: Callable, name: str = "phi") -> ChainMap:
    """Chain map of bar complexes induced by a homomorphism on entries."""
    return ChainMap(lambda s: {tuple(phi(x) for x in s): 1}, name)


def trivial_map(target: Group) -> ChainMap:
    e = target.identity
    return ChainMap(lambda s: {(e,) * len(s): 1}, "e")


@dataclass
class MitosisMaps:
    """``i, j, D`` into the square and ``f(a, b) = a b^u`` into the mitosis."""

    i: ChainMap
    j: ChainMap
    D: ChainMap
    f: ChainMap
    f_elem: Callable


def mitosis_maps(source: Group, W: TowerGroup, level: int) -> MitosisMaps:
    """Maps for the mitosis at ``level`` of ``W``.

    ``i, j, D`` send ``B(source)`` into ``B(source) x B(source)`` (pairs of
    bar simplices); ``f`` sends a pair of ``W``-valued bar simplices to one.
    """
    e = source.identity
    u, ui = W.u(level), W.inv(W.u(level))

    def f_elem(a, b):
        return W.mul(W.mul(a, u), W.mul(b, ui))

    return MitosisMaps(
        i=ChainMap(lambda s: {(s, (e,) * len(s)): 1}, "i"),
        j=ChainMap(lambda s: {((e,) * len(s), s): 1}, "j"),
        D=ChainMap(lambda s: {(s, s): 1}, "D"),
        f=ChainMap(lambda p: {tuple(f_elem(a, b) for a, b in zip(p[0], p[1])): 1}, "f"),
        f_elem=f_elem,
    )


# ---------------------------------------------------------------------------
# product and mitosis homotopies


def t_bound(k: int, dQ_prev: int, delta_ez: Callable[[int], int] = lambda k: PAPER_DELTA_EZ[k]) -> int:
    if k == 0:
        return 0
    return 2 * delta_ez(k) + (k - 1) * comb(k, k // 2) * dQ_prev


def r_bound(k: int, dQ_prev: int, delta_ez: Callable[[int], int] = lambda k: PAPER_DELTA_EZ[k]) -> int:
    if k == 0:
        return 0
    return 2 * (k + 1) + t_bound(k, dQ_prev, delta_ez)


def t_homotopy(
    source: Group,
    target: Group,
    f: Callable,
    g: Callable,
    Q: ChainHomotopy,
    n: int,
    table: ModelTable | None = None,
) -> ChainHomotopy:
    """Product homotopy on ``B(source) x B(source) -> B(target) x B(target)``.

    ``f, g`` are homomorphisms on elements and ``Q: e ~ f`` is defined in
    degrees ``<= n-1`` with ``Q_0 = 0``.  The result is defined in degrees
    ``<= n`` and satisfies ``dT + Td = f x g - f x e - e x g + e x e``.
    """
    table = paper_table(min(n, 4)) if table is None else table
    src = BarComplex(source)
    tgt = BarComplex(target)
    Psrc, Ptgt = Product(src, src), Product(tgt, tgt)
    e = target.identity
    if Q._on_basis(()):
        raise ValueError("Q must vanish in degree 0")

    def on(s):
        sigma, tau = s
        fs = tuple(f(x) for x in sigma)
        gt = tuple(g(x) for x in tau)
        es = (e,) * len(sigma)
        out = ez_apply(Ptgt, (fs, gt), table)
        for k, v in out.items():
            out[k] = -v
        add_into(out, ez_apply(Ptgt, (es, gt), table))
        _, _, lam = lambda_parts(Psrc, s)
        for (a, b), c in lam.items():
            qa = Q(a)
            if not qa:
                continue
            gb = tuple(g(x) for x in b)
            for x, v in qa.items():
                add_into(out, shuffle(Ptgt, (x, gb)), c * v)
        return out

    return ChainHomotopy(on, Psrc.degree, n, "T")


def r_homotopy(
    source: Group,
    W: TowerGroup,
    level: int,
    phi: Callable,
    Q: ChainHomotopy,
    n: int,
    table: ModelTable | None = None,
) -> ChainHomotopy:
    """``R: e ~ k o phi`` into ``B W`` using the mitosis letters of ``level``.

    ``phi`` maps ``source`` into the part of ``W`` below ``level`` and
    ``Q: e ~ phi`` is defined in degrees ``<= n-1`` with ``Q_0 = 0``.
    """
    T = t_homotopy(source, W, phi, phi, Q, n, table)
    mm = mitosis_maps(source, W, level)
    St = conj_homotopy(W, W.t(level))
    Su = conj_homotopy(W, W.u(level))
    cache: dict = {}

    def on(s):
        if not s:
            # BG has one vertex and d = 0 on 1-chains, so R_0 may be taken 0
            return {}
        r = cache.get(s)
        if r is not None:
            return dict(r)
        out: dict = {}
        for p, c in T((s, s)).items():
            add_into(out, mm.f(p), -c)
        ps = tuple(phi(x) for x in s)
        add_into(out, St(ps))
        add_into(out, Su(ps), -1)
        cache[s] = out
        return dict(out)

    return ChainHomotopy(on, len, n, "R")


# ---------------------------------------------------------------------------
# the tower family


def delta_bdh(k: int, delta_ez: Callable[[int], int] | None = None) -> int:
    """``delta_BDH(k) = 2(k+1) + 2 delta_EZ(k) + (k-1) C(k, k//2) delta_BDH(k-1)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if delta_ez is None:
        if k >= len(PAPER_DELTA_EZ):
            raise ValueError(f"delta_EZ({k}) is unknown; supply delta_ez")
        delta_ez = PAPER_DELTA_EZ.__getitem__
    d = 0
    for j in range(1, k + 1):
        d = r_bound(j, d, delta_ez)
    return d


def delta_bdh_table(up_to: int = 4) -> list[int]:
    return [delta_bdh(k) for k in range(up_to + 1)]


def t_bound_corrected(k: int, dQ_prev: int, delta_ez: Callable[[int], int] = lambda k: PAPER_DELTA_EZ[k]) -> int:
    """Like :func:`t_bound` but with the shuffle counted in degree ``k+1``.

    ``Q(a)`` raises degree by one before the shuffle is applied, so the
    shuffle term count is ``C(k+1, (k+1)//2)`` rather than ``C(k, k//2)``.
    """
    if k == 0:
        return 0
    return 2 * delta_ez(k) + (k - 1) * comb(k + 1, (k + 1) // 2) * dQ_prev


def delta_bdh_corrected(k: int, delta_ez: Callable[[int], int] | None = None) -> int:
    """Recurrence with the shuffle counted in degree ``k+1``: 0, 6, 32, 414, 12482."""
    if delta_ez is None:
        if k >= len(PAPER_DELTA_EZ):
            raise ValueError(f"delta_EZ({k}) is unknown; supply delta_ez")
        delta_ez = PAPER_DELTA_EZ.__getitem__
    d = 0
    for j in range(1, k + 1):
        d = 2 * (j + 1) + t_bound_corrected(j, d, delta_ez)
    return d


class PhiTower:
    """``Phi^0, ..., Phi^N`` for a base group; ``Phi^n: e ~ i^n`` in degrees ``<= n``."""

    def __init__(self, G: Group, N: int, table: ModelTable | None = None):
        self.G = G
        self.N = N
        self.W = TowerGroup(G, N)
        self.table = paper_table(min(N, 4)) if table is None else table
        self.levels: list[ChainHomotopy] = [ChainHomotopy.zero(len, 0)]
        phi = self.W.letter
        for n in range(1, N + 1):
            self.levels.append(r_homotopy(G, self.W, n, phi, self.levels[n - 1], n, self.table))

    def __getitem__(self, n: int) -> ChainHomotopy:
        return self.levels[n]

    def include(self, s) -> tuple:
        return tuple(self.W.letter(g) for g in s)


def phi_tower(G: Group, n: int, table: ModelTable | None = None) -> list[ChainHomotopy]:
    return PhiTower(G, n, table).levels


# ---------------------------------------------------------------------------
# verification through witnesses


class TowerTooShallow(ValueError):
    pass


def project_chain(terms: dict, proj: Callable) -> dict:
    """Push a ``W``-valued bar chain to the top witness group."""
    out: dict = {}
    for s, c in terms.items():
        add_into(out, {tuple(proj(w) for w in s): c})
    return out


@dataclass
class ControlledFamilyReport:
    """``ok`` covers the projected identity; ``within_bounds`` the diameters."""

    ok: bool
    n: int
    checked: int = 0
    failures: list = field(default_factory=list)  # (simplex, projected residual)
    diameters: dict = field(default_factory=dict)  # degree -> max syntactic diameter
    bounds: dict = field(default_factory=dict)  # degree -> delta_BDH

    @property
    def within_bounds(self) -> bool:
        return all(self.diameters[k] <= self.bounds[k] for k in self.diameters)

    def __bool__(self):
        return self.ok


def _bar_boundary(G: Group, terms: dict) -> dict:
    B = BarComplex(G)
    out: dict = {}
    for s, c in terms.items():
        add_into(out, B.boundary(s), c)
    return out


def verify_phi(
    G: Group,
    n: int,
    tower: WitnessTower,
    degrees: Iterable[int] | None = None,
    samples: int | None = None,
    seed: int = 0,
    phis: PhiTower | None = None,
) -> ControlledFamilyReport:
    """Check ``d Phi^n + Phi^n d = i^n - e`` after projection, plus diameter bounds.

    Degree slices are exhaustive unless ``samples`` is given, in which case
    that many simplices are drawn with replacement per degree.
    """
    if tower.depth < n:
        raise TowerTooShallow(
            f"Phi^{n} needs a witness tower of depth {n}, got {tower.depth}; "
            "regular witnesses beyond depth 2 need an enumerated previous level, "
            "so only diameter bounds are checked there"
        )
    phis = phis if phis is not None and phis.N >= n else PhiTower(G, n)
    Phi = phis[n]
    proj = tower.projector()
    top = tower.top
    B = BarComplex(G)
    rng = random.Random(seed)
    degrees = range(n + 1) if degrees is None else degrees
    rep = ControlledFamilyReport(True, n)
    for k in degrees:
        if k > n:
            raise DegreeRangeError(f"Phi^{n} is defined in degrees <= {n}")
        if samples is None:
            keys = B.simplices(k)
            if keys is None:
                raise ValueError(f"degree {k} of B{G!r} is not enumerable; pass samples")
        else:
            keys = [B.random_simplex(k, rng) for _ in range(samples)]
        rep.bounds[k] = delta_bdh(k)
        for s in keys:
            val = Phi(s)
            rep.diameters[k] = max(rep.diameters.get(k, 0), diameter(val))
            lhs = _bar_boundary(top, project_chain(val, proj))
            add_into(lhs, project_chain(Phi.apply(B.boundary(s)), proj))
            rhs = {tuple(proj(w) for w in phis.include(s)): 1}
            add_into(rhs, {(top.identity,) * k: -1})
            add_into(lhs, rhs, -1)
            rep.checked += 1
            if lhs:
                rep.ok = False
                if len(rep.failures) < 5:
                    rep.failures.append((s, lhs))
    return rep

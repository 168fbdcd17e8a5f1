"""Simplicial maps ``X -> BG`` from edge labelings of ordered complexes.

``X`` is the simplicial set of an ordered simplicial complex: its
``n``-simplices are nondecreasing vertex tuples whose vertex set spans a
face.  A labeling assigns a group element to each edge ``(a, b)`` with
``a < b``; degenerate edges carry ``e``.  It is a cocycle when
``lambda(ab) lambda(bc) = lambda(ac)`` for every 2-face ``a <= b <= c``, and
then ``[v0..vn] -> [lambda(v0v1), ..., lambda(v_{n-1}v_n)]`` is simplicial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .groups import Group
from .simplicial import BarComplex, SimplicialSet

__all__ = [
    "OrderedComplex",
    "LabeledComplex",
    "LabelingReport",
    "BGMorphism",
    "LabelingError",
    "validate_labeling",
    "build_morphism",
    "labeling_from_tree",
    "torus_complex",
    "torus_labeling",
    "boundary_of_simplex",
    "parse_labeled_complex",
    "format_labeled_complex",
]


class LabelingError(ValueError):
    pass


class OrderedComplex(SimplicialSet):
    """Ordered simplicial complex generated by ``facets`` on ``range(n_vertices)``."""

    tag = "d"

    def __init__(self, n_vertices: int, facets: Iterable[Sequence[int]], name: str = "X"):
        self.n_vertices = n_vertices
        self.name = name
        faces: set = set()
        self.facets = []
        for f in facets:
            f = tuple(sorted(set(f)))
            if not f or f[0] < 0 or f[-1] >= n_vertices:
                raise ValueError(f"facet {f} has vertices outside 0..{n_vertices - 1}")
            self.facets.append(f)
            for r in range(1, len(f) + 1):
                faces.update(itertools.combinations(f, r))
        faces.update((v,) for v in range(n_vertices))
        self.faces = faces
        self.dim = max((len(f) - 1 for f in faces), default=-1)

    def degree(self, s):
        return len(s) - 1

    def _face(self, i, s):
        return s[:i] + s[i + 1:]

    def _degeneracy(self, i, s):
        return s[: i + 1] + s[i:]

    def degenerate_indices(self, s):
        return {i for i in range(len(s) - 1) if s[i] == s[i + 1]}

    def apply_vertex_map(self, s, a):
        return tuple(s[i] for i in a)

    def contains(self, s) -> bool:
        return (
            len(s) >= 1
            and all(x <= y for x, y in zip(s, s[1:]))
            and tuple(sorted(set(s))) in self.faces
        )

    def nondegenerate(self, n: int) -> list:
        return sorted(f for f in self.faces if len(f) == n + 1)

    def edges(self) -> list:
        return self.nondegenerate(1)

    def simplices(self, n):
        if n < 0:
            return []
        out = []
        for f in sorted(self.faces):
            r = len(f)
            if r > n + 1:
                continue
            # nondecreasing surjections [n] -> f
            for cuts in itertools.combinations(range(1, n + 1), r - 1):
                bounds = (0,) + cuts + (n + 1,)
                out.append(tuple(f[j] for j in range(r) for _ in range(bounds[j + 1] - bounds[j])))
        return sorted(out)

    def format_key(self, s):
        return "d:[" + ",".join(map(str, s)) + "]"


@dataclass
class LabeledComplex:
    X: OrderedComplex
    group: Group
    labels: dict  # (a, b) with a < b -> group element

    def label(self, a: int, b: int):
        if a == b:
            return self.group.identity
        if a > b:
            raise LabelingError(f"edge ({a},{b}) is not ordered")
        try:
            return self.labels[(a, b)]
        except KeyError:
            raise LabelingError(f"edge ({a},{b}) has no label") from None


@dataclass
class LabelingReport:
    ok: bool
    violations: list = field(default_factory=list)  # (kind, simplex, detail)

    def __bool__(self):
        return self.ok


def validate_labeling(L: LabeledComplex) -> LabelingReport:
    """Every edge labeled, degenerate edges trivial, cocycle on every 2-face."""
    G, X = L.group, L.X
    rep = LabelingReport(True)
    for (a, b), g in L.labels.items():
        if a == b and not G.is_identity(g):
            rep.violations.append(("degenerate", (a, a), G.format(g)))
        elif a != b and (min(a, b), max(a, b)) not in X.faces:
            rep.violations.append(("not an edge", (a, b), G.format(g)))
    for e in X.edges():
        if e not in L.labels:
            rep.violations.append(("unlabeled", e, ""))
    if not rep.violations:
        for a, b, c in X.nondegenerate(2):
            lhs = G.mul(L.label(a, b), L.label(b, c))
            if not G.eq(lhs, L.label(a, c)):
                rep.violations.append(
                    ("cocycle", (a, b, c), f"{G.format(lhs)} != {G.format(L.label(a, c))}")
                )
    rep.ok = not rep.violations
    return rep


class BGMorphism:
    """The simplicial map ``X -> BG`` of a valid labeling."""

    def __init__(self, L: LabeledComplex, form: str = "last-edge"):
        if form not in ("last-edge", "first-edge"):
            raise ValueError(f"unknown recursion form {form!r}")
        self.L = L
        self.form = form
        self.target = BarComplex(L.group)
        self._cache: dict = {}

    def __call__(self, s: tuple) -> tuple:
        s = tuple(s)
        if not self.L.X.contains(s):
            raise LabelingError(f"{s} is not a simplex of {self.L.X.name}")
        return self._f(s)

    def _f(self, s):
        r = self._cache.get(s)
        if r is not None:
            return r
        n = len(s) - 1
        if n == 0:
            r = ()
        elif n == 1:
            r = (self.L.label(s[0], s[1]),)
        elif self.form == "last-edge":
            # [f(d_n s), f(d_0^{n-1} s)]
            r = self._f(s[:-1]) + self._f(s[-2:])
        else:
            # [f(d_2...d_n s), f(d_0 s)]
            r = self._f(s[:2]) + self._f(s[1:])
        self._cache[s] = r
        return r

    def check(self, max_degree: int | None = None) -> list:
        """Simplices where a face or degeneracy fails to commute with the map."""
        X, B = self.L.X, self.target
        G = self.L.group
        top = X.dim + 1 if max_degree is None else max_degree
        bad = []

        def same(x, y):
            return len(x) == len(y) and all(G.eq(a, b) for a, b in zip(x, y))

        for n in range(top + 1):
            for s in X.simplices(n):
                fs = self(s)
                for i in range(n + 1):
                    if n > 0 and not same(self(X.face(i, s)), B.face(i, fs)):
                        bad.append(("d", i, s))
                    if not same(self(X.degeneracy(i, s)), B.degeneracy(i, fs)):
                        bad.append(("s", i, s))
        return bad


def build_morphism(L: LabeledComplex, form: str = "last-edge") -> BGMorphism:
    rep = validate_labeling(L)
    if not rep:
        raise LabelingError(f"labeling is not a cocycle: {rep.violations[:3]}")
    return BGMorphism(L, form)


def labeling_from_tree(
    X: OrderedComplex, group: Group, tree: Iterable[Sequence[int]], images: Mapping
) -> LabeledComplex:
    """Trivial labels on a spanning tree, given labels on the other edges.

    With tree edges labeled ``e`` every vertex path from the base vertex is
    trivial, so the remaining labels are the edge-loop images unchanged.
    Cocycle failures are left for :func:`validate_labeling` to report.
    """
    tree = [tuple(sorted(e)) for e in tree]
    edges = set(X.edges())
    for e in tree:
        if e not in edges:
            raise LabelingError(f"tree edge {e} is not an edge of X")
    parent = list(range(X.n_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in tree:
        ra, rb = find(a), find(b)
        if ra == rb:
            raise LabelingError(f"tree edges contain a cycle at {(a, b)}")
        parent[ra] = rb
    if len(tree) != X.n_vertices - 1:
        raise LabelingError("tree does not span X")
    labels = {e: group.identity for e in tree}
    for e in sorted(edges - set(tree)):
        key = e if e in images else (e[1], e[0])
        if key not in images:
            raise LabelingError(f"no image given for non-tree edge {e}")
        g = images[key]
        labels[e] = g if key == e else group.inv(g)
    return LabeledComplex(X, group, labels)


# ---------------------------------------------------------------------------
# stock complexes


def boundary_of_simplex(n: int) -> OrderedComplex:
    """``boundary Delta^n`` on vertices ``0..n``."""
    return OrderedComplex(n + 1, itertools.combinations(range(n + 1), n), name=f"dDelta^{n}")


def torus_complex(m: int = 3) -> OrderedComplex:
    """An ``m x m`` grid triangulation of the torus (``m >= 3``)."""
    if m < 3:
        raise ValueError("need m >= 3 for a simplicial torus")
    facets = []
    for i in range(m):
        for j in range(m):
            a = i * m + j
            b = ((i + 1) % m) * m + j
            c = i * m + (j + 1) % m
            d = ((i + 1) % m) * m + (j + 1) % m
            facets.append((a, b, d))
            facets.append((a, c, d))
    return OrderedComplex(m * m, facets, name=f"T^2[{m}]")


def torus_labeling(m: int, group: Group, alpha, beta) -> LabeledComplex:
    """Flat labeling with holonomy ``alpha`` and ``beta`` around the two seams.

    ``group`` must make ``alpha`` and ``beta`` commute.  An edge crossing the
    seam of the first (second) coordinate forward picks up ``alpha``
    (``beta``), backwards its inverse.
    """
    X = torus_complex(m)

    def step(x, y):
        d = (y - x) % m
        return d if d <= 1 else d - m

    labels = {}
    for a, b in X.edges():
        ia, ja = divmod(a, m)
        ib, jb = divmod(b, m)
        wi = (ia + step(ia, ib) - ib) // m
        wj = (ja + step(ja, jb) - jb) // m
        labels[(a, b)] = group.mul(group.power(alpha, wi), group.power(beta, wj))
    return LabeledComplex(X, group, labels)


# ---------------------------------------------------------------------------
# file format
#
#   vertices <n>
#   simplex <v0> <v1> ...
#   label <a> <b> <group element>


def parse_labeled_complex(text: str, group: Group) -> LabeledComplex:
    n, facets, labels = None, [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "vertices":
                n = int(rest)
            elif head == "simplex":
                facets.append(tuple(int(v) for v in rest.split()))
            elif head == "label":
                a, b, elem = rest.split(None, 2)
                a, b = int(a), int(b)
                g = group.parse(elem)
                if a > b:
                    a, b, g = b, a, group.inv(g)
                labels[(a, b)] = g
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise LabelingError(f"line {lineno}: {exc}") from None
    if n is None:
        raise LabelingError("missing 'vertices' line")
    return LabeledComplex(OrderedComplex(n, facets), group, labels)


def format_labeled_complex(L: LabeledComplex) -> str:
    lines = [f"vertices {L.X.n_vertices}"]
    lines += ["simplex " + " ".join(map(str, f)) for f in L.X.facets]
    lines += [f"label {a} {b} {L.group.format(g)}" for (a, b), g in sorted(L.labels.items())]
    return "\n".join(lines) + "\n"

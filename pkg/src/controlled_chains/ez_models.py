"""Model solutions for the Eilenberg-Zilber homotopy on ``Delta^k x Delta^k``.

The homotopy ``P`` with ``dP + Pd = shuffle o AW - id`` is fixed by its
values on the top simplices ``top_k x top_k`` and extended to any product
by naturality: ``P(sigma x tau)`` is the image of the model entry under the
maps classifying ``sigma`` and ``tau``.  Each model entry ``x`` must solve

    dx = (-P_{k-1} d + shuffle o AW - id)(top_k x top_k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chains import Chain, ChainHomotopy, add_into, diameter
from .exactalg import SparseIntMatrix, reduce_l1, solve_integer
from .simplicial import Delta, Product, aw, shuffle

__all__ = [
    "PAPER_MODELS",
    "PAPER_DELTA_EZ",
    "ModelTable",
    "ModelError",
    "paper_model",
    "model_rhs",
    "cone",
    "cone_solve",
    "solve_model",
    "build_table",
    "paper_table",
    "ez_apply",
    "ez_homotopy",
    "delta_ez",
    "model_product",
]

# published solutions, as (coefficient, left vertices, right vertices)
PAPER_MODELS = {
    0: (),
    1: ((1, (0, 0, 1), (0, 1, 1)),),
    2: (
        (-1, (0, 0, 0, 1), (0, 1, 2, 2)),
        (1, (0, 0, 1, 1), (0, 1, 1, 2)),
        (1, (0, 0, 1, 2), (0, 2, 2, 2)),
        (-1, (0, 1, 1, 2), (0, 1, 2, 2)),
    ),
    3: (
        (1, (0, 0, 0, 0, 1), (0, 1, 2, 3, 3)),
        (-1, (0, 0, 0, 1, 1), (0, 1, 2, 2, 3)),
        (1, (0, 0, 0, 1, 2), (0, 2, 3, 3, 3)),
        (1, (0, 0, 1, 1, 1), (0, 1, 1, 2, 3)),
        (-1, (0, 0, 1, 1, 2), (0, 2, 2, 3, 3)),
        (1, (0, 0, 1, 2, 2), (0, 2, 2, 2, 3)),
        (1, (0, 0, 1, 2, 3), (0, 3, 3, 3, 3)),
        (1, (0, 1, 1, 1, 2), (0, 1, 2, 3, 3)),
        (-1, (0, 1, 1, 2, 2), (0, 1, 2, 2, 3)),
        (-1, (0, 1, 1, 2, 3), (0, 1, 3, 3, 3)),
        (1, (0, 1, 2, 2, 3), (0, 1, 2, 3, 3)),
    ),
    4: (
        (-1, (0, 0, 0, 0, 0, 1), (0, 1, 2, 3, 4, 4)),
        (1, (0, 0, 0, 0, 1, 1), (0, 1, 2, 3, 3, 4)),
        (1, (0, 0, 0, 0, 1, 2), (0, 2, 3, 4, 4, 4)),
        (-1, (0, 0, 0, 1, 1, 1), (0, 1, 2, 2, 3, 4)),
        (-1, (0, 0, 0, 1, 1, 2), (0, 2, 3, 3, 4, 4)),
        (1, (0, 0, 0, 1, 2, 2), (0, 2, 3, 3, 3, 4)),
        (-1, (0, 0, 0, 1, 2, 3), (0, 3, 4, 4, 4, 4)),
        (1, (0, 0, 1, 1, 1, 1), (0, 1, 1, 2, 3, 4)),
        (1, (0, 0, 1, 1, 1, 2), (0, 2, 2, 3, 4, 4)),
        (-1, (0, 0, 1, 1, 2, 2), (0, 2, 2, 3, 3, 4)),
        (1, (0, 0, 1, 1, 2, 3), (0, 3, 3, 4, 4, 4)),
        (1, (0, 0, 1, 2, 2, 2), (0, 2, 2, 2, 3, 4)),
        (-1, (0, 0, 1, 2, 2, 3), (0, 3, 3, 3, 4, 4)),
        (1, (0, 0, 1, 2, 3, 3), (0, 3, 3, 3, 3, 4)),
        (1, (0, 0, 1, 2, 3, 4), (0, 4, 4, 4, 4, 4)),
        (-1, (0, 1, 1, 1, 1, 2), (0, 1, 2, 3, 4, 4)),
        (1, (0, 1, 1, 1, 2, 2), (0, 1, 2, 3, 3, 4)),
        (-1, (0, 1, 1, 1, 2, 3), (0, 1, 3, 4, 4, 4)),
        (-1, (0, 1, 1, 2, 2, 2), (0, 1, 2, 2, 3, 4)),
        (1, (0, 1, 1, 2, 2, 3), (0, 1, 3, 3, 4, 4)),
        (-1, (0, 1, 1, 2, 3, 3), (0, 1, 3, 3, 3, 4)),
        (-1, (0, 1, 1, 2, 3, 4), (0, 1, 4, 4, 4, 4)),
        (-1, (0, 1, 2, 2, 2, 3), (0, 1, 2, 3, 4, 4)),
        (1, (0, 1, 2, 2, 3, 3), (0, 1, 2, 3, 3, 4)),
        (1, (0, 1, 2, 2, 3, 4), (0, 1, 2, 4, 4, 4)),
        (-1, (0, 1, 2, 3, 3, 4), (0, 1, 2, 3, 4, 4)),
    ),
}

PAPER_DELTA_EZ = (0, 1, 4, 11, 26)


class ModelError(ValueError):
    pass


def model_product(k: int) -> Product:
    return Product(Delta(k), Delta(k))


def _top(k: int):
    t = tuple(range(k + 1))
    return (t, t)


def paper_model(k: int) -> Chain:
    if k not in PAPER_MODELS:
        raise ModelError(f"no published model in dimension {k}; available: 0..4")
    return Chain(k + 1, {(a, b): c for c, a, b in PAPER_MODELS[k]})


@dataclass
class ModelTable:
    """Model entries ``P_k(top x top)`` for ``k = 0, ..., max_k``."""

    entries: list = field(default_factory=list)  # list of term dicts
    provenance: list = field(default_factory=list)

    @property
    def max_k(self) -> int:
        return len(self.entries) - 1

    def entry(self, k: int) -> dict:
        if k < 0 or k > self.max_k:
            raise ModelError(f"model table defined for k <= {self.max_k}, asked for {k}")
        return self.entries[k]

    def append(self, terms: dict, tag: str, check: bool = True):
        k = len(self.entries)
        if check:
            b = model_rhs(k, self)
            got = _boundary_model(k, terms)
            if got != b:
                raise ModelError(f"entry {k} ({tag}) does not solve the model equation")
        self.entries.append(dict(terms))
        self.provenance.append(tag)

    def diameters(self) -> list[int]:
        return [diameter(e) for e in self.entries]

    def verify(self) -> list[int]:
        """Dimensions whose entry fails the model equation."""
        bad = []
        for k, e in enumerate(self.entries):
            if _boundary_model(k, e) != model_rhs(k, ModelTable(self.entries[:k], self.provenance[:k])):
                bad.append(k)
        return bad


def _boundary_model(k: int, terms: dict) -> dict:
    X = model_product(k + 1)
    out: dict = {}
    for s, c in terms.items():
        add_into(out, X.boundary(s), c)
    return out


def ez_apply(P: Product, s, table: ModelTable) -> dict:
    """Natural extension of the model entry to ``s = (sigma, tau)``."""
    sigma, tau = s
    n = P.degree(s)
    X, Y = P.left, P.right
    out: dict = {}
    for (a, b), c in table.entry(n).items():
        add_into(out, {(X.apply_vertex_map(sigma, a), Y.apply_vertex_map(tau, b)): c})
    return out


def ez_homotopy(P: Product, table: ModelTable) -> ChainHomotopy:
    return ChainHomotopy(lambda s: ez_apply(P, s, table), P.degree, table.max_k, "P_EZ")


def model_rhs(k: int, table: ModelTable) -> dict:
    """``(-P_{k-1} d + shuffle o AW - id)(top x top)`` using lower entries of ``table``."""
    X = model_product(k)
    top = _top(k)
    out: dict = {}
    for key, c in aw(X, top).items():
        add_into(out, shuffle(X, key), c)
    add_into(out, {top: -1})
    if k > 0:
        for face, c in X.boundary(top).items():
            add_into(out, ez_apply(X, face, table), -c)
    return out


def cone(s):
    """Prepend vertex 0 to both factors; ``dh + hd = id`` in positive degrees."""
    return ((0,) + s[0], (0,) + s[1])


def cone_solve(k: int, table: ModelTable) -> dict:
    b = model_rhs(k, table)
    if not b:
        return {}
    if _boundary_model(k - 1, b) if k > 0 else False:
        raise ModelError(f"right-hand side in dimension {k} is not a cycle")
    x: dict = {}
    for s, c in b.items():
        add_into(x, {cone(s): c})
    if _boundary_model(k, x) != b:
        raise ModelError(f"cone solution in dimension {k} failed re-verification")
    return x


def _system(k: int, table: ModelTable):
    """Boundary matrix ``C_{k+1} -> C_k`` of ``Delta^k x Delta^k`` and the model rhs."""
    X = model_product(k)
    cols = X.simplices(k + 1)
    rows = X.simplices(k)
    ridx = {s: i for i, s in enumerate(rows)}
    ent = {}
    for j, s in enumerate(cols):
        for f, c in X.boundary(s).items():
            ent[(ridx[f], j)] = c
    A = SparseIntMatrix(len(rows), len(cols), ent)
    b = {ridx[s]: c for s, c in model_rhs(k, table).items()}
    return A, b, rows, cols


def _moves(k: int, cols: list) -> list[dict]:
    """Boundaries of ``(k+2)``-simplices, as coordinate vectors over ``cols``."""
    X = model_product(k)
    cidx = {s: i for i, s in enumerate(cols)}
    out = []
    for s in X.simplices(k + 2):
        m = {cidx[f]: c for f, c in X.boundary(s).items()}
        if m:
            out.append(m)
    return out


def solve_model(k: int, method: str = "paper", table: ModelTable | None = None, budget: int = 100_000) -> dict:
    """One model entry.  ``table`` supplies the lower entries (published table by default)."""
    if table is None:
        table = paper_table(k - 1) if k > 0 else ModelTable()
    if table.max_k < k - 1:
        raise ModelError(f"lower entries up to {k - 1} are required")
    if method == "paper":
        x = dict(paper_model(k).terms)
    elif method == "cone":
        x = cone_solve(k, table)
    elif method in ("linear", "reduce"):
        A, b, rows, cols = _system(k, table)
        if method == "linear":
            sol = solve_integer(A, b)
        else:
            x0 = cone_solve(k, table)
            cidx = {s: i for i, s in enumerate(cols)}
            start = {cidx[s]: c for s, c in x0.items()}
            sol = reduce_l1(A, b, start, budget=budget, moves=_moves(k, cols)).x
        x = {cols[i]: c for i, c in sol.items() if c}
    else:
        raise ModelError(f"unknown method {method!r}")
    if _boundary_model(k, x) != model_rhs(k, table):
        raise ModelError(f"{method} solution in dimension {k} does not solve the model equation")
    return x


def build_table(max_k: int, method: str = "paper", budget: int = 100_000) -> ModelTable:
    """Fill a table bottom-up, each entry solved against the table's own lower entries."""
    t = ModelTable()
    for k in range(max_k + 1):
        t.append(solve_model(k, method, t, budget), method, check=False)
    return t


def paper_table(max_k: int = 4) -> ModelTable:
    t = ModelTable()
    for k in range(max_k + 1):
        t.append(dict(paper_model(k).terms), "paper", check=False)
    return t


def delta_ez(table: ModelTable, k: int) -> int:
    table.entry(k)
    return max(diameter(e) for e in table.entries[: k + 1])

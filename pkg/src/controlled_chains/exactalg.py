"""Exact sparse integer linear algebra.

Everything here works over arbitrary-precision Python integers; there is
no floating point in this module.  Large systems (the boundary matrices of
``Z(Delta^k x Delta^k)``) are handled by a sparse Gauss-Jordan pass that
only pivots on entries equal to +-1, which keeps every step unimodular.
Whatever is left without a unit pivot is finished with a dense Smith
normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "SparseIntMatrix",
    "NoIntegerSolution",
    "L1Result",
    "smith_normal_form",
    "elementary_divisors",
    "solve_integer",
    "kernel_lattice_basis",
    "reduce_l1",
    "l1_norm",
    "integer_determinant",
    "dump_triplets",
    "load_triplets",
]


class NoIntegerSolution(ValueError):
    """Raised by :func:`solve_integer`.

    ``reason`` is ``"inconsistent"`` when there is no rational solution
    either, and ``"not integral"`` when rational solutions exist but none
    of them is integral.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        msg = reason if not detail else f"{reason}: {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = int(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None):
        m = len(rows)
        n = ncols if ncols is not None else (len(rows[0]) if m else 0)
        ent = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(m, n, ent)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, int]]):
        ent = {(r, c): v for c, col in enumerate(columns) for r, v in col.items()}
        return cls(nrows, len(columns), ent)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other):
        if isinstance(other, SparseIntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            orows = other.row_dicts()
            acc: dict[tuple[int, int], int] = {}
            for (r, k), v in self.entries.items():
                for c, w in orows[k].items():
                    acc[(r, c)] = acc.get((r, c), 0) + v * w
            return SparseIntMatrix(self.rows, other.cols, acc)
        return self.matvec(other)

    def matvec(self, x: Mapping[int, int] | Sequence[int]) -> dict[int, int]:
        """Sparse product ``A x``; ``x`` may be a dict index -> value or a list."""
        if not isinstance(x, Mapping):
            x = {i: v for i, v in enumerate(x) if v}
        out: dict[int, int] = {}
        for (r, c), v in self.entries.items():
            xc = x.get(c)
            if xc:
                out[r] = out.get(r, 0) + v * xc
        return {r: v for r, v in out.items() if v}

    @property
    def shape(self):
        return (self.rows, self.cols)


def l1_norm(x: Mapping[int, int] | Iterable[int]) -> int:
    vals = x.values() if isinstance(x, Mapping) else x
    return sum(abs(v) for v in vals)


def _as_dict(b, length=None) -> dict[int, int]:
    if isinstance(b, Mapping):
        return {int(i): int(v) for i, v in b.items() if v}
    return {i: int(v) for i, v in enumerate(b) if v}


# ---------------------------------------------------------------------------
# dense Smith normal form


def _dense_snf(a: list[list[int]], track: bool = True):
    """In-place SNF of a dense list-of-lists.  Returns (U, D, V) with U A V = D."""
    m = len(a)
    n = len(a[0]) if m else 0
    A = [row[:] for row in a]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rs, rd = A[src], A[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if track:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(i, t, -q)
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(j, t, -q)
                    if A[t][j]:
                        changed = True
            if changed:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if track:
                U[t] = [-v for v in U[t]]
        t += 1
    return U, A, V


def smith_normal_form(A: SparseIntMatrix):
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    ``D`` is diagonal with non-negative entries ``d_1 | d_2 | ...`` and
    ``U``, ``V`` are unimodular.  Dense algorithm; meant for small matrices.
    """
    if A.rows == 0 or A.cols == 0:
        return SparseIntMatrix.identity(A.rows), A, SparseIntMatrix.identity(A.cols)
    U, D, V = _dense_snf(A.to_dense(), track=True)
    return (
        SparseIntMatrix.from_dense(U, A.rows),
        SparseIntMatrix.from_dense(D, A.cols),
        SparseIntMatrix.from_dense(V, A.cols),
    )


def integer_determinant(M: SparseIntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    a = M.to_dense()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# sparse unit-pivot elimination


class _UnitElimination:
    """Gauss-Jordan over Z restricted to +-1 pivots.

    After :meth:`run`, ``pivots`` maps pivot row -> (column, sign) where the
    row reads ``sign * x_col + sum(other non-pivot columns) = rhs``.  The
    rows listed in ``residual`` carry no unit entry and mention non-pivot
    columns only.
    """

    def __init__(self, rows: list[dict[int, int]], rhs: list[int] | None = None):
        self.rows = rows
        self.rhs = rhs if rhs is not None else [0] * len(rows)
        self.colrows: dict[int, set[int]] = {}
        for r, row in enumerate(rows):
            for c in row:
                self.colrows.setdefault(c, set()).add(r)
        self.pivots: dict[int, tuple[int, int]] = {}
        self.pivot_cols: set[int] = set()
        self.residual: list[int] = []
        self.inconsistent: list[int] = []

    def _eliminate(self, prow: int, pcol: int):
        row = self.rows[prow]
        s = row[pcol]  # +-1
        rb = self.rhs[prow]
        for r in list(self.colrows.get(pcol, ())):
            if r == prow:
                continue
            target = self.rows[r]
            q = target[pcol] * s  # target -= q * row  (s*s == 1)
            for c, v in row.items():
                nv = target.get(c, 0) - q * v
                if nv:
                    if c not in target:
                        self.colrows.setdefault(c, set()).add(r)
                    target[c] = nv
                else:
                    if c in target:
                        del target[c]
                        self.colrows[c].discard(r)
            if rb:
                self.rhs[r] -= q * rb

    def run(self):
        pending = sorted(range(len(self.rows)), key=lambda r: len(self.rows[r]))
        progress = True
        while pending and progress:
            progress = False
            still = []
            for r in pending:
                row = self.rows[r]
                if not row:
                    if self.rhs[r]:
                        self.inconsistent.append(r)
                    continue
                best = None
                for c, v in row.items():
                    if v == 1 or v == -1:
                        cnt = len(self.colrows[c])
                        if best is None or cnt < best[0]:
                            best = (cnt, c)
                            if cnt == 1:
                                break
                if best is None:
                    still.append(r)
                    continue
                c = best[1]
                self._eliminate(r, c)
                self.pivots[r] = (c, row[c])
                self.pivot_cols.add(c)
                progress = True
            pending = still
        for r in pending:
            if self.rows[r]:
                self.residual.append(r)
            elif self.rhs[r]:
                self.inconsistent.append(r)
        return self

    def residual_system(self):
        """Dense residual matrix, its column labels, and the residual rhs."""
        cols = sorted({c for r in self.residual for c in self.rows[r]})
        idx = {c: i for i, c in enumerate(cols)}
        dense = []
        for r in self.residual:
            line = [0] * len(cols)
            for c, v in self.rows[r].items():
                line[idx[c]] = v
            dense.append(line)
        return dense, cols, [self.rhs[r] for r in self.residual]

    def back_substitute(self, values: dict[int, int]) -> dict[int, int]:
        """Fill pivot variables given values of the non-pivot ones."""
        x = dict(values)
        for r, (c, s) in self.pivots.items():
            acc = self.rhs[r]
            for cc, v in self.rows[r].items():
                if cc != c:
                    xv = values.get(cc)
                    if xv:
                        acc -= v * xv
            val = s * acc
            if val:
                x[c] = val
        return {k: v for k, v in x.items() if v}


def _dense_solve(dense: list[list[int]], rhs: list[int]):
    """Integral solution of a small dense system via SNF, or raise."""
    m = len(dense)
    n = len(dense[0]) if m else 0
    U, D, V = _dense_snf(dense, track=True)
    ub = [sum(U[i][k] * rhs[k] for k in range(m)) for i in range(m)]
    z = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if ub[i]:
                raise NoIntegerSolution("inconsistent", f"row {i} of the Smith form")
            continue
        if ub[i] % d:
            raise NoIntegerSolution("not integral", f"{ub[i]} not divisible by {d}")
        z[i] = ub[i] // d
    return [sum(V[j][k] * z[k] for k in range(n)) for j in range(n)]


def _dense_kernel(dense: list[list[int]], ncols: int) -> list[list[int]]:
    if not dense:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    U, D, V = _dense_snf(dense, track=True)
    rank = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    return [[V[j][k] for j in range(ncols)] for k in range(rank, ncols)]


def solve_integer(A: SparseIntMatrix, b) -> dict[int, int]:
    """Find an integral ``x`` with ``A x = b``.

    ``b`` is a dict index -> value or a sequence of length ``A.rows``.  The
    result is a sparse dict and is re-verified by exact multiplication.
    """
    bd = _as_dict(b)
    if any(not (0 <= i < A.rows) for i in bd):
        raise ValueError("right-hand side index outside the row range")
    elim = _UnitElimination(A.row_dicts(), [bd.get(i, 0) for i in range(A.rows)]).run()
    if elim.inconsistent:
        raise NoIntegerSolution("inconsistent", f"row {elim.inconsistent[0]} reduces to 0 = nonzero")
    values: dict[int, int] = {}
    if elim.residual:
        dense, cols, rhs = elim.residual_system()
        y = _dense_solve(dense, rhs)
        values = {c: v for c, v in zip(cols, y) if v}
    x = elim.back_substitute(values)
    if A.matvec(x) != bd:
        raise AssertionError("solve_integer produced a wrong solution")  # pragma: no cover
    return x


def kernel_lattice_basis(A: SparseIntMatrix) -> list[dict[int, int]]:
    """An integral basis of ``{x : A x = 0}``, as sparse dicts."""
    elim = _UnitElimination(A.row_dicts()).run()
    dense, rcols, _ = elim.residual_system()
    rset = set(rcols)
    free = [c for c in range(A.cols) if c not in elim.pivot_cols and c not in rset]
    basis = []
    for c in free:
        basis.append(elim.back_substitute({c: 1}))
    for z in _dense_kernel(dense, len(rcols)) if rcols else []:
        basis.append(elim.back_substitute({c: v for c, v in zip(rcols, z) if v}))
    return basis


def elementary_divisors(A: SparseIntMatrix) -> list[int]:
    """Non-zero diagonal entries of the Smith form of ``A`` (sparse-friendly)."""
    elim = _UnitElimination(A.row_dicts()).run()
    divs = [1] * len(elim.pivots)
    if elim.residual:
        dense, cols, _ = elim.residual_system()
        _, D, _ = _dense_snf(dense, track=False)
        divs += [D[i][i] for i in range(min(len(D), len(cols))) if D[i][i]]
    return sorted(divs)


# ---------------------------------------------------------------------------
# L1 reduction


@dataclass
class L1Result:
    x: dict[int, int]
    norm: int
    optimal: bool
    steps: int


def _apply(x: dict[int, int], m: dict[int, int], c: int) -> dict[int, int]:
    y = dict(x)
    for i, v in m.items():
        nv = y.get(i, 0) + c * v
        if nv:
            y[i] = nv
        else:
            y.pop(i, None)
    return y


def _delta(x: dict[int, int], m: dict[int, int], c: int) -> int:
    d = 0
    for i, v in m.items():
        old = x.get(i, 0)
        d += abs(old + c * v) - abs(old)
    return d


def reduce_l1(
    A: SparseIntMatrix,
    b,
    x0,
    budget: int = 100_000,
    moves: Sequence[Mapping[int, int]] | None = None,
) -> L1Result:
    """Search the coset ``x0 + ker A`` for a vector of small L1 norm.

    ``moves`` is a spanning set of the kernel lattice; by default the
    integral kernel basis is used.  Single moves are applied greedily, then
    pairs of moves that only pay off together.  ``budget`` bounds the
    number of candidate evaluations.  ``optimal`` is True only when the
    result provably has minimum norm (empty kernel, zero norm, or the
    norm meets the ``ceil(|b|_1 / max column norm)`` lower bound).
    """
    bd = _as_dict(b)
    x = _as_dict(x0)
    if A.matvec(x) != bd:
        raise ValueError("x0 does not solve A x = b")
    if moves is None:
        moves = kernel_lattice_basis(A)
    moves = [dict(m) for m in moves if m]
    colnorm: dict[int, int] = {}
    for (r, c), v in A.entries.items():
        colnorm[c] = colnorm.get(c, 0) + abs(v)
    maxcol = max(colnorm.values(), default=0)
    lower = -(-l1_norm(bd) // maxcol) if maxcol else 0

    # index moves by coordinate so only moves touching the support are tried
    touching: dict[int, list[int]] = {}
    for k, m in enumerate(moves):
        for i in m:
            touching.setdefault(i, []).append(k)

    steps = 0
    norm = l1_norm(x)

    def done():
        return norm <= lower or steps >= budget

    improved = True
    while improved and not done():
        improved = False
        cand = sorted({k for i in x for k in touching.get(i, ())})
        for k in cand:
            for c in (1, -1):
                steps += 1
                d = _delta(x, moves[k], c)
                if d < 0:
                    x = _apply(x, moves[k], c)
                    norm += d
                    improved = True
                    break
            if done():
                break
        if improved or done():
            continue
        # pairs: first move touches the support, second overlaps the first
        for k in cand:
            for c in (1, -1):
                d1 = _delta(x, moves[k], c)
                y = _apply(x, moves[k], c)
                partners = sorted({j for i in moves[k] for j in touching.get(i, ()) if j != k})
                for j in partners:
                    for c2 in (1, -1):
                        steps += 1
                        d2 = _delta(y, moves[j], c2)
                        if d1 + d2 < 0:
                            x = _apply(y, moves[j], c2)
                            norm += d1 + d2
                            improved = True
                            break
                    if improved or done():
                        break
                if improved or done():
                    break
            if improved or done():
                break
    optimal = not moves or norm == 0 or norm <= lower
    return L1Result(x=x, norm=norm, optimal=optimal, steps=steps)


# ---------------------------------------------------------------------------
# triplet exchange format: "rows cols" then "r c value" per line


def dump_triplets(A: SparseIntMatrix) -> str:
    lines = [f"{A.rows} {A.cols}"]
    for (r, c) in sorted(A.entries):
        lines.append(f"{r} {c} {A.entries[(r, c)]}")
    return "\n".join(lines) + "\n"


def load_triplets(text: str) -> SparseIntMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].replace("/", " ").split()
    rows, cols = int(head[0]), int(head[1])
    ent: dict[tuple[int, int], int] = {}
    for ln in lines[1:]:
        r, c, v = ln.split()
        key = (int(r), int(c))
        ent[key] = ent.get(key, 0) + int(v)
    return SparseIntMatrix(rows, cols, ent)

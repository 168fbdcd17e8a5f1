import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from controlled_chains.exactalg import (
    NoIntegerSolution,
    SparseIntMatrix,
    dump_triplets,
    elementary_divisors,
    integer_determinant,
    kernel_lattice_basis,
    l1_norm,
    load_triplets,
    reduce_l1,
    smith_normal_form,
    solve_integer,
)


def det_oracle(m):
    # Leibniz expansion, independent of the elimination code
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        p = 1
        for i in range(n):
            p *= m[i][perm[i]]
        total += -p if inv % 2 else p
    return total


def divisor_oracle(m):
    """Elementary divisors from gcds of k x k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    dets = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = math.gcd(g, det_oracle([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        dets.append(g)
    return [dets[i] // dets[i - 1] for i in range(1, len(dets))]


small = st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=3)


def test_snf_diag_2_3():
    A = SparseIntMatrix.from_dense([[2, 0], [0, 3]])
    U, D, V = smith_normal_form(A)
    assert D.to_dense() == [[1, 0], [0, 6]]
    assert (U @ A @ V).to_dense() == D.to_dense()


@settings(max_examples=60, deadline=None)
@given(small)
def test_elementary_divisors_match_minors(m):
    assert elementary_divisors(SparseIntMatrix.from_dense(m)) == divisor_oracle(m)


@settings(max_examples=60, deadline=None)
@given(small)
def test_snf_is_a_factorisation(m):
    A = SparseIntMatrix.from_dense(m)
    U, D, V = smith_normal_form(A)
    assert (U @ A @ V).to_dense() == D.to_dense()
    assert abs(integer_determinant(U)) == 1 and abs(integer_determinant(V)) == 1
    d = [D.to_dense()[i][i] for i in range(min(D.rows, D.cols))]
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_leibniz(m):
    assert integer_determinant(SparseIntMatrix.from_dense(m)) == det_oracle(m)


def test_solve_not_integral():
    with pytest.raises(NoIntegerSolution) as exc:
        solve_integer(SparseIntMatrix.from_dense([[2]]), [3])
    assert exc.value.reason == "not integral"


def test_solve_inconsistent():
    A = SparseIntMatrix.from_dense([[1, 1], [1, 1]])
    with pytest.raises(NoIntegerSolution) as exc:
        solve_integer(A, [1, 2])
    assert exc.value.reason == "inconsistent"


@settings(max_examples=60, deadline=None)
@given(small, st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve_roundtrip(m, x):
    A = SparseIntMatrix.from_dense(m)
    b = A.matvec(dict(enumerate(x)))
    y = solve_integer(A, b)
    assert A.matvec(y) == b


@settings(max_examples=40, deadline=None)
@given(small)
def test_kernel_basis_spans_rank(m):
    A = SparseIntMatrix.from_dense(m)
    ker = kernel_lattice_basis(A)
    rank = len(elementary_divisors(A))
    assert len(ker) == A.cols - rank
    for v in ker:
        assert A.matvec(v) == {}


def test_sparse_elimination_large_unit_system():
    # path graph incidence: unit pivots all the way
    n = 300
    ent = {}
    for i in range(n):
        ent[(i, i)] = 1
        ent[(i, i + 1)] = -1
    A = SparseIntMatrix(n, n + 1, ent)
    b = {i: (i % 7) - 3 for i in range(n) if i % 7 != 3}
    x = solve_integer(A, b)
    assert A.matvec(x) == b
    assert len(kernel_lattice_basis(A)) == 1


def test_reduce_l1_finds_short_vector():
    # x0 + k*(1,1,1,1) in ker of row-sum differences
    A = SparseIntMatrix.from_dense([[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]])
    x0 = {0: 5, 1: 5, 2: 5, 3: 5}
    r = reduce_l1(A, {}, x0)
    assert r.norm == 0 and r.x == {} and r.optimal


def test_reduce_l1_keeps_solution():
    rng = random.Random(3)
    A = SparseIntMatrix.from_dense([[rng.randint(-2, 2) for _ in range(6)] for _ in range(3)])
    x0 = {i: rng.randint(-4, 4) for i in range(6)}
    b = A.matvec(x0)
    r = reduce_l1(A, b, x0)
    assert A.matvec(r.x) == b
    assert r.norm == l1_norm(r.x) <= l1_norm(x0)


def test_reduce_rejects_non_solution():
    A = SparseIntMatrix.from_dense([[1]])
    with pytest.raises(ValueError):
        reduce_l1(A, {0: 1}, {0: 2})


def test_triplet_roundtrip():
    A = SparseIntMatrix.from_dense([[0, 2, -1], [3, 0, 0]])
    assert load_triplets(dump_triplets(A)) == A


def test_matrix_rejects_out_of_range():
    with pytest.raises((ValueError, IndexError)):
        SparseIntMatrix(1, 1, {(1, 0): 1})

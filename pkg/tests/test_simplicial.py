import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from controlled_chains.chains import add_into, homology_ranks, verify_chain_map
from controlled_chains.groups import CyclicGroup, FreeGroup, SymmetricGroup
from controlled_chains.simplicial import (
    BarComplex,
    Delta,
    Product,
    aw,
    aw_map,
    check_vertex_map,
    compose_vertex_maps,
    lambda_parts,
    moore_complex,
    shuffle,
    shuffle_map,
    shuffle_term_bound,
    shuffles,
    tensor_complex,
)

S3 = SymmetricGroup(3)
BS3 = BarComplex(S3)
D3 = Delta(3)


def identities_hold(X, s):
    """Simplicial identities on one simplex of degree >= 2."""
    n = X.degree(s)
    d, sg = X.face, X.degeneracy
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if d(i, d(j, s)) != d(j - 1, d(i, s)):
                return False
    for i in range(n + 1):
        for j in range(i, n + 1):
            if sg(j + 1, sg(i, s)) != sg(i, sg(j, s)):
                return False
    for i in range(n + 2):
        for j in range(n + 1):
            lhs = d(i, sg(j, s))
            if i < j:
                rhs = sg(j - 1, d(i, s))
            elif i in (j, j + 1):
                rhs = s
            else:
                rhs = sg(j, d(i - 1, s))
            if lhs != rhs:
                return False
    return True


@pytest.mark.parametrize("X", [BS3, D3, Product(BS3, D3)], ids=["BS3", "Delta3", "product"])
def test_simplicial_identities_exhaustive(X):
    for n in (2, 3):
        for s in X.simplices(n):
            assert identities_hold(X, s)


def test_identities_free_group_samples():
    B = BarComplex(FreeGroup(["x", "y"]))
    rng = random.Random(7)
    for _ in range(200):
        assert identities_hold(B, B.random_simplex(3, rng))


def test_bar_faces():
    Z5 = CyclicGroup(5)
    B = BarComplex(Z5)
    s = (1, 2, 3)
    assert B.face(0, s) == (2, 3)
    assert B.face(1, s) == (3, 3)
    assert B.face(2, s) == (1, 0)
    assert B.face(3, s) == (1, 2)
    assert B.degeneracy(1, s) == (1, 0, 2, 3)
    with pytest.raises(IndexError):
        B.face(4, s)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_vertex_map_functoriality(data):
    # apply(apply(s, a), b) = apply(s, a . b)
    n = data.draw(st.integers(1, 4))
    m = data.draw(st.integers(0, 4))
    k = data.draw(st.integers(0, 4))
    a = tuple(sorted(data.draw(st.lists(st.integers(0, n), min_size=m + 1, max_size=m + 1))))
    b = tuple(sorted(data.draw(st.lists(st.integers(0, m), min_size=k + 1, max_size=k + 1))))
    rng = random.Random(data.draw(st.integers(0, 999)))
    for X in (BS3, Delta(None), Product(BS3, BS3)):
        if isinstance(X, Delta):
            s = tuple(sorted(rng.randrange(5) for _ in range(n + 1)))
        else:
            s = X.random_simplex(n, rng)
        lhs = X.apply_vertex_map(X.apply_vertex_map(s, a), b)
        rhs = X.apply_vertex_map(s, compose_vertex_maps(a, b))
        assert lhs == rhs


def test_fast_bar_vertex_map_matches_generic():
    from controlled_chains.simplicial import SimplicialSet

    rng = random.Random(11)
    for _ in range(200):
        n = rng.randrange(1, 5)
        s = BS3.random_simplex(n, rng)
        a = tuple(sorted(rng.randrange(n + 1) for _ in range(rng.randrange(1, 6))))
        assert BS3.apply_vertex_map(s, a) == SimplicialSet.apply_vertex_map(BS3, s, a)


def test_vertex_map_validation():
    with pytest.raises(ValueError):
        check_vertex_map((2, 1), 3)
    with pytest.raises(ValueError):
        check_vertex_map((0, 5), 3)


@pytest.mark.parametrize("X", [BS3, D3], ids=["BS3", "Delta3"])
def test_d_squared_zero(X):
    C = moore_complex(X)
    for n in range(2, 4):
        assert C.check_d_squared(n) == []


def test_key_roundtrip():
    P = Product(BS3, D3)
    s = (((1, 0, 2), (0, 2, 1)), (0, 1, 3))
    text = P.format_key(s)
    assert P.parse_key(text) == s
    with pytest.raises(ValueError):
        D3.parse_key("d:[0,4]")
    with pytest.raises(ValueError):
        P.parse_key("p(d:[0],d:[0,1])")


def perm_sign(perm):
    # cycle-count parity, independent of the inversion count used in shuffles()
    seen, sign = set(), 1
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@pytest.mark.parametrize("p,q", [(0, 3), (1, 1), (2, 2), (1, 3), (3, 2)])
def test_shuffle_signs(p, q):
    got = list(shuffles(p, q))
    assert len(got) == len(list(itertools.combinations(range(p + q), p)))
    for sign, mu, nu in got:
        assert sign == perm_sign(list(mu) + list(nu))


def test_shuffle_formula_degree_two():
    B = BarComplex(CyclicGroup(5))
    P = Product(B, B)
    g, h = 2, 3
    assert shuffle(P, ((g,), (h,))) == {((g, 0), (0, h)): 1, ((0, g), (h, 0)): -1}


def aw_oracle(P, s):
    # front face via repeated last faces, back face via repeated first faces
    sigma, tau = s
    n = P.degree(s)
    out = {}
    for i in range(n + 1):
        a = sigma
        for _ in range(n - i):
            a = P.left.face(P.left.degree(a), a)
        b = tau
        for _ in range(i):
            b = P.right.face(0, b)
        add_into(out, {(a, b): 1})
    return out


def test_aw_matches_oracle():
    P = Product(BS3, D3)
    for n in range(4):
        for s in P.simplices(n)[:400]:
            assert aw(P, s) == aw_oracle(P, s)


def test_aw_and_shuffle_are_chain_maps():
    P = Product(BS3, BS3)
    src, tgt = moore_complex(P), tensor_complex(BS3, BS3)
    rng = random.Random(5)
    keys = [P.random_simplex(rng.randrange(1, 5), rng) for _ in range(150)]
    assert verify_chain_map(aw_map(P), src, tgt, keys) == []
    tkeys = []
    for _ in range(150):
        p, q = rng.randrange(4), rng.randrange(4)
        tkeys.append((BS3.random_simplex(p, rng), BS3.random_simplex(q, rng)))
    assert verify_chain_map(shuffle_map(P), tgt, src, tkeys) == []


def normalize(X, terms):
    return {k: v for k, v in terms.items() if not X.is_degenerate(k[0]) and not X.is_degenerate(k[1])}


def test_aw_after_shuffle_is_identity_normalized():
    B = BarComplex(CyclicGroup(2))
    P = Product(B, B)
    for p in range(5):
        for q in range(5 - p):
            for a in B.simplices(p):
                for b in B.simplices(q):
                    out = {}
                    for k, v in shuffle(P, (a, b)).items():
                        add_into(out, aw(P, k), v)
                    assert normalize(B, out) == normalize(B, {(a, b): 1})


def test_lambda_parts_sum_to_aw():
    P = Product(BS3, BS3)
    rng = random.Random(2)
    for n in range(4):
        s = P.random_simplex(n, rng)
        lg, lh, lam = lambda_parts(P, s)
        total = dict(lam)
        add_into(total, lg)
        add_into(total, lh)
        assert total == aw(P, s)
    lg, lh, lam = lambda_parts(P, ((), ()))
    assert lam == {((), ()): -1}


def test_shuffle_term_bound():
    assert [shuffle_term_bound(k) for k in range(6)] == [1, 1, 2, 3, 6, 10]
    B = BarComplex(CyclicGroup(3))
    P = Product(B, B)
    for p in range(4):
        for q in range(4):
            assert len(shuffle(P, ((1,) * p, (2,) * q))) <= shuffle_term_bound(p + q)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_homology_of_simplex_square(k):
    C = moore_complex(Product(Delta(k), Delta(k)))
    ranks = homology_ranks(C, k + 1, start=0)
    assert ranks[0] == (1, [])
    assert all(r == (0, []) for r in ranks[1:])


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_h1_of_cyclic_bar(n):
    C = moore_complex(BarComplex(CyclicGroup(n)))
    (free, tors), = homology_ranks(C, 1, start=1)
    assert free == 0 and tors == [n]

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from controlled_chains.chains import (
    Chain,
    ChainHomotopy,
    ChainMap,
    DegreeRangeError,
    TensorComplex,
    diameter,
    diameter_function,
    homotopy_compose,
    homotopy_sum,
    homotopy_tensor,
    tensor_map,
    verify_chain_homotopy,
)
from controlled_chains.groups import SymmetricGroup, conjugate
from controlled_chains.homotopies import conj_homotopy, induced_map
from controlled_chains.simplicial import BarComplex, moore_complex

S3 = SymmetricGroup(3)
B = BarComplex(S3)
C = moore_complex(B)
ID = ChainMap.identity()
G, H = (1, 0, 2), (1, 2, 0)


def mu(g):
    return induced_map(lambda x: conjugate(S3, x, g), "mu")


def keys(up_to=3):
    return [s for n in range(up_to + 1) for s in B.simplices(n)]


terms = st.dictionaries(st.sampled_from("abcde"), st.integers(-5, 5), max_size=5)


@settings(max_examples=60)
@given(terms, terms)
def test_chain_arithmetic(x, y):
    a, b = Chain(1, x), Chain(1, y)
    assert (a + b) - b == a
    assert a - a == 0
    assert (a + b).diameter <= a.diameter + b.diameter
    assert (3 * a).diameter == 3 * a.diameter
    assert (-a).diameter == a.diameter


def test_chain_drops_zeros():
    c = Chain(2, [(1, "x"), (-1, "x"), (2, "y")])
    assert c.terms == {"y": 2} and len(c) == 1


def test_chain_degree_mismatch():
    with pytest.raises(ValueError):
        Chain(1, {"x": 1}) + Chain(2, {"y": 1})


def test_partial_homotopy_range():
    P = conj_homotopy(S3, G, max_degree=2)
    P(((0, 1, 2),) * 2)
    with pytest.raises(DegreeRangeError):
        P(((0, 1, 2),) * 3)


def test_sum_construction():
    P, Q = conj_homotopy(S3, G), conj_homotopy(S3, H)
    R = homotopy_sum(P, Q)
    rep = verify_chain_homotopy(R, ID + ID, mu(G) + mu(H), C, C, keys())
    assert rep.ok
    dP = diameter_function(P, {n: B.simplices(n) for n in range(4)})
    dQ = diameter_function(Q, {n: B.simplices(n) for n in range(4)})
    dR = diameter_function(R, {n: B.simplices(n) for n in range(4)})
    assert all(dR[k] <= dP[k] + dQ[k] for k in dR)


def test_compose_construction():
    # P: id ~ mu_g, Q: id ~ mu_h, so P + Q mu_g : id ~ mu_h mu_g
    P, Q = conj_homotopy(S3, G), conj_homotopy(S3, H)
    R = homotopy_compose(ID, P, Q, mu(G))
    rep = verify_chain_homotopy(R, ID, mu(G).then(mu(H)), C, C, keys())
    assert rep.ok
    for k, d in rep.diameters.items():
        assert d <= 1 * (k + 1) + (k + 1) * 1


def test_tensor_construction():
    P, Q = conj_homotopy(S3, G), conj_homotopy(S3, H)
    T = TensorComplex(C, C, len)
    R = homotopy_tensor(P, ID, mu(G), Q, len)
    phi = tensor_map(ID, ID)
    psi = tensor_map(mu(G), mu(H))
    rng = random.Random(4)
    ks = [(B.random_simplex(rng.randrange(3), rng), B.random_simplex(rng.randrange(3), rng)) for _ in range(200)]
    rep = verify_chain_homotopy(R, phi, psi, T, T, ks)
    assert rep.ok
    for (a, b) in ks:
        bound = (len(a) + 1) * 1 + 1 * (len(b) + 1)
        assert diameter(R((a, b))) <= bound


def test_verify_reports_failures():
    P = conj_homotopy(S3, G)
    rep = verify_chain_homotopy(P, ID, ID, C, C, keys(1))
    assert not rep.ok and rep.failures


def test_zero_homotopy():
    Z = ChainHomotopy.zero(len)
    assert verify_chain_homotopy(Z, ID, ID, C, C, keys(2)).ok

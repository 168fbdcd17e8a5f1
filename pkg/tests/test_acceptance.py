"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from controlled_chains.bgmap import BGMorphism, LabeledComplex, boundary_of_simplex, build_morphism, torus_labeling
from controlled_chains.bounds import check_constant_chain, complexity_lower_bounds, constant_chain, lens_rho
from controlled_chains.chains import ChainMap, add_into, diameter, homology_ranks, verify_chain_homotopy
from controlled_chains.ez_models import ModelTable, build_table, cone_solve, ez_homotopy, model_rhs, paper_table, solve_model
from controlled_chains.groups import CyclicGroup, DirectProduct, FreeGroup, SymmetricGroup, build_tower, conjugate
from controlled_chains.homotopies import (
    PhiTower,
    conj_homotopy,
    delta_bdh,
    delta_bdh_corrected,
    delta_bdh_table,
    induced_map,
    verify_phi,
)
from controlled_chains.simplicial import (
    BarComplex,
    Delta,
    Product,
    aw,
    aw_map,
    moore_complex,
    shuffle,
    shuffle_map,
)

from test_bounds import lens_oracle

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def test_criterion_01_ez_models(report):
    t0 = time.perf_counter()
    t = paper_table(4)
    bad = t.verify()
    dt = time.perf_counter() - t0
    report(1, bad == [] and dt < 300, f"P_1..P_4 solve the model equation exactly ({dt:.2f}s)")


def test_criterion_02_delta_tables(report):
    ez = paper_table(4).diameters()
    bdh = delta_bdh_table(4)
    ok = ez == [0, 1, 4, 11, 26] and bdh == [0, 6, 26, 186, 3410]
    report(2, ok, f"delta_EZ {ez}, delta_BDH recurrence {bdh}")


def test_criterion_03_constant_chain(report):
    values = [got for _, got, _ in constant_chain()]
    ok = check_constant_chain() == [] and values == [
        181545, 363090, 251258280, 69713280, 34856640, 209139840, 627419520, 278853120
    ]
    report(3, ok, f"constants {values}")


def _conj_ok(G, gs, keys_by_k):
    C = moore_complex(BarComplex(G))
    for g in gs:
        S = conj_homotopy(G, g)
        mu = induced_map(lambda x, g=g: conjugate(G, x, g))
        for k, keys in keys_by_k.items():
            r = verify_chain_homotopy(S, ChainMap.identity(), mu, C, C, keys)
            if not r.ok or r.diameters.get(k, 0) > k + 1:
                return False
    return True


def test_criterion_04_conjugation(report):
    t0 = time.perf_counter()
    Z3 = CyclicGroup(3)
    B3 = BarComplex(Z3)
    ok = _conj_ok(Z3, Z3.elements(), {k: B3.simplices(k) for k in range(4)})
    assert [len(B3.simplices(k)) for k in range(4)] == [1, 3, 9, 27]
    rng = random.Random(4)
    for G in (SymmetricGroup(4), FreeGroup(["x", "y"])):
        B = BarComplex(G)
        gs = [G.random_element(rng) for _ in range(5)]
        keys = {k: [B.random_simplex(k, rng) for _ in range(200)] for k in range(5)}
        ok &= _conj_ok(G, gs, keys)
    dt = time.perf_counter() - t0
    report(4, ok, f"dS+Sd = mu_g - id on BZ3 exhaustive, 10^3 samples each on BS4 and F2, d_S(k) <= k+1 ({dt:.2f}s)")


def test_criterion_05_ez_naturality(report):
    B = BarComplex(CyclicGroup(2))
    P = Product(B, B)
    C = moore_complex(P)
    H = ez_homotopy(P, paper_table(4))
    ez = aw_map(P).then(shuffle_map(P))
    keys = [s for k in range(4) for s in P.simplices(k)]
    rng = random.Random(5)
    keys += [P.random_simplex(4, rng) for _ in range(500)]
    rep = verify_chain_homotopy(H, ChainMap.identity(), ez, C, C, keys)

    def normal(terms):
        return {k: v for k, v in terms.items() if not B.is_degenerate(k[0]) and not B.is_degenerate(k[1])}

    dn_ok = True
    for p in range(5):
        for q in range(5 - p):
            for a in B.simplices(p):
                for b in B.simplices(q):
                    out = {}
                    for k, v in shuffle(P, (a, b)).items():
                        add_into(out, aw(P, k), v)
                    dn_ok &= normal(out) == normal({(a, b): 1})
    report(5, rep.ok and dn_ok, f"dP+Pd = EZ.AW - id on {rep.checked} simplices; AW.EZ = id on normalized p+q <= 4")


def test_criterion_06_identity_parts(report):
    # the identity half of criterion 6, which holds
    ok = True
    for G in (CyclicGroup(2), CyclicGroup(3), SymmetricGroup(3)):
        r = verify_phi(G, 1, build_tower(G, 1))
        ok &= r.ok
    Z2 = CyclicGroup(2)
    tower = build_tower(Z2, 2)
    phis = PhiTower(Z2, 3)
    r2 = verify_phi(Z2, 2, tower, degrees=[2], samples=200, seed=6, phis=phis)
    ok &= r2.ok and r2.checked == 200
    ok &= tower.top.degree == 576
    rng = random.Random(6)
    for G in (Z2, SymmetricGroup(3)):
        B = BarComplex(G)
        P3 = PhiTower(G, 3)[3]
        for k in range(4):
            for _ in range(100):
                ok &= diameter(P3(B.random_simplex(k, rng))) <= delta_bdh_corrected(k)
    report("6a", ok, "Phi^1 identity (Z2, Z3, S3), Phi^2 identity on 200 dim-2 samples, Phi^3 within corrected bounds")


@pytest.mark.xfail(strict=True, reason="Phi^2, Phi^3 reach 32 > 26 in degree 2; see decisions ledger")
def test_criterion_06_published_bound(report):
    rng = random.Random(6)
    worst = {}
    for G in (CyclicGroup(2), SymmetricGroup(3)):
        B = BarComplex(G)
        P3 = PhiTower(G, 3)[3]
        for k in range(4):
            for _ in range(100):
                d = diameter(P3(B.random_simplex(k, rng)))
                worst[k] = max(worst.get(k, 0), d)
    ok = all(worst[k] <= delta_bdh(k) for k in worst)
    detail = ", ".join(f"k={k}: {worst[k]} vs {delta_bdh(k)}" for k in sorted(worst))
    report(6, ok, f"d_Phi^3(k) <= published delta_BDH(k): {detail}")


def test_criterion_07_cone_solver(report):
    ok = True
    for k in range(5):
        lower = paper_table(k - 1) if k else ModelTable()
        x = cone_solve(k, lower)
        b = model_rhs(k, lower)
        X = Product(Delta(k + 1), Delta(k + 1))
        dx = {}
        for s, c in x.items():
            add_into(dx, X.boundary(s), c)
        ok &= dx == b
    ok &= build_table(4, "cone").verify() == []
    d1 = diameter(solve_model(1, "reduce", paper_table(0)))
    d2 = diameter(solve_model(2, "reduce", paper_table(1)))
    ok &= d1 <= 1 and d2 <= 4
    report(7, ok, f"cone solutions verify for k <= 4; reduced diameters k=1: {d1}, k=2: {d2}")


def test_criterion_08_lens(report):
    ok = all(lens_rho(n) == lens_oracle(n) for n in range(1, 201))
    for n in range(4, 1001):
        r = complexity_lower_bounds(n)
        ok &= r["lens_lower"] <= r["lens_upper"]
    report(8, ok, "lens_rho = sawtooth sum for n <= 200; bracket holds for 4 <= n <= 1000")


def test_criterion_09_homology(report):
    ok = True
    for k in range(1, 4):
        ranks = homology_ranks(moore_complex(Product(Delta(k), Delta(k))), k + 1, start=1)
        ok &= all(r == (0, []) for r in ranks)
    for n in range(2, 7):
        (h1,) = homology_ranks(moore_complex(BarComplex(CyclicGroup(n))), 1, start=1)
        ok &= h1 == (0, [n])
    ok &= homology_ranks(moore_complex(BarComplex(CyclicGroup(1))), 1, start=1)[0] == (0, [])
    report(9, ok, "H_i(Delta^k x Delta^k) = 0 for 1 <= i <= k+1, k <= 3; H_1(BZ_n) = Z_n for n <= 6")


def test_criterion_10_bgmap(report):
    X = boundary_of_simplex(3)
    Z5 = CyclicGroup(5)
    pot = [0, 2, 3, 1]
    tet = LabeledComplex(X, Z5, {(a, b): (pot[b] - pot[a]) % 5 for a, b in X.edges()})
    tor = torus_labeling(3, DirectProduct(CyclicGroup(3), CyclicGroup(4)), (1, 0), (0, 1))
    ok = True
    for L in (tet, tor):
        f = build_morphism(L)
        ok &= f.check() == []
        g = BGMorphism(L, "first-edge")
        ok &= all(f(s) == g(s) for n in range(L.X.dim + 2) for s in L.X.simplices(n))
    report(10, ok, "labeled boundary of Delta^3 and 3x3 torus: simplicial, both recursion forms agree")


def test_criterion_11_golden(report):
    cases = {
        "delta-tables.json": ["delta-tables"],
        "rho-bound-simplicial-1.json": ["rho-bound", "--simplicial", "1"],
        "rho-bound-surgery-8-0.json": ["rho-bound", "--surgery-crossings", "8", "--framings", "0"],
        "rho-bound-stevedore.json": ["rho-bound", "--surgery-crossings", "8", "--framings", "0", "--writhes", "0"],
        "suite-lens.json": ["suite", "lens"],
    }
    ok = True
    for name, args in cases.items():
        out = subprocess.run([sys.executable, "-m", "controlled_chains", *args], capture_output=True, text=True).stdout
        ok &= out == (GOLDEN / name).read_text()
    report(11, ok, f"{len(cases)} CLI outputs byte-identical to golden files")

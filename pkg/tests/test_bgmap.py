import pytest

from controlled_chains.bgmap import (
    BGMorphism,
    LabeledComplex,
    LabelingError,
    OrderedComplex,
    boundary_of_simplex,
    build_morphism,
    format_labeled_complex,
    labeling_from_tree,
    parse_labeled_complex,
    torus_complex,
    torus_labeling,
    validate_labeling,
)
from controlled_chains.groups import CyclicGroup, DirectProduct, FreeGroup, SymmetricGroup

Z5 = CyclicGroup(5)


def triangle(labels, group=Z5):
    X = boundary_of_simplex(2)
    return LabeledComplex(X, group, labels)


def test_all_trivial_labels():
    X = boundary_of_simplex(3)
    L = LabeledComplex(X, Z5, {e: 0 for e in X.edges()})
    assert validate_labeling(L)
    assert build_morphism(L).check() == []


def test_cocycle_pass_and_fail():
    S3 = SymmetricGroup(3)
    g, h = (1, 0, 2), (0, 2, 1)
    X = OrderedComplex(3, [(0, 1, 2)])
    good = LabeledComplex(X, S3, {(0, 1): g, (1, 2): h, (0, 2): S3.mul(g, h)})
    assert validate_labeling(good)
    bad = LabeledComplex(X, S3, {(0, 1): g, (1, 2): h, (0, 2): S3.mul(h, g)})
    rep = validate_labeling(bad)
    assert not rep and rep.violations[0][:2] == ("cocycle", (0, 1, 2))
    with pytest.raises(LabelingError):
        build_morphism(bad)


def test_unlabeled_edge_reported():
    rep = validate_labeling(triangle({(0, 1): 1, (1, 2): 1}))
    assert not rep and rep.violations[0][0] == "unlabeled"


def test_boundary_tetrahedron():
    X = boundary_of_simplex(3)
    # vertex potentials give a coboundary labeling
    pot = [0, 2, 3, 1]
    L = LabeledComplex(X, Z5, {(a, b): (pot[b] - pot[a]) % 5 for a, b in X.edges()})
    f = build_morphism(L)
    assert f.check(max_degree=4) == []
    g = build_morphism(L, "first-edge")
    for n in range(5):
        for s in X.simplices(n):
            assert f(s) == g(s)


def test_torus_commuting_labels():
    G = DirectProduct(CyclicGroup(3), CyclicGroup(4))
    L = torus_labeling(3, G, (1, 0), (0, 1))
    assert validate_labeling(L)
    f = build_morphism(L)
    assert f.check(max_degree=3) == []
    g = BGMorphism(L, "first-edge")
    for n in range(4):
        for s in L.X.simplices(n):
            assert f(s) == g(s)


def test_torus_noncommuting_rejected():
    S3 = SymmetricGroup(3)
    L = torus_labeling(3, S3, (1, 0, 2), (0, 2, 1))
    assert not validate_labeling(L)


def test_torus_shape():
    X = torus_complex(3)
    assert len(X.nondegenerate(2)) == 18 and len(X.edges()) == 27
    with pytest.raises(ValueError):
        torus_complex(2)


def test_morphism_rejects_foreign_simplex():
    X = OrderedComplex(3, [(0, 1), (1, 2)])
    L = LabeledComplex(X, Z5, {(0, 1): 1, (1, 2): 2})
    f = build_morphism(L)
    assert f((0, 1, 1)) == (1, 0)
    with pytest.raises(LabelingError):
        f((0, 2))


def test_tree_labeling():
    X = boundary_of_simplex(2)
    F = FreeGroup(["x"])
    x = F.gen("x")
    L = labeling_from_tree(X, F, [(0, 1), (1, 2)], {(0, 2): x})
    assert validate_labeling(L)
    assert build_morphism(L).check(max_degree=3) == []
    filled = OrderedComplex(3, [(0, 1, 2)])
    assert not validate_labeling(labeling_from_tree(filled, F, [(0, 1), (1, 2)], {(0, 2): x}))
    assert validate_labeling(labeling_from_tree(filled, F, [(0, 1), (1, 2)], {(2, 0): F.identity}))
    with pytest.raises(LabelingError):
        labeling_from_tree(X, F, [(0, 1)], {})


def test_file_roundtrip():
    L = torus_labeling(3, DirectProduct(CyclicGroup(3), CyclicGroup(4)), (1, 0), (0, 1))
    text = format_labeled_complex(L)
    M = parse_labeled_complex(text, L.group)
    assert M.labels == L.labels and M.X.faces == L.X.faces
    with pytest.raises(LabelingError):
        parse_labeled_complex("simplex 0 1\n", Z5)
    with pytest.raises(LabelingError):
        parse_labeled_complex("vertices 2\nedge 0 1\n", Z5)

import itertools
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from multirel.errors import UsageError
from multirel.msset import (
    colim_over_simplices,
    generated_subobject,
    identity_op,
    indices,
    is_two_coskeletal,
    materialize,
    monotone_maps,
    naturality_violations,
    product_msset,
    simplex_category,
    skeleton,
    standard,
    terminal_msset,
    validate_msset,
)


def brute_maps(m, p):
    return sum(1 for f in itertools.product(range(p + 1), repeat=m + 1) if list(f) == sorted(f))


def test_monotone_maps_enumeration():
    for m in range(4):
        for p in range(4):
            maps = monotone_maps(m, p)
            assert len(maps) == len(set(maps)) == brute_maps(m, p)


def test_standard_counts():
    T = standard((0, 0), 2)
    assert all(len(T.cells(m)) == 1 for m in T.indices())
    assert len(standard((1, 1), 2).cells((0, 0))) == 4
    assert len(standard((0, 1), 2).cells((1, 1))) == 3


@pytest.mark.parametrize("degrees", [(0, 1), (1, 1), (2, 0), (0, 1, 1), (1, 0, 0)])
def test_standard_counts_match_brute_force(degrees):
    X = standard(degrees, 2)
    for m in X.indices():
        assert len(X.cells(m)) == prod(brute_maps(k, p) for k, p in zip(m, degrees))


@pytest.mark.parametrize("degrees", [(0, 1), (1, 1), (0, 2), (1, 0, 1)])
def test_simplicial_identities(degrees):
    assert validate_msset(standard(degrees, 2)).valid
    assert validate_msset(materialize(standard(degrees, 2))).valid


def test_broken_table_is_caught():
    X = materialize(standard((0, 1), 2))
    key = ((0, 1), 1, 0)
    table = X.faces[key]
    a, b = sorted(set(table.values()))[:2]
    table.update({x: (b if y == a else a) for x, y in table.items()})
    assert not validate_msset(X).valid


def test_product_with_terminal():
    X = standard((1, 1), 2)
    P = product_msset(X, terminal_msset(1, 2))
    for m in X.indices():
        assert len(P.cells(m)) == len(X.cells(m))


def test_product_of_single_axis_standards():
    A, B, S = standard((1, 0), 2), standard((0, 1), 2), standard((1, 1), 2)
    P = product_msset(A, B)
    for m in S.indices():
        assert len(P.cells(m)) == len(A.cells(m)) * len(B.cells(m))
    iso = lambda m, xy: (xy[0][0], xy[1][1])
    for m in S.indices():
        image = {iso(m, c) for c in P.cells(m)}
        assert image == set(S.cells(m)) and len(image) == len(P.cells(m))
    assert not naturality_violations(P, S, iso)


def test_skeleta():
    X = standard((1, 1), 2)
    assert all(set(skeleton(X, 10).cells(m)) == set(X.cells(m)) for m in X.indices())
    top = identity_op((1, 1))
    assert top not in skeleton(X, 1).cells((1, 1))
    assert top in skeleton(X, 2).cells((1, 1))
    T = standard((0, 0), 2)
    assert all(len(skeleton(T, 0).cells(m)) == 1 for m in T.indices())
    with pytest.raises(UsageError):
        skeleton(X, -1)


@pytest.mark.parametrize("degrees", [(0, 2), (1, 1), (2, 1), (0, 1, 1)])
def test_standards_are_two_coskeletal(degrees):
    assert is_two_coskeletal(standard(degrees, 3 if sum(degrees) <= 2 else 2))


def test_hollow_tetrahedron_is_not_two_coskeletal():
    X = standard((0, 3), 3)
    top = identity_op((0, 3))
    faces = [((0, 2), X.face(top, (0, 3), 1, k)) for k in range(4)]
    B = generated_subobject(X, faces)
    assert top not in B.cells((0, 3))
    r = is_two_coskeletal(B)
    assert not r and (0, 3) in r.failures


def test_simplex_category():
    X = standard((0, 1), 1)
    S = simplex_category(X, 1)
    counts = {m: sum(1 for o in S.objects if o[0] == m) for m in indices(1, 1)}
    assert counts == {(0, 0): 2, (0, 1): 3, (1, 0): 2, (1, 1): 3}
    top = ((0, 1), identity_op((0, 1)))
    # the top cell is terminal
    assert all(len(S.hom(o, top)) == 1 for o in S.objects)
    assert len(simplex_category(standard((0, 1), 2), 2).objects) > len(S.objects)
    with pytest.raises(UsageError):
        simplex_category(X, 2)


def test_colimit_on_standards():
    assert colim_over_simplices(standard((1, 1), 2), 2)
    assert colim_over_simplices(standard((0, 1), 2), 2)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(1, 1), (0, 2), (2, 1), (1, 2)]), st.data())
def test_colimit_on_random_subobjects(degrees, data):
    X = standard(degrees, 2)
    pool = [(m, x) for m in X.indices() if sum(m) <= 2 for x in X.nondegenerate(m)]
    gens = data.draw(st.lists(st.sampled_from(pool), min_size=1, max_size=3))
    Y = materialize(generated_subobject(X, gens))
    assert validate_msset(Y).valid
    assert colim_over_simplices(Y, 2)

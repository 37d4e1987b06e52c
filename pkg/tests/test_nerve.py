import itertools

import pytest

from multirel.corpus import long_short, parallel, two_paths
from multirel.errors import UsageError
from multirel.msset import indices, is_two_coskeletal, materialize, skeleton, standard
from multirel.nerve import counit, hom_transpose_check, k_adjoint, nerve, triangle_identity, unit
from multirel.nrelcat import chain_v, chain_w, enumerate_relative_functors, product_nrel, standard_nrel, terminal
from multirel.prescat import Budget


def test_nerve_of_one_v1():
    N = nerve(chain_v(1, 1, 1), 2)
    for p, q in indices(1, 2):
        assert len(N.cells((p, q))) == p + 2
    assert len(nerve(chain_v(1, 1, 1), 5).cells((2, 5))) == 4


def test_nerve_of_one_w():
    # monotone maps from the 2x2 grid to [1]: its down-sets
    grid = list(itertools.product((0, 1), repeat=2))
    downs = sum(
        1
        for bits in itertools.product((0, 1), repeat=4)
        if all(bits[grid.index(a)] <= bits[grid.index(b)] for a in grid for b in grid if a[0] <= b[0] and a[1] <= b[1])
    )
    assert len(nerve(chain_w(1, 1), 2).cells((1, 1))) == downs == 6


def test_nerve_of_terminal():
    N = nerve(terminal(2), 2)
    assert all(len(N.cells(m)) == 1 for m in N.indices())


@pytest.mark.parametrize(
    "C",
    [chain_v(1, 1, 1), chain_w(1, 1), parallel(1, ({1}, {1}), "p"), chain_v(1, 2, 2), standard_nrel((1, 0, 1))],
    ids=lambda C: C.name,
)
def test_nerve_counts_match_relative_functors(C):
    N = nerve(C, 1)
    for m in N.indices():
        assert len(N.cells(m)) == sum(1 for _ in enumerate_relative_functors(standard_nrel(m), C))


def test_k_of_square():
    K = k_adjoint(standard((1, 1), 2))
    P = K.presentation
    assert (len(P.objects), len(P.generators), len(P.relations)) == (4, 4, 1)
    R = K.nrel.realize(Budget(max_len=4))
    target = product_nrel([chain_v(1, 1, 1), chain_w(1, 1)])
    assert len(R.ambient.arrows) == len(target.ambient.arrows) == 9
    assert len(R.w) == len(target.w) and len(R.v[0]) == len(target.v[0])


def test_k_of_point_and_truncation_guard():
    K = k_adjoint(standard((0, 0, 0), 2))
    assert (len(K.presentation.objects), len(K.presentation.generators)) == (1, 0)
    with pytest.raises(UsageError):
        k_adjoint(standard((0, 1), 1))


def test_k_of_nerve_of_edge():
    K = k_adjoint(nerve(chain_v(1, 1, 1), 2))
    P = K.presentation
    assert (len(P.objects), len(P.generators), len(P.relations)) == (2, 1, 0)


@pytest.mark.parametrize("C", [chain_v(1, 1, 1), chain_w(1, 1), chain_w(2, 1), chain_w(1, 2), parallel(2, ({1}, {2}), "p")], ids=lambda C: C.name)
def test_counit_isomorphism(C):
    assert counit(C, Budget(max_len=6)).is_isomorphism


@pytest.mark.parametrize("C", [two_paths(), long_short()], ids=lambda C: C.name)
def test_counit_fails_on_violators(C):
    r = counit(C)
    assert r.injective is False


def test_unit_on_nerves_and_standards():
    for C in (chain_v(1, 1, 1), chain_w(1, 1), parallel(1, ({1}, {1}), "p")):
        _, r = unit(nerve(C, 2))
        assert r.isomorphism
    for d in [(1, 0), (2, 0), (0, 1, 0), (1, 0, 0)]:
        _, r = unit(standard(d, 2))
        assert r.isomorphism


def test_unit_census_of_edge_in_q_axis():
    _, r = unit(standard((0, 1), 2))
    assert r.per_index[(1, 1)] == (3, 3, 6, True, False)
    assert r.injective and not r.isomorphism


def test_triangle_identity():
    for C in (chain_v(1, 1, 1), chain_w(1, 1), parallel(1, ({0}, {1}), "p")):
        assert triangle_identity(C)


def test_hom_transposition():
    assert hom_transpose_check(standard((1, 0), 2), chain_w(1, 1))
    assert hom_transpose_check(nerve(chain_v(1, 1, 1), 2), chain_w(1, 1))
    r = hom_transpose_check(standard((0, 1), 2), terminal(1))
    assert r and r.maps == 1


@pytest.mark.parametrize("C", [chain_v(1, 1, 1), chain_w(2, 1), parallel(1, ({1}, {1}), "p"), chain_w(1, 2)], ids=lambda C: C.name)
def test_nerves_are_two_coskeletal(C):
    assert is_two_coskeletal(nerve(C, 2))


def test_k_sees_only_the_two_skeleton():
    for X in (standard((1, 2), 2), standard((2, 1), 2)):
        K1, K2 = k_adjoint(X), k_adjoint(materialize(skeleton(X, 2)))
        P1, P2 = K1.presentation, K2.presentation
        assert set(P1.objects) == set(P2.objects)
        assert set(P1.generators) == set(P2.generators)
        assert set(P1.relations) == set(P2.relations)

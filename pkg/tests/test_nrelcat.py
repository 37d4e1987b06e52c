import itertools

import pytest
from hypothesis import given, settings, strategies as st

from multirel.corpus import long_short, parallel, two_paths
from multirel.errors import StructureError, UsageError
from multirel.fincat import Functor, chain, discrete_chain, enumerate_functors, poset_category
from multirel.nrelcat import (
    NRelCategory,
    chain_v,
    chain_w,
    check_axiom_generation,
    check_axiom_relations,
    colim_nrelcat,
    enumerate_relative_functors,
    make_nrelcat,
    product_nrel,
    satisfies_axioms,
    standard_nrel,
    terminal,
)
from multirel.prescat import Budget


def ids(p):
    return frozenset(discrete_chain(p).arrows)


def test_one_v1_from_chain():
    A = chain(1)
    C = make_nrelcat(A, [frozenset(A.arrows)], ids(1))
    assert C.v == chain_v(1, 1, 1).v and C.w == chain_v(1, 1, 1).w


def test_structure_rejections():
    A = chain(1)
    with pytest.raises(StructureError):
        make_nrelcat(A, [ids(1)], frozenset(A.arrows))  # w not inside v_1
    with pytest.raises(StructureError):
        make_nrelcat(A, [{(0, 1)}], set())  # not wide
    with pytest.raises(UsageError):
        NRelCategory(2, A, [frozenset(A.arrows)], ids(1))


def test_terminal_any_n():
    for n in (1, 2, 3):
        T = make_nrelcat(chain(0), [ids(0)] * n, ids(0))
        assert satisfies_axioms(T)
        assert chain_w(0, n).ambient.arrows == chain_v(0, 1, n).ambient.arrows == terminal(n).ambient.arrows


def test_chain_structures():
    C = chain_v(1, 1, 1)
    assert len(C.v[0]) == 3 and C.w == ids(1)
    W = chain_w(2, 2)
    everything = frozenset(chain(2).arrows)
    assert W.v == (everything, everything) and W.w == everything


def test_generation_axiom():
    A = chain(1)
    assert not check_axiom_generation(make_nrelcat(A, [ids(1)], ids(1)))
    assert check_axiom_generation(chain_v(2, 1, 1))
    P = parallel(1, ({1}, {1}), "p")
    assert check_axiom_generation(P)


@pytest.mark.parametrize("p,i,n", [(p, i, n) for n in (1, 2, 3) for i in range(1, n + 1) for p in (0, 1, 2)])
def test_chains_satisfy_axioms(p, i, n):
    assert satisfies_axioms(chain_v(p, i, n))
    assert satisfies_axioms(chain_w(p, n))


def test_product_structures():
    C = product_nrel([chain_v(1, 1, 1), chain_w(1, 1)])
    A = C.ambient
    # w = |1| x 1: identity in the first factor
    assert C.w == frozenset(a for a in A.arrows if a[0][0] == a[0][1])
    assert C.v[0] == frozenset(A.arrows)
    D = product_nrel([chain_v(2, 2, 2), chain_v(2, 1, 2)])
    assert D.w == frozenset(a for a in D.ambient.arrows if all(x == y for x, y in a))


@pytest.mark.parametrize("degrees", [(1, 1), (2, 1), (1, 1, 0), (1, 0, 1), (1, 1, 1), (1, 0, 0, 1)])
def test_standard_products_satisfy_axioms(degrees):
    C = standard_nrel(degrees)
    assert check_axiom_generation(C)
    assert check_axiom_relations(C, Budget(max_len=sum(degrees) + 2)).is_isomorphism


def test_product_with_terminal():
    C = chain_v(2, 1, 1)
    P = product_nrel([C, terminal(1)])
    assert len(P.ambient.arrows) == len(C.ambient.arrows)
    assert {a[0] for a in P.v[0]} == C.v[0]


def test_axiom_two_violators():
    for C in (two_paths(), long_short()):
        assert check_axiom_generation(C)
        r = check_axiom_relations(C)
        assert r.injective is False


def test_one_relative_with_all_arrows_in_v1():
    P = parallel(1, ({1}, {1}), "p")
    assert satisfies_axioms(P)
    A = chain(3)
    assert satisfies_axioms(make_nrelcat(A, [frozenset(A.arrows)], ids(3)))


def test_relative_functor_counts():
    C = product_nrel([chain_v(1, 1, 1), chain_w(1, 1)])
    D = chain_v(1, 1, 1)
    # the w axis must go to identities of D; agrees with the nerve census at (1, 1)
    assert len(list(enumerate_relative_functors(C, D))) == 3
    assert len(list(enumerate_functors(C.ambient, D.ambient))) == 6
    assert len(list(enumerate_relative_functors(standard_nrel((1, 1, 1)), terminal(2)))) == 1
    D2 = standard_nrel((1, 1, 0))
    assert len(list(enumerate_relative_functors(chain_w(0, 2), D2))) == len(D2.objects)


def test_relative_functors_are_functors():
    for C, D in [(chain_v(1, 1, 1), chain_w(2, 1)), (standard_nrel((1, 1)), standard_nrel((1, 0))), (chain_w(1, 2), standard_nrel((1, 0, 1)))]:
        rel = {F.key for F in enumerate_relative_functors(C, D)}
        plain = {F.key for F in enumerate_functors(C.ambient, D.ambient)}
        assert rel <= plain


def test_colimit_over_terminal_index():
    I = chain(0)
    C = chain_v(2, 1, 1)
    col = colim_nrelcat(I, {0: C}, {})
    R = col.nrel.realize(Budget(max_len=4))
    assert len(R.ambient.arrows) == len(C.ambient.arrows)


def test_pushout_of_two_edges():
    span = poset_category(["o", "l", "r"], lambda x, y: x == y or x == "o")
    pt, edge = chain_v(0, 1, 1), chain_v(1, 1, 1)
    maps = {
        ("o", "l"): Functor(pt.ambient, edge.ambient, {0: 1}, {(0, 0): (1, 1)}),
        ("o", "r"): Functor(pt.ambient, edge.ambient, {0: 0}, {(0, 0): (0, 0)}),
    }
    col = colim_nrelcat(span, {"o": pt, "l": edge, "r": edge}, maps)
    R = col.nrel.realize(Budget(max_len=4))
    # glued end to start: the chain 0 -> 1 -> 2
    assert (len(R.ambient.objects), len(R.ambient.arrows)) == (3, 6)
    assert len(R.v[0]) == 6


@st.composite
def structured_chains(draw):
    p = draw(st.integers(1, 3))
    A = chain(p)
    steps = [(k, k + 1) for k in range(p)]
    chosen = [s for s in steps if draw(st.booleans())]
    extra = [s for s in steps if s not in chosen and draw(st.booleans())]
    return A, chosen, extra


@settings(max_examples=40, deadline=None)
@given(structured_chains())
def test_generation_is_monotone(case):
    A, chosen, extra = case
    small = make_nrelcat(A, [A.closure(chosen)], ids(len(A.objects) - 1))
    big = make_nrelcat(A, [A.closure(chosen + extra)], ids(len(A.objects) - 1))
    if check_axiom_generation(small):
        assert check_axiom_generation(big)
    # generation holds exactly when every unit step is in v_1
    assert check_axiom_generation(small) == (len(chosen) == len(A.objects) - 1)


def test_products_of_corpus_generators_satisfy_axioms():
    gens = [chain_v(1, 1, 2), chain_v(1, 2, 2), chain_w(1, 2), parallel(2, ({1}, {2}), "p")]
    for F, G in itertools.combinations(gens, 2):
        assert satisfies_axioms(product_nrel([F, G]), Budget(max_len=6))


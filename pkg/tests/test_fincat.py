import itertools

import pytest
from hypothesis import given, settings, strategies as st

from multirel.errors import ResourceError
from multirel.fincat import (
    ExplicitCategory,
    Functor,
    chain,
    count_monotone_maps,
    discrete_chain,
    enumerate_functors,
    functor_violations,
    inclusion,
    isomorphism_violations,
    poset_category,
    product,
    validate_category,
)


def brute_monotone(p, q):
    return sum(1 for f in itertools.product(range(q + 1), repeat=p + 1) if all(a <= b for a, b in zip(f, f[1:])))


def test_chain_sizes():
    assert (len(chain(0).objects), len(chain(0).arrows)) == (1, 1)
    assert (len(chain(2).objects), len(chain(2).arrows)) == (3, 6)
    assert len(chain(5).arrows) == 21
    assert validate_category(chain(2)).valid


def test_discrete_chain_and_inclusion():
    D = discrete_chain(3)
    assert (len(D.objects), len(D.arrows)) == (4, 4)
    assert (len(discrete_chain(0).objects), len(discrete_chain(0).arrows)) == (1, 1)
    assert not functor_violations(inclusion(D, chain(3)))


def test_products():
    P = product(chain(1), chain(1))
    assert validate_category(P).valid
    assert (len(P.objects), len(P.arrows)) == (4, 9)
    Q = product(chain(1), chain(2))
    assert (len(Q.objects), len(Q.arrows)) == (6, 18)


def test_product_with_terminal_is_isomorphic():
    C = chain(2)
    P = product(C, chain(0))
    F = Functor(P, C, {x: x[0] for x in P.objects}, {a: a[0] for a in P.arrows})
    assert not isomorphism_violations(F)


def test_product_associative_up_to_iso():
    A, B, C = chain(1), chain(2), chain(1)
    L, R = product(product(A, B), C), product(A, product(B, C))
    om = {((a, b), c): (a, (b, c)) for (a, b), c in L.objects}
    am = {((f, g), h): (f, (g, h)) for (f, g), h in L.arrows}
    F = Functor(L, R, om, am)
    assert not isomorphism_violations(F)


def test_corrupted_identity_is_named():
    # a -> b -> c plus a second arrow a -> c
    objects = ["a", "b", "c"]
    arrows = {"ia": ("a", "a"), "ib": ("b", "b"), "ic": ("c", "c"), "f": ("a", "b"), "g": ("b", "c"), "h": ("a", "c"), "k": ("a", "c")}
    ids = {"a": "ia", "b": "ib", "c": "ic"}
    table = {}
    for a, (s, t) in arrows.items():
        table[(ids[s], a)] = a
        table[(a, ids[t])] = a
    table[("f", "g")] = "h"
    C = ExplicitCategory(objects, arrows, ids, table)
    assert validate_category(C).valid
    table[("ia", "h")] = "k"  # breaks left identity on h
    bad = validate_category(ExplicitCategory(objects, arrows, ids, table)).violations
    assert ("left-identity", "h") in bad


def test_corrupted_triple():
    # Z/3 as a one-object category; setting 1 + 1 = 0 breaks (1 + 1) + 2 = 1 + (1 + 2)
    arrows = {str(k): ("*", "*") for k in range(3)}
    table = {(str(a), str(b)): str((a + b) % 3) for a in range(3) for b in range(3)}
    C = ExplicitCategory(["*"], arrows, {"*": "0"}, table)
    assert validate_category(C).valid
    table[("1", "1")] = "0"
    bad = validate_category(ExplicitCategory(["*"], arrows, {"*": "0"}, table)).violations
    assert ("associativity", "1", "1", "2") in bad


def test_functor_counts():
    assert len(list(enumerate_functors(chain(1), chain(1)))) == 3
    C = product(chain(1), chain(2))
    assert len(list(enumerate_functors(chain(0), C))) == len(C.objects)
    # down-sets of the 2x2 grid, counted independently below
    assert len(list(enumerate_functors(product(chain(1), chain(1)), chain(1)))) == 6


def test_grid_functors_are_down_sets():
    grid = list(itertools.product(range(2), range(2)))
    leq = lambda a, b: a[0] <= b[0] and a[1] <= b[1]
    downs = sum(
        1
        for bits in itertools.product((0, 1), repeat=4)
        if all(bits[grid.index(b)] <= bits[grid.index(a)] for a in grid for b in grid if leq(a, b))
    )
    assert downs == 6


@pytest.mark.parametrize("p,q", [(p, q) for p in range(5) for q in range(5)])
def test_monotone_count(p, q):
    n = brute_monotone(p, q)
    assert count_monotone_maps(p, q) == n
    if p <= 3 and q <= 3:
        assert len(list(enumerate_functors(chain(p), chain(q)))) == n


def test_enumeration_bound():
    with pytest.raises(ResourceError):
        list(enumerate_functors(chain(5), chain(5), bound=100))


@st.composite
def posets(draw, max_size=4):
    n = draw(st.integers(1, max_size))
    rel = {(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    changed = True
    while changed:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        changed = bool(extra)
        rel |= extra
    return poset_category(range(n), lambda a, b: a == b or (a, b) in rel)


@settings(max_examples=40, deadline=None)
@given(posets(), posets(3))
def test_enumerated_functors_pass_independent_check(C, D):
    assert validate_category(C).valid
    found = list(enumerate_functors(C, D))
    for F in found:
        assert not functor_violations(F)
    # posets: functors are exactly monotone object maps
    leq = lambda P, a, b: bool(P.hom(a, b))
    expected = sum(
        1
        for f in itertools.product(D.objects, repeat=len(C.objects))
        if all(leq(D, f[C.objects.index(a)], f[C.objects.index(b)]) for a in C.objects for b in C.objects if leq(C, a, b))
    )
    assert len(found) == expected

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from multirel.errors import StructureError, UsageError
from multirel.fincat import ExplicitCategory, chain, product, validate_category
from multirel.prescat import (
    DISTINCT,
    EQUAL,
    UNKNOWN,
    Budget,
    Generator,
    Path,
    Presentation,
    Relation,
    Undecided,
    check_functor_well_defined,
    compare_presented_to_explicit,
    decide_equal,
    grid_presentation,
    realize,
    replay_certificate,
)

SQUARE_GENS = [Generator("f", "a", "b"), Generator("g", "b", "d"), Generator("h", "a", "c"), Generator("k", "c", "d")]


def square(with_relation=True):
    rels = [Relation(("f", "g"), ("h", "k"), "a", "d")] if with_relation else []
    return Presentation("abcd", SQUARE_GENS, rels)


def grid11():
    return product(chain(1), chain(1))


GRID_OBJ = {"a": (0, 0), "b": (1, 0), "c": (0, 1), "d": (1, 1)}


def grid_maps():
    # product arrows are pairs of chain arrows (i, j)
    gm = {}
    for g, (x, y) in {"f": ("a", "b"), "g": ("b", "d"), "h": ("a", "c"), "k": ("c", "d")}.items():
        s, t = GRID_OBJ[x], GRID_OBJ[y]
        gm[g] = ((s[0], t[0]), (s[1], t[1]))
    return GRID_OBJ, gm


def test_square_paths_equal_with_certificate():
    P = square()
    a, b = P.path(("f", "g")), P.path(("h", "k"))
    d = decide_equal(P, a, b)
    assert d.verdict == EQUAL
    assert replay_certificate(P, a, b, d)


def test_free_parallel_distinct():
    P = Presentation("ab", [Generator("f", "a", "b"), Generator("g", "a", "b")])
    assert decide_equal(P, P.path(("f",)), P.path(("g",))).verdict == DISTINCT


def test_zero_budget_unknown():
    P = Presentation("*", [Generator("e", "*", "*")], [Relation(("e", "e"), ("e",), "*", "*")])
    d = decide_equal(P, P.path(("e", "e", "e")), P.path(("e",)), Budget(max_len=0))
    assert d.verdict == UNKNOWN


def test_non_parallel_is_usage_error():
    P = square()
    with pytest.raises(UsageError):
        decide_equal(P, P.path(("f",)), P.path(("h",)))


def test_bad_relation_rejected():
    with pytest.raises(StructureError):
        Presentation("abcd", SQUARE_GENS, [Relation(("f",), ("h",), "a", "b")])


def test_realize_square():
    C = realize(square())
    assert (len(C.objects), len(C.arrows)) == (4, 9)
    assert validate_category(C).valid
    assert len(C.arrows) == len(grid11().arrows)


def test_realize_discrete_and_infinite():
    C = realize(Presentation("xyz", []))
    assert (len(C.objects), len(C.arrows)) == (3, 3)
    free = realize(Presentation("*", [Generator("e", "*", "*")]))
    assert isinstance(free, Undecided)


def test_functor_well_defined():
    G = grid11()
    om, gm = grid_maps()
    assert check_functor_well_defined(square(), G, om, gm)
    # parallel pair category: the two paths land on different arrows
    arrows = {"ia": ("a", "a"), "id": ("d", "d"), "p": ("a", "d"), "q": ("a", "d")}
    ids = {"a": "ia", "d": "id"}
    table = {("ia", "p"): "p", ("ia", "q"): "q", ("p", "id"): "p", ("q", "id"): "q", ("ia", "ia"): "ia", ("id", "id"): "id"}
    Par = ExplicitCategory("ad", arrows, ids, table)
    P = Presentation("ad", [Generator("x", "a", "d"), Generator("y", "a", "d")], [Relation(("x",), ("y",), "a", "d")])
    assert not check_functor_well_defined(P, Par, {"a": "a", "d": "d"}, {"x": "p", "y": "q"})
    free = Presentation("ad", [Generator("x", "a", "d"), Generator("y", "a", "d")])
    assert check_functor_well_defined(free, Par, {"a": "a", "d": "d"}, {"x": "p", "y": "q"})


def test_compare_iso_and_failures():
    G = grid11()
    om, gm = grid_maps()
    assert compare_presented_to_explicit(square(), G, om, gm).is_isomorphism
    # the free square has two diagonals over one arrow of the grid
    r = compare_presented_to_explicit(square(False), G, om, gm)
    assert r.injective is False and r.surjective
    # drop a generator: the arrows through c become unreachable
    P = Presentation("abcd", SQUARE_GENS[:2] + SQUARE_GENS[3:])
    r = compare_presented_to_explicit(P, G, om, {g: gm[g] for g in ("f", "g", "k")})
    assert r.surjective is False


@pytest.mark.parametrize("degrees", [(1,), (2,), (1, 1), (2, 1), (1, 1, 1), (2, 2), (3, 1)])
def test_grid_presentation_realizes_product(degrees):
    C = realize(grid_presentation(degrees), Budget(max_len=sum(degrees) + 2))
    P = product(*(chain(p) for p in degrees))
    assert len(C.arrows) == len(P.arrows)
    assert validate_category(C).valid


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(1, 1), (2, 1), (1, 1, 1), (2, 2)]), st.data())
def test_parallel_grid_paths_are_equal(degrees, data):
    # in a product of chains, parallel paths are always equal
    P = grid_presentation(degrees)
    src = data.draw(st.sampled_from(P.objects))

    def walk(x):
        word = []
        while True:
            outs = P.out_generators(x)
            if not outs or data.draw(st.booleans()):
                return tuple(word), x
            g = data.draw(st.sampled_from(outs))
            word.append(g.id)
            x = g.tgt

    w1, t1 = walk(src)
    # a second path to the same target: sort the unit steps differently
    steps = sorted((g[0] for g in w1), key=lambda a: data.draw(st.integers(0, 9)))
    x, w2 = src, []
    for a in steps:
        w2.append((a, x))
        x = x[:a] + (x[a] + 1,) + x[a + 1 :]
    assert x == t1
    d = decide_equal(P, Path(src, t1, w1), Path(src, t1, tuple(w2)), Budget(max_len=sum(degrees) + 2))
    assert d.verdict == EQUAL
    assert replay_certificate(P, Path(src, t1, w1), Path(src, t1, tuple(w2)), d)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=0, max_size=4))
def test_equality_is_an_equivalence(pairs):
    # one object, generators a, b, c; random relations between length-1 and length-2 words
    gens = [Generator(x, "*", "*") for x in "abc"]
    rels = [Relation(("abc"[i],) * 2, ("abc"[j],), "*", "*") for i, j in pairs]
    P = Presentation("*", gens, rels)
    words = [w for k in range(3) for w in itertools.product("abc", repeat=k)]
    b = Budget(max_len=3)
    eq = {(u, v): decide_equal(P, Path("*", "*", u), Path("*", "*", v), b).verdict for u in words for v in words}
    for u in words:
        assert eq[(u, u)] == EQUAL
    for (u, v), r in eq.items():
        if r == EQUAL:
            assert eq[(v, u)] == EQUAL
    for u, v, w in itertools.product(words, repeat=3):
        if eq[(u, v)] == EQUAL and eq[(v, w)] == EQUAL:
            assert eq[(u, w)] == EQUAL

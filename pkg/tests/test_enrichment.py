import itertools

import pytest
from hypothesis import given, settings, strategies as st

from multirel.corpus import parallel
from multirel.enrichment import (
    ZigzagType,
    abar,
    adjunction_check,
    all_types,
    arrow_category,
    embed,
    enriched_compose,
    grothendieck,
    identity_zigzag,
    pushforward,
    pushforward_functoriality,
    push_zigzag,
    restrict,
    same_nrel,
    type_category,
    type_maps,
    zigzag_problems,
    zigzags,
)
from multirel.errors import UsageError
from multirel.fincat import chain, discrete_chain, validate_category
from multirel.nrelcat import NRelCategory, chain_v, chain_w, satisfies_axioms, standard_nrel

PLUS, PLUSPLUS, MINUS = ZigzagType("+"), ZigzagType("++"), ZigzagType("-")


def brute_type_maps(T, Tp):
    out = []
    for vals in itertools.product(range(1, Tp.length + 1), repeat=T.length):
        if list(vals) == sorted(vals) and all(Tp.signs[v - 1] == s for v, s in zip(vals, T.signs)):
            out.append(vals)
    return out


def test_embed_structure():
    E = embed(chain_v(1, 1, 1))
    ids = frozenset(discrete_chain(1).arrows)
    assert E.n == 2 and E.v[1] == E.w == ids
    W = embed(chain_w(2, 1))
    everything = frozenset(chain(2).arrows)
    assert all(s == everything for s in W.v) and W.w == everything


@pytest.mark.parametrize("C", [chain_v(1, 1, 1), chain_w(2, 1), parallel(1, ({0}, {1}), "p"), standard_nrel((1, 1, 0))], ids=lambda C: C.name)
def test_restrict_embed_is_identity(C):
    E = embed(C)
    assert same_nrel(restrict(E), C)
    assert satisfies_axioms(E) == satisfies_axioms(C)


def test_abar_of_top_only_structure():
    A = chain(2)
    ids = frozenset(discrete_chain(2).arrows)
    D = NRelCategory(2, A, [ids, frozenset(A.arrows)], ids)
    assert abar(D) == ids
    with pytest.raises(UsageError):
        abar(chain_v(1, 1, 1))


@pytest.mark.parametrize(
    "C,D",
    [
        (chain_v(1, 1, 1), standard_nrel((1, 1, 1))),
        (chain_w(1, 1), standard_nrel((1, 0, 1))),
        (chain_v(1, 1, 1), embed(chain_w(1, 1))),
        (parallel(1, ({1}, {1}), "p"), embed(chain_v(2, 1, 1))),
        (chain_w(1, 1), embed(chain_v(2, 1, 1))),
    ],
)
def test_adjunction_bijection(C, D):
    r = adjunction_check(C, D)
    assert r.bijective and r.left == r.right


def test_type_category():
    T = type_category(2)
    assert len(T.objects) == 7 == len(all_types(2))
    assert validate_category(T).valid
    assert len(type_maps(PLUS, PLUSPLUS)) == 2
    assert type_maps(PLUS, MINUS) == ()
    for S, Tp in itertools.product(all_types(2), repeat=2):
        assert sorted(type_maps(S, Tp)) == brute_type_maps(S, Tp)


def test_zigzag_type_sets():
    T = ZigzagType.from_sets(3, [1, 3], [2])
    assert T.signs == ("+", "-", "+") and T.plus == {1, 3} and T.minus == {2}
    with pytest.raises(UsageError):
        ZigzagType.from_sets(2, [1], [1])


def test_length_zero_zigzags():
    A = chain(1)
    empty = ZigzagType(())
    assert zigzags(A, 0, 0, empty, set()) == [identity_zigzag(0)]
    assert zigzags(A, 0, 1, empty, set()) == []


def test_arrow_category_of_single_forward_arrow():
    C = embed(chain_v(1, 1, 1))
    R = arrow_category(C, 0, 1, PLUS)
    assert [Z.arrows for Z in R.ambient.objects] == [((0, 1),)]
    assert len(R.ambient.arrows) == 1


def test_arrow_category_composition_is_componentwise():
    C = standard_nrel((1, 0, 1))
    X, Y = C.objects[0], C.objects[-1]
    R = arrow_category(C, X, Y, ZigzagType("+-+"))
    A = C.ambient
    assert validate_category(R.ambient).valid
    for f, g in itertools.islice(R.ambient.composable_pairs(), 200):
        h = R.ambient._compose(g, f)
        assert h[2] == tuple(A._compose(b, a) for a, b in zip(f[2], g[2]))


def test_pushforward_collapse_and_insert():
    C = embed(chain_w(2, 1))
    A = C.ambient
    Z = zigzags(A, 0, 2, PLUSPLUS, abar(C))
    two_step = next(z for z in Z if z.objects == (0, 1, 2))
    # collapse {1, 2} -> {1}: the two arrows compose
    assert push_zigzag(A, two_step, PLUS, (1, 1)).arrows == ((0, 2),)
    # insert an empty fiber: an identity appears
    one = zigzags(A, 0, 2, PLUS, abar(C))[0]
    pushed = push_zigzag(A, one, PLUSPLUS, (1,))
    assert pushed.arrows == ((0, 2), (2, 2))
    pushed = push_zigzag(A, one, PLUSPLUS, (2,))
    assert pushed.arrows == ((0, 0), (0, 2))


def test_pushforward_identity_and_bad_map():
    C = standard_nrel((1, 0, 1))
    X, Y = C.objects[0], C.objects[-1]
    S = arrow_category(C, X, Y, PLUS)
    F = pushforward(S, S, (1,))
    assert all(F.object_map[z] == z for z in S.ambient.objects)
    assert all(F.arrow_map[a] == a for a in S.ambient.arrows)
    with pytest.raises(UsageError):
        pushforward(S, arrow_category(C, X, Y, MINUS), (1,))


def test_pushforward_functorial():
    C = standard_nrel((1, 0, 1))
    assert pushforward_functoriality(C, C.objects[0], C.objects[-1], 2)


def test_grothendieck():
    C = embed(chain_v(1, 1, 1))
    G = grothendieck(C, 0, 1, 2)
    assert validate_category(G.ambient).valid
    # at length 1 only the forward edge connects 0 to 1
    G1 = grothendieck(C, 0, 1, 1)
    plus = [o for o in G1.ambient.objects if o[0] == PLUS]
    assert len(plus) == 1


def test_enriched_compose():
    C = embed(chain_w(2, 1))
    A = C.ambient
    z1 = zigzags(A, 0, 1, PLUS, abar(C))[0]
    z2 = zigzags(A, 1, 0, MINUS, abar(C))[0]
    z = enriched_compose(C, z1, z2)
    assert z.type == ZigzagType("+-") and z.objects == (0, 1, 0)
    assert not zigzag_problems(A, z, abar(C))
    assert enriched_compose(C, identity_zigzag(0), z1) == z1 == enriched_compose(C, z1, identity_zigzag(1))
    with pytest.raises(UsageError):
        enriched_compose(C, z1, z1)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_enriched_compose_associative(data):
    C = embed(chain_w(2, 1))
    A, bar = C.ambient, abar(C)

    def draw_zigzag(start):
        T = ZigzagType(tuple(data.draw(st.lists(st.sampled_from("+-"), max_size=2))))
        ends = [y for y in A.objects if zigzags(A, start, y, T, bar)]
        y = data.draw(st.sampled_from(ends))
        return data.draw(st.sampled_from(zigzags(A, start, y, T, bar)))

    a = draw_zigzag(data.draw(st.sampled_from(A.objects)))
    b = draw_zigzag(a.target)
    c = draw_zigzag(b.target)
    assert enriched_compose(C, enriched_compose(C, a, b), c) == enriched_compose(C, a, enriched_compose(C, b, c))

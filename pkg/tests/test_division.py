import itertools
from math import prod

import pytest

from multirel.corpus import parallel
from multirel.division import (
    canonical_iso_check,
    delta_rel,
    delta_rel_colim_check,
    division,
    division_product,
    homotopy_h,
    k_delta,
    k_delta_vs_delta_rel,
    mapping_colim_check,
    nerve_homotopy_k,
    pi_t_check,
    poset_nrel,
    projection_iff_check,
    strict_homotopy_check,
    string_of,
    tau,
    terminal_projection,
)
from multirel.errors import UsageError
from multirel.fincat import enumerate_functors, chain
from multirel.msset import indices, standard
from multirel.nrelcat import RelFunctor, chain_v, chain_w, product_nrel, standard_nrel


def brute_maps(m, p):
    return sum(1 for f in itertools.product(range(p + 1), repeat=m + 1) if list(f) == sorted(f))


def test_division_of_edge():
    D = division(chain_v(1, 1, 1), 1)
    by_len = {}
    for x in D.ambient.objects:
        by_len[len(x[0]) - 1] = by_len.get(len(x[0]) - 1, 0) + 1
    assert by_len == {0: 2, 1: 3}
    # strings are functors [p] -> [1]
    assert by_len[1] == len(list(enumerate_functors(chain(1), chain(1))))


def test_division_of_point():
    D = division(chain_w(0, 1), 3)
    assert all(set(x[0]) == {0} for x in D.ambient.objects)
    assert D.w == frozenset(D.ambient.arrows)


def test_identity_arrows_are_weak_equivalences():
    D = division(standard_nrel((1, 1)), 2)
    for x in D.ambient.objects:
        assert D.ambient.identity(x) in D.w


def test_terminal_projection():
    D = division(chain_v(1, 1, 1), 1)
    pi = terminal_projection(D)
    assert pi.object_map[string_of((0, 1))] == 1
    assert pi.object_map[string_of((1,))] == 1
    assert pi.object_map[string_of((0,))] == 0


@pytest.mark.parametrize(
    "C,L",
    [(chain_v(1, 1, 1), 1), (chain_v(1, 1, 1), 2), (chain_w(2, 1), 2), (parallel(1, ({0}, {1}), "p"), 2), (standard_nrel((1, 0, 1)), 1)],
    ids=lambda v: getattr(v, "name", str(v)),
)
def test_projection_iff(C, L):
    assert projection_iff_check(division(C, L)) == []


def test_delta_rel_structure_on_point_and_edge():
    R = delta_rel(standard((0, 0), 1), 1)
    assert R.v[0] == frozenset(R.ambient.arrows)
    X = standard((0, 1), 1)
    lit = delta_rel(X, 1, "literal")
    for a in lit.ambient.arrows:
        (m, _), theta = a
        assert (a in lit.v[0]) == (theta[0][-1] == m[0])
    # default: for n = 1 every arrow is in v_1; w asks the p-axis to stay put
    div = delta_rel(X, 1)
    assert div.v[0] == frozenset(div.ambient.arrows)
    assert div.w <= div.v[0]
    with pytest.raises(UsageError):
        delta_rel(X, 1, "other")


def test_w_is_intersection_for_n2():
    R = delta_rel(standard((1, 1, 0), 1), 1)
    assert R.w <= R.v[0] & R.v[1]


@pytest.mark.parametrize("m,L", [((0, 0), 1), ((1, 1), 1), ((2, 1), 2), ((0, 2), 2), ((1, 0, 1), 1)])
def test_canonical_iso(m, L):
    r = canonical_iso_check(m, L)
    assert r.isomorphism
    # census: both sides have sum_k prod_a |[k_a] -> [m_a]| objects
    R, P = delta_rel(standard(m, L), L), division_product(m, L)
    expected = sum(prod(brute_maps(k, p) for k, p in zip(ks, m)) for ks in indices(len(m) - 1, L))
    assert len(R.ambient.objects) == len(P.ambient.objects) == expected


def test_literal_convention_is_not_isomorphic():
    assert not canonical_iso_check((0, 0), 1, "literal").isomorphism


def test_delta_rel_colimit_small():
    assert delta_rel_colim_check(standard((0, 1), 2), 2)
    assert delta_rel_colim_check(standard((1, 1, 0), 1), 1)


def test_mapping_colimit():
    X = standard((0, 1), 1)
    terminal = chain_w(0, 1)
    r = mapping_colim_check(terminal, X, 1)
    assert r.bijective
    assert r.maps == sum(len(X.cells(m)) for m in indices(1, 1))
    assert mapping_colim_check(chain_w(1, 1), X, 1).bijective
    with pytest.raises(UsageError):
        mapping_colim_check(parallel(1, ({1}, {1}), "p"), X, 1)
    V = poset_nrel(range(3), lambda a, b: a <= b, 1, w_rule=lambda a: a == (1, 2))
    assert mapping_colim_check(V, X, 1).bijective


@pytest.mark.parametrize("p,tag", [(p, t) for p in (0, 1, 2) for t in ("v1", "w")])
def test_tau_section_and_homotopy(p, tag):
    t = tau(p, tag)
    base = t.rel_source.ambient
    back = t.then(terminal_projection(t.rel_target))
    assert back.key == (tuple(base.objects), tuple(base.arrows))
    h, ident, tp = homotopy_h(p, tag)
    assert strict_homotopy_check(h, ident, tp)
    if p > 0:
        assert not strict_homotopy_check(h, tp, ident)


def test_tau_needs_long_strings():
    with pytest.raises(UsageError):
        tau(2, "v1", L=1)


def test_constant_homotopy():
    C = chain_v(1, 1, 1)
    src = product_nrel([C, chain_w(1, 1)])
    h = RelFunctor(src, C, {x: x[0] for x in src.ambient.objects}, {a: a[0] for a in src.ambient.arrows})
    ident = RelFunctor(C, C, {x: x for x in C.objects}, {a: a for a in C.ambient.arrows})
    assert strict_homotopy_check(h, ident, ident)


@pytest.mark.parametrize("tag", ["v1", "w"])
def test_nerve_homotopy_endpoints(tag):
    h, ident, tp = homotopy_h(1, tag)
    _, r = nerve_homotopy_k(h, ident, tp, trunc=1)
    assert r.starts_at_f and r.ends_at_g and r.natural


def test_k_delta_of_standard_is_division_product():
    X = standard((0, 1), 1)
    KD = k_delta(X, 1)
    # the top cell is terminal in the index, so the colimit is that piece
    P = KD.colimit.nrel.presentation
    assert len(P.objects) == len(division_product((0, 1), 1).ambient.objects)


@pytest.mark.parametrize("d", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_k_delta_matches_delta_rel(d):
    assert k_delta_vs_delta_rel(standard(d, 1), 1).is_isomorphism
    assert pi_t_check(standard(d, 2), 1)


@pytest.mark.slow
def test_k_delta_matches_delta_rel_n2():
    assert k_delta_vs_delta_rel(standard((0, 0, 1), 1), 1).is_isomorphism

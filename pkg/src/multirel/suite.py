"""The verification battery run by ``multirel suite`` and the acceptance tests.

Every check returns a ``CheckResult``: ``ok`` is True/False, or None when a
budget ran out (reported separately from failure).  ``scope`` states what was
actually covered, so a reader never has to guess at truncations.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from . import corpus as corpus_mod
from .division import (
    canonical_iso_check,
    delta_rel_colim_check,
    division,
    homotopy_h,
    k_delta_vs_delta_rel,
    mapping_colim_check,
    nerve_homotopy_k,
    pi_t_check,
    poset_nrel,
    projection_iff_check,
    strict_homotopy_check,
    tau,
    terminal_projection,
)
from .enrichment import (
    adjunction_check,
    embed,
    grothendieck,
    pushforward_functoriality,
    restrict,
    same_nrel,
    type_category,
    type_maps,
    ZigzagType,
)
from .fincat import Functor, chain, functor_violations, product, validate_category
from .msset import colim_over_simplices, indices, is_two_coskeletal, skeleton, standard
from .nerve import counit, k_adjoint, nerve, unit
from .nrelcat import NRelCategory, chain_v, chain_w, satisfies_axioms, standard_nrel
from .errors import UsageError
from .prescat import UNKNOWN, Budget, Path, decide_equal, grid_presentation, realize, Undecided


@dataclass
class CheckResult:
    key: str
    ok: bool | None
    scope: str
    details: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return {True: "pass", False: "fail", None: "budget"}[self.ok]


def _timed(key: str, fn: Callable[[], tuple]) -> CheckResult:
    t = time.perf_counter()
    ok, scope, details = fn()
    return CheckResult(key, ok, scope, details, time.perf_counter() - t)


def _combine(flags) -> bool | None:
    flags = list(flags)
    if any(f is False for f in flags):
        return False
    if any(f is None for f in flags):
        return None
    return True


# -- scope rules ------------------------------------------------------------------

def unit_max_total(C: NRelCategory) -> int | None:
    """Index bound for nerves whose top cells explode: ``n = 3`` with a non-trivial ``w``."""
    nontrivial_w = any(not C.ambient.is_identity(a) for a in C.w)
    return 4 if C.n >= 3 and nontrivial_w else None


def single_axis_standards(n: int, top: int = 2, axes=None) -> list:
    """Standards with one nonzero degree; by default only in the ``p`` axes."""
    out = []
    for axis in range(n) if axes is None else axes:
        for k in range(1, top + 1):
            out.append(tuple(k if a == axis else 0 for a in range(n + 1)))
    return out


def small_mssets(spaces: dict, limit: int = 50) -> dict:
    return {k: X for k, X in spaces.items() if sum(len(X.nondegenerate(m)) for m in X.indices()) <= limit}


# -- checks -------------------------------------------------------------------------

def check_counit(corp, budget: Budget = Budget()) -> CheckResult:
    def run():
        details, flags = [], []
        for m in corp.categories:
            r = counit(m.nrel, budget)
            if m.satisfies_axioms and r.verdict == UNKNOWN:
                flags.append(None)
            elif m.satisfies_axioms:
                flags.append(r.is_isomorphism)
            else:
                flags.append(r.well_defined and r.injective is False)
            details.append((m.name, r.verdict, "injective" if r.injective else "not injective"))
        good, bad = len(corp.good()), len(corp.violators())
        return _combine(flags), f"{good} axiom-satisfying members iso, {bad} violators non-injective, D=2", details

    return _timed("counit-iso", run)


def check_unit_nerves(corp, budget: Budget = Budget()) -> CheckResult:
    def run():
        details, flags = [], []
        for m in corp.good():
            bound = unit_max_total(m.nrel)
            for D in (2, 3) if m.nrel.n == 1 else (2,):
                _, r = unit(nerve(m.nrel, D), budget, check_naturality=True, max_total=bound)
                flags.append(None if r.undecided else r.isomorphism)
                details.append((m.name, D, bound, r.verdict))
        return _combine(flags), "nerves of all axiom-satisfying members at D=2 (n=1 also D=3); n=3 with non-trivial w at total degree <= 4", details

    return _timed("unit-iso-nerves", run)


def check_unit_standards(budget: Budget = Budget()) -> CheckResult:
    def run():
        details, flags = [], []
        for n in (1, 2):
            for d in single_axis_standards(n):
                for D in (2, 3) if n == 1 else (2,):
                    _, r = unit(standard(d, D), budget)
                    flags.append(r.isomorphism)
                    details.append((d, D, r.verdict))
        # the q axis is not claimed: injective, but N 1^w has more cells
        for n in (1, 2):
            for d in single_axis_standards(n, axes=(n,)):
                _, r = unit(standard(d, 2), budget)
                expected_shape = r.injective and not r.isomorphism
                flags.append(expected_shape)
                details.append((d, 2, "injective" if r.injective else "not injective", r.verdict))
        _, r = unit(standard((0, 1), 2), budget)
        census = r.per_index[(1, 1)]
        expected = (3, 3, 6, True, False)
        flags.append(census == expected)
        details.append(("eta Delta[0,1] at (1,1)", census, expected))
        return _combine(flags), "p-axis standards of degree <= 2 iso (n=1 at D=2,3; n=2 at D=2); q-axis standards injective only; the Delta[0,1] census", details

    return _timed("unit-iso-standards", run)


def _same_presentation(a, b) -> bool:
    return set(a.objects) == set(b.objects) and a.generators == b.generators and set(a.relations) == set(b.relations)


def check_two_skeleton(corp) -> CheckResult:
    def run():
        details, flags = [], []
        spaces = dict(corp.mssets)
        for m in corp.categories:
            spaces[f"N {m.name}"] = nerve(m.nrel, 2)
        for key, X in spaces.items():
            same = _same_presentation(k_adjoint(skeleton(X, 2)).presentation, k_adjoint(X).presentation)
            flags.append(same)
            details.append(("K sk2", key, same))
        for m in corp.categories:
            r = is_two_coskeletal(nerve(m.nrel, 2), max_total=unit_max_total(m.nrel))
            flags.append(r.two_coskeletal)
            details.append(("coskeletal", m.name, r.two_coskeletal))
        return _combine(flags), "all corpus spaces and nerves at D=2 (n=3 with non-trivial w: coskeleton check to total degree 4)", details

    return _timed("two-skeleton", run)


def check_simplex_colimit(corp, L: int = 2) -> CheckResult:
    def run():
        details, flags = [], []
        for key, X in small_mssets(corp.mssets).items():
            r = colim_over_simplices(X, L)
            flags.append(r.bijective)
            details.append((key, r.bijective))
        return _combine(flags), f"every corpus space with <= 50 nondegenerate cells, L=D={L}", details

    return _timed("simplex-colimit", run)


def check_delta_rel_colimit(corp) -> CheckResult:
    def run():
        details, flags = [], []
        for key, X in small_mssets(corp.mssets).items():
            L = 2 if X.n == 1 else 1
            r = delta_rel_colim_check(X, L)
            flags.append(r.isomorphism)
            details.append((key, L, r.isomorphism))
        return _combine(flags), "corpus spaces with <= 50 nondegenerate cells: n=1 at L=D=2, n=2 at L=1", details

    return _timed("delta-rel-colimit", run)


def mapping_colim_instances() -> list:
    chain2 = poset_nrel(range(3), lambda a, b: a <= b, 1, name="2 (v1 below 1, w at top)", w_rule=lambda a: a == (1, 2))
    return [
        ("1^w", chain_w(1, 1), standard((0, 1), 1), 1),
        ("1^v1", chain_v(1, 1, 1), standard((1, 1), 1), 1),
        ("terminal", chain_w(0, 1), standard((1, 1), 2), 2),
        ("2 mixed", chain2, standard((0, 1), 1), 1),
    ]


def check_mapping_colimit() -> CheckResult:
    def run():
        details, flags = [], []
        for name, T, X, L in mapping_colim_instances():
            r = mapping_colim_check(T, X, L)
            flags.append(r.bijective)
            details.append((name, L, r.classes, r.maps, r.bijective))
        return _combine(flags), f"{len(details)} poset-with-terminal-object T instances", details

    return _timed("mapping-colimit", run)


def check_projection_iff(corp) -> CheckResult:
    def run():
        details, flags = [], []
        for m in corp.categories:
            for L in (1, 2):
                bad = projection_iff_check(division(m.nrel, L))
                flags.append(not bad)
                details.append((m.name, L, len(bad)))
        return _combine(flags), "every arrow of the division of every corpus member, L=1,2", details

    return _timed("projection-iff", run)


def check_canonical_iso() -> CheckResult:
    def run():
        details, flags = [], []
        for n, L in ((1, 2), (2, 1)):
            for m in indices(n, 2):
                r = canonical_iso_check(m, L)
                flags.append(r.isomorphism)
                details.append((m, L, r.isomorphism))
        return _combine(flags), "all multi-indices with degrees <= 2: n=1 at L=2, n=2 at L=1", details

    return _timed("canonical-iso", run)


def check_strict_homotopy(nerve_trunc: int = 2) -> CheckResult:
    def run():
        details, flags = [], []
        for p in (0, 1, 2):
            for tag in ("v1", "w"):
                t = tau(p, tag)
                pi = terminal_projection(t.rel_target)
                base = t.rel_source.ambient
                pt = t.then(pi)
                section = pt.key == (tuple(base.objects), tuple(base.arrows))
                h, ident, tp = homotopy_h(p, tag)
                ok = section and strict_homotopy_check(h, ident, tp)
                flags.append(ok)
                details.append(("strict", p, tag, section, ok))
        for p in (0, 1):
            for tag in ("v1", "w"):
                h, ident, tp = homotopy_h(p, tag)
                _, r = nerve_homotopy_k(h, ident, tp, trunc=nerve_trunc, check_naturality=False)
                flags.append(r.starts_at_f and r.ends_at_g)
                details.append(("k endpoints", p, tag, nerve_trunc, r.starts_at_f, r.ends_at_g))
                _, r1 = nerve_homotopy_k(h, ident, tp, trunc=1, check_naturality=True)
                flags.append(bool(r1))
                details.append(("k natural", p, tag, 1, r1.natural))
        return _combine(flags), f"p <= 2, tags v1 and w; k endpoints at D={nerve_trunc} and naturality at D=1 for p <= 1", details

    return _timed("strict-homotopy", run)


def check_k_delta(budget: Budget = Budget(max_len=4)) -> CheckResult:
    def run():
        details, flags = [], []
        for d in ((0, 0), (0, 1), (1, 0), (1, 1)):
            X = standard(d, 1)
            r = k_delta_vs_delta_rel(X, 1, budget)
            flags.append(r.is_isomorphism)
            details.append(("K_delta = Delta_rel", d, r.verdict))
            ok = pi_t_check(standard(d, 2), 1)
            flags.append(ok)
            details.append(("pi_t", d, ok))
        return _combine(flags), "standards of degree <= 1 at L=1", details

    return _timed("k-delta", run)


def adjunction_pairs(corp) -> list:
    n1 = [m.nrel for m in corp.good(1)]
    targets = [standard_nrel((1, 1, 1)), standard_nrel((1, 0, 1)), embed(chain_w(1, 1)), embed(chain_v(2, 1, 1))]
    return [(C, D) for C in n1[:4] for D in targets]


def check_embed_restrict(corp) -> CheckResult:
    def run():
        details, flags = [], []
        for m in corp.categories:
            E = embed(m.nrel)
            back = same_nrel(restrict(E), m.nrel)
            flags.append(back)
            ax = satisfies_axioms(E) == satisfies_axioms(m.nrel)
            flags.append(ax)
            details.append((m.name, back, ax))
        pairs = adjunction_pairs(corp)
        for C, D in pairs:
            r = adjunction_check(C, D)
            flags.append(r.bijective)
            details.append(("adjunction", C.name, D.name, r.left, r.right))
        return _combine(flags), f"restrict(embed C) = C on all {len(corp.categories)} members; {len(pairs)} adjunction pairs", details

    return _timed("embed-restrict", run)


def check_enrichment(max_len: int = 3) -> CheckResult:
    def run():
        details, flags = [], []
        T = type_category(2)
        flags.append(len(T.objects) == 7)
        flags.append(len(type_maps(ZigzagType("+"), ZigzagType("++"))) == 2)
        for C in (standard_nrel((1, 0, 1)), embed(chain_v(1, 1, 1))):
            X, Y = C.objects[0], C.objects[-1]
            r = pushforward_functoriality(C, X, Y, max_len)
            flags.append(bool(r))
            G = grothendieck(C, X, Y, max_len)
            v = validate_category(G.ambient)
            flags.append(v.valid)
            details.append((C.name, r.checked, len(G.ambient.arrows), bool(r), v.valid))
        return _combine(flags), f"type category census; pushforward functoriality and Grothendieck associativity exhaustive at maxLen <= {max_len}", details

    return _timed("pushforward-grothendieck", run)


def partitions(total: int, largest: int | None = None):
    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for k in range(min(total, largest), 0, -1):
        for rest in partitions(total - k, k):
            yield (k,) + rest


def word_problem_case(degrees: tuple, budget: Budget = Budget(max_len=8)) -> tuple:
    """``(unknown verdicts, realize matches)`` for the product of chains of the given lengths."""
    P = grid_presentation(degrees)
    unknown = 0
    ref: dict = {}
    stack = [(x, x, ()) for x in P.objects]
    while stack:
        src, cur, word = stack.pop()
        key = (src, cur)
        if key not in ref:
            ref[key] = word
        elif word != ref[key]:
            if decide_equal(P, Path(src, cur, ref[key]), Path(src, cur, word), budget).verdict == UNKNOWN:
                unknown += 1
        stack.extend((src, g.tgt, word + (g.id,)) for g in P.out_generators(cur))
    R = realize(P, budget)
    if isinstance(R, Undecided):
        return unknown, None
    C = product(*(chain(p) for p in degrees))
    # explicit arrows of the product are tuples of per-factor pairs (a, b)
    def explicit(path):
        return tuple((s, t) for s, t in zip(path.src, path.tgt))

    F = Functor(R, C, {x: x for x in R.objects}, {p: explicit(p) for p in R.arrows})
    bijective = len(set(F.arrow_map.values())) == len(R.arrows) == len(C.arrows)
    return unknown, bijective and not functor_violations(F)


def check_word_problem(max_total: int = 6, budget: Budget = Budget(max_len=8)) -> CheckResult:
    def run():
        details, flags = [], []
        for s in range(1, max_total + 1):
            for ps in partitions(s):
                unknown, match = word_problem_case(ps, budget)
                flags.append(None if match is None else (unknown == 0 and match))
                details.append((ps, unknown, match))
        return _combine(flags), f"products of chains with total length <= {max_total}, max_len={budget.max_len}", details

    return _timed("word-problem", run)


# -- the matrix -----------------------------------------------------------------------

def battery(corp) -> list:
    """``(key, job)`` pairs in report order."""
    return [
        ("counit-iso", lambda: check_counit(corp)),
        ("unit-iso-nerves", lambda: check_unit_nerves(corp)),
        ("unit-iso-standards", check_unit_standards),
        ("two-skeleton", lambda: check_two_skeleton(corp)),
        ("simplex-colimit", lambda: check_simplex_colimit(corp)),
        ("delta-rel-colimit", lambda: check_delta_rel_colimit(corp)),
        ("mapping-colimit", check_mapping_colimit),
        ("projection-iff", lambda: check_projection_iff(corp)),
        ("canonical-iso", check_canonical_iso),
        ("strict-homotopy", check_strict_homotopy),
        ("k-delta", check_k_delta),
        ("embed-restrict", lambda: check_embed_restrict(corp)),
        ("pushforward-grothendieck", check_enrichment),
        ("word-problem", check_word_problem),
    ]


def suite_keys() -> list:
    return [k for k, _ in battery(None)]


def run_suite(corp=None, progress: Callable[[CheckResult], None] | None = None, only=None) -> list:
    corp = corpus_mod.load() if corp is None else corp
    jobs = battery(corp)
    if only:
        unknown = set(only) - {k for k, _ in jobs}
        if unknown:
            raise UsageError(f"unknown suite keys: {', '.join(sorted(unknown))}")
        jobs = [(k, j) for k, j in jobs if k in only]
    results = []
    for _, job in jobs:
        r = job()
        results.append(r)
        if progress:
            progress(r)
    return results

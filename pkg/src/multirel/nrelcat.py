"""n-relative categories: an ambient category with n wide subcategories v_1..v_n
sharing a common wide subcategory w of weak equivalences.

Structure labels are the strings ``"v1"``, ..., ``"vn"`` and ``"w"``.  Axis
``a`` of a multi-index ``(p_n, ..., p_1, q)`` carries label ``v{n-a}`` for
``a < n`` and ``w`` for the last axis.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import StructureError, UsageError
from .fincat import (
    DEFAULT_FUNCTOR_BOUND,
    ExplicitCategory,
    Functor,
    chain,
    discrete_chain,
    enumerate_functors,
    functor_violations,
    product,
)
from .prescat import (
    Budget,
    Generator,
    IsoReport,
    Presentation,
    Relation,
    Undecided,
    compare_presented_to_explicit,
    realize,
)


def labels(n: int) -> tuple:
    return tuple(f"v{i}" for i in range(1, n + 1)) + ("w",)


def axis_label(axis: int, n: int) -> str:
    return "w" if axis == n else f"v{n - axis}"


def structure_problems(ambient: ExplicitCategory, v: Sequence[Iterable], w: Iterable) -> list:
    bad = []
    arrows = ambient.arrows
    ids = set(ambient.identities.values())
    sets = [("v%d" % (i + 1), frozenset(s)) for i, s in enumerate(v)] + [("w", frozenset(w))]
    for name, s in sets:
        stray = [a for a in s if a not in arrows]
        if stray:
            bad.append((name, "unknown-arrows", stray[:5]))
            continue
        if not ids <= s:
            bad.append((name, "not-wide"))
        for x in ambient.objects:
            for f in ambient.in_arrows(x):
                if f not in s:
                    continue
                for g in ambient.out_arrows(x):
                    if g in s and ambient._compose(g, f) not in s:
                        bad.append((name, "not-closed", f, g))
                        break
    wset = sets[-1][1]
    for name, s in sets[:-1]:
        if not wset <= s:
            bad.append(("w", "not-contained-in", name))
    return bad


class NRelCategory:
    """``(a C, v_1 C, ..., v_n C, w C)`` over an explicit ambient category."""

    def __init__(self, n: int, ambient: ExplicitCategory, v: Sequence[Iterable], w: Iterable, name: str = "", check: bool = True):
        if n < 1 or len(v) != n:
            raise UsageError(f"need n >= 1 and exactly n structure subcategories (n={n}, got {len(v)})")
        self.n = n
        self.ambient = ambient
        self.v = tuple(frozenset(s) for s in v)
        self.w = frozenset(w)
        self.name = name or ambient.name
        if check:
            problems = structure_problems(ambient, self.v, self.w)
            if problems:
                raise StructureError(problems)

    def __repr__(self):
        return f"<NRelCategory n={self.n} {self.name}: {len(self.ambient.objects)} objects, {len(self.ambient.arrows)} arrows>"

    @property
    def objects(self):
        return self.ambient.objects

    def structure(self, label: str) -> frozenset:
        if label == "w":
            return self.w
        if label == "a":
            return frozenset(self.ambient.arrows)
        return self.v[int(label[1:]) - 1]

    def labels_of(self, a) -> frozenset:
        out = {f"v{i + 1}" for i, s in enumerate(self.v) if a in s}
        if a in self.w:
            out.add("w")
        return frozenset(out)


def make_nrelcat(ambient: ExplicitCategory, v: Sequence[Iterable], w: Iterable, name: str = "") -> NRelCategory:
    """Validated constructor; the axioms (i)/(ii) are checked separately."""
    return NRelCategory(len(v), ambient, v, w, name=name)


class PresentedNRel:
    """An n-relative category whose ambient is a presentation.

    ``v_i`` is generated by the generators tagged ``v{i}`` or ``w``; ``w`` by
    those tagged ``w``.
    """

    def __init__(self, n: int, presentation: Presentation, name: str = ""):
        self.n = n
        self.presentation = presentation
        self.name = name

    def __repr__(self):
        return f"<PresentedNRel n={self.n} {self.name}: {self.presentation!r}>"

    def realize(self, budget: Budget = Budget()) -> "NRelCategory | Undecided":
        R = realize(self.presentation, budget)
        if isinstance(R, Undecided):
            return R
        P = self.presentation
        w_gens = [R.generator_arrow(g) for g in P.with_tags("w")]
        v = []
        for i in range(1, self.n + 1):
            gens = [R.generator_arrow(g) for g in P.with_tags(f"v{i}")]
            v.append(R.closure(gens + w_gens))
        return NRelCategory(self.n, R, v, R.closure(w_gens), name=self.name or "realized")


def check_axiom_generation(C: NRelCategory) -> bool:
    """Every ambient arrow is a finite composite of arrows of the v_i."""
    if not isinstance(C, NRelCategory):
        raise UsageError("axiom checks need an explicit ambient category")
    gens = set().union(*C.v)
    return C.ambient.closure(gens) == frozenset(C.ambient.arrows)


def square_presentation(C: NRelCategory) -> tuple[Presentation, dict, dict]:
    """Generators: non-identity arrows of the v_i.  Relations: every commuting
    square ``y2 x1 = x2 y1`` with ``x1, x2`` in some v_i and ``y1, y2`` in some
    v_j (identities allowed, i = j allowed).
    """
    A = C.ambient
    gens_set = set().union(*C.v) - set(A.identities.values())
    gens = [Generator(a, A.src(a), A.tgt(a), C.labels_of(a)) for a in A.arrows if a in gens_set]

    def word(a):
        return () if A.is_identity(a) else (a,)

    # composite -> (first label, second label) -> words of two-step factorizations
    factorizations: dict = defaultdict(lambda: defaultdict(set))
    for i, vi in enumerate(C.v):
        for j, vj in enumerate(C.v):
            for f, g in A.composable_pairs():
                if f in vi and g in vj:
                    factorizations[A._compose(g, f)][(i, j)].add(word(f) + word(g))
    relations = []
    seen = set()
    for c, by_pair in factorizations.items():
        src, tgt = A.arrows[c]
        for (i, j), words in by_pair.items():
            if i > j or (j, i) not in by_pair:
                continue
            cls = sorted(words | by_pair[(j, i)], key=lambda t: (len(t), repr(t)))
            anchor = cls[0]
            for other in cls[1:]:
                key = (src, anchor, other)
                if key not in seen:
                    seen.add(key)
                    relations.append(Relation(anchor, other, src, tgt))
    P = Presentation(A.objects, gens, relations)
    return P, {x: x for x in A.objects}, {g.id: g.id for g in gens}


def check_axiom_relations(C: NRelCategory, budget: Budget = Budget()) -> IsoReport:
    """Every ambient relation follows from commuting v_i/v_j squares.

    Verified by comparing the square presentation with the ambient category;
    an ``unknown`` verdict means the budget ran out.
    """
    if not isinstance(C, NRelCategory):
        raise UsageError("axiom checks need an explicit ambient category")
    P, om, gm = square_presentation(C)
    return compare_presented_to_explicit(P, C.ambient, om, gm, budget)


def satisfies_axioms(C: NRelCategory, budget: Budget = Budget()) -> bool:
    return check_axiom_generation(C) and check_axiom_relations(C, budget).is_isomorphism


def chain_w(p: int, n: int) -> NRelCategory:
    """``p^w``: every structure category is the chain."""
    A = chain(p)
    arrows = frozenset(A.arrows)
    return NRelCategory(n, A, [arrows] * n, arrows, name=f"{p}^w")


def chain_v(p: int, i: int, n: int) -> NRelCategory:
    """``p^{v_i}``: ``v_i`` is the chain, every other structure category is discrete."""
    if not 1 <= i <= n:
        raise UsageError(f"need 1 <= i <= n, got i={i}, n={n}")
    A = chain(p)
    ids = frozenset(discrete_chain(p).arrows)
    everything = frozenset(A.arrows)
    v = [everything if k == i else ids for k in range(1, n + 1)]
    return NRelCategory(n, A, v, ids, name=f"{p}^v{i}")


def terminal(n: int) -> NRelCategory:
    return chain_w(0, n)


def product_nrel(factors: Sequence[NRelCategory]) -> NRelCategory:
    """Componentwise product; structure subcategories are products of the factors'."""
    if not factors:
        raise UsageError("empty product")
    n = factors[0].n
    if any(F.n != n for F in factors):
        raise UsageError("all factors must have the same n")
    A = product(*(F.ambient for F in factors))

    def sub(label):
        sets = [F.structure(label) for F in factors]
        return frozenset(a for a in A.arrows if all(c in s for c, s in zip(a, sets)))

    return NRelCategory(
        n,
        A,
        [sub(f"v{i}") for i in range(1, n + 1)],
        sub("w"),
        name=" x ".join(F.name for F in factors),
        check=False,
    )


def standard_nrel(degrees: Sequence[int]) -> NRelCategory:
    """``p_n^{v_n} x ... x p_1^{v_1} x q^w`` for ``degrees = (p_n, ..., p_1, q)``."""
    n = len(degrees) - 1
    if n < 1:
        raise UsageError("a multi-index has n + 1 >= 2 entries")
    factors = [chain_v(p, n - a, n) for a, p in enumerate(degrees[:-1])] + [chain_w(degrees[-1], n)]
    return product_nrel(factors)


class RelFunctor(Functor):
    """A functor of ambients carrying each v_i into v_i and w into w."""

    def __init__(self, source: NRelCategory, target: NRelCategory, object_map: Mapping, arrow_map: Mapping):
        super().__init__(source.ambient, target.ambient, object_map, arrow_map)
        self.rel_source = source
        self.rel_target = target


def relative_violations(F: RelFunctor) -> list:
    bad = functor_violations(F)
    C, D = F.rel_source, F.rel_target
    for label in labels(C.n):
        tgt = D.structure(label)
        for a in C.structure(label):
            if F.arrow_map[a] not in tgt:
                bad.append(("structure", label, a))
    return bad


def enumerate_relative_functors(
    C: NRelCategory, D: NRelCategory, bound: int | None = DEFAULT_FUNCTOR_BOUND
):
    """All relative functors ``C -> D`` (ambient functors preserving every v_i and w)."""
    if C.n != D.n:
        raise UsageError("n-relative categories of different n")
    required = {a: [D.structure(lab) for lab in C.labels_of(a)] for a in C.ambient.arrows}

    def allowed(a, b):
        return all(b in s for s in required[a])

    for F in enumerate_functors(C.ambient, D.ambient, bound=bound, allowed=allowed):
        yield RelFunctor(C, D, F.object_map, F.arrow_map)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if repr(rb) < repr(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class ColimitPresentation:
    """Presentation-level colimit together with its cocone on objects and arrows."""

    nrel: PresentedNRel
    object_class: dict  # (index object, object) -> presentation object
    arrow_word: dict  # (index object, arrow) -> generator word (empty for identities)


def colim_nrelcat(index: ExplicitCategory, pieces: Mapping, maps: Mapping) -> ColimitPresentation:
    """Colimit of a diagram of n-relative categories, computed as a presentation.

    ``pieces`` sends each index object to an explicit NRelCategory; ``maps``
    sends non-identity index arrows to Functors between the ambients.  A
    generating set of index arrows suffices, since the cocone conditions for
    composites follow from those for their factors.
    Generators are the identified non-identity arrows of all pieces, relations
    are the pieces' composition tables, tags are carried along.
    """
    ns = {P.n for P in pieces.values()}
    if len(ns) != 1:
        raise UsageError("pieces must share n")
    (n,) = ns
    objs = _UnionFind()
    arrs = _UnionFind()
    for i, C in pieces.items():
        for x in C.objects:
            objs.add((i, x))
        for a in C.ambient.arrows:
            if not C.ambient.is_identity(a):
                arrs.add((i, a))
    collapsed = set()
    for u in maps:
        if index.is_identity(u):
            continue
        i, j = index.arrows[u]
        F = maps[u]
        Ci, Cj = pieces[i], pieces[j]
        for x in Ci.objects:
            objs.union((i, x), (j, F.object_map[x]))
        for a in Ci.ambient.arrows:
            if Ci.ambient.is_identity(a):
                continue
            b = F.arrow_map[a]
            if Cj.ambient.is_identity(b):
                collapsed.add((i, a))
            else:
                arrs.union((i, a), (j, b))
    tags: dict = defaultdict(set)
    for i, C in pieces.items():
        for a in C.ambient.arrows:
            if not C.ambient.is_identity(a):
                tags[arrs.find((i, a))] |= C.labels_of(a)
    object_class = {key: objs.find(key) for key in objs.parent}
    arrow_word = {}
    for i, C in pieces.items():
        for a in C.ambient.arrows:
            arrow_word[(i, a)] = () if C.ambient.is_identity(a) else (arrs.find((i, a)),)
    gens = []
    for g in sorted({arrs.find(k) for k in arrs.parent}, key=repr):
        i, a = g
        A = pieces[i].ambient
        gens.append(Generator(g, object_class[(i, A.src(a))], object_class[(i, A.tgt(a))], frozenset(tags[g])))
    relations = set()
    for key in collapsed:
        g = arrs.find(key)
        x = object_class[(key[0], pieces[key[0]].ambient.src(key[1]))]
        relations.add(Relation((g,), (), x, x))
    for i, C in pieces.items():
        A = C.ambient
        for f, g in A.composable_pairs():
            if A.is_identity(f) or A.is_identity(g):
                continue
            lhs = arrow_word[(i, f)] + arrow_word[(i, g)]
            rhs = arrow_word[(i, A._compose(g, f))]
            if lhs != rhs:
                relations.add(Relation(lhs, rhs, object_class[(i, A.src(f))], object_class[(i, A.tgt(g))]))
    P = Presentation(sorted(set(object_class.values()), key=repr), gens, sorted(relations, key=repr))
    return ColimitPresentation(PresentedNRel(n, P, name="colim"), object_class, arrow_word)

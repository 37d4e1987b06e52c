"""Finite categories given by total data, functors between them, and chains.

Objects and arrows are arbitrary hashable values.  Composition is written
``C.compose(g, f)`` for ``g o f`` (``f`` first); the serialized table lists
triples ``[f, g, g o f]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .errors import ResourceError, UsageError

DEFAULT_FUNCTOR_BOUND = 10**7


class ExplicitCategory:
    """A finite category.

    ``compose`` is either a mapping ``(f, g) -> g o f`` over composable pairs or
    a callable ``(g, f) -> g o f``; categories built from products or
    over-categories use the callable form so that the table is only
    materialized on request.
    """

    def __init__(
        self,
        objects: Iterable[Hashable],
        arrows: Mapping[Hashable, tuple[Hashable, Hashable]],
        identities: Mapping[Hashable, Hashable],
        compose: Mapping | Callable,
        name: str = "",
    ):
        self.objects = tuple(objects)
        self.arrows = dict(arrows)
        self.identities = dict(identities)
        self.name = name
        if callable(compose):
            self._compose = compose
        else:
            table = dict(compose)
            self._compose = lambda g, f: table[(f, g)]
        self._hom = None
        self._identity_set = frozenset(self.identities.values())

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<ExplicitCategory{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    def src(self, a):
        return self.arrows[a][0]

    def tgt(self, a):
        return self.arrows[a][1]

    def identity(self, x):
        return self.identities[x]

    def is_identity(self, a) -> bool:
        return a in self._identity_set

    def compose(self, g, f):
        """``g o f``; raises UsageError when ``tgt(f) != src(g)``."""
        if self.arrows[f][1] != self.arrows[g][0]:
            raise UsageError(f"arrows {f!r} and {g!r} are not composable")
        return self._compose(g, f)

    def compose_path(self, arrows: Iterable, start=None):
        """Composite of a sequence of arrows given in path order."""
        result = None if start is None else self.identities[start]
        for a in arrows:
            result = a if result is None else self.compose(a, result)
        if result is None:
            raise UsageError("empty path needs a start object")
        return result

    def _build_index(self):
        hom: dict = {}
        out: dict = {x: [] for x in self.objects}
        inc: dict = {x: [] for x in self.objects}
        for a, (s, t) in self.arrows.items():
            hom.setdefault((s, t), []).append(a)
            out[s].append(a)
            inc[t].append(a)
        self._hom, self._out, self._in = hom, out, inc

    def hom(self, x, y) -> list:
        if self._hom is None:
            self._build_index()
        return self._hom.get((x, y), [])

    def out_arrows(self, x) -> list:
        if self._hom is None:
            self._build_index()
        return self._out[x]

    def in_arrows(self, x) -> list:
        if self._hom is None:
            self._build_index()
        return self._in[x]

    def composable_pairs(self) -> Iterator[tuple]:
        """All pairs ``(f, g)`` with ``tgt(f) == src(g)``."""
        for x in self.objects:
            for f in self.in_arrows(x):
                for g in self.out_arrows(x):
                    yield f, g

    def compose_table(self) -> dict:
        return {(f, g): self._compose(g, f) for f, g in self.composable_pairs()}

    def closure(self, arrows: Iterable) -> frozenset:
        """Smallest set of arrows containing ``arrows`` and all identities, closed under composition."""
        closed = set(arrows) | self._identity_set
        frontier = list(closed)
        while frontier:
            new = []
            for a in frontier:
                s, t = self.arrows[a]
                for b in self.out_arrows(t):
                    if b in closed:
                        c = self._compose(b, a)
                        if c not in closed:
                            closed.add(c)
                            new.append(c)
                for b in self.in_arrows(s):
                    if b in closed:
                        c = self._compose(a, b)
                        if c not in closed:
                            closed.add(c)
                            new.append(c)
            frontier = new
        return frozenset(closed)

    def subcategory(self, arrows: Iterable, name: str = "") -> "ExplicitCategory":
        """Wide subcategory on the given arrow set (which must be closed)."""
        keep = set(arrows)
        return ExplicitCategory(
            self.objects,
            {a: self.arrows[a] for a in self.arrows if a in keep},
            self.identities,
            self._compose,
            name=name or self.name,
        )


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


def validate_category(C: ExplicitCategory) -> ValidationReport:
    """Check every category law exhaustively; all failures become report entries."""
    report = ValidationReport()
    bad = report.violations
    objs = set(C.objects)
    for a, (s, t) in C.arrows.items():
        if s not in objs or t not in objs:
            bad.append(("endpoint", a, (s, t)))
    for x in C.objects:
        i = C.identities.get(x)
        if i is None or i not in C.arrows:
            bad.append(("identity-missing", x))
        elif C.arrows[i] != (x, x):
            bad.append(("identity-endpoints", x, i))
    if bad:
        return report

    comp = {}
    for f, g in C.composable_pairs():
        try:
            h = C._compose(g, f)
        except Exception as exc:  # a table missing an entry is a violation, not a crash
            bad.append(("compose-undefined", f, g, repr(exc)))
            continue
        if h not in C.arrows or C.arrows[h] != (C.src(f), C.tgt(g)):
            bad.append(("compose-endpoints", f, g, h))
            continue
        comp[(f, g)] = h
    for a, (s, t) in C.arrows.items():
        if comp.get((C.identities[s], a)) != a:
            bad.append(("left-identity", a))
        if comp.get((a, C.identities[t])) != a:
            bad.append(("right-identity", a))
    for (f, g), gf in comp.items():
        for h in C.out_arrows(C.tgt(g)):
            hg = comp.get((g, h))
            lhs = comp.get((gf, h))
            rhs = comp.get((f, hg)) if hg is not None else None
            if lhs is None or rhs is None or lhs != rhs:
                bad.append(("associativity", f, g, h))
    return report


class Functor:
    """A functor given by object and arrow maps (dicts over the source)."""

    def __init__(self, source: ExplicitCategory, target: ExplicitCategory, object_map: Mapping, arrow_map: Mapping):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.arrow_map = dict(arrow_map)

    @property
    def key(self) -> tuple:
        return (
            tuple(self.object_map[x] for x in self.source.objects),
            tuple(self.arrow_map[a] for a in self.source.arrows),
        )

    def __eq__(self, other):
        return (
            isinstance(other, Functor)
            and self.source is other.source
            and self.target is other.target
            and self.key == other.key
        )

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Functor({self.object_map!r})"

    def __call__(self, a):
        return self.arrow_map[a]

    def on_object(self, x):
        return self.object_map[x]

    def then(self, other: "Functor") -> "Functor":
        """``other o self``."""
        return Functor(
            self.source,
            other.target,
            {x: other.object_map[y] for x, y in self.object_map.items()},
            {a: other.arrow_map[b] for a, b in self.arrow_map.items()},
        )


def functor_violations(F: Functor, generators: Iterable | None = None) -> list:
    """Independent exhaustive check that ``F`` preserves src, tgt, identities and composition.

    With ``generators`` given (a set of source arrows that generates the
    source), composition is only checked on pairs ``(f, g)`` with ``g`` a
    generator; that suffices once identities are preserved, because every
    composite then unfolds one generator at a time.
    """
    C, D = F.source, F.target
    bad = []
    targets = set(D.objects)
    for x in C.objects:
        if x not in F.object_map or F.object_map[x] not in targets:
            bad.append(("object", x))
    for a, (s, t) in C.arrows.items():
        b = F.arrow_map.get(a)
        if b is None or b not in D.arrows:
            bad.append(("arrow", a))
            continue
        if D.arrows[b] != (F.object_map.get(s), F.object_map.get(t)):
            bad.append(("endpoints", a, b))
    if bad:
        return bad
    for x in C.objects:
        if F.arrow_map[C.identities[x]] != D.identities[F.object_map[x]]:
            bad.append(("identity", x))
    if generators is None:
        pairs = C.composable_pairs()
    else:
        pairs = ((f, g) for g in set(generators) for f in C.in_arrows(C.src(g)))
    for f, g in pairs:
        if F.arrow_map[C._compose(g, f)] != D._compose(F.arrow_map[g], F.arrow_map[f]):
            bad.append(("composition", f, g))
    return bad


def is_functor(F: Functor) -> bool:
    return not functor_violations(F)


def isomorphism_violations(F: Functor, generators: Iterable | None = None) -> list:
    """Functor laws plus bijectivity on objects and arrows."""
    bad = functor_violations(F, generators)
    if bad:
        return bad
    C, D = F.source, F.target
    if len(set(F.object_map.values())) != len(C.objects) or len(C.objects) != len(D.objects):
        bad.append(("objects-not-bijective",))
    if len(set(F.arrow_map.values())) != len(C.arrows) or len(C.arrows) != len(D.arrows):
        bad.append(("arrows-not-bijective",))
    return bad


def identity_functor(C: ExplicitCategory) -> Functor:
    return Functor(C, C, {x: x for x in C.objects}, {a: a for a in C.arrows})


def poset_category(elements: Iterable, leq: Callable[[Hashable, Hashable], bool], name: str = "") -> ExplicitCategory:
    """The category of a finite poset; the arrow ``x -> y`` is the pair ``(x, y)``."""
    els = list(elements)
    arrows = {(x, y): (x, y) for x in els for y in els if leq(x, y)}
    return ExplicitCategory(
        els,
        arrows,
        {x: (x, x) for x in els},
        lambda g, f: (f[0], g[1]),
        name=name,
    )


def chain(p: int) -> ExplicitCategory:
    """``0 -> 1 -> ... -> p`` as a poset category."""
    if p < 0:
        raise UsageError("chain length must be nonnegative")
    return poset_category(range(p + 1), lambda i, j: i <= j, name=f"[{p}]")


def discrete_chain(p: int) -> ExplicitCategory:
    """Objects of ``chain(p)`` with identity arrows only."""
    if p < 0:
        raise UsageError("chain length must be nonnegative")
    return poset_category(range(p + 1), lambda i, j: i == j, name=f"|[{p}]|")


def inclusion(sub: ExplicitCategory, ambient: ExplicitCategory) -> Functor:
    return Functor(sub, ambient, {x: x for x in sub.objects}, {a: a for a in sub.arrows})


class ProductCategory(ExplicitCategory):
    """Finite product; objects and arrows are tuples with one entry per factor."""

    def __init__(self, factors: Iterable[ExplicitCategory]):
        self.factors = tuple(factors)
        objects = list(itertools.product(*(F.objects for F in self.factors)))
        arrows = {}
        for tup in itertools.product(*(list(F.arrows.items()) for F in self.factors)):
            arrows[tuple(a for a, _ in tup)] = (
                tuple(e[0] for _, e in tup),
                tuple(e[1] for _, e in tup),
            )
        identities = {x: tuple(F.identities[c] for F, c in zip(self.factors, x)) for x in objects}
        factors = self.factors

        def compose(g, f):
            return tuple(F._compose(gc, fc) for F, gc, fc in zip(factors, g, f))

        super().__init__(objects, arrows, identities, compose, name=" x ".join(F.name for F in self.factors))

    def projection(self, k: int) -> Functor:
        return Functor(
            self,
            self.factors[k],
            {x: x[k] for x in self.objects},
            {a: a[k] for a in self.arrows},
        )


def product(*factors: ExplicitCategory) -> ProductCategory:
    return ProductCategory(factors)


def enumerate_functors(
    C: ExplicitCategory,
    D: ExplicitCategory,
    bound: int | None = DEFAULT_FUNCTOR_BOUND,
    allowed: Callable[[Hashable, Hashable], bool] | None = None,
) -> Iterator[Functor]:
    """Every functor ``C -> D``, by backtracking over object then arrow images.

    ``allowed(a, b)`` may veto sending source arrow ``a`` to target arrow ``b``.
    Raises ResourceError when ``|ob D| ** |ob C|`` exceeds ``bound``.
    """
    if bound is not None and len(D.objects) ** len(C.objects) > bound:
        raise ResourceError(
            f"{len(D.objects)}^{len(C.objects)} candidate object maps exceed bound {bound}", bound
        )
    # triples (f, g, g o f) among non-identity arrows, indexed by each member
    triples: dict = {a: [] for a in C.arrows}
    for f, g in C.composable_pairs():
        if C.is_identity(f) or C.is_identity(g):
            continue
        h = C._compose(g, f)
        t = (f, g, h)
        triples[f].append(t)
        triples[g].append(t)
        if h != f and h != g:
            triples[h].append(t)

    order = []
    placed = set()
    pending = [a for a in C.arrows if not C.is_identity(a)]
    for x in C.objects:
        order.append(("obj", x))
        placed.add(x)
        rest = []
        for a in pending:
            s, t = C.arrows[a]
            if s in placed and t in placed:
                order.append(("arr", a))
            else:
                rest.append(a)
        pending = rest

    omap: dict = {}
    amap: dict = {}

    def consistent(a) -> bool:
        for f, g, h in triples[a]:
            if f in amap and g in amap:
                expected = D._compose(amap[g], amap[f])
                actual = amap.get(h) if not C.is_identity(h) else D.identities[omap[C.src(h)]]
                if actual is not None and actual != expected:
                    return False
        return True

    def search(k):
        if k == len(order):
            full = dict(amap)
            for x in C.objects:
                full[C.identities[x]] = D.identities[omap[x]]
            yield Functor(C, D, dict(omap), full)
            return
        kind, item = order[k]
        if kind == "obj":
            for y in D.objects:
                omap[item] = y
                yield from search(k + 1)
            del omap[item]
        else:
            s, t = C.arrows[item]
            for b in D.hom(omap[s], omap[t]):
                if allowed is not None and not allowed(item, b):
                    continue
                amap[item] = b
                if consistent(item):
                    yield from search(k + 1)
            amap.pop(item, None)

    yield from search(0)


def count_monotone_maps(p: int, q: int) -> int:
    """Monotone maps ``[p] -> [q]``: ``C(p + q + 1, p + 1)``."""
    from math import comb

    return comb(p + q + 1, p + 1)

"""Finitely presented categories and a budgeted word-problem engine.

Equality of paths is the smallest congruence containing the relations
(closed under pre- and post-composition).  The engine computes that
congruence on the finite universe of paths of length at most
``Budget.max_len``: a verdict ``equal`` is witnessed by a rewrite trace, a
verdict ``distinct`` by a congruence class that is closed under every
one-step rewrite (hence an exact class of the full congruence).
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import StructureError, UsageError
from .fincat import ExplicitCategory

EQUAL, DISTINCT, UNKNOWN = "equal", "distinct", "unknown"


@dataclass(frozen=True)
class Budget:
    max_len: int = 8
    max_classes: int = 200_000  # bound on the number of paths in the universe

    def __post_init__(self):
        if self.max_len < 0 or self.max_classes < 0:
            raise UsageError("budget fields must be nonnegative")


@dataclass(frozen=True)
class Generator:
    id: Hashable
    src: Hashable
    tgt: Hashable
    tags: frozenset = frozenset()


@dataclass(frozen=True)
class Relation:
    lhs: tuple
    rhs: tuple
    src: Hashable
    tgt: Hashable


@dataclass(frozen=True)
class Path:
    src: Hashable
    tgt: Hashable
    word: tuple = ()

    def __len__(self):
        return len(self.word)

    def __str__(self):
        if not self.word:
            return f"id[{self.src}]"
        return ".".join(str(g) for g in self.word)


class Presentation:
    """Objects, tagged generating arrows, and relations between parallel words."""

    def __init__(self, objects: Iterable, generators: Iterable[Generator], relations: Iterable[Relation] = ()):
        self.objects = tuple(objects)
        self.generators = {g.id: g for g in generators}
        self.relations = tuple(relations)
        problems = self.problems()
        if problems:
            raise StructureError(problems)
        self._out: dict = {x: [] for x in self.objects}
        self._in: dict = {x: [] for x in self.objects}
        for g in self.generators.values():
            self._out[g.src].append(g)
            self._in[g.tgt].append(g)
        self._by_first: dict = {}
        self._empty_sides: dict = {}
        for k, rel in enumerate(self.relations):
            for direction, (side, other) in enumerate(((rel.lhs, rel.rhs), (rel.rhs, rel.lhs))):
                if side:
                    self._by_first.setdefault(side[0], []).append((k, direction, side, other))
                else:
                    self._empty_sides.setdefault(rel.src, []).append((k, direction, side, other))

    def __repr__(self):
        return (
            f"<Presentation: {len(self.objects)} objects, {len(self.generators)} generators, "
            f"{len(self.relations)} relations>"
        )

    def problems(self) -> list:
        bad = []
        objs = set(self.objects)
        for g in self.generators.values():
            if g.src not in objs or g.tgt not in objs:
                bad.append(("generator-endpoint", g.id))
        if bad:
            return bad
        for k, rel in enumerate(self.relations):
            for side in (rel.lhs, rel.rhs):
                try:
                    end = self.word_end(rel.src, side)
                except UsageError:
                    bad.append(("relation-not-composable", k))
                    continue
                if end != rel.tgt:
                    bad.append(("relation-not-parallel", k))
        return bad

    def word_end(self, src, word) -> Hashable:
        x = src
        for g in word:
            gen = self.generators[g]
            if gen.src != x:
                raise UsageError(f"generator {g!r} does not start at {x!r}")
            x = gen.tgt
        return x

    def path(self, word, src=None) -> Path:
        word = tuple(word)
        if src is None:
            if not word:
                raise UsageError("an empty path needs its object")
            src = self.generators[word[0]].src
        return Path(src, self.word_end(src, word), word)

    def out_generators(self, x) -> list:
        return self._out[x]

    def in_generators(self, x) -> list:
        return self._in[x]

    def with_tags(self, tag) -> list:
        return [g.id for g in self.generators.values() if tag in g.tags]

    def rewrites(self, src, word):
        """All one-step rewrites ``(position, relation, direction, new_word)``."""
        n = len(word)
        for i in range(n):
            for k, direction, side, other in self._by_first.get(word[i], ()):
                if word[i : i + len(side)] == side:
                    yield i, k, direction, word[:i] + other + word[i + len(side) :]
        if self._empty_sides:
            x = src
            for i in range(n + 1):
                for k, direction, side, other in self._empty_sides.get(x, ()):
                    yield i, k, direction, word[:i] + other + word[i:]
                if i < n:
                    x = self.generators[word[i]].tgt


def relation(P_or_generators, lhs, rhs, src=None, tgt=None) -> Relation:
    """Build a relation, inferring endpoints from the words where possible."""
    gens = P_or_generators
    lhs, rhs = tuple(lhs), tuple(rhs)
    word = lhs or rhs
    if word:
        src = gens[word[0]].src if src is None else src
        tgt = gens[word[-1]].tgt if tgt is None else tgt
    if src is None:
        raise UsageError("relation between empty words needs explicit endpoints")
    return Relation(lhs, rhs, src, src if tgt is None else tgt)


@dataclass(frozen=True)
class RewriteStep:
    position: int
    relation: int
    direction: int  # 0: lhs -> rhs, 1: rhs -> lhs


@dataclass
class EqualityDecision:
    verdict: str
    certificate: object = None
    reason: str = ""

    def to_json(self):
        cert = self.certificate
        if self.verdict == EQUAL:
            cert = [[s.position, s.relation, s.direction] for s in cert]
        elif self.verdict == DISTINCT:
            cert = {"closed_class": [[str(g) for g in w] for w in cert]}
        return {"verdict": self.verdict, "certificate": cert, "reason": self.reason}


class _Exhausted(Exception):
    pass


class _Universe:
    """All paths of bounded length from given start objects, with congruence classes."""

    def __init__(self, P: Presentation, starts, max_len: int, max_paths: int, target=None):
        self.P = P
        self.max_len = max_len
        self.keys: list = []
        self.ends: list = []
        self.parent: list = []  # index of the path with the last generator removed
        self.index: dict = {}
        dist = None
        if target is not None:
            dist = _distances_to(P, target)
        for x in starts:
            if dist is not None and dist.get(x, max_len + 1) > max_len:
                continue
            self._add((x, ()), x, -1, max_paths)
        k = 0
        while k < len(self.keys):
            src, word = self.keys[k]
            if len(word) < max_len:
                for g in P.out_generators(self.ends[k]):
                    if dist is not None and len(word) + 1 + dist.get(g.tgt, max_len + 1) > max_len:
                        continue
                    self._add((src, word + (g.id,)), g.tgt, k, max_paths)
            k += 1
        self.uf = list(range(len(self.keys)))
        self.open = [False] * len(self.keys)
        for i, (src, word) in enumerate(self.keys):
            if target is not None and self.ends[i] != target:
                continue
            for _, _, _, new in P.rewrites(src, word):
                j = self.index.get((src, new))
                if j is None:
                    self.open[i] = True
                else:
                    self.union(i, j)
        self._class_open = {}
        for i in range(len(self.keys)):
            if self.open[i]:
                self._class_open[self.find(i)] = True

    def _add(self, key, end, parent, max_paths):
        if len(self.keys) >= max_paths:
            raise _Exhausted(f"more than {max_paths} paths of length <= {self.max_len}")
        self.index[key] = len(self.keys)
        self.keys.append(key)
        self.ends.append(end)
        self.parent.append(parent)

    def find(self, i):
        uf = self.uf
        while uf[i] != i:
            uf[i] = uf[uf[i]]
            i = uf[i]
        return i

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.uf[max(a, b)] = min(a, b)

    def closed(self, i) -> bool:
        return not self._class_open.get(self.find(i), False)

    def members(self, i) -> list:
        r = self.find(i)
        return [k for k in range(len(self.keys)) if self.find(k) == r]


def _distances_to(P: Presentation, target) -> dict:
    dist = {target: 0}
    queue = deque([target])
    while queue:
        y = queue.popleft()
        for g in P.in_generators(y):
            if g.src not in dist:
                dist[g.src] = dist[y] + 1
                queue.append(g.src)
    return dist


def apply_step(P: Presentation, src, word: tuple, step: RewriteStep) -> tuple:
    rel = P.relations[step.relation]
    side, other = (rel.lhs, rel.rhs) if step.direction == 0 else (rel.rhs, rel.lhs)
    i = step.position
    if word[i : i + len(side)] != side:
        raise UsageError(f"relation {step.relation} does not occur at position {i}")
    if not side:
        x = P.word_end(src, word[:i])
        if x != rel.src:
            raise UsageError(f"empty side of relation {step.relation} sits at {rel.src!r}, not {x!r}")
    return word[:i] + other + word[i + len(side) :]


def decide_equal(P: Presentation, a: Path, b: Path, budget: Budget = Budget()) -> EqualityDecision:
    """Decide ``a == b`` in the presented category, within the budget."""
    if (a.src, a.tgt) != (b.src, b.tgt):
        raise UsageError("paths are not parallel")
    if a.word == b.word:
        return EqualityDecision(EQUAL, [], "identical words")
    if max(len(a), len(b)) > budget.max_len:
        return EqualityDecision(UNKNOWN, None, f"a path is longer than max_len={budget.max_len}")
    try:
        U = _Universe(P, [a.src], budget.max_len, budget.max_classes, target=a.tgt)
    except _Exhausted as exc:
        return EqualityDecision(UNKNOWN, None, str(exc))
    i, j = U.index[(a.src, a.word)], U.index[(b.src, b.word)]
    if U.find(i) == U.find(j):
        return EqualityDecision(EQUAL, _trace(P, U, a, b), "rewrite trace")
    for k in (i, j):
        if U.closed(k):
            members = [U.keys[m][1] for m in U.members(k)]
            return EqualityDecision(DISTINCT, members, "closed congruence class")
    return EqualityDecision(UNKNOWN, None, f"classes not closed within max_len={budget.max_len}")


def _trace(P: Presentation, U: _Universe, a: Path, b: Path) -> list:
    start, goal = a.word, b.word
    prev = {start: None}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if w == goal:
            break
        for pos, k, direction, new in P.rewrites(a.src, w):
            if new not in prev and (a.src, new) in U.index:
                prev[new] = (w, RewriteStep(pos, k, direction))
                queue.append(new)
    steps = []
    w = goal
    while prev[w] is not None:
        w, step = prev[w]
        steps.append(step)
    return steps[::-1]


def replay_certificate(P: Presentation, a: Path, b: Path, decision: EqualityDecision) -> bool:
    """Independently re-check an ``equal`` or ``distinct`` certificate."""
    if decision.verdict == EQUAL:
        w = a.word
        try:
            for step in decision.certificate:
                w = apply_step(P, a.src, w, step)
        except UsageError:
            return False
        return w == b.word
    if decision.verdict == DISTINCT:
        cls = {tuple(w) for w in decision.certificate}
        if (a.word in cls) == (b.word in cls):
            return False
        for w in cls:
            for _, _, _, new in P.rewrites(a.src, w):
                if new not in cls:
                    return False
        return True
    return False


@dataclass
class Undecided:
    reason: str
    diagnostics: dict = field(default_factory=dict)

    def __bool__(self):
        return False


class RealizedCategory(ExplicitCategory):
    """Quotient of the path category; arrows are representative ``Path``s."""

    def __init__(self, P: Presentation, U: _Universe, short_len: int):
        self.presentation = P
        self._U = U
        self._short_len = short_len
        reps: dict = {}
        for i, (src, word) in enumerate(U.keys):
            if len(word) > short_len:
                continue
            r = U.find(i)
            best = reps.get(r)
            cand = Path(src, U.ends[i], word)
            if best is None or (len(word), repr(word)) < (len(best.word), repr(best.word)):
                reps[r] = cand
        self._rep_of_root = reps
        arrows = {p: (p.src, p.tgt) for p in reps.values()}
        identities = {x: self._rep_of_root[U.find(U.index[(x, ())])] for x in P.objects}
        self._cache: dict = {}
        super().__init__(P.objects, arrows, identities, self._compose_reps, name="realized")

    def _reduce(self, src, word) -> Path:
        U, L0 = self._U, self._short_len
        while len(word) > L0:
            head = self._rep_of_root[U.find(U.index[(src, word[: L0 + 1])])]
            word = head.word + word[L0 + 1 :]
        return self._rep_of_root[U.find(U.index[(src, word)])]

    def _compose_reps(self, g: Path, f: Path) -> Path:
        key = (f, g)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self._reduce(f.src, f.word + g.word)
        return hit

    def arrow_of(self, path) -> Path:
        """The arrow (representative path) of any path of the presentation."""
        if not isinstance(path, Path):
            path = self.presentation.path(path)
        return self._reduce(path.src, path.word)

    def generator_arrow(self, g) -> Path:
        return self.arrow_of(self.presentation.path((g,)))


def grid_presentation(degrees: Sequence[int]) -> Presentation:
    """``[p_1] x ... x [p_k]`` by unit steps ``(axis, point)`` and commuting unit squares."""
    degrees = tuple(degrees)
    points = list(itertools.product(*(range(p + 1) for p in degrees)))

    def up(g, a):
        return g[:a] + (g[a] + 1,) + g[a + 1 :]

    gens = [Generator((a, g), g, up(g, a)) for g in points for a in range(len(degrees)) if g[a] < degrees[a]]
    rels = []
    for g in points:
        for a, b in itertools.combinations(range(len(degrees)), 2):
            if g[a] < degrees[a] and g[b] < degrees[b]:
                rels.append(Relation(((a, g), (b, up(g, a))), ((b, g), (a, up(g, b))), g, up(up(g, a), b)))
    return Presentation(points, gens, rels)


def realize(P: Presentation, budget: Budget = Budget()) -> RealizedCategory | Undecided:
    """Materialize the presented category when every hom-set is certified finite."""
    try:
        U = _Universe(P, P.objects, budget.max_len, budget.max_classes)
    except _Exhausted as exc:
        return Undecided(str(exc))
    minlen: dict = {}
    for i, (_, word) in enumerate(U.keys):
        r = U.find(i)
        minlen[r] = min(minlen.get(r, len(word)), len(word))
    by_len: dict = {}
    for i, (_, word) in enumerate(U.keys):
        by_len.setdefault(len(word), []).append(i)
    short = None
    for k in range(budget.max_len):
        if all(minlen[U.find(i)] <= k for i in by_len.get(k + 1, ())):
            short = k
            break
    if short is None:
        return Undecided(
            "hom-sets did not stabilize",
            {"max_len": budget.max_len, "paths": len(U.keys)},
        )
    roots_by_hom: dict = {}
    for i, (src, word) in enumerate(U.keys):
        if len(word) <= short:
            roots_by_hom.setdefault((src, U.ends[i]), set()).add(U.find(i))
    for hom, roots in roots_by_hom.items():
        opened = [r for r in roots if U._class_open.get(r, False)]
        if len(opened) > 1:
            return Undecided("two parallel classes are not closed", {"hom": repr(hom)})
    return RealizedCategory(P, U, short)


@dataclass
class IsoReport:
    well_defined: bool
    objects_bijective: bool = False
    surjective: bool | None = None
    injective: bool | None = None
    structure_preserved: bool | None = None
    witnesses: list = field(default_factory=list)
    reason: str = ""

    @property
    def verdict(self) -> str:
        flags = [self.well_defined, self.objects_bijective, self.surjective, self.injective]
        if self.structure_preserved is not None:
            flags.append(self.structure_preserved)
        if any(f is False for f in flags):
            return "not-isomorphism"
        if any(f is None for f in flags):
            return "unknown"
        return "isomorphism"

    @property
    def is_isomorphism(self) -> bool:
        return self.verdict == "isomorphism"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "well_defined": self.well_defined,
            "objects_bijective": self.objects_bijective,
            "surjective": self.surjective,
            "injective": self.injective,
            "structure_preserved": self.structure_preserved,
            "witnesses": [repr(w) for w in self.witnesses[:10]],
            "reason": self.reason,
        }


def _check_endpoints(P: Presentation, C: ExplicitCategory, object_map: Mapping, generator_map: Mapping):
    for x in P.objects:
        if x not in object_map or object_map[x] not in C.identities:
            raise UsageError(f"object {x!r} has no image")
    for g in P.generators.values():
        a = generator_map.get(g.id)
        if a is None or a not in C.arrows:
            raise UsageError(f"generator {g.id!r} has no image")
        if C.arrows[a] != (object_map[g.src], object_map[g.tgt]):
            raise UsageError(f"generator {g.id!r} maps to an arrow with wrong endpoints")


def evaluate(P: Presentation, C: ExplicitCategory, object_map: Mapping, generator_map: Mapping, src, word):
    a = C.identities[object_map[src]]
    for g in word:
        a = C._compose(generator_map[g], a)
    return a


def relation_violations(P, C, object_map, generator_map) -> list:
    _check_endpoints(P, C, object_map, generator_map)
    return [
        k
        for k, rel in enumerate(P.relations)
        if evaluate(P, C, object_map, generator_map, rel.src, rel.lhs)
        != evaluate(P, C, object_map, generator_map, rel.src, rel.rhs)
    ]


def check_functor_well_defined(P: Presentation, C: ExplicitCategory, object_map: Mapping, generator_map: Mapping) -> bool:
    """True iff every relation of ``P`` maps to an equality in ``C``."""
    return not relation_violations(P, C, object_map, generator_map)


def shortest_preimages(P, C, object_map, generator_map) -> dict:
    """For each arrow of ``C`` in the image, a shortest generator path mapping to it.

    Breadth-first over states (start object, arrow of ``C``); the state space is
    finite, so arrows not returned are not in the image at all.
    """
    reps: dict = {}
    queue = deque()
    for x in P.objects:
        a = C.identities[object_map[x]]
        if a not in reps:
            reps[a] = Path(x, x, ())
            queue.append((x, x, (), a))
    seen = {(x, C.identities[object_map[x]]) for x in P.objects}
    while queue:
        src, end, word, a = queue.popleft()
        for g in P.out_generators(end):
            b = C._compose(generator_map[g.id], a)
            if (src, b) in seen:
                continue
            seen.add((src, b))
            w = word + (g.id,)
            if b not in reps:
                reps[b] = Path(src, g.tgt, w)
            queue.append((src, g.tgt, w, b))
    return reps


def compare_presented_to_explicit(
    P: Presentation,
    C: ExplicitCategory,
    object_map: Mapping,
    generator_map: Mapping,
    budget: Budget = Budget(),
) -> IsoReport:
    """Is the functor induced by (object_map, generator_map) an isomorphism?

    Injectivity is proven by checking that every path of length at most
    ``k + 1`` is congruent to the chosen shortest preimage of its image, where
    ``k`` is the longest such preimage; longer paths then reduce by induction.
    """
    bad = relation_violations(P, C, object_map, generator_map)
    if bad:
        return IsoReport(False, witnesses=[("relation", k) for k in bad], reason="relations not respected")
    report = IsoReport(True)
    report.objects_bijective = len(set(object_map[x] for x in P.objects)) == len(P.objects) == len(C.objects)
    reps = shortest_preimages(P, C, object_map, generator_map)
    missing = [a for a in C.arrows if a not in reps]
    report.surjective = not missing
    if missing:
        report.witnesses.extend(("not-in-image", a) for a in missing[:10])
    k = max((len(p) for p in reps.values()), default=0)
    if k + 1 > budget.max_len:
        report.reason = f"shortest preimages need max_len >= {k + 1}"
        return report
    try:
        U = _Universe(P, P.objects, k + 1, budget.max_classes)
    except _Exhausted as exc:
        report.reason = str(exc)
        return report
    image = [None] * len(U.keys)
    failing = []
    for i, (src, word) in enumerate(U.keys):
        if not word:
            image[i] = C.identities[object_map[src]]
        else:
            image[i] = C._compose(generator_map[word[-1]], image[U.parent[i]])
        if len(word) > k + 1:
            continue
        rep = reps[image[i]]
        j = U.index[(rep.src, rep.word)]
        if U.find(i) != U.find(j):
            failing.append((i, j))
    if not failing:
        report.injective = True
        return report
    for i, j in failing:
        if U.closed(i) or U.closed(j):
            report.injective = False
            report.witnesses.append(("collapsed", U.keys[i], U.keys[j]))
            report.reason = "two distinct arrows have the same image"
            return report
    report.reason = "injectivity undecided within budget"
    return report

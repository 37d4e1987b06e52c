"""Divisions, the n-relative category of multisimplices, and the comparison
maps between them.

Objects of a division are strings ``x: [p] -> aC`` stored as
``(objects, steps)``; an arrow ``x1 -> x2`` is stored as ``(x2, theta)`` with
``theta: [p1] -> [p2]`` monotone and ``x1 = x2 . theta``.

The structure on ``Delta_rel X`` has two conventions:

``"division"`` (default)
    an operator arrow ``theta: (k, x) -> (k', x')`` lies in ``v_i`` iff, in
    every p-axis ``j`` other than the ``v_i`` axis, ``x'`` is degenerate at
    every position ``theta_j(k_j) <= s < k'_j``.  ``w`` asks this for all
    p-axes.  For ``X = Delta[m]`` this says the terminal vertex moves only
    along the ``v_i`` and ``q`` axes, which is exactly the structure of the
    division products and the one carried to ``K`` by the terminal projection.
``"literal"``
    ``v_i`` consists of the operators whose ``v_i``-axis component preserves
    the top element, ``w`` is the intersection.  Kept for comparison; it is
    not isomorphic to the division products (see the tests).
"""
from __future__ import annotations

from functools import lru_cache
from dataclasses import dataclass, field

from .errors import UsageError
from .fincat import (
    ExplicitCategory,
    Functor,
    functor_violations,
    poset_category,
)
from .msset import (
    MSSet,
    axis_op,
    codegeneracy,
    coface,
    compose_maps,
    compose_ops,
    elementary_ops,
    identity_map,
    identity_op,
    indices,
    monotone_maps,
    naturality_violations,
    product_msset,
    simplex_category,
    standard,
)
from .nerve import GridCell, k_adjoint, nerve, unit
from .nrelcat import (
    ColimitPresentation,
    _UnionFind,
    NRelCategory,
    RelFunctor,
    chain_v,
    chain_w,
    colim_nrelcat,
    enumerate_relative_functors,
    labels,
    product_nrel,
    relative_violations,
)
from .prescat import Budget, IsoReport, Undecided, compare_presented_to_explicit, check_functor_well_defined


# -- divisions ------------------------------------------------------------

def string_arrow(A: ExplicitCategory, x, i: int, j: int):
    """``x(i) -> x(j)`` for a string ``x = (objects, steps)`` and ``i <= j``."""
    objs, steps = x
    f = A.identity(objs[i])
    for s in range(i, j):
        f = A._compose(steps[s], f)
    return f


def restrict_string(A: ExplicitCategory, x, theta: tuple):
    objs, _ = x
    return (
        tuple(objs[t] for t in theta),
        tuple(string_arrow(A, x, theta[s], theta[s + 1]) for s in range(len(theta) - 1)),
    )


def strings(A: ExplicitCategory, L: int) -> list:
    """All functors ``[p] -> A`` with ``p <= L``."""
    out = []
    level = [((x,), ()) for x in A.objects]
    for p in range(L + 1):
        out.extend(level)
        if p == L:
            break
        level = [(objs + (A.tgt(f),), steps + (f,)) for objs, steps in level for f in A.out_arrows(objs[-1])]
    return out


class DivisionCategory(NRelCategory):
    """``delta C`` truncated to strings of length ``<= L``."""

    def __init__(self, base: NRelCategory, L: int):
        if L < 0:
            raise UsageError("string bound must be >= 0")
        A = base.ambient
        objects = strings(A, L)
        arrows = {}
        for x2 in objects:
            p2 = len(x2[0]) - 1
            for p1 in range(L + 1):
                for theta in monotone_maps(p1, p2):
                    arrows[(x2, theta)] = (restrict_string(A, x2, theta), x2)
        identities = {x: (x, identity_map(len(x[0]) - 1)) for x in objects}

        def comp(g, f):
            return (g[0], compose_maps(g[1], f[1]))

        amb = ExplicitCategory(objects, arrows, identities, comp, name=f"delta({base.name})<= {L}")
        self.base = base
        self.L = L
        induced = {a: self.induced_map(a, A) for a in arrows}
        v = [frozenset(a for a in arrows if induced[a] in s) for s in base.v]
        w = frozenset(a for a in arrows if induced[a] in base.w)
        super().__init__(base.n, amb, v, w, name=f"delta({base.name})", check=False)

    @staticmethod
    def induced_map(a, A):
        x2, theta = a
        return string_arrow(A, x2, theta[-1], len(x2[0]) - 1)


def division(C: NRelCategory, L: int) -> DivisionCategory:
    return DivisionCategory(C, L)


def terminal_projection(D: DivisionCategory) -> RelFunctor:
    """``pi_t``: a string goes to its last object, an arrow to the induced map."""
    A = D.base.ambient
    return RelFunctor(
        D,
        D.base,
        {x: x[0][-1] for x in D.ambient.objects},
        {a: DivisionCategory.induced_map(a, A) for a in D.ambient.arrows},
    )


def projection_iff_check(D: DivisionCategory) -> list:
    """Arrows violating: ``f`` in a structure subcategory of ``delta C`` iff ``pi_t f`` is in it.

    Returns the violations (empty when the property holds); also requires
    ``pi_t`` to be a relative functor.
    """
    pi = terminal_projection(D)
    bad = [("not-relative",) + tuple(v) for v in relative_violations(pi)]
    for lab in labels(D.n):
        mine, theirs = D.structure(lab), D.base.structure(lab)
        for a in D.ambient.arrows:
            if (a in mine) != (pi.arrow_map[a] in theirs):
                bad.append((lab, a))
    return bad


def string_of(values: tuple):
    """A string in a chain from its object values."""
    return (tuple(values), tuple((values[s], values[s + 1]) for s in range(len(values) - 1)))


def chain_factor(degrees: tuple, axis: int) -> NRelCategory:
    n = len(degrees) - 1
    p = degrees[axis]
    return chain_w(p, n) if axis == n else chain_v(p, n - axis, n)


def division_product(degrees: tuple, L: int) -> NRelCategory:
    """``delta p_n^{v_n} x ... x delta p_1^{v_1} x delta q^w`` at string bound ``L``."""
    return product_nrel([division(chain_factor(tuple(degrees), a), L) for a in range(len(degrees))])


# -- Delta_rel ----------------------------------------------------------------

CONVENTIONS = ("division", "literal")


def _degenerate_at(X: MSSet, x, m: tuple, axis: int, s: int) -> bool:
    d = m[:axis] + (m[axis] - 1,) + m[axis + 1 :]
    return X.degen(X.face(x, m, axis, s), d, axis, s) == x


def _still_in_axis(X: MSSet, x, m: tuple, axis: int, start: int) -> bool:
    return all(_degenerate_at(X, x, m, axis, s) for s in range(start, m[axis]))


def delta_rel(X: MSSet, L: int, convention: str = "division") -> NRelCategory:
    """``Delta_rel X`` on multi-indices with degrees ``<= L``."""
    if convention not in CONVENTIONS:
        raise UsageError(f"unknown convention {convention!r}")
    A = simplex_category(X, L)
    n = X.n
    v = [set() for _ in range(n)]
    w = set()
    cache = {}
    for a in A.arrows:
        (m, x), theta = a
        if convention == "literal":
            top = [theta[ax][-1] == m[ax] for ax in range(n)]
            flags = [top[n - i] for i in range(1, n + 1)]
            inw = all(top)
        else:
            still = []
            for ax in range(n):
                key = (m, x, ax, theta[ax][-1])
                hit = cache.get(key)
                if hit is None:
                    hit = cache[key] = _still_in_axis(X, x, m, ax, theta[ax][-1])
                still.append(hit)
            flags = [all(still[ax] for ax in range(n) if ax != n - i) for i in range(1, n + 1)]
            inw = all(still)
        for i, f in enumerate(flags):
            if f:
                v[i].add(a)
        if inw:
            w.add(a)
    return NRelCategory(n, A, v, w, name=f"Delta_rel({getattr(X, 'name', '') or X!r})", check=False)


def canonical_object(z: tuple) -> tuple:
    """``(k, z)`` of ``Delta_rel Delta[m]`` as a tuple of strings."""
    return tuple(string_of(f) for f in z)


def canonical_iso(m: tuple, L: int, convention: str = "division"):
    """``Delta_rel Delta[m] -> delta p_n^{v_n} x ... x delta q^w`` and both sides."""
    m = tuple(m)
    R = delta_rel(standard(m, L), L, convention)
    P = division_product(m, L)
    om = {o: canonical_object(o[1]) for o in R.ambient.objects}
    am = {}
    for a in R.ambient.arrows:
        ((_, z), theta) = a
        am[a] = tuple((string_of(f), t) for f, t in zip(z, theta))
    return RelFunctor(R, P, om, am), R, P


def elementary_arrows(R: NRelCategory) -> list:
    """Arrows of ``Delta_rel X`` whose operator is one coface or codegeneracy."""
    out = []
    for a in R.ambient.arrows:
        theta = a[1]
        m = a[0][0]
        moved = [ax for ax, f in enumerate(theta) if f != identity_map(m[ax])]
        if len(moved) == 1:
            f = theta[moved[0]]
            if abs(len(f) - 1 - m[moved[0]]) == 1:
                out.append(a)
    return out


@dataclass
class CanonicalIsoReport:
    objects_bijective: bool
    arrows_bijective: bool
    functor: bool
    structure: dict = field(default_factory=dict)  # label -> equal

    @property
    def isomorphism(self) -> bool:
        return self.objects_bijective and self.arrows_bijective and self.functor and all(self.structure.values())

    def __bool__(self):
        return self.isomorphism


def canonical_iso_check(m: tuple, L: int, convention: str = "division") -> CanonicalIsoReport:
    """Verify the canonical comparison is an isomorphism of n-relative categories.

    Composition is checked against the elementary arrows, which generate the
    source; a functor of categories is determined by, and checked on, a
    generating set.
    """
    F, R, P = canonical_iso(m, L, convention)
    objs = set(F.object_map.values())
    obj_ok = len(objs) == len(R.ambient.objects) and objs == set(P.ambient.objects)
    imgs = set(F.arrow_map.values())
    arr_ok = len(imgs) == len(R.ambient.arrows) and imgs == set(P.ambient.arrows)
    fun_ok = not functor_violations(F, generators=elementary_arrows(R))
    structure = {}
    for lab in labels(R.n):
        structure[lab] = {F.arrow_map[a] for a in R.structure(lab)} == set(P.structure(lab))
    return CanonicalIsoReport(obj_ok, arr_ok, fun_ok, structure)


# -- Delta_rel as a colimit of its pieces -------------------------------------

@dataclass
class PieceColimReport:
    objects_bijective: bool
    arrows_bijective: bool
    cocone: bool
    composition_witnessed: bool
    structure: dict = field(default_factory=dict)
    sizes: dict = field(default_factory=dict)

    @property
    def isomorphism(self) -> bool:
        return (
            self.objects_bijective
            and self.arrows_bijective
            and self.cocone
            and self.composition_witnessed
            and all(self.structure.values())
        )

    def __bool__(self):
        return self.isomorphism


@lru_cache(maxsize=256)
def _piece(m: tuple, L: int, convention: str) -> NRelCategory:
    return delta_rel(standard(m, L), L, convention)


def delta_rel_colim_check(X: MSSet, L: int, convention: str = "division") -> PieceColimReport:
    """``colim_{Delta X} Delta_rel F -> Delta_rel X`` over indices ``<= L``.

    Pieces are ``Delta_rel Delta[m]`` for objects ``(m, x)`` of ``Delta X``.
    Each piece arrow ``(k', z', theta)`` is identified, along the diagram
    arrow ``z'``, with ``(k', id, theta)`` in the piece ``(k', x z')``; the
    comparison must be constant along every elementary diagram arrow
    (cocone), injective on the resulting classes, and onto.  Composable pairs
    of the target are witnessed inside a single piece, so the colimit's arrows
    are exactly these classes.

    A degenerate cell ``x = x0 s`` has a diagram arrow to its nondegenerate
    root, and piece maps preserve structure; once the cocone is checked on all
    cells, arrow images and structure are collected from nondegenerate cells.
    """
    idx = indices(X.n, L)
    target = delta_rel(X, L, convention)
    T = target.ambient
    pieces = {m: _piece(m, L, convention) for m in idx}

    ids = {m: identity_op(m) for m in idx}
    # Each piece object/arrow is identified with its canonical representative,
    # which represents itself; classes are therefore keyed by that
    # representative and collect the comparison images of their members.
    obj_img = {}
    obj_classes: dict = {}
    for m in idx:
        for x in X.cells(m):
            for k, z in pieces[m].ambient.objects:
                img = (k, X.act(x, m, z))
                obj_img[(m, x, (k, z))] = img
                obj_classes.setdefault((k, img[1], (k, ids[k])), set()).add(img)
    cocone = True
    # cocone: the comparison agrees along elementary diagram arrows.  Arrow
    # images differ from object images only by the unchanged operator theta,
    # so it suffices to compare on piece objects.
    for kind, d, axis, j, mm in elementary_ops(X.n, L):
        eps = axis_op(mm, axis, coface(d[axis], j) if kind == "face" else codegeneracy(d[axis], j))
        for x in X.cells(d):
            xe = X.act(x, d, eps)
            for o in pieces[mm].ambient.objects:
                k, z = o
                if obj_img[(mm, xe, o)] != obj_img[(d, x, (k, compose_ops(eps, z)))]:
                    cocone = False
    obj_ok = all(len(s) == 1 for s in obj_classes.values())
    obj_ok = obj_ok and len(obj_classes) == len(T.objects) and {next(iter(s)) for s in obj_classes.values()} == set(T.objects)

    def arr_image(m, x, a):
        (kp, zp), theta = a
        return (obj_img[(m, x, (kp, zp))], theta)

    classes: dict = {}
    piece_arrows = 0
    for m in idx:
        for x in X.nondegenerate(m):
            for a in pieces[m].ambient.arrows:
                img = arr_image(m, x, a)
                piece_arrows += 1
                canon = (img[0][0], img[0][1], ((img[0][0], ids[img[0][0]]), a[1]))
                classes.setdefault(canon, set()).add(img)
    arr_ok = all(len(s) == 1 for s in classes.values())
    imgs = {next(iter(s)) for s in classes.values()}
    arr_ok = arr_ok and len(classes) == len(T.arrows) and imgs == set(T.arrows)
    # composable target pairs, witnessed in the piece of the final target;
    # pairs whose second arrow is elementary suffice, since those generate
    witnessed = True
    pairs = ((f, g) for g in elementary_arrows(target) for f in T.in_arrows(T.src(g)))
    for f, g in pairs:
        (kpp, ypp), theta2 = g
        (kp, _), theta1 = f
        gp = ((kpp, identity_op(kpp)), theta2)
        fp = ((kp, theta2), theta1)
        if arr_image(kpp, ypp, gp) != g or arr_image(kpp, ypp, fp) != f:
            witnessed = False
            break
        if arr_image(kpp, ypp, pieces[kpp].ambient._compose(gp, fp)) != T._compose(g, f):
            witnessed = False
            break
    structure = {}
    for lab in labels(X.n):
        flagged = set()
        for m in idx:
            s = pieces[m].structure(lab)
            for x in X.nondegenerate(m):
                flagged.update(arr_image(m, x, a) for a in s)
        expected = target.structure(lab)
        structure[lab] = flagged == expected or T.closure(flagged) == expected
    return PieceColimReport(
        obj_ok,
        arr_ok,
        cocone,
        witnessed,
        structure,
        {"pieces": sum(len(X.cells(m)) for m in idx), "piece_arrows": piece_arrows, "target_arrows": len(T.arrows)},
    )


# -- K_delta ------------------------------------------------------------------

def _string_values(s) -> tuple:
    return s[0]


def division_product_map(src_deg: tuple, tgt_deg: tuple, theta: tuple, L: int, src: NRelCategory, tgt: NRelCategory) -> Functor:
    """``delta(theta)``: post-composition of strings with the operator ``theta``."""

    def push_obj(o):
        return tuple(string_of(tuple(t[v] for v in s[0])) for s, t in zip(o, theta))

    om = {o: push_obj(o) for o in src.ambient.objects}
    am = {a: tuple((string_of(tuple(t[v] for v in x2[0])), th) for (x2, th), t in zip(a, theta)) for a in src.ambient.arrows}
    return Functor(src.ambient, tgt.ambient, om, am)


@dataclass
class KDelta:
    colimit: ColimitPresentation
    index: ExplicitCategory
    pieces: dict
    L: int
    X: MSSet

    def to_delta_rel(self, target: NRelCategory):
        """Generator and object maps to ``Delta_rel X`` induced by the canonical isomorphisms."""
        X = self.X
        om, gm = {}, {}
        for (obj, o), cls in self.colimit.object_class.items():
            m, x = obj
            z = tuple(_string_values(s) for s in o)
            om[cls] = (tuple(len(v) - 1 for v in z), X.act(x, m, z))
        for g in self.colimit.nrel.presentation.generators:
            (m, x), a = g
            zp = tuple(_string_values(x2) for x2, _ in a)
            theta = tuple(th for _, th in a)
            kp = tuple(len(v) - 1 for v in zp)
            gm[g] = ((kp, X.act(x, m, zp)), theta)
        return om, gm


def k_delta(X: MSSet, L: int) -> KDelta:
    """Colimit over ``Delta^{<=L} X`` of the division products, as a presentation.

    The diagram is given on elementary operator arrows, which generate the
    index category.
    """
    index = simplex_category(X, L)
    prods = {m: division_product(m, L) for m in indices(X.n, L)}
    pieces = {obj: prods[obj[0]] for obj in index.objects}
    maps = {}
    for kind, d, axis, j, mm in elementary_ops(X.n, L):
        eps = axis_op(mm, axis, coface(d[axis], j) if kind == "face" else codegeneracy(d[axis], j))
        F = None
        for x in X.cells(d):
            u = ((d, x), eps)
            if F is None:
                F = division_product_map(mm, d, eps, L, prods[mm], prods[d])
            maps[u] = F
    return KDelta(colim_nrelcat(index, pieces, maps), index, pieces, L, X)


def k_delta_vs_delta_rel(X: MSSet, L: int, budget: Budget = Budget(max_len=4)) -> IsoReport:
    """Realize-free comparison of ``K_delta X`` with ``Delta_rel X`` through the canonical maps."""
    KD = k_delta(X, L)
    target = delta_rel(X, L)
    om, gm = KD.to_delta_rel(target)
    P = KD.colimit.nrel.presentation
    report = compare_presented_to_explicit(P, target.ambient, om, gm, budget)
    if report.well_defined:
        A = target.ambient
        ok = True
        for lab in labels(X.n):
            tagged = P.with_tags(lab) + (P.with_tags("w") if lab != "w" else [])
            ok = ok and A.closure(gm[g] for g in tagged) == target.structure(lab)
        report.structure_preserved = ok
    return report


def pi_t_words(KD: KDelta, K) -> dict:
    """``pi_t: K_delta X -> K X`` generator by generator, as words of ``K X``."""
    X = KD.X
    out = {}
    for g in KD.colimit.nrel.presentation.generators:
        (m, x), a = g
        start = tuple(x2[0][th[-1]] for x2, th in a)
        end = tuple(x2[0][-1] for x2, _ in a)
        word = ()
        cur = list(start)
        for axis in range(len(m)):
            while cur[axis] < end[axis]:
                op = tuple(((cur[c], cur[c] + 1) if c == axis else (cur[c],)) for c in range(len(m)))
                word += K.edge_word[(axis, X.act(x, m, op))]
                cur[axis] += 1
        out[g] = word
    return out


def pi_t_check(X: MSSet, L: int, budget: Budget = Budget()) -> bool:
    """``pi_t`` respects the relations of ``K_delta X`` and the structure tags."""
    KD = k_delta(X, L)
    K = k_adjoint(X)
    KX = K.nrel.realize(budget)
    if isinstance(KX, Undecided):
        raise UsageError(f"K X could not be realized: {KX.reason}")
    P = KD.colimit.nrel.presentation
    words = pi_t_words(KD, K)
    R = KX.ambient
    om = {}
    for (obj, o), cls in KD.colimit.object_class.items():
        m, x = obj
        om[cls] = X.act(x, m, tuple((s[0][-1],) for s in o))
    gm = {g: R.arrow_of(R.presentation.path(words[g], src=om[P.generators[g].src])) for g in P.generators}
    if not check_functor_well_defined(P, R, om, gm):
        return False
    for lab in labels(X.n):
        tagged = set(P.with_tags(lab))
        if not all(gm[g] in KX.structure(lab) for g in tagged):
            return False
    return True


# -- mapping colimit ------------------------------------------------------------

def terminal_object(C: ExplicitCategory):
    for t in C.objects:
        if all(len(C.hom(x, t)) == 1 for x in C.objects):
            return t
    return None


def is_poset(C: ExplicitCategory) -> bool:
    return all(len(C.hom(x, y)) <= 1 for x in C.objects for y in C.objects) and all(
        not (C.hom(x, y) and C.hom(y, x)) for x in C.objects for y in C.objects if x != y
    )


@dataclass
class MappingColimReport:
    bijective: bool
    classes: int
    maps: int
    identifications: int


def mapping_colim_check(T: NRelCategory, X: MSSet, L: int) -> MappingColimReport:
    """``colim_{Delta X} map(T, Delta_rel F) -> map(T, Delta_rel X)``.

    A map ``T -> Delta_rel X`` is a pair: a map ``f: T -> Delta_rel[-]`` and
    the cell ``x`` classifying ``f(terminal)``.  The union-find records the
    identifications along elementary diagram arrows.
    """
    if not is_poset(T.ambient) or terminal_object(T.ambient) is None:
        raise UsageError("T needs a poset ambient with a terminal object")
    idx = indices(X.n, L)
    target = delta_rel(X, L)
    pieces = {m: delta_rel(standard(m, L), L) for m in idx}
    piece_maps = {m: list(enumerate_relative_functors(T, pieces[m], bound=None)) for m in idx}
    uf = _UnionFind()
    image = {}
    for m in idx:
        for x in X.cells(m):
            for G in piece_maps[m]:
                key = (m, x, G.key)
                uf.add(key)
                om = {t: (o[0], X.act(x, m, o[1])) for t, o in G.object_map.items()}
                am = {}
                for t, ((kp, zp), theta) in G.arrow_map.items():
                    am[t] = ((kp, X.act(x, m, zp)), theta)
                image[key] = (tuple(om[t] for t in T.ambient.objects), tuple(am[t] for t in T.ambient.arrows))
    count = 0
    for kind, d, axis, j, mm in elementary_ops(X.n, L):
        eps = axis_op(mm, axis, coface(d[axis], j) if kind == "face" else codegeneracy(d[axis], j))
        for x in X.cells(d):
            xe = X.act(x, d, eps)
            for G in piece_maps[mm]:
                pushed = (
                    tuple((o[0], compose_ops(eps, o[1])) for o in G.key[0]),
                    tuple(((kp, compose_ops(eps, zp)), th) for (kp, zp), th in G.key[1]),
                )
                uf.union((mm, xe, G.key), (d, x, pushed))
                count += 1
    classes: dict = {}
    for key, img in image.items():
        classes.setdefault(uf.find(key), set()).add(img)
    targets = {F.key for F in enumerate_relative_functors(T, target, bound=None)}
    ok = all(len(s) == 1 for s in classes.values())
    imgs = [next(iter(s)) for s in classes.values()]
    ok = ok and len(set(imgs)) == len(imgs) and set(imgs) == targets
    return MappingColimReport(ok, len(classes), len(targets), count)


def poset_nrel(elements, leq, n: int, v_rule=None, w_rule=None, name: str = "") -> NRelCategory:
    """A poset n-relative category; structure given by predicates on pairs."""
    A = poset_category(elements, leq, name=name)
    arrows = list(A.arrows)
    v_rule = v_rule or (lambda i, a: True)
    w_rule = w_rule or (lambda a: a[0] == a[1])
    v = [frozenset(a for a in arrows if a[0] == a[1] or v_rule(i, a)) for i in range(1, n + 1)]
    w = frozenset(a for a in arrows if a[0] == a[1] or w_rule(a))
    v = [s | w for s in v]
    return NRelCategory(n, A, [A.closure(s) for s in v], A.closure(w), name=name)


# -- strict homotopies ------------------------------------------------------------

def _tag_base(p: int, tag: str, n: int) -> NRelCategory:
    if tag == "w":
        return chain_w(p, n)
    return chain_v(p, int(tag[1:]), n)


def tau(p: int, tag: str, n: int = 1, L: int | None = None) -> RelFunctor:
    """``b -> (0 -> ... -> b)`` into the division of ``p^{tag}``."""
    L = p if L is None else L
    if L < p:
        raise UsageError("tau needs string bound L >= p")
    base = _tag_base(p, tag, n)
    D = division(base, L)
    om = {b: string_of(tuple(range(b + 1))) for b in base.ambient.objects}
    am = {(b, c): (om[c], tuple(range(b + 1))) for (b, c) in base.ambient.arrows}
    return RelFunctor(base, D, om, am)


def homotopy_h(p: int, tag: str, n: int = 1, L: int | None = None) -> tuple[RelFunctor, RelFunctor, RelFunctor]:
    """``h: delta p^{tag} x 1^w -> delta p^{tag}`` with ``h0 = 1`` and ``h1 = tau pi_t``.

    Returns ``(h, identity, tau pi_t)``.
    """
    t = tau(p, tag, n, L)
    D = t.rel_target
    pi = terminal_projection(D)
    src = product_nrel([D, chain_w(1, n)])

    def top(x):
        return string_of(tuple(range(x[0][-1] + 1)))

    om = {}
    for x, e in src.ambient.objects:
        om[(x, e)] = x if e == 0 else top(x)
    am = {}
    for a in src.ambient.arrows:
        (x2, theta), (e1, e2) = a
        if e2 == 0:
            am[a] = (x2, theta)
        elif e1 == 1:
            x1 = restrict_string(D.base.ambient, x2, theta)
            am[a] = (top(x2), tuple(range(x1[0][-1] + 1)))
        else:
            x1 = restrict_string(D.base.ambient, x2, theta)
            am[a] = (top(x2), x1[0])
    h = RelFunctor(src, D, om, am)
    ident = RelFunctor(D, D, {x: x for x in D.ambient.objects}, {a: a for a in D.ambient.arrows})
    tp = RelFunctor(D, D, {x: t.object_map[pi.object_map[x]] for x in D.ambient.objects}, {a: t.arrow_map[pi.arrow_map[a]] for a in D.ambient.arrows})
    return h, ident, tp


def restrict_end(h: RelFunctor, e: int) -> Functor:
    """``h(-, e)`` for a homotopy out of ``C x 1^w``."""
    C = h.rel_source.ambient.factors[0]
    return Functor(
        C,
        h.target,
        {x: h.object_map[(x, e)] for x in C.objects},
        {a: h.arrow_map[(a, (e, e))] for a in C.arrows},
    )


def strict_homotopy_check(h: RelFunctor, f: Functor, g: Functor) -> bool:
    src = h.rel_source.ambient
    factors = getattr(src, "factors", None)
    if not factors or len(factors) != 2 or len(factors[1].objects) != 2:
        raise UsageError("a strict homotopy has source C x 1^w")
    if relative_violations(h):
        return False
    return restrict_end(h, 0).key == f.key and restrict_end(h, 1).key == g.key


def apply_functor_to_cell(F: Functor, cell: GridCell) -> GridCell:
    return GridCell(tuple(F.object_map[o] for o in cell.objects), tuple(F.arrow_map[s] for s in cell.steps))


@dataclass
class NerveHomotopyReport:
    natural: bool
    starts_at_f: bool
    ends_at_g: bool

    def __bool__(self):
        return self.natural and self.starts_at_f and self.ends_at_g


def nerve_homotopy_k(h: RelFunctor, f: Functor, g: Functor, trunc: int = 2, check_naturality: bool = True):
    """``k: N C x Delta[0,...,0,1] -> N D`` built as the composite
    unit, identification ``N K Delta[0,..,0,1] = N 1^w``, product
    isomorphism, then ``N h``.  Returns ``(k, report)``.
    """
    n = h.rel_source.n
    base = _first_factor_nrel(h)
    NC = nerve(base, trunc)
    ND = nerve(h.rel_target, trunc)
    I = standard((0,) * n + (1,), trunc)
    eta, _ = unit(standard((0,) * n + (1,), max(trunc, 2)), check_naturality=False)

    def ident_obj(v):
        return v[-1][0]

    def ident_arrow(path):
        return (ident_obj(path.src), ident_obj(path.tgt))

    # the Delta[0,...,0,1] side is tiny: push its cells to N 1^w once
    one_w = {}
    for m in I.indices():
        for s in I.cells(m):
            e = eta(m, s)
            one_w[(m, s)] = (tuple(ident_obj(v) for v in e.objects), tuple(ident_arrow(p) for p in e.steps))
    hobj, harr = h.object_map, h.arrow_map

    def k(m, cell):
        c, s = cell
        eo, es = one_w[(m, s)]
        return GridCell(
            tuple(hobj[(o, j)] for o, j in zip(c.objects, eo)),
            tuple(harr[(a, e)] for a, e in zip(c.steps, es)),
        )

    P = product_msset(NC, I)
    natural = True
    if check_naturality:
        natural = not naturality_violations(P, ND, k)
    zero = {m: tuple(tuple(0 for _ in range(mi + 1)) for mi in m) for m in NC.indices()}
    one = {m: tuple(tuple(0 if a < n else 1 for _ in range(mi + 1)) for a, mi in enumerate(m)) for m in NC.indices()}
    starts = all(k(m, (c, zero[m])) == apply_functor_to_cell(f, c) for m in NC.indices() for c in NC.cells(m))
    ends = all(k(m, (c, one[m])) == apply_functor_to_cell(g, c) for m in NC.indices() for c in NC.cells(m))
    return k, NerveHomotopyReport(natural, starts, ends)


def _first_factor_nrel(h: RelFunctor) -> NRelCategory:
    """The factor ``C`` of ``C x 1^w``, with structure read off the slice at ``0``."""
    src = h.rel_source
    C = src.ambient.factors[0]

    def sub(lab):
        s = src.structure(lab)
        return frozenset(a for a in C.arrows if (a, (0, 0)) in s)

    return NRelCategory(src.n, C, [sub(f"v{i}") for i in range(1, src.n + 1)], sub("w"), name="C", check=False)

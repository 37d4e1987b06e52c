"""The nerve N, its left adjoint K (computed from the 2-skeleton), and the
unit and counit of the adjunction.

A nerve cell at ``d = (p_n, ..., p_1, q)`` is a relative functor from the
standard product to C.  Since the product is a grid poset, such a functor is
stored as a ``GridCell``: one object per grid point and one arrow per unit
step, with every unit square commuting.  A step along axis ``a`` must lie in
the structure subcategory labelled ``axis_label(a, n)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import UsageError
from .fincat import ExplicitCategory
from .msset import (
    MSSet,
    axis_op,
    coface,
    naturality_violations,
    point_op,
    unit_index,
)
from .nrelcat import NRelCategory, PresentedNRel, axis_label, enumerate_relative_functors
from .prescat import (
    Budget,
    Generator,
    IsoReport,
    Presentation,
    RealizedCategory,
    Relation,
    Undecided,
    compare_presented_to_explicit,
)


@lru_cache(maxsize=None)
def grid_layout(d: tuple):
    """Grid points in lexicographic order, and the unit steps ``(point, axis)``."""
    points = tuple(itertools.product(*(range(k + 1) for k in d)))
    index = {g: i for i, g in enumerate(points)}
    steps = tuple((g, a) for g in points for a in range(len(d)) if g[a] < d[a])
    step_index = {s: i for i, s in enumerate(steps)}
    return points, index, steps, step_index


def _shift(g, a, k=1):
    return g[:a] + (g[a] + k,) + g[a + 1 :]


def _grid_path(d: tuple, g: tuple, h: tuple) -> tuple:
    """Step indices from ``g`` to ``h``: along axis 0 first, then 1, ..."""
    _, _, _, step_index = grid_layout(d)
    out, cur = [], g
    for a in range(len(d)):
        while cur[a] < h[a]:
            out.append(step_index[(cur, a)])
            cur = _shift(cur, a)
    return tuple(out)


@lru_cache(maxsize=100_000)
def _act_plan(d: tuple, op: tuple):
    """For ``op`` acting on cells at ``d``: the source point of each target point,
    and for each target step its start point and the source steps to compose."""
    m = tuple(len(f) - 1 for f in op)
    points, _, steps, _ = grid_layout(m)
    _, dindex, _, _ = grid_layout(d)

    def image(h):
        return tuple(f[k] for f, k in zip(op, h))

    obj_src = tuple(dindex[image(h)] for h in points)
    plan = tuple((dindex[image(h)], _grid_path(d, image(h), image(_shift(h, a)))) for h, a in steps)
    return obj_src, plan


@dataclass(frozen=True, eq=False)
class GridCell:
    objects: tuple  # aligned with grid_layout(d)[0]
    steps: tuple  # aligned with grid_layout(d)[2]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.objects, self.steps)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, GridCell)
            and self._hash == other._hash
            and self.objects == other.objects
            and self.steps == other.steps
        )

    def __repr__(self):
        return f"GridCell({list(self.objects)}, {list(self.steps)})"


def grid_arrow(C: ExplicitCategory, cell: GridCell, d: tuple, g: tuple, h: tuple):
    """The image of the grid arrow ``g <= h``: unit steps along axis 0, then 1, ..."""
    points, index, steps, step_index = grid_layout(d)
    arrow = C.identity(cell.objects[index[g]])
    cur = g
    for a in range(len(d)):
        while cur[a] < h[a]:
            arrow = C._compose(cell.steps[step_index[(cur, a)]], arrow)
            cur = _shift(cur, a)
    return arrow


class Nerve(MSSet):
    """``N C`` truncated at per-axis degree ``trunc``."""

    def __init__(self, C: NRelCategory, trunc: int):
        if not isinstance(C, NRelCategory):
            raise UsageError("the nerve needs an explicit n-relative category")
        if trunc < 0:
            raise UsageError("truncation must be >= 0")
        self.C = C
        self.n = C.n
        self.trunc = trunc
        self.name = f"N({C.name})"
        self._allowed = [C.structure(axis_label(a, C.n)) for a in range(C.n + 1)]
        self._cells: dict = {}

    def __repr__(self):
        return f"<Nerve of {self.C.name} D={self.trunc}>"

    def cells(self, d):
        d = tuple(d)
        hit = self._cells.get(d)
        if hit is None:
            hit = self._cells[d] = tuple(self._enumerate(d))
        return hit

    def _enumerate(self, d):
        A = self.C.ambient
        points, index, steps, step_index = grid_layout(d)
        objs = [None] * len(points)
        arr = [None] * len(steps)
        allowed = self._allowed
        out = []

        def incoming_axes(g):
            return [a for a in range(len(d)) if g[a] > 0]

        def rec(pi):
            if pi == len(points):
                out.append(GridCell(tuple(objs), tuple(arr)))
                return
            g = points[pi]
            axes = incoming_axes(g)
            if not axes:
                for x in A.objects:
                    objs[pi] = x
                    rec(pi + 1)
                return
            a0 = axes[0]
            prev0 = _shift(g, a0, -1)
            for f in A.out_arrows(objs[index[prev0]]):
                if f not in allowed[a0]:
                    continue
                arr[step_index[(prev0, a0)]] = f
                objs[pi] = A.tgt(f)
                fill(pi, g, axes, 1)

        def fill(pi, g, axes, j):
            if j == len(axes):
                if squares_ok(g, axes):
                    rec(pi + 1)
                return
            a = axes[j]
            prev = _shift(g, a, -1)
            for f in A.hom(objs[index[prev]], objs[index[g]]):
                if f in allowed[a]:
                    arr[step_index[(prev, a)]] = f
                    fill(pi, g, axes, j + 1)

        def squares_ok(g, axes):
            for a, b in itertools.combinations(axes, 2):
                h = _shift(_shift(g, a, -1), b, -1)
                ha, hb = _shift(h, a), _shift(h, b)
                lhs = A._compose(arr[step_index[(ha, b)]], arr[step_index[(h, a)]])
                rhs = A._compose(arr[step_index[(hb, a)]], arr[step_index[(h, b)]])
                if lhs != rhs:
                    return False
            return True

        rec(0)
        return out

    def act(self, x: GridCell, d, op):
        A = self.C.ambient
        obj_src, step_plan = _act_plan(tuple(d), tuple(op))
        objs = tuple(x.objects[i] for i in obj_src)
        arrows = []
        for start, path in step_plan:
            if not path:
                arrows.append(A.identity(x.objects[start]))
                continue
            f = x.steps[path[0]]
            for k in path[1:]:
                f = A._compose(x.steps[k], f)
            arrows.append(f)
        return GridCell(objs, tuple(arrows))

    def vertex_object(self, x: GridCell):
        return x.objects[0]

    def edge_arrow(self, x: GridCell):
        """The single arrow of a cell at a unit index."""
        return x.steps[0]


def nerve(C: NRelCategory, trunc: int) -> Nerve:
    return Nerve(C, trunc)


# -- K ------------------------------------------------------------------------

def _face_op(d, axis, k):
    m = d[:axis] + (d[axis] - 1,) + d[axis + 1 :]
    return axis_op(m, axis, coface(d[axis], k))


def edge_endpoints(X: MSSet, y, axis: int):
    d = unit_index(X.n, axis)
    return X.face(y, d, axis, 1), X.face(y, d, axis, 0)


@dataclass
class KResult:
    """``K X`` as a presented n-relative category, with the cell-to-generator dictionary."""

    nrel: PresentedNRel
    edge_word: dict = field(default_factory=dict)  # (axis, edge cell) -> generator word

    @property
    def presentation(self) -> Presentation:
        return self.nrel.presentation


def k_adjoint(X: MSSet) -> KResult:
    """``K X`` from the 2-skeleton of ``X``.

    Generators are the nondegenerate 1-cells (id ``(axis, cell)``, tagged by
    the axis label); degenerate 1-cells are identities.  Each cell with degree
    2 in one axis gives a composition relation, each cell with degree 1 in two
    axes a commuting square.
    """
    if X.trunc < 2:
        raise UsageError("K needs truncation >= 2 in every axis")
    n = X.n
    zero = (0,) * (n + 1)
    objects = list(X.cells(zero))
    gens, edge_word = [], {}
    for a in range(n + 1):
        d = unit_index(n, a)
        for y in X.cells(d):
            s, t = edge_endpoints(X, y, a)
            if X.degen(s, zero, a, 0) == y:
                edge_word[(a, y)] = ()
            else:
                gens.append(Generator((a, y), s, t, frozenset({axis_label(a, n)})))
                edge_word[(a, y)] = ((a, y),)
    relations = set()
    for a in range(n + 1):
        d = unit_index(n, a, 2)
        for z in X.cells(d):
            d2, d0, d1 = (X.face(z, d, a, k) for k in (2, 0, 1))
            lhs = edge_word[(a, d2)] + edge_word[(a, d0)]
            rhs = edge_word[(a, d1)]
            if lhs != rhs:
                relations.add(Relation(lhs, rhs, X.vertex(z, d, zero), X.vertex(z, d, d)))
    for a, b in itertools.combinations(range(n + 1), 2):
        d = tuple(1 if c in (a, b) else 0 for c in range(n + 1))
        for z in X.cells(d):
            bottom = X.face(z, d, b, 1)  # axis a at b = 0
            top = X.face(z, d, b, 0)  # axis a at b = 1
            left = X.face(z, d, a, 1)  # axis b at a = 0
            right = X.face(z, d, a, 0)  # axis b at a = 1
            lhs = edge_word[(a, bottom)] + edge_word[(b, right)]
            rhs = edge_word[(b, left)] + edge_word[(a, top)]
            if lhs != rhs:
                relations.add(Relation(lhs, rhs, X.vertex(z, d, zero), X.vertex(z, d, d)))
    P = Presentation(objects, gens, sorted(relations, key=repr))
    return KResult(PresentedNRel(n, P, name=f"K({getattr(X, 'name', '') or X!r})"), edge_word)


# -- counit -------------------------------------------------------------------

def counit(C: NRelCategory, budget: Budget = Budget(), trunc: int = 2) -> IsoReport:
    """``epsilon: K N C -> C``, checked to be an isomorphism of n-relative categories."""
    N = nerve(C, trunc)
    K = k_adjoint(N)
    P = K.presentation
    om = {x: N.vertex_object(x) for x in P.objects}
    gm = {g: N.edge_arrow(g[1]) for g in P.generators}
    report = compare_presented_to_explicit(P, C.ambient, om, gm, budget)
    if report.well_defined:
        A = C.ambient
        w_img = [gm[g] for g in P.with_tags("w")]
        ok = A.closure(w_img) == C.w
        for i in range(1, C.n + 1):
            ok = ok and A.closure([gm[g] for g in P.with_tags(f"v{i}")] + w_img) == C.v[i - 1]
        report.structure_preserved = ok
        if not ok and not report.reason:
            report.reason = "structure subcategories differ"
    return report


def counit_functor(C: NRelCategory, KN: RealizedCategory, N: Nerve):
    """``epsilon`` on arrows of the realized ``K N C``: evaluate the word in C."""
    A = C.ambient

    def on_arrow(path):
        f = A.identity(N.vertex_object(path.src))
        for g in path.word:
            f = A._compose(N.edge_arrow(g[1]), f)
        return f

    return on_arrow


# -- unit ---------------------------------------------------------------------

@dataclass
class UnitReport:
    per_index: dict = field(default_factory=dict)  # m -> (cells, image size, target cells, injective, surjective)
    natural: bool = True
    undecided: str | None = None

    @property
    def injective(self) -> bool:
        return self.undecided is None and all(v[3] for v in self.per_index.values())

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.natural and all(v[4] for v in self.per_index.values())

    @property
    def verdict(self) -> str:
        if self.undecided:
            return "unknown"
        return "isomorphism" if self.isomorphism else "not-isomorphism"


class UnitMap:
    """``eta_X: X -> N K X``; a cell goes to the grid functor of its vertices and unit edges."""

    def __init__(self, X: MSSet, KX: NRelCategory, K: KResult, NKX: Nerve):
        self.X, self.KX, self.K, self.NKX = X, KX, K, NKX
        self._cache: dict = {}

    def __call__(self, m, x) -> GridCell:
        key = (tuple(m), x)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self._image(tuple(m), x)
        return hit

    def _image(self, m, x) -> GridCell:
        X, R = self.X, self.KX.ambient
        points, _, steps, _ = grid_layout(tuple(m))
        objs = tuple(X.act(x, m, point_op(g)) for g in points)
        arrows = []
        for g, a in steps:
            op = tuple(((g[c], g[c] + 1) if c == a else (g[c],)) for c in range(len(m)))
            e = X.act(x, m, op)
            arrows.append(R.arrow_of(R.presentation.path(self.K.edge_word[(a, e)], src=objs[points.index(g)])))
        return GridCell(objs, tuple(arrows))


def unit(
    X: MSSet, budget: Budget = Budget(), check_naturality: bool = True, max_total: int | None = None
) -> tuple[UnitMap | None, UnitReport]:
    """``eta_X`` and its per-index census; ``max_total`` limits the indices examined."""
    K = k_adjoint(X)
    KX = K.nrel.realize(budget)
    report = UnitReport()
    if isinstance(KX, Undecided):
        report.undecided = KX.reason
        return None, report
    NKX = nerve(KX, X.trunc)
    eta = UnitMap(X, KX, K, NKX)
    for m in X.indices():
        if max_total is not None and sum(m) > max_total:
            continue
        images = [eta(m, x) for x in X.cells(m)]
        target = set(NKX.cells(m))
        img = set(images)
        report.per_index[m] = (len(images), len(img), len(target), len(img) == len(images), img == target)
        if not img <= target:
            report.natural = False
    if check_naturality and report.natural:
        report.natural = not naturality_violations(X, NKX, eta, max_total)
    return eta, report


def triangle_identity(C: NRelCategory, budget: Budget = Budget(), trunc: int = 2) -> bool:
    """``N epsilon . eta_{N C} = id`` on every cell of ``N C``."""
    N = nerve(C, trunc)
    eta, rep = unit(N, budget, check_naturality=False)
    if eta is None:
        return False
    eps = counit_functor(C, eta.KX.ambient, N)

    def n_eps(cell: GridCell) -> GridCell:
        return GridCell(tuple(N.vertex_object(v) for v in cell.objects), tuple(eps(p) for p in cell.steps))

    return all(n_eps(eta(m, x)) == x for m in N.indices() for x in N.cells(m))


# -- hom transposition --------------------------------------------------------

@dataclass
class TransposeReport:
    functors: int
    maps: int
    round_trip: bool

    def __bool__(self):
        return self.round_trip and self.functors == self.maps


def msset_maps_to_nerve(X: MSSet, C: NRelCategory, N: Nerve | None = None):
    """All multisimplicial maps ``X -> N C`` (as vertex/edge assignments).

    A map is determined by its values on vertices and unit edges; candidates
    are enumerated and kept when the induced grid of every cell is a cell of
    ``N C`` and the assignment is natural.
    """
    N = N or nerve(C, X.trunc)
    n = X.n
    zero = (0,) * (n + 1)
    A = C.ambient
    verts = list(X.cells(zero))
    edges = [(a, y) for a in range(n + 1) for y in X.cells(unit_index(n, a))]
    allowed = [C.structure(axis_label(a, n)) for a in range(n + 1)]
    ends = {e: edge_endpoints(X, e[1], e[0]) for e in edges}
    results = []

    def induced(vmap, emap):
        def f(m, x):
            points, _, steps, _ = grid_layout(tuple(m))
            objs = tuple(vmap[X.act(x, m, point_op(g))] for g in points)
            arrows = tuple(
                emap[(a, X.act(x, m, tuple(((g[c], g[c] + 1) if c == a else (g[c],)) for c in range(len(m)))))]
                for g, a in steps
            )
            return GridCell(objs, arrows)

        return f

    for images in itertools.product(A.objects, repeat=len(verts)):
        vmap = dict(zip(verts, images))
        options = []
        for e in edges:
            a, y = e
            s, t = ends[e]
            if X.degen(s, zero, a, 0) == y:
                options.append([A.identity(vmap[s])])
            else:
                options.append([f for f in A.hom(vmap[s], vmap[t]) if f in allowed[a]])
        for choice in itertools.product(*options):
            emap = dict(zip(edges, choice))
            f = induced(vmap, emap)
            if not naturality_violations(X, N, f):
                results.append((vmap, emap))
    return results


def hom_transpose_check(X: MSSet, C: NRelCategory, budget: Budget = Budget()) -> TransposeReport:
    """Relative functors ``K X -> C`` versus multisimplicial maps ``X -> N C``, both ways."""
    K = k_adjoint(X)
    KX = K.nrel.realize(budget)
    if isinstance(KX, Undecided):
        raise UsageError(f"K X could not be realized: {KX.reason}")
    functors = list(enumerate_relative_functors(KX, C))
    maps = msset_maps_to_nerve(X, C)
    R = KX.ambient
    zero = (0,) * (X.n + 1)
    edges = [(a, y) for a in range(X.n + 1) for y in X.cells(unit_index(X.n, a))]

    def transpose_functor(F):
        vmap = {v: F.object_map[v] for v in X.cells(zero)}
        emap = {}
        for a, y in edges:
            s = edge_endpoints(X, y, a)[0]
            emap[(a, y)] = F.arrow_map[R.arrow_of(R.presentation.path(K.edge_word[(a, y)], src=s))]
        return vmap, emap

    def transpose_map(vm):
        vmap, emap = vm
        gm = {g: emap[g] for g in K.presentation.generators}
        arrow_map = {}
        for p in R.arrows:
            f = C.ambient.identity(vmap[p.src])
            for g in p.word:
                f = C.ambient._compose(gm[g], f)
            arrow_map[p] = f
        return vmap, arrow_map

    as_maps = [transpose_functor(F) for F in functors]
    key = lambda vm: (tuple(sorted(vm[0].items(), key=repr)), tuple(sorted(vm[1].items(), key=repr)))
    map_keys = {key(vm) for vm in maps}
    ok = {key(vm) for vm in as_maps} == map_keys and len(map_keys) == len(maps)
    fkeys = {F.key for F in functors}
    for vm in maps:
        vmap, amap = transpose_map(vm)
        fk = tuple(vmap[x] for x in R.objects), tuple(amap[a] for a in R.arrows)
        if fk not in fkeys:
            ok = False
            break
    return TransposeReport(len(functors), len(maps), ok)

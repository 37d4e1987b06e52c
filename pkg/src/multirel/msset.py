"""Per-axis truncated (n+1)-simplicial sets.

A multi-index is a tuple ``(p_n, ..., p_1, q)``.  An operator ``m -> d`` is a
tuple of monotone maps, one per axis, each given by its values
``(phi(0), ..., phi(m_a))`` in ``[d_a]``; it acts on cells at ``d`` and
produces cells at ``m`` (precomposition).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .errors import UsageError
from .fincat import ExplicitCategory, ValidationReport


# -- monotone maps ------------------------------------------------------------

@lru_cache(maxsize=None)
def monotone_maps(m: int, d: int) -> tuple:
    """All weakly monotone maps ``[m] -> [d]`` as value tuples."""
    return tuple(itertools.combinations_with_replacement(range(d + 1), m + 1))


def coface(d: int, k: int) -> tuple:
    """``delta_k: [d-1] -> [d]``, skipping ``k``."""
    return tuple(j if j < k else j + 1 for j in range(d))


def codegeneracy(d: int, k: int) -> tuple:
    """``sigma_k: [d+1] -> [d]``, hitting ``k`` twice."""
    return tuple(j if j <= k else j - 1 for j in range(d + 2))


def compose_maps(outer: tuple, inner: tuple) -> tuple:
    return tuple(outer[j] for j in inner)


def identity_map(d: int) -> tuple:
    return tuple(range(d + 1))


def compose_ops(outer: tuple, inner: tuple) -> tuple:
    return tuple(compose_maps(o, i) for o, i in zip(outer, inner))


def identity_op(m: tuple) -> tuple:
    return tuple(identity_map(k) for k in m)


def op_domain(op: tuple) -> tuple:
    return tuple(len(f) - 1 for f in op)


def axis_op(m: tuple, axis: int, f: tuple) -> tuple:
    """Operator that is ``f`` on ``axis`` and the identity elsewhere."""
    return tuple(f if a == axis else identity_map(k) for a, k in enumerate(m))


def point_op(g: tuple) -> tuple:
    """The vertex operator ``(0,...,0) -> m`` picking the grid point ``g``."""
    return tuple((k,) for k in g)


def is_injective_op(op: tuple) -> bool:
    return all(all(f[j] < f[j + 1] for j in range(len(f) - 1)) for f in op)


@lru_cache(maxsize=None)
def decompose(f: tuple, d: int) -> tuple[tuple, tuple]:
    """Faces (descending) then degeneracies (ascending) realizing ``x -> x.f``."""
    image = set(f)
    faces = tuple(k for k in range(d, -1, -1) if k not in image)
    degens = tuple(j for j in range(len(f) - 1) if f[j] == f[j + 1])
    return faces, degens


def indices(n: int, trunc: int, total_max: int | None = None) -> list:
    out = [m for m in itertools.product(range(trunc + 1), repeat=n + 1)]
    if total_max is not None:
        out = [m for m in out if sum(m) <= total_max]
    return out


def unit_index(n: int, axis: int, k: int = 1) -> tuple:
    return tuple(k if a == axis else 0 for a in range(n + 1))


# -- multisimplicial sets -----------------------------------------------------

class MSSet:
    """Abstract truncated multisimplicial set.

    Subclasses provide ``cells(m)`` and either ``act`` or the elementary
    ``face`` / ``degen``.
    """

    n: int
    trunc: int

    def indices(self) -> list:
        return indices(self.n, self.trunc)

    def cells(self, m: tuple) -> tuple:
        raise NotImplementedError

    def in_bound(self, m: tuple) -> bool:
        return len(m) == self.n + 1 and all(0 <= k <= self.trunc for k in m)

    def face(self, x, d: tuple, axis: int, k: int):
        return self.act(x, d, axis_op(tuple(d[:axis]) + (d[axis] - 1,) + tuple(d[axis + 1 :]), axis, coface(d[axis], k)))

    def degen(self, x, d: tuple, axis: int, k: int):
        m = tuple(d[:axis]) + (d[axis] + 1,) + tuple(d[axis + 1 :])
        return self.act(x, d, axis_op(m, axis, codegeneracy(d[axis], k)))

    def act(self, x, d: tuple, op: tuple):
        """``x . op`` for a cell ``x`` at ``d``; the result lives at ``op_domain(op)``."""
        cur = list(d)
        for axis, f in enumerate(op):
            faces, _ = decompose(f, d[axis])
            for k in faces:
                x = self.face(x, tuple(cur), axis, k)
                cur[axis] -= 1
        for axis, f in enumerate(op):
            _, degens = decompose(f, d[axis])
            for j in degens:
                x = self.degen(x, tuple(cur), axis, j)
                cur[axis] += 1
        return x

    def vertex(self, x, d: tuple, g: tuple):
        return self.act(x, d, point_op(g))

    def is_degenerate(self, x, d: tuple) -> bool:
        for axis, k in enumerate(d):
            m = tuple(d[:axis]) + (k - 1,) + tuple(d[axis + 1 :])
            for j in range(k):
                if self.degen(self.face(x, d, axis, j), m, axis, j) == x:
                    return True
        return False

    def nondegenerate(self, m: tuple) -> list:
        return [x for x in self.cells(m) if not self.is_degenerate(x, m)]

    def census(self) -> dict:
        return {m: len(self.cells(m)) for m in self.indices()}


class StandardMSSet(MSSet):
    """``Delta[p_n, ..., p_1, q]``: cells at ``m`` are operators ``m -> degrees``."""

    def __init__(self, degrees: Iterable[int], trunc: int):
        self.degrees = tuple(degrees)
        if len(self.degrees) < 2 or any(k < 0 for k in self.degrees):
            raise UsageError("a multi-index has n + 1 >= 2 nonnegative entries")
        if trunc < 0:
            raise UsageError("truncation must be >= 0")
        self.n = len(self.degrees) - 1
        self.trunc = trunc

    def __repr__(self):
        return f"Delta{list(self.degrees)}"

    def cells(self, m):
        return tuple(itertools.product(*(monotone_maps(k, p) for k, p in zip(m, self.degrees))))

    def act(self, x, d, op):
        return compose_ops(x, op)

    def top(self):
        return identity_op(self.degrees)


def standard(degrees: Iterable[int], trunc: int) -> StandardMSSet:
    return StandardMSSet(degrees, trunc)


class TableMSSet(MSSet):
    """Explicit cells with elementary face and degeneracy tables.

    ``faces[(d, axis, k)]`` maps cells at ``d`` to cells at ``d - e_axis``;
    ``degens[(d, axis, k)]`` maps cells at ``d`` to cells at ``d + e_axis``
    (present whenever the target index is in bound).
    """

    def __init__(self, n: int, trunc: int, cells: Mapping, faces: Mapping, degens: Mapping, name: str = ""):
        self.n = n
        self.trunc = trunc
        self._cells = {tuple(m): tuple(cs) for m, cs in cells.items()}
        for m in indices(n, trunc):
            self._cells.setdefault(m, ())
        self.faces = {k: dict(v) for k, v in faces.items()}
        self.degens = {k: dict(v) for k, v in degens.items()}
        self.name = name

    def __repr__(self):
        return f"<TableMSSet n={self.n} D={self.trunc} {self.name}>"

    def cells(self, m):
        return self._cells[tuple(m)]

    def face(self, x, d, axis, k):
        return self.faces[(tuple(d), axis, k)][x]

    def degen(self, x, d, axis, k):
        return self.degens[(tuple(d), axis, k)][x]


def elementary_ops(n: int, trunc: int):
    """Yield ``(kind, d, axis, k, target_index)`` for every in-bound elementary operator."""
    for d in indices(n, trunc):
        for axis in range(n + 1):
            if d[axis] > 0:
                m = d[:axis] + (d[axis] - 1,) + d[axis + 1 :]
                for k in range(d[axis] + 1):
                    yield "face", d, axis, k, m
            if d[axis] < trunc:
                m = d[:axis] + (d[axis] + 1,) + d[axis + 1 :]
                for k in range(d[axis] + 1):
                    yield "degen", d, axis, k, m


def materialize(X: MSSet, cells: Mapping | None = None, name: str = "") -> TableMSSet:
    """Tabulate ``X`` (or the subobject with the given cells)."""
    cells = {m: tuple(X.cells(m)) for m in X.indices()} if cells is None else {m: tuple(cs) for m, cs in cells.items()}
    faces, degens = {}, {}
    for kind, d, axis, k, _ in elementary_ops(X.n, X.trunc):
        f = X.face if kind == "face" else X.degen
        table = {x: f(x, d, axis, k) for x in cells.get(d, ())}
        (faces if kind == "face" else degens)[(d, axis, k)] = table
    return TableMSSet(X.n, X.trunc, cells, faces, degens, name=name or getattr(X, "name", "") or repr(X))


class SubMSSet(MSSet):
    """A subobject: restricted cell sets, action inherited from the parent."""

    def __init__(self, parent: MSSet, cells: Mapping, name: str = ""):
        self.parent = parent
        self.n = parent.n
        self.trunc = parent.trunc
        self._cells = {m: tuple(sorted(set(cells.get(m, ())), key=repr)) for m in parent.indices()}
        self.name = name

    def __repr__(self):
        return f"<SubMSSet of {self.parent!r} {self.name}>"

    def cells(self, m):
        return self._cells[tuple(m)]

    def act(self, x, d, op):
        return self.parent.act(x, d, op)

    def face(self, x, d, axis, k):
        return self.parent.face(x, d, axis, k)

    def degen(self, x, d, axis, k):
        return self.parent.degen(x, d, axis, k)


class ProductMSSet(MSSet):
    def __init__(self, X: MSSet, Y: MSSet):
        if X.n != Y.n or X.trunc != Y.trunc:
            raise UsageError("factors must share n and truncation")
        self.X, self.Y = X, Y
        self.n, self.trunc = X.n, X.trunc

    def __repr__(self):
        return f"({self.X!r} x {self.Y!r})"

    def cells(self, m):
        return tuple(itertools.product(self.X.cells(m), self.Y.cells(m)))

    def act(self, x, d, op):
        return (self.X.act(x[0], d, op), self.Y.act(x[1], d, op))

    def face(self, x, d, axis, k):
        return (self.X.face(x[0], d, axis, k), self.Y.face(x[1], d, axis, k))

    def degen(self, x, d, axis, k):
        return (self.X.degen(x[0], d, axis, k), self.Y.degen(x[1], d, axis, k))


def product_msset(X: MSSet, Y: MSSet) -> ProductMSSet:
    return ProductMSSet(X, Y)


def terminal_msset(n: int, trunc: int) -> StandardMSSet:
    return StandardMSSet((0,) * (n + 1), trunc)


# -- validation ---------------------------------------------------------------

def validate_msset(X: MSSet) -> ValidationReport:
    """Closure of every cell set under elementary operators, and functoriality:
    applying two elementary operators in turn agrees with acting by their
    composite through the canonical face/degeneracy decomposition.  Together
    these are the simplicial identities in each axis and commutation across axes.
    """
    bad = []
    n, D = X.n, X.trunc
    cellsets = {m: set(X.cells(m)) for m in X.indices()}
    elem = list(elementary_ops(n, D))

    def elem_op(kind, d, axis, k, m):
        f = coface(d[axis], k) if kind == "face" else codegeneracy(d[axis], k)
        return axis_op(m, axis, f)

    for kind, d, axis, k, m in elem:
        f = X.face if kind == "face" else X.degen
        for x in cellsets[d]:
            y = f(x, d, axis, k)
            if y not in cellsets[m]:
                bad.append(("not-closed", kind, d, axis, k, repr(x)))
    if bad:
        return ValidationReport(bad)
    by_source: dict = {}
    for e in elem:
        by_source.setdefault(e[1], []).append(e)
    for e1 in elem:
        kind1, d, a1, k1, m1 = e1
        op1 = elem_op(*e1)
        f1 = X.face if kind1 == "face" else X.degen
        for e2 in by_source.get(m1, ()):
            kind2, _, a2, k2, m2 = e2
            op = compose_ops(op1, elem_op(*e2))
            f2 = X.face if kind2 == "face" else X.degen
            for x in cellsets[d]:
                if f2(f1(x, d, a1, k1), m1, a2, k2) != MSSet.act(X, x, d, op):
                    bad.append(("identity", d, e1[0], a1, k1, e2[0], a2, k2, repr(x)))
    return ValidationReport(bad)


def maps_equal(X: MSSet, f: Callable, g: Callable) -> bool:
    return all(f(m, x) == g(m, x) for m in X.indices() for x in X.cells(m))


def naturality_violations(X: MSSet, Y: MSSet, f: Callable, max_total: int | None = None) -> list:
    """``f(m, x)`` must land in ``Y.cells(m)`` and commute with elementary operators
    (restricted to indices of total degree ``<= max_total`` when given)."""
    bad = []
    keep = (lambda m: True) if max_total is None else (lambda m: sum(m) <= max_total)
    for m in filter(keep, X.indices()):
        ys = set(Y.cells(m))
        for x in X.cells(m):
            if f(m, x) not in ys:
                bad.append(("not-a-cell", m, repr(x)))
    for kind, d, axis, k, m in elementary_ops(X.n, X.trunc):
        if not (keep(d) and keep(m)):
            continue
        fx = X.face if kind == "face" else X.degen
        fy = Y.face if kind == "face" else Y.degen
        for x in X.cells(d):
            if f(m, fx(x, d, axis, k)) != fy(f(d, x), d, axis, k):
                bad.append(("natural", kind, d, axis, k, repr(x)))
    return bad


# -- subobjects, skeleta, coskeleta ----------------------------------------

def generated_subobject(X: MSSet, generators: Iterable, name: str = "") -> SubMSSet:
    """Smallest subobject containing the ``(index, cell)`` generators."""
    cells: dict = {m: set() for m in X.indices()}
    for d, x in generators:
        d = tuple(d)
        for m in X.indices():
            for op in itertools.product(*(monotone_maps(k, p) for k, p in zip(m, d))):
                cells[m].add(X.act(x, d, op))
    return SubMSSet(X, cells, name=name)


def skeleton(X: MSSet, k: int) -> SubMSSet:
    if k < 0:
        raise UsageError("skeleton dimension must be >= 0")
    gens = [(m, x) for m in X.indices() if sum(m) <= k for x in X.cells(m)]
    return generated_subobject(X, gens, name=f"sk{k}")


def _injective_ops(m: tuple, total: int) -> list:
    out = []
    for k in itertools.product(*(range(min(mi, total) + 1) for mi in m)):
        if sum(k) != total:
            continue
        per_axis = [list(itertools.combinations(range(mi + 1), ki + 1)) for mi, ki in zip(m, k)]
        out.extend(itertools.product(*per_axis))
    return out


@dataclass
class CoskeletonReport:
    two_coskeletal: bool
    checked: dict = field(default_factory=dict)  # index -> (cells, families, injective)
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.two_coskeletal


def compatible_families(X: MSSet, m: tuple, limit: int | None = None) -> int:
    """Number of maps from the 2-skeleton of ``Delta[m]`` to ``X``.

    Such a map is an assignment of cells to the total-dimension-2
    nondegenerate sub-multisimplices agreeing on shared faces.
    """
    tops = _injective_ops(m, 2)
    faces_of = []
    for iota in tops:
        k = op_domain(iota)
        fs = []
        for axis in range(len(k)):
            for j in range(k[axis] + 1):
                if k[axis] == 0:
                    continue
                delta = axis_op(k[:axis] + (k[axis] - 1,) + k[axis + 1 :], axis, coface(k[axis], j))
                fs.append((axis, j, compose_ops(iota, delta)))
        faces_of.append((k, fs))
    # order so each new top shares faces with earlier ones
    order, seen_faces = [], set()
    remaining = list(range(len(tops)))
    while remaining:
        best = max(remaining, key=lambda t: sum(f[2] in seen_faces for f in faces_of[t][1]))
        remaining.remove(best)
        order.append(best)
        seen_faces |= {f[2] for f in faces_of[best][1]}
    face_cache: dict = {}

    def faces_of_cell(k, x):
        key = (k, x)
        hit = face_cache.get(key)
        if hit is None:
            hit = face_cache[key] = [X.face(x, k, axis, j) for axis in range(len(k)) if k[axis] for j in range(k[axis] + 1)]
        return hit

    count = 0
    assigned: dict = {}

    def rec(pos):
        nonlocal count
        if limit is not None and count > limit:
            return
        if pos == len(order):
            count += 1
            return
        t = order[pos]
        k, fs = faces_of[t]
        for x in X.cells(k):
            fx = faces_of_cell(k, x)
            ok = True
            new = []
            for (axis, j, face_op), y in zip(fs, fx):
                cur = assigned.get(face_op)
                if cur is None:
                    new.append(face_op)
                    assigned[face_op] = y
                elif cur != y:
                    ok = False
                    break
            if ok:
                rec(pos + 1)
            for f in new:
                del assigned[f]

    rec(0)
    return count


def is_two_coskeletal(X: MSSet, max_total: int | None = None) -> CoskeletonReport:
    """For each in-bound index of total dimension >= 3, cells biject with
    compatible families on the 2-skeleton of the standard multisimplex."""
    report = CoskeletonReport(True)
    for m in X.indices():
        if sum(m) < 3 or (max_total is not None and sum(m) > max_total):
            continue
        tops = _injective_ops(m, 2)
        cells = X.cells(m)
        images = {tuple(X.act(x, m, iota) for iota in tops) for x in cells}
        injective = len(images) == len(cells)
        families = compatible_families(X, m, limit=len(cells) + 1)
        report.checked[m] = (len(cells), families, injective)
        if not injective or families != len(cells):
            report.two_coskeletal = False
            report.failures.append(m)
    return report


# -- the category of multisimplices ------------------------------------------

def simplex_category(X: MSSet, L: int) -> ExplicitCategory:
    """``Delta X`` restricted to indices with degrees <= L.

    Objects are ``(m, x)``; an arrow ``(m', x') -> (m, x)`` is an operator
    ``theta: m' -> m`` with ``x . theta = x'``, encoded as ``(target, theta)``.
    """
    if L > X.trunc:
        raise UsageError("L exceeds the truncation")
    idx = indices(X.n, L)
    objects = [(m, x) for m in idx for x in X.cells(m)]
    arrows = {}
    for m, x in objects:
        for mp in idx:
            for theta in itertools.product(*(monotone_maps(a, b) for a, b in zip(mp, m))):
                arrows[((m, x), theta)] = ((mp, X.act(x, m, theta)), (m, x))
    identities = {(m, x): ((m, x), identity_op(m)) for m, x in objects}

    def comp(g, f):
        (tgt, theta_g), (_, theta_f) = g, f
        return (tgt, compose_ops(theta_g, theta_f))

    return ExplicitCategory(objects, arrows, identities, comp, name=f"Delta({X!r})<= {L}")


def forgetful_label(obj) -> tuple:
    """``F(m, x) = Delta[m]``, recorded by its multi-index."""
    return obj[0]


@dataclass
class ColimReport:
    bijective: bool
    per_index: dict = field(default_factory=dict)  # m -> (classes, cells, bijective)

    def __bool__(self):
        return self.bijective


class _UF:
    """Union-find over the integers ``0 .. size - 1``."""

    def __init__(self, size: int):
        self.p = list(range(size))

    def find(self, x: int) -> int:
        p = self.p
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[rb] = ra


def colim_over_simplices(X: MSSet, L: int) -> ColimReport:
    """Colimit over ``Delta^{<=L} X`` of the standard multisimplices, compared with ``X``.

    At index ``k`` the colimit is the disjoint union of ``Delta[m]_k`` over
    objects ``(m, x)`` modulo ``psi ~ theta psi`` along arrows ``theta``; the
    identifications along elementary arrows generate the relation.
    """
    if L > X.trunc:
        raise UsageError("L exceeds the truncation")
    idx = indices(X.n, L)
    report = ColimReport(True)
    elementary = []
    for kind, d, axis, j, m in elementary_ops(X.n, L):
        f = coface(d[axis], j) if kind == "face" else codegeneracy(d[axis], j)
        elementary.append((d, m, axis_op(m, axis, f)))  # theta: m -> d
    for k in idx:
        ids: dict = {}
        image = []
        ops = {m: list(itertools.product(*(monotone_maps(a, b) for a, b in zip(k, m)))) for m in idx}
        for m in idx:
            for x in X.cells(m):
                for psi in ops[m]:
                    ids[(m, x, psi)] = len(image)
                    image.append(X.act(x, m, psi))
        uf = _UF(len(image))
        for d, m, theta in elementary:
            moved = [(psi, compose_ops(theta, psi)) for psi in ops[m]]
            for x in X.cells(d):
                xm = X.act(x, d, theta)
                for psi, tpsi in moved:
                    uf.union(ids[(m, xm, psi)], ids[(d, x, tpsi)])
        classes: dict = {}
        for i, y in enumerate(image):
            classes.setdefault(uf.find(i), set()).add(y)
        well_defined = all(len(ys) == 1 for ys in classes.values())
        hit = {next(iter(ys)) for ys in classes.values()}
        ok = well_defined and len(classes) == len(X.cells(k)) and hit == set(X.cells(k))
        report.per_index[k] = (len(classes), len(X.cells(k)), ok)
        if not ok:
            report.bijective = False
    return report

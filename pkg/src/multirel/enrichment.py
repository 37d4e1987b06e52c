"""Embedding into degree n+1 and its right adjoint, zigzag types, n-relative
arrow categories, pushforwards, the Grothendieck construction and the
enriched composition of zigzags.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import UsageError
from .fincat import ExplicitCategory
from .nrelcat import NRelCategory, RelFunctor, enumerate_relative_functors, relative_violations


# -- embedding and its right adjoint -------------------------------------------

def embed(C: NRelCategory) -> NRelCategory:
    """Duplicate ``w`` as ``v_{n+1}``."""
    return NRelCategory(C.n + 1, C.ambient, list(C.v) + [C.w], C.w, name=f"embed({C.name})", check=False)


def abar(D: NRelCategory) -> frozenset:
    """Finite composites of arrows of ``v_1, ..., v_{n}`` (the last ``v`` excluded)."""
    if D.n < 2:
        raise UsageError("abar needs degree >= 2")
    return D.ambient.closure(set().union(*D.v[:-1]))


def restrict(D: NRelCategory) -> NRelCategory:
    """``(abar D, v_1 D, ..., v_n D, w D)``."""
    sub = D.ambient.subcategory(abar(D))
    return NRelCategory(D.n - 1, sub, list(D.v[:-1]), D.w, name=f"restrict({D.name})", check=False)


def same_nrel(C: NRelCategory, D: NRelCategory) -> bool:
    """Literal equality: same n, objects, arrows with endpoints, composition and structure."""
    if C.n != D.n or set(C.objects) != set(D.objects) or C.ambient.arrows != D.ambient.arrows:
        return False
    if C.v != D.v or C.w != D.w:
        return False
    if dict(C.ambient.identities) != dict(D.ambient.identities):
        return False
    return all(C.ambient._compose(g, f) == D.ambient._compose(g, f) for f, g in C.ambient.composable_pairs())


@dataclass
class AdjunctionReport:
    left: int
    right: int
    bijective: bool

    def __bool__(self):
        return self.bijective


def adjunction_check(C: NRelCategory, D: NRelCategory) -> AdjunctionReport:
    """``map(embed C, D)`` versus ``map(C, restrict D)``: transposition is corestriction."""
    if D.n != C.n + 1:
        raise UsageError("D must have degree n + 1")
    left = {F.key for F in enumerate_relative_functors(embed(C), D)}
    R = restrict(D)
    right = {F.key for F in enumerate_relative_functors(C, R)}
    return AdjunctionReport(len(left), len(right), left == right)


# -- zigzag types -------------------------------------------------------------

def _check_signs(signs) -> tuple:
    signs = tuple(signs)
    if any(s not in "+-" for s in signs):
        raise UsageError("type entries are '+' (forward) or '-' (backward)")
    return signs


@dataclass(frozen=True)
class ZigzagType:
    signs: tuple  # signs[i-1] is '+' when position i is in T_+

    def __post_init__(self):
        object.__setattr__(self, "signs", _check_signs(self.signs))

    @classmethod
    def from_sets(cls, m: int, plus: Sequence[int], minus: Sequence[int]) -> "ZigzagType":
        plus, minus = set(plus), set(minus)
        if plus & minus or plus | minus != set(range(1, m + 1)):
            raise UsageError("T_+ and T_- must partition {1..m}")
        return cls(tuple("+" if i in plus else "-" for i in range(1, m + 1)))

    @property
    def length(self) -> int:
        return len(self.signs)

    @property
    def plus(self) -> frozenset:
        return frozenset(i + 1 for i, s in enumerate(self.signs) if s == "+")

    @property
    def minus(self) -> frozenset:
        return frozenset(i + 1 for i, s in enumerate(self.signs) if s == "-")

    def __repr__(self):
        return f"T({''.join(self.signs) or 'empty'})"


@lru_cache(maxsize=None)
def type_maps(src: ZigzagType, tgt: ZigzagType) -> tuple:
    """Weakly monotone ``t: {1..m} -> {1..m'}`` with ``t T_+ in T'_+`` and ``t T_- in T'_-``.

    Stored as the tuple ``(t(1), ..., t(m))``.
    """
    m, mp = src.length, tgt.length
    out = []
    for vals in itertools.combinations_with_replacement(range(1, mp + 1), m):
        if all(tgt.signs[v - 1] == s for v, s in zip(vals, src.signs)):
            out.append(vals)
    return tuple(out)


def all_types(max_len: int) -> list:
    return [ZigzagType(s) for m in range(max_len + 1) for s in itertools.product("+-", repeat=m)]


def type_category(max_len: int) -> ExplicitCategory:
    """Types of length ``<= max_len``; arrows ``(T, T', t)``."""
    if max_len < 0:
        raise UsageError("max_len must be >= 0")
    objs = all_types(max_len)
    arrows = {}
    for T in objs:
        for Tp in objs:
            for t in type_maps(T, Tp):
                arrows[(T, Tp, t)] = (T, Tp)
    identities = {T: (T, T, tuple(range(1, T.length + 1))) for T in objs}

    def comp(g, f):
        return (f[0], g[1], tuple(g[2][v - 1] for v in f[2]))

    return ExplicitCategory(objs, arrows, identities, comp, name=f"types<= {max_len}")


# -- zigzags --------------------------------------------------------------------

@dataclass(frozen=True)
class Zigzag:
    """``X = c_0 - f_1 - c_1 ... - f_m - c_m = Y``.

    A forward ``f_i`` goes ``c_{i-1} -> c_i``; a backward one ``c_i -> c_{i-1}``.
    """

    type: ZigzagType
    objects: tuple
    arrows: tuple

    @property
    def source(self):
        return self.objects[0]

    @property
    def target(self):
        return self.objects[-1]

    def to_json(self) -> dict:
        return {
            "type": {"plus": sorted(self.type.plus), "minus": sorted(self.type.minus)},
            "objects": [str(o) for o in self.objects],
            "arrows": [str(a) for a in self.arrows],
        }


def zigzag_problems(A: ExplicitCategory, z: Zigzag, backward_ok=None) -> list:
    bad = []
    if len(z.objects) != z.type.length + 1 or len(z.arrows) != z.type.length:
        return [("shape",)]
    for i, (s, f) in enumerate(zip(z.type.signs, z.arrows)):
        want = (z.objects[i], z.objects[i + 1]) if s == "+" else (z.objects[i + 1], z.objects[i])
        if A.arrows.get(f) != want:
            bad.append(("endpoints", i + 1))
        if s == "-" and backward_ok is not None and f not in backward_ok:
            bad.append(("backward-not-in-abar", i + 1))
    return bad


def zigzags(A: ExplicitCategory, X, Y, T: ZigzagType, backward_ok) -> list:
    out = []

    def rec(i, objs, arrs):
        if i == T.length:
            if objs[-1] == Y:
                out.append(Zigzag(T, tuple(objs), tuple(arrs)))
            return
        c = objs[-1]
        if T.signs[i] == "+":
            cands = [(f, A.tgt(f)) for f in A.out_arrows(c)]
        else:
            cands = [(f, A.src(f)) for f in A.in_arrows(c) if f in backward_ok]
        for f, d in cands:
            rec(i + 1, objs + [d], arrs + [f])

    rec(0, [X], [])
    return out


def identity_zigzag(X) -> Zigzag:
    return Zigzag(ZigzagType(()), (X,), ())


def enriched_compose(C: NRelCategory, z1: Zigzag, z2: Zigzag) -> Zigzag:
    """Concatenation ``z2 . z1`` of a zigzag ``X -> Y`` and one ``Y -> Z``."""
    if z1.target != z2.source:
        raise UsageError("zigzags do not meet")
    return Zigzag(ZigzagType(z1.type.signs + z2.type.signs), z1.objects + z2.objects[1:], z1.arrows + z2.arrows)


# -- arrow categories -----------------------------------------------------------

class ArrowCategory(NRelCategory):
    """``C^T(X, Y)`` for ``C`` of degree ``n + 1``, an n-relative category.

    Arrows are ladders ``(Z, Z', verticals)`` with identity ends.
    """

    def __init__(self, C: NRelCategory, X, Y, T: ZigzagType):
        A = C.ambient
        self.base, self.X, self.Y, self.T = C, X, Y, T
        bar = abar(C)
        self.abar = bar
        objs = zigzags(A, X, Y, T, bar)
        n = C.n - 1
        vsets = [C.v[i] for i in range(n)]
        ladders = {}
        for Z in objs:
            for Zp in objs:
                for vert in self._ladders(A, Z, Zp, bar):
                    ladders[(Z, Zp, vert)] = (Z, Zp)
        identities = {Z: (Z, Z, tuple(A.identity(c) for c in Z.objects)) for Z in objs}

        def comp(g, f):
            return (f[0], g[1], tuple(A._compose(b, a) for a, b in zip(f[2], g[2])))

        full = ExplicitCategory(objs, ladders, identities, comp, name=f"{C.name}^{T}({X},{Y})")
        v = [frozenset(l for l in ladders if all(g in s for g in l[2])) for s in vsets]
        w = frozenset(l for l in ladders if all(g in C.w for g in l[2]))
        amb = full.closure(set().union(*v))
        sub = full.subcategory(amb)
        super().__init__(n, sub, v, w, name=full.name, check=False)

    @staticmethod
    def _ladders(A, Z, Zp, bar):
        m = Z.type.length
        out = []

        def square_ok(i, vert):
            # square between positions i-1 and i
            f, fp = Z.arrows[i - 1], Zp.arrows[i - 1]
            a, b = vert[i - 1], vert[i]
            if Z.type.signs[i - 1] == "+":
                return A._compose(b, f) == A._compose(fp, a)
            return A._compose(a, f) == A._compose(fp, b)

        def rec(i, vert):
            if i == m:
                last = A.identity(Z.objects[m])
                if Z.objects[m] == Zp.objects[m] and (m == 0 or square_ok(m, vert + [last])):
                    out.append(tuple(vert + [last]) if m > 0 else tuple(vert))
                return
            for g in A.hom(Z.objects[i], Zp.objects[i]):
                if g not in bar:
                    continue
                if i > 0 and not square_ok(i, vert + [g]):
                    continue
                rec(i + 1, vert + [g])

        if Z.objects[0] != Zp.objects[0]:
            return out
        first = A.identity(Z.objects[0])
        if m == 0:
            return [(first,)]
        rec(1, [first])
        return out


def arrow_category(C: NRelCategory, X, Y, T: ZigzagType) -> ArrowCategory:
    return ArrowCategory(C, X, Y, T)


# -- pushforward -------------------------------------------------------------

def _fibers(t: tuple, mp: int) -> list:
    return [[i for i, v in enumerate(t, start=1) if v == j] for j in range(1, mp + 1)]


def _positions(t: tuple, mp: int) -> list:
    """Position ``j`` of ``t_* Z`` sits at position ``r(j) = max{i : t(i) <= j}`` of ``Z``."""
    return [max([i for i, v in enumerate(t, start=1) if v <= j], default=0) for j in range(mp + 1)]


def push_zigzag(A: ExplicitCategory, Z: Zigzag, Tp: ZigzagType, t: tuple) -> Zigzag:
    mp = Tp.length
    pos = _positions(t, mp)
    objs = tuple(Z.objects[p] for p in pos)
    arrs = []
    for j, fib in enumerate(_fibers(t, mp), start=1):
        if not fib:
            arrs.append(A.identity(objs[j - 1]))
            continue
        if Tp.signs[j - 1] == "+":
            f = A.identity(Z.objects[fib[0] - 1])
            for i in fib:
                f = A._compose(Z.arrows[i - 1], f)
        else:
            f = A.identity(Z.objects[fib[-1]])
            for i in reversed(fib):
                f = A._compose(Z.arrows[i - 1], f)
        arrs.append(f)
    return Zigzag(Tp, objs, tuple(arrs))


def pushforward(src: ArrowCategory, tgt: ArrowCategory, t: tuple) -> RelFunctor:
    """``t_*``: fiberwise composites; empty fibers give identities."""
    if t not in type_maps(src.T, tgt.T):
        raise UsageError("not a map of types")
    A = src.base.ambient
    mp = tgt.T.length
    pos = _positions(t, mp)
    om = {Z: push_zigzag(A, Z, tgt.T, t) for Z in src.ambient.objects}
    am = {}
    for l in src.ambient.arrows:
        Z, Zp, vert = l
        am[l] = (om[Z], om[Zp], tuple(vert[p] for p in pos))
    return RelFunctor(src, tgt, om, am)


@dataclass
class FunctorialityReport:
    functors_ok: bool
    identities_ok: bool
    composition_ok: bool
    checked: int

    def __bool__(self):
        return self.functors_ok and self.identities_ok and self.composition_ok


def pushforward_functoriality(C: NRelCategory, X, Y, max_len: int) -> FunctorialityReport:
    """Every ``t_*`` is a relative functor, ``id_* = 1`` and ``(t' t)_* = t'_* t_*``."""
    types = all_types(max_len)
    cats = {T: arrow_category(C, X, Y, T) for T in types}
    push = {}
    ok_f = True
    for T in types:
        for Tp in types:
            for t in type_maps(T, Tp):
                F = pushforward(cats[T], cats[Tp], t)
                push[(T, Tp, t)] = F
                if relative_violations(F):
                    ok_f = False
    ok_i = all(
        push[(T, T, tuple(range(1, T.length + 1)))].key == (tuple(cats[T].ambient.objects), tuple(cats[T].ambient.arrows))
        for T in types
    )
    ok_c = True
    checked = 0
    for (T, Tp, t), F in push.items():
        for Tpp in types:
            for tp in type_maps(Tp, Tpp):
                G = push[(Tp, Tpp, tp)]
                comp = tuple(tp[v - 1] for v in t)
                if F.then(G).key != push[(T, Tpp, comp)].key:
                    ok_c = False
                checked += 1
    return FunctorialityReport(ok_f, ok_i, ok_c, checked)


# -- Grothendieck construction -----------------------------------------------------

class Grothendieck(NRelCategory):
    """``Gr C^{(T)}(X, Y)`` with types of length ``<= max_len``.

    Objects ``(T, Z)``; arrows ``(t, z)`` encoded as ``((T, Z), (T', Z'), t, z)``
    with ``z: t_* Z -> Z'`` in ``C^{T'}(X, Y)``.  ``(t, z)`` lies in ``v_i``
    (resp. ``w``) iff ``z`` does.
    """

    def __init__(self, C: NRelCategory, X, Y, max_len: int):
        types = all_types(max_len)
        self.cats = {T: arrow_category(C, X, Y, T) for T in types}
        self.base = C
        A = C.ambient
        objects = [(T, Z) for T in types for Z in self.cats[T].ambient.objects]
        arrows = {}
        self._push: dict = {}
        for T in types:
            for Tp in types:
                cat = self.cats[Tp]
                for t in type_maps(T, Tp):
                    for Z in self.cats[T].ambient.objects:
                        pZ = push_zigzag(A, Z, Tp, t)
                        self._push[(Z, Tp, t)] = pZ
                        for z in cat.ambient.out_arrows(pZ):
                            arrows[((T, Z), (Tp, z[1]), t, z)] = ((T, Z), (Tp, z[1]))
        identities = {(T, Z): ((T, Z), (T, Z), tuple(range(1, T.length + 1)), self.cats[T].ambient.identity(Z)) for T, Z in objects}
        positions = {}

        def push_ladder(z, Tp, t):
            key = (len(t), Tp.length, t)
            pos = positions.get(key)
            if pos is None:
                pos = positions[key] = _positions(t, Tp.length)
            Z, Zp, vert = z
            return (self._push[(Z, Tp, t)], self._push[(Zp, Tp, t)], tuple(vert[p] for p in pos))

        def comp(g, f):
            (T, Z), _, t, z = f
            _, (Tpp, Zpp), tp, zp = g
            pushed = push_ladder(z, Tpp, tp)
            cat = self.cats[Tpp].ambient
            return ((T, Z), (Tpp, Zpp), tuple(tp[v - 1] for v in t), cat._compose(zp, pushed))

        amb = ExplicitCategory(objects, arrows, identities, comp, name=f"Gr {C.name}({X},{Y})<= {max_len}")
        n = C.n - 1
        v = [frozenset(a for a in arrows if a[3] in self.cats[a[1][0]].v[i]) for i in range(n)]
        w = frozenset(a for a in arrows if a[3] in self.cats[a[1][0]].w)
        super().__init__(n, amb, v, w, name=amb.name, check=False)


def grothendieck(C: NRelCategory, X, Y, max_len: int) -> Grothendieck:
    if C.n < 2:
        raise UsageError("the Grothendieck construction needs degree >= 2")
    return Grothendieck(C, X, Y, max_len)

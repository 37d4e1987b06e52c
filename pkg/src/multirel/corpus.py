"""The bundled corpus of n-relative categories and multisimplicial sets.

``build()`` constructs everything from code; ``scripts/build_corpus.py``
writes it to ``data/corpus`` and ``load()`` reads those files back, so the
suite runs offline on exactly the serialized objects.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .fincat import ExplicitCategory
from .msset import generated_subobject, materialize, skeleton, standard
from .nerve import nerve
from .nrelcat import NRelCategory, PresentedNRel, chain_v, chain_w, product_nrel, standard_nrel
from .prescat import Budget, Generator, Presentation, Relation
from .serialize import dumps, msset_from_json, msset_to_json, nrel_from_json, nrel_to_json


@dataclass
class Member:
    name: str
    nrel: NRelCategory
    satisfies_axioms: bool
    note: str = ""


@dataclass
class Corpus:
    categories: list = field(default_factory=list)
    mssets: dict = field(default_factory=dict)

    def good(self, n: int | None = None) -> list:
        return [m for m in self.categories if m.satisfies_axioms and (n is None or m.nrel.n == n)]

    def violators(self) -> list:
        return [m for m in self.categories if not m.satisfies_axioms]


def _explicit(objects, arrows: dict, table: dict, v, w, n: int, name: str) -> NRelCategory:
    """Small explicit category: ``arrows`` id -> (src, tgt), ``table`` (f, g) -> g o f
    for non-identity pairs; identities are ``id_x``."""
    ids = {x: f"id_{x}" for x in objects}
    arrs = dict(arrows)
    arrs.update({i: (x, x) for x, i in ids.items()})
    idset = set(ids.values())

    def comp(g, f):
        if f in idset:
            return g
        if g in idset:
            return f
        return table[(f, g)]

    A = ExplicitCategory(objects, arrs, ids, comp, name=name)
    v = [frozenset(vi) | idset for vi in v]
    return NRelCategory(n, A, v, frozenset(w) | idset, name=name)


def parallel(n: int, tags: tuple, name: str) -> NRelCategory:
    """``a`` with two parallel arrows ``f, g`` to ``b``; ``tags[k]`` lists the
    indices ``i`` with the arrow in ``v_i`` (``0`` stands for ``w``)."""
    arrows = {"f": ("a", "b"), "g": ("a", "b")}
    v = [{x for x, t in zip("fg", tags) if i in t or 0 in t} for i in range(1, n + 1)]
    w = {x for x, t in zip("fg", tags) if 0 in t}
    return _explicit(["a", "b"], arrows, {}, v, w, n, name)


def idempotent(name: str = "idempotent") -> NRelCategory:
    """One object, ``e o e = e``, ``e`` in ``v_1``."""
    return _explicit(["*"], {"e": ("*", "*")}, {("e", "e"): "e"}, [{"e"}], set(), 1, name)


def _presented(n: int, objects, gens, rels, name: str) -> NRelCategory:
    G = [Generator(g, s, t, frozenset(tags)) for g, s, t, tags in gens]
    by_id = {g.id: g for g in G}
    R = [Relation(tuple(l), tuple(r), by_id[l[0]].src, by_id[l[-1]].tgt) for l, r in rels]
    C = PresentedNRel(n, Presentation(objects, G, R), name=name).realize(Budget(max_len=4))
    C.name = name
    return C


def two_paths(name: str = "two-mixed-paths") -> NRelCategory:
    """``a->b->c->d`` and ``a->b'->c'->d``, both labelled v1, v2, v1, with equal composites."""
    gens = [
        ("f1", "a", "b", {"v1"}), ("f2", "b", "c", {"v2"}), ("f3", "c", "d", {"v1"}),
        ("g1", "a", "b'", {"v1"}), ("g2", "b'", "c'", {"v2"}), ("g3", "c'", "d", {"v1"}),
    ]
    return _presented(2, ["a", "b", "c", "d", "b'", "c'"], gens, [(("f1", "f2", "f3"), ("g1", "g2", "g3"))], name)


def long_short(name: str = "long-equals-short") -> NRelCategory:
    """``a->b->c->d`` (v1, v2, v1) equals ``a->e->d`` (v2, v1)."""
    gens = [
        ("f1", "a", "b", {"v1"}), ("f2", "b", "c", {"v2"}), ("f3", "c", "d", {"v1"}),
        ("e1", "a", "e", {"v2"}), ("e2", "e", "d", {"v1"}),
    ]
    return _presented(2, ["a", "b", "c", "d", "e"], gens, [(("f1", "f2", "f3"), ("e1", "e2"))], name)


def _good() -> list:
    cats = [
        chain_v(1, 1, 1), chain_v(2, 1, 1), chain_w(1, 1), chain_w(2, 1),
        standard_nrel((1, 1)),
        parallel(1, ({1}, {1}), "parallel-v1"),
        parallel(1, ({0}, {1}), "parallel-w-v1"),
        idempotent(),
        chain_v(1, 1, 2), chain_v(1, 2, 2), chain_w(1, 2),
        standard_nrel((1, 1, 0)), standard_nrel((1, 0, 1)),
        parallel(2, ({1}, {2}), "parallel-v1-v2"),
        product_nrel([parallel(2, ({1}, {2}), "parallel-v1-v2"), chain_w(1, 2)]),
        chain_v(1, 1, 3), chain_v(1, 3, 3), chain_w(1, 3),
        standard_nrel((1, 0, 0, 0)),
    ]
    out = []
    for C in cats:
        label = f"{C.name} (n={C.n})"
        C.name = label
        out.append(Member(label, C, True))
    return out


def _violators() -> list:
    return [
        Member("two-mixed-paths (n=2)", two_paths("two-mixed-paths (n=2)"), False, "equal composites of two v1/v2/v1 paths, no square"),
        Member("long-equals-short (n=2)", long_short("long-equals-short (n=2)"), False, "length-3 path equal to a length-2 path, no square"),
    ]


def _mssets(trunc: int = 2) -> dict:
    out = {}
    for d in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)]:
        out[f"standard{d}"] = materialize(standard(d, trunc), name=f"standard{d}")
    for d in [(0, 0, 1), (1, 0, 0), (0, 1, 1)]:
        out[f"standard{d}"] = materialize(standard(d, trunc), name=f"standard{d}")
    # the boundary of a square: the four edges of the (1, 1) standard without its interior
    sq = standard((1, 1), trunc)
    edges = [((0, 1), c) for c in sq.nondegenerate((0, 1))] + [((1, 0), c) for c in sq.nondegenerate((1, 0))]
    out["square-boundary"] = materialize(generated_subobject(sq, edges), name="square-boundary")
    out["skeleton1(1,2)"] = materialize(skeleton(standard((1, 2), trunc), 1), name="skeleton1(1,2)")
    for C, key in [(chain_v(1, 1, 1), "N(1^v1)"), (chain_w(1, 1), "N(1^w)"), (parallel(1, ({1}, {1}), "parallel-v1"), "N(parallel-v1)")]:
        out[key] = materialize(nerve(C, trunc), name=key)
    return out


def build() -> Corpus:
    return Corpus(_good() + _violators(), _mssets())


# -- bundled files ---------------------------------------------------------------------

def _slug(s: str) -> str:
    keep = "".join(ch if ch.isalnum() else "-" for ch in s)
    return "-".join(p for p in keep.split("-") if p)


def write(corpus: Corpus, directory) -> list:
    from pathlib import Path

    d = Path(directory)
    (d / "categories").mkdir(parents=True, exist_ok=True)
    (d / "mssets").mkdir(parents=True, exist_ok=True)
    written = []
    for m in corpus.categories:
        doc = nrel_to_json(m.nrel)
        doc["name"] = m.name
        doc["satisfies_axioms"] = m.satisfies_axioms
        if m.note:
            doc["note"] = m.note
        p = d / "categories" / f"{_slug(m.name)}.json"
        p.write_text(dumps(doc), encoding="utf-8")
        written.append(p)
    for key, X in corpus.mssets.items():
        doc = msset_to_json(X)
        doc["name"] = key
        p = d / "mssets" / f"{_slug(key)}.json"
        p.write_text(dumps(doc), encoding="utf-8")
        written.append(p)
    return written


def load() -> Corpus:
    """Read the bundled corpus shipped with the package."""
    root = resources.files("multirel") / "data" / "corpus"
    corpus = Corpus()
    for entry in sorted((root / "categories").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            doc = json.loads(entry.read_text(encoding="utf-8"))
            corpus.categories.append(Member(doc["name"], nrel_from_json(doc), doc["satisfies_axioms"], doc.get("note", "")))
    for entry in sorted((root / "mssets").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            doc = json.loads(entry.read_text(encoding="utf-8"))
            corpus.mssets[doc["name"]] = msset_from_json(doc, name=doc["name"])
    return corpus

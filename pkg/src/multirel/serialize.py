"""JSON readers and writers.

Internal ids may be any hashable; on output they become strings (``repr`` for
non-strings) and every list is sorted, so ``dumps(read(dumps(x))) == dumps(x)``.
"""
from __future__ import annotations

import json
from typing import Any

from .enrichment import Zigzag, ZigzagType
from .errors import UsageError
from .fincat import ExplicitCategory
from .msset import MSSet, TableMSSet, elementary_ops
from .nrelcat import NRelCategory
from .prescat import Generator, Presentation, Relation


def name(x) -> str:
    return x if isinstance(x, str) else repr(x)


def _names(items) -> dict:
    out = {x: name(x) for x in items}
    if len(set(out.values())) != len(out):
        raise UsageError("ids collide after conversion to strings")
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def index_key(m) -> str:
    return ",".join(str(k) for k in m)


def parse_index(s: str) -> tuple:
    try:
        return tuple(int(k) for k in s.split(","))
    except ValueError as exc:
        raise UsageError(f"bad multi-index {s!r}") from exc


# -- categories ---------------------------------------------------------------

def category_to_json(C: ExplicitCategory) -> dict:
    on = _names(C.objects)
    an = _names(C.arrows)
    return {
        "objects": sorted(on.values()),
        "arrows": sorted(({"id": an[a], "src": on[s], "tgt": on[t]} for a, (s, t) in C.arrows.items()), key=lambda r: r["id"]),
        "identities": {on[x]: an[C.identity(x)] for x in C.objects},
        "compose": sorted([an[g], an[f], an[C._compose(g, f)]] for f, g in C.composable_pairs()),
    }


def category_from_json(doc: dict, name: str = "") -> ExplicitCategory:
    """Read the category format; ``compose`` rows are ``[g, f, g o f]``."""
    try:
        arrows = {r["id"]: (r["src"], r["tgt"]) for r in doc["arrows"]}
        table = {(f, g): h for g, f, h in doc["compose"]}
        C = ExplicitCategory(doc["objects"], arrows, doc["identities"], table, name=name)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed category JSON: {exc}") from exc
    return C


def nrel_to_json(C: NRelCategory) -> dict:
    doc = category_to_json(C.ambient)
    an = _names(C.ambient.arrows)
    doc["n"] = C.n
    doc["v"] = [sorted(an[a] for a in vi) for vi in C.v]
    doc["w"] = sorted(an[a] for a in C.w)
    if C.name:
        doc["name"] = C.name
    return doc


def nrel_from_json(doc: dict, check: bool = True) -> NRelCategory:
    A = category_from_json(doc, doc.get("name", ""))
    try:
        n, v, w = doc["n"], doc["v"], doc["w"]
    except KeyError as exc:
        raise UsageError(f"missing field {exc}") from exc
    if len(v) != n:
        raise UsageError("need exactly n lists in 'v'")
    return NRelCategory(n, A, [frozenset(x) for x in v], frozenset(w), name=doc.get("name", ""), check=check)


# -- presentations ------------------------------------------------------------

def presentation_to_json(P: Presentation) -> dict:
    on = _names(P.objects)
    gn = _names(P.generators)
    return {
        "objects": sorted(on.values()),
        "generators": sorted(
            ({"id": gn[g.id], "src": on[g.src], "tgt": on[g.tgt], "tags": sorted(name(t) for t in g.tags)} for g in P.generators.values()),
            key=lambda r: r["id"],
        ),
        # relation order matters for certificates, so it is kept as given
        "relations": [
            {"lhs": [gn[x] for x in r.lhs], "rhs": [gn[x] for x in r.rhs], "src": on[r.src], "tgt": on[r.tgt]} for r in P.relations
        ],
    }


def presentation_from_json(doc: dict) -> Presentation:
    try:
        gens = [Generator(g["id"], g["src"], g["tgt"], frozenset(g.get("tags", ()))) for g in doc["generators"]]
        rels = [Relation(tuple(r["lhs"]), tuple(r["rhs"]), r["src"], r["tgt"]) for r in doc["relations"]]
        return Presentation(doc["objects"], gens, rels)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed presentation JSON: {exc}") from exc


# -- multisimplicial sets ---------------------------------------------------------

def msset_to_json(X: MSSet) -> dict:
    """Cells per index and the elementary action, one row per (cell, operator)."""
    cells = {}
    names: dict = {}
    for m in X.indices():
        cs = X.cells(m)
        nm = _names(cs)
        names[m] = nm
        cells[index_key(m)] = sorted(nm.values())
    action = []
    for kind, d, axis, k, target in elementary_ops(X.n, X.trunc):
        f = X.face if kind == "face" else X.degen
        for x in X.cells(d):
            y = f(x, d, axis, k)
            action.append([index_key(d), names[d][x], axis, kind, k, names[target][y]])
    action.sort()
    return {"n": X.n, "truncation": X.trunc, "cells": cells, "action": action, "action_columns": ["index", "cell", "axis", "kind", "position", "result"]}


def msset_from_json(doc: dict, name: str = "") -> TableMSSet:
    try:
        n, trunc = doc["n"], doc["truncation"]
        cells = {parse_index(m): tuple(cs) for m, cs in doc["cells"].items()}
        faces, degens = {}, {}
        for m, x, axis, kind, k, y in doc["action"]:
            if kind not in ("face", "degen"):
                raise UsageError(f"unknown operator kind {kind!r}")
            (faces if kind == "face" else degens).setdefault((parse_index(m), axis, k), {})[x] = y
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed multisimplicial-set JSON: {exc}") from exc
    for kind, d, axis, k, _ in elementary_ops(n, trunc):
        (faces if kind == "face" else degens).setdefault((d, axis, k), {})
    return TableMSSet(n, trunc, cells, faces, degens, name=name)


# -- zigzags ----------------------------------------------------------------------

def zigzag_to_json(z: Zigzag) -> dict:
    return z.to_json()


def zigzag_from_json(doc: dict) -> Zigzag:
    try:
        T = doc["type"]
        m = len(doc["arrows"])
        return Zigzag(ZigzagType.from_sets(m, T["plus"], T["minus"]), tuple(doc["objects"]), tuple(doc["arrows"]))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed zigzag JSON: {exc}") from exc


# -- files ------------------------------------------------------------------------

def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc

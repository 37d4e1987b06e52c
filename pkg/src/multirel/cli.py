"""Command-line entry point: ``multirel <command> [flags]``.

Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 a budget or
resource bound was hit before a verdict.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field

from .division import (
    canonical_iso_check,
    delta_rel,
    delta_rel_colim_check,
    division,
    homotopy_h,
    nerve_homotopy_k,
    projection_iff_check,
    strict_homotopy_check,
    tau,
    terminal_projection,
)
from .enrichment import (
    all_types,
    embed,
    grothendieck,
    pushforward_functoriality,
    restrict,
    same_nrel,
    type_category,
)
from .errors import ResourceError, StructureError, UsageError
from .fincat import validate_category
from .msset import (
    colim_over_simplices,
    indices,
    materialize,
    simplex_category,
    validate_msset,
)
from .nerve import counit, k_adjoint, nerve, unit
from .nrelcat import check_axiom_generation, check_axiom_relations, structure_problems
from .prescat import Budget, Undecided
from .serialize import (
    category_from_json,
    category_to_json,
    dumps,
    index_key,
    load,
    msset_from_json,
    msset_to_json,
    nrel_from_json,
    nrel_to_json,
    presentation_from_json,
    presentation_to_json,
)
from .suite import run_suite, suite_keys

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3

COMMANDS = (
    "validate", "nerve", "k", "counit", "unit", "simplex-cat", "colim-check", "division",
    "delta-rel", "canonical-iso", "homotopy", "enrich", "grothendieck", "suite",
)


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    trunc: int = 2
    string_bound: int = 2
    budget_len: int = 8
    budget_classes: int = 200_000
    output: str | None = None
    format: str = "human"
    n: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.trunc < 1 or self.string_bound < 1:
            raise UsageError("--trunc and --string-bound must be positive")
        if self.n < 1:
            raise UsageError("--n must be positive")
        if self.format not in ("human", "json"):
            raise UsageError("--format is human or json")

    @property
    def budget(self) -> Budget:
        return Budget(max_len=self.budget_len, max_classes=self.budget_classes)


# -- reports ------------------------------------------------------------------------

def plain(x):
    """A JSON-ready copy of a report value."""
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: plain(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {_key(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((plain(v) for v in x), key=repr)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return repr(x)


def _key(k) -> str:
    if isinstance(k, tuple) and all(isinstance(c, int) for c in k):
        return index_key(k)
    return k if isinstance(k, str) else repr(k)


def _human(doc, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict) and v:
            lines.append(f"{pad}{k}:")
            lines.extend(_human(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}")
    return lines


def emit(cfg: RunConfig, doc: dict, data: bool = False):
    """Write a report (``--format``) or a data document (always JSON)."""
    text = dumps(doc) if data or cfg.format == "json" else "\n".join(_human(doc)) + "\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def verdict_code(verdict: str) -> int:
    return {"isomorphism": OK, "not-isomorphism": FAILED}.get(verdict, BUDGET)


def flag_code(ok) -> int:
    return OK if ok is True else FAILED if ok is False else BUDGET


# -- inputs ---------------------------------------------------------------------------

def input_kind(doc: dict) -> str:
    if not isinstance(doc, dict):
        raise UsageError("input must be a JSON object")
    if "truncation" in doc:
        return "msset"
    if "v" in doc:
        return "nrel"
    if "generators" in doc:
        return "presentation"
    if "compose" in doc:
        return "category"
    raise UsageError("cannot tell the input type from its keys")


def _one_input(cfg: RunConfig):
    if len(cfg.inputs) != 1:
        raise UsageError(f"{cfg.command} needs exactly one --input")
    doc = load(cfg.inputs[0])
    return input_kind(doc), doc


def read_nrel(cfg: RunConfig):
    kind, doc = _one_input(cfg)
    if kind != "nrel":
        raise UsageError(f"{cfg.command} needs an n-relative category, got {kind}")
    return nrel_from_json(doc)


def read_msset(cfg: RunConfig):
    kind, doc = _one_input(cfg)
    if kind != "msset":
        raise UsageError(f"{cfg.command} needs a multisimplicial set, got {kind}")
    return msset_from_json(doc, name=doc.get("name", ""))


def read_space(cfg: RunConfig):
    """A multisimplicial set, or the nerve of an n-relative category at ``--trunc``."""
    kind, doc = _one_input(cfg)
    if kind == "msset":
        return msset_from_json(doc, name=doc.get("name", ""))
    if kind == "nrel":
        return nerve(nrel_from_json(doc), cfg.trunc)
    raise UsageError(f"{cfg.command} needs a multisimplicial set or an n-relative category")


def _endpoints(C, args):
    objs = list(C.objects)
    X = args.source if args.source is not None else objs[0]
    Y = args.target if args.target is not None else objs[-1]
    for o in (X, Y):
        if o not in C.ambient.identities:
            raise UsageError(f"no object {o!r}")
    return X, Y


# -- commands -------------------------------------------------------------------------

def cmd_validate(cfg, args) -> int:
    kind, doc = _one_input(cfg)
    out = {"kind": kind}
    if kind == "msset":
        r = validate_msset(msset_from_json(doc))
        out["violations"] = plain(r.violations[:20])
        ok = r.valid
    elif kind == "presentation":
        P = presentation_from_json(doc)
        out.update(objects=len(P.objects), generators=len(P.generators), relations=len(P.relations))
        ok = True
    else:
        C = nrel_from_json(doc, check=False) if kind == "nrel" else None
        A = C.ambient if C else category_from_json(doc)
        r = validate_category(A)
        out["category_violations"] = plain(r.violations[:20])
        ok = r.valid
        if C is not None and ok:
            problems = structure_problems(A, C.v, C.w)
            out["structure_problems"] = plain(problems[:20])
            ok = not problems
            if ok:
                gen = check_axiom_generation(C)
                rel = check_axiom_relations(C, cfg.budget)
                out["axiom_generation"] = gen
                out["axiom_relations"] = rel.verdict
                ok = gen and rel.is_isomorphism
                if gen and rel.verdict == "unknown":
                    ok = None
    out["valid"] = ok
    emit(cfg, out)
    return flag_code(ok)


def cmd_nerve(cfg, args) -> int:
    C = read_nrel(cfg)
    N = materialize(nerve(C, cfg.trunc), name=f"N({C.name})" if C.name else "")
    emit(cfg, msset_to_json(N), data=True)
    return OK


def cmd_k(cfg, args) -> int:
    X = read_space(cfg)
    K = k_adjoint(X)
    if not args.realize:
        doc = presentation_to_json(K.presentation)
        doc["n"] = X.n
        emit(cfg, doc, data=True)
        return OK
    R = K.nrel.realize(cfg.budget)
    if isinstance(R, Undecided):
        emit(cfg, {"verdict": "unknown", "reason": R.reason})
        return BUDGET
    emit(cfg, nrel_to_json(R), data=True)
    return OK


def cmd_counit(cfg, args) -> int:
    r = counit(read_nrel(cfg), cfg.budget, cfg.trunc)
    emit(cfg, r.to_json())
    return verdict_code(r.verdict)


def cmd_unit(cfg, args) -> int:
    X = read_space(cfg)
    _, r = unit(X, cfg.budget, check_naturality=not args.no_naturality, max_total=args.max_total)
    doc = {
        "verdict": r.verdict,
        "injective": r.injective,
        "natural": r.natural,
        "per_index": {index_key(m): dict(zip(("cells", "image", "target", "injective", "surjective"), v)) for m, v in sorted(r.per_index.items())},
    }
    if r.undecided:
        doc["reason"] = r.undecided
    emit(cfg, doc)
    return verdict_code(r.verdict)


def cmd_simplex_cat(cfg, args) -> int:
    S = simplex_category(read_msset(cfg), cfg.string_bound)
    emit(cfg, category_to_json(S), data=True)
    return OK


def cmd_colim_check(cfg, args) -> int:
    X = read_space(cfg)
    L = cfg.string_bound
    simp = colim_over_simplices(X, L)
    piece = delta_rel_colim_check(X, L, args.convention)
    doc = {
        "simplex_colimit": {"bijective": simp.bijective, "per_index": plain(simp.per_index)},
        "delta_rel_colimit": dict(plain(piece), isomorphism=piece.isomorphism),
    }
    emit(cfg, doc)
    return flag_code(simp.bijective and piece.isomorphism)


def cmd_division(cfg, args) -> int:
    D = division(read_nrel(cfg), cfg.string_bound)
    if args.check:
        bad = projection_iff_check(D)
        emit(cfg, {"arrows": len(D.ambient.arrows), "iff_failures": plain(bad[:20])})
        return flag_code(not bad)
    emit(cfg, nrel_to_json(D), data=True)
    return OK


def cmd_delta_rel(cfg, args) -> int:
    R = delta_rel(read_space(cfg), cfg.string_bound, args.convention)
    emit(cfg, nrel_to_json(R), data=True)
    return OK


def cmd_canonical_iso(cfg, args) -> int:
    results = {}
    for m in indices(cfg.n, cfg.trunc):
        r = canonical_iso_check(m, cfg.string_bound, args.convention)
        results[index_key(m)] = dict(plain(r), isomorphism=r.isomorphism)
    ok = all(v["isomorphism"] for v in results.values())
    emit(cfg, {"n": cfg.n, "max_degree": cfg.trunc, "L": cfg.string_bound, "all_isomorphisms": ok, "per_index": results})
    return flag_code(ok)


def cmd_homotopy(cfg, args) -> int:
    rows, flags = [], []
    for p in args.p if args.p else (0, 1, 2):
        for tag in (args.tag,) if args.tag else ("v1", "w"):
            t = tau(p, tag, cfg.n)
            base = t.rel_source.ambient
            section = t.then(terminal_projection(t.rel_target)).key == (tuple(base.objects), tuple(base.arrows))
            h, ident, tp = homotopy_h(p, tag, cfg.n)
            strict = section and strict_homotopy_check(h, ident, tp)
            row = {"p": p, "tag": tag, "pi_tau_identity": section, "strict_homotopy": strict}
            flags.append(strict)
            if args.nerve:
                _, r = nerve_homotopy_k(h, ident, tp, trunc=cfg.trunc, check_naturality=not args.no_naturality)
                row.update(k_starts_at_f=r.starts_at_f, k_ends_at_g=r.ends_at_g, k_natural=r.natural)
                flags.append(bool(r))
            rows.append(row)
    ok = all(flags)
    emit(cfg, {"ok": ok, "cases": rows})
    return flag_code(ok)


def cmd_enrich(cfg, args) -> int:
    C = read_nrel(cfg)
    E = embed(C)
    doc = {"restrict_embed_identity": same_nrel(restrict(E), C)}
    T = type_category(args.max_len)
    doc["types"] = len(all_types(args.max_len))
    doc["type_maps"] = sum(1 for a in T.arrows)
    target = C if C.n >= 2 else E
    X, Y = _endpoints(target, args)
    r = pushforward_functoriality(target, X, Y, args.max_len)
    doc["pushforward"] = dict(plain(r), ok=bool(r), category=target.name, source=X, target=Y)
    ok = doc["restrict_embed_identity"] and bool(r)
    emit(cfg, doc)
    return flag_code(ok)


def cmd_grothendieck(cfg, args) -> int:
    C = read_nrel(cfg)
    X, Y = _endpoints(C, args)
    G = grothendieck(C, X, Y, args.max_len)
    v = validate_category(G.ambient)
    doc = {
        "objects": len(G.ambient.objects),
        "arrows": len(G.ambient.arrows),
        "associative": v.valid,
        "violations": plain(v.violations[:10]),
    }
    emit(cfg, doc)
    return flag_code(v.valid)


def cmd_suite(cfg, args) -> int:
    if args.corpus != "bundled":
        raise UsageError("only --corpus bundled is available")
    only = [k.strip() for k in args.only.split(",")] if args.only else None

    def show(r):
        if cfg.format == "human" and not cfg.output:
            print(f"{r.key:26s} {r.status:6s} {r.seconds:7.1f}s  {r.scope}", flush=True)

    results = run_suite(progress=show, only=only)
    statuses = [r.status for r in results]
    if cfg.format == "json" or cfg.output:
        emit(cfg, {"results": [dict(key=r.key, status=r.status, scope=r.scope, seconds=round(r.seconds, 2), details=plain(r.details)) for r in results]})
    if "fail" in statuses:
        return FAILED
    return BUDGET if "budget" in statuses else OK


HANDLERS = {
    "validate": cmd_validate, "nerve": cmd_nerve, "k": cmd_k, "counit": cmd_counit, "unit": cmd_unit,
    "simplex-cat": cmd_simplex_cat, "colim-check": cmd_colim_check, "division": cmd_division,
    "delta-rel": cmd_delta_rel, "canonical-iso": cmd_canonical_iso, "homotopy": cmd_homotopy,
    "enrich": cmd_enrich, "grothendieck": cmd_grothendieck, "suite": cmd_suite,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parser() -> argparse.ArgumentParser:
    p = _Parser(prog="multirel", description="n-relative categories, multisimplicial sets and their comparison maps")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", action="append", default=[], help="JSON input file")
    p.add_argument("--trunc", type=int, default=2, help="truncation D (canonical-iso: largest degree)")
    p.add_argument("--string-bound", type=int, default=2, help="string length bound L")
    p.add_argument("--budget-len", type=int, default=8)
    p.add_argument("--budget-classes", type=int, default=200_000)
    p.add_argument("--output")
    p.add_argument("--format", default="human", choices=("human", "json"))
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--corpus", default="bundled")
    p.add_argument("--only", help="comma-separated suite keys: " + ", ".join(suite_keys()))
    p.add_argument("--max-len", type=int, default=3, help="zigzag length bound")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--convention", default="division", choices=("division", "literal"))
    p.add_argument("--p", type=int, action="append", help="homotopy: chain length (repeatable)")
    p.add_argument("--tag", choices=("v1", "w"))
    p.add_argument("--nerve", action="store_true", help="homotopy: also check the nerve map k")
    p.add_argument("--realize", action="store_true", help="k: realize the presentation")
    p.add_argument("--max-total", type=int, help="unit: skip indices of larger total degree")
    p.add_argument("--no-naturality", action="store_true")
    p.add_argument("--check", action="store_true", help="division: check the projection criterion")
    return p


def run(argv=None) -> int:
    try:
        args = parser().parse_args(argv)
        cfg = RunConfig(
            args.command, args.input, args.trunc, args.string_bound, args.budget_len,
            args.budget_classes, args.output, args.format, args.n,
        )
        if cfg.budget_len < 0 or cfg.budget_classes < 0:
            raise UsageError("budget fields must be nonnegative")
        return HANDLERS[cfg.command](cfg, args)
    except (UsageError, StructureError) as exc:
        print(f"multirel: {exc}", file=sys.stderr)
        return USAGE
    except ResourceError as exc:
        print(f"multirel: budget exhausted: {exc}", file=sys.stderr)
        return BUDGET


def main():
    sys.exit(run())

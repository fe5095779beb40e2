"""Command-line front end over canonical documents.

Exit codes: 0 = success or passing check, 1 = a check failed (the report
says why), 2 = input error. Reports are deterministic — identical inputs
produce identical bytes — and result documents are written atomically.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import catelem, composition, installers, states, topology
from .assignments import BUILTIN_COMBINERS, emergent
from .core import ElementId, Hyperstructure, validate
from .document import Document, parse, serialize
from .errors import (
    HyperstructError,
    NotATopology,
    NotComposable,
    NotGluable,
    SchemaError,
    UnknownElement,
)

#: Errors that mean "the check failed" rather than "the input is broken".
CHECK_FAILURES = (NotComposable, NotGluable, NotATopology)


def _read_document(path: str) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from None
    return parse(text)


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent) or ".", prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, str(target))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _need(doc: Document, section: str):
    got = getattr(doc, section)
    if got is None:
        raise SchemaError(f"document lacks a {section} section")
    return got


def _element_ref(h: Hyperstructure, ref: str) -> ElementId:
    """Parse a level:id reference; integer ids win over equal-looking strings."""
    if ":" not in ref:
        raise SchemaError(f"element reference {ref!r} must look like level:id")
    lvl_s, raw = ref.split(":", 1)
    try:
        lvl = int(lvl_s)
    except ValueError:
        raise SchemaError(f"element reference {ref!r} must start with a level index") from None
    try:
        as_int = int(raw)
    except ValueError:
        as_int = None
    if as_int is not None and h.has_element(ElementId(lvl, as_int)):
        return ElementId(lvl, as_int)
    if h.has_element(ElementId(lvl, raw)):
        return ElementId(lvl, raw)
    raise UnknownElement(f"no element {raw!r} at level {lvl}")


def _combiner(name: str | None):
    if name is None:
        return None
    got = BUILTIN_COMBINERS.get(name)
    if got is None:
        raise SchemaError(f"unknown combiner {name!r}; choose from {sorted(BUILTIN_COMBINERS)}")
    return got


def _tower_summary(h: Hyperstructure) -> list[str]:
    lines = [f"level-0 elements: {len(h.levels[0])}"]
    for i in range(1, h.order + 1):
        lines.append(f"level-{i} bonds: {len(h.levels[i])}")
    return lines


def _print(lines) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _emit(out: str | None, doc: Document) -> None:
    if out:
        _write_atomic(out, serialize(doc))


# -- commands --------------------------------------------------------------------


def cmd_validate(args) -> int:
    doc = _read_document(args.input)
    rep = validate(_need(doc, "hyperstructure"))
    _print(rep.lines())
    return 0 if rep.passed else 1


def _load_install_payload(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise SchemaError(f"install payload: line {e.lineno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise SchemaError("install payload must be a JSON object")
    return data


def cmd_install(args) -> int:
    if args.kind == "brunnian":
        if not args.branching:
            raise SchemaError("install brunnian needs --branching, e.g. --branching 3,3")
        try:
            branching = [int(x) for x in args.branching.split(",") if x != ""]
        except ValueError:
            raise SchemaError(f"bad --branching value {args.branching!r}") from None
        h = installers.make_brunnian_tower(branching)
    else:
        if not args.input:
            raise SchemaError(f"install {args.kind} needs an input payload file")
        payload = _load_install_payload(args.input)
        if args.kind == "relation":
            for key in payload:
                if key not in {"components", "tuples"}:
                    raise SchemaError(f"install relation: unknown field {key!r}")
            h = installers.from_relation(payload.get("components", []), [tuple(t) for t in payload.get("tuples", [])])
        elif args.kind == "hypergraph":
            for key in payload:
                if key not in {"vertices", "edges"}:
                    raise SchemaError(f"install hypergraph: unknown field {key!r}")
            h = installers.from_hypergraph(payload.get("vertices", []), payload.get("edges", []))
        else:
            for key in payload:
                if key not in {"vertices", "simplices"}:
                    raise SchemaError(f"install simplicial: unknown field {key!r}")
            h = installers.from_simplicial_complex(
                payload.get("vertices", []), payload.get("simplices", []), graded=args.graded
            )
    lines = [f"installed: {args.kind}"] + _tower_summary(h)
    _print(lines)
    _emit(args.out, Document(hyperstructure=h))
    return 0


def cmd_compose(args) -> int:
    doc = _read_document(args.input)
    h = _need(doc, "hyperstructure")
    a = _element_ref(h, args.a)
    b = _element_ref(h, args.b)
    comb = _combiner(args.combiner)
    if a.level == b.level:
        h2, eid = composition.compose(h, a, b, args.p, args.mode, comb, args.id)
    else:
        h2, eid = composition.compose_cross(h, a, b, args.p, args.mode, comb, args.id)
    bond = h2.bond(eid)
    _print(
        [
            f"composed: {eid!r}",
            f"support: {bond.support!r}",
            f"property: {bond.property}",
        ]
    )
    doc.hyperstructure = h2
    _emit(args.out, doc)
    return 0


def cmd_fuse(args) -> int:
    doc = _read_document(args.input)
    h = _need(doc, "hyperstructure")
    a = _element_ref(h, args.a)
    b = _element_ref(h, args.b)
    h2, eid = composition.fuse(h, a, b, args.k, _combiner(args.combiner), args.id)
    rec = h2.fusion_log[-1]
    bond = h2.bond(eid)
    _print(
        [
            f"fused: {eid!r}",
            f"signature: (k={rec.k}, m={rec.m}, n={rec.n})",
            f"support: {bond.support!r}",
            f"property: {bond.property}",
        ]
    )
    doc.hyperstructure = h2
    _emit(args.out, doc)
    return 0


def cmd_topology_check(args) -> int:
    doc = _read_document(args.input)
    h = _need(doc, "hyperstructure")
    j = _need(doc, "topology")
    exhaustive = True if args.exhaustive else (False if args.sampled is not None else None)
    seed = args.sampled if args.sampled is not None else 0
    levels = [args.level] if args.level is not None else list(range(h.order + 1))
    lines: list[str] = []
    ok = True
    for i in levels:
        rep = topology.is_grothendieck_topology(h, j, i, exhaustive=exhaustive, seed=seed)
        ok = ok and rep.passed
        lines.extend(rep.lines())
    _print(lines)
    return 0 if ok else 1


def cmd_globalize(args) -> int:
    doc = _read_document(args.input)
    h = _need(doc, "hyperstructure")
    sec = _need(doc, "states")
    if sec.base is None or sec.connectors is None:
        raise SchemaError("globalize needs states.base and states.connectors")
    lam = states.globalize(h, sec.base, sec.connectors)
    lines = ["globalized"]
    for i, level in enumerate(lam.per_level):
        shown = ", ".join(f"{e.id}={level[e]!r}" for e in sorted(level, key=lambda e: e.key))
        lines.append(f"level {i}: {shown}")
    if sec.tower is not None:
        rep = states.validate_lambda(h, sec.tower, lam)
        lines.extend(rep.lines())
        if not rep.passed:
            _print(lines)
            return 1
    _print(lines)
    sec.assignment = lam
    _emit(args.out, doc)
    return 0


def cmd_localize(args) -> int:
    doc = _read_document(args.input)
    h = _need(doc, "hyperstructure")
    sec = _need(doc, "states")
    if sec.top is None or sec.co_connectors is None:
        raise SchemaError("localize needs states.top and states.co_connectors")
    lam = states.localize(h, sec.top, sec.co_connectors)
    lines = ["localized"]
    for i, level in enumerate(lam.per_level):
        shown = ", ".join(f"{e.id}={level[e]!r}" for e in sorted(level, key=lambda e: e.key))
        lines.append(f"level {i}: {shown}")
    _print(lines)
    sec.assignment = lam
    _emit(args.out, doc)
    return 0


def cmd_emergent(args) -> int:
    doc = _read_document(args.input)
    h = _need(doc, "hyperstructure")
    comb = _combiner(args.combiner) or BUILTIN_COMBINERS["union"]
    s1 = h.support_at(args.level, _split_ids(h, args.level, args.s1))
    s2 = h.support_at(args.level, _split_ids(h, args.level, args.s2))
    got = emergent(h.omegas[args.level], s1, s2, comb)
    _print([f"emergent: {', '.join(sorted(got)) if got else '(none)'}"])
    return 0


def _split_ids(h: Hyperstructure, level: int, joined: str):
    out = []
    for part in joined.split(","):
        if part == "":
            continue
        try:
            as_int = int(part)
        except ValueError:
            as_int = None
        if as_int is not None and h.has_element(ElementId(level, as_int)):
            out.append(as_int)
        else:
            out.append(part)
    return out


def cmd_nerve(args) -> int:
    doc = _read_document(args.input)
    cat = _need(doc, "category")
    data = catelem.nerve(cat, args.max_dim)
    lines = []
    for k in range(data.max_dim + 1):
        names = []
        for s in data.simplices[k]:
            names.append(str(s) if not isinstance(s, tuple) else "(" + ",".join(str(x) for x in s) + ")")
        lines.append(f"dim {k}: " + (" ".join(sorted(names)) if names else "(none)"))
    _print(lines)
    if args.out:
        flat = _flatten_nerve(data)
        doc.simplicial = flat
        _emit(args.out, doc)
    return 0


def _flatten_nerve(data: catelem.SimplicialData) -> catelem.SimplicialData:
    """Rename chain simplices to strings so the nerve can live in a document."""

    def name(s) -> str:
        return str(s) if not isinstance(s, tuple) else "(" + ",".join(str(x) for x in s) + ")"

    simplices = tuple(tuple(sorted(name(s) for s in dim)) for dim in data.simplices)
    faces = {}
    for sid, fs in data.faces.items():
        faces[name(sid)] = tuple(None if f is None else name(f) for f in fs)
    return catelem.SimplicialData(max_dim=data.max_dim, simplices=simplices, faces=faces)


def cmd_betti(args) -> int:
    doc = _read_document(args.input)
    if doc.simplicial is not None:
        data = doc.simplicial
    else:
        cat = _need(doc, "category")
        data = catelem.nerve(cat, args.max_dim + 1)
    numbers = catelem.betti_gf2(data, args.max_dim)
    _print(["betti: " + " ".join(str(n) for n in numbers)])
    return 0


def cmd_brunnian(args) -> int:
    doc = _read_document(args.input)
    h = _need(doc, "hyperstructure")
    lines = _tower_summary(h)
    per_level = []
    for i in range(1, h.order + 1):
        count = sum(1 for b in h.bonds_at(i) if installers.is_brunnian_bond(h, b.id))
        per_level.append(count)
        lines.append(f"level-{i} brunnian bonds: {count}")
    lines.append(f"order: {installers.brunnian_order(h)}")
    _print(lines)
    return 0


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperstruct", description="Level towers of bonds: build, check, fold, measure.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, help="check the tower laws of a document")
    sp.add_argument("input")

    sp = add("install", cmd_install, help="build a tower from a relation, hypergraph, complex or branching list")
    sp.add_argument("kind", choices=["relation", "hypergraph", "simplicial", "brunnian"])
    sp.add_argument("input", nargs="?", help="JSON payload (not used by brunnian)")
    sp.add_argument("--branching", help="comma-separated block sizes, e.g. 3,3")
    sp.add_argument("--graded", action="store_true", help="stack simplices as bonds of their faces")
    sp.add_argument("--out")

    sp = add("compose", cmd_compose, help="glue two bonds compatible at a probe level")
    sp.add_argument("input")
    sp.add_argument("--a", required=True, help="bond reference level:id")
    sp.add_argument("--b", required=True, help="bond reference level:id")
    sp.add_argument("--p", type=int, required=True, help="probe level")
    sp.add_argument("--mode", choices=["strict", "weak"], default="strict")
    sp.add_argument("--combiner", help="union | disjoint-union | tensor-pairs")
    sp.add_argument("--id", required=True, help="identifier for the composite")
    sp.add_argument("--out")

    sp = add("fuse", cmd_fuse, help="weak-mode gluing, logged with its level signature")
    sp.add_argument("input")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--k", type=int, required=True, help="gluing level")
    sp.add_argument("--combiner")
    sp.add_argument("--id", required=True)
    sp.add_argument("--out")

    sp = add("topology-check", cmd_topology_check, help="check the covering axioms of the document's topology")
    sp.add_argument("input")
    sp.add_argument("--level", type=int)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--sampled", type=int, metavar="SEED")

    sp = add("globalize", cmd_globalize, help="fold base states up to the top of the tower")
    sp.add_argument("input")
    sp.add_argument("--out")

    sp = add("localize", cmd_localize, help="distribute top states down the tower")
    sp.add_argument("input")
    sp.add_argument("--out")

    sp = add("emergent", cmd_emergent, help="tokens at a union not produced by the combiner")
    sp.add_argument("input")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--s1", required=True, help="comma-separated element ids")
    sp.add_argument("--s2", required=True)
    sp.add_argument("--combiner", default="union")

    sp = add("nerve", cmd_nerve, help="composable chains of the document's category")
    sp.add_argument("input")
    sp.add_argument("--max-dim", type=int, default=2, dest="max_dim")
    sp.add_argument("--out")

    sp = add("betti", cmd_betti, help="GF(2) homology ranks of simplicial data or a category's nerve")
    sp.add_argument("input")
    sp.add_argument("--max-dim", type=int, default=2, dest="max_dim")

    sp = add("brunnian", cmd_brunnian, help="per-level counts and the Brunnian nesting order")
    sp.add_argument("input")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CHECK_FAILURES as e:
        lines = [f"error: {e.kind}", e.message]
        if isinstance(e, NotATopology) and e.report is not None:
            lines.extend(e.report.lines())
        _print(lines)
        return 1
    except HyperstructError as e:
        _print([f"error: {e.kind}", e.message])
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""JSON instance and category files (grammar in ``docs/instance-format.md``)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .homs import Category, auto_category, derived_lengths, pointwise_lengths, validate_hom
from .instances import BUILTINS
from .lengths import LengthFn, distance_table, validate_length
from .monoid import Monoid, free_semilattice, validate_monoid
from .numeric import render
from .setmodel import build_set_instance


class FormatError(ValueError):
    pass


@dataclass
class Instance:
    monoid: Monoid
    length: LengthFn | None
    name: str = ""
    set_instance: object = None


def _number(v):
    if isinstance(v, bool):
        raise FormatError(f"not a number: {v!r}")
    if isinstance(v, float):
        return v
    try:
        return Fraction(v) if isinstance(v, int) else Fraction(str(v).strip())
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a number: {v!r}") from None


def parse_instance(doc: dict, name: str = "") -> Instance:
    """Instance from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise FormatError("an instance must be a JSON object")
    join = doc.get("join")
    mode = doc.get("mode", "monotone")
    set_inst = None
    if isinstance(join, dict) and "powerset" in join:
        names = [str(g) for g in join["powerset"]]
        m = free_semilattice(len(names), names)
    elif isinstance(join, dict) and "sets" in join:
        weights = join.get("weights")
        if weights is not None:
            weights = {_point(p): _number(w) for p, w in weights.items()}
        set_inst = build_set_instance([[_point(p) for p in s] for s in join["sets"]], weights)
        m = set_inst.monoid
    elif isinstance(join, list):
        if "elements" not in doc or "neutral" not in doc:
            raise FormatError("a join matrix needs 'elements' and 'neutral'")
        m = validate_monoid([str(e) for e in doc["elements"]], str(doc["neutral"]),
                            [[str(c) for c in row] for row in join])
    else:
        raise FormatError("'join' must be a matrix, {'powerset': [...]} or {'sets': [...]}")
    length = None
    if "length" in doc:
        raw = doc["length"]
        if not isinstance(raw, dict):
            raise FormatError("'length' must map element labels to numbers")
        length = validate_length(m, {str(k): _number(v) for k, v in raw.items()}, mode)
    elif set_inst is not None:
        length = set_inst.length if mode == "monotone" else set_inst.length.with_mode(mode)
    return Instance(m, length, name, set_inst)


def _point(p):
    """Points are kept as ints when they look like ints, so labels sort numerically."""
    if isinstance(p, int):
        return p
    s = str(p)
    return int(s) if s.lstrip("-").isdigit() else s


def load_instance(source) -> Instance:
    """A builtin name (``fix_p2``, ``fix_bad``), a path to a JSON file, or a decoded dict."""
    if isinstance(source, dict):
        return parse_instance(source)
    if isinstance(source, str) and source in BUILTINS:
        m, length = BUILTINS[source]()
        return Instance(m, length, source)
    path = Path(source)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return parse_instance(doc, path.stem)


def serialize_instance(m: Monoid, length: LengthFn | None = None) -> dict:
    doc = m.to_dict()
    if length is not None:
        doc["length"] = {e: render(v) for e, v in zip(m.elements, length.values)}
        doc["mode"] = length.mode
    return doc


def dumps_instance(m: Monoid, length: LengthFn | None = None) -> str:
    return json.dumps(serialize_instance(m, length), indent=2)


def same_instance(a: Instance, b: Instance) -> bool:
    """Equal up to the order of the element list."""
    ma, mb = a.monoid, b.monoid
    if set(ma.elements) != set(mb.elements) or ma.neutral != mb.neutral:
        return False
    for x in ma.elements:
        for y in ma.elements:
            if ma.join(x, y) != mb.join(x, y):
                return False
    if (a.length is None) != (b.length is None):
        return False
    if a.length is None:
        return True
    return a.length.mode == b.length.mode and all(a.length[x] == b.length[x] for x in ma.elements)


# -- categories ----------------------------------------------------------------

def _key(text):
    a, sep, b = text.partition("->")
    if not sep:
        raise FormatError(f"hom-set keys look like 'A->B', got {text!r}")
    return a.strip(), b.strip()


def parse_category(doc: dict) -> Category:
    """Category from a decoded JSON document.

    ``objects`` maps names to instances.  ``morphisms`` is ``"auto"`` (every
    hom) or maps ``"A->B"`` to lists of image lists / label dicts.
    ``lengths`` is ``"pointwise"`` (sum of object lengths of the images),
    ``"operator"`` (the monotone envelope of operator lengths, from the
    objects' ``d`` tables) or maps ``"A->B"`` to one number per hom, in the
    order of that hom set.  Homs whose operator length is infinite are dropped
    unless ``"drop_unbounded": false``.
    """
    if not isinstance(doc, dict) or "objects" not in doc:
        raise FormatError("a category needs 'objects'")
    insts = {str(k): parse_instance(v, str(k)) for k, v in doc["objects"].items()}
    objects = {k: v.monoid for k, v in insts.items()}
    object_tables = {k: distance_table(v.length) for k, v in insts.items() if v.length is not None}
    if len(object_tables) < len(objects):
        object_tables = None
    morphisms = doc.get("morphisms", "auto")
    if morphisms == "auto":
        cat = auto_category(objects, object_tables if doc.get("drop_unbounded", True) else None)
        if object_tables is not None:
            cat.object_tables = object_tables
    else:
        homsets = {}
        for key, maps in morphisms.items():
            a, b = _key(key)
            homsets[(a, b)] = [validate_hom(objects[a], objects[b], mp) for mp in maps]
        cat = Category(objects, homsets, object_tables=object_tables)
    lengths = doc.get("lengths")
    if lengths is None:
        return cat
    if lengths == "pointwise":
        return cat.with_lengths(pointwise_lengths(cat, {k: v.length for k, v in insts.items()}))
    if lengths == "operator":
        if object_tables is None:
            raise FormatError("operator lengths need a length on every object")
        return cat.with_lengths(derived_lengths(cat))
    if isinstance(lengths, dict):
        return cat.with_lengths({_key(k): [_number(x) for x in v] for k, v in lengths.items()})
    raise FormatError("'lengths' must be 'pointwise', 'operator' or a mapping")


def load_category(source) -> Category:
    if isinstance(source, dict):
        return parse_category(source)
    path = Path(source)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return parse_category(doc)

"""Model and descriptor file formats.

One versioned JSON schema serves both hand-written fixtures and generator
output. Unknown fields are rejected so fixtures stay honest; integers are
bit-exact, no floats anywhere. Schema problems raise SchemaError with
field context (CLI exit code 2); a file that parses but describes an
invalid model is the CLI's exit-code-1 path via validation.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional

from .errors import SchemaError
from .fibration import Fiber, FiberComponent, FibrationModel
from .lattice import (
    KIND_CANONICAL,
    KIND_FIBER,
    KINDS,
    CurveClass,
    IntersectionLattice,
)
from .pencil import (
    BasePoint,
    BranchRef,
    MemberComponent,
    PencilDescriptor,
    SpecialMember,
    TransitRef,
)

FORMAT_VERSION = 1


def _require_keys(obj: dict, field: str, required: tuple, optional: tuple = ()) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(field, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in required and key not in optional:
            raise SchemaError(f"{field}.{key}", "unknown field")
    for key in required:
        if key not in obj:
            raise SchemaError(f"{field}.{key}", "missing field")


def _int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, f"expected an integer, got {value!r}")
    return value


def _str(value, field: str) -> str:
    if not isinstance(value, str) or not value:
        raise SchemaError(field, f"expected a nonempty string, got {value!r}")
    return value


def _list(value, field: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(field, f"expected a list, got {type(value).__name__}")
    return value


def loads_document(data: bytes | str, field: str = "<document>") -> dict:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(field, f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(field, f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError(field, "top-level value must be an object")
    return doc


# ---------------------------------------------------------------------------
# model files


def parse_model_doc(doc: dict) -> FibrationModel:
    _require_keys(
        doc,
        "model",
        ("format_version", "surface", "base", "declared_genus", "classes", "pairing", "fibers"),
    )
    version = _int(doc["format_version"], "model.format_version")
    if version != FORMAT_VERSION:
        raise SchemaError("model.format_version", f"unsupported version {version}")

    _require_keys(doc["surface"], "surface", ("chi_O", "K_self"))
    chi_o = _int(doc["surface"]["chi_O"], "surface.chi_O")
    k_self = _int(doc["surface"]["K_self"], "surface.K_self")

    _require_keys(doc["base"], "base", ("genus",))
    g_y = _int(doc["base"]["genus"], "base.genus")
    genus = _int(doc["declared_genus"], "model.declared_genus")

    classes: List[CurveClass] = []
    ids_seen = set()
    for i, entry in enumerate(_list(doc["classes"], "classes")):
        field = f"classes[{i}]"
        _require_keys(entry, field, ("id", "kind"), ("genus",))
        cid = _str(entry["id"], f"{field}.id")
        kind = _str(entry["kind"], f"{field}.kind")
        if kind not in KINDS:
            raise SchemaError(f"{field}.kind", f"unknown kind {kind!r}")
        if cid in ids_seen:
            raise SchemaError(f"{field}.id", f"duplicate class id {cid!r}")
        ids_seen.add(cid)
        genus_field = entry.get("genus")
        if genus_field is not None:
            genus_field = _int(genus_field, f"{field}.genus")
        if kind == KIND_CANONICAL and cid != "K":
            raise SchemaError(f"{field}.id", "the canonical class must have id 'K'")
        if kind == KIND_FIBER and cid != "C":
            raise SchemaError(f"{field}.id", "the generic fiber class must have id 'C'")
        classes.append(CurveClass(cid, kind, genus=genus_field))
    for required_id, what in (("K", "canonical"), ("C", "generic fiber")):
        if required_id not in ids_seen:
            raise SchemaError("classes", f"missing the {what} class {required_id!r}")

    _require_keys(doc["pairing"], "pairing", ("ids", "matrix"))
    order = [_str(v, f"pairing.ids[{i}]") for i, v in enumerate(_list(doc["pairing"]["ids"], "pairing.ids"))]
    if sorted(order) != sorted(ids_seen):
        raise SchemaError("pairing.ids", "must list exactly the declared class ids")
    matrix = _list(doc["pairing"]["matrix"], "pairing.matrix")
    if len(matrix) != len(order):
        raise SchemaError("pairing.matrix", f"expected {len(order)} rows, got {len(matrix)}")
    rows = []
    for r, row in enumerate(matrix):
        row = _list(row, f"pairing.matrix[{r}]")
        if len(row) != len(order):
            raise SchemaError(f"pairing.matrix[{r}]", f"expected {len(order)} entries, got {len(row)}")
        rows.append([_int(v, f"pairing.matrix[{r}][{c}]") for c, v in enumerate(row)])
    for r in range(len(order)):
        for c in range(r + 1, len(order)):
            if rows[r][c] != rows[c][r]:
                raise SchemaError(
                    f"pairing.matrix[{r}][{c}]",
                    f"asymmetric entry: {rows[r][c]} vs matrix[{c}][{r}] = {rows[c][r]}",
                )
    ki = order.index("K")
    if rows[ki][ki] != k_self:
        raise SchemaError("surface.K_self", f"declared {k_self} but matrix has K*K = {rows[ki][ki]}")

    pairing = {a: {b: rows[i][j] for j, b in enumerate(order)} for i, a in enumerate(order)}

    fibers: List[Fiber] = []
    for i, entry in enumerate(_list(doc["fibers"], "fibers")):
        field = f"fibers[{i}]"
        _require_keys(entry, field, ("index", "components"))
        index = _int(entry["index"], f"{field}.index")
        comps = []
        for j, comp in enumerate(_list(entry["components"], f"{field}.components")):
            cfield = f"{field}.components[{j}]"
            _require_keys(comp, cfield, ("class", "multiplicity"))
            cid = _str(comp["class"], f"{cfield}.class")
            if cid not in ids_seen:
                raise SchemaError(f"{cfield}.class", f"unknown class id {cid!r}")
            mult = _int(comp["multiplicity"], f"{cfield}.multiplicity")
            comps.append(FiberComponent(index, j, cid, mult))
        fibers.append(Fiber(index, tuple(comps)))

    lattice = IntersectionLattice(classes, pairing)
    return FibrationModel(lattice, base_genus=g_y, genus=genus, chi_o=chi_o, fibers=fibers)


def parse_model(data: bytes | str) -> FibrationModel:
    """Parse a model document; SchemaError on any malformed field."""
    return parse_model_doc(loads_document(data))


def model_to_doc(model: FibrationModel) -> dict:
    lat = model.lattice
    order = sorted(lat.ids)
    for a in order:
        for b in order:
            if not isinstance(lat.entry(a, b), int):
                raise SchemaError(
                    "pairing.matrix", f"entry ({a!r}, {b!r}) = {lat.entry(a, b)} is not an integer"
                )
    classes = []
    for cid in order:
        cls = lat.curve_class(cid)
        entry: Dict[str, object] = {"id": cls.id, "kind": cls.kind}
        if cls.genus is not None:
            entry["genus"] = cls.genus
        classes.append(entry)
    return {
        "format_version": FORMAT_VERSION,
        "surface": {"chi_O": model.chi_o, "K_self": lat.entry("K", "K")},
        "base": {"genus": model.base_genus},
        "declared_genus": model.genus,
        "classes": classes,
        "pairing": {"ids": order, "matrix": [[lat.entry(a, b) for b in order] for a in order]},
        "fibers": [
            {
                "index": fiber.index,
                "components": [
                    {"class": c.class_id, "multiplicity": c.multiplicity} for c in fiber.components
                ],
            }
            for fiber in model.fibers
        ],
    }


def emit_model(model: FibrationModel) -> str:
    return json.dumps(model_to_doc(model), indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# pencil descriptor files


def parse_descriptor_doc(doc: dict) -> PencilDescriptor:
    _require_keys(
        doc,
        "descriptor",
        ("format_version", "degree"),
        ("special_members", "base_points", "saddles", "foliation_degree"),
    )
    version = _int(doc["format_version"], "descriptor.format_version")
    if version != FORMAT_VERSION:
        raise SchemaError("descriptor.format_version", f"unsupported version {version}")
    degree = _int(doc["degree"], "descriptor.degree")
    fol = doc.get("foliation_degree")
    if fol is not None:
        fol = _int(fol, "descriptor.foliation_degree")

    members = []
    for i, entry in enumerate(_list(doc.get("special_members", []), "special_members")):
        field = f"special_members[{i}]"
        _require_keys(entry, field, ("label", "components"))
        comps = []
        for j, comp in enumerate(_list(entry["components"], f"{field}.components")):
            cfield = f"{field}.components[{j}]"
            _require_keys(comp, cfield, ("id", "degree", "multiplicity"))
            comps.append(
                MemberComponent(
                    _str(comp["id"], f"{cfield}.id"),
                    _int(comp["degree"], f"{cfield}.degree"),
                    _int(comp["multiplicity"], f"{cfield}.multiplicity"),
                )
            )
        members.append(SpecialMember(_str(entry["label"], f"{field}.label"), tuple(comps)))

    def branch(value, field) -> BranchRef:
        if value == "generic":
            return BranchRef()
        _require_keys(value, field, ("member", "component"))
        return BranchRef(_str(value["member"], f"{field}.member"), _str(value["component"], f"{field}.component"))

    points = []
    for i, entry in enumerate(_list(doc.get("base_points", []), "base_points")):
        field = f"base_points[{i}]"
        _require_keys(entry, field, ("id", "p", "q"), ("x_branch", "y_branch", "passes"))
        transits = []
        for j, tr in enumerate(_list(entry.get("passes", []), f"{field}.passes")):
            tfield = f"{field}.passes[{j}]"
            _require_keys(tr, tfield, ("member", "component"), ("branches",))
            transits.append(
                TransitRef(
                    _str(tr["member"], f"{tfield}.member"),
                    _str(tr["component"], f"{tfield}.component"),
                    _int(tr.get("branches", 1), f"{tfield}.branches"),
                )
            )
        points.append(
            BasePoint(
                id=_str(entry["id"], f"{field}.id"),
                p=_int(entry["p"], f"{field}.p"),
                q=_int(entry["q"], f"{field}.q"),
                x_branch=branch(entry.get("x_branch", "generic"), f"{field}.x_branch"),
                y_branch=branch(entry.get("y_branch", "generic"), f"{field}.y_branch"),
                transits=tuple(transits),
            )
        )

    saddles = []
    for i, entry in enumerate(_list(doc.get("saddles", []), "saddles")):
        field = f"saddles[{i}]"
        _require_keys(entry, field, ("p", "q"))
        saddles.append((_int(entry["p"], f"{field}.p"), _int(entry["q"], f"{field}.q")))

    return PencilDescriptor(
        degree=degree,
        members=tuple(members),
        base_points=tuple(points),
        saddles=tuple(saddles),
        foliation_degree=fol,
    )


def parse_descriptor(data: bytes | str) -> PencilDescriptor:
    return parse_descriptor_doc(loads_document(data, "<descriptor>"))

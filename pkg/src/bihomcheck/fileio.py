"""Bundle and report file formats.

Bundles are UTF-8 JSON with a top-level "schema" field:

    {
      "schema": 1,
      "dim": 2,
      "basis": ["e1", "e2"],
      "ring": {"params": ["k1", "k2"], "constraints": ["(k1 - 1)*k2"]},
      "ops":  {"mul": {"arity": 2, "entries": [[0, 0, 1, "1"]]}},
      "maps": {"a": [["1", "0"], ["k2", "1"]]},
      "provenance": {...},          # optional, free-form
      "catalog": {...}              # optional, catalog entries only
    }

An ops entry [i1, .., ir, k, coeff] says: the k-th coordinate of the value on
basis tuple (i1, .., ir) is coeff. Maps are row-major matrices of coefficient
strings (column j = image of basis vector j). Coefficients use the scalar
grammar. Unknown top-level or section fields are rejected.

Reports serialize with sorted keys and sorted verdicts so a fixed input and
seed produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import __version__
from .bundle import AlgebraBundle, Ring
from .errors import BundleFormatError, UnknownParameter
from .linear import BasisSpace, LinMap, MultiOp
from .scalars import Scalar, parse_scalar

SCHEMA_VERSION = 1

_TOP_FIELDS = {"schema", "dim", "basis", "ring", "ops", "maps", "provenance", "catalog"}
_RING_FIELDS = {"params", "constraints"}
_OP_FIELDS = {"arity", "entries"}


def bundle_from_dict(data: dict) -> AlgebraBundle:
    if not isinstance(data, dict):
        raise BundleFormatError("bundle file must contain a JSON object")
    unknown = set(data) - _TOP_FIELDS
    if unknown:
        raise BundleFormatError(f"unknown fields: {sorted(unknown)}")
    if data.get("schema") != SCHEMA_VERSION:
        raise BundleFormatError(
            f"unsupported schema {data.get('schema')!r} (supported: {SCHEMA_VERSION})"
        )
    try:
        labels = list(data["basis"])
        dim = int(data["dim"])
    except KeyError as exc:
        raise BundleFormatError(f"missing field {exc.args[0]!r}")
    if len(labels) != dim:
        raise BundleFormatError("dim does not match the number of basis labels")
    space = BasisSpace(labels)

    ring_data = data.get("ring", {})
    unknown = set(ring_data) - _RING_FIELDS
    if unknown:
        raise BundleFormatError(f"unknown ring fields: {sorted(unknown)}")
    params = tuple(ring_data.get("params", ()))
    constraints = []
    for text in ring_data.get("constraints", ()):
        scalar = parse_scalar(text, params)
        num, den = scalar.as_fraction_pair()
        if not den.is_const():
            raise BundleFormatError(f"constraint {text!r} is not a polynomial")
        constraints.append(num.scale(1 / den.const_value()))
    ring = Ring(params, tuple(constraints))

    ops = {}
    for name, spec in data.get("ops", {}).items():
        unknown = set(spec) - _OP_FIELDS
        if unknown:
            raise BundleFormatError(f"unknown op fields in {name!r}: {sorted(unknown)}")
        arity = int(spec["arity"])
        constants: dict = {}
        for entry in spec.get("entries", ()):
            if len(entry) != arity + 2:
                raise BundleFormatError(f"op {name!r}: entry {entry!r} has wrong length")
            *idx, comp, coeff = entry
            idx = tuple(int(i) for i in idx)
            comp = int(comp)
            if any(i < 0 or i >= dim for i in idx) or not 0 <= comp < dim:
                raise BundleFormatError(f"op {name!r}: index out of range in {entry!r}")
            vec = constants.setdefault(idx, [Scalar.zero(params)] * dim)
            vec[comp] = vec[comp] + parse_scalar(str(coeff), params)
        ops[name] = MultiOp(space, params, arity, {k: tuple(v) for k, v in constants.items()})

    maps = {}
    for name, rows in data.get("maps", {}).items():
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise BundleFormatError(f"map {name!r}: matrix must be {dim}x{dim}")
        maps[name] = LinMap(
            space, params, [[parse_scalar(str(c), params) for c in row] for row in rows]
        )

    return AlgebraBundle(space, ring, ops, maps, data.get("provenance"))


def bundle_to_dict(bundle: AlgebraBundle) -> dict:
    return bundle.canonical_dict()


def load_bundle(path) -> AlgebraBundle:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleFormatError(f"{path}: invalid JSON at line {exc.lineno}")
    try:
        return bundle_from_dict(data)
    except UnknownParameter as exc:
        raise BundleFormatError(f"{path}: {exc}")


def save_bundle(bundle: AlgebraBundle, path) -> None:
    Path(path).write_text(
        json.dumps(bundle_to_dict(bundle), indent=2, ensure_ascii=False, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )


def report_to_json(report, bundle_hash: str | None = None) -> str:
    data = report.to_dict()
    data["tool_version"] = __version__
    if bundle_hash is not None:
        data["bundle_hash"] = bundle_hash
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def save_report(report, path, bundle_hash: str | None = None) -> None:
    Path(path).write_text(report_to_json(report, bundle_hash), encoding="utf-8")


def load_identity_file(path) -> dict:
    """Identities of a .idl file keyed by their `# id:` names; files without
    id comments get positional names decl0, decl1, ..."""
    from .dsl import parse_identities, parse_identity_file

    text = Path(path).read_text(encoding="utf-8")
    if "# id:" in text:
        return parse_identity_file(text)
    return {f"decl{i}": ident for i, ident in enumerate(parse_identities(text))}

"""Loading knot-data JSON files into a :class:`KnotTable`."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Iterable

import jsonschema

from .knots import (
    INF,
    KnotAttributes,
    KnotError,
    KnotTable,
    Named,
    Tri,
    _parse_sum,
)

_BOUND = {"type": ["integer", "null"], "minimum": 0}
_FLAG = {"enum": ["yes", "no", "unknown"]}

RECORD_SCHEMA = {
    "type": "object",
    "required": ["id", "provenance"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "pattern": r"^\d+[a-z]?_\d+$"},
        "aliases": {"type": "array", "items": {"type": "string"}},
        "genus": {
            "oneOf": [
                _BOUND,
                {"type": "array", "items": _BOUND, "minItems": 2, "maxItems": 2},
            ]
        },
        "tunnel_lower": _BOUND,
        "tunnel_upper": _BOUND,
        "delta_upper": _BOUND,
        "fibered": _FLAG,
        "positive_braid_closure": _FLAG,
        "composite": {"type": "boolean"},
        "provenance": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}

DATA_SCHEMA = {"type": "array", "items": RECORD_SCHEMA}

_FIELDS = (
    "aliases",
    "genus",
    "tunnel_lower",
    "tunnel_upper",
    "delta_upper",
    "fibered",
    "positive_braid_closure",
)


class KnotDataError(KnotError):
    pass


def _given(record: dict, name: str) -> bool:
    value = record.get(name)
    return value not in (None, [], "unknown")


def _record_attributes(record: dict) -> KnotAttributes:
    prov = record["provenance"]
    for name in _FIELDS:
        if _given(record, name) and name not in prov:
            raise KnotDataError(f"{record['id']}: field {name!r} has no provenance")
    genus = record.get("genus")
    if isinstance(genus, list):
        g_lo, g_hi = genus
    else:
        g_lo = g_hi = genus
    provenance = {k: v for k, v in prov.items() if k != "aliases"}
    if genus is None:
        provenance.pop("genus", None)
        provenance["genus_lower"] = "non-trivial knot"

    def bound(value, default):
        return default if value is None else value

    try:
        return KnotAttributes(
            genus_lower=bound(g_lo, 1),
            genus_upper=bound(g_hi, INF),
            tunnel_lower=bound(record.get("tunnel_lower"), 1),
            tunnel_upper=bound(record.get("tunnel_upper"), INF),
            delta_upper=bound(record.get("delta_upper"), INF),
            fibered=Tri(record.get("fibered", "unknown")),
            positive_braid_closure=Tri(record.get("positive_braid_closure", "unknown")),
            provenance=provenance,
        )
    except KnotError as exc:
        raise KnotDataError(f"{record['id']}: {exc}") from None


def load_records(records: list[dict], table: KnotTable | None = None) -> KnotTable:
    """Add knot records to ``table`` (a fresh one by default).

    Records are added first, aliases second, so an alias may mention any
    label defined anywhere in the batch.
    """
    try:
        jsonschema.validate(records, DATA_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise KnotDataError(f"invalid knot data: {exc.message}") from None
    table = table if table is not None else KnotTable()
    for record in records:
        atom = Named(record["id"])
        table.add_record(atom, _record_attributes(record))
        if record.get("composite"):
            table.composite_labels.add(record["id"])
    known = table.labels
    for record in records:
        source = record["provenance"].get("aliases", "")
        for text in record.get("aliases", []):
            atoms, pos = _parse_sum(text, 0, known)
            if pos != len(text) or len(atoms) != 1:
                raise KnotDataError(f"{record['id']}: alias {text!r} must be a single atom")
            table.add(atoms[0], Named(record["id"]), source)
    return table


def load_files(paths: Iterable[str | Path], table: KnotTable | None = None) -> KnotTable:
    table = table if table is not None else KnotTable()
    records = []
    for path in paths:
        with open(path) as fh:
            records.extend(json.load(fh))
    return load_records(records, table)


def seed_records() -> list[dict]:
    text = resources.files("knothost.resources").joinpath("seed_knots.json").read_text()
    return json.loads(text)


def seed_table() -> KnotTable:
    """The shipped knot table."""
    return load_records(seed_records())

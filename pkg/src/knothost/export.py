"""JSON and DOT serialization of knowledge bases, quivers and reports."""

from __future__ import annotations

import json
import math
from typing import Any

from .engine import (
    AttrKey,
    HostsKey,
    Judgment,
    KnowledgeBase,
    Polarity,
    RuleConfig,
    Step,
    provenance_chain,
)
from .knots import INF, KnotAttributes, KnotTable, KnotType, Tri, parse_knot
from .quiver import (
    CAVEAT,
    FriendshipGraph,
    HostingQuiver,
    RigidityReport,
)

ATTR_FIELDS = (
    "genus_lower",
    "genus_upper",
    "tunnel_lower",
    "tunnel_upper",
    "delta_upper",
    "fibered",
    "positive_braid_closure",
)


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _num(value):
    return None if value == INF else int(value)


def _unnum(value):
    return INF if value is None else value


# -- keys and steps ---------------------------------------------------------


def key_to_json(key) -> dict:
    if isinstance(key, HostsKey):
        return {"kind": "hosts", "host": str(key.host), "guest": str(key.guest)}
    return {"kind": "attr", "knot": str(key.knot), "field": key.name}


def key_from_json(data: dict, table: KnotTable):
    if data["kind"] == "hosts":
        return HostsKey(parse_knot(data["host"], table), parse_knot(data["guest"], table))
    return AttrKey(parse_knot(data["knot"], table), data["field"])


def step_to_json(step: Step) -> dict:
    value = step.value.value if isinstance(step.value, Polarity) else step.value
    return {
        "rule": step.rule,
        "conclusion": key_to_json(step.key),
        "value": value,
        "premises": [key_to_json(p) for p in step.premises],
        "facts": list(step.facts),
        "citation": step.citation,
        "text": str(step),
    }


def step_from_json(data: dict, table: KnotTable) -> Step:
    key = key_from_json(data["conclusion"], table)
    value = Polarity(data["value"]) if isinstance(key, HostsKey) else int(data["value"])
    return Step(
        rule=data["rule"],
        key=key,
        value=value,
        premises=tuple(key_from_json(p, table) for p in data["premises"]),
        facts=tuple(data["facts"]),
        citation=data["citation"],
    )


def attributes_to_json(attrs: KnotAttributes) -> dict:
    return {
        "genus_lower": _num(attrs.genus_lower),
        "genus_upper": _num(attrs.genus_upper),
        "tunnel_lower": _num(attrs.tunnel_lower),
        "tunnel_upper": _num(attrs.tunnel_upper),
        "delta_upper": _num(attrs.delta_upper),
        "fibered": attrs.fibered.value,
        "positive_braid_closure": attrs.positive_braid_closure.value,
        "provenance": dict(sorted(attrs.provenance.items())),
    }


def attributes_from_json(data: dict) -> KnotAttributes:
    return KnotAttributes(
        genus_lower=data["genus_lower"],
        genus_upper=_unnum(data["genus_upper"]),
        tunnel_lower=data["tunnel_lower"],
        tunnel_upper=_unnum(data["tunnel_upper"]),
        delta_upper=_unnum(data["delta_upper"]),
        fibered=Tri(data["fibered"]),
        positive_braid_closure=Tri(data["positive_braid_closure"]),
        provenance=dict(data["provenance"]),
    )


# -- knowledge base ---------------------------------------------------------


def kb_to_json(kb: KnowledgeBase) -> dict:
    return {
        "universe": [str(k) for k in kb.universe],
        "rule_config": {
            "enabled": sorted(kb.config.enabled),
            "sum_depth": kb.config.sum_depth,
            "slope_bound": kb.config.slope_bound,
            "torus_cap": kb.config.torus_cap,
        },
        "saturated": kb.saturated,
        "axioms": [
            {"host": str(a.host), "guest": str(a.guest), "polarity": a.polarity.value}
            for a in kb.axioms
        ],
        "attributes": {str(k): attributes_to_json(kb.attributes[k]) for k in kb.universe},
        "attribute_steps": [
            step_to_json(kb.attribute_steps[key])
            for key in sorted(kb.attribute_steps, key=lambda a: (a.knot, a.name))
        ],
        "judgments": [
            {
                "host": str(j.host),
                "guest": str(j.guest),
                "polarity": j.polarity.value,
                "provenance": [step_to_json(s) for s in provenance_chain(kb, j.key)],
            }
            for j in kb.sorted_judgments()
        ],
        "skipped": kb.skip_counts(),
    }


def kb_from_json(data: dict, table: KnotTable) -> KnowledgeBase:
    """Rebuild a KB exported by :func:`kb_to_json` (same knot table required)."""
    cfg = data["rule_config"]
    config = RuleConfig(
        enabled=frozenset(cfg["enabled"]),
        sum_depth=cfg["sum_depth"],
        slope_bound=cfg["slope_bound"],
        torus_cap=cfg["torus_cap"],
    )
    universe = [parse_knot(s, table) for s in data["universe"]]
    kb = KnowledgeBase(universe, table, config)
    for name, attrs in data["attributes"].items():
        kb.attributes[parse_knot(name, table)] = attributes_from_json(attrs)
    for raw in data["attribute_steps"]:
        step = step_from_json(raw, table)
        kb.attribute_steps[step.key] = step
    for raw in data["judgments"]:
        step = step_from_json(raw["provenance"][-1], table)
        key = step.key
        kb.judgments[key] = Judgment(key.host, key.guest, step.value, step)
    for raw in data["axioms"]:
        key = HostsKey(parse_knot(raw["host"], table), parse_knot(raw["guest"], table))
        kb.axioms.append(kb.judgments[key])
    # only the counts of skipped derivations survive a round trip
    kb.skip_offset = dict(data.get("skipped", {}))
    kb.saturated = data["saturated"]
    if kb.saturated:
        # every pair was already examined before export
        kb._summed.update(j.key for j in kb.yes_judgments())
    return kb


def export_kb(kb: KnowledgeBase) -> str:
    return dumps(kb_to_json(kb))


def import_kb(text: str, table: KnotTable) -> KnowledgeBase:
    return kb_from_json(json.loads(text), table)


# -- DOT --------------------------------------------------------------------


def _q(k) -> str:
    return json.dumps(str(k))


def quiver_to_dot(q: HostingQuiver, show_negative: bool = False) -> str:
    lines = ["digraph hosting_quiver {", "  node [shape=box];"]
    lines += [f"  {_q(v)};" for v in q.vertices]
    for host, guest in q.edges(Tri.YES):
        lines.append(f"  {_q(host)} -> {_q(guest)};")
    if show_negative:
        for host, guest in q.edges(Tri.NO):
            lines.append(f"  {_q(host)} -> {_q(guest)} [style=dashed, color=red];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def friendship_to_dot(g: FriendshipGraph) -> str:
    lines = ["graph friendship {", "  node [shape=box];"]
    lines += [f"  {_q(v)};" for v in g.vertices]
    lines += [f"  {_q(a)} -- {_q(b)};" for a, b in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- reports ----------------------------------------------------------------


def _dist(value) -> int | None:
    return None if value == math.inf else int(value)


def rigidity_to_json(r: RigidityReport) -> dict:
    def pairs(items):
        return [{"a": str(a), "b": str(b), "proved_friends": f} for a, b, f in items]

    return {
        "label": r.label,
        "caveat": r.caveat,
        "pairs_checked": r.pairs_checked,
        "same_proved_outgoing": pairs(r.same_outgoing),
        "same_proved_incoming": pairs(r.same_incoming),
        "friendship_implies_mutual_reachability": r.friendship_implies_mutual_reachability,
        "violations": [[str(a), str(b)] for a, b in r.friendship_reachability_violations],
    }


def distances_to_json(matrix: dict[KnotType, dict[KnotType, float]]) -> dict:
    return {
        "caveat": CAVEAT + "; null means no proved friendship chain",
        "matrix": {
            str(k): {str(l): _dist(d) for l, d in row.items()} for k, row in matrix.items()
        },
    }

"""Run configuration, universe construction and the full report."""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .engine import (
    ALL_RULES,
    EngineError,
    KnowledgeBase,
    Polarity,
    RuleConfig,
    UnboundedAttributesError,
    lyon_existence,
    provenance_chain,
    prove_witness,
    saturate,
)
from .export import (
    distances_to_json,
    dumps,
    export_kb,
    friendship_to_dot,
    quiver_to_dot,
    rigidity_to_json,
)
from .knotdata import load_files, seed_table
from .knots import KnotError, KnotTable, KnotType, Torus, parse_knot, parse_knot_list
from .quiver import (
    CAVEAT,
    build_quiver,
    distance_matrix,
    friendship_components,
    friendship_graph,
    rigidity_checks,
    strongly_connected_components,
)

SEED_UNIVERSE = "3_1, 4_1, 5_1, 8_19, 3_1#3_1#3_1"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    universe_spec: list[str] = field(default_factory=lambda: [SEED_UNIVERSE])
    sum_depth: int = 3
    slope_bound: int = 12
    torus_cap: int = 12
    enabled_rules: frozenset = ALL_RULES
    data_files: list[str] = field(default_factory=list)
    use_seed_data: bool = True
    close_sums: bool = False
    add_torus: bool = False
    axioms: list[tuple[str, str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        for name in ("sum_depth", "slope_bound", "torus_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        unknown = set(self.enabled_rules) - ALL_RULES
        if unknown:
            raise ConfigError(f"unknown rule ids: {', '.join(sorted(unknown))}")
        for ax in self.axioms:
            if len(ax) != 3 or ax[2] not in ("yes", "no"):
                raise ConfigError(f"axioms need (host, guest, yes|no), got {ax!r}")

    def rule_config(self) -> RuleConfig:
        return RuleConfig(
            enabled=frozenset(self.enabled_rules),
            sum_depth=self.sum_depth,
            slope_bound=self.slope_bound,
            torus_cap=self.torus_cap,
        )

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        """Read a universe file: JSON config object, JSON list, or plain text.

        Plain text holds knot expressions separated by commas or newlines;
        lines starting with ``//`` are comments.
        """
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("//")]
            data = {"universe": [", ".join(ln.strip().rstrip(",") for ln in lines)]}
        if isinstance(data, list):
            data = {"universe": data}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object, list or text")
        known = {
            "universe": "universe_spec",
            "sum_depth": "sum_depth",
            "slope_bound": "slope_bound",
            "torus_cap": "torus_cap",
            "rules": "enabled_rules",
            "data_files": "data_files",
            "close_sums": "close_sums",
            "add_torus": "add_torus",
            "axioms": "axioms",
        }
        unknown = set(data) - set(known)
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        kwargs = {known[k]: v for k, v in data.items()}
        if "enabled_rules" in kwargs:
            kwargs["enabled_rules"] = frozenset(kwargs["enabled_rules"])
        if "axioms" in kwargs:
            kwargs["axioms"] = [
                (a["host"], a["guest"], a["polarity"]) if isinstance(a, dict) else tuple(a)
                for a in kwargs["axioms"]
            ]
        base = Path(path).parent
        if "data_files" in kwargs:
            kwargs["data_files"] = [str(base / f) for f in kwargs["data_files"]]
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


def load_table(config: RunConfig) -> KnotTable:
    table = seed_table() if config.use_seed_data else KnotTable()
    if config.data_files:
        load_files(config.data_files, table)
    return table


def parse_universe(
    spec: str | Sequence[str],
    table: KnotTable,
    sum_depth: int = 3,
    close_sums: bool = False,
    torus_cap: int | None = None,
) -> set[KnotType]:
    """Canonical vertex set from knot expressions.

    ``close_sums`` adds every connected sum of up to ``sum_depth`` atoms drawn
    from the listed knots; ``torus_cap`` adds every torus knot T(p,q) with
    q <= torus_cap.
    """
    texts = [spec] if isinstance(spec, str) else list(spec)
    universe: set[KnotType] = set()
    for text in texts:
        universe.update(parse_knot_list(text, table))
    if torus_cap is not None:
        for p in range(2, torus_cap + 1):
            for q in range(p + 1, torus_cap + 1):
                if math.gcd(p, q) == 1:
                    universe.add(KnotType((table.resolve(Torus(p, q)),)))
    if close_sums:
        atoms = sorted({a for k in universe for a in k.summands}, key=lambda a: a.sort_key())
        for size in range(2, sum_depth + 1):
            for combo in itertools.combinations_with_replacement(atoms, size):
                universe.add(KnotType(combo))
    return universe


def build_kb(config: RunConfig, table: KnotTable | None = None) -> KnowledgeBase:
    table = table or load_table(config)
    universe = parse_universe(
        config.universe_spec,
        table,
        config.sum_depth,
        config.close_sums,
        config.torus_cap if config.add_torus else None,
    )
    kb = KnowledgeBase(universe, table, config.rule_config())
    for host, guest, polarity in config.axioms:
        try:
            kb.assume(parse_knot(host, table), parse_knot(guest, table), polarity)
        except EngineError as exc:
            raise ConfigError(f"axiom {host} -> {guest}: {exc}") from None
    return kb


def run(config: RunConfig, table: KnotTable | None = None) -> KnowledgeBase:
    return saturate(build_kb(config, table))


# ---------------------------------------------------------------------------
# report


def witness_entries(kb: KnowledgeBase) -> list[dict]:
    out = []
    for k in kb.universe:
        entry = {"knot": str(k)}
        try:
            witness, _, judgment = prove_witness(k, kb)
        except UnboundedAttributesError as exc:
            entry.update(witness=None, status="unbounded", detail=str(exc))
        except EngineError as exc:
            entry.update(witness=None, status="failed", detail=str(exc))
        else:
            entry.update(
                witness=str(witness),
                status="refuted",
                detail=f"{judgment} by {judgment.step.rule}",
            )
        out.append(entry)
    return out


def report_data(kb: KnowledgeBase) -> dict:
    q = build_quiver(kb)
    g = friendship_graph(q)
    by_rule = Counter(j.step.rule for j in kb.judgments.values())
    by_polarity = Counter(j.polarity.value for j in kb.judgments.values())
    return {
        "caveat": CAVEAT,
        "universe": [str(k) for k in kb.universe],
        "judgment_counts": {
            "total": len(kb.judgments),
            "by_rule": dict(sorted(by_rule.items())),
            "by_polarity": dict(sorted(by_polarity.items())),
        },
        "judgments": [
            {
                "host": str(j.host),
                "guest": str(j.guest),
                "polarity": j.polarity.value,
                "rule": j.step.rule,
                "chain": [str(s) for s in provenance_chain(kb, j.key)],
            }
            for j in kb.sorted_judgments()
            if j.host != j.guest
        ],
        "friendship_edges": [[str(a), str(b)] for a, b in g.edges()],
        "friendship_components": [[str(k) for k in c] for c in friendship_components(g)],
        "distances": distances_to_json(distance_matrix(g)),
        "strongly_connected_components": [
            [str(k) for k in c] for c in strongly_connected_components(q)
        ],
        "rigidity": rigidity_to_json(rigidity_checks(q)),
        "witnesses": witness_entries(kb),
        "lyon": [str(lyon_existence(k, kb)) for k in kb.universe],
        "skipped": kb.skip_counts(),
    }


def summary_text(data: dict) -> str:
    lines = [f"universe ({len(data['universe'])}): {', '.join(data['universe'])}"]
    counts = data["judgment_counts"]
    lines.append(
        f"judgments: {counts['total']} "
        + "("
        + ", ".join(f"{k}={v}" for k, v in counts["by_polarity"].items())
        + ")"
    )
    lines.append("  by rule: " + ", ".join(f"{k}={v}" for k, v in counts["by_rule"].items()))
    lines.append("non-reflexive judgments:")
    for j in data["judgments"]:
        lines.append(f"  Hosts({j['host']},{j['guest']})={j['polarity']}  [{j['rule']}]")
    lines.append("friendship edges:")
    lines.extend(f"  {a} <-> {b}" for a, b in data["friendship_edges"])
    if not data["friendship_edges"]:
        lines.append("  (none)")
    lines.append("strongly connected components:")
    lines.extend("  {" + ", ".join(c) + "}" for c in data["strongly_connected_components"])
    lines.append("universal-host witnesses:")
    for w in data["witnesses"]:
        lines.append(f"  {w['knot']}: {w['witness'] or '-'} ({w['status']})")
    rig = data["rigidity"]
    lines.append(
        "friendship chains give mutual reachability: "
        + ("yes" if rig["friendship_implies_mutual_reachability"] else "NO")
    )
    skipped = data["skipped"]
    lines.append(
        "skipped derivations: "
        + (", ".join(f"{k}={v}" for k, v in skipped.items()) if skipped else "none")
    )
    lines.append(f"note: {data['caveat']}")
    return "\n".join(lines) + "\n"


def run_report(config: RunConfig, out_dir: str | Path, table: KnotTable | None = None) -> dict:
    """Saturate, analyse and write report.json, kb.json, quiver.dot,
    friendship.dot and summary.txt into ``out_dir``. Returns the report data."""
    kb = run(config, table)
    data = report_data(kb)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    q = build_quiver(kb)
    (out / "report.json").write_text(dumps(data))
    (out / "kb.json").write_text(export_kb(kb))
    (out / "quiver.dot").write_text(quiver_to_dot(q))
    (out / "friendship.dot").write_text(friendship_to_dot(friendship_graph(q)))
    (out / "summary.txt").write_text(summary_text(data))
    return data


__all__ = [
    "ConfigError",
    "KnotError",
    "Polarity",
    "RunConfig",
    "SEED_UNIVERSE",
    "build_kb",
    "load_table",
    "parse_universe",
    "report_data",
    "run",
    "run_report",
    "summary_text",
]

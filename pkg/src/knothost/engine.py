"""Forward-chaining deduction of hosting judgments over a finite universe.

A judgment ``Hosts(K, J) = yes`` records that J lies on a minimal genus
Seifert surface of K; ``= no`` records that it provably does not. Absence of
a judgment means *unknown*. Every judgment and every derived attribute keeps
the rule application that produced it, so full derivation chains can be
rebuilt, printed and independently re-checked with :func:`replay_chain`.

Rules
-----
R1  reflexivity: K hosts K.
R2  connected sums: K hosts J and K' hosts J' give K#K' hosts J#J'.
R3  torus monotonicity: S(T(p,q)) is contained in S(T(p',q')) when p<=p', q<=q'.
R4  trefoil slopes: the trefoil hosts every non-degenerate K(m,n) on its fiber.
R5  figure-eight: the slope (1,1) on the figure-eight fiber is the trefoil.
O1  positive braids: everything the trefoil hosts is a positive braid closure.
O2  trefoil genus: hosted knots have genus (m^2+n^2+mn-2m-2n+1)/2 for some slope.
O3  tunnel bound: t(J) <= 2 g(K) + Delta(K) whenever K hosts J.
A1  tunnel number of an n-fold connected sum is at least n.
"""

from __future__ import annotations

import enum
import functools
import itertools
import logging
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .knots import (
    INF,
    FiberSurface,
    KnotAttributes,
    KnotError,
    KnotTable,
    KnotType,
    Named,
    Slope,
    Torus,
    Tri,
    connected_sum,
    repeat_sum,
)
from .slopes import SlopePair, enumerate_primitive_pairs, inverse_genus, is_degenerate

log = logging.getLogger(__name__)


class Polarity(enum.Enum):
    YES = "yes"
    NO = "no"

    def __str__(self) -> str:
        return self.value

    @property
    def opposite(self) -> "Polarity":
        return Polarity.NO if self is Polarity.YES else Polarity.YES


CITATIONS = {
    "AX": "injected axiom",
    "R1": "a curve parallel to the boundary of a minimal genus Seifert surface represents K",
    "R2": "boundary connected sum of minimal genus surfaces is minimal (Schubert genus additivity)",
    "R3": "torus knot hosting sets grow with the parameters: S(T(p,q)) in S(T(p',q')) for p<=p', q<=q'",
    "R4": "Yamada canonical form: S(3_1) = {K(m,n) | m,n > 0 coprime} on the trefoil fiber",
    "R5": "Yamada canonical form: K(1,1) on the figure-eight fiber is the trefoil",
    "O1": "Baker: every knot on the trefoil fiber is a positive braid closure",
    "O2": "Baker/Cromwell: g(K(m,n)) = (m^2+n^2+mn-2m-2n+1)/2 has no solution at this genus",
    "O3": "tunnel bound t(J) <= h(J) <= 2g(K) + Delta(K) for J in S(K)",
    "A1": "Scharlemann-Schultens: the tunnel number of a sum of n non-trivial knots is at least n",
}

RULE_ORDER = ("R1", "R2", "R3", "R4", "R5", "A1", "O1", "O2", "O3")
ALL_RULES = frozenset(RULE_ORDER)


class EngineError(Exception):
    pass


class UnboundedAttributesError(EngineError):
    pass


class ChainError(EngineError):
    pass


# ---------------------------------------------------------------------------
# facts and derivation steps


@dataclass(frozen=True)
class HostsKey:
    host: KnotType
    guest: KnotType

    def __str__(self) -> str:
        return f"Hosts({self.host},{self.guest})"


@dataclass(frozen=True)
class AttrKey:
    knot: KnotType
    name: str

    def __str__(self) -> str:
        return f"{self.name}({self.knot})"


FactKey = Union[HostsKey, AttrKey]


@dataclass(frozen=True)
class Step:
    """One rule application.

    ``key``/``value`` name the conclusion (a polarity for hosting facts, a
    number for attributes); ``premises`` are keys of earlier conclusions;
    ``facts`` are the base data values the rule consulted.
    """

    rule: str
    key: FactKey
    value: Union[Polarity, int]
    premises: tuple[FactKey, ...] = ()
    facts: tuple[str, ...] = ()
    citation: str = ""

    def conclusion(self) -> str:
        return f"{self.key}={self.value}"

    def __str__(self) -> str:
        text = f"{self.rule} @ {self.citation}: {self.conclusion()}"
        if self.premises:
            text += " from " + ", ".join(str(p) for p in self.premises)
        if self.facts:
            text += " using " + "; ".join(self.facts)
        return text


@dataclass(frozen=True)
class Judgment:
    host: KnotType
    guest: KnotType
    polarity: Polarity
    step: Step

    @property
    def key(self) -> HostsKey:
        return HostsKey(self.host, self.guest)

    def __str__(self) -> str:
        return f"Hosts({self.host},{self.guest})={self.polarity}"


class ContradictionError(EngineError):
    """A pair acquired both polarities; carries both derivation chains."""

    def __init__(self, key: HostsKey, existing: list[Step], incoming: list[Step]):
        self.key = key
        self.chains = (existing, incoming)
        lines = [f"contradiction on {key}"]
        for label, chain in (("existing", existing), ("incoming", incoming)):
            lines.append(f"  {label} chain:")
            lines.extend(f"    {step}" for step in chain)
        super().__init__("\n".join(lines))


# ---------------------------------------------------------------------------
# knowledge base


@dataclass(frozen=True)
class RuleConfig:
    enabled: frozenset = ALL_RULES
    sum_depth: int = 3
    slope_bound: int = 12
    torus_cap: int = 12

    def __post_init__(self) -> None:
        unknown = set(self.enabled) - ALL_RULES
        if unknown:
            raise EngineError(f"unknown rule ids: {sorted(unknown)}")
        for name in ("sum_depth", "slope_bound", "torus_cap"):
            if getattr(self, name) < 1:
                raise EngineError(f"{name} must be >= 1")
        object.__setattr__(self, "enabled", frozenset(self.enabled))


def base_attributes(k: KnotType, table: KnotTable) -> KnotAttributes:
    """Attribute record of a knot type before any derivation rule runs."""
    if k.is_prime_atom:
        attrs = table.atom_attributes(k.atom)
        if attrs is None:
            return KnotAttributes(provenance={"genus_lower": "non-trivial knot"})
        return attrs
    parts = [base_attributes(KnotType((a,)), table) for a in k.summands]
    exact = all("genus" in p.provenance for p in parts)
    return KnotAttributes(
        genus_lower=sum(p.genus_lower for p in parts),
        genus_upper=sum(p.genus_upper for p in parts),
        provenance={
            "genus" if exact else "genus_lower": "genus is additive under connected sum (Schubert)"
        },
    )


class KnowledgeBase:
    """Universe, attributes and signed hosting judgments.

    Mutated only by rule applications and :meth:`assume`; treat a saturated
    instance as read-only.
    """

    def __init__(
        self,
        universe: Iterable[KnotType],
        table: KnotTable,
        config: RuleConfig | None = None,
    ):
        self.table = table
        self.config = config or RuleConfig()
        self.universe: tuple[KnotType, ...] = tuple(sorted(set(universe)))
        self._members = frozenset(self.universe)
        self.judgments: dict[HostsKey, Judgment] = {}
        self.base = {k: base_attributes(k, table) for k in self.universe}
        self.attributes = dict(self.base)
        self.attribute_steps: dict[AttrKey, Step] = {}
        self.axioms: list[Judgment] = []
        self.skipped: dict[str, set] = defaultdict(set)
        self.skip_offset: dict[str, int] = {}
        self.skip_tally: Counter = Counter()
        self.saturated = False
        # yes-facts already combined by the connected-sum rule
        self._summed: set[HostsKey] = set()
        self._splits: dict[KnotType, list[tuple[KnotType, KnotType]]] | None = None
        self.trefoil = KnotType((table.resolve(Torus(2, 3)),))
        self.figure_eight = KnotType((table.resolve(Named("4_1")),))

    def __contains__(self, k: KnotType) -> bool:
        return k in self._members

    # -- queries ----------------------------------------------------------

    def lookup(self, host: KnotType, guest: KnotType) -> Judgment | None:
        return self.judgments.get(HostsKey(host, guest))

    def status(self, host: KnotType, guest: KnotType) -> Tri:
        j = self.lookup(host, guest)
        return Tri.UNKNOWN if j is None else Tri(j.polarity.value)

    def yes_judgments(self) -> list[Judgment]:
        return [j for j in self.judgments.values() if j.polarity is Polarity.YES]

    def sorted_judgments(self) -> list[Judgment]:
        return sorted(self.judgments.values(), key=lambda j: (j.host, j.guest))

    def torus_params(self, k: KnotType) -> tuple[int, int] | None:
        return self.table.torus_params(k.atom) if k.is_prime_atom else None

    def genus_bounds(self, k: KnotType) -> tuple[int, float]:
        attrs = self.attributes.get(k) or base_attributes(k, self.table)
        return attrs.genus_lower, attrs.genus_upper

    def step_for(self, key: FactKey) -> Step | None:
        if isinstance(key, HostsKey):
            j = self.judgments.get(key)
            return j.step if j else None
        return self.attribute_steps.get(key)

    # -- mutation ---------------------------------------------------------

    def _check_member(self, *knots: KnotType) -> None:
        for k in knots:
            if k not in self._members:
                raise EngineError(f"{k} is not in the universe")

    def add(self, step: Step) -> bool:
        """Record a hosting step; returns False if the fact was already known."""
        key = step.key
        assert isinstance(key, HostsKey) and isinstance(step.value, Polarity)
        self._check_member(key.host, key.guest)
        existing = self.judgments.get(key)
        if existing is not None:
            if existing.polarity is step.value:
                return False
            raise ContradictionError(
                key, provenance_chain(self, key), self._chain_with(step)
            )
        self.judgments[key] = Judgment(key.host, key.guest, step.value, step)
        self.saturated = False
        return True

    def _chain_with(self, step: Step) -> list[Step]:
        chain: list[Step] = []
        seen: set = set()
        for p in step.premises:
            _collect(self, p, chain, seen)
        chain.append(step)
        return chain

    def set_attribute(self, step: Step, attrs: KnotAttributes) -> None:
        assert isinstance(step.key, AttrKey)
        self.attributes[step.key.knot] = attrs
        self.attribute_steps[step.key] = step
        self.saturated = False

    def assume(self, host: KnotType, guest: KnotType, polarity: Polarity | str) -> Judgment:
        """Inject an axiom. Conflicts surface during saturation."""
        polarity = Polarity(polarity) if isinstance(polarity, str) else polarity
        step = Step("AX", HostsKey(host, guest), polarity, citation=CITATIONS["AX"])
        self.add(step)
        j = self.judgments[step.key]
        self.axioms.append(j)
        return j

    def extended(self, extra: Iterable[KnotType]) -> "KnowledgeBase":
        """Fresh, unsaturated KB over a larger universe with the same axioms."""
        kb = KnowledgeBase(list(self.universe) + list(extra), self.table, self.config)
        for ax in self.axioms:
            kb.assume(ax.host, ax.guest, ax.polarity)
        return kb

    def skip_counts(self) -> dict[str, int]:
        rules = sorted(set(self.skipped) | set(self.skip_offset) | set(self.skip_tally))
        return {
            r: len(self.skipped.get(r, ())) + self.skip_offset.get(r, 0) + self.skip_tally[r]
            for r in rules
        }

    def splits(self) -> dict[KnotType, list[tuple[KnotType, KnotType]]]:
        """x -> [(u, y), ...] for every vertex u = x # y with y nonempty."""
        if self._splits is None:
            out: dict[KnotType, list] = defaultdict(list)
            for u in self.universe:
                parts = u.summands
                seen = set()
                for r in range(1, len(parts)):
                    for idx in itertools.combinations(range(len(parts)), r):
                        x = tuple(parts[i] for i in idx)
                        if x in seen:
                            continue
                        seen.add(x)
                        y = tuple(parts[i] for i in range(len(parts)) if i not in idx)
                        out[KnotType(x)].append((u, KnotType(y)))
            self._splits = dict(out)
        return self._splits


# ---------------------------------------------------------------------------
# provenance


def _collect(kb: KnowledgeBase, key: FactKey, chain: list[Step], seen: set) -> None:
    if key in seen:
        return
    seen.add(key)
    step = kb.step_for(key)
    if step is None:
        raise ChainError(f"no derivation recorded for {key}")
    for p in step.premises:
        _collect(kb, p, chain, seen)
    chain.append(step)


def provenance_chain(kb: KnowledgeBase, key: FactKey) -> list[Step]:
    """Derivation steps for ``key``, premises first, the conclusion last."""
    chain: list[Step] = []
    _collect(kb, key, chain, set())
    return chain


# ---------------------------------------------------------------------------
# rules
#
# Each rule adds what it can to the KB and returns the number of new facts.


def _hosts(rule: str, host, guest, polarity, premises=(), facts=()) -> Step:
    return Step(
        rule,
        HostsKey(host, guest),
        polarity,
        tuple(premises),
        tuple(facts),
        CITATIONS[rule],
    )


def seed_reflexivity(kb: KnowledgeBase) -> int:
    return sum(kb.add(_hosts("R1", k, k, Polarity.YES)) for k in kb.universe)


def rule_connected_sum(kb: KnowledgeBase) -> int:
    """Sum pairs of yes-facts whose host sum is a vertex.

    Semi-naive: each unordered pair of yes-facts is examined once over the
    whole saturation. Pairs whose sums leave the universe or exceed
    ``sum_depth`` are only counted.
    """
    yes = sorted(kb.yes_judgments(), key=lambda j: (j.host, j.guest))
    fresh = [j for j in yes if j.key not in kb._summed]
    rank = {j.key: i for i, j in enumerate(fresh)}
    by_host: dict[KnotType, list[Judgment]] = defaultdict(list)
    for j in yes:
        by_host[j.host].append(j)
    depth = kb.config.sum_depth
    n_fresh, n_old = len(fresh), len(yes) - len(fresh)
    considered = n_fresh * (n_fresh + 1) // 2 + n_fresh * n_old
    landed = added = 0
    splits = kb.splits()
    for a in fresh:
        for host, rest in splits.get(a.host, ()):
            for b in by_host.get(rest, ()):
                if rank.get(b.key, n_fresh) < rank[a.key]:
                    continue
                guest = connected_sum(a.guest, b.guest)
                if guest not in kb or max(len(host.summands), len(guest.summands)) > depth:
                    continue
                landed += 1
                added += kb.add(_hosts("R2", host, guest, Polarity.YES, (a.key, b.key)))
    kb.skip_tally["R2"] += considered - landed
    kb._summed.update(j.key for j in fresh)
    return added


def _torus_vertices(kb: KnowledgeBase) -> list[tuple[KnotType, tuple[int, int]]]:
    out = []
    for k in kb.universe:
        params = kb.torus_params(k)
        if params is not None:
            out.append((k, params))
    return out


def rule_torus_monotone(kb: KnowledgeBase) -> int:
    tori = _torus_vertices(kb)
    added = 0
    for j in sorted(kb.yes_judgments(), key=lambda j: (j.host, j.guest)):
        src = kb.torus_params(j.host)
        if src is None:
            continue
        p, q = src
        for target, (p2, q2) in tori:
            if target == j.host or not (p <= p2 and q <= q2):
                continue
            if q2 > kb.config.torus_cap:
                kb.skipped["R3"].add((target, j.guest))
                continue
            facts = (f"{j.host}=T({p},{q})", f"{target}=T({p2},{q2})")
            added += kb.add(_hosts("R3", target, j.guest, Polarity.YES, (j.key,), facts))
    return added


def rule_trefoil_slopes(kb: KnowledgeBase, bound: int | None = None) -> int:
    bound = bound or kb.config.slope_bound
    for k in kb.universe:
        if k.is_prime_atom and isinstance(k.atom, Slope) and k.atom.fiber is FiberSurface.TREFOIL:
            if max(k.atom.m, k.atom.n) > bound:
                kb.skipped["R4"].add(k)
    if kb.trefoil not in kb:
        return 0
    added = 0
    for s in enumerate_primitive_pairs(bound):
        if is_degenerate(s):
            continue
        atom = Slope(FiberSurface.TREFOIL, s.m, s.n)
        guest = KnotType((kb.table.resolve(atom),))
        if guest not in kb:
            continue
        facts = (f"{guest}={atom}",) if guest.atom != atom else (f"slope ({s.m},{s.n})",)
        added += kb.add(_hosts("R4", kb.trefoil, guest, Polarity.YES, facts=facts))
    return added


def rule_figure_eight(kb: KnowledgeBase) -> int:
    if kb.figure_eight not in kb or kb.trefoil not in kb:
        return 0
    fact = f"K[fig8](1,1)={kb.trefoil}"
    return int(kb.add(_hosts("R5", kb.figure_eight, kb.trefoil, Polarity.YES, facts=(fact,))))


def _attr_premise(kb: KnowledgeBase, k: KnotType, name: str) -> tuple[AttrKey, ...]:
    key = AttrKey(k, name)
    return (key,) if key in kb.attribute_steps else ()


def _attr_fact(kb: KnowledgeBase, k: KnotType, name: str, value) -> str:
    prov = kb.attributes[k].provenance
    source = prov.get(name) or prov.get(name.split("_")[0], "")
    return f"{name}({k})={_fmt(value)} [{source}]" if source else f"{name}({k})={_fmt(value)}"


def _fmt(value) -> str:
    return "inf" if value == INF else str(value)


def obstruction_positive_braid(kb: KnowledgeBase) -> int:
    if kb.trefoil not in kb:
        return 0
    added = 0
    for j in kb.universe:
        flag = kb.attributes[j].positive_braid_closure
        if flag is Tri.NO:
            fact = _attr_fact(kb, j, "positive_braid_closure", flag)
            added += kb.add(_hosts("O1", kb.trefoil, j, Polarity.NO, facts=(fact,)))
    return added


@functools.lru_cache(maxsize=None)
def _trefoil_genus_attained(g: int) -> bool:
    return any(not is_degenerate(s) for s in inverse_genus(g))


def obstruction_trefoil_genus(kb: KnowledgeBase) -> int:
    if kb.trefoil not in kb:
        return 0
    added = 0
    for j in kb.universe:
        g = kb.attributes[j].genus_exact
        if g is None or _trefoil_genus_attained(g):
            continue
        facts = (_attr_fact(kb, j, "genus", g), f"no primitive slope has genus {g}")
        added += kb.add(_hosts("O2", kb.trefoil, j, Polarity.NO, facts=facts))
    return added


def obstruction_tunnel_bound(kb: KnowledgeBase) -> int:
    added = 0
    for host in kb.universe:
        h = kb.attributes[host]
        if h.genus_upper == INF or h.delta_upper == INF:
            continue
        bound = 2 * h.genus_upper + h.delta_upper
        for guest in kb.universe:
            t = kb.attributes[guest].tunnel_lower
            if t <= bound:
                continue
            facts = (
                _attr_fact(kb, host, "genus_upper", h.genus_upper),
                _attr_fact(kb, host, "delta_upper", h.delta_upper),
                _attr_fact(kb, guest, "tunnel_lower", t),
                f"{t} > 2*{h.genus_upper}+{h.delta_upper}",
            )
            premises = _attr_premise(kb, guest, "tunnel_lower")
            added += kb.add(_hosts("O3", host, guest, Polarity.NO, premises, facts))
    return added


def derive_tunnel_lower_sums(kb: KnowledgeBase) -> int:
    added = 0
    for k in kb.universe:
        n = len(k.summands)
        attrs = kb.attributes[k]
        if n > attrs.tunnel_lower:
            step = Step(
                "A1",
                AttrKey(k, "tunnel_lower"),
                n,
                facts=(f"{k} has {n} non-trivial summands",),
                citation=CITATIONS["A1"],
            )
            kb.set_attribute(step, attrs.with_tunnel_lower(n, f"A1 @ {CITATIONS['A1']}"))
            added += 1
    return added


RULES: dict[str, Callable[[KnowledgeBase], int]] = {
    "R1": seed_reflexivity,
    "R2": rule_connected_sum,
    "R3": rule_torus_monotone,
    "R4": rule_trefoil_slopes,
    "R5": rule_figure_eight,
    "A1": derive_tunnel_lower_sums,
    "O1": obstruction_positive_braid,
    "O2": obstruction_trefoil_genus,
    "O3": obstruction_tunnel_bound,
}


def saturate(
    kb: KnowledgeBase,
    order: Sequence[str] | None = None,
    rng: random.Random | None = None,
) -> KnowledgeBase:
    """Apply the enabled rules until nothing changes.

    With ``rng`` the rule order is reshuffled on every pass; the resulting
    set of judgments does not depend on the order (all rules only add facts).
    Raises :class:`ContradictionError` if a pair gets both polarities.
    """
    rules = [r for r in (order or RULE_ORDER) if r in kb.config.enabled]
    passes = 0
    while True:
        passes += 1
        if rng is not None:
            rng.shuffle(rules)
        changed = sum(RULES[r](kb) for r in rules)
        if not changed:
            break
    kb.saturated = True
    log.debug("saturated %d vertices in %d passes", len(kb.universe), passes)
    return kb


def deduce(
    universe: Iterable[KnotType],
    table: KnotTable,
    config: RuleConfig | None = None,
    axioms: Iterable[tuple[KnotType, KnotType, Polarity | str]] = (),
) -> KnowledgeBase:
    kb = KnowledgeBase(universe, table, config)
    for host, guest, polarity in axioms:
        kb.assume(host, guest, polarity)
    return saturate(kb)


# ---------------------------------------------------------------------------
# chain replay


def _value_from(kb, established, k: KnotType, name: str):
    key = AttrKey(k, name)
    if key in established:
        return established[key]
    return getattr(kb.base.get(k) or base_attributes(k, kb.table), name)


def _check_step(kb: KnowledgeBase, step: Step, established: dict) -> None:
    for p in step.premises:
        if p not in established:
            raise ChainError(f"{step.rule}: premise {p} not established before use")
    key, rule = step.key, step.rule

    def require(cond: bool, why: str) -> None:
        if not cond:
            raise ChainError(f"{rule} does not justify {step.conclusion()}: {why}")

    if isinstance(key, AttrKey):
        require(rule == "A1" and key.name == "tunnel_lower", "unknown attribute rule")
        require(step.value == len(key.knot.summands), "summand count mismatch")
        return

    host, guest, pol = key.host, key.guest, step.value
    require(host in kb and guest in kb, "vertex outside universe")
    prem = [(p, established[p]) for p in step.premises]
    if rule == "AX":
        require(any(a.key == key and a.polarity is pol for a in kb.axioms), "not an axiom")
    elif rule == "R1":
        require(pol is Polarity.YES and host == guest, "not a self-loop")
    elif rule == "R2":
        require(pol is Polarity.YES and len(prem) == 2, "needs two premises")
        (a, va), (b, vb) = prem
        require(va is vb is Polarity.YES, "premises must be positive")
        require(connected_sum(a.host, b.host) == host, "host is not the sum")
        require(connected_sum(a.guest, b.guest) == guest, "guest is not the sum")
    elif rule == "R3":
        require(pol is Polarity.YES and len(prem) == 1, "needs one premise")
        (a, va), = prem
        src, dst = kb.torus_params(a.host), kb.torus_params(host)
        require(va is Polarity.YES and a.guest == guest, "premise mismatch")
        require(src is not None and dst is not None, "hosts must be torus knots")
        require(src[0] <= dst[0] and src[1] <= dst[1], "parameters not dominated")
    elif rule == "R4":
        require(pol is Polarity.YES and host == kb.trefoil, "host must be the trefoil")
        require(guest.is_prime_atom, "guest must be an atom")
        hits = [
            s
            for s in enumerate_primitive_pairs(kb.config.slope_bound)
            if not is_degenerate(s)
            and kb.table.resolve(Slope(FiberSurface.TREFOIL, s.m, s.n)) == guest.atom
        ]
        require(bool(hits), "guest is not a non-degenerate trefoil slope")
    elif rule == "R5":
        require(
            pol is Polarity.YES and host == kb.figure_eight and guest == kb.trefoil,
            "only the figure-eight/trefoil pair",
        )
        require(kb.table.resolve(Slope(FiberSurface.FIGURE_EIGHT, 1, 1)) == guest.atom,
                "alias K[fig8](1,1) missing")
    elif rule == "O1":
        require(pol is Polarity.NO and host == kb.trefoil, "host must be the trefoil")
        require(_value_from(kb, established, guest, "positive_braid_closure") is Tri.NO,
                "guest is not known to be a non-positive-braid knot")
    elif rule == "O2":
        require(pol is Polarity.NO and host == kb.trefoil, "host must be the trefoil")
        lo = _value_from(kb, established, guest, "genus_lower")
        hi = _value_from(kb, established, guest, "genus_upper")
        require(lo == hi, "genus not exact")
        # independent brute force over a box that provably contains every
        # solution: g(m, n) >= (max(m, n)^2 - max(m, n)) / 2
        g = lo
        box = 2
        while (box * box - box) // 2 <= g:
            box += 1
        hits = [
            (m, n)
            for m in range(1, box + 1)
            for n in range(1, box + 1)
            if (m, n) != (1, 1)
            and SlopePair(m, n).primitive
            and m * m + n * n + m * n - 2 * m - 2 * n + 1 == 2 * g
        ]
        require(not hits, f"genus {g} is attained by {hits[:3]}")
    elif rule == "O3":
        require(pol is Polarity.NO, "tunnel bound only gives non-membership")
        g = _value_from(kb, established, host, "genus_upper")
        d = _value_from(kb, established, host, "delta_upper")
        t = _value_from(kb, established, guest, "tunnel_lower")
        require(g != INF and d != INF and t > 2 * g + d, f"{t} <= 2*{g}+{d}")
    else:
        raise ChainError(f"unknown rule {rule}")


def replay_chain(kb: KnowledgeBase, chain: Sequence[Step]) -> FactKey:
    """Re-check a derivation chain against the KB's base data.

    Each step is verified from scratch (premises must have been concluded
    earlier in the chain; base attributes are read from the knot table).
    Returns the key of the final conclusion.
    """
    established: dict = {}
    for step in chain:
        _check_step(kb, step, established)
        established[step.key] = step.value
    if not chain:
        raise ChainError("empty chain")
    return chain[-1].key


# ---------------------------------------------------------------------------
# non-universality


def universal_host_witness(k: KnotType, kb: KnowledgeBase) -> KnotType:
    """A knot provably not hosted by ``k``: a sum of 2g + Delta + 1 trefoils."""
    attrs = kb.attributes.get(k) or base_attributes(k, kb.table)
    if attrs.genus_upper == INF or attrs.delta_upper == INF:
        raise UnboundedAttributesError(
            f"{k}: need finite genus and delta bounds, have "
            f"g<={_fmt(attrs.genus_upper)}, delta<={_fmt(attrs.delta_upper)}"
        )
    n = int(2 * attrs.genus_upper + attrs.delta_upper + 1)
    return repeat_sum(kb.trefoil, n)


def prove_witness(k: KnotType, kb: KnowledgeBase) -> tuple[KnotType, KnowledgeBase, Judgment]:
    """Saturate ``kb`` extended by the witness for ``k`` and return the refutation."""
    witness = universal_host_witness(k, kb)
    ext = saturate(kb.extended([witness]) if witness not in kb else kb.extended([]))
    j = ext.lookup(k, witness)
    if j is None or j.polarity is not Polarity.NO:
        raise EngineError(f"witness {witness} was not refuted for {k}")
    return witness, ext, j


@dataclass(frozen=True)
class LyonRecord:
    """Existence of a torus knot hosting ``guest`` (no construction available)."""

    guest: KnotType
    statement: str
    citation: str
    known_hosts: tuple[KnotType, ...] = field(default=())

    def __str__(self) -> str:
        text = f"{self.statement} [{self.citation}]"
        if self.known_hosts:
            text += "; proved torus hosts in KB: " + ", ".join(map(str, self.known_hosts))
        else:
            text += "; no concrete torus host is known in the KB"
        return text


def lyon_existence(guest: KnotType, kb: KnowledgeBase | None = None) -> LyonRecord:
    known: list[KnotType] = []
    if kb is not None:
        for host, _ in _torus_vertices(kb):
            if kb.status(host, guest) is Tri.YES:
                known.append(host)
    return LyonRecord(
        guest=guest,
        statement=f"some torus knot T has {guest} in S(T)",
        citation="Lyon: torus knots form a universal host family",
        known_hosts=tuple(known),
    )


__all__ = [
    "ALL_RULES",
    "CITATIONS",
    "ContradictionError",
    "EngineError",
    "Judgment",
    "KnowledgeBase",
    "KnotError",
    "LyonRecord",
    "Polarity",
    "RULE_ORDER",
    "RuleConfig",
    "Step",
    "deduce",
    "lyon_existence",
    "provenance_chain",
    "prove_witness",
    "replay_chain",
    "saturate",
    "universal_host_witness",
]

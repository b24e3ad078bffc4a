"""Graph analytics over a saturated knowledge base.

Everything here is computed *within the finite universe* and from *proved*
facts only. Unknown edges count as absent, so reachability sets are lower
bounds on the true sets and friendship distances are upper bounds on the
true distances.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .engine import KnowledgeBase
from .knots import KnotType, Tri

CAVEAT = (
    "within-universe result over proved judgments only: reachability sets are "
    "lower bounds, friendship distances are upper bounds"
)


class UnsaturatedError(Exception):
    pass


class UnknownVertexError(KeyError):
    pass


@dataclass(frozen=True)
class HostingQuiver:
    vertices: tuple[KnotType, ...]
    labels: Mapping[tuple[KnotType, KnotType], Tri]
    out_yes: Mapping[KnotType, frozenset] = field(repr=False)
    in_yes: Mapping[KnotType, frozenset] = field(repr=False)

    def edge_label(self, host: KnotType, guest: KnotType) -> Tri:
        self._require(host, guest)
        return self.labels.get((host, guest), Tri.UNKNOWN)

    def edges(self, label: Tri = Tri.YES) -> list[tuple[KnotType, KnotType]]:
        return sorted(e for e, lab in self.labels.items() if lab is label)

    def _require(self, *knots: KnotType) -> None:
        for k in knots:
            if k not in self.out_yes:
                raise UnknownVertexError(f"{k} is not a vertex")


def build_quiver(kb: KnowledgeBase) -> HostingQuiver:
    if not kb.saturated:
        raise UnsaturatedError("knowledge base must be saturated before building the quiver")
    labels = {}
    out = {v: set() for v in kb.universe}
    inc = {v: set() for v in kb.universe}
    for j in kb.judgments.values():
        labels[(j.host, j.guest)] = Tri(j.polarity.value)
        if labels[(j.host, j.guest)] is Tri.YES:
            out[j.host].add(j.guest)
            inc[j.guest].add(j.host)
    return HostingQuiver(
        vertices=kb.universe,
        labels=labels,
        out_yes={k: frozenset(v) for k, v in out.items()},
        in_yes={k: frozenset(v) for k, v in inc.items()},
    )


@dataclass(frozen=True)
class FriendshipGraph:
    vertices: tuple[KnotType, ...]
    adjacency: Mapping[KnotType, frozenset]

    def edges(self) -> list[tuple[KnotType, KnotType]]:
        return sorted((a, b) for a in self.vertices for b in self.adjacency[a] if a < b)

    def has_edge(self, a: KnotType, b: KnotType) -> bool:
        return b in self.adjacency.get(a, ())


def friendship_graph(q: HostingQuiver) -> FriendshipGraph:
    adj = {
        v: frozenset(w for w in q.out_yes[v] if w != v and v in q.out_yes[w])
        for v in q.vertices
    }
    return FriendshipGraph(q.vertices, adj)


def _bfs(adj: Mapping[KnotType, Iterable[KnotType]], source: KnotType) -> dict[KnotType, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def friendship_distance(g: FriendshipGraph, k: KnotType, l: KnotType) -> float:
    """Shortest friendship chain length over proved edges; ``math.inf`` if none."""
    for v in (k, l):
        if v not in g.adjacency:
            raise UnknownVertexError(f"{v} is not a vertex")
    return _bfs(g.adjacency, k).get(l, math.inf)


def distance_matrix(g: FriendshipGraph) -> dict[KnotType, dict[KnotType, float]]:
    out = {}
    for k in g.vertices:
        dist = _bfs(g.adjacency, k)
        out[k] = {l: dist.get(l, math.inf) for l in g.vertices}
    return out


def nth_friends(g: FriendshipGraph, k: KnotType, n: int) -> set[KnotType]:
    if n < 0:
        raise ValueError("n must be non-negative")
    if k not in g.adjacency:
        raise UnknownVertexError(f"{k} is not a vertex")
    return {v for v, d in _bfs(g.adjacency, k).items() if d == n}


def friendship_components(g: FriendshipGraph) -> list[list[KnotType]]:
    seen: set = set()
    comps = []
    for v in g.vertices:
        if v not in seen:
            comp = sorted(_bfs(g.adjacency, v))
            seen.update(comp)
            comps.append(comp)
    return comps


def s_iter(q: HostingQuiver, k: KnotType, n: int) -> set[KnotType]:
    """S^n(K): knots reached from K by exactly n hosting steps."""
    if n < 0:
        raise ValueError("n must be non-negative")
    q._require(k)
    level = {k}
    for _ in range(n):
        level = set().union(*(q.out_yes[v] for v in level))
    return level


def s_infinity(q: HostingQuiver, k: KnotType) -> set[KnotType]:
    q._require(k)
    return set(_bfs(q.out_yes, k))


def h_set(q: HostingQuiver, k: KnotType) -> set[KnotType]:
    """Proved hosts of K (K itself included once reflexivity has run)."""
    q._require(k)
    return set(q.in_yes[k])


def h_infinity(q: HostingQuiver, k: KnotType) -> set[KnotType]:
    q._require(k)
    return set(_bfs(q.in_yes, k))


def strongly_connected_components(q: HostingQuiver) -> list[list[KnotType]]:
    """Tarjan's algorithm on the yes-edge digraph, iterative."""
    index: dict[KnotType, int] = {}
    low: dict[KnotType, int] = {}
    on_stack: set = set()
    stack: list[KnotType] = []
    comps: list[list[KnotType]] = []
    counter = 0

    for root in q.vertices:
        if root in index:
            continue
        work = [(root, iter(sorted(q.out_yes[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, children = work[-1]
            for w in children:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(q.out_yes[w]))))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    return sorted(comps)


@dataclass
class RigidityReport:
    same_outgoing: list[tuple[KnotType, KnotType, bool]] = field(default_factory=list)
    same_incoming: list[tuple[KnotType, KnotType, bool]] = field(default_factory=list)
    friendship_reachability_violations: list[tuple[KnotType, KnotType]] = field(
        default_factory=list
    )
    pairs_checked: int = 0
    label: str = "within-KB evidence, not a theorem"
    caveat: str = CAVEAT

    @property
    def friendship_implies_mutual_reachability(self) -> bool:
        return not self.friendship_reachability_violations


def rigidity_checks(q: HostingQuiver) -> RigidityReport:
    """Compare proved hosting sets and test friendship against reachability.

    Pairs with identical proved outgoing (or incoming) sets are listed with a
    flag saying whether they are proved friends. Sets are compared after adding
    both endpoints, since every knot is its own guest and host: two
    reflexivity-only vertices count as identical. Equal *true* hosting sets
    would force friendship; equal proved subsets do not, hence the label.
    """
    report = RigidityReport()
    g = friendship_graph(q)
    reach = {v: s_infinity(q, v) for v in q.vertices}
    verts = list(q.vertices)
    for i, a in enumerate(verts):
        dist = _bfs(g.adjacency, a)
        for b in verts[i + 1 :]:
            friends = g.has_edge(a, b)
            pair = {a, b}
            if q.out_yes[a] | pair == q.out_yes[b] | pair:
                report.same_outgoing.append((a, b, friends))
            if q.in_yes[a] | pair == q.in_yes[b] | pair:
                report.same_incoming.append((a, b, friends))
            if b in dist and not (b in reach[a] and a in reach[b]):
                report.friendship_reachability_violations.append((a, b))
            report.pairs_checked += 1
    return report

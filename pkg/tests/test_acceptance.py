"""Acceptance suite: one marker per criterion, one summary line per criterion."""

import itertools
import math
import random

import pytest

from knothost.cli import main
from knothost.engine import (
    KnowledgeBase,
    Polarity,
    provenance_chain,
    replay_chain,
    prove_witness,
    saturate,
    universal_host_witness,
)
from knothost.export import export_kb, import_kb
from knothost.knots import KnotType, Torus, Tri, canonical, connected_sum, parse_knot, torus_genus
from knothost.quiver import (
    build_quiver,
    friendship_distance,
    friendship_graph,
    h_infinity,
    s_infinity,
)
from knothost.runner import SEED_UNIVERSE, parse_universe
from knothost.slopes import SlopePair, enumerate_primitive_pairs, inverse_genus, slope_euler, slope_genus

C1 = "seed universe proves the six headline judgments with replayable chains, no contradictions"
C2 = "friendship edge {3_1,8_19} present, {3_1,4_1} absent, distances 1 and 0"
C3 = "slope genus/Euler agree for m,n <= 50; g(1,2)=1, g(1,3)=3=g(T(3,4)), inverse_genus(2) empty"
C4 = "universal-host witness 3_1#3_1#3_1 refuted; every bounded seed vertex refutes its witness"
C5 = "property suites: confluence, torus coherence, duality, chain check, algebra, round trip"
C6 = "poison axiom Hosts(3_1,4_1)=yes aborts with exit 2 and prints both chains"

YES, NO = Polarity.YES, Polarity.NO


def facts(kb):
    return {(j.host, j.guest, j.polarity) for j in kb.judgments.values()}


# -- criterion 1 ----------------------------------------------------------------

HEADLINE = [
    ("3_1", "8_19", YES, "R4"),
    ("8_19", "3_1", YES, "R3"),
    ("4_1", "3_1", YES, "R5"),
    ("3_1", "4_1", NO, "O1"),
    ("3_1", "5_1", NO, "O2"),
    ("3_1", "3_1#3_1#3_1", NO, "O3"),
]


@pytest.mark.criterion(1, C1)
@pytest.mark.parametrize("host,guest,polarity,rule", HEADLINE)
def test_headline_judgments(table, host, guest, polarity, rule):
    kb = saturate(KnowledgeBase(parse_universe(SEED_UNIVERSE, table), table))
    h, g = parse_knot(host, table), parse_knot(guest, table)
    j = kb.lookup(h, g)
    assert j is not None and j.polarity is polarity and j.step.rule == rule
    chain = provenance_chain(kb, j.key)
    assert replay_chain(kb, chain) == j.key


@pytest.mark.criterion(1, C1)
def test_headline_chain_shapes(seed_kb, k):
    def rules(h, g):
        return [s.rule for s in provenance_chain(seed_kb, seed_kb.lookup(k(h), k(g)).key)]

    # Hosts(T(2,3),T(2,3)) lifted along T(2,3) <= T(3,4)
    assert rules("8_19", "3_1") == ["R1", "R3"]
    # tunnel number of the triple sum is at least 3 > 2*1 + 0
    assert rules("3_1", "3_1#3_1#3_1") == ["A1", "O3"]
    assert rules("3_1", "8_19") == ["R4"]
    assert seed_kb.lookup(k("3_1"), k("8_19")).step.facts == ("8_19=K[trefoil](1,3)",)


@pytest.mark.criterion(1, C1)
def test_seed_has_no_contradiction_and_no_extra_polarities(seed_kb, k):
    # every pair gets at most one polarity by construction; check the negatives are the expected ones
    negatives = {(str(j.host), str(j.guest)) for j in seed_kb.judgments.values() if j.polarity is NO}
    assert negatives == {("3_1", "4_1"), ("3_1", "5_1"), ("3_1", "3_1#3_1#3_1"), ("4_1", "3_1#3_1#3_1")}
    for j in seed_kb.judgments.values():
        assert replay_chain(seed_kb, provenance_chain(seed_kb, j.key)) == j.key


# -- criterion 2 ----------------------------------------------------------------


@pytest.mark.criterion(2, C2)
def test_seed_friendship(seed_kb, k):
    g = friendship_graph(build_quiver(seed_kb))
    assert g.has_edge(k("3_1"), k("8_19")) and g.has_edge(k("8_19"), k("3_1"))
    assert not g.has_edge(k("3_1"), k("4_1"))
    assert friendship_distance(g, k("3_1"), k("8_19")) == 1
    assert friendship_distance(g, k("3_1"), k("3_1")) == 0


# -- criterion 3 ----------------------------------------------------------------


@pytest.mark.criterion(3, C3)
def test_slope_formulas(table):
    pairs = enumerate_primitive_pairs(50)
    assert len(pairs) == sum(1 for m in range(1, 51) for n in range(1, 51) if math.gcd(m, n) == 1)
    for s in pairs:
        assert 2 * slope_genus(s) == 1 - slope_euler(s)
    assert slope_genus(SlopePair(1, 2)) == 1
    assert slope_genus(SlopePair(1, 3)) == 3 == torus_genus(3, 4)
    assert inverse_genus(2) == set()


# -- criterion 4 ----------------------------------------------------------------


@pytest.mark.criterion(4, C4)
def test_trefoil_witness(seed_kb, k):
    witness = universal_host_witness(k("3_1"), seed_kb)
    assert witness == k("3_1#3_1#3_1")
    assert seed_kb.status(k("3_1"), witness) is Tri.NO


@pytest.mark.criterion(4, C4)
def test_every_bounded_seed_vertex(seed_kb):
    checked = 0
    for v in seed_kb.universe:
        attrs = seed_kb.attributes[v]
        if attrs.genus_upper == math.inf or attrs.delta_upper == math.inf:
            continue
        witness, ext, j = prove_witness(v, seed_kb)
        assert ext.saturated and j.polarity is NO
        assert (j.host, j.guest) == (v, witness)
        assert replay_chain(ext, provenance_chain(ext, j.key)) == j.key
        checked += 1
    assert checked == 4


# -- criterion 5 ----------------------------------------------------------------

CONFLUENCE_UNIVERSE = (
    "3_1, 4_1, 5_1, 8_19, 5_2, 6_2, T(2,7), K[trefoil](2,3), "
    "3_1#3_1, 3_1#4_1, 3_1#8_19, 8_19#8_19, 3_1#3_1#3_1"
)


@pytest.mark.criterion(5, C5)
def test_confluence_twenty_seeds(table):
    u = parse_universe(CONFLUENCE_UNIVERSE, table)
    for seed in range(20):
        a = saturate(KnowledgeBase(u, table), rng=random.Random(2 * seed))
        b = saturate(KnowledgeBase(u, table), rng=random.Random(2 * seed + 1))
        assert facts(a) == facts(b)


@pytest.mark.criterion(5, C5)
def test_torus_coherence_up_to_seven(table):
    u = parse_universe("3_1, 4_1, 5_2, 6_2", table, torus_cap=7)
    kb = saturate(KnowledgeBase(u, table))
    tori = {}
    for p in range(2, 8):
        for q in range(p + 1, 8):
            if math.gcd(p, q) == 1:
                tori[(p, q)] = KnotType((table.resolve(Torus(p, q)),))
    yes = {t: {j.guest for j in kb.yes_judgments() if j.host == t} for t in tori.values()}
    for (p, q), a in tori.items():
        for (p2, q2), b in tori.items():
            if p <= p2 and q <= q2:
                assert yes[a] <= yes[b]


@pytest.mark.criterion(5, C5)
def test_duality_and_friendship_chains_on_seed(seed_kb):
    q = build_quiver(seed_kb)
    g = friendship_graph(q)
    for a in q.vertices:
        for b in q.vertices:
            assert (b in s_infinity(q, a)) == (a in h_infinity(q, b))
            if friendship_distance(g, a, b) < math.inf:
                assert b in s_infinity(q, a) and a in s_infinity(q, b)


@pytest.mark.criterion(5, C5)
def test_algebra_over_ten_atoms(table):
    names = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "8_19", "T(2,7)", "K[trefoil](2,3)", "K[fig8](1,2)"]
    atoms = [parse_knot(n, table) for n in names]
    assert len(set(atoms)) == 10
    for a in atoms:
        assert canonical(a, table) == a and parse_knot(str(a), table) == a
    for a, b in itertools.product(atoms, repeat=2):
        ab = connected_sum(a, b)
        assert ab == connected_sum(b, a)
        assert parse_knot(str(ab), table) == ab
    for a, b, c in itertools.product(atoms, repeat=3):
        assert connected_sum(connected_sum(a, b), c) == connected_sum(a, connected_sum(b, c))


@pytest.mark.criterion(5, C5)
def test_round_trip_byte_exact(seed_kb, table):
    text = export_kb(seed_kb)
    assert export_kb(import_kb(text, table)) == text


# -- criterion 6 ----------------------------------------------------------------


@pytest.mark.criterion(6, C6)
def test_poison_axiom(capsys):
    code = main(["deduce", "--universe", SEED_UNIVERSE, "--assume", "3_1", "4_1", "yes"])
    err = capsys.readouterr().err
    assert code == 2
    assert "AX @" in err
    assert "O1 @" in err and "not a positive braid" in err
    assert "Hosts(3_1,4_1)" in err

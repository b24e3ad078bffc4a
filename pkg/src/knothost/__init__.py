"""Deduction and graph analytics for the hosting relation between knots.

``K -> J`` (K hosts J) when J is represented by a simple closed curve on a
minimal genus Seifert surface of K.
"""

from .engine import (
    ContradictionError,
    Judgment,
    KnowledgeBase,
    Polarity,
    RuleConfig,
    deduce,
    lyon_existence,
    provenance_chain,
    prove_witness,
    replay_chain,
    saturate,
    universal_host_witness,
)
from .knotdata import load_files, load_records, seed_table
from .knots import (
    FiberSurface,
    KnotAttributes,
    KnotTable,
    KnotType,
    Named,
    Slope,
    Torus,
    Tri,
    connected_sum,
    genus_bounds,
    parse_knot,
    parse_knot_list,
    resolve_alias,
    torus_genus,
)
from .quiver import (
    build_quiver,
    friendship_distance,
    friendship_graph,
    h_infinity,
    h_set,
    nth_friends,
    rigidity_checks,
    s_infinity,
    s_iter,
    strongly_connected_components,
)
from .slopes import (
    SlopePair,
    enumerate_primitive_pairs,
    identify_slope_knot,
    inverse_genus,
    slope_euler,
    slope_genus,
)

__version__ = "0.1.0"

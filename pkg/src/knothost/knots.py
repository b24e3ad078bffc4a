"""Knot types: atoms, connected sums, alias tables and attribute records.

A knot type is a sorted multiset of atoms. Atoms come in three flavours:

* ``Named("4_1")`` -- a label from the knot-data file,
* ``Torus(p, q)`` -- a torus knot, normalized so that ``2 <= p < q``,
* ``Slope(fiber, m, n)`` -- the curve of class ``m[a] + n[b]`` on a genus-one
  fiber surface.

Textual grammar::

    3_1            T(2,3)         K[trefoil](1,3)        K[fig8](1,1)
    3_1#3_1#4_1    (connected sums, order irrelevant)

Chirality is ignored throughout: ``3_1`` names both trefoils.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

INF = math.inf


class KnotError(Exception):
    """Base class for knot-model errors."""


class KnotParseError(KnotError, ValueError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class AliasConflictError(KnotError):
    pass


class MissingAttributeError(KnotError, LookupError):
    pass


class FiberSurface(enum.Enum):
    TREFOIL = "trefoil"
    FIGURE_EIGHT = "fig8"

    def __str__(self) -> str:
        return self.value


class Tri(enum.Enum):
    """Three-valued flag."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class Named:
    label: str

    def sort_key(self) -> tuple:
        parts = re.split(r"(\d+)", self.label)
        return (0, tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p))

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Torus:
    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = sorted((self.p, self.q))
        if p < 1:
            raise KnotError(f"torus parameters must be positive, got T({self.p},{self.q})")
        if math.gcd(p, q) != 1:
            raise KnotError(f"T({self.p},{self.q}) is not a knot: gcd(p,q) != 1")
        if p < 2:
            raise KnotError(f"T({self.p},{self.q}) is the trivial knot")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def sort_key(self) -> tuple:
        return (1, self.p, self.q)

    def __str__(self) -> str:
        return f"T({self.p},{self.q})"


@dataclass(frozen=True)
class Slope:
    fiber: FiberSurface
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise KnotError(f"slope coordinates must be positive, got ({self.m},{self.n})")
        if math.gcd(self.m, self.n) != 1:
            raise KnotError(f"slope ({self.m},{self.n}) is not primitive")

    @property
    def degenerate(self) -> bool:
        # K(1,1) on the trefoil fiber has genus 0
        return self.fiber is FiberSurface.TREFOIL and (self.m, self.n) == (1, 1)

    def sort_key(self) -> tuple:
        return (2, list(FiberSurface).index(self.fiber), self.m, self.n)

    def __str__(self) -> str:
        return f"K[{self.fiber}]({self.m},{self.n})"


KnotAtom = Union[Named, Torus, Slope]


def atom_key(atom: KnotAtom) -> tuple:
    return atom.sort_key()


# ---------------------------------------------------------------------------
# knot types


@dataclass(frozen=True)
class KnotType:
    """Connected sum of one or more atoms, stored in canonical (sorted) order.

    Construct through :func:`parse_knot`, :func:`canonical` or :func:`connected_sum`
    so that atoms are alias-resolved first.
    """

    summands: tuple[KnotAtom, ...]

    def __post_init__(self) -> None:
        if not self.summands:
            raise KnotError("a knot type needs at least one summand")
        object.__setattr__(self, "summands", tuple(sorted(self.summands, key=atom_key)))

    @property
    def is_prime_atom(self) -> bool:
        return len(self.summands) == 1

    @property
    def atom(self) -> KnotAtom:
        if len(self.summands) != 1:
            raise KnotError(f"{self} is a connected sum, not an atom")
        return self.summands[0]

    def sort_key(self) -> tuple:
        return (len(self.summands), tuple(atom_key(a) for a in self.summands))

    def __lt__(self, other: "KnotType") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "#".join(str(a) for a in self.summands)


def connected_sum(a: KnotType, b: KnotType) -> KnotType:
    return KnotType(a.summands + b.summands)


def repeat_sum(k: KnotType, n: int) -> KnotType:
    if n < 1:
        raise KnotError("need at least one copy")
    return KnotType(k.summands * n)


# ---------------------------------------------------------------------------
# alias table


class AliasTable:
    """Partition of atoms into alias classes, each with one canonical member.

    Atoms that never appear in the table are their own class.
    """

    def __init__(self) -> None:
        self._canon: dict[KnotAtom, KnotAtom] = {}
        self._members: dict[KnotAtom, list[KnotAtom]] = {}
        self.provenance: dict[KnotAtom, str] = {}

    def add(self, alias: KnotAtom, canonical: KnotAtom, provenance: str = "") -> None:
        canonical = self.resolve(canonical)
        current = self._canon.get(alias)
        if current is not None and current != canonical:
            raise AliasConflictError(
                f"{alias} is already an alias of {current}, cannot also alias {canonical}"
            )
        if alias in self._members and alias != canonical:
            raise AliasConflictError(f"{alias} is canonical for its own class; cannot re-alias")
        self._canon[canonical] = canonical
        self._members.setdefault(canonical, [canonical])
        if alias != canonical and alias not in self._members[canonical]:
            self._members[canonical].append(alias)
        self._canon[alias] = canonical
        if provenance:
            self.provenance[alias] = provenance

    def resolve(self, atom: KnotAtom) -> KnotAtom:
        return self._canon.get(atom, atom)

    def aliases_of(self, atom: KnotAtom) -> list[KnotAtom]:
        return list(self._members.get(self.resolve(atom), [self.resolve(atom)]))

    def torus_params(self, atom: KnotAtom) -> tuple[int, int] | None:
        """(p, q) if the atom's alias class contains a torus knot."""
        for member in self.aliases_of(atom):
            if isinstance(member, Torus):
                return member.p, member.q
        return None

    def atoms(self) -> list[KnotAtom]:
        return sorted(self._canon, key=atom_key)

    def __contains__(self, atom: KnotAtom) -> bool:
        return atom in self._canon


def resolve_alias(atom: KnotAtom, aliases: AliasTable) -> KnotAtom:
    return aliases.resolve(atom)


def canonical(k: KnotType, aliases: AliasTable) -> KnotType:
    return KnotType(tuple(aliases.resolve(a) for a in k.summands))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    \s*(?:
        (?P<named>\d+[a-z]?_\d+)
      | T\(\s*(?P<tp>\d+)\s*,\s*(?P<tq>\d+)\s*\)
      | K\[(?P<fiber>[a-z0-9]+)\]\(\s*(?P<sm>\d+)\s*,\s*(?P<sn>\d+)\s*\)
    )\s*""",
    re.VERBOSE,
)


def _parse_atom(text: str, pos: int, known: Iterable[str] | None) -> tuple[KnotAtom, int]:
    match = _TOKEN.match(text, pos)
    if match is None:
        raise KnotParseError("expected a knot atom", text, pos)
    start = pos + len(text[pos:]) - len(text[pos:].lstrip())
    try:
        if match.group("named"):
            label = match.group("named")
            if known is not None and label not in known:
                raise KnotParseError(f"unknown knot label {label!r}", text, start)
            atom: KnotAtom = Named(label)
        elif match.group("tp"):
            atom = Torus(int(match.group("tp")), int(match.group("tq")))
        else:
            try:
                fiber = FiberSurface(match.group("fiber"))
            except ValueError:
                raise KnotParseError(
                    f"unknown fiber surface {match.group('fiber')!r}", text, start
                ) from None
            atom = Slope(fiber, int(match.group("sm")), int(match.group("sn")))
            if atom.degenerate:
                raise KnotParseError(f"{atom} is the trivial knot", text, start)
    except KnotParseError:
        raise
    except KnotError as exc:
        raise KnotParseError(str(exc), text, start) from None
    return atom, match.end()


def _parse_sum(text: str, pos: int, known) -> tuple[list[KnotAtom], int]:
    atoms = []
    atom, pos = _parse_atom(text, pos, known)
    atoms.append(atom)
    while pos < len(text) and text[pos] == "#":
        atom, pos = _parse_atom(text, pos + 1, known)
        atoms.append(atom)
    return atoms, pos


def parse_knot(
    text: str, aliases: AliasTable | None = None, known: Iterable[str] | None = None
) -> KnotType:
    """Parse one knot expression into a canonical :class:`KnotType`.

    ``known`` restricts Named labels; by default the canonical labels of the
    alias table are accepted when a table is given, anything otherwise.
    """
    aliases = aliases or AliasTable()
    if known is None and isinstance(aliases, KnotTable):
        known = aliases.labels
    atoms, pos = _parse_sum(text, 0, known)
    if pos != len(text):
        raise KnotParseError("unexpected trailing input", text, pos)
    return KnotType(tuple(aliases.resolve(a) for a in atoms))


def parse_knot_list(
    text: str, aliases: AliasTable | None = None, known: Iterable[str] | None = None
) -> list[KnotType]:
    """Parse a comma-separated list of knot expressions."""
    aliases = aliases or AliasTable()
    if known is None and isinstance(aliases, KnotTable):
        known = aliases.labels
    if not text.strip():
        return []
    out = []
    pos = 0
    while True:
        atoms, pos = _parse_sum(text, pos, known)
        out.append(KnotType(tuple(aliases.resolve(a) for a in atoms)))
        if pos == len(text):
            return out
        if text[pos] != ",":
            raise KnotParseError("expected ',' or '#'", text, pos)
        pos += 1


# ---------------------------------------------------------------------------
# attributes


@dataclass(frozen=True)
class KnotAttributes:
    genus_lower: int = 1
    genus_upper: float = INF
    tunnel_lower: int = 1
    tunnel_upper: float = INF
    delta_upper: float = INF
    fibered: Tri = Tri.UNKNOWN
    positive_braid_closure: Tri = Tri.UNKNOWN
    provenance: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.genus_lower < 0 or self.genus_lower > self.genus_upper:
            raise KnotError(f"bad genus bounds [{self.genus_lower}, {self.genus_upper}]")
        if self.tunnel_lower < 0 or self.tunnel_lower > self.tunnel_upper:
            raise KnotError(f"bad tunnel bounds [{self.tunnel_lower}, {self.tunnel_upper}]")
        if self.delta_upper < 0:
            raise KnotError("delta bound must be non-negative")

    @property
    def genus_exact(self) -> int | None:
        return self.genus_lower if self.genus_lower == self.genus_upper else None

    def with_tunnel_lower(self, value: int, provenance: str) -> "KnotAttributes":
        prov = dict(self.provenance)
        prov["tunnel_lower"] = provenance
        return KnotAttributes(
            genus_lower=self.genus_lower,
            genus_upper=self.genus_upper,
            tunnel_lower=value,
            tunnel_upper=max(self.tunnel_upper, value),
            delta_upper=self.delta_upper,
            fibered=self.fibered,
            positive_braid_closure=self.positive_braid_closure,
            provenance=prov,
        )


FIBERED_DELTA = (
    "fibered: the fiber is the unique minimal genus surface and its complement "
    "F x I is a handlebody, so delta = 0"
)


def torus_genus(p: int, q: int) -> int:
    """Genus (p-1)(q-1)/2 of the torus knot T(p,q)."""
    t = Torus(p, q)
    return (t.p - 1) * (t.q - 1) // 2


class KnotTable(AliasTable):
    """Alias table plus per-atom attribute records loaded from knot data."""

    def __init__(self) -> None:
        super().__init__()
        self.records: dict[KnotAtom, KnotAttributes] = {}
        self.composite_labels: set[str] = set()

    @property
    def labels(self) -> set[str]:
        return {a.label for a in self.atoms() if isinstance(a, Named)} | {
            a.label for a in self.records if isinstance(a, Named)
        }

    def add_record(self, atom: Named, attrs: KnotAttributes) -> None:
        if atom in self.records:
            raise AliasConflictError(f"duplicate knot record {atom}")
        self.add(atom, atom)
        self.records[atom] = attrs

    def atom_attributes(self, atom: KnotAtom) -> KnotAttributes | None:
        """Data for a canonical atom, falling back on closed formulas."""
        atom = self.resolve(atom)
        if atom in self.records:
            return self.records[atom]
        if isinstance(atom, Torus):
            g = torus_genus(atom.p, atom.q)
            src = "torus knot genus (p-1)(q-1)/2"
            return KnotAttributes(
                genus_lower=g,
                genus_upper=g,
                tunnel_upper=1,
                delta_upper=0,
                fibered=Tri.YES,
                positive_braid_closure=Tri.YES,
                provenance={
                    "genus": src,
                    "tunnel_upper": "torus knots have tunnel number one",
                    "delta_upper": FIBERED_DELTA,
                    "fibered": "torus knots are fibered",
                    "positive_braid_closure": "T(p,q) closes the positive braid (s1...s_{p-1})^q",
                },
            )
        if isinstance(atom, Slope) and atom.fiber is FiberSurface.TREFOIL:
            from .slopes import SlopePair, slope_genus

            g = slope_genus(SlopePair(atom.m, atom.n))
            return KnotAttributes(
                genus_lower=g,
                genus_upper=g,
                positive_braid_closure=Tri.YES,
                provenance={
                    "genus": "Baker: genus of K(m,n) = (m^2+n^2+mn-2m-2n+1)/2",
                    "positive_braid_closure": "Baker: knots on the trefoil fiber are positive braid closures",
                },
            )
        return None


def genus_bounds(k: KnotType, table: KnotTable) -> tuple[int, float]:
    """Genus bounds of a knot type, summed over its summands (genus is additive)."""
    lo, hi = 0, 0
    for atom in k.summands:
        attrs = table.atom_attributes(atom)
        if attrs is None or "genus" not in attrs.provenance:
            raise MissingAttributeError(f"no genus data for {atom}")
        lo += attrs.genus_lower
        hi += attrs.genus_upper
    return lo, hi



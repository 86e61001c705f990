"""Combinatorial presentations of flat banded surfaces.

A one-disc presentation is a disc with ``n`` flat bands attached along its
boundary.  The 2n attachment intervals are labeled ``1..n, 1'..n'`` reading
clockwise from a marked point on the free boundary; moving the marked point
is a relabeling.  Internally every presentation carries an exact planar
realization: feet at rational points on the top edge of a rectangular disc,
band cores as polylines above the edge (with stacking heights resolving
over/under) and chord paths dipping through the disc.  All combinatorial
views (pairing, positions, crossing events) are derived from that
realization, so moves that rebuild geometry cannot drift away from the
stored combinatorics.

Text code grammars accepted by :func:`parse_presentation`:

* basket code   ``<(p1,...,pn)|(l1,...,ln)>`` -- band k joins interval k to
  interval pk'; the second tuple lists bands from top to bottom.
* chord code    ``chords: (a b)(c d)... ; layers: (l1 ... ln)`` with barred
  labels written ``1'..n'``; the i-th pair is band i.
* dipole code   ``dipole n=<k>; d1: (order); d2: (order); crossings: [...]``
  -- two-disc form, see :func:`parse_presentation` for the crossing list
  format.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import GeometryError, ParseError
from .geometry import CorePath, CrossRec, Frac, Pt, path_crossings

__all__ = [
    "Label", "Pairing", "Band", "SurfacePresentation", "DipolePresentation",
    "K2nDiagram", "parse_presentation", "from_plumbing_code", "from_matching",
    "relabel", "pairing_of", "unbarred_pairs", "barred_pairs",
    "is_dipole_ready", "random_basket",
]


# ---------------------------------------------------------------------------
# labels and pairings

@dataclass(frozen=True)
class Label:
    """Attachment label: ``index`` in 1..n, barred or not."""

    index: int
    barred: bool

    def position(self, n: int) -> int:
        return self.index + n if self.barred else self.index

    @staticmethod
    def from_position(pos: int, n: int) -> "Label":
        if not 1 <= pos <= 2 * n:
            raise ValueError(f"position {pos} out of range for n={n}")
        return Label(pos - n, True) if pos > n else Label(pos, False)

    def __str__(self) -> str:
        return f"{self.index}'" if self.barred else f"{self.index}"


class Pairing:
    """Perfect matching on the 2n attachment positions."""

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]]):
        self.n = n
        canon = []
        seen: set[int] = set()
        for a, b in pairs:
            if a == b:
                raise ValueError("pairing with a fixed point")
            lo, hi = min(a, b), max(a, b)
            canon.append((lo, hi))
            seen.update((lo, hi))
        if seen != set(range(1, 2 * n + 1)) or len(canon) != n:
            raise ValueError("not a perfect matching on 1..2n")
        self.pairs = frozenset(canon)

    def label_pairs(self) -> set[frozenset[str]]:
        return {frozenset({str(Label.from_position(a, self.n)),
                           str(Label.from_position(b, self.n))})
                for a, b in self.pairs}

    def partner(self, pos: int) -> int:
        for a, b in self.pairs:
            if a == pos:
                return b
            if b == pos:
                return a
        raise KeyError(pos)

    def __eq__(self, other) -> bool:
        return isinstance(other, Pairing) and (self.n, self.pairs) == (other.n, other.pairs)

    def __hash__(self) -> int:
        return hash((self.n, self.pairs))

    def __str__(self) -> str:
        def key(p):
            return min(p)
        parts = []
        for a, b in sorted(self.pairs, key=key):
            parts.append("{%s,%s}" % (Label.from_position(a, self.n),
                                      Label.from_position(b, self.n)))
        return "{" + ", ".join(parts) + "}"


# ---------------------------------------------------------------------------
# bands and presentations

@dataclass(frozen=True)
class Band:
    """A flat band: two feet on the disc edge and an exterior core polyline
    running from end 0 to end 1 (feet at ``v = 0``, band material above)."""

    bid: int
    u0: Fraction
    u1: Fraction
    path: tuple[Pt, ...]


@dataclass(frozen=True)
class CrossingEvent:
    """One exterior crossing seen from a band: which band it meets and
    whether this band passes over there."""

    other_band: int
    over: bool


class SurfacePresentation:
    """One-disc flat banded surface with an exact planar realization."""

    disc_count = 1

    def __init__(self, n: int, bands: dict[int, Band],
                 marker_u: Fraction | None, move_count: int = 0,
                 provenance: str = "manual", realizability: str = "constructed",
                 source_code: str | None = None,
                 _ext_cache: dict | None = None):
        self.n = n
        self.bands = dict(bands)
        self.marker_u = marker_u
        self.move_count = move_count
        self.provenance = provenance
        self.realizability = realizability
        self.source_code = source_code
        # rectangle bounds for the disc: fixed for the lifetime of a lineage
        self.rect = (Frac(0), Frac(2 * n + 1), Frac(n + 1))
        self._feet: list[tuple[Fraction, int, int]] | None = None
        self._chords: dict[int, CorePath] | None = None
        self._ext_paths: dict[int, CorePath] = {}
        self._ext_cache: dict[tuple[int, int], list[CrossRec]] = \
            dict(_ext_cache) if _ext_cache else {}
        self._validate()

    # -- structure ---------------------------------------------------------

    def _validate(self) -> None:
        if set(self.bands) != set(range(1, self.n + 1)):
            raise ValueError("band ids must be 1..n")
        feet = [b.u0 for b in self.bands.values()] + [b.u1 for b in self.bands.values()]
        if len(set(feet)) != 2 * self.n:
            raise ValueError("band feet must be distinct")
        for b in self.bands.values():
            if b.path[0][:2] != (b.u0, Frac(0)) or b.path[-1][:2] != (b.u1, Frac(0)):
                raise ValueError(f"band {b.bid} path does not join its feet")

    def feet(self) -> list[tuple[Fraction, int, int]]:
        """Feet as (u, band id, end), sorted by u."""
        if self._feet is None:
            out = []
            for b in self.bands.values():
                out.append((b.u0, b.bid, 0))
                out.append((b.u1, b.bid, 1))
            out.sort()
            self._feet = out
        return self._feet

    def positions(self) -> dict[tuple[int, int], int]:
        """Map (band, end) -> position 1..2n for the current marker."""
        feet = self.feet()
        if self.marker_u is None:
            order = feet
        else:
            after = [f for f in feet if f[0] > self.marker_u]
            before = [f for f in feet if f[0] < self.marker_u]
            order = after + before
        return {(bid, end): k + 1 for k, (_, bid, end) in enumerate(order)}

    def foot_at_position(self, pos: int) -> tuple[int, int]:
        for key, p in self.positions().items():
            if p == pos:
                return key
        raise KeyError(pos)

    def pairing(self) -> Pairing:
        pos = self.positions()
        return Pairing(self.n, [(pos[(b, 0)], pos[(b, 1)]) for b in self.bands])

    # -- realization -------------------------------------------------------

    def chord_depths(self) -> dict[int, Fraction]:
        spans = sorted((abs(b.u1 - b.u0), b.bid) for b in self.bands.values())
        return {bid: Frac(rank + 1) for rank, (_, bid) in enumerate(spans)}

    def chord_path(self, bid: int) -> CorePath:
        """Chord staple from the end-1 foot back to the end-0 foot (closing
        the core loop), dipping into the disc."""
        if self._chords is None:
            depths = self.chord_depths()
            self._chords = {}
            for b in self.bands.values():
                d = depths[b.bid]
                pts = [(b.u1, Frac(0), Frac(0)), (b.u1, -d, Frac(0)),
                       (b.u0, -d, Frac(0)), (b.u0, Frac(0), Frac(0))]
                self._chords[b.bid] = CorePath(pts, chord_from=0)
        return self._chords[bid]

    def ext_path(self, bid: int) -> CorePath:
        if bid not in self._ext_paths:
            self._ext_paths[bid] = CorePath(self.bands[bid].path,
                                            chord_from=len(self.bands[bid].path))
        return self._ext_paths[bid]

    def ext_crossings(self, i: int, j: int) -> list[CrossRec]:
        """Exterior (band/band) crossings between bands i <= j, in the raw
        end0->end1 traversal of each path.  Cached; self-crossings allowed."""
        key = (min(i, j), max(i, j))
        if key not in self._ext_cache:
            if i == j:
                recs = path_crossings(self.ext_path(i), self.ext_path(i), same=True)
            else:
                recs = path_crossings(self.ext_path(key[0]), self.ext_path(key[1]))
            self._ext_cache[key] = recs
        return self._ext_cache[key]

    def chord_crossings(self, i: int, j: int) -> list[CrossRec]:
        if i == j:
            return []
        a, b = min(i, j), max(i, j)
        return path_crossings(self.chord_path(a), self.chord_path(b))

    def orientation(self, bid: int) -> int:
        """+1 if the stored end0->end1 traversal runs from the lower to the
        higher labeled position, else -1."""
        pos = self.positions()
        return 1 if pos[(bid, 0)] < pos[(bid, 1)] else -1

    def events(self) -> dict[int, tuple[CrossingEvent, ...]]:
        """Per band, exterior crossing events ordered from end 0 to end 1."""
        per: dict[int, list[tuple[tuple[int, Fraction], CrossingEvent]]] = \
            {b: [] for b in self.bands}
        for i in self.bands:
            for j in self.bands:
                if j < i:
                    continue
                for rec in self.ext_crossings(i, j):
                    if i == j:
                        per[i].append((rec.a_pos, CrossingEvent(i, rec.a_z > rec.b_z)))
                        per[i].append((rec.b_pos, CrossingEvent(i, rec.b_z > rec.a_z)))
                    else:
                        per[i].append((rec.a_pos, CrossingEvent(j, rec.a_z > rec.b_z)))
                        per[j].append((rec.b_pos, CrossingEvent(i, rec.b_z > rec.a_z)))
        return {b: tuple(ev for _, ev in sorted(per[b], key=lambda t: t[0]))
                for b in per}

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "type": "surface_presentation",
            "n": self.n,
            "marker": "wrap" if self.marker_u is None else _fs(self.marker_u),
            "move_count": self.move_count,
            "provenance": self.provenance,
            "realizability": self.realizability,
            "source_code": self.source_code,
            "bands": [
                {"id": b.bid, "u0": _fs(b.u0), "u1": _fs(b.u1),
                 "path": [[_fs(c) for c in pt] for pt in b.path]}
                for _, b in sorted(self.bands.items())
            ],
            "events": {str(b): [[e.other_band, e.over] for e in evs]
                       for b, evs in sorted(self.events().items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_dict(d: dict) -> "SurfacePresentation":
        if d.get("type") != "surface_presentation":
            raise ParseError("not a surface_presentation object")
        bands = {}
        for bd in d["bands"]:
            path = tuple((_fp(a), _fp(b), _fp(c)) for a, b, c in bd["path"])
            bands[bd["id"]] = Band(bd["id"], _fp(bd["u0"]), _fp(bd["u1"]), path)
        marker = None if d["marker"] == "wrap" else _fp(d["marker"])
        p = SurfacePresentation(d["n"], bands, marker, d["move_count"],
                                d["provenance"], d["realizability"],
                                d.get("source_code"))
        stored = {int(k): tuple(CrossingEvent(o, bool(ov)) for o, ov in v)
                  for k, v in d.get("events", {}).items()}
        if stored and stored != p.events():
            p.realizability = "unchecked"
        return p

    def to_code(self) -> str:
        """Text code if this presentation still is a pristine parsed code."""
        if self.source_code is not None and self.move_count == 0:
            return self.source_code
        raise ValueError("presentation has no text-code form; use to_json")

    def __eq__(self, other) -> bool:
        return isinstance(other, SurfacePresentation) and self.to_json() == other.to_json()

    def __repr__(self) -> str:
        return f"<SurfacePresentation n={self.n} {self.pairing()}>"


def _fs(x: Fraction) -> str:
    return str(x)


def _fp(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# two-disc forms

@dataclass(frozen=True)
class DipolePresentation:
    """Two discs joined by n+1 parallel flat bands (one is the connector
    added when the one-disc surface is split).  The split is an isotopy, so
    the parent's realization still computes the linking data; the two-disc
    attachment structure is carried explicitly for boundary walks."""

    parent: SurfacePresentation
    connector: int
    d1_order: tuple[tuple[int, int], ...]
    d2_order: tuple[tuple[int, int], ...]

    disc_count = 2

    @property
    def n(self) -> int:
        return self.parent.n

    @property
    def band_count(self) -> int:
        return self.parent.n + 1

    def band_ids(self) -> list[int]:
        return sorted(self.parent.bands) + [self.connector]

    def to_json_dict(self) -> dict:
        return {
            "type": "dipole_presentation",
            "connector": self.connector,
            "d1_order": list(map(list, self.d1_order)),
            "d2_order": list(map(list, self.d2_order)),
            "parent": self.parent.to_json_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_dict(d: dict) -> "DipolePresentation":
        if d.get("type") != "dipole_presentation":
            raise ParseError("not a dipole_presentation object")
        return DipolePresentation(
            SurfacePresentation.from_json_dict(d["parent"]), d["connector"],
            tuple((a, b) for a, b in d["d1_order"]),
            tuple((a, b) for a, b in d["d2_order"]))


@dataclass(frozen=True)
class K2nDiagram:
    """Embedded K_{2,k} diagram: the two hub discs of a dipole plus one
    subdivision vertex per band; each band becomes a hub-side edge pair
    carrying a voltage (0 flat, +-1 half twist)."""

    dipole: DipolePresentation
    voltages: tuple[tuple[int, int], ...]  # (d1-half, d2-half) per band id order
    flipped: str | None = None

    @property
    def k(self) -> int:
        return self.dipole.band_count

    def band_ids(self) -> list[int]:
        return self.dipole.band_ids()

    def edge_count(self) -> int:
        return 2 * self.k

    def voltage_map(self) -> dict[tuple[int, int], int]:
        out = {}
        for bid, (v1, v2) in zip(self.band_ids(), self.voltages):
            out[(bid, 0)] = v1
            out[(bid, 1)] = v2
        return out

    def to_json_dict(self) -> dict:
        return {
            "type": "k2n_diagram",
            "k": self.k,
            "flipped": self.flipped,
            "voltages": [list(v) for v in self.voltages],
            "dipole": self.dipole.to_json_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# construction

def _staple_path(u0: Fraction, u1: Fraction, v_height: Fraction,
                 z: Fraction) -> tuple[Pt, ...]:
    zero = Frac(0)
    return ((u0, zero, zero), (u0, zero, z), (u0, v_height, z),
            (u1, v_height, z), (u1, zero, z), (u1, zero, zero))


def from_matching(pairs: Sequence[tuple[int, int]], layers: Sequence[int],
                  provenance: str = "manual",
                  source_code: str | None = None) -> SurfacePresentation:
    """Build the canonical basket-style realization of a matching.

    ``pairs[k-1]`` are the two positions of band k; ``layers`` lists band
    ids from top to bottom (earlier bands pass over later ones wherever
    their chords interleave).
    """
    n = len(pairs)
    if sorted(layers) != list(range(1, n + 1)):
        raise ValueError("layers must be a permutation of the band ids")
    Pairing(n, pairs)  # validates the matching
    height_of = {bid: Frac(n - k) for k, bid in enumerate(layers)}
    spans = sorted((abs(a - b), k + 1) for k, (a, b) in enumerate(pairs))
    v_of = {bid: Frac(rank + 1) for rank, (_, bid) in enumerate(spans)}
    bands = {}
    for k, (a, b) in enumerate(pairs, start=1):
        u0, u1 = Frac(min(a, b)), Frac(max(a, b))
        bands[k] = Band(k, u0, u1,
                        _staple_path(u0, u1, v_of[k], height_of[k] + 1))
    # top band gets the largest stacking height; heights stay >= 1
    return SurfacePresentation(n, bands, marker_u=None, provenance=provenance,
                               source_code=source_code)


def from_plumbing_code(connection: Sequence[int], layers: Sequence[int],
                       source_code: str | None = None) -> SurfacePresentation:
    """Basket code ``<(p1..pn)|(l1..ln)>``: band k joins interval k to
    interval pk-barred; layers list bands from top to bottom."""
    n = len(connection)
    if sorted(connection) != list(range(1, n + 1)):
        raise ParseError("connection tuple is not a permutation of 1..n")
    if sorted(layers) != list(range(1, n + 1)):
        raise ParseError("layer tuple is not a permutation of 1..n")
    pairs = [(k, n + connection[k - 1]) for k in range(1, n + 1)]
    return from_matching(pairs, layers, provenance="plumbing",
                         source_code=source_code)


def random_basket(rng, n: int) -> SurfacePresentation:
    """Uniform random flat plumbing-style basket: random perfect matching on
    the 2n intervals, random top-to-bottom layer order."""
    slots = list(range(1, 2 * n + 1))
    rng.shuffle(slots)
    pairs = [(slots[2 * k], slots[2 * k + 1]) for k in range(n)]
    layers = list(range(1, n + 1))
    rng.shuffle(layers)
    return from_matching(pairs, layers, provenance="random")


# ---------------------------------------------------------------------------
# label operations

def pairing_of(p: SurfacePresentation) -> Pairing:
    """The matching on positions 1..2n (one-disc presentations only)."""
    if p.disc_count != 1:
        raise ValueError("pairing is defined for one-disc presentations")
    return p.pairing()


def relabel(p: SurfacePresentation, offset: int) -> SurfacePresentation:
    """Move the marked point ``offset`` intervals clockwise: position k+offset
    becomes position k.  offset 0 is the identity; offsets add mod 2n."""
    off = offset % (2 * p.n)
    if off == 0:
        return p
    feet = p.feet()
    order = sorted(p.positions().items(), key=lambda kv: kv[1])
    prev_key = order[off - 1][0]
    next_key = order[off % (2 * p.n)][0]
    u_prev = _foot_u(p, prev_key)
    u_next = _foot_u(p, next_key)
    if u_prev == feet[-1][0] and u_next == feet[0][0]:
        marker = None
    else:
        marker = (u_prev + u_next) / 2
    q = SurfacePresentation(p.n, p.bands, marker, p.move_count, p.provenance,
                            p.realizability, None, _ext_cache=p._ext_cache)
    return q


def _foot_u(p: SurfacePresentation, key: tuple[int, int]) -> Fraction:
    b = p.bands[key[0]]
    return b.u0 if key[1] == 0 else b.u1


def unbarred_pairs(p: SurfacePresentation) -> set[tuple[int, int]]:
    """Pairs {i,j} with both intervals unbarred (positions <= n), as (i, j)
    with i < j.  Empty exactly when the presentation is two-sided."""
    n = p.n
    out = set()
    for a, b in p.pairing().pairs:
        if b <= n:
            out.add((a, b))
    return out


def barred_pairs(p: SurfacePresentation) -> set[tuple[int, int]]:
    """Pairs {i',j'} with both intervals barred, as unbarred indices (i, j),
    i < j.  Always the same size as :func:`unbarred_pairs`."""
    n = p.n
    out = set()
    for a, b in p.pairing().pairs:
        if a > n:
            out.add((a - n, b - n))
    return out


def is_dipole_ready(p: SurfacePresentation) -> bool:
    """True iff every band joins an unbarred interval to a barred one in the
    current labeling, i.e. the disc may be split into a dipole."""
    return not unbarred_pairs(p)


# ---------------------------------------------------------------------------
# parsing

_BASKET_RE = re.compile(r"^<\s*\(([^)]*)\)\s*\|\s*\(([^)]*)\)\s*>$")
_CHORD_RE = re.compile(r"^chords\s*:\s*(.*?);\s*layers\s*:\s*\(([^)]*)\)$", re.S)
_DIPOLE_RE = re.compile(
    r"^dipole\s+n\s*=\s*(\d+)\s*;\s*d1\s*:\s*\(([^)]*)\)\s*;\s*"
    r"d2\s*:\s*\(([^)]*)\)\s*;\s*crossings\s*:\s*\[(.*)\]$", re.S)


def _int_tuple(text: str) -> tuple[int, ...]:
    items = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    try:
        return tuple(int(t) for t in items)
    except ValueError as e:
        raise ParseError(f"expected integers in '{text}'") from e


def parse_presentation(text: str):
    """Parse a basket, chord, or dipole code (see module docstring).

    Returns a :class:`SurfacePresentation` for the one-disc grammars and a
    :class:`DipolePresentation` for dipole codes.  JSON documents produced
    by ``to_json`` are also accepted.
    """
    text = text.strip()
    if text.startswith("{"):
        d = json.loads(text)
        if d.get("type") == "dipole_presentation":
            return DipolePresentation.from_json_dict(d)
        return SurfacePresentation.from_json_dict(d)
    m = _BASKET_RE.match(text)
    if m:
        conn = _int_tuple(m.group(1))
        layers = _int_tuple(m.group(2))
        if len(conn) != len(layers):
            raise ParseError("connection and layer tuples differ in length")
        return from_plumbing_code(conn, layers, source_code=_canon_basket(conn, layers))
    m = _CHORD_RE.match(text)
    if m:
        return _parse_chord_code(m.group(1), m.group(2))
    m = _DIPOLE_RE.match(text)
    if m:
        return _parse_dipole_code(m)
    raise ParseError(f"unrecognized presentation code: {text[:60]!r}")


def _canon_basket(conn: tuple[int, ...], layers: tuple[int, ...]) -> str:
    return "<(%s)|(%s)>" % (",".join(map(str, conn)), ",".join(map(str, layers)))


def _parse_label(tok: str, n_hint: int | None = None) -> tuple[int, bool]:
    m = re.fullmatch(r"(\d+)('?)", tok)
    if not m:
        raise ParseError(f"bad label {tok!r}")
    return int(m.group(1)), m.group(2) == "'"


def _parse_chord_code(chords_text: str, layers_text: str) -> SurfacePresentation:
    groups = re.findall(r"\(([^)]*)\)", chords_text)
    if not groups:
        raise ParseError("chord code lists no pairs")
    n = len(groups)
    pairs = []
    for g in groups:
        toks = [t for t in re.split(r"[,\s]+", g.strip()) if t]
        if len(toks) != 2:
            raise ParseError(f"chord pair '({g})' must have two labels")
        pos = []
        for t in toks:
            idx, barred = _parse_label(t)
            if not 1 <= idx <= n:
                raise ParseError(f"label {t} out of range for n={n}")
            pos.append(idx + n if barred else idx)
        pairs.append((pos[0], pos[1]))
    layers = _int_tuple(layers_text)
    if sorted(layers) != list(range(1, n + 1)):
        raise ParseError("layers must be a permutation of the band ids")
    try:
        p = from_matching(pairs, layers, provenance="chords")
    except ValueError as e:
        raise ParseError(str(e)) from e
    p.source_code = "chords: %s ; layers: (%s)" % (
        "".join("(%s %s)" % tuple(str(Label.from_position(x, n)) for x in pr)
                for pr in pairs),
        " ".join(map(str, layers)))
    return p


def _parse_dipole_code(m: re.Match) -> DipolePresentation:
    k = int(m.group(1))  # number of non-connector bands; connector id is k+1
    d1 = _int_tuple(m.group(2))
    d2 = _int_tuple(m.group(3))
    if sorted(d1) != list(range(1, k + 2)) or sorted(d2) != list(range(1, k + 2)):
        raise ParseError("d1/d2 orders must each list every band 1..n+1 once")
    conn = k + 1
    crossings: list[tuple[int, int, int]] = []
    body = m.group(4).strip()
    if body:
        for part in re.findall(r"\(([^)]*)\)", body):
            trip = _int_tuple(part)
            if len(trip) != 3:
                raise ParseError("crossing entries are (band_a, band_b, over_band)")
            a, b, over = trip
            if over not in (a, b) or a == b:
                raise ParseError(f"bad crossing entry ({part})")
            crossings.append((a, b, over))
    # Validate the crossing list against the inversion pairs of the two
    # attachment orders (each inverted pair of strands crosses exactly once).
    slot1 = {bid: i for i, bid in enumerate(d1)}
    slot2 = {bid: i for i, bid in enumerate(d2)}
    inversions = set()
    for a in range(1, k + 2):
        for b in range(a + 1, k + 2):
            if (slot1[a] - slot1[b]) * (slot2[a] - slot2[b]) < 0:
                inversions.add((a, b))
    listed = {(min(a, b), max(a, b)) for a, b, _ in crossings}
    if listed != inversions:
        raise ParseError(
            f"crossing list {sorted(listed)} must match the strand inversions "
            f"{sorted(inversions)} of the d1/d2 orders")
    if conn in {x for pair in inversions for x in pair}:
        raise ParseError("connector band may not cross other bands in code form")
    # The over-relation must admit a stacking order (acyclic); cyclic
    # prescriptions need variable-height embeddings and are not accepted.
    over_of = {(min(a, b), max(a, b)): over for a, b, over in crossings}
    order = _layer_order_from_overs(k + 1, over_of)
    if order is None:
        raise ParseError("crossing resolutions admit no stacking order")
    # Un-split the dipole: band m joins its d1 slot (position) to its d2 slot.
    d1_cyc = _rotate_after(d1, conn)
    d2_cyc = _rotate_after(d2, conn)
    pos1 = {bid: i + 1 for i, bid in enumerate(b for b in d1_cyc if b != conn)}
    pos2 = {bid: k + i + 1 for i, bid in enumerate(b for b in d2_cyc if b != conn)}
    pairs = [(pos1[bid], pos2[bid]) for bid in range(1, k + 1)]
    layers = [b for b in order if b != conn]
    parent = from_matching(pairs, layers, provenance="dipole-code")
    # every band has its end 0 on D1 and its end 1 on D2
    d1_order = tuple((b, 0) for b in d1)
    d2_order = tuple((b, 1) for b in d2)
    return DipolePresentation(parent, conn, d1_order, d2_order)


def _rotate_after(seq: Sequence[int], item: int) -> list[int]:
    i = list(seq).index(item)
    return list(seq[i + 1:]) + list(seq[:i + 1])


def _layer_order_from_overs(nbands: int, over_of: dict) -> list[int] | None:
    """Topological order with over-bands first, or None if cyclic."""
    above: dict[int, set[int]] = {b: set() for b in range(1, nbands + 1)}
    for (a, b), over in over_of.items():
        under = b if over == a else a
        above[under].add(over)
    order: list[int] = []
    marked: dict[int, int] = {}

    def visit(x):
        if marked.get(x) == 2:
            return True
        if marked.get(x) == 1:
            return False
        marked[x] = 1
        for y in sorted(above[x]):
            if not visit(y):
                return False
        marked[x] = 2
        order.append(x)
        return True

    for b in range(1, nbands + 1):
        if not visit(b):
            return None
    return order  # every band appears after everything above it: top first

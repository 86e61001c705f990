"""Topology of realized presentations: boundary walks, Euler data, core
diagrams, Seifert matrices and boundary Gauss codes.

Sign conventions (used identically by the independent oracle):

* a crossing of oriented strands is ``+1`` when the under-strand direction
  is the over-strand direction turned by +90 degrees, i.e.
  ``sign = sgn det[d_over, d_under]``;
* ``V[i][j]`` is the linking number of core i with the push-off of core j
  in the positive normal direction.  The push-off floats above the disc,
  so at a chord/chord crossing inside the disc the pushed-off core is the
  over-strand; at exterior crossings over/under follows the stacking
  heights of the band material;
* cores are oriented from their lower-position attachment to the higher
  one along the band, returning through the disc.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonIntegralGenus
from .presentation import (DipolePresentation, K2nDiagram,
                           SurfacePresentation)

__all__ = [
    "boundary_components", "euler_data", "EulerData", "CoreDiagram",
    "CoreCrossing", "core_diagram", "seifert_matrix", "GaussCode",
    "boundary_gauss_code",
]


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _det(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


# ---------------------------------------------------------------------------
# boundary walk (abstract surface)

def _attachment_structure(obj):
    """(discs, band_edges): discs are cyclic occurrence lists, band_edges are
    (occ_a, occ_b, voltage) with occurrences (band id, end)."""
    if isinstance(obj, SurfacePresentation):
        occs = [(bid, end) for _, bid, end in obj.feet()]
        edges = [((b, 0), (b, 1), 0) for b in sorted(obj.bands)]
        return [occs], edges
    if isinstance(obj, DipolePresentation):
        return [list(obj.d1_order), list(obj.d2_order)], \
               [((b, 0), (b, 1), 0) for b in obj.band_ids()]
    if isinstance(obj, K2nDiagram):
        return _k2n_structure(obj)
    raise TypeError(f"no attachment structure for {type(obj).__name__}")


def _k2n_structure(g: K2nDiagram):
    # Edge (b, 0): hub D1 -> middle vertex b; edge (b, 1): middle -> hub D2.
    # Flipping the hub pair reverses both hub rotations and adds the half
    # twists recorded in the voltages.
    d1 = [((b, 0), "hub") for (b, _e) in g.dipole.d1_order]
    d2 = [((b, 1), "hub") for (b, _e) in g.dipole.d2_order]
    if g.flipped is not None:
        d1 = list(reversed(d1))
        d2 = list(reversed(d2))
    discs = [d1, d2]
    for b in g.band_ids():
        discs.append([((b, 0), "mid"), ((b, 1), "mid")])
    volt = g.voltage_map()
    edges = []
    for b in g.band_ids():
        edges.append((((b, 0), "hub"), ((b, 0), "mid"), volt[(b, 0)]))
        edges.append((((b, 1), "mid"), ((b, 1), "hub"), volt[(b, 1)]))
    return discs, edges


def boundary_components(obj) -> int:
    """Number of boundary circles of the abstract surface (crossing data
    affects the embedding, not the count)."""
    discs, edges = _attachment_structure(obj)
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for disc in discs:
        for occ in disc:
            parent[(occ, "-")] = (occ, "-")
            parent[(occ, "+")] = (occ, "+")
    for disc in discs:
        m = len(disc)
        for k in range(m):
            union((disc[k], "+"), (disc[(k + 1) % m], "-"))
    for occ_a, occ_b, voltage in edges:
        if voltage % 2 == 0:
            union((occ_a, "-"), (occ_b, "+"))
            union((occ_a, "+"), (occ_b, "-"))
        else:
            union((occ_a, "-"), (occ_b, "-"))
            union((occ_a, "+"), (occ_b, "+"))
    return len({find(x) for x in parent})


@dataclass(frozen=True)
class EulerData:
    chi: int
    beta1: int
    genus: int
    mu: int


def euler_data(obj) -> EulerData:
    """Euler characteristic, first Betti number, genus and boundary count."""
    discs, edges = _attachment_structure(obj)
    chi = len(discs) - len(edges)
    beta1 = 1 - chi
    mu = boundary_components(obj)
    if (mu + chi) % 2 != 0:
        raise NonIntegralGenus(f"mu={mu}, chi={chi}")
    genus = (2 - mu - chi) // 2
    if genus < 0:
        raise NonIntegralGenus(f"negative genus: mu={mu}, chi={chi}")
    return EulerData(chi, beta1, genus, mu)


# ---------------------------------------------------------------------------
# core diagram and Seifert matrix

@dataclass(frozen=True)
class CoreCrossing:
    """A crossing between oriented cores ``i`` and ``j`` (i <= j; i == j for
    self-crossings).  ``sign_ij = sgn det[d_i, d_j]`` with the cores' own
    orientations; ``over`` is the band id passing over (None inside the
    disc, where the push-off rule decides); ``inside_disc`` marks chord
    crossings."""

    i: int
    j: int
    sign_ij: int
    over: int | None
    inside_disc: bool
    point: tuple[Fraction, Fraction]
    z_i: Fraction
    z_j: Fraction


@dataclass(frozen=True)
class CoreDiagram:
    n: int
    crossings: tuple[CoreCrossing, ...]
    warnings: tuple[str, ...]

    def exterior(self):
        return [c for c in self.crossings if not c.inside_disc]

    def interior(self):
        return [c for c in self.crossings if c.inside_disc]


def _presentation_of(obj) -> SurfacePresentation:
    if isinstance(obj, SurfacePresentation):
        return obj
    if isinstance(obj, DipolePresentation):
        return obj.parent
    if isinstance(obj, K2nDiagram):
        return obj.dipole.parent
    raise TypeError(type(obj).__name__)


def core_diagram(obj) -> CoreDiagram:
    """Planar diagram of all core curves.  For two-disc forms the cores are
    the band-plus-connector loops; the split and the subdivision are
    isotopies of the one-disc realization, whose diagram is returned."""
    p = _presentation_of(obj)
    crossings: list[CoreCrossing] = []
    orients = {b: p.orientation(b) for b in p.bands}
    ids = sorted(p.bands)
    for ai, i in enumerate(ids):
        for j in ids[ai:]:
            if i == j:
                recs = p.ext_crossings(i, i)
            else:
                recs = p.ext_crossings(i, j) + p.chord_crossings(i, j)
            for rec in recs:
                di = (rec.a_dir[0] * orients[i], rec.a_dir[1] * orients[i])
                dj = (rec.b_dir[0] * orients[j], rec.b_dir[1] * orients[j])
                sign_ij = _sgn(_det(di, dj))
                over = None if rec.interior else (i if rec.a_z > rec.b_z else j)
                crossings.append(CoreCrossing(
                    i, j, sign_ij, over, rec.interior, rec.point,
                    rec.a_z, rec.b_z))
    warnings = ()
    if p.realizability != "constructed":
        warnings = (f"realizability: {p.realizability}",)
    return CoreDiagram(p.n, tuple(crossings), warnings)


def seifert_matrix(obj) -> list[list[int]]:
    """V[i][j] = lk(core i, push-off of core j); flat bands give zero
    diagonal.  Dipole and K_{2,n} forms use the band-plus-connector loop
    basis, which the parent realization computes directly."""
    p = _presentation_of(obj)
    diag = core_diagram(obj)
    ids = sorted(p.bands)
    index = {b: k for k, b in enumerate(ids)}
    n = len(ids)
    V = [[0] * n for _ in range(n)]
    for c in diag.crossings:
        a, b = index[c.i], index[c.j]
        if c.i == c.j:
            # writhe contribution: over strand first in the determinant
            s = c.sign_ij if c.z_i > c.z_j else -c.sign_ij
            V[a][a] += s
        elif c.inside_disc:
            V[a][b] += -c.sign_ij  # det[d_j, d_i]: pushed-off j over i
            V[b][a] += c.sign_ij   # det[d_i, d_j]: pushed-off i over j
        elif c.over == c.j:
            V[a][b] += -c.sign_ij
        else:
            V[b][a] += c.sign_ij
    return V


# ---------------------------------------------------------------------------
# boundary Gauss code

@dataclass(frozen=True)
class GaussCode:
    """Boundary link diagram code: per component, the visits (crossing id,
    'o'/'u', sign) in traversal order.  Every exterior core crossing of the
    realized diagram expands to four boundary crossings; the flat disc
    contributes none."""

    components: tuple[tuple[tuple[int, str, int], ...], ...]

    def crossing_count(self) -> int:
        return len({v[0] for comp in self.components for v in comp})

    def to_text(self) -> str:
        lines = []
        for comp in self.components:
            lines.append(" ".join(f"{'+' if s > 0 else '-'}{cid}{ou}"
                                  for cid, ou, s in comp) or "(unknotted)")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {"type": "gauss_code",
                "components": [[[cid, ou, s] for cid, ou, s in comp]
                               for comp in self.components]}


def _boundary_walk(p: SurfacePresentation):
    """Boundary components in the induced orientation of the surface
    (counterclockwise seen from the positive normal).

    Each component is a list of (band id, side, forward): side '-' is the
    band edge joining end 0's minus corner to end 1's plus corner (the left
    edge of the raw end0->end1 traversal), '+' the other; ``forward`` says
    the side is walked from end 0 towards end 1.
    """
    occs = [(bid, end) for _, bid, end in p.feet()]
    m = len(occs)
    # induced orientation runs along the top edge in -u, so free arcs go
    # from the minus corner of occ_{k+1} to the plus corner of occ_k
    free_next = {}
    for k in range(m):
        free_next[(occs[(k + 1) % m], "-")] = (occs[k], "+")
    # from a plus corner the walk departs along a band side:
    #   (b,0,'+') --side '+', forward--> arrives (b,1,'-')
    #   (b,1,'+') --side '-', backward--> arrives (b,0,'-')
    comps = []
    seen = set()
    for b0 in sorted(p.bands):
        for start_end in (0, 1):
            start = ((b0, start_end), "+")
            if start in seen:
                continue
            comp = []
            corner = start
            while True:
                seen.add(corner)
                (bid, end), _ = corner
                if end == 0:
                    comp.append((bid, "+", True))
                    dest = ((bid, 1), "-")
                else:
                    comp.append((bid, "-", False))
                    dest = ((bid, 0), "-")
                corner = free_next[dest]
                if corner == start:
                    break
            comps.append(comp)
    return comps


def boundary_gauss_code(p: SurfacePresentation) -> GaussCode:
    """Gauss code of the boundary link read off the realized diagram.

    Works in the raw end0->end1 frame of each band: side '-' is the left
    edge of that traversal, displaced by the left normal of the raw
    direction; boundary strand directions flip where the induced walk runs
    a side backward.
    """
    if not isinstance(p, SurfacePresentation):
        raise TypeError("gauss codes are read off one-disc presentations")
    ids = sorted(p.bands)
    # collect exterior crossings as passage pairs in the raw frame
    passages = []  # (key, band, pos, dir, z, other_index)
    recs = []
    for ai, i in enumerate(ids):
        for j in ids[ai:]:
            for rec in p.ext_crossings(i, j):
                k = len(recs)
                recs.append((i, j, rec))
                passages.append((k, "a", i, rec.a_pos, rec.a_dir, rec.a_z))
                passages.append((k, "b", j, rec.b_pos, rec.b_dir, rec.b_z))

    sub_of = {("-", "-"): 0, ("-", "+"): 1, ("+", "-"): 2, ("+", "+"): 3}
    visits: dict[tuple[int, str], list] = {}
    for b in ids:
        visits[(b, "-")] = []
        visits[(b, "+")] = []
    for k, which, bid, pos, d_here, z_here in passages:
        i, j, rec = recs[k]
        if which == "a":
            d_there, z_there = rec.b_dir, rec.b_z
        else:
            d_there, z_there = rec.a_dir, rec.a_z
        over = z_here > z_there
        # the sub-crossing with the other band's '+' side comes later along
        # this strand iff det[d_here, d_there] > 0
        later_plus = _det(d_here, d_there) > 0
        for s_here in ("-", "+"):
            for s_there in ("-", "+"):
                if which == "a":
                    sub = sub_of[(s_here, s_there)]
                else:
                    sub = sub_of[(s_there, s_here)]
                off = 0 if (s_there == "+") != later_plus else 1
                visits[(bid, s_here)].append(
                    (pos, off, 4 * k + sub, over, d_here, d_there))

    comps_walk = _boundary_walk(p)
    out = []
    for comp in comps_walk:
        walk = []
        for bid, side, forward in comp:
            evs = sorted(visits[(bid, side)], key=lambda t: (t[0], t[1]))
            if not forward:
                evs = list(reversed(evs))
            f = 1 if forward else -1
            for pos, off, cid, over, d_here, d_there in evs:
                walk.append([cid, "o" if over else "u", 0,
                             (d_here[0] * f, d_here[1] * f)])
        out.append(walk)
    # pair up the two visits of each crossing id to fix the signs
    byid: dict[int, list] = {}
    for comp in out:
        for v in comp:
            byid.setdefault(v[0], []).append(v)
    for cid, pair in byid.items():
        if len(pair) != 2 or {pair[0][1], pair[1][1]} != {"o", "u"}:
            raise AssertionError(f"crossing {cid} not visited once over, once under")
        vo = pair[0] if pair[0][1] == "o" else pair[1]
        vu = pair[1] if pair[0][1] == "o" else pair[0]
        s = _sgn(_det(vo[3], vu[3]))
        vo[2] = s
        vu[2] = s
    comps_final = tuple(tuple((v[0], v[1], v[2]) for v in comp) for comp in out)
    return GaussCode(comps_final)

"""Exact piecewise-linear diagram geometry.

A realized core curve is a polyline of points ``(u, v, z)`` with Fraction
coordinates.  ``(u, v)`` is the drawing plane: the disc occupies ``v <= 0``
and band material runs at ``v > 0`` (interior chord paths are drawn as
staples dipping to ``v < 0``).  ``z`` is the stacking height that resolves
over/under where two band segments cross in projection.

Conventions baked in here and relied on everywhere else:

* consecutive polyline vertices with equal ``(u, v)`` form a *jump*
  (a vertical move in ``z``); jumps project to points and never cross;
* two segments that share an endpoint (exact coordinate match) never
  count as crossing -- parallel strips produced by band slides share the
  vertices of the path they copy, which encodes "runs alongside, does
  not cross";
* every other contact must be a transversal interior-interior crossing,
  with distinct stacking heights unless both segments are chord segments
  (disc interior, all at ``z = 0``).  Anything else raises
  :class:`~bandsurf.errors.GeometryError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GeometryError

Frac = Fraction
Pt = tuple[Fraction, Fraction, Fraction]


def _cross2(ax, ay, bx, by):
    return ax * by - ay * bx


@dataclass(frozen=True)
class Segment:
    """One oriented piece of a realized core: ``a -> b``."""

    a: Pt
    b: Pt
    chord: bool  # True for disc-interior chord material

    @property
    def is_jump(self) -> bool:
        return self.a[0] == self.b[0] and self.a[1] == self.b[1]


@dataclass(frozen=True)
class CrossRec:
    """A transversal crossing between two oriented core polylines.

    ``a_*`` refers to the first polyline passed to :func:`path_crossings`,
    ``b_*`` to the second.  ``a_pos``/``b_pos`` order crossings along each
    polyline (segment index plus parameter).  ``interior`` marks chord/chord
    crossings inside the disc, where both strands sit at ``z = 0`` and
    over/under is decided by push-off, not by ``z``.
    """

    point: tuple[Fraction, Fraction]
    a_dir: tuple[Fraction, Fraction]
    b_dir: tuple[Fraction, Fraction]
    a_z: Fraction
    b_z: Fraction
    a_pos: tuple[int, Fraction]
    b_pos: tuple[int, Fraction]
    interior: bool

    def swapped(self) -> "CrossRec":
        return CrossRec(self.point, self.b_dir, self.a_dir, self.b_z,
                        self.a_z, self.b_pos, self.a_pos, self.interior)


class CorePath:
    """Oriented core polyline with per-segment lookup acceleration."""

    def __init__(self, points: Sequence[Pt], chord_from: int):
        """``chord_from``: index of the first vertex of the chord portion;
        segments at index >= chord_from are chord material.  Use
        ``len(points)`` for an all-band path."""
        self.points = list(points)
        self.segments: list[Segment] = []
        self.boxes: list[tuple[float, float, float, float]] = []
        for k in range(len(self.points) - 1):
            a, b = self.points[k], self.points[k + 1]
            seg = Segment(a, b, chord=k >= chord_from)
            self.segments.append(seg)
            au, av = float(a[0]), float(a[1])
            bu, bv = float(b[0]), float(b[1])
            self.boxes.append((min(au, bu), max(au, bu), min(av, bv), max(av, bv)))
        if self.boxes:
            self.box = (min(b[0] for b in self.boxes), max(b[1] for b in self.boxes),
                        min(b[2] for b in self.boxes), max(b[3] for b in self.boxes))
        else:
            self.box = (0.0, 0.0, 0.0, 0.0)


def _segment_crossing(s1: Segment, i1: int, s2: Segment, i2: int) -> CrossRec | None:
    """Exact transversal intersection of two segments, or None.

    Raises GeometryError on any degenerate contact that the construction
    rules should have excluded.
    """
    if s1.is_jump or s2.is_jump:
        return None
    a, b = s1.a, s1.b
    c, d = s2.a, s2.b
    # Shared endpoints (in projection) mean "touching, running alongside".
    if (a[0], a[1]) in ((c[0], c[1]), (d[0], d[1])) or \
       (b[0], b[1]) in ((c[0], c[1]), (d[0], d[1])):
        return None
    rx, ry = b[0] - a[0], b[1] - a[1]
    wx, wy = d[0] - c[0], d[1] - c[1]
    den = _cross2(rx, ry, wx, wy)
    qpx, qpy = c[0] - a[0], c[1] - a[1]
    if den == 0:
        if _cross2(qpx, qpy, rx, ry) != 0:
            return None  # parallel, disjoint lines
        # Collinear: require disjoint projections.
        if rx != 0:
            lo1, hi1 = sorted((a[0], b[0]))
            lo2, hi2 = sorted((c[0], d[0]))
        else:
            lo1, hi1 = sorted((a[1], b[1]))
            lo2, hi2 = sorted((c[1], d[1]))
        if hi1 < lo2 or hi2 < lo1:
            return None
        raise GeometryError(f"collinear overlap between {s1} and {s2}")
    t = _cross2(qpx, qpy, wx, wy) / den
    s = _cross2(qpx, qpy, rx, ry) / den
    if t < 0 or t > 1 or s < 0 or s > 1:
        return None
    if t in (0, 1) or s in (0, 1):
        raise GeometryError(
            f"endpoint-on-segment contact between {s1} and {s2} (t={t}, s={s})")
    point = (a[0] + t * rx, a[1] + t * ry)
    z1 = s1.a[2] + t * (s1.b[2] - s1.a[2])
    z2 = s2.a[2] + s * (s2.b[2] - s2.a[2])
    interior = s1.chord and s2.chord
    if interior:
        if z1 != 0 or z2 != 0:
            raise GeometryError("chord material off the disc plane")
    else:
        if s1.chord != s2.chord:
            raise GeometryError("chord/band material crossing in projection")
        if z1 == z2:
            raise GeometryError(f"stacking tie at {point}: z={z1}")
    return CrossRec(point=point, a_dir=(rx, ry), b_dir=(wx, wy),
                    a_z=z1, b_z=z2, a_pos=(i1, t), b_pos=(i2, s),
                    interior=interior)


def path_crossings(pa: CorePath, pb: CorePath, same: bool = False) -> list[CrossRec]:
    """All transversal crossings between two core polylines.

    With ``same=True`` the two arguments are the same path and each
    unordered segment pair is examined once (self-crossings).
    """
    out: list[CrossRec] = []
    A, B = pa.box, pb.box
    if A[1] < B[0] or B[1] < A[0] or A[3] < B[2] or B[3] < A[2]:
        if not same:
            return out
    boxes_a, boxes_b = pa.boxes, pb.boxes
    segs_a, segs_b = pa.segments, pb.segments
    for i1, s1 in enumerate(segs_a):
        a0, a1, a2, a3 = boxes_a[i1]
        start = i1 + 2 if same else 0  # adjacent segments share a vertex anyway
        for i2 in range(start, len(segs_b)):
            b0, b1, b2, b3 = boxes_b[i2]
            if a1 < b0 or b1 < a0 or a3 < b2 or b3 < a2:
                continue
            rec = _segment_crossing(s1, i1, segs_b[i2], i2)
            if rec is not None:
                out.append(rec)
    return out

"""Independent ground truth: canonical Seifert surfaces of closed braids,
a geometric linking-number brute force, and an exhaustive move search as a
fallback normalizer.

The braid surface is realized as a nested stack of Seifert discs (one per
strand) joined by one half-twisted band per letter; homology loops run
through consecutive bands on the same generator.  Linking numbers are read
off an explicit planar arrangement: chord staples inside each disc plus
band hops climbing between neighbouring discs, with two bookkeeping terms
for the half twists (loops through a twisted band pick up framing, and the
two loops sharing a letter cross once inside the twist).

Sign conventions match the presentation engine: right-handed crossings are
positive and positive generators close to negative-signature torus links.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GeometryError, InvalidMoveError, ParseError
from .invariants import (Fingerprint, LaurentPoly, alexander, determinant,
                         signature)
from .moves import MoveLog, MoveRecord, SlideSpec, band_slide
from .presentation import (SurfacePresentation, is_dipole_ready, relabel,
                           unbarred_pairs)

__all__ = ["BraidWord", "parse_braid", "braid_permutation",
           "braid_components", "braid_seifert_matrix", "braid_fingerprint",
           "geometric_linking", "bruteforce_normalize"]

Frac = Fraction

# Calibrated half-twist bookkeeping (see module docstring); frozen by the
# convention tests in tests/test_oracle.py.
_DIAG = -1          # framing of a loop: _DIAG * (eps_a + eps_b) / 2
_SHARE_POS = (1, 0)  # (V[below][above], V[above][below]) for a shared +1 letter


@dataclass(frozen=True)
class BraidWord:
    """Braid word: ``strands`` >= 1 and letters +-i for the i-th generator
    (1 <= i < strands)."""

    strands: int
    letters: tuple[int, ...]

    def __str__(self) -> str:
        return f"strands={self.strands}; " + " ".join(map(str, self.letters))


def parse_braid(text: str) -> BraidWord:
    """Parse ``strands=s; w1 w2 ...`` with nonzero signed integer letters."""
    text = text.strip()
    if not text.startswith("strands"):
        raise ParseError("braid word must start with 'strands=<s>;'")
    head, _, rest = text.partition(";")
    try:
        s = int(head.split("=", 1)[1])
    except (IndexError, ValueError) as e:
        raise ParseError("malformed strands declaration") from e
    if s < 1:
        raise ParseError("strand count must be positive")
    letters = []
    for tok in rest.replace(",", " ").split():
        try:
            w = int(tok)
        except ValueError as e:
            raise ParseError(f"bad letter {tok!r}") from e
        if w == 0:
            raise ParseError("letter 0 is not a braid generator")
        if abs(w) >= s:
            raise ParseError(f"letter {w} out of range for {s} strands")
        letters.append(w)
    return BraidWord(s, tuple(letters))


def braid_permutation(b: BraidWord) -> list[int]:
    """Permutation of strand start -> end positions (1-based)."""
    arr = list(range(1, b.strands + 1))  # arr[pos] = strand at pos
    for w in b.letters:
        i = abs(w) - 1
        arr[i], arr[i + 1] = arr[i + 1], arr[i]
    perm = [0] * (b.strands + 1)
    for pos, strand in enumerate(arr, start=1):
        perm[strand] = pos
    return perm[1:]


def braid_components(b: BraidWord) -> int:
    """Components of the closure = cycles of the strand permutation."""
    perm = braid_permutation(b)
    seen = [False] * len(perm)
    mu = 0
    for k in range(len(perm)):
        if seen[k]:
            continue
        mu += 1
        j = k
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
    return mu


# ---------------------------------------------------------------------------
# canonical Seifert matrix of the closure

def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _seg_cross(p, q, r, s):
    """Planar crossing of segments p->q and r->s with Fraction coords
    ((u, v, z) points); returns (det_dir1_dir2, z1, z2) or None."""
    rx, ry = q[0] - p[0], q[1] - p[1]
    wx, wy = s[0] - r[0], s[1] - r[1]
    den = rx * wy - ry * wx
    if den == 0:
        return None
    qx, qy = r[0] - p[0], r[1] - p[1]
    t = (qx * wy - qy * wx) / den
    u = (qx * ry - qy * rx) / den
    if not (0 < t < 1 and 0 < u < 1):
        return None
    z1 = p[2] + t * (q[2] - p[2])
    z2 = r[2] + u * (s[2] - r[2])
    return (_sgn(den), z1, z2)


def _loop_paths(b: BraidWord):
    """Homology loops of the canonical surface with explicit planar paths.

    Discs are nested: disc i occupies the zone v in (10i, 10i+5), its rim at
    v = 10i, at height z = i.  The band of letter k climbs from rim i to rim
    i+1 at u near k.  A loop through letters (a, b) on generator i hops up
    at a, chords through disc i+1, hops down at b and chords back through
    disc i.
    """
    occ: dict[int, list[int]] = {}
    for pos, w in enumerate(b.letters, start=1):
        occ.setdefault(abs(w), []).append(pos)
    zeta = Frac(1, 8)
    loops = []  # (gen index i, letter a, letter b)
    for i, positions in sorted(occ.items()):
        for a, bpos in zip(positions, positions[1:]):
            loops.append((i, a, bpos))
    # distinct chord depths per disc zone (zone i hosts the lower chords of
    # generator-i loops and the upper chords of generator-(i-1) loops)
    depth: dict[tuple[int, int], Fraction] = {}
    per_zone: dict[int, int] = {}
    for idx, (i, a, bpos) in enumerate(loops):
        for zone in (i, i + 1):
            per_zone[zone] = per_zone.get(zone, 0) + 1
            depth[(idx, zone)] = Frac(4 * per_zone[zone],
                                      4 * len(loops) + 1)
    paths = []
    for idx, (i, a, bpos) in enumerate(loops):
        d_lo = depth[(idx, i)]
        d_hi = depth[(idx, i + 1)]
        ua, ub = Frac(a) + zeta, Frac(bpos) - zeta
        zi, zj = Frac(i), Frac(i + 1)
        rim_lo, rim_hi = Frac(10 * i), Frac(10 * (i + 1))
        pts = [
            (ua, rim_lo, zi), (ua, rim_hi, zj),                  # hop up at a
            (ua, rim_hi + d_hi, zj), (ub, rim_hi + d_hi, zj),
            (ub, rim_hi, zj),                                     # chord disc i+1
            (ub, rim_lo, zi),                                     # hop down at b
            (ub, rim_lo + d_lo, zi), (ua, rim_lo + d_lo, zi),
            (ua, rim_lo, zi),                                     # chord disc i
        ]
        paths.append(pts)
    return loops, paths


def braid_seifert_matrix(b: BraidWord) -> list[list[int]]:
    """Seifert matrix of the canonical Seifert surface of the closure.

    Basis: one loop per pair of consecutive occurrences of each generator.
    Entries combine the planar crossings of the loop paths (with the
    push-off floating off each disc) and the half-twist bookkeeping.
    """
    occ: dict[int, list[int]] = {}
    for pos, w in enumerate(b.letters, start=1):
        occ.setdefault(abs(w), []).append(pos)
    sign_of = {pos: _sgn(w) for pos, w in enumerate(b.letters, start=1)}

    loops, paths = _loop_paths(b)
    m = len(loops)
    V = [[Frac(0)] * m for _ in range(m)]

    # geometric crossings
    for x in range(m):
        for y in range(m):
            if x == y:
                continue
            px, py = paths[x], paths[y]
            for sx in range(len(px) - 1):
                p, q = px[sx], px[sx + 1]
                for sy in range(len(py) - 1):
                    r, s = py[sy], py[sy + 1]
                    hit = _seg_cross(p, q, r, s)
                    if hit is None:
                        continue
                    den_sign, z1, z2 = hit
                    # sign with y's direction first: det[d_y, d_x] = -den
                    if z1 == z2 or z2 > z1:
                        # same disc (push-off of y floats above) or y above
                        V[x][y] += -den_sign
    # halve: every genuine crossing was counted once per ordered pair already
    # (the z1==z2 case applies to exactly one of the two orders' conditions
    # symmetrically, so no halving is needed)

    # half-twist bookkeeping
    index_of = {(i, a, bpos): k for k, (i, a, bpos) in enumerate(loops)}
    for k, (i, a, bpos) in enumerate(loops):
        V[k][k] += Frac(_DIAG * (sign_of[a] + sign_of[bpos]), 2)
    for i, positions in sorted(occ.items()):
        for a, bpos, c in zip(positions, positions[1:], positions[2:]):
            below = index_of[(i, a, bpos)]
            above = index_of[(i, bpos, c)]
            eps = sign_of[bpos]
            if eps > 0:
                vba, vab = _SHARE_POS
            else:
                vba, vab = -_SHARE_POS[1], -_SHARE_POS[0]
            V[below][above] += vba
            V[above][below] += vab

    out = []
    for row in V:
        r = []
        for x in row:
            if x.denominator != 1:
                raise AssertionError("non-integer Seifert entry")
            r.append(int(x))
        out.append(r)
    return out


def braid_fingerprint(b: BraidWord) -> Fingerprint:
    """(mu, Alexander class, determinant, signature) of the closure; beta1
    reports the canonical surface's rank."""
    V = braid_seifert_matrix(b)
    delta = alexander(V)
    return Fingerprint(mu=braid_components(b), delta=delta.as_tuple(),
                       det=abs(delta.eval_int(-1)), sigma=signature(V),
                       beta1=len(V))


# ---------------------------------------------------------------------------
# geometric linking oracle (independent path)

class _Degenerate(Exception):
    pass


def _seg_cross_checked(p, q, r, s):
    """Like _seg_cross but flags touching or overlapping contacts."""
    if (p[0], p[1]) == (q[0], q[1]) or (r[0], r[1]) == (s[0], s[1]):
        return None  # vertical jump: projects to a point
    rx, ry = q[0] - p[0], q[1] - p[1]
    wx, wy = s[0] - r[0], s[1] - r[1]
    den = rx * wy - ry * wx
    qx, qy = r[0] - p[0], r[1] - p[1]
    if den == 0:
        if qx * ry - qy * rx == 0:
            lo1, hi1 = sorted((p[0], q[0]))
            lo2, hi2 = sorted((r[0], s[0]))
            if rx == 0:
                lo1, hi1 = sorted((p[1], q[1]))
                lo2, hi2 = sorted((r[1], s[1]))
            if not (hi1 < lo2 or hi2 < lo1):
                raise _Degenerate
        return None
    t = (qx * wy - qy * wx) / den
    u = (qx * ry - qy * rx) / den
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    if t in (0, 1) or u in (0, 1):
        raise _Degenerate
    z1 = p[2] + t * (q[2] - p[2])
    z2 = r[2] + u * (s[2] - r[2])
    return (_sgn(den), z1, z2)


def geometric_linking(p: SurfacePresentation, i: int, j: int) -> int:
    """lk(core i, push-off of core j) from an independently built tent
    realization of a layered basket: bands as triangular tents at their
    stacking heights, chords as triangular dips in the disc, push-off at
    +epsilon.  Degenerate contacts are resolved by a deterministic apex
    perturbation; only pristine (unslid) presentations are supported."""
    if i == j:
        raise ValueError("linking of a core with itself is the framing; "
                         "use distinct bands")
    if i not in p.bands or j not in p.bands:
        raise KeyError((i, j))
    if p.move_count != 0:
        raise ValueError("geometric_linking expects an unslid basket "
                         "presentation")

    spans = sorted((abs(bd.u1 - bd.u0), bd.bid) for bd in p.bands.values())
    rank = {bid: r + 1 for r, (_, bid) in enumerate(spans)}
    eps = Frac(1, 2 ** 24)

    def tent(bid, wiggle):
        bd = p.bands[bid]
        a, b = bd.u0, bd.u1
        h = bd.path[1][2]  # stacking height of the band material
        mid = (a + b) / 2 + bid * wiggle
        pk = Frac(rank[bid]) + bid * bid * bid * wiggle
        up = [(a, Frac(0), h), (mid, pk, h), (b, Frac(0), h)]
        down = [(b, Frac(0), Frac(0)), (mid, -pk, Frac(0)),
                (a, Frac(0), Frac(0))]
        return up + down

    for attempt in range(3):
        wiggle = Frac(1, 2 ** (6 + 5 * attempt)) if attempt else Frac(0)
        ci = tent(i, wiggle)
        cj = [(u, v, z + eps) for (u, v, z) in tent(j, wiggle)]
        total = 0
        try:
            for sx in range(len(ci) - 1):
                pseg, qseg = ci[sx], ci[sx + 1]
                for sy in range(len(cj) - 1):
                    r, s = cj[sy], cj[sy + 1]
                    hit = _seg_cross_checked(pseg, qseg, r, s)
                    if hit is None:
                        continue
                    den_sign, z1, z2 = hit
                    if z2 > z1:  # j's push-off passes over core i
                        total += -den_sign  # det[d_j, d_i]
            return total
        except _Degenerate:
            continue
    raise GeometryError(
        f"degenerate tent geometry for bands {i}, {j} after two perturbations")


# ---------------------------------------------------------------------------
# brute-force normalization search

def bruteforce_normalize(p: SurfacePresentation, max_depth: int = 6):
    """Breadth-first search over boundary-compatible slides for a two-sided
    presentation with the same fingerprint; relabels are free and a single
    closing relabel is appended when needed.  Returns (presentation, log)
    with the fewest slides, or None if the depth is exhausted."""
    from .invariants import fingerprint  # local import to avoid cycles

    def ready_offset(q):
        for off in range(2 * q.n):
            if not unbarred_pairs(relabel(q, off)):
                return off
        return None

    def key_of(q):
        feet = q.feet()
        pos = {f[0]: k + 1 for k, f in enumerate(feet)}
        return frozenset(frozenset((pos[bd.u0], pos[bd.u1]))
                         for bd in q.bands.values())

    start_off = ready_offset(p)
    if start_off is not None:
        log = []
        if start_off != 0 or unbarred_pairs(p):
            if start_off != 0:
                q2 = relabel(p, start_off)
                fa, fb = fingerprint(p), fingerprint(q2)
                log.append(MoveRecord("relabel", {"offset": start_off}, fa, fb))
                return q2, MoveLog(log)
        return p, MoveLog(log)

    frontier = [(p, [])]
    seen = {key_of(p)}
    for _depth in range(max_depth):
        nxt = []
        for q, log in frontier:
            for bid in sorted(q.bands):
                for end in (0, 1):
                    for along in sorted(q.bands):
                        if along == bid:
                            continue
                        for side in ("after", "before"):
                            spec = SlideSpec(bid, end, along, side)
                            try:
                                q2 = band_slide(q, spec)
                            except InvalidMoveError:
                                continue
                            k = key_of(q2)
                            if k in seen:
                                continue
                            seen.add(k)
                            fa, fb = fingerprint(q), fingerprint(q2)
                            rec = MoveRecord("slide", spec.to_json_dict(), fa, fb)
                            log2 = log + [rec]
                            off = ready_offset(q2)
                            if off is not None:
                                if off != 0:
                                    q3 = relabel(q2, off)
                                    log2 = log2 + [MoveRecord(
                                        "relabel", {"offset": off},
                                        fingerprint(q2), fingerprint(q3))]
                                    return q3, MoveLog(log2)
                                return q2, MoveLog(log2)
                            nxt.append((q2, log2))
        frontier = nxt
        if not frontier:
            break
    return None

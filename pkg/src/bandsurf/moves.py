"""Surface moves: band slides, greedy two-sided normalization, the disc
split into a dipole, subdivision to a K_{2,n} diagram, and the hub flip.

A band slide drags one end of a band along a neighbouring band: the end's
attachment interval is removed and re-inserted next to the far end of the
along-band, and the dragged band acquires a parallel copy of the
along-band's path (hence of its crossings, with the same over/under
relations).  Only boundary-compatible slides are accepted: the moving end
must sit directly beside one end of the along-band (no feet between), the
landing side is the one the flat band's edge leads to, and the two bands'
mutual linking must vanish so the slid band stays flat.

Every move preserves the boundary-link fingerprint; logs carry the
fingerprints before and after each move so runs can be replayed and
checked bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import BandSurfError, InvalidMoveError, IterationCapExceeded
from .geometry import Frac, Pt
from .invariants import Fingerprint, LaurentPoly, fingerprint
from .presentation import (Band, DipolePresentation, K2nDiagram,
                           SurfacePresentation, is_dipole_ready, relabel,
                           unbarred_pairs, barred_pairs)

__all__ = ["SlideSpec", "MoveRecord", "MoveLog", "band_slide", "normalize",
           "to_dipole", "to_k2n", "flip_disc", "replay",
           "FingerprintMismatch"]


class FingerprintMismatch(BandSurfError):
    """A move changed the boundary-link fingerprint.  Bug trap."""


@dataclass(frozen=True)
class SlideSpec:
    """One band slide: drag ``moving_end`` of ``moving_band`` along
    ``along_band``; the end lands next to the far end of the along-band on
    ``target_side`` ('after' = clockwise of it)."""

    moving_band: int
    moving_end: int
    along_band: int
    target_side: str  # "after" | "before"

    def to_json_dict(self) -> dict:
        return {"moving_band": self.moving_band, "moving_end": self.moving_end,
                "along_band": self.along_band, "target_side": self.target_side}

    @staticmethod
    def from_json_dict(d: dict) -> "SlideSpec":
        return SlideSpec(d["moving_band"], d["moving_end"],
                         d["along_band"], d["target_side"])


@dataclass(frozen=True)
class MoveRecord:
    kind: str  # "relabel" | "slide"
    payload: dict
    fp_before: Fingerprint
    fp_after: Fingerprint


@dataclass
class MoveLog:
    records: list[MoveRecord]

    def __len__(self) -> int:
        return len(self.records)

    def slide_count(self) -> int:
        return sum(1 for r in self.records if r.kind == "slide")

    def to_json_dict(self) -> dict:
        return {"type": "move_log",
                "records": [{"kind": r.kind, "payload": r.payload,
                             "fp_before": r.fp_before.to_json_dict(),
                             "fp_after": r.fp_after.to_json_dict()}
                            for r in self.records]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_dict(d: dict) -> "MoveLog":
        recs = []
        for r in d["records"]:
            recs.append(MoveRecord(r["kind"], r["payload"],
                                   _fp_from_json(r["fp_before"]),
                                   _fp_from_json(r["fp_after"])))
        return MoveLog(recs)


def _fp_from_json(d: dict) -> Fingerprint:
    return Fingerprint(mu=d["mu"],
                       delta=tuple((e, c) for e, c in d["delta_coeffs"]),
                       det=d["det"], sigma=d["sigma"], beta1=d["beta1"])


# ---------------------------------------------------------------------------
# band slides

def _foot_u(p: SurfacePresentation, bid: int, end: int) -> Fraction:
    b = p.bands[bid]
    return b.u0 if end == 0 else b.u1


def _mutual_linking_sum(p: SurfacePresentation, i: int, j: int) -> int:
    """V[i][j] + V[j][i]: twice the linking number of the two core loops
    when their chords do not cross.  Must vanish for a flat-preserving
    slide.  Orientation-independent up to sign, so raw directions do."""
    s = 0
    a, b = min(i, j), max(i, j)
    for rec in p.ext_crossings(a, b):
        d = rec.a_dir[0] * rec.b_dir[1] - rec.a_dir[1] * rec.b_dir[0]
        sd = (d > 0) - (d < 0)
        s += -sd if rec.b_z > rec.a_z else sd
    for rec in p.chord_crossings(a, b):
        pass  # interior crossings contribute +sgn and -sgn: net zero
    return s


def band_slide(p: SurfacePresentation, spec: SlideSpec) -> SurfacePresentation:
    """Apply a band slide, rebuilding the moved band's realized path."""
    if p.disc_count != 1:
        raise InvalidMoveError("slides act on one-disc presentations")
    if spec.moving_band == spec.along_band:
        raise InvalidMoveError("cannot slide a band along itself")
    if spec.moving_band not in p.bands or spec.along_band not in p.bands:
        raise InvalidMoveError("no such band")
    if spec.moving_end not in (0, 1):
        raise InvalidMoveError("moving_end must be 0 or 1")
    if spec.target_side not in ("after", "before"):
        raise InvalidMoveError("target_side must be 'after' or 'before'")

    M = p.bands[spec.moving_band]
    A = p.bands[spec.along_band]
    m_u = _foot_u(p, spec.moving_band, spec.moving_end)
    feet = p.feet()
    m = len(feet)
    idx = next(k for k, f in enumerate(feet) if f[0] == m_u)
    if spec.target_side == "after":
        near = feet[(idx + 1) % m]
        wraps = idx == m - 1
    else:
        near = feet[(idx - 1) % m]
        wraps = idx == 0
    if near[1] != spec.along_band:
        raise InvalidMoveError(
            f"moving end is not adjacent to band {spec.along_band} on the "
            f"{spec.target_side} side")
    near_end = near[2]
    far_end = 1 - near_end
    u_near = near[0]
    u_far = _foot_u(p, spec.along_band, far_end)

    if _mutual_linking_sum(p, spec.moving_band, spec.along_band) != 0:
        raise InvalidMoveError(
            "slide would twist the moving band (nonzero mutual linking "
            "with the along-band)")

    # landing slot: immediately beside the far foot on the target side,
    # stopping short of the next foot or the marked point
    U_L, U_R, depth = p.rect
    rem = sorted(f[0] for f in feet if f[0] != m_u)
    fi = rem.index(u_far)
    if spec.target_side == "after":
        bound = rem[fi + 1] if fi + 1 < len(rem) else U_R
        if p.marker_u is not None and u_far < p.marker_u < bound:
            bound = p.marker_u
        u_new = (u_far + bound) / 2
    else:
        bound = rem[fi - 1] if fi - 1 >= 0 else U_L
        if p.marker_u is not None and bound < p.marker_u < u_far:
            bound = p.marker_u
        u_new = (bound + u_far) / 2

    mc = p.move_count + 1
    gamma = Frac(1, 2 ** (6 + mc))
    c = gamma / 2
    sigma = gamma / (4 + mc)
    if spec.target_side == "after":
        u_x = u_near - sigma
        u_y = u_far + sigma
    else:
        u_x = u_near + sigma
        u_y = u_far - sigma
    if not (min(u_far, u_new) < u_y < max(u_far, u_new)):
        raise InvalidMoveError("landing gap too narrow for the slide")

    path = list(M.path)
    if spec.moving_end == 0:
        path.reverse()
    # drop the foot seat (the vertices at the moving foot on the edge)
    if not (path[-1][0] == m_u and path[-1][1] == 0):
        raise AssertionError("malformed band path")
    while path and path[-1][0] == m_u and path[-1][1] == 0:
        path.pop()
    last = path[-1]
    if not (last[0] == m_u and last[1] > 0):
        raise AssertionError("malformed band path after trim")

    # Parallel copy of the along-band's interior: drop the foot seats and the
    # leg bottoms (v = 0 material); the entry and exit slants replace the legs
    # and pick up the same crossings, since nothing lives below the fresh
    # collar height.
    if near_end == 0:
        cp = list(A.path[2:-2])
    else:
        cp = list(reversed(A.path))[2:-2]
    if not cp or cp[0][1] <= 0 or cp[-1][1] <= 0:
        raise AssertionError("malformed along-band path")
    z_in, z_out = cp[0][2], cp[-1][2]
    zero = Frac(0)

    tail: list[Pt] = [(m_u, gamma, last[2]), (m_u, gamma, c)]
    if wraps:
        vb = -(depth + 1) - gamma
        if spec.target_side == "after":  # around the right side
            tail += [(U_R + gamma, gamma, c), (U_R + gamma, vb, c),
                     (U_L - gamma, vb, c), (U_L - gamma, gamma, c)]
        else:  # around the left side
            tail += [(U_L - gamma, gamma, c), (U_L - gamma, vb, c),
                     (U_R + gamma, vb, c), (U_R + gamma, gamma, c)]
    tail += [(u_x, gamma, c), (u_x, gamma, z_in)]
    tail += cp
    tail += [(u_y, gamma, z_out), (u_y, gamma, c),
             (u_new, gamma, c), (u_new, zero, c), (u_new, zero, zero)]
    new_path = path + tail
    if spec.moving_end == 0:
        new_path.reverse()
        new_band = Band(M.bid, u_new, M.u1, tuple(new_path))
    else:
        new_band = Band(M.bid, M.u0, u_new, tuple(new_path))

    bands = dict(p.bands)
    bands[M.bid] = new_band
    cache = {key: recs for key, recs in p._ext_cache.items()
             if M.bid not in key}
    return SurfacePresentation(p.n, bands, p.marker_u, mc,
                               provenance="slide",
                               realizability=p.realizability,
                               _ext_cache=cache)


# ---------------------------------------------------------------------------
# greedy normalization

def normalize(p: SurfacePresentation, cap: int | None = None,
              check: bool = True) -> tuple[SurfacePresentation, MoveLog]:
    """Slide and relabel until every band joins an unbarred interval to a
    barred one.  Follows the constructive reading of the two-sidedness
    argument: repeatedly remove the unbarred pair with maximal second leg,
    sliding it over its clockwise neighbour; when the pair ends at interval
    n and the first barred interval is matched to an unbarred one, move the
    marked point just before the last interval and attack the barred pairs
    instead.  Raises IterationCapExceeded after ``cap`` moves (default
    8 n^2) or on a repeated state."""
    n = p.n
    if cap is None:
        cap = 8 * n * n
    q = p
    records: list[MoveRecord] = []
    seen: set = set()

    def do(kind: str, payload: dict, q_next: SurfacePresentation,
           q_prev: SurfacePresentation):
        fa, fb = fingerprint(q_prev), fingerprint(q_next)
        if check and (fa.mu, fa.delta, fa.det, fa.sigma, fa.beta1) != \
                (fb.mu, fb.delta, fb.det, fb.sigma, fb.beta1):
            raise FingerprintMismatch(f"{kind} {payload}: {fa} -> {fb}")
        records.append(MoveRecord(kind, payload, fa, fb))

    def state_key(q):
        marker_gap = sum(1 for f in q.feet() if q.marker_u is not None
                         and f[0] < q.marker_u)
        wrap = q.marker_u is None
        return (frozenset(q.pairing().pairs), wrap, marker_gap)

    while True:
        omega = unbarred_pairs(q)
        if not omega:
            break
        if len(records) >= cap:
            raise IterationCapExceeded(f"no two-sided form within {cap} moves")
        key = state_key(q)
        if key in seen:
            raise IterationCapExceeded("normalization revisited a state")
        seen.add(key)

        j = max(b for _, b in omega)
        i = min(a for a, b in omega if b == j)
        pairing = q.pairing()
        def apply_slide_or_fallback(q, spec, omega_size):
            try:
                q2 = band_slide(q, spec)
            except InvalidMoveError:
                for kind, payload, q2 in _fallback_moves(q, omega_size):
                    do(kind, payload, q2, q)
                    q = q2
                return q
            do("slide", spec.to_json_dict(), q2, q)
            return q2

        if j < n:
            mover = q.foot_at_position(j)
            along = q.foot_at_position(j + 1)
            spec = SlideSpec(mover[0], mover[1], along[0], "after")
            q = apply_slide_or_fallback(q, spec, len(omega))
            continue
        # j == n: the pair is {i, n}
        first_barred_partner = pairing.partner(n + 1)
        if first_barred_partner > n:
            mover = q.foot_at_position(n)
            along = q.foot_at_position(n + 1)
            spec = SlideSpec(mover[0], mover[1], along[0], "after")
            q = apply_slide_or_fallback(q, spec, len(omega))
            continue
        # move the marked point between intervals (n-1)' and n'
        off = 2 * n - 1
        q2 = relabel(q, off)
        do("relabel", {"offset": off}, q2, q)
        q = q2
        omega = unbarred_pairs(q)
        if not omega:
            break
        pairing = q.pairing()
        candidates = []
        for l, mm in barred_pairs(q):
            if mm < n and pairing.partner(n + mm + 1) <= n:
                candidates.append((mm, l))
        if not candidates:
            continue  # re-enter the main loop; the state guard stops cycles
        mm = max(c[0] for c in candidates)
        mover = q.foot_at_position(n + mm)
        along = q.foot_at_position(n + mm + 1)
        spec = SlideSpec(mover[0], mover[1], along[0], "after")
        q = apply_slide_or_fallback(q, spec, len(unbarred_pairs(q)))

    return q, MoveLog(records)


def _fallback_moves(q: SurfacePresentation, omega_size: int):
    """Deterministic escape hatch for the rare states where the prescribed
    slide would twist its band (its two bands became linked through earlier
    slides): find the first relabel-plus-slide combination that strictly
    shrinks the unbarred pair set and return it as a move list."""
    n = q.n
    for off in range(0, 2 * n):
        qr = relabel(q, off) if off else q
        for bid in sorted(qr.bands):
            for end in (0, 1):
                for along in sorted(qr.bands):
                    if along == bid:
                        continue
                    for side in ("after", "before"):
                        spec = SlideSpec(bid, end, along, side)
                        try:
                            q2 = band_slide(qr, spec)
                        except InvalidMoveError:
                            continue
                        if len(unbarred_pairs(q2)) < omega_size:
                            moves = []
                            if off:
                                moves.append(("relabel", {"offset": off}, qr))
                            moves.append(("slide", spec.to_json_dict(), q2))
                            return moves
    raise IterationCapExceeded(
        "no unbarred-reducing slide reachable from this state")


# ---------------------------------------------------------------------------
# disc split, subdivision, flip

def to_dipole(p: SurfacePresentation) -> DipolePresentation:
    """Split the disc between intervals n|n+1 and 2n|1 and insert one flat
    connector band: a flat dipole with n+1 bands.  Requires a two-sided
    presentation.  The split is an isotopy, so the boundary invariants are
    carried by the parent realization and re-verified on the new structure."""
    if not is_dipole_ready(p):
        raise InvalidMoveError("presentation is not two-sided; normalize first")
    n = p.n
    conn = n + 1
    d1 = tuple(p.foot_at_position(k) for k in range(1, n + 1)) + ((conn, 0),)
    d2 = tuple(p.foot_at_position(k) for k in range(n + 1, 2 * n + 1)) + ((conn, 1),)
    return DipolePresentation(parent=p, connector=conn,
                              d1_order=d1, d2_order=d2)


def to_k2n(d: DipolePresentation) -> K2nDiagram:
    """Subdivide every band of the dipole at its middle: one new vertex per
    band, two flat edges, giving an embedded K_{2,k} with k = band count."""
    if not isinstance(d, DipolePresentation):
        raise InvalidMoveError("to_k2n expects a dipole presentation")
    k = d.band_count
    return K2nDiagram(dipole=d, voltages=tuple((0, 0) for _ in range(k)),
                      flipped=None)


def flip_disc(g: K2nDiagram, hub: str) -> K2nDiagram:
    """Flip the two hub discs (the bipartition class of size 2): every edge
    gains a half twist.  The half twists at the named hub are recorded as
    +1 and those at the other hub as -1, so each subdivided band keeps net
    framing zero.  Applying the flip again undoes it."""
    if hub not in ("d1", "d2"):
        raise InvalidMoveError("hub must be 'd1' or 'd2'")
    k = g.k
    plus_first = hub == "d1"
    pattern = tuple((1, -1) if plus_first else (-1, 1) for _ in range(k))
    if all(v == (0, 0) for v in g.voltages):
        return K2nDiagram(dipole=g.dipole, voltages=pattern, flipped=hub)
    if g.flipped == hub and g.voltages == pattern:
        return K2nDiagram(dipole=g.dipole,
                          voltages=tuple((0, 0) for _ in range(k)),
                          flipped=None)
    raise InvalidMoveError("voltages are not all 0 (or do not match the "
                           "recorded flip)")


# ---------------------------------------------------------------------------
# replay

def replay(initial: SurfacePresentation, log: MoveLog,
           check: bool = True) -> SurfacePresentation:
    """Re-apply a move log to its initial presentation.  With ``check`` the
    recorded fingerprints are verified move by move."""
    q = initial
    for rec in log.records:
        fa = fingerprint(q)
        if check and fa != rec.fp_before:
            raise FingerprintMismatch(f"replay diverged before {rec.kind}")
        if rec.kind == "relabel":
            q = relabel(q, rec.payload["offset"])
        elif rec.kind == "slide":
            q = band_slide(q, SlideSpec.from_json_dict(rec.payload))
        else:
            raise InvalidMoveError(f"unknown move kind {rec.kind!r}")
        fb = fingerprint(q)
        if check and fb != rec.fp_after:
            raise FingerprintMismatch(f"replay diverged after {rec.kind}")
    return q

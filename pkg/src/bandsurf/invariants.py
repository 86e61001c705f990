"""Exact integer Laurent polynomials and the Seifert-matrix invariant
family used as the preservation fingerprint for every move.

No floating point anywhere: polynomial arithmetic over Z, determinants by
minor expansion over Z[t], signatures by exact rational symmetric
elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import topology
from .presentation import DipolePresentation, K2nDiagram, SurfacePresentation

__all__ = ["LaurentPoly", "alexander", "determinant", "signature",
           "Fingerprint", "fingerprint", "fingerprints_agree"]


class LaurentPoly:
    """Integer Laurent polynomial in one variable, stored as a canonical
    exponent -> coefficient map with no zero coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {e: int(c) for e, c in (coeffs or {}).items() if c != 0}

    # -- ring structure ----------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    @staticmethod
    def const(c: int) -> "LaurentPoly":
        return LaurentPoly({0: c})

    @staticmethod
    def t(exp: int = 1, coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly({exp: coeff})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def eval_int(self, x: int) -> int:
        return sum(c * x ** e for e, c in self.coeffs.items())

    # -- canonical forms ----------------------------------------------------

    def unit_normal(self) -> "LaurentPoly":
        """Representative of the class up to units +-t^k: lowest exponent 0,
        positive coefficient there.  Zero is its own class."""
        if not self.coeffs:
            return LaurentPoly()
        lo = min(self.coeffs)
        q = self.shift(-lo)
        if q.coeffs[0] < 0:
            q = -q
        return q

    def as_tuple(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.coeffs.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mag = abs(c)
            if e == 0:
                body = str(mag)
            elif e == 1:
                body = "t" if mag == 1 else f"{mag}t"
            else:
                body = f"t^{e}" if mag == 1 else f"{mag}t^{e}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    __repr__ = __str__


def _poly_det(M: list[list[LaurentPoly]]) -> LaurentPoly:
    """Determinant over Z[t, 1/t] by first-row minor expansion with a memo
    over column subsets (exact; fine for the small ranks used here)."""
    n = len(M)
    if n == 0:
        return LaurentPoly.one()
    memo: dict[int, LaurentPoly] = {}

    def rec(row: int, colmask: int) -> LaurentPoly:
        if row == n:
            return LaurentPoly.one()
        if colmask in memo:
            return memo[colmask]
        total = LaurentPoly.zero()
        sign = 1
        for c in range(n):
            bit = 1 << c
            if not colmask & bit:
                continue
            entry = M[row][c]
            if not entry.is_zero():
                sub = rec(row + 1, colmask & ~bit)
                term = entry * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
        memo[colmask] = total
        return total

    return rec(0, (1 << n) - 1)


def alexander(V: list[list[int]]) -> LaurentPoly:
    """det(V - t V^T), unit-normalized (the one-variable Alexander class of
    the boundary link of the surface carrying V)."""
    n = len(V)
    M = [[LaurentPoly({0: V[i][j], 1: -V[j][i]}) for j in range(n)]
         for i in range(n)]
    return _poly_det(M).unit_normal()


def determinant(V: list[list[int]]) -> int:
    """|Alexander class evaluated at -1| = |det(V + V^T)|."""
    return abs(alexander(V).eval_int(-1))


def signature(V: list[list[int]]) -> int:
    """Signature of the symmetrized matrix V + V^T, by exact rational
    congruence reduction (zero eigenvalues excluded)."""
    n = len(V)
    M = [[Fraction(V[i][j] + V[j][i]) for j in range(n)] for i in range(n)]
    idx = list(range(n))
    sig = 0
    while idx:
        piv = next((i for i in idx if M[i][i] != 0), None)
        if piv is not None:
            d = M[piv][piv]
            sig += 1 if d > 0 else -1
            rest = [i for i in idx if i != piv]
            for i in rest:
                ri = M[i][piv]
                if ri == 0:
                    continue
                for j in rest:
                    M[i][j] -= ri * M[piv][j] / d
            for i in rest:
                M[i][piv] = M[piv][i] = Fraction(0)
            idx = rest
            continue
        off = next(((i, j) for i in idx for j in idx
                    if i < j and M[i][j] != 0), None)
        if off is None:
            break  # all zero: remaining block contributes nothing
        i0, j0 = off
        b = M[i0][j0]
        rest = [i for i in idx if i not in (i0, j0)]
        # hyperbolic pair: signature contribution 0; clear its couplings
        for k in rest:
            for l in rest:
                M[k][l] -= (M[k][i0] * M[l][j0] + M[k][j0] * M[l][i0]) / b
        for k in rest:
            M[k][i0] = M[i0][k] = M[k][j0] = M[j0][k] = Fraction(0)
        idx = rest
    return sig


# ---------------------------------------------------------------------------
# fingerprints

@dataclass(frozen=True)
class Fingerprint:
    """Preservation certificate: boundary count, Alexander class, link
    determinant, signature, and the surface's first Betti number."""

    mu: int
    delta: tuple[tuple[int, int], ...]  # unit-normal Laurent coefficients
    det: int
    sigma: int
    beta1: int | None

    @property
    def delta_poly(self) -> LaurentPoly:
        return LaurentPoly(dict(self.delta))

    def delta_str(self) -> str:
        return str(self.delta_poly)

    def to_json_dict(self) -> dict:
        return {"mu": self.mu, "delta": self.delta_str(),
                "delta_coeffs": [list(t) for t in self.delta],
                "det": self.det, "sigma": self.sigma, "beta1": self.beta1}


def fingerprint(obj) -> Fingerprint:
    """Fingerprint of a presentation in any of its three forms.  K_{2,n}
    diagrams are fingerprinted through their underlying banded realization
    (subdividing a band does not change its core)."""
    if not isinstance(obj, (SurfacePresentation, DipolePresentation, K2nDiagram)):
        raise TypeError(type(obj).__name__)
    V = topology.seifert_matrix(obj)
    ed = topology.euler_data(obj)
    delta = alexander(V)
    return Fingerprint(mu=ed.mu, delta=delta.as_tuple(),
                       det=abs(delta.eval_int(-1)),
                       sigma=signature(V), beta1=ed.beta1)


def fingerprints_agree(a: Fingerprint, b: Fingerprint,
                       ignore_beta1: bool = False) -> bool:
    """Equality of fingerprints; with ``ignore_beta1`` compares only the
    boundary-link invariants (used against the braid oracle, whose surface
    has a different Betti number)."""
    core = (a.mu, a.delta, a.det, a.sigma) == (b.mu, b.delta, b.det, b.sigma)
    return core if ignore_beta1 else core and a.beta1 == b.beta1

"""Reference basis, piecewise-polynomial functions, exact kernel coefficients.

The basis over L^2([0,1], dx) is the shifted normalized Legendre system

    e_j(x) = sqrt(2j-1) * L_{j-1}(2x - 1),    j = 1..N,   e_1 = 1.

Coefficients of a piecewise polynomial against e_j are exact objects
``(rational) * sqrt(2j-1)`` (:class:`~wicklab.exact.Rad`); any product of two
coefficients carrying the same index set is therefore exactly rational, which
is what makes the norm and isometry identities checkable without floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..exact import (
    Poly,
    Q,
    Rad,
    as_fraction,
    p_add,
    p_antideriv,
    p_eval,
    p_integrate,
    p_mul,
    p_scale,
)

__all__ = [
    "shifted_legendre",
    "LegendreBasis",
    "PiecewisePoly",
    "ChaosVector",
    "SymmetricKernel2",
    "coeffs_of",
    "triangle_kernel",
]


def shifted_legendre(n: int) -> Poly:
    """Exact coefficients of L_n(2x-1) on [0,1] (unnormalized, L_n(1) = 1)."""
    if n == 0:
        return [Q(1)]
    prev, cur = [Q(1)], [Q(-1), Q(2)]  # L_0, L_1 in the shifted variable
    for k in range(1, n):
        nxt = p_scale(p_mul([Q(-1), Q(2)], cur), Q(2 * k + 1, k + 1))
        nxt = p_add(nxt, p_scale(prev, Q(-k, k + 1)))
        prev, cur = cur, nxt
    return cur


@dataclass(frozen=True)
class LegendreBasis:
    """The first N shifted normalized Legendre functions."""

    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("truncation must be >= 1")
        object.__setattr__(
            self, "_polys", tuple(tuple(shifted_legendre(j)) for j in range(self.N))
        )

    def poly(self, j: int) -> Poly:
        """Unnormalized part of e_j (1-based index)."""
        return list(self._polys[j - 1])

    def weight(self, j: int) -> int:
        """Squared normalization: e_j = sqrt(weight) * poly."""
        return 2 * j - 1

    def orthonormality_defect(self) -> Fraction:
        """max |<e_j, e_k> - delta_jk| over the truncation, exact."""
        worst = Q(0)
        for j in range(1, self.N + 1):
            for k in range(j, self.N + 1):
                val = p_integrate(p_mul(self.poly(j), self.poly(k)), Q(0), Q(1))
                if j == k:
                    val = val * self.weight(j) - 1
                else:
                    sq = val * val * self.weight(j) * self.weight(k)
                    val = sq  # off-diagonal enters squared to stay rational
                worst = max(worst, abs(val))
        return worst


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial on [0,1] with exact rational breakpoints.

    ``pieces`` are (lo, hi, coeffs) with lo < hi; the function vanishes off
    the listed pieces.  Pieces must be non-overlapping and sorted.
    """

    pieces: tuple

    def __post_init__(self):
        norm = []
        last = Q(0)
        for lo, hi, coeffs in self.pieces:
            lo, hi = as_fraction(lo), as_fraction(hi)
            if not (0 <= lo < hi <= 1):
                raise ValueError("pieces must sit inside [0,1]")
            if lo < last:
                raise ValueError("pieces must be sorted and disjoint")
            last = hi
            norm.append((lo, hi, tuple(as_fraction(c) for c in coeffs)))
        object.__setattr__(self, "pieces", tuple(norm))

    # -- constructors --------------------------------------------------------
    @staticmethod
    def from_poly(coeffs: Sequence) -> "PiecewisePoly":
        return PiecewisePoly(((Q(0), Q(1), tuple(coeffs)),))

    @staticmethod
    def constant(c) -> "PiecewisePoly":
        return PiecewisePoly.from_poly([c])

    # -- algebra ---------------------------------------------------------------
    def cut(self, t) -> "PiecewisePoly":
        """Restriction to (0, t]."""
        t = as_fraction(t)
        out = []
        for lo, hi, c in self.pieces:
            if lo >= t:
                break
            out.append((lo, min(hi, t), c))
        return PiecewisePoly(tuple(out))

    def mul_poly(self, q: Sequence) -> "PiecewisePoly":
        q = list(q)
        return PiecewisePoly(
            tuple((lo, hi, tuple(p_mul(list(c), q))) for lo, hi, c in self.pieces)
        )

    def __mul__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        cuts = sorted(
            {x for lo, hi, _ in self.pieces for x in (lo, hi)}
            | {x for lo, hi, _ in other.pieces for x in (lo, hi)}
        )
        out = []
        for a, b in zip(cuts, cuts[1:]):
            pa = self._piece_at(a, b)
            pb = other._piece_at(a, b)
            if pa is not None and pb is not None:
                prod = p_mul(list(pa), list(pb))
                if prod:
                    out.append((a, b, tuple(prod)))
        return PiecewisePoly(tuple(out))

    def _piece_at(self, a: Fraction, b: Fraction) -> Optional[tuple]:
        for lo, hi, c in self.pieces:
            if lo <= a and b <= hi:
                return c
        return None

    def integral(self) -> Fraction:
        return sum((p_integrate(list(c), lo, hi) for lo, hi, c in self.pieces), Q(0))

    def antiderivative(self) -> "PiecewisePoly":
        """F(x) = integral over (0, x], extended by constants across gaps."""
        out = []
        acc = Q(0)
        cursor = Q(0)
        for lo, hi, c in self.pieces:
            if lo > cursor:
                out.append((cursor, lo, (acc,)))
            F = p_antideriv(list(c))
            shift = acc - p_eval(F, lo)
            out.append((lo, hi, tuple(p_add(F, [shift])) or (Q(0),)))
            acc = acc + p_integrate(list(c), lo, hi)
            cursor = hi
        if cursor < 1:
            out.append((cursor, Q(1), (acc,)))
        return PiecewisePoly(tuple(out))

    def eval(self, x) -> Fraction:
        x = as_fraction(x)
        for lo, hi, c in self.pieces:
            if lo < x <= hi or (x == 0 and lo == 0):
                return p_eval(list(c), x)
        return Q(0)

    def __call__(self, x: float) -> float:
        xf = float(x)
        for lo, hi, c in self.pieces:
            if float(lo) < xf <= float(hi) or (xf == 0.0 and lo == 0):
                acc = 0.0
                for coef in reversed(c):
                    acc = acc * xf + float(coef)
                return acc
        return 0.0


# ---------------------------------------------------------------------------
# coefficient containers


@dataclass(frozen=True)
class ChaosVector:
    """Coefficients <h, e_j>, j = 1..N, as exact radical-weighted rationals."""

    coeffs: tuple  # tuple[Rad]

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def norm2(self) -> Fraction:
        return sum((c.square() for c in self.coeffs), Q(0))

    def dot(self, other: "ChaosVector") -> Fraction:
        if self.N != other.N:
            raise ValueError("mismatched truncations")
        return sum(((a * b).rational() for a, b in zip(self.coeffs, other.coeffs)), Q(0))

    def floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    @staticmethod
    def from_rationals(values: Sequence) -> "ChaosVector":
        return ChaosVector(tuple(Rad(as_fraction(v)) for v in values))


@dataclass(frozen=True)
class SymmetricKernel2:
    """Symmetric order-2 coefficient matrix a_jk = <f, e_j (x) e_k>."""

    entries: tuple  # tuple of N tuples of Rad

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ValueError("kernel matrix must be square")
        for j in range(n):
            for k in range(j):
                if self.entries[j][k] != self.entries[k][j]:
                    raise ValueError("kernel matrix must be symmetric")

    @property
    def N(self) -> int:
        return len(self.entries)

    def at(self, j: int, k: int) -> Rad:
        """Entry a_jk, 1-based indices."""
        return self.entries[j - 1][k - 1]

    def norm2(self) -> Fraction:
        """Full tensor norm: sum over ordered pairs of squared entries."""
        return sum((e.square() for row in self.entries for e in row), Q(0))

    def diag_sq_sum(self) -> Fraction:
        return sum((self.entries[j][j].square() for j in range(self.N)), Q(0))

    def offdiag_sq_sum(self) -> Fraction:
        return sum(
            (
                self.entries[j][k].square()
                for j in range(self.N)
                for k in range(self.N)
                if j != k
            ),
            Q(0),
        )

    def floats(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.entries])

    @staticmethod
    def from_rationals(rows: Sequence[Sequence]) -> "SymmetricKernel2":
        return SymmetricKernel2(
            tuple(tuple(Rad(as_fraction(v)) for v in row) for row in rows)
        )

    @staticmethod
    def basis_element(N: int, j: int, k: int, value=1) -> "SymmetricKernel2":
        """value * (e_j o e_k): entries value at (j,k) and (k,j)."""
        rows = [[Rad(Q(0)) for _ in range(N)] for _ in range(N)]
        rows[j - 1][k - 1] = Rad(as_fraction(value))
        rows[k - 1][j - 1] = Rad(as_fraction(value))
        return SymmetricKernel2(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# exact projections


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to settle; carries the residual estimate."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"quadrature did not converge (residual {residual:.3e})")


def coeffs_of_callable(
    f, basis: LegendreBasis, t_cut: Optional[float] = None, tol: float = 1e-10
) -> np.ndarray:
    """Float coefficients <f 1_(0,t], e_j> for a black-box integrand.

    Composite Gauss-Legendre with dyadic refinement; raises
    :class:`QuadratureError` with the last inter-level residual when the
    refinement fails to settle below ``tol``.
    """
    hi = 1.0 if t_cut is None else float(t_cut)
    polys = [
        np.array([float(c) for c in basis.poly(j)]) for j in range(1, basis.N + 1)
    ]
    weights = [math.sqrt(basis.weight(j)) for j in range(1, basis.N + 1)]

    def level(m: int) -> np.ndarray:
        nodes, wts = np.polynomial.legendre.leggauss(12)
        edges = np.linspace(0.0, hi, m + 1)
        out = np.zeros(basis.N)
        for a, b in zip(edges, edges[1:]):
            x = 0.5 * (b - a) * nodes + 0.5 * (a + b)
            fx = np.array([f(t) for t in x])
            for j in range(basis.N):
                ex = np.polyval(polys[j][::-1], x)
                out[j] += 0.5 * (b - a) * float((wts * fx * ex).sum()) * weights[j]
        return out

    prev = level(1)
    for m in (2, 4, 8, 16, 32, 64):
        cur = level(m)
        residual = float(np.abs(cur - prev).max())
        if residual < tol:
            return cur
        prev = cur
    raise QuadratureError(residual)


def coeffs_of(
    h: PiecewisePoly, basis: LegendreBasis, t_cut: Optional[Fraction] = None
) -> ChaosVector:
    """Exact coefficients <h * 1_{(0,t]}, e_j> for piecewise-polynomial h."""
    hh = h if t_cut is None else h.cut(t_cut)
    out = []
    for j in range(1, basis.N + 1):
        val = hh.mul_poly(basis.poly(j)).integral()
        out.append(Rad(val, basis.weight(j)))
    return ChaosVector(tuple(out))


def triangle_kernel(
    h: PiecewisePoly, g: PiecewisePoly, basis: LegendreBasis, t_cut: Optional[Fraction] = None
):
    """Coefficients of the triangle kernel h(x) g(y) 1_{x < y} (g cut at t).

    Returns ``(sym, raw)``: ``raw[u][v] = <h (x) g 1_C, e_u (x) e_v>`` and
    ``sym`` the symmetrized kernel (raw + raw^T)/2 driving the integral.
    """
    gg = g if t_cut is None else g.cut(t_cut)
    N = basis.N
    inner = [h.mul_poly(basis.poly(u)).antiderivative() for u in range(1, N + 1)]
    raw = [[None] * N for _ in range(N)]
    for u in range(N):
        for v in range(N):
            integrand = (gg.mul_poly(basis.poly(v + 1))) * inner[u]
            raw[u][v] = Rad(integrand.integral(), basis.weight(u + 1) * basis.weight(v + 1))
    sym = tuple(
        tuple((raw[u][v] + raw[v][u]) * Q(1, 2) for v in range(N)) for u in range(N)
    )
    return SymmetricKernel2(sym), tuple(tuple(row) for row in raw)

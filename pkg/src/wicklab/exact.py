"""Exact arithmetic workhorses shared across the package.

Three layers live here:

* dense rational polynomials, stored little-endian as ``list[Fraction]``
  (index k holds the coefficient of ``x**k``);
* :class:`Rad`, numbers of the form ``q * sqrt(w)`` with rational ``q`` and a
  positive integer radicand ``w`` -- enough to carry orthonormal-basis
  coefficients exactly (products of two coefficients with matching radicands
  collapse back to rationals);
* exact linear algebra on rational matrices (rank, kernel, PSD test) via
  fraction-free elimination, so ranks never depend on float thresholds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

# ---------------------------------------------------------------------------
# rational parsing


def as_fraction(x) -> Fraction:
    """Coerce int/str/Fraction to Fraction; floats are rejected on purpose."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def frac_str(x: Fraction) -> str:
    """Serialize a rational as 'p/q' (or 'p' when q == 1)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# dense rational polynomials

Poly = list  # list[Fraction], little-endian


def p_trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def p_add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    n = max(len(a), len(b))
    out = [Q(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return p_trim(out)


def p_scale(a: Sequence[Fraction], c: Fraction) -> Poly:
    return p_trim([c * x for x in a])


def p_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    if not a or not b:
        return []
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return p_trim(out)


def p_eval(a: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Q(0)
    for c in reversed(list(a)):
        acc = acc * x + c
    return acc


def p_deriv(a: Sequence[Fraction], order: int = 1) -> Poly:
    p = list(a)
    for _ in range(order):
        p = [Q(k) * p[k] for k in range(1, len(p))]
    return p_trim(p)


def p_antideriv(a: Sequence[Fraction]) -> Poly:
    """Antiderivative with zero constant term."""
    return p_trim([Q(0)] + [c / (k + 1) for k, c in enumerate(a)])


def p_integrate(a: Sequence[Fraction], lo: Fraction, hi: Fraction) -> Fraction:
    F = p_antideriv(a)
    return p_eval(F, hi) - p_eval(F, lo)


def p_compose(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    """a(b(x)), exact."""
    out: Poly = []
    for c in reversed(list(a)):
        out = p_add(p_mul(out, b), [c])
    return out


def p_eval_float(a: Sequence[Fraction], x: float) -> float:
    acc = 0.0
    for c in reversed(list(a)):
        acc = acc * x + float(c)
    return acc


# ---------------------------------------------------------------------------
# q * sqrt(w) exact scalars


def _split_square(w: int) -> tuple[int, int]:
    """w = s^2 * w0 with w0 squarefree; returns (s, w0). Trial division."""
    s, w0, d = 1, 1, 2
    while d * d <= w:
        while w % (d * d) == 0:
            s *= d
            w //= d * d
        if w % d == 0:
            w0 *= d
            w //= d
        d += 1
    return s, w0 * w


class Rad:
    """Exact ``q * sqrt(w)`` with q rational and w a positive squarefree int.

    Addition is only defined between terms with equal radicands (that is the

    only case the package ever needs: sums of basis coefficients always share
    the index-determined radicand).  Products normalize the radicand, so a
    product of two coefficients with matching radicands is recognized as
    rational (``w == 1``).
    """

    __slots__ = ("q", "w")

    def __init__(self, q, w: int = 1):
        q = as_fraction(q) if not isinstance(q, Fraction) else q
        if w <= 0:
            raise ValueError("radicand must be positive")
        if q == 0:
            w = 1
        elif w != 1:
            s, w0 = _split_square(w)
            q, w = q * s, w0
        self.q = q
        self.w = w

    # -- ring ops ----------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, Rad):
            return Rad(self.q * other.q, self.w * other.w)
        if isinstance(other, RadSum):
            return NotImplemented  # RadSum.__rmul__ takes over
        return Rad(self.q * as_fraction(other), self.w)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, RadSum):
            return NotImplemented  # RadSum.__radd__ takes over
        other = other if isinstance(other, Rad) else Rad(as_fraction(other))
        if self.q == 0:
            return other
        if other.q == 0:
            return self
        if self.w != other.w:
            raise ValueError(f"incompatible radicands: {self.w} vs {other.w}")
        return Rad(self.q + other.q, self.w)

    __radd__ = __add__

    def __neg__(self):
        return Rad(-self.q, self.w)

    def __sub__(self, other):
        return self + (-(other if isinstance(other, Rad) else Rad(as_fraction(other))))

    def __rsub__(self, other):
        return (-self) + other

    def __eq__(self, other):
        if isinstance(other, RadSum):
            return NotImplemented
        try:
            other = other if isinstance(other, Rad) else Rad(as_fraction(other))
        except TypeError:
            return NotImplemented
        return self.q == other.q and self.w == other.w

    def __hash__(self):
        return hash((self.q, self.w))

    def __repr__(self):
        return f"Rad({self.q!r}, {self.w})" if self.w != 1 else f"Rad({self.q!r})"

    def __float__(self):
        return float(self.q) * math.sqrt(self.w)

    # -- views -------------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.w == 1 or self.q == 0

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self!r} carries a surviving radical")
        return self.q

    def square(self) -> Fraction:
        return self.q * self.q * self.w


RAD_ZERO = Rad(Q(0))


def rad_sum(terms: Iterable[Rad]) -> Rad:
    acc = RAD_ZERO
    for t in terms:
        acc = acc + t
    return acc


class RadSum:
    """Finite sums ``sum_w q_w * sqrt(w)`` over squarefree radicands.

    The closure of :class:`Rad` under addition: annihilation operators mix
    coefficients with different radicands, so fourth-moment expectations live
    here.  Supports ring arithmetic, exact equality, and certified rational
    enclosures for comparisons against rationals.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t: dict[int, Fraction] = {}
        if isinstance(terms, Rad):
            if terms.q:
                t[terms.w] = terms.q
        elif isinstance(terms, dict):
            for w, q in terms.items():
                if q:
                    t[w] = t.get(w, Q(0)) + q
        elif terms is not None:
            t[1] = as_fraction(terms)
        self.terms = {w: q for w, q in t.items() if q}

    @staticmethod
    def _coerce(x) -> "RadSum":
        if isinstance(x, RadSum):
            return x
        if isinstance(x, Rad):
            return RadSum(x)
        return RadSum(as_fraction(x))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for w, q in other.terms.items():
            out[w] = out.get(w, Q(0)) + q
        return RadSum(out)

    __radd__ = __add__

    def __neg__(self):
        return RadSum({w: -q for w, q in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[int, Fraction] = {}
        for w1, q1 in self.terms.items():
            for w2, q2 in other.terms.items():
                s, w0 = _split_square(w1 * w2)
                out[w0] = out.get(w0, Q(0)) + q1 * q2 * s
        return RadSum(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"RadSum({self.terms!r})"

    def __float__(self):
        return float(sum(float(q) * math.sqrt(w) for w, q in self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_rational(self) -> bool:
        return all(w == 1 for w in self.terms)

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self!r} carries surviving radicals")
        return self.terms.get(1, Q(0))

    def bounds(self, digits: int = 30) -> tuple[Fraction, Fraction]:
        """Certified rational enclosure lo <= value <= hi."""
        scale = 10**digits
        lo = hi = Q(0)
        for w, q in self.terms.items():
            r = math.isqrt(w * scale * scale)
            slo, shi = Q(r, scale), Q(r + 1, scale)
            if q >= 0:
                lo += q * slo
                hi += q * shi
            else:
                lo += q * shi
                hi += q * slo
        return lo, hi

    def certified_le(self, bound: Fraction, digits: int = 30) -> bool:
        """True when value <= bound, provably at the given enclosure width."""
        lo, hi = self.bounds(digits)
        if hi <= bound:
            return True
        if lo > bound:
            return False
        raise ValueError("enclosure too wide to decide; raise digits")


# ---------------------------------------------------------------------------
# exact linear algebra on rational matrices


def mat_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by Gaussian elimination with exact pivots."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, r = 0, 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for i in range(r + 1, nrows):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        rank += 1
        if r == nrows:
            break
    return rank


def mat_kernel_dim(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rows[0]) - mat_rank(rows)


def mat_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Q(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Q(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def mat_psd(rows: Sequence[Sequence[Fraction]]) -> bool:
    """Exact PSD test for a symmetric rational matrix.

    All principal minors must be nonnegative; matrices here are tiny (the
    Hankel blocks are at most 5x5), so the 2^n enumeration is fine.
    """
    n = len(rows)
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise ValueError("matrix is not symmetric")
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        sub = [[rows[i][j] for j in idx] for i in idx]
        if mat_det(sub) < 0:
            return False
    return True


def binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def gen_binom(a: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient C(a, k) for rational a."""
    num = Q(1)
    for i in range(k):
        num *= a - i
    return num / math.factorial(k)

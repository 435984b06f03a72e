"""Exact truncated Laurent series in one variable, plus the multi-cover kernel basis.

A series is a finite coefficient map together with a *window* ``(lo, hi)``:

* every exponent below ``lo`` is exactly zero (hard support bound),
* exponents in ``[lo, hi]`` are exactly the stored coefficients (absent = 0),
* exponents above ``hi`` are unknown (truncated away).

``hi = None`` means the series is exactly a Laurent polynomial: everything above
the stored support is a known zero.  Every operation derives the tightest window
it can prove for its result; nothing is ever silently guessed beyond it.

Coefficients are exact: ``fractions.Fraction`` for the q-side, ``GaussianRational``
(a + b*i with rational a, b) for the u-side.  The same class serves both; only
the coefficient ring differs.

The kernel basis is ``s_r = (-q)^r - 2 + (-q)^{-r}`` and its integer powers
``s_r^{g-1}``.  Writing t = (-q)^r gives ``s_r = t^{-1}(t-1)^2``, so powers have
closed-form binomial coefficients: Laurent polynomials for g >= 1, one-sided
power series starting at q^{r(1-g)} for g <= 0.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, gcd


class SeriesError(ValueError):
    """Raised on contract violations: inverting zero, unbounded requests, etc."""


class GaussianRational:
    """Exact element of Q(i), the smallest field closed under q = -exp(iu)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def is_real(self):
        return self.im == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "%s*i" % self.im
        return "(%s%s%s*i)" % (self.re, "+" if self.im > 0 else "-", abs(self.im))


I_UNIT = GaussianRational(0, 1)


def sign_pow(k):
    """(-1)**k for any integer k, never a float."""
    return -1 if k % 2 else 1


def _min_hi(a, b):
    """min of two knowledge bounds, None acting as +infinity."""
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentSeries:
    """Truncated Laurent series with the window contract described above.

    Values are immutable after construction; all operations are pure, so
    instances are safe to share across threads without coordination.
    """

    __slots__ = ("coeffs", "lo", "hi")

    def __init__(self, coeffs=None, lo=0, hi=None):
        cleaned = {}
        for e, c in (coeffs or {}).items():
            if c == 0:
                continue
            if e < lo:
                raise SeriesError(
                    "coefficient at exponent %d below window bound %d" % (e, lo)
                )
            if hi is not None and e > hi:
                raise SeriesError(
                    "coefficient at exponent %d above window bound %d" % (e, hi)
                )
            cleaned[e] = c
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, lo=0, hi=None):
        return cls({}, lo, hi)

    @classmethod
    def exact(cls, coeffs):
        """A Laurent polynomial: known everywhere."""
        support = [e for e, c in coeffs.items() if c != 0]
        return cls(dict(coeffs), min(support, default=0), None)

    @classmethod
    def one(cls):
        return cls.exact({0: Fraction(1)})

    @classmethod
    def monomial(cls, e, c=1):
        return cls.exact({e: c})

    # -- inspection --------------------------------------------------------

    def coeff(self, e):
        c = self.coeffs.get(e)
        if c is not None:
            return c
        if e < self.lo or self.hi is None or e <= self.hi:
            return 0
        raise SeriesError("coefficient at exponent %d is outside the window" % e)

    def known_at(self, e):
        return e < self.lo or self.hi is None or e <= self.hi

    def is_zero(self):
        return not self.coeffs

    def order(self):
        """Smallest exponent with a nonzero coefficient; None for zero-in-window."""
        return min(self.coeffs) if self.coeffs else None

    def _reach(self):
        # smallest exponent at which this series could be nonzero (incl. unknown tail)
        if self.coeffs:
            return min(self.coeffs)
        return None if self.hi is None else self.hi + 1

    def support(self):
        return sorted(self.coeffs)

    def items(self):
        return sorted(self.coeffs.items())

    # -- window management -------------------------------------------------

    def truncate(self, hi):
        """Forget everything above ``hi``."""
        if self.hi is not None and self.hi <= hi:
            return self
        return LaurentSeries(
            {e: c for e, c in self.coeffs.items() if e <= hi}, self.lo, hi
        )

    def with_lo(self, lo):
        """Raise the hard support bound over a region known to be zero."""
        if lo <= self.lo:
            return LaurentSeries(self.coeffs, lo, self.hi)
        for e in self.coeffs:
            if e < lo:
                raise SeriesError("cannot raise lo over nonzero coefficient q^%d" % e)
        return LaurentSeries(self.coeffs, lo, self.hi)

    def matches(self, other, require=None):
        """Equality on the overlap of the known regions.

        ``require=(lo, hi)`` additionally demands that both series are known on
        that whole window, raising SeriesError otherwise.
        """
        hi = _min_hi(self.hi, other.hi)
        if require is not None:
            rlo, rhi = require
            if hi is not None and hi < rhi:
                raise SeriesError(
                    "windows certify only through q^%s, needed q^%d" % (hi, rhi)
                )
            lo = rlo
        else:
            lo = min(self.lo, other.lo)
        for e in set(self.coeffs) | set(other.coeffs):
            if e < lo or (hi is not None and e > hi):
                continue
            if self.coeffs.get(e, 0) != other.coeffs.get(e, 0):
                return False
        return True

    def first_difference(self, other):
        """Smallest in-window exponent where the two disagree, or None."""
        hi = _min_hi(self.hi, other.hi)
        diffs = [
            e
            for e in set(self.coeffs) | set(other.coeffs)
            if (hi is None or e <= hi)
            and self.coeffs.get(e, 0) != other.coeffs.get(e, 0)
        ]
        return min(diffs) if diffs else None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        hi = _min_hi(self.hi, other.hi)
        lo = min(self.lo, other.lo)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        if hi is not None:
            out = {e: c for e, c in out.items() if e <= hi}
        return LaurentSeries(out, lo, hi)

    def __neg__(self):
        return LaurentSeries(
            {e: -c for e, c in self.coeffs.items()}, self.lo, self.hi
        )

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        if c == 0:
            return LaurentSeries.zero()
        return LaurentSeries(
            {e: c * v for e, v in self.coeffs.items()}, self.lo, self.hi
        )

    def shift(self, k):
        """Multiply by q^k."""
        return LaurentSeries(
            {e + k: c for e, c in self.coeffs.items()},
            self.lo + k,
            None if self.hi is None else self.hi + k,
        )

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        ra, rb = self._reach(), other._reach()
        if ra is None or rb is None:
            # one factor is exactly zero
            return LaurentSeries.zero(self.lo + other.lo, None)
        if self.hi is None and other.hi is None:
            hi = None
        else:
            bounds = []
            if self.hi is not None:
                bounds.append(self.hi + rb)
            if other.hi is not None:
                bounds.append(other.hi + ra)
            hi = min(bounds)
        out = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = ea + eb
                if hi is not None and e > hi:
                    continue
                out[e] = out.get(e, 0) + ca * cb
        return LaurentSeries(out, self.lo + other.lo, hi)

    def pow(self, n):
        if n < 0:
            raise SeriesError("negative power: use inverse() first")
        result = LaurentSeries.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def inverse(self, hi=None):
        """Multiplicative inverse within the derivable window.

        For a series known on [lo, H] with lowest nonzero exponent d, the
        inverse is determined on [-d, H - 2d].  Exact polynomials need an
        explicit ``hi`` since their inverse is an honest infinite series.
        """
        d = self.order()
        if d is None:
            raise SeriesError("cannot invert a series that is zero within its window")
        if self.hi is None:
            if hi is None:
                raise SeriesError("inverse of an exact polynomial needs a target hi")
            out_hi = hi
            m = out_hi + d  # known terms of the normalized series
        else:
            m = self.hi - d
            out_hi = m - d
            if hi is not None:
                out_hi = min(out_hi, hi)
                m = out_hi + d
        lead = self.coeffs[d]
        inv = {}
        # b_j solves sum_{k<=j} a_{d+k} b_{j-k} = [j == 0], result exponent -d+j
        for j in range(0, m + 1):
            acc = 1 if j == 0 else 0
            for k in range(1, j + 1):
                a = self.coeffs.get(d + k, 0)
                b = inv.get(j - k)
                if a and b:
                    acc = acc - a * b
            if acc:
                inv[j] = acc / lead
        return LaurentSeries(
            {-d + j: c for j, c in inv.items()}, -d, out_hi
        )

    def reflect(self):
        """Substitute q -> q^{-1}; only defined for exact Laurent polynomials."""
        if self.hi is not None:
            raise SeriesError("q -> 1/q substitution needs an exact polynomial")
        return LaurentSeries.exact({-e: c for e, c in self.coeffs.items()})

    def map_coeffs(self, f):
        return LaurentSeries(
            {e: f(c) for e, c in self.coeffs.items()}, self.lo, self.hi
        )

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.coeffs == other.coeffs
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.lo, self.hi))

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for e, c in self.items():
                if e == 0:
                    parts.append(str(c))
                else:
                    parts.append("%s*q^%d" % (c, e))
            body = " + ".join(parts)
        win = "[%s, %s]" % (self.lo, "inf" if self.hi is None else self.hi)
        return "<%s  %s>" % (body, win)


# backwards-readable aliases: same engine, different coefficient rings
QSeries = LaurentSeries
USeries = LaurentSeries


def binom_series(m, hi=None):
    """(1 + q)^m for any integer m; exact polynomial when m >= 0."""
    if m >= 0:
        return LaurentSeries.exact(
            {k: Fraction(comb(m, k)) for k in range(m + 1)}
        )
    if hi is None:
        raise SeriesError("(1+q)^m with m < 0 needs a truncation order")
    if hi < 0:
        return LaurentSeries({}, 0, hi)
    n = -m
    return LaurentSeries(
        {k: Fraction((-1) ** k * comb(n - 1 + k, k)) for k in range(hi + 1)},
        0,
        hi,
    )


def kernel(r):
    """s_r = (-q)^r - 2 + (-q)^{-r} as an exact Laurent polynomial."""
    return kernel_power(2, r)


def kernel_power(g, r, hi=None):
    """s_r^{g-1}.

    For g >= 1 this is the symmetric Laurent polynomial supported on
    [-r(g-1), r(g-1)] (returned exactly).  For g <= 0 it is a power series with
    lowest exponent r(1-g); ``hi`` bounds the expansion (required).
    """
    if r < 1:
        raise SeriesError("multi-cover index r must be >= 1")
    p = g - 1
    if p >= 0:
        # t^{-p} (t-1)^{2p} with t = (-q)^r
        coeffs = {}
        for j in range(2 * p + 1):
            m = j - p
            c = comb(2 * p, j) * sign_pow(j) * sign_pow(r * m)
            coeffs[r * m] = Fraction(c)
        return LaurentSeries.exact(coeffs)
    if hi is None:
        raise SeriesError("kernel_power with g <= 0 needs a truncation order")
    n = -2 * p  # (1-t)^{-n} expansion
    coeffs = {}
    j = 0
    while r * (-p + j) <= hi:
        m = -p + j
        c = comb(n - 1 + j, j) * sign_pow(r * m)
        coeffs[r * m] = Fraction(c)
        j += 1
    return LaurentSeries(coeffs, r * -p, hi)


class SBasisForm:
    """Finite combination sum_g c_g * s_r^{g-1}, optionally times (1+q)^m.

    The rational/canonical form of a DT coefficient: the multi-cover index r,
    a finite genus support with exact rational coefficients, and the
    (1+q)^{int_beta c1} factor carried as the exponent m >= 0.
    """

    __slots__ = ("terms", "r", "one_plus_q_power")

    def __init__(self, terms, r=1, one_plus_q_power=0):
        if r < 1:
            raise SeriesError("multi-cover index r must be >= 1")
        if one_plus_q_power < 0:
            raise SeriesError("(1+q) exponent must be >= 0")
        object.__setattr__(
            self,
            "terms",
            {g: Fraction(c) for g, c in terms.items() if c != 0},
        )
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "one_plus_q_power", one_plus_q_power)

    def __setattr__(self, name, value):
        raise AttributeError("SBasisForm is immutable")

    def is_zero(self):
        return not self.terms

    def scale(self, c):
        return SBasisForm(
            {g: c * v for g, v in self.terms.items()}, self.r, self.one_plus_q_power
        )

    def expand(self, hi):
        """Deterministic expansion; agrees with LaurentSeries arithmetic."""
        out = LaurentSeries.zero(0, None)
        if not self.terms:
            return out
        m = self.one_plus_q_power
        onepq = binom_series(m) if m else None
        for g, c in sorted(self.terms.items()):
            piece = kernel_power(g, self.r, hi=hi).scale(c)
            if onepq is not None:
                piece = piece * onepq
            out = out + piece
        return out.truncate(hi)

    def __eq__(self, other):
        if not isinstance(other, SBasisForm):
            return NotImplemented
        return (
            self.terms == other.terms
            and self.r == other.r
            and self.one_plus_q_power == other.one_plus_q_power
        )

    def __repr__(self):
        body = " + ".join(
            "%s*s_%d^%d" % (c, self.r, g - 1) for g, c in sorted(self.terms.items())
        )
        if self.one_plus_q_power:
            body = "(%s)*(1+q)^%d" % (body or "0", self.one_plus_q_power)
        return "<SBasisForm %s>" % (body or "0")


def expand_form_sum(forms, hi):
    """Expand a list of SBasisForm (a mixed-r rational form) to a q-series."""
    out = LaurentSeries.zero(0, None)
    for f in forms:
        out = out + f.expand(hi)
    return out


def exp_coeff_series(c, hi):
    """exp(c*u) as an exact-coefficient series through u^hi.

    ``c`` may be a Fraction or GaussianRational; exp(iu) etc. are built here.
    """
    coeffs = {}
    term = c * 0 + 1  # one, in the coefficient ring of c
    for k in range(0, hi + 1):
        if k > 0:
            term = term * c / k
        coeffs[k] = term
    return LaurentSeries(coeffs, 0, hi)


def divisors_of(n):
    """Sorted positive divisors of n >= 1."""
    if n < 1:
        raise SeriesError("divisors_of needs n >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def gcd_many(values):
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


FACTORIAL = factorial

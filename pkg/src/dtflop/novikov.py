"""Formal series over the Novikov ring of a simplicial effective cone.

Curve classes are plain integer tuples: coordinates in the chosen basis of
effective-cone generators.  A class is effective iff all coordinates are
nonnegative; its degree is the weighted coordinate sum (weights >= 1), so any
degree bound leaves finitely many effective classes and exp/log are finite.

A NovikovSeries stores a coefficient (a LaurentSeries in q, or in u on the GW
side) for *every* effective class inside its truncation region: degree <= degree_bound,
optionally sharpened by per-coordinate caps.  Storing the region densely keeps
the truncation contract unambiguous: classes outside the region are unknown,
classes inside carry their own q-window.  The series-level q_window is the
declared floor used for input/output and for freshly created zero coefficients.

Mixed-window arithmetic narrows to the common floor silently but records the
narrowing in a provenance note on the result.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .series import LaurentSeries, SeriesError, _min_hi


class LatticeError(ValueError):
    pass


class ReindexError(ValueError):
    """A reindexed class left the target effective cone."""

    def __init__(self, offenders):
        self.offenders = list(offenders)
        super().__init__(
            "reindex image not effective in target for classes: %s"
            % ", ".join(map(str, self.offenders))
        )


class Lattice:
    """Rank-k lattice with a pointed simplicial effective cone.

    ``weights`` are the grading weights of the generators (all >= 1).
    ``generators`` optionally embeds the generators in an ambient Z^k for
    bookkeeping; they must be primitive and linearly independent.  All
    computation happens in generator coordinates regardless.
    """

    __slots__ = ("rank", "weights", "names", "generators")

    def __init__(self, weights, names=None, generators=None):
        weights = tuple(int(w) for w in weights)
        if not weights:
            raise LatticeError("lattice must have rank >= 1")
        if any(w < 1 for w in weights):
            raise LatticeError("generator grading weights must be >= 1")
        object.__setattr__(self, "rank", len(weights))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(
            self,
            "names",
            tuple(names) if names else tuple("g%d" % i for i in range(len(weights))),
        )
        if generators is not None:
            gens = [tuple(int(x) for x in g) for g in generators]
            if len(gens) != self.rank or any(len(g) != self.rank for g in gens):
                raise LatticeError("need rank-many generator vectors of full length")
            if _int_det(gens) == 0:
                raise LatticeError("cone generators must be linearly independent")
            for g in gens:
                if gcd_vector(g) != 1:
                    raise LatticeError("generator %s is not primitive" % (g,))
            object.__setattr__(self, "generators", tuple(gens))
        else:
            object.__setattr__(self, "generators", None)

    def __setattr__(self, name, value):
        raise AttributeError("Lattice is immutable")

    def zero(self):
        return (0,) * self.rank

    def degree(self, beta):
        return sum(w * b for w, b in zip(self.weights, beta))

    def is_effective(self, beta):
        return all(b >= 0 for b in beta)

    def check_class(self, beta):
        if len(beta) != self.rank:
            raise LatticeError("class %s has wrong rank" % (beta,))

    def classes_up_to(self, bound, caps=None):
        """All effective classes of degree <= bound, (degree, lex)-sorted."""
        out = []

        def rec(prefix, remaining):
            i = len(prefix)
            if i == self.rank:
                out.append(tuple(prefix))
                return
            w = self.weights[i]
            top = remaining // w
            if caps is not None and caps[i] is not None:
                top = min(top, caps[i])
            for a in range(top + 1):
                rec(prefix + [a], remaining - a * w)

        rec([], bound)
        out.sort(key=lambda b: (self.degree(b), b))
        return out

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.weights == other.weights and self.names == other.names

    def __hash__(self):
        return hash((self.weights, self.names))

    def __repr__(self):
        return "<Lattice rank=%d weights=%s>" % (self.rank, (self.weights,))


def gcd_vector(beta):
    g = 0
    for b in beta:
        g = gcd(g, b)
    return g


def _int_det(rows):
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def add_classes(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub_classes(a, b):
    return tuple(x - y for x, y in zip(a, b))


def neg_class(a):
    return tuple(-x for x in a)


def apply_matrix(matrix, beta):
    """matrix rows = images' coordinates; beta in source coordinates."""
    return tuple(sum(r * b for r, b in zip(row, beta)) for row in matrix)


class NovikovSeries:
    """Dense effective-cone series with LaurentSeries coefficients."""

    __slots__ = ("lattice", "degree_bound", "caps", "terms", "q_window", "notes")

    def __init__(self, lattice, degree_bound, terms=None, q_window=(0, 0),
                 caps=None, notes=(), fill="zero"):
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "degree_bound", int(degree_bound))
        object.__setattr__(self, "caps", tuple(caps) if caps is not None else None)
        object.__setattr__(self, "q_window", (int(q_window[0]), q_window[1]))
        object.__setattr__(self, "notes", tuple(notes))
        dense = {}
        lo, hi = self.q_window
        if fill == "zero":
            blank = LaurentSeries.zero(lo, hi)
        elif fill == "exact-zero":
            blank = LaurentSeries.zero(0, None)
        else:
            raise LatticeError("unknown fill %r" % fill)
        for beta in lattice.classes_up_to(self.degree_bound, self.caps):
            dense[beta] = blank
        for beta, qs in (terms or {}).items():
            beta = tuple(beta)
            lattice.check_class(beta)
            if not lattice.is_effective(beta):
                raise LatticeError("class %s is not effective" % (beta,))
            if beta not in dense:
                raise LatticeError(
                    "class %s lies outside the truncation region" % (beta,)
                )
            dense[beta] = qs
        object.__setattr__(self, "terms", dense)

    def __setattr__(self, name, value):
        raise AttributeError("NovikovSeries is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def unit(cls, lattice, degree_bound, q_window=(0, 0), caps=None):
        """The series 1: exact unit at beta = 0, exact zero elsewhere."""
        s = cls(lattice, degree_bound, {}, q_window, caps, fill="exact-zero")
        return s._with_term(lattice.zero(), LaurentSeries.one())

    def _with_term(self, beta, qs):
        terms = dict(self.terms)
        terms[beta] = qs
        return self._clone(terms=terms)

    def _clone(self, terms=None, q_window=None, notes=None):
        out = object.__new__(NovikovSeries)
        object.__setattr__(out, "lattice", self.lattice)
        object.__setattr__(out, "degree_bound", self.degree_bound)
        object.__setattr__(out, "caps", self.caps)
        object.__setattr__(out, "q_window", q_window or self.q_window)
        object.__setattr__(out, "notes", self.notes if notes is None else tuple(notes))
        object.__setattr__(out, "terms", dict(self.terms) if terms is None else terms)
        return out

    # -- inspection ------------------------------------------------------

    def coeff(self, beta):
        beta = tuple(beta)
        if beta not in self.terms:
            raise LatticeError(
                "class %s is outside the truncation region" % (beta,)
            )
        return self.terms[beta]

    def classes(self):
        return list(self.terms)

    def support(self):
        return [b for b, c in self.terms.items() if not c.is_zero()]

    def constant_is_unit(self):
        """True iff the beta=0 coefficient is the *exact* unit series.

        exp/log/inverse demand exactness: a unit only known through a finite
        q-window leaves tails that would silently invalidate the degree-cap
        truncation argument.  Reduced partition functions have a structural
        unit at beta=0, so this is no restriction for honest inputs.
        """
        c = self.terms.get(self.lattice.zero())
        if c is None or c.hi is not None or c.coeff(0) != 1:
            return False
        return all(e == 0 for e in c.coeffs)

    def constant_is_zero(self):
        c = self.terms.get(self.lattice.zero())
        return c is not None and c.is_zero() and c.hi is None

    def all_exact_zero(self):
        return all(c.is_zero() and c.hi is None for c in self.terms.values())

    def matches(self, other, require_q=None):
        """Coefficient-wise equality on the common region and windows."""
        if self.lattice != other.lattice:
            raise LatticeError("lattice mismatch")
        for beta in self.terms:
            if beta in other.terms:
                if not self.terms[beta].matches(other.terms[beta], require=require_q):
                    return False
        return True

    def first_mismatch(self, other):
        """(beta, exponent) of the first difference in the common region."""
        for beta in self.terms:
            if beta in other.terms:
                e = self.terms[beta].first_difference(other.terms[beta])
                if e is not None:
                    return beta, e
        return None

    # -- region management -------------------------------------------------

    def _common_meta(self, other, op):
        if self.lattice != other.lattice:
            raise LatticeError("lattice mismatch in %s" % op)
        bound = min(self.degree_bound, other.degree_bound)
        caps = None
        if self.caps is not None or other.caps is not None:
            a = self.caps or (None,) * self.lattice.rank
            b = other.caps or (None,) * self.lattice.rank
            caps = tuple(
                y if x is None else x if y is None else min(x, y)
                for x, y in zip(a, b)
            )
        lo = min(self.q_window[0], other.q_window[0])
        hi = _min_hi(self.q_window[1], other.q_window[1])
        notes = set(self.notes) | set(other.notes)
        if (lo, hi) != self.q_window or (lo, hi) != other.q_window:
            notes.add("q-window narrowed to (%s, %s) in %s" % (lo, hi, op))
        if bound != max(self.degree_bound, other.degree_bound):
            notes.add("degree bound narrowed to %d in %s" % (bound, op))
        return bound, caps, (lo, hi), sorted(notes)

    def restrict_degree(self, bound, caps=None):
        if bound > self.degree_bound:
            raise LatticeError("cannot widen the truncation region")
        terms = {}
        for beta in self.lattice.classes_up_to(bound, caps):
            if beta in self.terms:
                terms[beta] = self.terms[beta]
            else:
                raise LatticeError("class %s missing under new caps" % (beta,))
        out = NovikovSeries.__new__(NovikovSeries)
        object.__setattr__(out, "lattice", self.lattice)
        object.__setattr__(out, "degree_bound", bound)
        object.__setattr__(out, "caps", tuple(caps) if caps is not None else self.caps)
        object.__setattr__(out, "q_window", self.q_window)
        object.__setattr__(out, "notes", self.notes)
        object.__setattr__(out, "terms", terms)
        return out

    def restrict_support(self, keep):
        """Zero out classes failing the predicate; kept classes unchanged.

        The zeroed classes become exact zeros: this models restricting the sum
        to a subgroup (e.g. the center Cen(f)), where excluded classes are
        dropped by definition, not by ignorance.
        """
        terms = {}
        exact0 = LaurentSeries.zero(0, None)
        for beta, c in self.terms.items():
            terms[beta] = c if keep(beta) else exact0
        return self._clone(terms=terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        bound, caps, win, notes = self._common_meta(other, "add")
        terms = {}
        for beta in self.lattice.classes_up_to(bound, caps):
            terms[beta] = self.terms[beta] + other.terms[beta]
        out = NovikovSeries.__new__(NovikovSeries)
        object.__setattr__(out, "lattice", self.lattice)
        object.__setattr__(out, "degree_bound", bound)
        object.__setattr__(out, "caps", caps)
        object.__setattr__(out, "q_window", win)
        object.__setattr__(out, "notes", tuple(notes))
        object.__setattr__(out, "terms", terms)
        return out

    def __neg__(self):
        return self._clone(terms={b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        return self._clone(terms={b: s.scale(c) for b, s in self.terms.items()})

    def scale_series(self, qs):
        return self._clone(terms={b: s * qs for b, s in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        bound, caps, win, notes = self._common_meta(other, "mul")
        lat = self.lattice
        # Exact zeros contribute nothing and cannot narrow windows; anything
        # else (including zero-in-window coefficients) must flow through the
        # series arithmetic so the derived windows stay honest.
        live_a = {
            b: c
            for b, c in self.terms.items()
            if not (c.is_zero() and c.hi is None)
        }
        terms = {}
        for gamma in lat.classes_up_to(bound, caps):
            acc = None
            for alpha, ca in live_a.items():
                beta = sub_classes(gamma, alpha)
                if any(x < 0 for x in beta):
                    continue
                cb = other.terms.get(beta)
                if cb is None or (cb.is_zero() and cb.hi is None):
                    continue
                piece = ca * cb
                acc = piece if acc is None else acc + piece
            if acc is None:
                acc = LaurentSeries.zero(0, None)
            terms[gamma] = acc
        out = NovikovSeries.__new__(NovikovSeries)
        object.__setattr__(out, "lattice", lat)
        object.__setattr__(out, "degree_bound", bound)
        object.__setattr__(out, "caps", caps)
        object.__setattr__(out, "q_window", win)
        object.__setattr__(out, "notes", tuple(notes))
        object.__setattr__(out, "terms", terms)
        return out

    def exp(self):
        """exp(A) truncated to the region.

        A must have an exactly-zero constant term; then A^n is supported on
        classes of degree >= n and the sum legitimately stops at the degree
        bound.
        """
        if not self.constant_is_zero():
            raise SeriesError(
                "nv_exp needs an exactly-zero constant term (structural zero)"
            )
        result = NovikovSeries.unit(
            self.lattice, self.degree_bound, self.q_window, self.caps
        )
        power = result
        for k in range(1, self.degree_bound + 1):
            power = power * self
            if power.all_exact_zero():
                break
            result = result + power.scale(Fraction(1, _factorial(k)))
        return result._clone(notes=sorted(set(result.notes) | set(self.notes)))

    def log(self):
        """log(A) truncated to the region; A must have the exact unit constant."""
        if not self.constant_is_unit():
            raise SeriesError(
                "nv_log needs an exactly-unit constant term (structural unit)"
            )
        n = self - NovikovSeries.unit(
            self.lattice, self.degree_bound, self.q_window, self.caps
        )
        result = n
        power = n
        for k in range(2, self.degree_bound + 1):
            power = power * n
            if power.all_exact_zero():
                break
            result = result + power.scale(Fraction((-1) ** (k - 1), k))
        return result

    def inverse(self):
        """Geometric-series inverse; constant term must be the exact unit."""
        if not self.constant_is_unit():
            raise SeriesError("nv inverse needs an exactly-unit constant term")
        one = NovikovSeries.unit(
            self.lattice, self.degree_bound, self.q_window, self.caps
        )
        n = one - self
        result = one
        power = one
        for _ in range(1, self.degree_bound + 1):
            power = power * n
            if power.all_exact_zero():
                break
            result = result + power
        return result

    def divide(self, denominator):
        """self / denominator with a unit-constant-term denominator."""
        return self * denominator.inverse()

    def reindex(self, matrix, target, sign_flip=False, strict=True):
        """Move the term at beta to M(beta) (or -M(beta) with sign_flip).

        Requires degree compatibility class-by-class; a not-provably-zero
        coefficient whose image leaves the target cone raises ReindexError
        listing the offenders.  Target-region classes outside the image of
        the effective cone carry no term of the reindexed sum and are exact
        zeros.
        """
        if self.caps is not None:
            raise LatticeError("reindex of a coordinate-capped series is unsound")
        mapped = {}
        offenders = []
        dropped = 0
        for beta, c in self.terms.items():
            img = apply_matrix(matrix, beta)
            if sign_flip:
                img = neg_class(img)
            if not target.is_effective(img):
                if c.is_zero() and c.hi is None:
                    continue
                if c.is_zero():
                    dropped += 1
                    continue
                offenders.append(beta)
                continue
            if target.degree(img) != self.lattice.degree(beta):
                raise LatticeError(
                    "degree-incompatible reindex at %s -> %s" % (beta, img)
                )
            if img in mapped:
                mapped[img] = mapped[img] + c
            else:
                mapped[img] = c
        if offenders and strict:
            raise ReindexError(offenders)
        notes = set(self.notes)
        if dropped:
            notes.add(
                "reindex dropped %d zero-in-window classes with non-effective images"
                % dropped
            )
        out = NovikovSeries(
            target,
            self.degree_bound,
            {},
            self.q_window,
            None,
            sorted(notes),
            fill="exact-zero",
        )
        terms = dict(out.terms)
        terms.update(mapped)
        return out._clone(terms=terms)


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out

"""BPS state-count transform.

Forward direction: a table of BPS counts n_{g,beta}(monomial) generates the
reduced partition-function channels through

    sum_{c1.beta=0} v^beta Z'_beta  +  sum_{c1.beta>0} v^beta sum_e Z'(prod T_i^{e_i})_beta prod t_i^{e_i}/e_i!
      = exp{  sum_{c1.beta=0, beta!=0} v^beta sum_g sum_{r | beta} n_{g,beta/r} (-1)^{g-1}/r [(-q)^r - 2 + (-q)^{-r}]^{g-1}
            + sum_{c1.beta>0} v^beta sum_g sum_e n_{g,beta}(prod T^e) prod t^e/e_i! (-1)^{g-1} s_1^{g-1} (1+q)^{c1.beta} }

(the c1 > 0 block has no multi-cover sum).  Insertion monomials are a finite
declared set; the exponential mixes them, so channels are computed jointly over
(class, monomial) keys and read off per monomial.

Inverse direction: take the channel logarithm, walk classes by increasing
degree, subtract the already-known multi-cover contributions (r > 1), strip the
(1+q)^{c1.beta} factor, and peel the remainder in the s_1-basis.  Peeling is
triangular because the lowest exponent of s_1^{g-1} is -(g-1) for g >= 2 and
1-g for g <= 0, both strictly monotone in g.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .novikov import Lattice, LatticeError, NovikovSeries, gcd_vector
from .series import (
    LaurentSeries,
    sign_pow,
    SBasisForm,
    SeriesError,
    binom_series,
    divisors_of,
    kernel_power,
)


class BpsError(ValueError):
    pass


class PeelWindowError(BpsError):
    """The q-window cannot separate the genera present."""

    def __init__(self, message, required_window):
        super().__init__("%s (minimal required window: %s)" % (message, required_window))
        self.required_window = required_window


# ---------------------------------------------------------------------------
# insertion labels and monomials
# ---------------------------------------------------------------------------

class InsertionLabel:
    """A cohomology class used as a primary insertion.

    degree: even cohomological degree 0..6.  Degree-2 labels carry the pairing
    functional beta -> int_beta D as integer coordinates on the lattice.
    """

    __slots__ = ("name", "degree", "pairing")

    def __init__(self, name, degree, pairing=None):
        if degree % 2 or not 0 <= degree <= 6:
            raise BpsError("insertion degree must be even in 0..6, got %s" % degree)
        if degree == 2:
            if pairing is None:
                raise BpsError("degree-2 label %s needs a pairing functional" % name)
            pairing = tuple(int(x) for x in pairing)
        elif pairing is not None:
            raise BpsError("pairing functional only makes sense in degree 2")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "pairing", pairing)

    def __setattr__(self, name, value):
        raise AttributeError("InsertionLabel is immutable")

    def pair(self, beta):
        return sum(p * b for p, b in zip(self.pairing, beta))

    def __repr__(self):
        return "<label %s deg %d>" % (self.name, self.degree)


class InsertionBasis:
    """Finite declared set of insertion labels, looked up by name."""

    def __init__(self, labels=()):
        self.labels = {}
        for lab in labels:
            if lab.name in self.labels:
                raise BpsError("duplicate insertion label %s" % lab.name)
            self.labels[lab.name] = lab

    def __getitem__(self, name):
        try:
            return self.labels[name]
        except KeyError:
            raise BpsError("unknown insertion label %s" % name) from None

    def __contains__(self, name):
        return name in self.labels

    def names(self):
        return sorted(self.labels)


EMPTY_MONO = ()


def monomial(*pairs):
    """Canonical insertion monomial: sorted tuple of (label name, exponent)."""
    merged = {}
    for name, e in pairs:
        if e < 0:
            raise BpsError("negative insertion exponent")
        if e:
            merged[name] = merged.get(name, 0) + e
    return tuple(sorted(merged.items()))


def mono_mul(a, b):
    merged = dict(a)
    for name, e in b:
        merged[name] = merged.get(name, 0) + e
    return tuple(sorted(merged.items()))


def mono_leq(a, b):
    db = dict(b)
    return all(db.get(name, 0) >= e for name, e in a)


def mono_weight(m):
    """prod e_i! (the t-monomial normalization)."""
    w = 1
    for _, e in m:
        w *= factorial(e)
    return w


def mono_total(m):
    return sum(e for _, e in m)


def downward_closure(monos):
    """All monomials componentwise <= some declared monomial."""
    out = {EMPTY_MONO}
    for m in monos:
        names = [name for name, _ in m]
        exps = [e for _, e in m]

        def rec(i, acc):
            if i == len(names):
                out.add(monomial(*acc))
                return
            for e in range(exps[i] + 1):
                rec(i + 1, acc + [(names[i], e)])

        rec(0, [])
    return sorted(out, key=lambda m: (mono_total(m), m))


def normalize_insertions(m, beta, basis):
    """Apply the vanishing and divisor equations to a monomial at class beta.

    Degree-0 labels force the count to vanish; each degree-2 label D is
    removed, multiplying by int_beta D; labels of degree > 2 stay.
    """
    scalar = Fraction(1)
    kept = []
    for name, e in m:
        lab = basis[name]
        if lab.degree == 0:
            return Fraction(0), EMPTY_MONO
        if lab.degree == 2:
            scalar *= Fraction(lab.pair(beta)) ** e
        else:
            kept.append((name, e))
    return scalar, monomial(*kept)


def divisors(beta):
    """All r >= 1 with beta/r still a lattice class (coordinatewise)."""
    if not any(beta):
        raise BpsError("divisors of the zero class are undefined")
    return divisors_of(gcd_vector(beta))


# ---------------------------------------------------------------------------
# the table
# ---------------------------------------------------------------------------

class BpsTable:
    """Map (genus, class, insertion monomial) -> rational BPS count."""

    def __init__(self, lattice, c1, entries=None, basis=None):
        self.lattice = lattice
        self.c1 = tuple(int(x) for x in c1)
        if len(self.c1) != lattice.rank:
            raise BpsError("c1 functional has wrong rank")
        self.basis = basis if basis is not None else InsertionBasis()
        self.entries = {}
        for (g, beta, m), value in (entries or {}).items():
            self.set(g, beta, m, value)

    def c1_of(self, beta):
        return sum(c * b for c, b in zip(self.c1, beta))

    def set(self, g, beta, m, value):
        beta = tuple(beta)
        self.lattice.check_class(beta)
        if not self.lattice.is_effective(beta) or not any(beta):
            raise BpsError("BPS classes must be effective and nonzero: %s" % (beta,))
        c1b = self.c1_of(beta)
        if c1b < 0:
            raise BpsError(
                "class %s has c1 pairing %d < 0: unsupported" % (beta, c1b)
            )
        m = monomial(*m)
        if c1b == 0 and m != EMPTY_MONO:
            raise BpsError(
                "insertions on a c1-degree-0 class %s are not part of the identity"
                % (beta,)
            )
        value = Fraction(value)
        key = (int(g), beta, m)
        if value == 0:
            self.entries.pop(key, None)
        else:
            self.entries[key] = value

    def get(self, g, beta, m=EMPTY_MONO):
        return self.entries.get((g, tuple(beta), monomial(*m)), Fraction(0))

    def monomials(self):
        return sorted({m for (_, _, m) in self.entries}, key=lambda m: (mono_total(m), m))

    def items(self):
        return sorted(self.entries.items())

    def __eq__(self, other):
        if not isinstance(other, BpsTable):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.c1 == other.c1
            and self.entries == other.entries
        )

    def __repr__(self):
        return "<BpsTable %d entries>" % len(self.entries)


# ---------------------------------------------------------------------------
# forward transform
# ---------------------------------------------------------------------------

def _channel_zero(lattice, bound, q_window, caps):
    return NovikovSeries(lattice, bound, {}, q_window, caps, fill="exact-zero")


def _exp_argument(table, bound, q_window, caps):
    """The (class, monomial)-graded argument of the exponential."""
    lat = table.lattice
    qhi = q_window[1]
    by_mono = {}

    def add(m, beta, qs):
        ch = by_mono.setdefault(m, {})
        ch[beta] = ch.get(beta, LaurentSeries.zero(0, None)) + qs

    # c1 = 0 block: multi-cover sum over divisors, kernel s_r^{g-1}
    zero_entries = [
        (g, beta, val)
        for (g, beta, m), val in table.entries.items()
        if table.c1_of(beta) == 0
    ]
    for g, beta, val in zero_entries:
        r = 1
        while True:
            rbeta = tuple(r * b for b in beta)
            if lat.degree(rbeta) > bound:
                break
            if caps is None or all(
                c is None or x <= c for x, c in zip(rbeta, caps)
            ):
                piece = kernel_power(g, r, hi=qhi).scale(
                    val * Fraction(sign_pow(g - 1), r)
                )
                add(EMPTY_MONO, rbeta, piece)
            r += 1
    # c1 > 0 block: r = 1 only, genus kernel times (1+q)^{c1.beta}
    for (g, beta, m), val in table.entries.items():
        c1b = table.c1_of(beta)
        if c1b <= 0:
            continue
        piece = kernel_power(g, 1, hi=qhi).scale(
            val * Fraction(sign_pow(g - 1), mono_weight(m))
        ) * binom_series(c1b)
        add(m, beta, piece)
    out = {}
    for m, terms in by_mono.items():
        base = _channel_zero(lat, bound, q_window, caps)
        merged = dict(base.terms)
        for beta, qs in terms.items():
            if beta in merged:
                merged[beta] = qs
        out[m] = base._clone(terms=merged)
    return out


def _channel_mul(A, B, closure):
    out = {}
    for m1, s1 in A.items():
        for m2, s2 in B.items():
            m = mono_mul(m1, m2)
            if m not in closure:
                continue
            prod = s1 * s2
            out[m] = out[m] + prod if m in out else prod
    return out


def bps_forward(table, degree_bound, q_window, channels=None, caps=None):
    """Generate the reduced partition-function channels from a BPS table.

    Returns {monomial: NovikovSeries}; the monomial set is the downward
    closure of the table's monomials together with any extra requested
    ``channels``.
    """
    lat = table.lattice
    declared = set(table.monomials()) | {monomial(*m) for m in (channels or ())}
    closure = set(downward_closure(declared))
    G = _exp_argument(table, degree_bound, q_window, caps)
    unit = NovikovSeries.unit(lat, degree_bound, q_window, caps)
    # exp of the tau-free part
    base = G.get(EMPTY_MONO)
    E0 = base.exp() if base is not None else unit
    # exp of the tau-positive part, truncated to the monomial closure
    G_pos = {m: s for m, s in G.items() if m != EMPTY_MONO}
    P = {EMPTY_MONO: unit}
    if G_pos:
        max_tau = max(mono_total(m) for m in closure)
        term = {EMPTY_MONO: unit}
        for k in range(1, max_tau + 1):
            term = _channel_mul(term, G_pos, closure)
            term = {m: s.scale(Fraction(1, k)) for m, s in term.items()}
            if not term:
                break
            for m, s in term.items():
                P[m] = P[m] + s if m in P else s
    out = {}
    for m in sorted(closure, key=lambda m: (mono_total(m), m)):
        series = E0 * P[m] if m in P else _channel_zero(lat, degree_bound, q_window, caps)
        out[m] = series.scale(Fraction(mono_weight(m)))
    return out


# ---------------------------------------------------------------------------
# s-basis peeling
# ---------------------------------------------------------------------------

class PeelResult:
    """Outcome of an s-basis peel: the form, the residual, the visible range."""

    def __init__(self, form, residual, g_min, g_max):
        self.form = form
        self.residual = residual
        self.g_min = g_min  # genera below are invisible in this window
        self.g_max = g_max

    def clean(self):
        return self.residual.is_zero()


def sbasis_peel(f, symmetric_hint=False):
    """Write f = sum_g c_g s_1^{g-1} within its window.

    Without the hint: genus g >= 2 terms are peeled from the most negative
    exponent downward (s_1^{g-1} starts at -(g-1)), the constant gives c_1,
    then g <= 0 terms from the lowest positive exponent upward (start 1-g).
    Genera outside [1 - hi, 1 - lo] are unknown, never zero-filled.

    With symmetric_hint the input is promised to be a symmetric Laurent
    polynomial (genus >= 1 support only); peeling then runs from the top
    positive exponent down, any g <= 0 content surfaces in the residual.
    """
    lo, hi = f.lo, f.hi
    if hi is None:
        hi = max(f.support(), default=0)
    if hi < 0:
        raise PeelWindowError(
            "window top %d cannot see the constant term" % hi, (lo, 0)
        )
    terms = {}
    work = f

    def take(g, c):
        nonlocal work
        if c:
            terms[g] = c
            work = work - kernel_power(g, 1, hi=hi).scale(c)

    if symmetric_hint:
        for e in range(hi, 0, -1):
            g = e + 1
            take(g, work.coeff(e) * sign_pow(g - 1))
        take(1, work.coeff(0))
        g_min, g_max = 1, hi + 1
    else:
        for e in range(lo, 0):
            g = 1 - e
            take(g, work.coeff(e) * sign_pow(g - 1))
        take(1, work.coeff(0))
        for e in range(1, hi + 1):
            g = 1 - e
            take(g, work.coeff(e) * sign_pow(g - 1))
        g_min, g_max = 1 - hi, 1 - min(lo, 0)
    return PeelResult(SBasisForm(terms), work, g_min, g_max)


# ---------------------------------------------------------------------------
# inverse transform
# ---------------------------------------------------------------------------

class InverseDiagnostics:
    def __init__(self):
        self.problems = []

    def report(self, beta, m, message):
        self.problems.append((beta, m, message))

    def __bool__(self):
        return bool(self.problems)


def _channel_log(channels, lattice, bound, q_window, caps):
    """log of sum_m Z_m tau^m / w(m) over the (class, monomial) ring."""
    closure = set(channels)
    unit = NovikovSeries.unit(lattice, bound, q_window, caps)
    N = {
        m: s.scale(Fraction(1, mono_weight(m)))
        for m, s in channels.items()
    }
    if EMPTY_MONO not in N:
        raise BpsError("the empty channel is required for inversion")
    if not N[EMPTY_MONO].constant_is_unit():
        raise BpsError("the empty channel must have the exact unit constant term")
    N = dict(N)
    N[EMPTY_MONO] = N[EMPTY_MONO] - unit
    result = dict(N)
    power = dict(N)
    max_tau = max((mono_total(m) for m in closure), default=0)
    for k in range(2, bound + max_tau + 1):
        power = _channel_mul(power, N, closure)
        if not power or all(s.all_exact_zero() for s in power.values()):
            break
        for m, s in power.items():
            piece = s.scale(Fraction((-1) ** (k - 1), k))
            result[m] = result[m] + piece if m in result else piece
    return result


def bps_inverse(channels, c1, basis=None, max_genus=None):
    """Recover the BPS table from partition-function channels.

    ``channels`` maps insertion monomials to NovikovSeries with a common
    lattice and truncation; the empty monomial must be present with the exact
    unit constant term.  Returns (table, diagnostics): inconsistent input (a
    coefficient outside the kernel span within its window, or an insertion
    channel on a c1-degree-0 class) is reported per class, never zero-filled.
    """
    empty = channels[EMPTY_MONO]
    lat = empty.lattice
    bound = min(s.degree_bound for s in channels.values())
    q_window = empty.q_window
    caps = empty.caps
    c1 = tuple(int(x) for x in c1)
    G = _channel_log(channels, lat, bound, q_window, caps)
    table = BpsTable(lat, c1, basis=basis)
    diags = InverseDiagnostics()
    classes = [b for b in lat.classes_up_to(bound, caps) if any(b)]
    classes.sort(key=lambda b: (lat.degree(b), b))
    for beta in classes:
        c1b = sum(c * b for c, b in zip(c1, beta))
        for m in sorted(G, key=lambda m: (mono_total(m), m)):
            coeff = G[m].terms.get(beta)
            if coeff is None:
                continue
            if m == EMPTY_MONO and c1b == 0:
                rem = coeff
                for r in divisors(beta):
                    if r == 1:
                        continue
                    sub = tuple(b // r for b in beta)
                    for g in _genera_of(table, sub):
                        n = table.get(g, sub)
                        if n:
                            hi = coeff.hi if coeff.hi is not None else q_window[1]
                            rem = rem - kernel_power(g, r, hi=hi).scale(
                                n * Fraction(sign_pow(g - 1), r)
                            )
                _peel_into(table, rem, beta, m, max_genus, diags)
            elif c1b > 0:
                val = coeff.scale(Fraction(mono_weight(m)))
                stripped = val * binom_series(-c1b, hi=_strip_hi(val))
                _peel_into(table, stripped, beta, m, max_genus, diags)
            else:
                if not coeff.is_zero():
                    diags.report(
                        beta,
                        m,
                        "nonzero insertion channel on a c1-degree-0 class",
                    )
    return table, diags


def _strip_hi(qs):
    hi = qs.hi if qs.hi is not None else 0
    return hi - min(qs.lo, 0) + 4


def _genera_of(table, beta):
    return sorted({g for (g, b, m) in table.entries if b == beta and m == EMPTY_MONO})


def _peel_into(table, qs, beta, m, max_genus, diags):
    try:
        peel = sbasis_peel(qs)
    except PeelWindowError as err:
        diags.report(beta, m, str(err))
        return
    if not peel.clean():
        diags.report(
            beta,
            m,
            "coefficient not in the kernel span within window (first stray q^%s)"
            % peel.residual.order(),
        )
    for g, c in sorted(peel.form.terms.items()):
        if max_genus is not None and abs(g) > max_genus:
            diags.report(beta, m, "extracted genus %d beyond declared bound" % g)
            continue
        table.set(g, beta, m, c * sign_pow(g - 1))

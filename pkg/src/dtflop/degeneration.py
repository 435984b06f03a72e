"""Cohomology-weighted partition bookkeeping and the degeneration-formula evaluator.

A weighted partition eta is a multiset of (size, weight-label) parts; |eta| is
the sum of sizes, l(eta) the number of parts, and

    z(eta) = |Aut(eta)| * prod of the part sizes.

The degeneration formula evaluated here is

    sum over eta, class splittings, marking partitions of
        T1(eta, beta1) * (-1)^{|eta| - l(eta)} z(eta) q^{-|eta|} * T2(eta^dual, beta2)

subject to the dimension constraint vdim1(beta1) + vdim2(beta2) = vdim(beta) + 2|eta|.
Relative invariants are inputs, never computed: this module is the formula's
evaluator, with marking partitions supplied explicitly as (T1, T2) table pairs.
"""

from __future__ import annotations

from collections import Counter
from math import factorial

from .series import LaurentSeries


class DegenerationError(ValueError):
    pass


def weighted_partition(parts):
    """Canonical form: parts sorted by decreasing size, then by label."""
    norm = []
    for size, label in parts:
        size = int(size)
        if size < 1:
            raise DegenerationError("part sizes must be positive")
        norm.append((size, label))
    return tuple(sorted(norm, key=lambda p: (-p[0], p[1])))


EMPTY_PARTITION = ()


def part_size(eta):
    return sum(s for s, _ in eta)


def length(eta):
    return len(eta)


def aut_order(eta):
    """|Aut(eta)|: permutations preserving (size, weight) pairs."""
    out = 1
    for mult in Counter(eta).values():
        out *= factorial(mult)
    return out


def z_factor(eta):
    out = aut_order(eta)
    for s, _ in eta:
        out *= s
    return out


def dual_partition(eta, pairing):
    """Replace each weight by its Poincare-dual label."""
    dual = []
    for s, label in eta:
        if label not in pairing:
            raise DegenerationError("label %r has no declared dual" % (label,))
        dual.append((s, pairing[label]))
    return weighted_partition(dual)


def dimension_filter(eta, beta1, beta2, beta, vdims):
    """The degeneration formula's dimension constraint.

    ``vdims = (vd1, vd2, vd)``: integer-valued functionals on the respective
    class supports (any callables).
    """
    vd1, vd2, vd = vdims
    return vd1(beta1) + vd2(beta2) == vd(beta) + 2 * part_size(eta)


class RelativeTable:
    """Map (eta, beta) -> q-series of relative partition-function values.

    ``total=True`` declares the table complete: absent keys are zero.
    Otherwise a missing key consulted by the evaluator is an error, reported
    rather than zero-filled.
    """

    def __init__(self, entries=None, vdim=None, labels=(), total=False):
        self.entries = {}
        self.vdim = vdim if vdim is not None else (lambda beta: 0)
        self.labels = frozenset(labels)
        self.total = total
        for (eta, beta), qs in (entries or {}).items():
            self.set(eta, beta, qs)

    def set(self, eta, beta, qs):
        eta = weighted_partition(eta)
        for _, label in eta:
            if self.labels and label not in self.labels:
                raise DegenerationError("label %r not in the declared set" % (label,))
        self.entries[(eta, tuple(beta))] = qs

    def lookup(self, eta, beta, missing):
        key = (weighted_partition(eta), tuple(beta))
        qs = self.entries.get(key)
        if qs is None:
            if self.total:
                return None
            missing.append(key)
            return None
        return qs

    def partitions(self):
        return sorted({eta for eta, _ in self.entries}, key=lambda e: (part_size(e), e))


def degeneration_sum(t1, t2, beta, splittings, pairing, vdims=None,
                     etas=None, max_eta_size=None):
    """Evaluate the degeneration formula for one absolute class.

    ``splittings``: iterable of (beta1, beta2) pairs declared compatible by the
    caller (the i_{0*} matching is geometry, not arithmetic).  ``etas`` defaults
    to the union of partitions present in t1, filtered by ``max_eta_size``.
    Returns (q-series, missing-keys list); the sum only omits terms killed by
    the dimension filter or by a ``total`` table.
    """
    if etas is None:
        etas = t1.partitions()
        if not etas:
            etas = [EMPTY_PARTITION]
    if max_eta_size is not None:
        etas = [e for e in etas if part_size(e) <= max_eta_size]
    missing = []
    acc = LaurentSeries.zero(0, None)
    for eta in etas:
        sign = (-1) ** (part_size(eta) - length(eta))
        weight = sign * z_factor(eta)
        for beta1, beta2 in splittings:
            if vdims is not None and not dimension_filter(
                eta, beta1, beta2, beta, vdims
            ):
                continue
            a = t1.lookup(eta, beta1, missing)
            if a is None:
                continue
            b = t2.lookup(dual_partition(eta, pairing), beta2, missing)
            if b is None:
                continue
            term = (a * b).scale(weight).shift(-part_size(eta))
            acc = acc + term
    return acc, missing


def collapsed_sum(t1, t2, beta, splittings):
    """The eta = empty factorized form: sum over splittings of T1*T2."""
    missing = []
    acc = LaurentSeries.zero(0, None)
    for beta1, beta2 in splittings:
        a = t1.lookup(EMPTY_PARTITION, beta1, missing)
        b = t2.lookup(EMPTY_PARTITION, beta2, missing)
        if a is None or b is None:
            continue
        acc = acc + a * b
    return acc, missing

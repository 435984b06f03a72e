"""Independent brute-force oracles for the test suite.

Everything here is deliberately naive and self-contained: plain dict
arithmetic over exact rationals, no imports from the package under test.
These were written first and their outputs frozen; the engine is checked
against them, never the other way around.
"""

from fractions import Fraction
from math import factorial


def poly_mul(a, b, vmax, qmax):
    """Naive product of {(vdeg, qexp): coeff} polynomials, truncated."""
    out = {}
    for (va, qa), ca in a.items():
        for (vb, qb), cb in b.items():
            v, q = va + vb, qa + qb
            if v <= vmax and q <= qmax:
                out[(v, q)] = out.get((v, q), 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def conifold_product(vmax, qmax):
    """prod_{k=1..qmax} (1 - (-q)^k v)^k by brute-force expansion.

    Factors with k > qmax only touch q-exponents beyond qmax at every
    positive v-degree, so the truncation is exact within the box.
    """
    P = {(0, 0): 1}
    for k in range(1, qmax + 1):
        f = {(0, 0): 1, (1, k): -((-1) ** k)}
        for _ in range(k):
            P = poly_mul(P, f, vmax, qmax)
    return P


def cos_expansion(hi):
    """2*cos(u) - 2 as {exponent: Fraction} through u^hi."""
    out = {}
    k = 1
    while 2 * k <= hi:
        out[2 * k] = Fraction(2 * (-1) ** k, factorial(2 * k))
        k += 1
    return out


def sine_square_inverse(hi):
    """1/(4 sin^2(u/2)) = -1/(2cos u - 2) through u^hi, by long division."""
    den = cos_expansion(hi + 4)
    lead = den[2]
    inv = {}
    rem = {0: Fraction(1)}
    for e in range(-2, hi + 1):
        c = rem.get(e + 2, Fraction(0))
        coef = c / lead
        if coef:
            inv[e] = coef
        for de, dc in den.items():
            rem[e + de] = rem.get(e + de, Fraction(0)) - coef * dc
    return {e: -c for e, c in inv.items() if c}


def dict_mul(a, b, hi):
    """One-variable {exp: coeff} product truncated above hi."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e <= hi:
                out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def dict_pow(a, n, hi):
    out = {0: Fraction(1)}
    for _ in range(n):
        out = dict_mul(out, a, hi)
    return out


def s_kernel_dict(r, hi):
    """s_r = (-q)^r - 2 + (-q)^{-r} as a plain dict."""
    sgn = (-1) ** r
    return {r: Fraction(sgn), 0: Fraction(-2), -r: Fraction(sgn)}


def long_division(num, den, lo, hi):
    """num/den as Laurent dicts; den must have a nonzero lowest term."""
    d = min(e for e, c in den.items() if c)
    lead = den[d]
    quot = {}
    rem = dict(num)
    for e in range(lo, hi + 1):
        c = rem.get(e + d, Fraction(0))
        coef = c / lead
        if coef:
            quot[e] = coef
        for de, dc in den.items():
            if dc:
                rem[e + de] = rem.get(e + de, Fraction(0)) - coef * dc
    return quot

"""Extended-precision reference implementations (mpmath) for the tests.

Deliberately independent of the package: plain partial products and
brute-force Jackson summation at 40 significant digits, no shared code
paths.  Only tests import this module.
"""

import mpmath as mp

mp.mp.dps = 40

_STOP = mp.mpf(10) ** -38


def mp_shifted_real(t, s, alpha, q, terms=3000):
    """(t - s)^(alpha) by straight partial products."""
    t, s, alpha, q = map(mp.mpf, (t, s, alpha, q))
    prod = mp.mpf(1)
    for i in range(terms):
        prod *= (t - q ** i * s) / (t - q ** (alpha + i) * s)
        if q ** i < _STOP:
            break
    return t ** alpha * prod


def mp_qgamma(alpha, q, terms=3000):
    alpha, q = mp.mpf(alpha), mp.mpf(q)
    prod = mp.mpf(1)
    for i in range(terms):
        prod *= (1 - q ** (i + 1)) / (1 - q ** (alpha + i))
        if q ** i < _STOP:
            break
    return prod * (1 - q) ** (1 - alpha)


def mp_jackson0(f, x, q, terms=3000):
    """Brute-force Jackson integral over [0, x]."""
    x, q = mp.mpf(x), mp.mpf(q)
    if x == 0:
        return mp.mpf(0)
    total = mp.mpf(0)
    for n in range(terms):
        point = x * q ** n
        total += point * f(point)
        if q ** n < _STOP:
            break
    return (1 - q) * total


def mp_frac_integral(f, alpha, t, q):
    """Fractional q-integral of order alpha at t via brute-force summation."""
    t, q, alpha = mp.mpf(t), mp.mpf(q), mp.mpf(alpha)
    kern = lambda s: mp_shifted_real(t, q * s, alpha - 1, q, terms=600) * f(s)
    return mp_jackson0(kern, t, q) / mp_qgamma(alpha, q)


def mp_caputo(f, alpha, t, q):
    """Caputo fractional q-derivative at t via brute-force summation."""
    t, q, alpha = mp.mpf(t), mp.mpf(q), mp.mpf(alpha)

    def dqf(s):
        return (f(q * s) - f(s)) / ((q - 1) * s)

    kern = lambda s: mp_shifted_real(t, q * s, -alpha, q, terms=600) * dqf(s)
    return mp_jackson0(kern, t, q) / mp_qgamma(1 - alpha, q)


def mp_b1(t_n, t_1, alpha, q, terms=3000):
    """First difference weight by brute-force series."""
    t_n, t_1, alpha, q = map(mp.mpf, (t_n, t_1, alpha, q))
    total = mp.mpf(0)
    for i in range(terms):
        total += q ** i * mp_shifted_real(t_n, q ** (i + 1) * t_1, -alpha, q, terms=600)
        if q ** i < _STOP:
            break
    return (1 - q) * total

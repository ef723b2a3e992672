"""Pure-Python fallback for the hot kernels.

These two scalar loops dominate the runtime of every quadrature and
weight computation in the package.  A Cython twin with identical
semantics lives in ``_kernels_cy.pyx``; ``_kernels`` picks one at import
time.  Keep the arithmetic order identical between the twins so the
backends agree bit for bit.
"""

import sys

from .errors import NonConvergenceError, SingularKernelError

_TINY = sys.float_info.min


def shifted_factorial_real(t, s, alpha, q, rel_tol, max_terms):
    """(t - s)^(alpha) for non-integer alpha.

    Evaluates t^alpha * prod_{i=0}^{M} (t - q^i s)/(t - q^(alpha+i) s),
    stopping at the first factor within rel_tol*(1-q) of 1.  Factors
    approach 1 geometrically at rate q, so the dropped tail contributes
    a relative error of order rel_tol.
    """
    band = rel_tol * (1.0 - q)
    prod = 1.0
    qi = 1.0            # q^i
    qai = q ** alpha    # q^(alpha+i)
    for _ in range(max_terms):
        den = t - qai * s
        if den == 0.0:
            raise SingularKernelError(
                f"(t-s)^(alpha) product factor denominator vanished "
                f"(t={t!r}, s={s!r}, alpha={alpha!r}, q={q!r})")
        factor = (t - qi * s) / den
        prod *= factor
        if -band < factor - 1.0 < band:
            return t ** alpha * prod
        qi *= q
        qai *= q
    raise NonConvergenceError(
        f"shifted factorial product did not settle within {max_terms} factors")


def b1_weight(t_n, t_1, alpha, q, rel_tol, max_terms):
    """First difference weight b_1 = (1-q) * sum_i q^i (t_n - q^(i+1) t_1)^(-alpha).

    The first subinterval starts at 0, so, unlike the later weights, b_1
    has no closed form and keeps the full Jackson series.  Terms decay at
    rate q; stop after three consecutive terms below tolerance.
    """
    total = 0.0
    qi = 1.0
    s = q * t_1
    small = 0
    for _ in range(max_terms):
        term = qi * shifted_factorial_real(t_n, s, -alpha, q, rel_tol, max_terms)
        total += term
        if term < rel_tol * (total + _TINY):
            small += 1
            if small == 3:
                return (1.0 - q) * total
        else:
            small = 0
        qi *= q
        s *= q
    raise NonConvergenceError(
        f"b_1 series did not settle within {max_terms} terms")

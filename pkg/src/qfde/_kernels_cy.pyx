# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled twin of ``_kernels_py``.

Same functions, same arithmetic order, C doubles throughout; the two
backends must agree bit for bit.  See ``benchmarks/bench_kernels.py``
for the measured speedup.
"""

from libc.float cimport DBL_MIN
from libc.math cimport pow

from .errors import NonConvergenceError, SingularKernelError


cdef double _shifted_factorial_real(double t, double s, double alpha, double q,
                                    double rel_tol, long max_terms) except *:
    cdef double band = rel_tol * (1.0 - q)
    cdef double prod = 1.0
    cdef double qi = 1.0
    cdef double qai = pow(q, alpha)
    cdef double den, factor
    cdef long i
    for i in range(max_terms):
        den = t - qai * s
        if den == 0.0:
            raise SingularKernelError(
                f"(t-s)^(alpha) product factor denominator vanished "
                f"(t={t!r}, s={s!r}, alpha={alpha!r}, q={q!r})")
        factor = (t - qi * s) / den
        prod *= factor
        if -band < factor - 1.0 < band:
            return pow(t, alpha) * prod
        qi *= q
        qai *= q
    raise NonConvergenceError(
        f"shifted factorial product did not settle within {max_terms} factors")


def shifted_factorial_real(double t, double s, double alpha, double q,
                           double rel_tol, long max_terms):
    """(t - s)^(alpha) for non-integer alpha (compiled)."""
    return _shifted_factorial_real(t, s, alpha, q, rel_tol, max_terms)


def b1_weight(double t_n, double t_1, double alpha, double q,
              double rel_tol, long max_terms):
    """First difference weight b_1 (compiled Jackson series)."""
    cdef double total = 0.0
    cdef double qi = 1.0
    cdef double s = q * t_1
    cdef int small = 0
    cdef double term
    cdef long i
    for i in range(max_terms):
        term = qi * _shifted_factorial_real(t_n, s, -alpha, q, rel_tol, max_terms)
        total += term
        if term < rel_tol * (total + DBL_MIN):
            small += 1
            if small == 3:
                return (1.0 - q) * total
        else:
            small = 0
        qi *= q
        s *= q
    raise NonConvergenceError(
        f"b_1 series did not settle within {max_terms} terms")

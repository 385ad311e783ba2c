# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

All arguments are dimensionless: ``s = 2 kappa L``, ``a = 2 xi L / c`` and
``p = 2 omega_P L / c``; ``p = inf`` selects the perfect reflector.  The
functions mirror :mod:`casimir_plasma._fallback` one to one.

Status codes: 0 converged, 1 panel budget exhausted, 2 series cap reached,
4 roundoff (panel narrower than the float spacing).
"""
import numpy as np

from libc.math cimport exp, expm1, fabs, hypot, isinf
from libc.stdlib cimport free, malloc

ctypedef double (*integrand_t)(double x, void *params) noexcept nogil

cdef double XGK[11]
cdef double WGK[11]
cdef double WG[5]

XGK[:] = [
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
]
WGK[:] = [
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980162871, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
]
WG[:] = [
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
]


cdef inline double loop_f_c(double s, double a0, double p) noexcept nogil:
    cdef double em = expm1(s)
    cdef double kt, sp, r, te, a2, ne, nt, den, tm
    if isinf(p):
        return 2.0 / em
    kt = hypot(s, p)
    sp = kt + s
    # TE: r = (kt - s)/(kt + s) = p^2/(kt + s)^2, 1 - r^2 = 4 s kt/(kt + s)^2
    r = p * p / (sp * sp)
    te = r * r / (em + 4.0 * s * kt / (sp * sp))
    # TM scaled by a0^2: eps*s -> (a0^2 + p^2) s, kt -> a0^2 kt
    a2 = a0 * a0
    ne = (a2 + p * p) * s
    nt = a2 * kt
    den = ne + nt
    r = (p * p * (s - a2 / sp)) / den
    tm = r * r / (em + 4.0 * ne * nt / (den * den))
    return te + tm


cdef inline void gk21(integrand_t f, void *params, double a, double b,
                      double *res, double *err) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double resk = WGK[10] * f(c, params)
    cdef double resg = 0.0
    cdef double x, pair
    cdef int j
    for j in range(10):
        x = h * XGK[j]
        pair = f(c - x, params) + f(c + x, params)
        resk += WGK[j] * pair
        if j & 1:
            resg += WG[j >> 1] * pair
    res[0] = resk * h
    err[0] = fabs((resk - resg) * h)


cdef int adaptive(integrand_t f, void *params, double *breaks, int nbreaks,
                  double rel_tol, double abs_tol, int max_panels,
                  double *out_val, double *out_err) noexcept nogil:
    cdef int cap = max_panels if max_panels > nbreaks else nbreaks
    cdef double *pa = <double *> malloc(4 * cap * sizeof(double))
    cdef double *pb = pa + cap
    cdef double *pr = pb + cap
    cdef double *pe = pr + cap
    cdef int n = 0, i, imax, status = 0
    cdef double total, terr, emax, mid, r1, e1, r2, e2, tol
    if pa == NULL:
        return 1
    for i in range(nbreaks - 1):
        pa[n] = breaks[i]
        pb[n] = breaks[i + 1]
        gk21(f, params, pa[n], pb[n], &pr[n], &pe[n])
        n += 1
    while True:
        total = 0.0
        terr = 0.0
        imax = 0
        emax = -1.0
        for i in range(n):
            total += pr[i]
            terr += pe[i]
            if pe[i] > emax:
                emax = pe[i]
                imax = i
        tol = rel_tol * fabs(total)
        if abs_tol > tol:
            tol = abs_tol
        if terr <= tol:
            break
        if n >= cap:
            status = 1
            break
        mid = 0.5 * (pa[imax] + pb[imax])
        if mid <= pa[imax] or mid >= pb[imax]:
            status = 4
            break
        gk21(f, params, pa[imax], mid, &r1, &e1)
        gk21(f, params, mid, pb[imax], &r2, &e2)
        pa[n] = mid
        pb[n] = pb[imax]
        pr[n] = r2
        pe[n] = e2
        pb[imax] = mid
        pr[imax] = r1
        pe[imax] = e1
        n += 1
    free(pa)
    out_val[0] = total
    out_err[0] = terr
    return status


cdef struct KappaParams:
    double a0
    double p


cdef double kappa_integrand(double u, void *params) noexcept nogil:
    cdef KappaParams *kp = <KappaParams *> params
    cdef double s = kp.a0 + u
    return s * s * loop_f_c(s, kp.a0, kp.p)


cdef inline double kappa_tail_bound(double smax) noexcept nogil:
    # int_{smax}^inf s^2 * 2/(e^s - 1) ds, upper bound
    return 2.0 * (smax * smax + 2.0 * smax + 2.0) * exp(-smax) / (-expm1(-smax))


cdef int kappa_integral_c(double a0, double p, double rel_tol, double abs_tol,
                          double u_max, int max_panels,
                          double *val, double *err) noexcept nogil:
    cdef KappaParams kp
    cdef double breaks[6]
    cdef double cand[4]
    cdef int nb = 1, i, status
    kp.a0 = a0
    kp.p = p
    cand[0] = 0.5
    cand[1] = 2.0
    cand[2] = 6.0
    cand[3] = 15.0
    breaks[0] = 0.0
    for i in range(4):
        if cand[i] < u_max:
            breaks[nb] = cand[i]
            nb += 1
    breaks[nb] = u_max
    nb += 1
    status = adaptive(kappa_integrand, &kp, breaks, nb, rel_tol, abs_tol,
                      max_panels, val, err)
    err[0] += kappa_tail_bound(a0 + u_max)
    return status


def loop_f(double s, double a0, double p):
    """Cavity integrand ``f`` (sum over both polarisations) at ``s = 2 kappa L``."""
    return loop_f_c(s, a0, p)


def kappa_integral(double a0, double p, double rel_tol=1e-9, double abs_tol=0.0,
                   double u_max=60.0, int max_panels=400):
    """``int_0^inf du s^2 f(s)`` with ``s = a0 + u``; returns ``(value, error, status)``."""
    cdef double val, err
    cdef int status
    with nogil:
        status = kappa_integral_c(a0, p, rel_tol, abs_tol, u_max, max_panels, &val, &err)
    return val, err, status


def kappa_integral_many(double[::1] a0, double p, double rel_tol=1e-9, double abs_tol=0.0,
                        double u_max=60.0, int max_panels=400):
    """Vectorised :func:`kappa_integral`; returns arrays and the OR of all status codes."""
    cdef Py_ssize_t n = a0.shape[0], i
    out = np.empty(n)
    errs = np.empty(n)
    cdef double[::1] ov = out
    cdef double[::1] oe = errs
    cdef int status = 0
    with nogil:
        for i in range(n):
            status |= kappa_integral_c(a0[i], p, rel_tol, abs_tol, u_max, max_panels,
                                       &ov[i], &oe[i])
    return out, errs, status


def matsubara_sum(double step, double p, double rel_tol=1e-9, double abs_tol=0.0,
                  double u_max=60.0, int max_panels=400, double sum_rel_tol=1e-10,
                  long k_max=100000):
    """``I(0)/2 + sum_{k>=1} I(k*step)`` in ascending ``k`` with compensated summation.

    Stops once the geometric bound on the remainder, built from the ratio of
    the last two terms, falls below ``sum_rel_tol`` times the partial sum; the
    bound goes into the error.
    Returns ``(sum, error, terms_used, status)``.
    """
    cdef double i0, e0, t, e, total, comp, y, prev, ratio, tail, err, term_abs
    cdef long k, used = 0
    cdef int status = 0
    cdef bint done = False
    with nogil:
        status |= kappa_integral_c(0.0, p, rel_tol, abs_tol, u_max, max_panels, &i0, &e0)
        total = 0.5 * i0
        comp = 0.0
        err = 0.5 * e0
        prev = total
        used = 1
        # terms far below the truncation level need no relative accuracy
        term_abs = abs_tol
        if 1e-3 * sum_rel_tol * total > term_abs:
            term_abs = 1e-3 * sum_rel_tol * total
        for k in range(1, k_max + 1):
            status |= kappa_integral_c(k * step, p, rel_tol, term_abs, u_max, max_panels, &t, &e)
            # Neumaier summation
            y = total + t
            if fabs(total) >= fabs(t):
                comp += (total - y) + t
            else:
                comp += (t - y) + total
            total = y
            err += e
            used = k + 1
            if t == 0.0:
                # underflow: every later term vanishes too
                done = True
                break
            if t < prev:
                # geometric bound on the remainder; with a fine frequency step
                # it far exceeds the last term, so it is what must be small
                ratio = t / prev
                tail = t * ratio / (1.0 - ratio)
                if tail <= sum_rel_tol * (total + comp):
                    err += tail
                    done = True
                    break
            prev = t
        if not done:
            status |= 2
    return total + comp, err, used, status


cdef struct XiParams:
    double p
    double rel_tol
    double abs_tol
    double u_max
    int max_panels
    int status


cdef double xi_integrand(double a, void *params) noexcept nogil:
    cdef XiParams *xp = <XiParams *> params
    cdef double val, err
    xp.status |= kappa_integral_c(a, xp.p, xp.rel_tol, xp.abs_tol, xp.u_max,
                                  xp.max_panels, &val, &err)
    return val


def xi_integral(double p, double rel_tol=1e-9, double abs_tol=0.0, double u_max=60.0,
                int max_panels=400, double a_max=80.0):
    """``int_0^inf da I(a)``: the zero-temperature frequency integral.

    The inner integrals run at a tenth of ``rel_tol``; their contribution and
    the analytic remainder beyond ``a_max`` are included in the error.
    Returns ``(value, error, status)``.
    """
    cdef XiParams xp
    cdef double i0, e0, val, err
    cdef double breaks[7]
    cdef double cand[5]
    cdef int nb = 1, i, status
    cand[0] = 0.5
    cand[1] = 2.0
    cand[2] = 6.0
    cand[3] = 15.0
    cand[4] = 35.0
    with nogil:
        kappa_integral_c(0.0, p, rel_tol, abs_tol, u_max, max_panels, &i0, &e0)
        xp.p = p
        xp.rel_tol = 0.1 * rel_tol
        xp.abs_tol = 1e-4 * rel_tol * i0
        if abs_tol > xp.abs_tol:
            xp.abs_tol = abs_tol
        xp.u_max = u_max
        xp.max_panels = max_panels
        xp.status = 0
        breaks[0] = 0.0
        for i in range(5):
            if cand[i] < a_max:
                breaks[nb] = cand[i]
                nb += 1
        breaks[nb] = a_max
        nb += 1
        status = adaptive(xi_integrand, &xp, breaks, nb, rel_tol, abs_tol, max_panels,
                          &val, &err)
        status |= xp.status
        err += 0.1 * rel_tol * fabs(val) + xp.abs_tol * a_max
        # int_A^inf da I(a) <= int_A^inf 2 s^3/(e^s - 1) ds
        err += 2.0 * (a_max ** 3 + 3.0 * a_max ** 2 + 6.0 * a_max + 6.0) * exp(-a_max) / (-expm1(-a_max))
    return val, err, status

"""NumPy implementation of the kernels in ``_kernels.pyx``.

Used when the compiled extension is unavailable or when
``CASIMIR_PLASMA_BACKEND=python`` is set. Same algorithms, same panel
layout, same status codes; only the per-panel node evaluation is vectorised.
"""
from __future__ import annotations

import math

import numpy as np

XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980162871, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# 21 nodes on [-1, 1] with Kronrod and embedded Gauss weights
_NODES = np.concatenate([-XGK[:10], [0.0], XGK[:10][::-1]])
_WK = np.concatenate([WGK[:10], [WGK[10]], WGK[:10][::-1]])
_WG_FULL = np.zeros(11)
_WG_FULL[1:10:2] = WG
_WG = np.concatenate([_WG_FULL[:10], [0.0], _WG_FULL[:10][::-1]])

KAPPA_BREAKS = (0.5, 2.0, 6.0, 15.0)
XI_BREAKS = (0.5, 2.0, 6.0, 15.0, 35.0)


def loop_f(s, a0, p):
    """Cavity integrand ``f`` at ``s = 2 kappa L`` (scalar or array ``s``)."""
    s = np.asarray(s, dtype=float)
    # inf beyond s ~ 709 makes the integrand exactly 0, as it should be
    with np.errstate(over="ignore"):
        em = np.expm1(s)
    if math.isinf(p):
        out = 2.0 / em
        return out if out.ndim else float(out)
    kt = np.hypot(s, p)
    sp = kt + s
    r = p * p / (sp * sp)
    te = r * r / (em + 4.0 * s * kt / (sp * sp))
    a2 = a0 * a0
    ne = (a2 + p * p) * s
    nt = a2 * kt
    den = ne + nt
    r = (p * p * (s - a2 / sp)) / den
    tm = r * r / (em + 4.0 * ne * nt / (den * den))
    out = te + tm
    return out if out.ndim else float(out)


def gk21(f, a, b):
    """One G10/K21 panel of a vectorised integrand; returns ``(value, |K - G|)``."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = f(c + h * _NODES)
    resk = float(np.dot(_WK, y))
    resg = float(np.dot(_WG, y))
    return resk * h, abs((resk - resg) * h)


def adaptive(f, breaks, rel_tol, abs_tol, max_panels):
    """Global adaptive bisection of the worst panel; returns ``(value, error, status)``."""
    panels = []
    for a, b in zip(breaks[:-1], breaks[1:]):
        r, e = gk21(f, a, b)
        panels.append([a, b, r, e])
    cap = max(max_panels, len(panels))
    status = 0
    while True:
        total = 0.0
        terr = 0.0
        imax = 0
        emax = -1.0
        for i, (_, _, r, e) in enumerate(panels):
            total += r
            terr += e
            if e > emax:
                emax = e
                imax = i
        if terr <= max(abs_tol, rel_tol * abs(total)):
            break
        if len(panels) >= cap:
            status = 1
            break
        a, b = panels[imax][0], panels[imax][1]
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            status = 4
            break
        r1, e1 = gk21(f, a, mid)
        r2, e2 = gk21(f, mid, b)
        panels[imax] = [a, mid, r1, e1]
        panels.append([mid, b, r2, e2])
    return total, terr, status


def _kappa_tail_bound(smax):
    return 2.0 * (smax * smax + 2.0 * smax + 2.0) * math.exp(-smax) / (-math.expm1(-smax))


def kappa_integral(a0, p, rel_tol=1e-9, abs_tol=0.0, u_max=60.0, max_panels=400):
    """``int_0^inf du s^2 f(s)`` with ``s = a0 + u``; returns ``(value, error, status)``."""
    a0 = float(a0)

    def g(u):
        s = a0 + u
        return s * s * loop_f(s, a0, p)

    breaks = [0.0, *[b for b in KAPPA_BREAKS if b < u_max], u_max]
    val, err, status = adaptive(g, breaks, rel_tol, abs_tol, max_panels)
    return val, err + _kappa_tail_bound(a0 + u_max), status


def kappa_integral_many(a0, p, rel_tol=1e-9, abs_tol=0.0, u_max=60.0, max_panels=400):
    a0 = np.ascontiguousarray(a0, dtype=float)
    out = np.empty(a0.shape[0])
    errs = np.empty(a0.shape[0])
    status = 0
    for i, a in enumerate(a0):
        out[i], errs[i], st = kappa_integral(a, p, rel_tol, abs_tol, u_max, max_panels)
        status |= st
    return out, errs, status


def matsubara_sum(step, p, rel_tol=1e-9, abs_tol=0.0, u_max=60.0, max_panels=400,
                  sum_rel_tol=1e-10, k_max=100000):
    """See ``_kernels.matsubara_sum``."""
    i0, e0, status = kappa_integral(0.0, p, rel_tol, abs_tol, u_max, max_panels)
    total = 0.5 * i0
    comp = 0.0
    err = 0.5 * e0
    prev = total
    used = 1
    term_abs = max(abs_tol, 1e-3 * sum_rel_tol * total)
    for k in range(1, k_max + 1):
        t, e, st = kappa_integral(k * step, p, rel_tol, term_abs, u_max, max_panels)
        status |= st
        y = total + t
        if abs(total) >= abs(t):
            comp += (total - y) + t
        else:
            comp += (t - y) + total
        total = y
        err += e
        used = k + 1
        if t == 0.0:
            # underflow: every later term vanishes too
            return total + comp, err, used, status
        if t < prev:
            # geometric bound on the remainder; with a fine frequency step it
            # far exceeds the last term, so it is what must be small
            ratio = t / prev
            tail = t * ratio / (1.0 - ratio)
            if tail <= sum_rel_tol * (total + comp):
                return total + comp, err + tail, used, status
        prev = t
    return total + comp, err, used, status | 2


def xi_integral(p, rel_tol=1e-9, abs_tol=0.0, u_max=60.0, max_panels=400, a_max=80.0):
    """See ``_kernels.xi_integral``."""
    i0, _, _ = kappa_integral(0.0, p, rel_tol, abs_tol, u_max, max_panels)
    inner_rel = 0.1 * rel_tol
    inner_abs = max(abs_tol, 1e-4 * rel_tol * i0)
    inner_status = 0

    def g(a):
        nonlocal inner_status
        vals, _, st = kappa_integral_many(a, p, inner_rel, inner_abs, u_max, max_panels)
        inner_status |= st
        return vals

    breaks = [0.0, *[b for b in XI_BREAKS if b < a_max], a_max]
    val, err, status = adaptive(g, breaks, rel_tol, abs_tol, max_panels)
    err += 0.1 * rel_tol * abs(val) + inner_abs * a_max
    err += 2.0 * (a_max**3 + 3.0 * a_max**2 + 6.0 * a_max + 6.0) * math.exp(-a_max) / (-math.expm1(-a_max))
    return val, err, status | inner_status

"""Hot inner loops: log-table evaluation, Luxemburg and Amemiya solvers,
and the numeric Legendre transform.

Every kernel exists twice: a loop version compiled with numba ``@njit``
and a vectorized pure-numpy version.  The loop versions are used when
numba imports and ``MORCAMP_NUMBA`` is not set to ``0``.  Both versions
run the same algorithm with the same iteration counts, so they agree to
rounding.

A Young function is handed to the kernels as a ``LogTable``: values of
``log B`` on a uniform grid in ``log t``, interpolated linearly (so pure
powers are reproduced exactly), together with a zero threshold (``B = 0``
on ``[0, zero_below]``), an infinity threshold (``B = inf`` above
``inf_above``) and power-law slopes used outside the grid.
"""

import math
import os
from typing import NamedTuple

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("MORCAMP_NUMBA", "1") != "0"

GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)
LUX_RTOL = 1e-13
GOLDEN_ITERS = 70
K_LOG_MAX = 700.0     # keeps exp(log k) finite
EXPAND_ITERS = 2200


class LogTable(NamedTuple):
    x0: float
    h: float
    logv: np.ndarray
    zero_below: float
    inf_above: float
    slope_lo: float
    slope_hi: float

    @property
    def x_end(self) -> float:
        return self.x0 + self.h * (len(self.logv) - 1)


def make_table(x0, h, logv, zero_below=0.0, inf_above=math.inf):
    """Assemble a ``LogTable`` and derive the extrapolation slopes."""
    logv = np.ascontiguousarray(logv, dtype=np.float64)
    finite = np.flatnonzero(np.isfinite(logv))
    slope_lo = slope_hi = 0.0
    if finite.size >= 2:
        i, j = finite[0], finite[-1]
        if i + 1 < logv.size and np.isfinite(logv[i + 1]):
            slope_lo = (logv[i + 1] - logv[i]) / h
        if j >= 1 and np.isfinite(logv[j - 1]):
            slope_hi = (logv[j] - logv[j - 1]) / h
    return LogTable(float(x0), float(h), logv, float(zero_below),
                    float(inf_above), float(slope_lo), float(slope_hi))


# ---------------------------------------------------------------- numpy path


def _table_eval_np(t, x0, h, logv, zb, ia, slo, shi):
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros(t.shape)
    nn = logv.size
    x_end = x0 + h * (nn - 1)
    live = (t > zb) & (t <= ia)
    out[t > ia] = np.inf
    if not live.any():
        return out
    tl = t[live]
    x = np.log(tl)
    u = (x - x0) / h
    i = np.clip(np.floor(u).astype(np.int64), 0, nn - 2)
    w = u - i
    a = logv[i]
    b = logv[i + 1]
    with np.errstate(invalid="ignore", over="ignore"):
        y = a + w * (b - a)
        res = np.exp(y)
        # cell straddling the zero threshold: linear in t from zb
        straddle = np.isneginf(a) & np.isfinite(b)
        if straddle.any():
            tb = np.exp(x0 + h * (i[straddle] + 1))
            res[straddle] = np.exp(b[straddle]) * (
                (tl[straddle] - zb) / (tb - zb))
        res[np.isneginf(a) & np.isneginf(b)] = 0.0
        res[np.isposinf(b)] = np.inf
        lo = u < 0
        if lo.any():
            res[lo] = np.exp(logv[0] + slo * (x[lo] - x0))
        hi = u > nn - 1
        if hi.any():
            res[hi] = np.exp(logv[-1] + shi * (x[hi] - x_end))
    out[live] = res
    return out


def _modular_np(scale, values, widths, tab):
    return float(np.dot(widths, _table_eval_np(values * scale, *tab)))


def _luxemburg_np(values, widths, tab):
    vmax = values.max() if values.size else 0.0
    if vmax <= 0.0:
        return 0.0
    hi = vmax
    it = 0
    while _modular_np(1.0 / hi, values, widths, tab) > 1.0:
        hi *= 2.0
        it += 1
        if it > EXPAND_ITERS or not math.isfinite(hi):
            return math.inf
    lo = hi * 0.5
    it = 0
    while _modular_np(1.0 / lo, values, widths, tab) <= 1.0:
        hi = lo
        lo *= 0.5
        it += 1
        if it > EXPAND_ITERS or lo == 0.0:
            return 0.0
    while hi / lo - 1.0 > LUX_RTOL:
        mid = math.sqrt(lo * hi)
        if _modular_np(1.0 / mid, values, widths, tab) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def _amemiya_value_np(u, values, widths, tab):
    k = math.exp(u)
    return (1.0 + _modular_np(k, values, widths, tab)) / k


def _amemiya_np(values, widths, tab):
    pos = values[values > 0.0]
    if pos.size == 0:
        return 0.0
    a = -math.log(pos.max()) - 40.0
    b = -math.log(pos.min()) + 40.0
    # a tall thin cell can push the optimum past the value-based bracket
    while b < K_LOG_MAX and (_amemiya_value_np(b, values, widths, tab)
                             < _amemiya_value_np(b - 1.0, values, widths,
                                                 tab)):
        b = min(b + 40.0, K_LOG_MAX)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc = _amemiya_value_np(c, values, widths, tab)
    fd = _amemiya_value_np(d, values, widths, tab)
    for _ in range(GOLDEN_ITERS):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = _amemiya_value_np(c, values, widths, tab)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = _amemiya_value_np(d, values, widths, tab)
    return min(fc, fd)


def _legendre_np(s, lo, hi, tab):
    s = np.asarray(s, dtype=np.float64)
    a = np.full(s.shape, lo)
    b = np.full(s.shape, hi)

    def g(u):
        tau = np.exp(u)
        with np.errstate(invalid="ignore", over="ignore"):
            v = tau * s - _table_eval_np(tau, *tab)
        return np.where(np.isnan(v), -np.inf, v)

    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc = g(c)
    fd = g(d)
    for _ in range(GOLDEN_ITERS):
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        nc = np.where(left, b - GOLDEN * (b - a), d)
        nd = np.where(left, c, a + GOLDEN * (b - a))
        fnew = g(np.where(left, nc, nd))
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        c, d = nc, nd
    return np.maximum(np.maximum(fc, fd), 0.0)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _table_eval_scalar(t, x0, h, logv, zb, ia, slo, shi):
        if t <= zb:
            return 0.0
        if t > ia:
            return np.inf
        nn = logv.size
        x = math.log(t)
        u = (x - x0) / h
        if u < 0.0:
            return math.exp(logv[0] + slo * (x - x0))
        if u > nn - 1:
            return math.exp(logv[nn - 1] + shi * (x - x0 - h * (nn - 1)))
        i = int(u)
        if i > nn - 2:
            i = nn - 2
        w = u - i
        a = logv[i]
        b = logv[i + 1]
        if b == np.inf:
            return np.inf
        if a == -np.inf:
            if b == -np.inf:
                return 0.0
            tb = math.exp(x0 + h * (i + 1))
            return math.exp(b) * (t - zb) / (tb - zb)
        return math.exp(a + w * (b - a))

    @njit(cache=True)
    def _table_eval_nb(t, x0, h, logv, zb, ia, slo, shi):
        flat = t.ravel()
        out = np.empty(flat.size)
        for j in range(flat.size):
            out[j] = _table_eval_scalar(flat[j], x0, h, logv, zb, ia, slo, shi)
        return out.reshape(t.shape)

    @njit(cache=True)
    def _modular_nb(scale, values, widths, x0, h, logv, zb, ia, slo, shi):
        acc = 0.0
        for j in range(values.size):
            if widths[j] > 0.0 and values[j] > 0.0:
                acc += widths[j] * _table_eval_scalar(
                    values[j] * scale, x0, h, logv, zb, ia, slo, shi)
        return acc

    @njit(cache=True)
    def _luxemburg_kernel(values, widths, x0, h, logv, zb, ia, slo, shi):
        vmax = 0.0
        for v in values:
            if v > vmax:
                vmax = v
        if vmax <= 0.0:
            return 0.0
        hi = vmax
        it = 0
        while _modular_nb(1.0 / hi, values, widths,
                          x0, h, logv, zb, ia, slo, shi) > 1.0:
            hi *= 2.0
            it += 1
            if it > EXPAND_ITERS or not math.isfinite(hi):
                return np.inf
        lo = hi * 0.5
        it = 0
        while _modular_nb(1.0 / lo, values, widths,
                          x0, h, logv, zb, ia, slo, shi) <= 1.0:
            hi = lo
            lo *= 0.5
            it += 1
            if it > EXPAND_ITERS or lo == 0.0:
                return 0.0
        while hi / lo - 1.0 > LUX_RTOL:
            mid = math.sqrt(lo * hi)
            if _modular_nb(1.0 / mid, values, widths,
                           x0, h, logv, zb, ia, slo, shi) <= 1.0:
                hi = mid
            else:
                lo = mid
        return hi

    @njit(cache=True)
    def _amemiya_kernel(values, widths, x0, h, logv, zb, ia, slo, shi):
        vmin = np.inf
        vmax = 0.0
        for v in values:
            if v > 0.0:
                vmin = min(vmin, v)
                vmax = max(vmax, v)
        if vmax <= 0.0:
            return 0.0
        a = -math.log(vmax) - 40.0
        b = -math.log(vmin) + 40.0
        while b < K_LOG_MAX:
            kb = math.exp(b)
            kp = math.exp(b - 1.0)
            fb = (1.0 + _modular_nb(kb, values, widths,
                                    x0, h, logv, zb, ia, slo, shi)) / kb
            fp = (1.0 + _modular_nb(kp, values, widths,
                                    x0, h, logv, zb, ia, slo, shi)) / kp
            if fb >= fp:
                break
            b = min(b + 40.0, K_LOG_MAX)
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        kc = math.exp(c)
        kd = math.exp(d)
        fc = (1.0 + _modular_nb(kc, values, widths,
                                x0, h, logv, zb, ia, slo, shi)) / kc
        fd = (1.0 + _modular_nb(kd, values, widths,
                                x0, h, logv, zb, ia, slo, shi)) / kd
        for _ in range(GOLDEN_ITERS):
            if fc <= fd:
                b = d
                d = c
                fd = fc
                c = b - GOLDEN * (b - a)
                kc = math.exp(c)
                fc = (1.0 + _modular_nb(kc, values, widths,
                                        x0, h, logv, zb, ia, slo, shi)) / kc
            else:
                a = c
                c = d
                fc = fd
                d = a + GOLDEN * (b - a)
                kd = math.exp(d)
                fd = (1.0 + _modular_nb(kd, values, widths,
                                        x0, h, logv, zb, ia, slo, shi)) / kd
        return min(fc, fd)

    @njit(cache=True)
    def _legendre_kernel(s, lo, hi, x0, h, logv, zb, ia, slo, shi):
        out = np.empty(s.size)
        for j in range(s.size):
            sj = s[j]
            a = lo
            b = hi
            c = b - GOLDEN * (b - a)
            d = a + GOLDEN * (b - a)
            tc = math.exp(c)
            td = math.exp(d)
            fc = tc * sj - _table_eval_scalar(tc, x0, h, logv, zb, ia, slo, shi)
            fd = td * sj - _table_eval_scalar(td, x0, h, logv, zb, ia, slo, shi)
            if math.isnan(fc):
                fc = -np.inf
            if math.isnan(fd):
                fd = -np.inf
            for _ in range(GOLDEN_ITERS):
                if fc >= fd:
                    b = d
                    d = c
                    fd = fc
                    c = b - GOLDEN * (b - a)
                    tc = math.exp(c)
                    fc = tc * sj - _table_eval_scalar(
                        tc, x0, h, logv, zb, ia, slo, shi)
                    if math.isnan(fc):
                        fc = -np.inf
                else:
                    a = c
                    c = d
                    fc = fd
                    d = a + GOLDEN * (b - a)
                    td = math.exp(d)
                    fd = td * sj - _table_eval_scalar(
                        td, x0, h, logv, zb, ia, slo, shi)
                    if math.isnan(fd):
                        fd = -np.inf
            out[j] = max(max(fc, fd), 0.0)
        return out


# ---------------------------------------------------------------- dispatch


def _prep(values, widths):
    return (np.ascontiguousarray(values, dtype=np.float64),
            np.ascontiguousarray(widths, dtype=np.float64))


def table_eval(t, tab: LogTable, *, accel=None):
    """Evaluate the tabulated function at ``t`` (array or scalar)."""
    use = USE_NUMBA if accel is None else (accel and HAVE_NUMBA)
    arr = np.asarray(t, dtype=np.float64)
    if use:
        out = _table_eval_nb(np.ascontiguousarray(arr.reshape(-1)), *tab)
        out = out.reshape(arr.shape)
    else:
        out = _table_eval_np(arr, *tab)
    return out if arr.ndim else float(out)


def luxemburg_solve(values, widths, tab: LogTable, *, accel=None) -> float:
    """Smallest ``lam`` with ``sum(widths * B(values / lam)) <= 1``."""
    values, widths = _prep(values, widths)
    use = USE_NUMBA if accel is None else (accel and HAVE_NUMBA)
    if use:
        return float(_luxemburg_kernel(values, widths, *tab))
    return _luxemburg_np(values, widths, tab)


def amemiya_solve(values, widths, tab: LogTable, *, accel=None) -> float:
    """``inf_k (1 + sum(widths * B(k * values))) / k`` by golden section."""
    values, widths = _prep(values, widths)
    use = USE_NUMBA if accel is None else (accel and HAVE_NUMBA)
    if use:
        return float(_amemiya_kernel(values, widths, *tab))
    return _amemiya_np(values, widths, tab)


def legendre_sup(s, lo, hi, tab: LogTable, *, accel=None):
    """``sup_tau (tau * s - B(tau))`` over ``log tau`` in ``[lo, hi]``."""
    s = np.ascontiguousarray(s, dtype=np.float64)
    use = USE_NUMBA if accel is None else (accel and HAVE_NUMBA)
    if use:
        return _legendre_kernel(s, float(lo), float(hi), *tab)
    return _legendre_np(s, lo, hi, tab)

"""Young functions, their conjugates and inverses, the Luxemburg norm, and
the Orlicz target machinery built on the conjugate (``E_m`` and weights).

All Young functions share one fast representation, a ``LogTable`` of
``log A`` on a uniform ``log t`` grid (see ``_kernels``), which feeds the
compiled Luxemburg/Amemiya solvers.  Closed forms are kept wherever they
exist and are used as oracles for the tables.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from . import _kernels as K
from .core import DomainError, InvalidInput, StepFunction

TABLE_X_LO = -345.0
TABLE_X_HI = 345.0
TABLE_H = 0.0025
VALUE_CAP = 1e300
INV_ITERS = 64
EM_ITERS = 200
EM_XTOL = 1e-10


class DegenerateError(ArithmeticError):
    """``E_m`` is infinite (or zero) on the whole range that is needed."""


def _table_nodes():
    count = int(round((TABLE_X_HI - TABLE_X_LO) / TABLE_H))
    return TABLE_X_LO + TABLE_H * np.arange(count + 1)


def _as_array(t):
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 0.0):
        raise DomainError("Young functions live on [0, inf)")
    return arr


def _out(arr, like):
    return arr if np.ndim(like) else float(arr)


class YoungFunction:
    """Convex, left-continuous ``A: [0, inf) -> [0, inf]`` with ``A(0) = 0``.

    Subclasses implement ``_eval`` (exact values on an array) and may
    override ``inverse``, ``conjugate``, ``slope_at_zero`` and
    ``slope_at_infinity`` with closed forms.
    """

    kind = "abstract"

    def __call__(self, t):
        arr = _as_array(t)
        return _out(self._eval(arr), t)

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.spec!r})"

    def __eq__(self, other):
        return isinstance(other, YoungFunction) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    # -- limits of A(t)/t, which decide where the conjugate is 0 or inf
    def slope_at_zero(self) -> float:
        t = 1e-200
        return float(self._eval(np.array([t]))[0] / t)

    def slope_at_infinity(self) -> float:
        return math.inf

    def zero_threshold(self) -> float:
        """Largest ``t`` with ``A(t) = 0``."""
        return 0.0 if self.slope_at_zero() > 0.0 else _zero_threshold(self._eval)

    def inverse(self, y):
        """Right-continuous inverse ``sup{t >= 0 : A(t) <= y}``."""
        arr = _as_array(y)
        return _out(_bisect_inverse(self._eval, arr.reshape(-1)).reshape(
            arr.shape), y)

    def conjugate(self) -> "YoungFunction":
        return ConjugateYoung(self)

    @cached_property
    def table(self) -> K.LogTable:
        x = _table_nodes()
        with np.errstate(divide="ignore", over="ignore"):
            vals = self._eval(np.exp(x))
            logv = np.log(vals)
        logv[vals > VALUE_CAP] = np.inf
        return K.make_table(x[0], TABLE_H, logv, self.zero_threshold(),
                            self._inf_threshold())

    def _inf_threshold(self) -> float:
        return math.inf


def _zero_threshold(fn) -> float:
    """Largest ``t`` with ``A(t) = 0`` (0 when ``A > 0`` on (0, inf))."""
    lo, hi = -700.0, 700.0
    if fn(np.array([math.exp(lo)]))[0] > 0.0:
        return 0.0
    for _ in range(INV_ITERS):
        mid = 0.5 * (lo + hi)
        if fn(np.array([math.exp(mid)]))[0] > 0.0:
            hi = mid
        else:
            lo = mid
    return math.exp(lo)


def _bisect_inverse(fn, y: np.ndarray) -> np.ndarray:
    lo = np.full(y.shape, -700.0)
    hi = np.full(y.shape, 700.0)
    top = fn(np.full(y.shape, math.exp(700.0))) <= y
    for _ in range(INV_ITERS):
        mid = 0.5 * (lo + hi)
        ok = fn(np.exp(mid)) <= y
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    out = np.exp(lo)
    out[fn(np.exp(lo)) > y] = 0.0
    out[top] = np.inf
    return out


class PowerYoung(YoungFunction):
    """``A(t) = coef * t**p`` with ``p >= 1``."""

    kind = "power"

    def __init__(self, p: float, coef: float = 1.0):
        if not (p >= 1.0 and math.isfinite(p)):
            raise InvalidInput("power Young function needs 1 <= p < inf")
        if not coef > 0.0:
            raise InvalidInput("coefficient must be positive")
        self.p, self.coef = float(p), float(coef)

    @property
    def spec(self):
        return f"pow:{self.p!r}" + ("" if self.coef == 1.0 else f":{self.coef!r}")

    def _eval(self, t):
        with np.errstate(over="ignore"):
            return self.coef * t ** self.p

    def slope_at_zero(self):
        return self.coef if self.p == 1.0 else 0.0

    def zero_threshold(self):
        return 0.0

    def slope_at_infinity(self):
        return self.coef if self.p == 1.0 else math.inf

    def inverse(self, y):
        arr = _as_array(y)
        return _out((arr / self.coef) ** (1.0 / self.p), y)

    def conjugate(self):
        p, c = self.p, self.coef
        if p == 1.0:
            return LinfLike(c)
        q = p / (p - 1.0)
        return PowerYoung(q, (c * p) ** (-1.0 / (p - 1.0)) / q)

    @cached_property
    def table(self):
        x = _table_nodes()
        return K.make_table(x[0], TABLE_H, math.log(self.coef) + self.p * x)


class LinfLike(YoungFunction):
    """``A = 0`` on ``[0, h]`` and ``inf`` beyond; generates ``L^inf``."""

    kind = "linf"

    def __init__(self, h: float = 1.0):
        if not h > 0.0:
            raise InvalidInput("threshold must be positive")
        self.h = float(h)

    @property
    def spec(self):
        return "linf" + ("" if self.h == 1.0 else f":{self.h!r}")

    def _eval(self, t):
        return np.where(t <= self.h, 0.0, np.inf)

    def slope_at_zero(self):
        return 0.0

    def zero_threshold(self):
        return self.h

    def _inf_threshold(self):
        return self.h

    def inverse(self, y):
        arr = _as_array(y)
        return _out(np.full(arr.shape, self.h), y)

    def conjugate(self):
        return PowerYoung(1.0, self.h)

    @cached_property
    def table(self):
        return K.make_table(TABLE_X_LO, TABLE_H, np.full(2, -np.inf),
                            self.h, self.h)


class PowerLogYoung(YoungFunction):
    """``A(t) = t^p (log(e + t))^alpha / (log(e + 1))^alpha``, so ``A(1) = 1``.

    Valid for ``p > 1`` with any real ``alpha`` or ``p = 1`` with
    ``alpha >= 0``; convexity is verified numerically at construction.
    """

    kind = "powerlog"

    def __init__(self, p: float, alpha: float):
        p, alpha = float(p), float(alpha)
        if not (p > 1.0 or (p == 1.0 and alpha >= 0.0)) or not math.isfinite(p):
            raise InvalidInput("need p > 1, or p = 1 with alpha >= 0")
        self.p, self.alpha = p, alpha
        self._norm = math.log(math.e + 1.0) ** alpha
        self._check_convex()

    @property
    def spec(self):
        return f"powlog:{self.p!r}:{self.alpha!r}"

    def _eval(self, t):
        with np.errstate(over="ignore"):
            return t ** self.p * np.log(math.e + t) ** self.alpha / self._norm

    def _check_convex(self):
        # convexity of A(e^x) in t: slopes of chords must increase
        t = np.exp(np.linspace(-40.0, 40.0, 8001))
        a = self._eval(t)
        slopes = np.diff(a) / np.diff(t)
        bad = np.diff(slopes) < -1e-9 * np.abs(slopes[1:])
        if bad.any():
            raise InvalidInput(
                f"t^{self.p}(log(e+t))^{self.alpha} is not convex")

    def slope_at_zero(self):
        return 1.0 / self._norm if self.p == 1.0 else 0.0

    def zero_threshold(self):
        return 0.0

    def slope_at_infinity(self):
        if self.p == 1.0 and self.alpha == 0.0:
            return 1.0
        return math.inf


class LinearizedYoung(YoungFunction):
    """``base`` with its part below ``t0`` replaced by the chord to 0.

    ``A(t) = base(t0) t / t0`` for ``t <= t0`` and ``base(t)`` beyond.  It
    is equivalent to ``base`` near infinity, so it generates the same
    Orlicz space, but its conjugate vanishes near 0, which keeps ``E_m``
    finite for every ``p``.
    """

    kind = "linearized"

    def __init__(self, base: YoungFunction, t0: float = 1.0):
        if not t0 > 0.0:
            raise InvalidInput("t0 must be positive")
        self.base, self.t0 = base, float(t0)
        self._c = float(base(self.t0)) / self.t0
        if not 0.0 < self._c < math.inf:
            raise DegenerateError("base must be positive and finite at t0")

    @property
    def spec(self):
        return f"lin({self.base.spec}" + (
            ")" if self.t0 == 1.0 else f";{self.t0!r})")

    def _eval(self, t):
        return np.where(t <= self.t0, self._c * t, self.base._eval(t))

    def slope_at_zero(self):
        return self._c

    def zero_threshold(self):
        return 0.0

    def slope_at_infinity(self):
        return self.base.slope_at_infinity()

    def _inf_threshold(self):
        return self.base._inf_threshold()


def linearized(A: YoungFunction, t0: float = 1.0) -> YoungFunction:
    """Near-infinity representative of ``A`` that is linear near 0."""
    if isinstance(A, (LinfLike, LinearizedYoung)):
        return A
    if isinstance(A, PowerYoung) and A.p == 1.0:
        return A
    if float(A(t0)) == 0.0:
        return A
    return LinearizedYoung(A, t0)


class TabulatedYoung(YoungFunction):
    """Piecewise linear Young function through ``(0,0)`` and given nodes.

    Parameters
    ----------
    t : array_like
        Strictly increasing positive abscissae.
    values : array_like
        ``A(t)``; chord slopes must be nondecreasing (convexity).
    capped : bool
        If true ``A = inf`` beyond the last node, otherwise ``A`` continues
        linearly with the last slope.
    """

    kind = "tabulated"

    def __init__(self, t, values, capped: bool = False):
        t = np.asarray(t, dtype=np.float64)
        v = np.asarray(values, dtype=np.float64)
        if t.ndim != 1 or t.shape != v.shape or t.size == 0:
            raise InvalidInput("need matching 1-d node arrays")
        if t[0] <= 0.0 or np.any(np.diff(t) <= 0.0):
            raise InvalidInput("nodes must be positive and increasing")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise InvalidInput("values must be finite and nonnegative")
        tt = np.concatenate(([0.0], t))
        vv = np.concatenate(([0.0], v))
        slopes = np.diff(vv) / np.diff(tt)
        if np.any(np.diff(slopes) < -1e-12 * np.maximum(1.0, np.abs(slopes[1:]))):
            raise InvalidInput("tabulated values are not convex")
        if not np.any(v > 0.0) and not capped:
            raise InvalidInput("Young function must not vanish identically")
        self.t, self.v, self.capped = t, v, bool(capped)
        self._tt, self._vv, self._slopes = tt, vv, slopes

    @property
    def spec(self):
        body = ",".join(f"{float(a)!r}/{float(b)!r}" for a, b in zip(self.t, self.v))
        return f"tab{'cap' if self.capped else ''}:{body}"

    def _eval(self, t):
        tt, vv, s = self._tt, self._vv, self._slopes
        out = np.interp(t, tt, vv)
        beyond = t > tt[-1]
        if self.capped:
            out = np.where(beyond, np.inf, out)
        else:
            out = np.where(beyond, vv[-1] + s[-1] * (t - tt[-1]), out)
        return out

    def slope_at_zero(self):
        return float(self._slopes[0])

    def zero_threshold(self):
        zero = self._vv == 0.0
        return float(self._tt[np.flatnonzero(zero)[-1]])

    def slope_at_infinity(self):
        return math.inf if self.capped else float(self._slopes[-1])

    def _inf_threshold(self):
        return float(self.t[-1]) if self.capped else math.inf

    def conjugate(self):
        """Exact discrete Legendre transform (again piecewise linear)."""
        tt, vv, s = self._tt, self._vv, self._slopes
        # on [s_{j-1}, s_j] the sup is attained at node j
        keep = np.concatenate((np.diff(s) > 0.0, [True]))
        sl = s[keep]
        nodes_t = tt[1:][keep]
        nodes_v = vv[1:][keep]
        vals = nodes_t * sl - nodes_v
        if sl[0] == 0.0:
            sl, vals = sl[1:], vals[1:]
        if self.capped:
            # beyond the last slope the sup sits at the last node, so the
            # conjugate continues with slope tt[-1]; one extra node pins it
            if not sl.size:
                return PowerYoung(1.0, float(tt[-1]))
            step = max(1.0, float(sl[-1]))
            sl = np.append(sl, sl[-1] + step)
            vals = np.append(vals, vals[-1] + tt[-1] * step)
            return TabulatedYoung(sl, vals, capped=False)
        if sl.size == 0:
            raise DegenerateError("conjugate of a flat function")
        return TabulatedYoung(sl, vals, capped=True)


class ConjugateYoung(YoungFunction):
    """Young conjugate of ``primal``, tabulated by a numeric Legendre
    transform of the primal table (golden section in ``log tau``)."""

    kind = "conjugate"

    def __init__(self, primal: YoungFunction):
        self.primal = primal

    @property
    def spec(self):
        return f"conj({self.primal.spec})"

    def conjugate(self):
        return self.primal

    # the conjugate swaps thresholds and limiting slopes of the primal
    def slope_at_zero(self):
        return self.primal.zero_threshold()

    def zero_threshold(self):
        return self.primal.slope_at_zero()

    def slope_at_infinity(self):
        return self.primal._inf_threshold()

    def _inf_threshold(self):
        return self.primal.slope_at_infinity()

    @cached_property
    def table(self):
        x = _table_nodes()
        s = np.exp(x)
        zero_below = self.primal.slope_at_zero()
        inf_above = self.primal.slope_at_infinity()
        vals = K.legendre_sup(s, TABLE_X_LO - 360.0, TABLE_X_HI + 350.0,
                              self.primal.table)
        with np.errstate(divide="ignore"):
            logv = np.log(vals)
        logv[s <= zero_below * (1.0 + 1e-12)] = -np.inf
        logv[vals > VALUE_CAP] = np.inf
        logv[s > inf_above] = np.inf
        return K.make_table(x[0], TABLE_H, logv, zero_below, inf_above)

    def _eval(self, t):
        return K.table_eval(t, self.table)


# ------------------------------------------------------------- operations


def young_conjugate(A: YoungFunction, t):
    """Pointwise conjugate ``sup_tau (tau t - A(tau))``.

    Closed forms for power, ``L^inf``-type and tabulated functions; for the
    others a coarse log grid in ``tau`` brackets the maximizer and golden
    section refines it on the exact values of ``A``.
    """
    arr = _as_array(t)
    if isinstance(A, (PowerYoung, LinfLike, TabulatedYoung, ConjugateYoung)):
        return A.conjugate()(t)
    flat = arr.reshape(-1)
    out = np.zeros(flat.shape)
    taus = np.exp(np.linspace(-690.0, 690.0, 27601))
    with np.errstate(over="ignore", invalid="ignore"):
        a_tau = A._eval(taus)
    for j, sv in enumerate(flat):
        with np.errstate(over="ignore", invalid="ignore"):
            g = taus * sv - a_tau
        g[np.isnan(g)] = -np.inf
        i = int(np.argmax(g))
        if g[i] <= 0.0:
            continue
        if i == taus.size - 1:
            out[j] = np.inf
            continue
        lo = math.log(taus[max(i - 1, 0)])
        hi = math.log(taus[min(i + 1, taus.size - 1)])
        out[j] = max(g[i], _golden_max(A, sv, lo, hi))
    out = out.reshape(arr.shape)
    return _out(out, t)


def _golden_max(A, s, lo, hi):
    def g(u):
        tau = math.exp(u)
        return tau * s - float(A._eval(np.array([tau]))[0])

    gr = K.GOLDEN
    c, d = hi - gr * (hi - lo), lo + gr * (hi - lo)
    fc, fd = g(c), g(d)
    for _ in range(80):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - gr * (hi - lo)
            fc = g(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + gr * (hi - lo)
            fd = g(d)
    return max(fc, fd)


def luxemburg(A: YoungFunction, f: StepFunction) -> float:
    """Luxemburg norm ``inf{lam > 0 : int_0^1 A(f/lam) <= 1}``."""
    if f.is_zero():
        return 0.0
    # homogeneous: solve for f / sup f so subnormal inputs stay in range
    top = f.sup()
    return top * K.luxemburg_solve(f.values / top, f.widths, A.table)


def amemiya(B: YoungFunction, f: StepFunction) -> float:
    """Orlicz norm in Amemiya form ``inf_k (1 + int_0^1 B(k f)) / k``.

    With ``B`` the conjugate of ``A`` this is the exact associate norm of
    the Luxemburg norm generated by ``A``.
    """
    if f.is_zero():
        return 0.0
    top = f.sup()
    return top * K.amemiya_solve(f.values / top, f.widths, B.table)


# ------------------------------------------------------------------ E_m


class EmFunction:
    """``E(t) = t^N int_0^t Ab(tau) / tau^(1+N) dtau`` with ``Ab`` the
    conjugate of ``A`` and ``N = n / (n - d)``.

    The integrand is taken in the variable ``x = log tau`` where the
    tabulated ``log Ab`` is piecewise linear, so every cell integrates in
    closed form (a per-cell power law in ``tau``); below the table a
    power-law tail is integrated analytically.
    """

    def __init__(self, A: YoungFunction, N: float):
        if not N > 1.0:
            raise DomainError("exponent N = n/(n-d) must exceed 1")
        self.A, self.N = A, float(N)
        self._closed = None
        if isinstance(A, PowerYoung) and A.p > 1.0:
            conj = A.conjugate()
            q, c = conj.p, conj.coef
            self._closed = (q, c / (q - N)) if q > N else (q, math.inf)
            return
        tab = A.conjugate().table
        self._tab = tab
        h = tab.h
        x = tab.x0 + h * np.arange(tab.logv.size)
        u = tab.logv - self.N * x
        self._x, self._u = x, u
        ua, ub = u[:-1], u[1:]
        with np.errstate(invalid="ignore", over="ignore"):
            d = ub - ua
            logj = ua + math.log(h) + _log_expm1_ratio(d)
        strad = np.isneginf(ua) & np.isfinite(ub)
        logj[strad] = ub[strad] + math.log(h / 2.0)
        logj[np.isneginf(ua) & np.isneginf(ub)] = -np.inf
        logj[np.isposinf(ua) | np.isposinf(ub)] = np.inf
        slope = tab.slope_lo - self.N
        if np.isneginf(u[0]):
            tail = -np.inf
        elif slope > 0.0:
            tail = u[0] - math.log(slope)
        else:
            tail = np.inf
        self._tail = tail
        self.divergent = tail == np.inf
        self._L = np.logaddexp.accumulate(np.concatenate(([tail], logj)))

    def log_integral(self, x):
        """``log int_0^{e^x} Ab(tau) tau^(-1-N) dtau`` (vectorized)."""
        x = np.asarray(x, dtype=np.float64)
        if self.divergent:
            return np.full(x.shape, np.inf)
        tab, u, L = self._tab, self._u, self._L
        h, nn = tab.h, u.size
        pos = (x - tab.x0) / h
        i = np.clip(np.floor(pos).astype(np.int64), 0, nn - 2)
        w = np.clip(pos - i, 0.0, 1.0)
        ua, ub = u[i], u[i + 1]
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            d = ub - ua
            part = ua + math.log(h) + np.log(w) + _log_expm1_ratio(d * w)
            part = np.where(np.isneginf(ua), np.where(
                np.isfinite(ub), ub + np.log(w * w * h / 2.0), -np.inf), part)
            part = np.where(np.isposinf(ub), np.inf, part)
            out = np.logaddexp(L[i], part)
            below = pos < 0.0
            if below.any():
                s = tab.slope_lo - self.N
                out[below] = (u[0] + s * (x[below] - tab.x0)
                              - math.log(s)) if np.isfinite(u[0]) else -np.inf
            above = pos > nn - 1
            if above.any():
                s = tab.slope_hi - self.N
                dx = x[above] - self._x[-1]
                if np.isfinite(u[-1]):
                    ext = u[-1] + np.log(dx) + _log_expm1_ratio(s * dx)
                else:
                    ext = np.full(dx.shape, u[-1])
                out[above] = np.logaddexp(L[-1], ext)
        return out

    def log_value(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self._closed is not None:
            q, c = self._closed
            return np.log(c) + q * x if math.isfinite(c) else np.full(
                x.shape, np.inf)
        return self.N * x + self.log_integral(x)

    def __call__(self, t):
        arr = _as_array(t)
        out = np.zeros(arr.shape)
        pos = arr > 0.0
        with np.errstate(over="ignore"):
            out[pos] = np.exp(self.log_value(np.log(arr[pos])))
        return _out(out, t)

    def inverse(self, y):
        """Right-continuous inverse by bisection on ``log t``."""
        arr = _as_array(y)
        flat = arr.reshape(-1)
        ly = np.full(flat.shape, -np.inf)
        np.log(flat, out=ly, where=flat > 0.0)
        lo = np.full(flat.shape, -1000.0)
        hi = np.full(flat.shape, 1000.0)
        for _ in range(EM_ITERS):
            mid = 0.5 * (lo + hi)
            ok = self.log_value(mid) <= ly
            lo = np.where(ok, mid, lo)
            hi = np.where(ok, hi, mid)
            if np.all(hi - lo <= EM_XTOL):
                break
        out = np.exp(lo)
        out[self.log_value(lo) > ly] = 0.0
        out[self.log_value(hi) <= ly] = np.inf
        return _out(out.reshape(arr.shape), y)

    def log_inverse(self, y):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.inverse(y), dtype=np.float64))


def _log_expm1_ratio(d):
    """``log((e^d - 1)/d)``, continuous through ``d = 0``."""
    d = np.asarray(d, dtype=np.float64)
    out = np.zeros(d.shape)
    big = d > 30.0
    small = np.abs(d) < 1e-8
    mid = ~big & ~small
    out[big] = d[big] + np.log1p(-np.exp(-d[big])) - np.log(d[big])
    out[mid] = np.log(np.expm1(d[mid]) / d[mid])
    out[small] = d[small] / 2.0
    return out


_EM_CACHE: dict = {}


def _em(A: YoungFunction, n: int, d: int) -> EmFunction:
    key = (A.spec, n, d)
    em = _EM_CACHE.get(key)
    if em is None:
        em = EmFunction(A, n / (n - d))
        _EM_CACHE[key] = em
    return em


def em_function(A: YoungFunction, n: int, m: int, t):
    """``E_m(t)``; returns ``inf`` when the defining integral diverges."""
    if not 1 <= m <= n - 1:
        raise DomainError("E_m needs 1 <= m <= n - 1")
    return _em(A, n, m)(t)


def _check_r(r):
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr <= 0.0):
        raise DomainError("r must be positive")
    return arr


def _log_weight(em: EmFunction, n: int, r, power: float):
    # log of 1 / (r^power * E^{-1}(r^{-n})), frozen at r = 1 beyond 1
    rr = np.minimum(r, 1.0)
    linv = em.log_inverse(rr ** (-float(n)))
    if np.any(~np.isfinite(linv)):
        raise DegenerateError(
            "E_m^{-1} is 0 or infinite: E_m is degenerate for this A")
    return -power * np.log(rr) - linv


def orlicz_morrey_weight(A: YoungFunction, n: int, m: int, r):
    """``1 / (r^(n-m) E_m^{-1}(r^{-n}))``, constant for ``r > 1``.

    ``E_m`` is built from the representative of ``A`` that is linear on
    ``[0, 1]``; this does not change the Orlicz space and keeps ``E_m``
    finite in the borderline and supercritical cases.
    """
    if not 1 <= m <= n - 1:
        raise DomainError("Orlicz Morrey weight needs 1 <= m <= n - 1")
    arr = _check_r(r)
    em = _em(linearized(A), n, m)
    return _out(np.exp(_log_weight(em, n, arr, n - m)), r)


def orlicz_campanato_weight(A: YoungFunction, n: int, m: int, k: int, r):
    """Campanato weight: ``1 / (r^(n-m+k) E_{m,k}^{-1}(r^{-n}))`` for
    ``k <= m-2`` (``E_{m,k}`` is ``E`` of order ``m-k-1``) and
    ``r A^{-1}(r^{-n})`` for ``k = m-1``; constant for ``r > 1``."""
    if not 0 <= k <= m - 1:
        raise DomainError("need 0 <= k <= m - 1")
    arr = _check_r(r)
    Al = linearized(A)
    if k == m - 1:
        rr = np.minimum(arr, 1.0)
        return _out(rr * np.asarray(Al.inverse(rr ** (-float(n)))), r)
    d = m - k - 1
    if d > n - 1:
        raise DomainError("E_{m,k} needs m - k - 1 <= n - 1")
    em = _em(Al, n, d)
    return _out(np.exp(_log_weight(em, n, arr, n - m + k)), r)


# ---------------------------------------------------------------- parsing


def parse_young(spec: str) -> YoungFunction:
    """Parse ``pow:p[:c]``, ``powlog:p:alpha``, ``linf[:h]`` or
    ``tab[cap]:t1/a1,t2/a2,...``."""
    head, _, rest = spec.partition(":")
    fields = rest.split(":") if rest else []
    try:
        if head == "pow" and len(fields) in (1, 2):
            return PowerYoung(*map(float, fields))
        if head == "powlog" and len(fields) == 2:
            return PowerLogYoung(*map(float, fields))
        if head == "linf" and len(fields) <= 1:
            return LinfLike(*map(float, fields))
        if head in ("tab", "tabcap") and len(fields) == 1:
            pairs = [tuple(map(float, item.split("/")))
                     for item in fields[0].split(",")]
            t, v = zip(*pairs)
            return TabulatedYoung(t, v, capped=head == "tabcap")
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad Young function spec {spec!r}: {exc}") from exc
    raise InvalidInput(f"bad Young function spec {spec!r}")

"""Step functions on (0,1), decreasing rearrangement, maximal averages and
closed-form integrals of power functions against step functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

MEASURE_TOL = 1e-12
DEFAULT_EPS_MIN = 1e-14
DEFAULT_PER_DECADE = 64


class InvalidInput(ValueError):
    """Raised for malformed samples, grids or step functions."""


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class DivergenceError(ArithmeticError):
    """Raised when a requested integral diverges."""


def power_integral(a, b, beta: float):
    """Return ``int_a^b s**beta ds`` elementwise, for ``0 <= a <= b``.

    Stable near ``beta = -1`` (uses ``expm1``) and exact at it
    (``log(b/a)``).  ``a = 0`` requires ``beta > -1``.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    e = beta + 1.0
    out = np.zeros(np.broadcast(a, b).shape)
    a, b = np.broadcast_to(a, out.shape), np.broadcast_to(b, out.shape)
    live = b > a
    zero = live & (a == 0.0)
    pos = live & (a > 0.0)
    if zero.any():
        if e <= 0.0:
            raise DivergenceError(f"s^{beta} is not integrable at 0")
        out[zero] = b[zero] ** e / e
    if pos.any():
        lr = np.log(b[pos] / a[pos])
        if e == 0.0:
            out[pos] = lr
        else:
            # a^e overflows only when the integral itself exceeds the
            # float range; inf is the right answer then
            with np.errstate(over="ignore"):
                out[pos] = a[pos] ** e * np.expm1(e * lr) / e
    return out if out.ndim else float(out)


# ------------------------------------------------------------------ grids


@dataclass(frozen=True, eq=False)
class Grid:
    """Breakpoints ``eps_min = b_0 < b_1 < ... <= 1`` of a partition of (0,1).

    The endpoints 0 and 1 are implicit: the cells are ``(0, b_0)``,
    ``(b_0, b_1)``, ..., and ``(b_last, 1)`` when ``b_last < 1``.
    """

    breakpoints: np.ndarray
    scale: str = "user-supplied"

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        if bp.ndim != 1 or bp.size == 0:
            raise InvalidInput("grid needs at least one breakpoint")
        if not (bp[0] > 0.0 and bp[-1] <= 1.0):
            raise InvalidInput("breakpoints must lie in (0, 1]")
        if np.any(np.diff(bp) <= 0.0):
            raise InvalidInput("breakpoints must be strictly increasing")
        if self.scale not in ("log-spaced", "user-supplied"):
            raise InvalidInput(f"unknown grid scale {self.scale!r}")
        object.__setattr__(self, "breakpoints", bp)

    @classmethod
    def log_spaced(cls, eps_min: float = DEFAULT_EPS_MIN,
                   per_decade: int = DEFAULT_PER_DECADE, top: float = 1.0):
        """Log-spaced breakpoints from ``eps_min`` to ``top``."""
        if not 0.0 < eps_min < top <= 1.0:
            raise InvalidInput("need 0 < eps_min < top <= 1")
        if per_decade < 1:
            raise InvalidInput("per_decade must be positive")
        decades = math.log10(top / eps_min)
        count = max(1, int(math.ceil(decades * per_decade - 1e-9)))
        lo, hi = math.log10(eps_min), math.log10(top)
        bp = 10.0 ** (lo + (hi - lo) * np.arange(count + 1) / count)
        bp[0], bp[-1] = eps_min, top
        return cls(bp, "log-spaced")

    @property
    def edges(self) -> np.ndarray:
        bp = self.breakpoints
        tail = [] if bp[-1] == 1.0 else [1.0]
        return np.concatenate(([0.0], bp, tail))

    @property
    def points(self) -> np.ndarray:
        """Breakpoints strictly inside (0,1), the natural sample points."""
        bp = self.breakpoints
        return bp[bp < 1.0]


# ---------------------------------------------------------- step functions


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Nonnegative step function on (0,1).

    Parameters
    ----------
    edges : array_like
        Cell edges ``0 = e_0 < e_1 < ... < e_N = 1``.
    values : array_like
        Value on each of the ``N`` cells.
    rearranged : bool
        Whether ``values`` is nonincreasing, i.e. the function is its own
        decreasing rearrangement.
    """

    edges: np.ndarray
    values: np.ndarray
    rearranged: bool = False
    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if e.ndim != 1 or v.ndim != 1 or e.size != v.size + 1:
            raise InvalidInput("need len(edges) == len(values) + 1")
        if e[0] != 0.0 or abs(e[-1] - 1.0) > MEASURE_TOL:
            raise InvalidInput("edges must run from 0 to 1")
        if np.any(np.diff(e) <= 0.0):
            raise InvalidInput("edges must be strictly increasing")
        if not np.all(np.isfinite(v)) or np.any(v < 0.0):
            raise InvalidInput("values must be finite and nonnegative")
        if self.rearranged and np.any(np.diff(v) > 0.0):
            raise InvalidInput("rearranged step function must be nonincreasing")
        e = e.copy()
        e[-1] = 1.0
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "values", v)
        cum = np.concatenate(([0.0], np.cumsum(v * np.diff(e))))
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def on_grid(cls, grid: Grid, values, rearranged: bool = False):
        return cls(grid.edges, values, rearranged)

    @classmethod
    def constant(cls, c: float = 1.0):
        return cls(np.array([0.0, 1.0]), np.array([float(c)]), True)

    @classmethod
    def indicator(cls, a: float, c: float = 1.0):
        """``c`` times the indicator of ``(0, a)``."""
        if not 0.0 < a <= 1.0:
            raise DomainError("indicator length must be in (0, 1]")
        if a == 1.0:
            return cls.constant(c)
        return cls(np.array([0.0, a, 1.0]), np.array([float(c), 0.0]), True)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def left(self) -> np.ndarray:
        return self.edges[:-1]

    @property
    def right(self) -> np.ndarray:
        return self.edges[1:]

    def sup(self) -> float:
        return float(self.values.max())

    def integral(self) -> float:
        return float(self._cum[-1])

    def primitive(self, t):
        """``int_0^t f`` for ``t`` in [0, 1] (vectorized)."""
        t = np.asarray(t, dtype=np.float64)
        i = np.clip(np.searchsorted(self.edges, t, side="right") - 1,
                    0, self.values.size - 1)
        out = self._cum[i] + self.values[i] * (t - self.edges[i])
        return out if out.ndim else float(out)

    def __call__(self, t):
        """Right-continuous evaluation on (0,1)."""
        t = np.asarray(t, dtype=np.float64)
        i = np.clip(np.searchsorted(self.edges, t, side="right") - 1,
                    0, self.values.size - 1)
        out = self.values[i]
        return out if out.ndim else float(out)

    def scaled(self, c: float) -> "StepFunction":
        return StepFunction(self.edges, self.values * c, self.rearranged)

    def is_zero(self) -> bool:
        return not np.any(self.values > 0.0)


def rearrange(samples) -> StepFunction:
    """Decreasing rearrangement of a finite multiset of (value, measure).

    ``samples`` is an iterable of pairs or a ``StepFunction``; measures must
    be positive and sum to 1 within ``MEASURE_TOL``.
    """
    if isinstance(samples, StepFunction):
        vals, meas = samples.values, samples.widths
    else:
        pairs = np.asarray(list(samples) if not isinstance(samples, np.ndarray)
                           else samples, dtype=np.float64)
        if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] == 0:
            raise InvalidInput("samples must be (value, measure) pairs")
        vals, meas = pairs[:, 0], pairs[:, 1]
    if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
        raise InvalidInput("values must be finite and nonnegative")
    if np.any(meas <= 0.0):
        raise InvalidInput("measures must be positive")
    total = float(math.fsum(meas))
    if abs(total - 1.0) > MEASURE_TOL:
        raise InvalidInput(f"measures sum to {total!r}, not 1")
    order = np.argsort(-vals, kind="stable")
    v = vals[order]
    edges = np.concatenate(([0.0], np.cumsum(meas[order])))
    edges[-1] = 1.0
    return StepFunction(edges, v, rearranged=True)


def double_star(f: StepFunction, t):
    """Maximal average ``f**(t) = (1/t) int_0^t f*`` for ``t`` in (0,1)."""
    if not f.rearranged:
        raise InvalidInput("double_star expects a rearranged step function")
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("t must lie in (0, 1)")
    out = f.primitive(arr) / arr
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class PowerPiece:
    """``coefficient * s**exponent`` restricted to ``support = (lo, hi)``."""

    coefficient: float
    exponent: float
    support: tuple = (0.0, 1.0)

    def __post_init__(self):
        lo, hi = self.support
        if not 0.0 <= lo <= hi <= 1.0:
            raise DomainError("support must be a subinterval of (0, 1)")

    def cell_integrals(self, edges) -> np.ndarray:
        """Exact integrals of the piece over every cell of ``edges``."""
        lo, hi = self.support
        a = np.clip(edges[:-1], lo, hi)
        b = np.clip(edges[1:], lo, hi)
        if self.exponent <= -1.0 and lo == 0.0 and b[0] > 0.0:
            raise DivergenceError(
                f"s^{self.exponent} is not integrable near 0")
        return self.coefficient * power_integral(a, b, self.exponent)


def integrate_power_against(f: StepFunction, piece: PowerPiece) -> float:
    """``int c s^beta f(s) ds`` over the piece support, summed cell by cell."""
    return float(np.dot(f.values, piece.cell_integrals(f.edges)))


# ---------------------------------------------- integrals involving f and f**


def _locate(f: StepFunction, r):
    return np.clip(np.searchsorted(f.edges, r, side="right") - 1,
                   0, f.values.size - 1)


def _suffix(full):
    # full[0] belongs to the cell touching 0, which is never summed whole
    full = full.copy()
    full[0] = 0.0
    return np.concatenate((np.cumsum(full[::-1])[::-1], [0.0]))


def tail_power(f: StepFunction, beta: float, r):
    """``int_r^1 s^beta f(s) ds`` for every ``r`` in (0,1) (vectorized)."""
    r = np.asarray(r, dtype=np.float64)
    a = np.where(f.left > 0.0, f.left, f.right)
    suffix = _suffix(f.values * power_integral(a, f.right, beta))
    i = _locate(f, r)
    out = suffix[i + 1] + f.values[i] * power_integral(r, f.right[i], beta)
    return out if out.ndim else float(out)


def tail_power_double_star(f: StepFunction, beta: float, r):
    """``int_r^1 s^beta f**(s) ds`` in closed form, for ``r`` in (0,1).

    On the cell ``(a, b)`` with value ``v`` and ``F = int_0^a f``,
    ``s^beta f**(s) = (F - v a) s^(beta-1) + v s^beta``.
    """
    if not f.rearranged:
        raise InvalidInput("expects a rearranged step function")
    r = np.asarray(r, dtype=np.float64)
    v = f.values
    coef = f._cum[:-1] - v * f.left

    def piece(lo, hi, idx):
        return (coef[idx] * power_integral(lo, hi, beta - 1.0)
                + v[idx] * power_integral(lo, hi, beta))

    a = np.where(f.left > 0.0, f.left, f.right)
    suffix = _suffix(piece(a, f.right, np.arange(v.size)))
    i = _locate(f, r)
    out = suffix[i + 1] + piece(r, f.right[i], i)
    return out if out.ndim else float(out)


def power_cell_averages(edges, beta: float, lo: float = 0.0, hi: float = 1.0,
                        shift: float = 0.0):
    """Average of ``(s + shift)^beta chi_(lo,hi)(s)`` over each cell.

    A partially covered cell gets the covered integral divided by its full
    width, so the result is the conditional expectation of the function on
    the partition.
    """
    edges = np.asarray(edges, dtype=np.float64)
    a = np.clip(edges[:-1], lo, hi)
    b = np.clip(edges[1:], lo, hi)
    return power_integral(a + shift, b + shift, beta) / np.diff(edges)


def log_edges(lo: float, hi: float, per_decade: int):
    """Log-spaced points from ``lo`` to ``hi`` (both included)."""
    decades = max(math.log10(hi / lo), 1e-12)
    count = max(1, int(math.ceil(decades * per_decade - 1e-9)))
    e = np.exp(np.linspace(math.log(lo), math.log(hi), count + 1))
    e[0], e[-1] = lo, hi
    return e


def power_step(beta: float, lo: float, hi: float, *, shift: float = 0.0,
               per_decade: int = 128, floor: float = 1e-300) -> StepFunction:
    """Cell-average discretization of ``(s + shift)^beta chi_(lo,hi)(s)``.

    Cells are log-spaced on ``(lo, hi)``; when ``lo = 0`` they start at
    ``floor`` (or well below ``shift`` when it is positive) after a first
    cell touching 0.  Averaging over cells never increases a
    rearrangement-invariant norm, so the discretization approximates
    norms from below and converges as the grid is refined.
    """
    if not 0.0 <= lo < hi <= 1.0:
        raise DomainError("need 0 <= lo < hi <= 1")
    if lo > 0.0:
        start = lo
    elif shift > 0.0:
        start = min(shift * 1e-3, hi * 0.5)
    else:
        if beta <= -1.0:
            raise DivergenceError(f"s^{beta} is not integrable near 0")
        start = min(floor, hi * 0.5)
    inner = log_edges(start, hi, per_decade)
    edges = np.concatenate(([0.0], inner, [1.0] if hi < 1.0 else []))
    return StepFunction(edges, power_cell_averages(edges, beta, lo, hi, shift))

"""Sharpness witnesses for the Morrey criterion.

The extremal family ``v_f`` has centred ball averages given by a double
integral of ``f`` against a polynomial kernel; swapping the order of
integration turns it into a single integral that is exact on every cell
of a step function.  Radial profiles are stored in the measure
coordinate ``t = omega_n |x|^n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .core import (DomainError, InvalidInput, StepFunction, power_integral,
                   power_step, rearrange)
from .criteria import Weight, kernel_norm_morrey, marcinkiewicz_norm
from .norms import RiSpace, conjugate_exponent, norm

UPPER_CONSTANT = 8.0     # recorded upper tracking constant of the witness


def extremal_vf_centered_average(f: StepFunction, n: int, m: int,
                                 r: float) -> float:
    """``(1/r) int_0^r int_rho^1 s^(-m+m/n) f(s) (s-rho)^(m-1) ds drho``.

    After Fubini the inner kernel is ``(s^m - (s - min(r, s))^m) / m``;
    on ``s > r`` it is expanded binomially so each cell contributes a sum
    of exact power integrals.
    """
    if not 1 <= m <= n - 1:
        raise DomainError("need 1 <= m <= n - 1")
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    if f.is_zero():
        return 0.0
    a, b, v = f.left, f.right, f.values
    mn = m / n
    lo, hi = np.minimum(a, r), np.minimum(b, r)
    total = float(np.dot(v, power_integral(lo, hi, mn)))
    lo, hi = np.maximum(a, r), np.maximum(b, r)
    for j in range(1, m + 1):
        coef = (-1) ** (j + 1) * comb(m, j) * r ** j
        total += coef * float(np.dot(v, power_integral(lo, hi, mn - j)))
    return total / (m * r)


def extremal_lower_bound(f: StepFunction, n: int, m: int, r: float) -> float:
    """``2^(-m) int_r^1 s^(-1+m/n) f``, the lower bound for the average."""
    a = np.maximum(f.left, r)
    b = np.maximum(f.right, r)
    return 2.0 ** (-m) * float(np.dot(f.values,
                                      power_integral(a, b, -1.0 + m / n)))


# ------------------------------------------------------------ dictionary


def _unit(X: RiSpace, f: StepFunction):
    val = norm(X, rearrange(f) if not f.rearranged else f).value
    if not (val > 0.0 and math.isfinite(val)):
        return None
    return f.scaled(1.0 / val)


def witness_dictionary(X: RiSpace, n: int, m: int, t: float):
    """Unit-norm test functions in ``X`` for the measure level ``t``.

    Indicators of ``(0, a)``, indicators of ``(t, c)``, truncated powers
    ``s^(-beta)`` on ``(t, 1)``, and for ``X = L^p`` the exact maximizer
    of the pairing with the kernel ``s^(-1+m/n)`` on ``(t, 1)``.
    """
    out = []
    for a in sorted({min(1.0, t * c) for c in (0.5, 1.0, 2.0, 8.0)} | {1.0}):
        out.append(("indicator(0,a)", StepFunction.indicator(a)))
    for c in (1.5, 4.0, 32.0):
        hi = min(1.0, t * c)
        if hi > t:
            out.append(("indicator(t,c)", StepFunction(
                np.array([0.0, t, hi] + ([1.0] if hi < 1.0 else [])),
                np.array([0.0, 1.0] + ([0.0] if hi < 1.0 else [])))))
    k = 1.0 - m / n
    for beta in (0.0, 0.5 * k, k):
        out.append((f"power({beta:g})", power_step(-beta, t, 1.0)))
    if X.family == "lebesgue" and 1.0 < X.p < math.inf:
        q = conjugate_exponent(X.p)
        out.append(("dual-maximizer", power_step(-k * (q - 1.0), t, 1.0)))
    units = []
    for name, f in out:
        g = _unit(X, f)
        if g is not None:
            units.append((name, g))
    return units


@dataclass(frozen=True)
class WitnessRow:
    t: float
    witness: float        # sup over the dictionary of average / phi
    kernel: float         # kernel norm / phi at radius t^(1/n)
    lower: float          # sup of the 2^-m lower bounds / phi
    best: str

    @property
    def ratio(self) -> float:
        return self.witness / self.kernel


def morrey_lower_witness(X: RiSpace, n: int, m: int, phi: Weight, r_list):
    """Constructive lower bound for the Morrey criterion.

    For each measure level ``t`` in ``r_list``: the supremum over the unit
    dictionary of ``extremal_vf_centered_average(f, n, m, t) / phi(t^(1/n))``
    next to ``kernel_norm_morrey(X, n, m, t^(1/n)) / phi(t^(1/n))``.  The
    averages dominate ``2^-m`` times the pairing with the kernel, so the
    ratio is bounded below by ``2^-m`` times the efficiency of the
    dictionary and above by ``UPPER_CONSTANT``.
    """
    phi.require_admissible()
    rows = []
    for t in r_list:
        t = float(t)
        rad = t ** (1.0 / n)
        scale = float(np.exp(-phi.log(rad)))
        best, name, low = 0.0, "", 0.0
        for label, f in witness_dictionary(X, n, m, t):
            val = extremal_vf_centered_average(f, n, m, t)
            if val > best:
                best, name = val, label
            low = max(low, extremal_lower_bound(f, n, m, t))
        kern = float(kernel_norm_morrey(X, n, m, rad))
        rows.append(WitnessRow(t, best * scale, kern * scale, low * scale,
                               name))
    return rows


# --------------------------------------------------------- radial profiles


@dataclass(frozen=True)
class RadialProfile:
    """Radial function in the measure coordinate ``t``."""

    profile: StepFunction

    def __post_init__(self):
        if np.any(self.profile.values < 0.0):
            raise InvalidInput("radial profiles are nonnegative")

    def ball_average(self, t):
        t = np.asarray(t, dtype=np.float64)
        if np.any(t <= 0.0) or np.any(t > 1.0):
            raise DomainError("t must lie in (0, 1]")
        out = self.profile.primitive(t) / t
        return out if np.ndim(out) else float(out)


def radial_morrey_norm(u: RadialProfile, phi: Weight, n: int,
                       samples=None) -> float:
    """``sup_t phi(t^(1/n))^-1 (1/t) int_0^t u`` over centred balls of
    measure ``t`` in ``samples`` (default: the profile's edges)."""
    if u.profile.is_zero():
        return 0.0
    if samples is None:
        e = u.profile.edges
        samples = e[e > 0.0]
    t = np.asarray(samples, dtype=np.float64)
    vals = np.asarray(u.ball_average(t)) * np.exp(-phi.log(t ** (1.0 / n)))
    return float(np.max(vals))


def marcinkiewicz_of_profile(u: RadialProfile, phi: Weight, n: int) -> float:
    return marcinkiewicz_norm(phi, n, rearrange(u.profile))

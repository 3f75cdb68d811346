"""The ``t <-> tau`` coordinate change, the potential F and ``e^{c0}``.

``t(tau) = int_{tau0}^{tau} dx / phi(x)`` has a logarithmic singularity at
0 because ``phi(x) = 2x + O(x^2)``.  It is split as

    t(tau) = 1/2 log(tau / tau0) + int_{tau0}^{tau} h(x) dx,
    h(x)   = 1/phi(x) - 1/(2x) = (2x - phi) / (2x phi),

where ``h`` is bounded near 0 with ``h(0) = -phi''(0) / 8``.

The anchor ``tau0`` fixes the additive constant in ``t = log r`` and hence
the scale of ``r``.  Quantities measured against ``r`` (``e^{c0}``, the
zero-section limit) depend on it: moving the anchor to ``tau1`` multiplies
``e^{c0}`` by ``exp(2 t(tau1))``.  The default anchor is
``2^{1/(m+1)} - 1``, for which the Calabi–Yau profile has
``t = 1/2 log((1+tau)^{m+1} - 1)`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import NonPositiveTau, ProfileNotExtendable, QuadratureFailure
from .profiles import Profile, eval_phi

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 10_000
KNOTS = np.geomspace(1e-8, 1e8, 33)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def default_anchor(m: int) -> float:
    return 2.0 ** (1.0 / (m + 1)) - 1.0


def _quad(f, a: float, b: float) -> float:
    if a == b:
        return 0.0
    if abs(b - a) <= 1e-6 * max(abs(a), abs(b)):
        # adaptive error estimates drown in rounding noise on such short
        # intervals; a fixed rule is already exact to rounding there
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        return half * math.fsum(w * f(mid + half * x) for x, w in zip(_GL_NODES, _GL_WEIGHTS))
    out = quad(f, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, full_output=1)
    if len(out) > 3:
        raise QuadratureFailure(f"quadrature on [{a:g}, {b:g}] failed: {out[3]}")
    return out[0]


def _h(profile: Profile):
    phi0, _, d2_0 = eval_phi(profile, 0.0)
    h0 = -d2_0 / 8.0

    def h(x: float) -> float:
        if x == 0.0:
            return h0
        phi = eval_phi(profile, x)[0]
        return (2.0 * x - phi) / (2.0 * x * phi)

    return h


def _x_over_phi(profile: Profile):
    def g(x: float) -> float:
        if x == 0.0:
            return 0.5
        return x / eval_phi(profile, x)[0]

    return g


def _check_extendable(profile: Profile) -> None:
    phi0, d1, _ = eval_phi(profile, 0.0)
    if abs(phi0) > 1e-12 or abs(d1 - 2.0) > 1e-8:
        raise ProfileNotExtendable(f"need phi(0) = 0, phi'(0) = 2; got {phi0!r}, {d1!r}")


@dataclass(frozen=True)
class CoordinateMap:
    """``t(tau)`` anchored at ``t(tau0) = 0``, with cached knot integrals.

    ``h_knots[i]`` and ``f_knots[i]`` hold ``int_{tau0}^{knots[i]}`` of ``h``
    and of ``x / phi`` respectively.
    """

    profile: Profile
    tau0: float
    knots: np.ndarray
    h_knots: np.ndarray
    f_knots: np.ndarray

    @property
    def t_knots(self) -> np.ndarray:
        return 0.5 * np.log(self.knots / self.tau0) + self.h_knots

    def _nearest(self, tau: float) -> int:
        return int(np.argmin(np.abs(np.log(self.knots) - math.log(tau))))

    def t_of_tau(self, tau: float) -> float:
        return t_of_tau(self, tau)

    def tau_of_t(self, t: float) -> float:
        return tau_of_t(self, t)


def coordinate_map(profile: Profile, tau0: float | None = None) -> CoordinateMap:
    if tau0 is None:
        tau0 = default_anchor(profile.m)
    if not tau0 > 0:
        raise NonPositiveTau(f"tau0 must be positive, got {tau0!r}")
    _check_extendable(profile)
    knots = np.unique(np.append(KNOTS, tau0))
    h, g = _h(profile), _x_over_phi(profile)
    i0 = int(np.searchsorted(knots, tau0))
    hk = np.zeros(len(knots))
    fk = np.zeros(len(knots))
    for i in range(i0 + 1, len(knots)):
        hk[i] = hk[i - 1] + _quad(h, knots[i - 1], knots[i])
        fk[i] = fk[i - 1] + _quad(g, knots[i - 1], knots[i])
    for i in range(i0 - 1, -1, -1):
        hk[i] = hk[i + 1] - _quad(h, knots[i], knots[i + 1])
        fk[i] = fk[i + 1] - _quad(g, knots[i], knots[i + 1])
    hk.setflags(write=False)
    fk.setflags(write=False)
    knots.setflags(write=False)
    return CoordinateMap(profile, float(tau0), knots, hk, fk)


def t_of_tau(cmap: CoordinateMap, tau: float) -> float:
    """``int_{tau0}^{tau} dx / phi(x)`` with the log singularity removed."""
    tau = float(tau)
    if not tau > 0:
        raise NonPositiveTau(f"tau must be positive, got {tau!r}")
    i = cmap._nearest(tau)
    rest = _quad(_h(cmap.profile), cmap.knots[i], tau)
    return 0.5 * math.log(tau / cmap.tau0) + cmap.h_knots[i] + rest


def tau_of_t(cmap: CoordinateMap, t: float, rtol: float = 1e-14) -> float:
    """Invert :func:`t_of_tau` by safeguarded Newton in ``u = log tau``."""
    t = float(t)
    tk = cmap.t_knots
    logk = np.log(cmap.knots)

    def f(u: float) -> float:
        return t_of_tau(cmap, math.exp(u)) - t

    # bracket [lo, hi] in u with f(lo) < 0 < f(hi); t ~ (1/2) log tau near 0
    j = int(np.searchsorted(tk, t))
    if j == 0:
        hi = logk[0]
        lo = hi + 2.0 * (t - tk[0]) - 1.0
        while f(lo) > 0:
            lo -= 2.0 * (hi - lo) + 1.0
        u = lo + 1.0
    elif j == len(tk):
        lo = logk[-1]
        hi = lo + 1.0
        while f(hi) < 0:
            hi += 2.0 * (hi - lo)
        u = 0.5 * (lo + hi)
    else:
        lo, hi = logk[j - 1], logk[j]
        u = lo + (hi - lo) * (t - tk[j - 1]) / (tk[j] - tk[j - 1])

    for _ in range(200):
        fu = f(u)
        if fu == 0:
            return math.exp(u)
        if fu < 0:
            lo = u
        else:
            hi = u
        tau = math.exp(u)
        slope = tau / eval_phi(cmap.profile, tau)[0]  # dt/du
        step = fu / slope
        nxt = u - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - u) <= rtol * max(1.0, abs(u)) or hi - lo <= rtol * max(1.0, abs(u)):
            return math.exp(nxt)
        u = nxt
    raise QuadratureFailure(f"tau_of_t did not converge for t={t!r}")


def potential_F(cmap: CoordinateMap, t: float) -> float:
    """``F(t) = int_{tau0}^{tau(t)} x dx / phi(x)``."""
    tau = tau_of_t(cmap, t)
    i = cmap._nearest(tau)
    return cmap.f_knots[i] + _quad(_x_over_phi(cmap.profile), cmap.knots[i], tau)


def scaling_constant_e_c0(profile: Profile, tau0: float | None = None) -> float:
    """Zero-section constant ``e^{c0} = 1/2 lim phi(tau) / r^2``.

    Equals ``tau0 * exp(int_0^{tau0} (2/phi(x) - 1/x) dx)``; the integrand is
    ``2 h(x)`` and is bounded at 0.
    """
    if tau0 is None:
        tau0 = default_anchor(profile.m)
    if not tau0 > 0:
        raise NonPositiveTau(f"tau0 must be positive, got {tau0!r}")
    _check_extendable(profile)
    h = _h(profile)
    return tau0 * math.exp(2.0 * _quad(h, 0.0, tau0))


def zero_section_limit(profile: Profile, tau0: float | None = None) -> tuple[float, float]:
    """Coefficients of ``omega^T`` and ``i dr ^ dbar r`` at the zero section."""
    return 1.0, 2.0 * scaling_constant_e_c0(profile, tau0)


def coordinate_rows(cmap: CoordinateMap, t_values) -> list[tuple[float, float, float, float]]:
    """Rows ``(t, tau, F, phi)`` for CSV output."""
    rows = []
    for t in t_values:
        tau = tau_of_t(cmap, float(t))
        i = cmap._nearest(tau)
        F = cmap.f_knots[i] + _quad(_x_over_phi(cmap.profile), cmap.knots[i], tau)
        rows.append((float(t), tau, F, eval_phi(cmap.profile, tau)[0]))
    return rows

"""Closed-form momentum profiles for Kähler–Einstein metrics and solitons.

Both profile types satisfy ``phi(0) = 0`` and ``phi'(0) = 2`` and are
evaluated with analytic derivatives.

KE profile (``kappa = 2p/k``, ``alpha = kappa - 2``)::

    phi = kappa/(m+1) ((1+tau) - (1+tau)^-m) - alpha/(m+2) ((1+tau)^2 - (1+tau)^-m)

Soliton profile (any ``kappa > 0``, soliton parameter ``mu``)::

    phi = A e^{mu tau} (1+tau)^-m + (kappa-2)(1+tau)/mu
          + sum_j c_j (1+tau)^(j-m),      j = 0..m

with ``c_j = (kappa - 2 - kappa mu/(m+1)) (m+1)!/j! mu^(j-m-2)`` and
``A = e^mu nu(kappa, mu)`` fixed by ``phi(0) = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BracketFailure, InvalidFamily, MuZero, NegativeTau, PositivityViolation, ValidationError

MU_BRACKET = (1e-6, 64.0)
MU_BRACKET_CAP = 2.0**20
DEFAULT_MU = -1.0


class Family(enum.Enum):
    EXPANDING = "Expanding"
    STEADY = "Steady"
    SHRINKING = "Shrinking"


class Growth(enum.Enum):
    LINEAR = "Linear"
    QUADRATIC = "Quadratic"


def _as_array(tau):
    t = np.asarray(tau, dtype=float)
    if np.any(t < 0):
        raise NegativeTau(f"tau must be >= 0, got min {t.min()!r}")
    return t


@dataclass(frozen=True)
class ProfileKE:
    """Kähler–Einstein profile on ``L^k`` with ``K_M = L^p``."""

    m: int
    p: int
    k: int

    @property
    def kappa(self) -> Fraction:
        return Fraction(2 * self.p, self.k)

    @property
    def alpha(self) -> Fraction:
        return self.kappa - 2

    @property
    def kind(self) -> str:
        return "ke"

    def phi(self, tau):
        return eval_phi(self, tau)[0]

    def phi_exact(self, tau: Fraction) -> Fraction:
        """Exact value at a rational ``tau``."""
        s = 1 + Fraction(tau)
        inv = 1 / s**self.m
        return (self.kappa / (self.m + 1) * (s - inv)
                - self.alpha / (self.m + 2) * (s**2 - inv))

    def to_json(self) -> dict:
        return {"type": "ke", "m": self.m, "p": self.p, "k": self.k,
                "kappa": float(self.kappa), "alpha": float(self.alpha)}


@dataclass(frozen=True)
class ProfileSoliton:
    """Kähler–Ricci soliton profile."""

    m: int
    kappa: float
    mu: float
    nu: float
    family: Family

    @property
    def alpha(self) -> float:
        return self.kappa - 2.0

    @property
    def kind(self) -> str:
        return "soliton"

    @property
    def exp_coefficient(self) -> float:
        """``e^mu * nu``; exactly zero for shrinking solitons."""
        if self.family is Family.SHRINKING:
            return 0.0
        return _nu_bracket(self.m, self.kappa, self.mu)

    @property
    def power_coefficients(self) -> np.ndarray:
        m, kappa, mu = self.m, self.kappa, self.mu
        c = kappa - 2.0 - kappa * mu / (m + 1)
        return np.array([
            c * math.factorial(m + 1) / math.factorial(j) * mu ** (j - m - 2)
            for j in range(m + 1)
        ])

    def phi(self, tau):
        return eval_phi(self, tau)[0]

    def to_json(self) -> dict:
        return {"type": "soliton", "m": self.m, "kappa": self.kappa, "mu": self.mu,
                "nu": self.nu, "family": self.family.value}


Profile = ProfileKE | ProfileSoliton


# ---------------------------------------------------------------------------
# Kähler–Einstein


def ke_profile(m: int, p: int, k: int) -> ProfileKE:
    if m < 1 or p < 1 or k < 1:
        raise ValidationError(f"need m, p, k >= 1; got m={m}, p={p}, k={k}")
    if k < p:
        raise PositivityViolation(
            f"k={k} < p={p}: the KE profile is not positive; use a shrinking soliton"
        )
    return ProfileKE(int(m), int(p), int(k))


def _ke_eval(prof: ProfileKE, t: np.ndarray):
    m = prof.m
    a = float(prof.kappa) / (m + 1)
    b = float(prof.alpha) / (m + 2)
    log1 = np.log1p(t)
    em = np.expm1(-m * log1)           # (1+t)^-m - 1
    inv_m1 = np.exp(-(m + 1) * log1)   # (1+t)^-(m+1)
    inv_m2 = np.exp(-(m + 2) * log1)
    s = 1.0 + t
    lin = t - em                       # (1+t) - (1+t)^-m
    quad = np.expm1(2 * log1) - em     # (1+t)^2 - (1+t)^-m
    phi = a * lin - b * quad
    d1 = a * (1 + m * inv_m1) - b * (2 * s + m * inv_m1)
    d2 = -a * m * (m + 1) * inv_m2 - b * (2 - m * (m + 1) * inv_m2)
    return phi, d1, d2


# ---------------------------------------------------------------------------
# solitons


def _nu_bracket(m: int, kappa: float, mu: float) -> float:
    """``e^mu * nu(kappa, mu)``: the bracketed sum, compensated."""
    if mu == 0:
        raise MuZero("mu must be nonzero")
    c = -kappa + 2.0 + kappa * mu / (m + 1)
    terms = [(-kappa + 2.0) / mu]
    terms += [c * math.factorial(m + 1) / math.factorial(j) * mu ** (j - m - 2)
              for j in range(m + 1)]
    return math.fsum(terms)


def soliton_nu(m: int, kappa: float, mu: float) -> float:
    """The constant fixed by ``phi(0) = 0`` in the soliton solution."""
    return math.exp(-mu) * _nu_bracket(m, kappa, mu)


def _nu_bracket_dmu(m: int, kappa: float, mu: float) -> float:
    c = -kappa + 2.0 + kappa * mu / (m + 1)
    dc = kappa / (m + 1)
    terms = [-(-kappa + 2.0) / mu**2]
    for j in range(m + 1):
        w = math.factorial(m + 1) / math.factorial(j)
        e = j - m - 2
        terms.append(w * (dc * mu**e + c * e * mu ** (e - 1)))
    return math.fsum(terms)


def solve_soliton_mu(m: int, kappa: float) -> float:
    """Unique ``mu > 0`` with ``nu(kappa, mu) = 0`` (shrinking regime ``kappa > 2``).

    Bracket expansion, bisection to 1e-14, then one Newton polish.  Roots
    of ``nu`` are the roots of ``e^mu nu``, which is what is iterated.
    """
    if kappa <= 2:
        raise BracketFailure(f"kappa={kappa} <= 2 has no positive soliton root")
    f = lambda x: _nu_bracket(m, kappa, x)  # noqa: E731
    lo, hi = MU_BRACKET
    flo = f(lo)
    if flo >= 0:
        raise BracketFailure(f"nu({lo}) = {flo} is not negative")
    while f(hi) <= 0:
        hi *= 2
        if hi > MU_BRACKET_CAP:
            raise BracketFailure("no sign change of nu below 2^20")
    while hi - lo > 1e-14 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    d = _nu_bracket_dmu(m, kappa, mu)
    if d != 0:
        polished = mu - f(mu) / d
        if lo <= polished <= hi and abs(f(polished)) <= abs(f(mu)):
            mu = polished
    return mu


def soliton_family(kappa: float, mu: float) -> Family:
    if kappa < 2 and mu < 0:
        return Family.EXPANDING
    if kappa == 2 and mu < 0:
        return Family.STEADY
    if kappa > 2 and mu > 0:
        return Family.SHRINKING
    raise InvalidFamily(f"(kappa={kappa}, mu={mu}) is not an expanding, steady or shrinking pair")


def soliton_profile(m: int, kappa: float, mu: float | None = None) -> ProfileSoliton:
    """Soliton profile; ``mu`` defaults to -1 for ``kappa <= 2`` and to the
    unique root of ``nu`` for ``kappa > 2``."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    kappa = float(kappa)
    if kappa <= 0:
        raise ValidationError(f"kappa must be positive, got {kappa}")
    if mu is None:
        mu = solve_soliton_mu(m, kappa) if kappa > 2 else DEFAULT_MU
    mu = float(mu)
    if mu == 0:
        raise MuZero("mu must be nonzero")
    family = soliton_family(kappa, mu)
    nu = soliton_nu(m, kappa, mu)
    if family is Family.SHRINKING and abs(nu) > 1e-12:
        raise InvalidFamily(f"shrinking soliton needs nu(kappa, mu) = 0; got nu = {nu:.3e}")
    return ProfileSoliton(m=int(m), kappa=kappa, mu=mu, nu=nu, family=family)


def _soliton_eval(prof: ProfileSoliton, t: np.ndarray):
    # The constant parts cancel exactly (that is what fixes nu), so every
    # term is written as coefficient * expm1(...) and phi(0) = 0 holds
    # exactly; this also avoids cancellation for small tau.
    m, mu = prof.m, prof.mu
    amp = prof.exp_coefficient
    s = 1.0 + t
    log1 = np.log1p(t)
    lin = (prof.kappa - 2.0) / mu
    phi = lin * t
    d1 = np.full_like(t, lin)
    d2 = np.zeros_like(t)
    for j, c in enumerate(prof.power_coefficients):
        e = j - m
        if e == 0:
            continue
        pw = np.exp(e * log1)
        phi = phi + c * np.expm1(e * log1)
        d1 = d1 + c * e * pw / s
        d2 = d2 + c * e * (e - 1) * pw / s**2
    if amp != 0.0:
        expo = mu * t - m * log1
        g = amp * np.exp(expo)
        q = mu - m / s
        phi = phi + amp * np.expm1(expo)
        d1 = d1 + g * q
        d2 = d2 + g * (q * q + m / s**2)
    return phi, d1, d2


def krs10_phi(profile: ProfileSoliton, tau):
    """Direct substitution in the general soliton solution, exponential term
    included with the computed ``nu`` (even when it is ~0)."""
    m, kappa, mu = profile.m, profile.kappa, profile.mu
    t = _as_array(tau)
    s = 1.0 + t
    c = kappa - 2.0 - kappa * mu / (m + 1)
    total = sum(math.factorial(m + 1) / math.factorial(j) * mu**j * s ** (j - m)
                for j in range(m + 1))
    val = (_nu_bracket(m, kappa, mu) * np.exp(mu * t) / s**m
           + (kappa - 2.0) * s / mu + c / mu ** (m + 2) * total)
    return float(val) if np.ndim(tau) == 0 else val


def krs11_phi(profile: ProfileSoliton, tau):
    """Direct substitution in the ``nu = 0`` (shrinking) form."""
    m, kappa, mu = profile.m, profile.kappa, profile.mu
    t = _as_array(tau)
    s = 1.0 + t
    c = kappa - 2.0 - kappa * mu / (m + 1)
    total = sum(math.factorial(m + 1) / math.factorial(j) * mu**j * s ** (j - m)
                for j in range(m + 1))
    val = (kappa - 2.0) * s / mu + c / mu ** (m + 2) * total
    return float(val) if np.ndim(tau) == 0 else val


# ---------------------------------------------------------------------------
# shared evaluation


def eval_phi(profile: Profile, tau):
    """``(phi, phi', phi'')`` at ``tau >= 0`` (scalar or array)."""
    t = _as_array(tau)
    if isinstance(profile, ProfileKE):
        out = _ke_eval(profile, t)
    else:
        out = _soliton_eval(profile, t)
    if np.ndim(tau) == 0:
        return tuple(float(x) for x in out)
    return out


def residual(profile: Profile, tau, alpha: float | None = None, mu: float | None = None):
    """Left minus right side of the governing first-order ODE.

    KE:       kappa - (m phi + (1+tau) phi')/(1+tau) - alpha (1+tau)
    soliton:  phi' + (m/(1+tau) - mu) phi + (kappa - 2) tau - 2

    ``alpha`` / ``mu`` override the profile's own constants (negative
    controls).
    """
    t = np.asarray(tau, dtype=float)
    phi, d1, _ = (np.asarray(x) for x in eval_phi(profile, t))
    m = profile.m
    s = 1.0 + t
    if isinstance(profile, ProfileKE):
        a = float(profile.alpha) if alpha is None else float(alpha)
        out = float(profile.kappa) - (m * phi + s * d1) / s - a * s
    else:
        u = profile.mu if mu is None else float(mu)
        out = d1 + (m / s - u) * phi + (profile.kappa - 2.0) * t - 2.0
    return float(out) if np.ndim(tau) == 0 else out


def growth_class(profile: Profile) -> Growth:
    """Quadratic iff the KE ``alpha < 0`` term is present; otherwise at most linear."""
    if isinstance(profile, ProfileKE) and profile.alpha < 0:
        return Growth.QUADRATIC
    return Growth.LINEAR


def growth_coefficient(profile: Profile) -> float:
    """Analytic limit of ``phi(tau) / tau^deg`` as ``tau -> infinity``."""
    m = profile.m
    if isinstance(profile, ProfileKE):
        if profile.alpha < 0:
            return float(-profile.alpha / (m + 2))
        return float(profile.kappa / (m + 1))
    return (profile.kappa - 2.0) / profile.mu


def profile_from_json(obj: dict) -> Profile:
    kind = obj.get("type")
    if kind == "ke":
        return ke_profile(int(obj["m"]), int(obj["p"]), int(obj["k"]))
    if kind == "soliton":
        m = int(obj["m"])
        if "kappa" in obj:
            kappa = float(obj["kappa"])
        else:
            kappa = 2.0 * int(obj["p"]) / int(obj["k"])
        mu = obj.get("mu")
        return soliton_profile(m, kappa, None if mu is None else float(mu))
    raise ValidationError(f"unknown profile type {kind!r}")

"""Two-coefficient 2-form algebra for the momentum construction.

Every form here is ``c_T * omega^T + c_t * i dt ^ dbar t``; with the
convention ``d^c = (i/2)(dbar - d)`` one has ``dt ^ d^c t = i dt ^ dbar t``,
so the Kähler form, its Ricci form and the soliton correction all live in
the same basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import NonPositiveInput, ValidationError
from .profiles import Profile, ProfileKE, ProfileSoliton, eval_phi


@dataclass(frozen=True)
class SplitForm:
    c_T: float
    c_t: float
    tau: float

    def __sub__(self, other: "SplitForm") -> "SplitForm":
        return SplitForm(self.c_T - other.c_T, self.c_t - other.c_t, self.tau)

    def scaled(self, a: float) -> "SplitForm":
        return SplitForm(a * self.c_T, a * self.c_t, self.tau)

    def max_abs(self) -> float:
        return max(abs(self.c_T), abs(self.c_t))


@dataclass(frozen=True)
class HomotheticParams:
    a: float | Fraction
    kappa_in: float | Fraction
    kappa_out: float | Fraction


def _kappa(profile: Profile) -> float:
    return float(profile.kappa)


def omega_phi(profile: Profile, tau: float) -> SplitForm:
    phi = eval_phi(profile, tau)[0]
    return SplitForm(1.0 + tau, phi, tau)


def ricci_phi(profile: Profile, tau: float) -> SplitForm:
    """Ricci form of ``omega_phi`` from analytic profile derivatives."""
    phi, d1, d2 = eval_phi(profile, tau)
    m, s = profile.m, 1.0 + tau
    c_T = _kappa(profile) - (m * phi + s * d1) / s
    dmphi = m * (d1 / s - phi / s**2)  # (m phi / (1+tau))'
    c_t = -(dmphi + d2) * phi
    return SplitForm(c_T, c_t, tau)


def einstein_residual(profile: Profile, tau: float) -> SplitForm:
    """``rho - alpha * omega``; vanishes identically for KE profiles."""
    return ricci_phi(profile, tau) - omega_phi(profile, tau).scaled(float(profile.alpha))


def soliton_residual(profile: ProfileSoliton, tau: float, mu: float | None = None) -> SplitForm:
    """``rho - alpha omega + (mu phi, (mu phi)' phi)``; ``mu`` may be overridden."""
    if not isinstance(profile, ProfileSoliton):
        raise ValidationError("soliton_residual needs a soliton profile")
    u = profile.mu if mu is None else float(mu)
    phi, d1, _ = eval_phi(profile, tau)
    base = einstein_residual(profile, tau)
    return SplitForm(base.c_T + u * phi, base.c_t + u * d1 * phi, tau)


def curvature_residual(profile: Profile, tau: float) -> SplitForm:
    if isinstance(profile, ProfileKE):
        return einstein_residual(profile, tau)
    return soliton_residual(profile, tau)


def volume_density(profile: Profile, tau: float) -> float:
    """``(m+1) (1+tau)^m phi(tau)``."""
    phi = eval_phi(profile, tau)[0]
    return (profile.m + 1) * (1.0 + tau) ** profile.m * phi


def d_homothetic(kappa, a) -> HomotheticParams:
    """Transverse Einstein constant after ``r -> r^a``: ``kappa / a``.

    Exact when both arguments are rational.
    """
    if not (a > 0 and kappa > 0):
        raise NonPositiveInput(f"need a > 0 and kappa > 0; got a={a}, kappa={kappa}")
    if isinstance(a, Rational) and isinstance(kappa, Rational):
        a, kappa = Fraction(a), Fraction(kappa)
        return HomotheticParams(a, kappa, kappa / a)
    return HomotheticParams(a, kappa, kappa / a)


def residual_table(profile: Profile, taus) -> np.ndarray:
    """Rows ``(tau, res_T, res_t)`` of the Einstein or soliton residual."""
    rows = []
    for tau in taus:
        r = curvature_residual(profile, float(tau))
        rows.append((float(tau), r.c_T, r.c_t))
    return np.array(rows)


def max_scaled_residual(profile: Profile, taus) -> float:
    """``max |residual| / (1+tau)^2`` over ``taus`` (both components)."""
    table = residual_table(profile, taus)
    scale = (1.0 + table[:, 0]) ** 2
    return float(np.max(np.abs(table[:, 1:]) / scale[:, None]))


# ---------------------------------------------------------------------------
# asymptotics of the Calabi–Yau metric against the cone metric


@dataclass(frozen=True)
class DecayReport:
    m: int
    radii: tuple[float, ...]
    first_term: tuple[float, ...]
    second_term: tuple[float, ...]
    order_first_term: float
    constant_first_term: float
    order_second_term: float

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "radii": list(self.radii),
            "first_term_difference": list(self.first_term),
            "second_term_difference": list(self.second_term),
            "order_first_term": self.order_first_term,
            "constant_first_term": self.constant_first_term,
            "order_second_term": self.order_second_term,
            "expected_order_first_term": -2 * self.m,
            "expected_order_second_term": -(2 * self.m + 2),
        }


def first_term_difference(m: int, radius: float) -> float:
    """``(m+1) [(r'^{2(m+1)} + 1)^{1/(m+1)} - r'^2]`` without cancellation."""
    x = float(radius) ** (-2 * (m + 1))
    return (m + 1) * radius**2 * np.expm1(np.log1p(x) / (m + 1))


def second_term_difference(m: int, radius: float) -> float:
    """``tau'(r')^2 / phi - 2(m+1)`` for the Calabi–Yau profile.

    With ``R = r'^{2(m+1)}``, ``tau = (R+1)^{1/(m+1)} - 1`` and the k = p
    profile this is ``2(m+1) [(1 + 1/R)^{-m/(m+1)} - 1]``.
    """
    x = float(radius) ** (-2 * (m + 1))
    return 2 * (m + 1) * np.expm1(-m / (m + 1) * np.log1p(x))


def second_term_difference_direct(m: int, radius: float) -> float:
    """Same quantity through the profile evaluator; loses accuracy for large ``r'``."""
    from .profiles import ke_profile

    prof = ke_profile(m, 1, 1)
    R = float(radius) ** (2 * (m + 1))
    tau = (R + 1.0) ** (1.0 / (m + 1)) - 1.0
    phi = eval_phi(prof, tau)[0]
    # t = log r = (m+1) log r'  =>  dtau/dr' = phi (m+1) / r'
    dtau = phi * (m + 1) / radius
    return dtau**2 / phi - 2 * (m + 1)


def first_term_difference_direct(m: int, radius: float) -> float:
    R = float(radius) ** (2 * (m + 1))
    tau = (R + 1.0) ** (1.0 / (m + 1)) - 1.0
    return (1.0 + tau) * (m + 1) - radius**2 * (m + 1)


def asymptotic_decay(m: int, radii=(1e1, 1e2, 1e3, 1e4)) -> DecayReport:
    """Least-squares decay orders of the two coefficient differences."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    r = np.asarray(radii, dtype=float)
    d1 = np.array([first_term_difference(m, x) for x in r])
    d2 = np.array([second_term_difference(m, x) for x in r])
    slope1 = np.polyfit(np.log(r), np.log(np.abs(d1)), 1)[0]
    slope2 = np.polyfit(np.log(r), np.log(np.abs(d2)), 1)[0]
    const = float(r[-1] ** (2 * m) * d1[-1])
    return DecayReport(
        m=m,
        radii=tuple(r.tolist()),
        first_term=tuple(d1.tolist()),
        second_term=tuple(d2.tolist()),
        order_first_term=float(slope1),
        constant_first_term=const,
        order_second_term=float(slope2),
    )

"""Volume minimization over the Reeb hyperplane and regularity classification.

The search space is the affine slice ``{xi : <xi, beta> = m + 1}``
intersected with the interior of the dual cone.  It is parametrized as
``xi = xi0 + B u`` with ``B`` an orthonormal basis of ``beta^perp``.

The tangential gradient comes from the identity

    grad Vol(xi) = -(n / (m + 1)) * Vol(xi) * barycenter(P_xi)

(the truncated cone's Laplace-transform representation), which is exact
up to rounding; the Hessian is a central finite difference of that
gradient.  A finite-difference gradient of the volume itself is exposed
via :func:`fd_gradient` for cross-checking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .cone_model import (
    GorensteinPoint,
    MomentCone,
    ReebVector,
    gorenstein_point,
    volume_and_barycenter,
    volume_functional,
)
from .errors import (
    EmptyInterior,
    LeftInterior,
    MaxIterationsExceeded,
    UnboundedSlice,
    ValidationError,
    ZeroLeadingComponent,
)

FD_STEP = 1e-5
DEFAULT_MAX_ITER = 500


class Regularity(enum.Enum):
    RATIONAL = "RationalDirection"
    IRRATIONAL = "IrrationalDirection"


@dataclass(frozen=True)
class RegularityClass:
    kind: Regularity
    denominator_bound: int
    integer_direction: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "denominator_bound": self.denominator_bound}
        if self.integer_direction is not None:
            out["integer_direction"] = list(self.integer_direction)
        return out


@dataclass(frozen=True)
class CriticalReebResult:
    xi_star: ReebVector
    volume: float
    criticality_residual: float
    iterations: int
    regularity: RegularityClass
    tol: float

    def to_json(self) -> dict:
        return {
            "xi": list(self.xi_star.xi),
            "volume": self.volume,
            "residual": self.criticality_residual,
            "regularity": self.regularity.to_json(),
            "iterations": self.iterations,
            "tol": self.tol,
        }


def _tangent_basis(beta: np.ndarray) -> np.ndarray:
    b = beta / np.linalg.norm(beta)
    q, _ = np.linalg.qr(np.column_stack([b, np.eye(len(b))]))
    return q[:, 1:len(b)]


def _min_margin(cone: MomentCone, xi: np.ndarray) -> float:
    rays = cone.ray_array
    return float(np.min(rays @ xi / np.linalg.norm(rays, axis=1)))


def initial_reeb(cone: MomentCone, beta: GorensteinPoint | None = None) -> ReebVector:
    """A strictly interior starting point on the Reeb hyperplane."""
    if beta is None:
        beta = gorenstein_point(cone)
    b = np.asarray(beta)
    level = float(cone.n)
    xi = level * b / float(b @ b)
    if _min_margin(cone, xi) > 1e-9:
        return ReebVector(tuple(float(x) for x in xi))

    # Chebyshev-style centre: maximize s subject to <xi, r_hat> >= s, <xi, beta> = m+1
    rays = cone.ray_array / np.linalg.norm(cone.ray_array, axis=1)[:, None]
    n = cone.n
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-rays, np.ones((len(rays), 1))])
    b_ub = np.zeros(len(rays))
    a_eq = np.hstack([b, [0.0]])[None, :]
    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[level],
        bounds=[(None, None)] * n + [(None, level)], method="highs",
    )
    if not res.success or res.x[-1] <= 1e-12:
        raise EmptyInterior("Reeb hyperplane misses the interior of the dual cone")
    xi = res.x[:n]
    # re-project exactly onto the hyperplane
    xi = xi + (level - xi @ b) * b / (b @ b)
    return ReebVector(tuple(float(x) for x in xi))


def tangent_gradient(cone: MomentCone, xi, basis: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Volume, its gradient along ``basis`` and the slice barycenter at ``xi``."""
    vol, bary = volume_and_barycenter(cone, xi)
    level = float(cone.n)
    grad = -(cone.n / level) * vol * bary
    return vol, basis.T @ grad, bary


def fd_gradient(cone: MomentCone, xi, basis: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central-difference gradient of the volume along ``basis``.

    One Richardson step (``h`` and ``h/2``) removes the O(h^2) term.
    """
    xi = np.asarray(xi, dtype=float)
    step = h * np.linalg.norm(xi)

    def central(s):
        g = np.empty(basis.shape[1])
        for i in range(basis.shape[1]):
            d = s * basis[:, i]
            g[i] = (volume_functional(cone, xi + d) - volume_functional(cone, xi - d)) / (2 * s)
        return g

    g1, g2 = central(step), central(step / 2)
    return (4 * g2 - g1) / 3


def _fd_hessian(cone: MomentCone, xi: np.ndarray, basis: np.ndarray, h: float) -> np.ndarray:
    k = basis.shape[1]
    step = h * np.linalg.norm(xi)
    hess = np.empty((k, k))
    for i in range(k):
        d = step * basis[:, i]
        gp = tangent_gradient(cone, xi + d, basis)[1]
        gm = tangent_gradient(cone, xi - d, basis)[1]
        hess[:, i] = (gp - gm) / (2 * step)
    return 0.5 * (hess + hess.T)


def _is_interior(cone: MomentCone, xi: np.ndarray) -> bool:
    return _min_margin(cone, xi) > 1e-12 * np.linalg.norm(xi)


def minimize_volume(
    cone: MomentCone,
    tol: float = 1e-10,
    max_iter: int = DEFAULT_MAX_ITER,
    max_denominator: int = 10**4,
) -> CriticalReebResult:
    """Find the critical Reeb vector by projected Newton descent.

    Terminates once ``|barycenter(P_xi) - beta| <= tol``.
    """
    if not 1e-12 <= tol <= 1e-4:
        raise ValidationError(f"tol={tol!r} outside [1e-12, 1e-4]")
    beta = gorenstein_point(cone)
    b = np.asarray(beta)
    basis = _tangent_basis(b)
    xi = np.asarray(initial_reeb(cone, beta), dtype=float)

    for it in range(max_iter + 1):
        vol, grad, bary = tangent_gradient(cone, xi, basis)
        residual = float(np.linalg.norm(bary - b))
        if residual <= tol:
            xi_star = ReebVector(tuple(float(x) for x in xi))
            return CriticalReebResult(
                xi_star=xi_star,
                volume=vol,
                criticality_residual=residual,
                iterations=it,
                regularity=classify_regularity(xi_star, max_denominator),
                tol=tol,
            )
        if it == max_iter:
            break
        hess = _fd_hessian(cone, xi, basis, FD_STEP)
        try:
            direction = -np.linalg.solve(hess, grad)
            if direction @ grad >= 0:
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            direction = -grad
        move = basis @ direction

        t = 1.0
        for _ in range(60):
            trial = xi + t * move
            if _is_interior(cone, trial):
                vt = volume_functional(cone, trial)
                if vt <= vol + 1e-4 * t * (direction @ grad):
                    break
                # plateau at rounding level: accept if no worse
                if vt <= vol and abs(t * (direction @ grad)) < 1e-14 * vol:
                    break
            t *= 0.5
        else:
            if not _is_interior(cone, xi + t * move):
                raise LeftInterior("line search cannot stay inside the dual cone")
            # no decrease possible at this resolution
            raise MaxIterationsExceeded(
                f"line search stalled at residual {residual:.3e} > tol {tol:.1e}"
            )
        xi = trial
        # guard against drift off the hyperplane
        xi = xi + (cone.n - xi @ b) * b / (b @ b)

    raise MaxIterationsExceeded(f"no convergence in {max_iter} iterations (tol {tol:.1e})")


def classify_regularity(xi, max_denominator: int = 10**4) -> RegularityClass:
    """Rational vs irrational direction, up to a denominator bound.

    Each ratio ``xi_i / xi_1`` is replaced by its best continued-fraction
    approximant with denominator at most ``max_denominator``; the common
    denominator then scales ``xi`` to a candidate integer vector.
    """
    xi = np.asarray(xi, dtype=float)
    if abs(xi[0]) < 1e-300 or xi[0] == 0:
        raise ZeroLeadingComponent("xi_1 = 0; ratios undefined")
    ratios = xi / xi[0]
    approx = [Fraction(float(r)).limit_denominator(max_denominator) for r in ratios]
    q = 1
    for f in approx:
        q = q * f.denominator // math.gcd(q, f.denominator)
    if q <= max_denominator:
        ints = [int(f * q) for f in approx]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        ints = [x // g for x in ints]
        scale = ints[0] / ratios[0]
        scaled = ratios * scale
        bound_ok = max(abs(x) for x in ints) <= max_denominator
        if bound_ok and np.max(np.abs(scaled - ints)) <= 1e-9 * max(1, max(abs(x) for x in ints)):
            return RegularityClass(Regularity.RATIONAL, max_denominator, tuple(ints))
    return RegularityClass(Regularity.IRRATIONAL, max_denominator)


def volume_on_hyperplane(cone: MomentCone, xi) -> float:
    """Volume functional, rejecting points that are off the Reeb hyperplane."""
    xi = np.asarray(xi, dtype=float)
    b = np.asarray(gorenstein_point(cone))
    if abs(xi @ b - cone.n) > 1e-12 * cone.n:
        raise UnboundedSlice("xi is not on the Reeb hyperplane")
    return volume_functional(cone, xi)

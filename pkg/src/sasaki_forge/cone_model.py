"""Toric moment cones, Reeb slices, volumes and barycenters.

A moment cone is given by inward facet normals ``lambda_j``::

    C = {y : <lambda_j, y> >= 0 for all j}

Ray enumeration and the Gorenstein point are exact (integers and
``fractions.Fraction``); slice volumes and barycenters are binary64.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, Delaunay

from .errors import (
    BetaNotInterior,
    DegeneratePolytope,
    DimensionMismatch,
    NotFullDimensional,
    NotGorenstein,
    NotPointed,
    UnboundedSlice,
)

MAX_EXACT_DIM = 4
SEED_ENV = "SASAKI_FORGE_SEED"


# ---------------------------------------------------------------------------
# exact linear algebra helpers (n <= 4, so nothing clever is needed)


def _int_det(rows: Sequence[Sequence[int]]) -> int:
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(k):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * _int_det(minor)
    return total


def _generalized_cross(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer vector orthogonal to ``n - 1`` integer vectors in Z^n."""
    n = len(rows) + 1
    out = []
    for i in range(n):
        minor = [tuple(r[:i]) + tuple(r[i + 1:]) for r in rows]
        out.append((-1) ** i * _int_det(minor))
    return tuple(out)


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def _rank_exact(rows: Sequence[Sequence]) -> int:
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / mat[rank][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def _solve_exact(rows: Sequence[Sequence[int]], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Solve an overdetermined full-column-rank system exactly.

    Returns ``None`` when the system is inconsistent.
    """
    ncols = len(rows[0])
    aug = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(aug)) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        p = aug[rank][col]
        aug[rank] = [a / p for a in aug[rank]]
        for i in range(len(aug)):
            if i != rank and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
    if any(row[-1] != 0 for row in aug[rank:]):
        return None
    if rank < ncols:
        return None
    sol = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        sol[col] = aug[r][-1]
    return tuple(sol)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str | int | Fraction) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class MomentCone:
    """Polyhedral cone ``{y : <lambda_j, y> >= 0}``.

    ``normals`` are stored deduplicated and lexicographically sorted so that
    every downstream computation is independent of input order.  ``rays`` are
    primitive integer generators of the extreme rays, also sorted.
    """

    n: int
    normals: tuple[tuple[int, ...], ...]
    rays: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return self.n - 1

    @cached_property
    def normal_array(self) -> np.ndarray:
        return np.array(self.normals, dtype=float)

    @cached_property
    def ray_array(self) -> np.ndarray:
        return np.array(self.rays, dtype=float)

    def contains(self, y, tol: float = 0.0) -> bool:
        return bool(np.all(self.normal_array @ np.asarray(y, dtype=float) >= -tol))

    def to_json(self) -> dict:
        return {"dim": self.n, "normals": [list(v) for v in self.normals]}


@dataclass(frozen=True)
class GorensteinPoint:
    beta: tuple[Fraction, ...]

    def __array__(self, dtype=None, copy=None):
        return np.array([float(b) for b in self.beta], dtype=dtype or float)

    def to_json(self) -> list[str]:
        return [fraction_str(b) for b in self.beta]


@dataclass(frozen=True)
class ReebVector:
    """A Reeb vector in the interior of the dual cone."""

    xi: tuple[float, ...]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.xi, dtype=dtype or float)

    @classmethod
    def on_slice(cls, cone: MomentCone, xi, beta: GorensteinPoint | None = None) -> "ReebVector":
        """Validate ``xi`` against ``int C*`` and the hyperplane ``<xi, beta> = m + 1``."""
        xi = np.asarray(xi, dtype=float)
        _check_interior_dual(cone, xi)
        if beta is None:
            beta = gorenstein_point(cone)
        level = cone.n
        val = float(xi @ np.asarray(beta))
        if abs(val - level) > 1e-12 * level:
            raise UnboundedSlice(f"<xi, beta> = {val!r}, expected {level}")
        return cls(tuple(float(x) for x in xi))


@dataclass(frozen=True)
class SlicePolytope:
    vertices: np.ndarray
    xi: np.ndarray
    level: float
    ray_index: tuple[int, ...] = field(default=())

    @property
    def m(self) -> int:
        return self.vertices.shape[1] - 1


# ---------------------------------------------------------------------------
# operations


def build_cone(normals: Iterable[Sequence[int]]) -> MomentCone:
    """Validate facet normals and enumerate extreme rays.

    Every ray is orthogonal to ``n - 1`` linearly independent normals, so
    for ``n <= 4`` exhaustive enumeration over normal subsets is cheap.
    """
    normals = [tuple(int(x) for x in v) for v in normals]
    if not normals:
        raise DimensionMismatch("no normals given")
    n = len(normals[0])
    if any(len(v) != n for v in normals):
        raise DimensionMismatch("normals have different lengths")
    if not 2 <= n <= MAX_EXACT_DIM:
        raise DimensionMismatch(f"ambient dimension {n} outside [2, {MAX_EXACT_DIM}]")
    if any(all(x == 0 for x in v) for v in normals):
        raise DimensionMismatch("zero normal vector")
    normals = sorted(set(normals))
    if len(normals) < n or _rank_exact(normals) < n:
        raise NotPointed("normals do not span; the cone contains a line")

    rays = set()
    for subset in itertools.combinations(normals, n - 1):
        if _rank_exact(subset) < n - 1:
            continue
        w = _generalized_cross(subset)
        for sign in (1, -1):
            r = tuple(sign * x for x in w)
            if all(sum(a * b for a, b in zip(lam, r)) >= 0 for lam in normals):
                rays.add(_primitive(r))
    rays = sorted(rays)
    if len(rays) < n or _rank_exact(rays) < n:
        raise NotFullDimensional("cone has empty interior")
    return MomentCone(n=n, normals=tuple(normals), rays=tuple(rays))


def gorenstein_point(cone: MomentCone) -> GorensteinPoint:
    """Exact solution of ``<lambda_j, beta> = 1`` for all facets."""
    beta = _solve_exact(cone.normals, [1] * len(cone.normals))
    if beta is None:
        raise NotGorenstein("<lambda_j, beta> = 1 has no common solution")
    if any(sum(Fraction(a) * b for a, b in zip(lam, beta)) <= 0 for lam in cone.normals):
        raise BetaNotInterior("beta is not interior to the cone")
    return GorensteinPoint(beta)


def _check_interior_dual(cone: MomentCone, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (cone.n,):
        raise DimensionMismatch(f"Reeb vector has shape {xi.shape}, expected ({cone.n},)")
    rays = cone.ray_array
    pairing = rays @ xi
    scale = np.linalg.norm(rays, axis=1) * np.linalg.norm(xi)
    if np.any(pairing <= 1e-14 * scale):
        raise UnboundedSlice(f"xi = {xi.tolist()} is not in the interior of the dual cone")
    return pairing


def slice_polytope(cone: MomentCone, xi) -> SlicePolytope:
    """Vertices ``(m+1) r / <xi, r>`` of ``{y in C : <xi, y> = m + 1}``."""
    xi = np.asarray(xi, dtype=float)
    pairing = _check_interior_dual(cone, xi)
    level = float(cone.n)
    verts = level * cone.ray_array / pairing[:, None]
    # rays are already lex-sorted; keep that order so vertex i <-> ray i
    return SlicePolytope(
        vertices=verts,
        xi=xi,
        level=level,
        ray_index=tuple(range(len(cone.rays))),
    )


def _slice_coordinates(poly: SlicePolytope) -> np.ndarray:
    """Vertices expressed in an orthonormal basis of the slice hyperplane."""
    xi = poly.xi / np.linalg.norm(poly.xi)
    # columns 1.. of a complete QR of xi span xi^perp
    q, _ = np.linalg.qr(np.column_stack([xi, np.eye(len(xi))]))
    basis = q[:, 1:len(xi)]
    centred = poly.vertices - poly.vertices.mean(axis=0)
    return centred @ basis


def triangulate(poly: SlicePolytope, method: str = "delaunay", apex: int = 0) -> np.ndarray:
    """Triangulate the slice into m-simplices (rows of vertex indices).

    ``method="delaunay"`` uses a Delaunay triangulation of the slice;
    ``method="fan"`` cones the triangulated boundary from vertex ``apex``.
    """
    m = poly.m
    k = len(poly.vertices)
    coords = _slice_coordinates(poly)
    if np.linalg.matrix_rank(coords, tol=1e-12 * max(1.0, np.abs(coords).max())) < m:
        raise DegeneratePolytope("slice has affine dimension below m")
    if m == 1:
        order = np.argsort(coords[:, 0])
        return np.array([[order[0], order[-1]]])
    if method == "delaunay":
        return np.sort(Delaunay(coords).simplices, axis=1)
    if method == "fan":
        if not 0 <= apex < k:
            raise IndexError(f"apex {apex} out of range")
        hull = ConvexHull(coords)
        simplices = [
            sorted([apex, *facet]) for facet in hull.simplices if apex not in facet
        ]
        return np.array(simplices)
    raise ValueError(f"unknown triangulation method {method!r}")


def _cone_simplex_dets(poly: SlicePolytope, simplices: np.ndarray) -> np.ndarray:
    return np.abs(np.linalg.det(poly.vertices[simplices]))


def volume_functional(cone: MomentCone, xi, method: str = "delaunay", apex: int = 0) -> float:
    """``(m+1)!`` times the volume of ``{y in C : <xi, y> <= m + 1}``.

    The truncated cone is fanned from the apex over a triangulation of the
    slice; each piece contributes ``|det(v_1, ..., v_n)| / n!``.
    """
    poly = slice_polytope(cone, xi)
    simplices = triangulate(poly, method=method, apex=apex)
    return float(math.fsum(_cone_simplex_dets(poly, simplices)))


def barycenter(poly: SlicePolytope, method: str = "delaunay", apex: int = 0) -> np.ndarray:
    """Centroid of the slice for m-dimensional Lebesgue measure."""
    simplices = triangulate(poly, method=method, apex=apex)
    # all m-simplices share the apex height, so cone determinants are
    # proportional to their m-volumes
    weights = _cone_simplex_dets(poly, simplices)
    total = weights.sum()
    if total <= 0:
        raise DegeneratePolytope("slice has zero m-volume")
    centroids = poly.vertices[simplices].mean(axis=1)
    return (weights[:, None] * centroids).sum(axis=0) / total


def volume_and_barycenter(cone: MomentCone, xi) -> tuple[float, np.ndarray]:
    poly = slice_polytope(cone, xi)
    simplices = triangulate(poly)
    weights = _cone_simplex_dets(poly, simplices)
    centroids = poly.vertices[simplices].mean(axis=1)
    total = float(math.fsum(weights))
    return total, (weights[:, None] * centroids).sum(axis=0) / weights.sum()


def monte_carlo_volume(
    cone: MomentCone, xi, samples: int = 10**6, seed: int | None = None
) -> tuple[float, float]:
    """Rejection-sampling estimate of :func:`volume_functional`.

    Returns ``(estimate, standard_error)``.  The seed defaults to the
    ``SASAKI_FORGE_SEED`` environment variable (or 0).
    """
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, "0"))
    poly = slice_polytope(cone, xi)
    pts = np.vstack([np.zeros(cone.n), poly.vertices])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    box = float(np.prod(hi - lo))
    rng = np.random.default_rng(seed)
    y = lo + (hi - lo) * rng.random((samples, cone.n))
    inside = np.all(y @ cone.normal_array.T >= 0, axis=1) & (y @ poly.xi <= poly.level)
    frac = inside.mean()
    scale = math.factorial(cone.n) * box
    return scale * frac, scale * math.sqrt(frac * (1 - frac) / samples)


def cone_from_json(obj: dict) -> MomentCone:
    normals = obj["normals"]
    dim = obj.get("dim")
    if dim is not None and any(len(v) != dim for v in normals):
        raise DimensionMismatch(f"normals do not have declared dimension {dim}")
    return build_cone(normals)


PRESETS: dict[str, tuple[tuple[int, ...], ...]] = {
    # C^2
    "quadrant": ((1, 0), (0, 1)),
    # C^3
    "simplex3": ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    # cone over T^{1,1}
    "conifold": ((1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)),
    # canonical cone over the first del Pezzo surface
    "delpezzo1": ((1, 1, 0), (1, 0, 1), (1, -1, -1), (1, 1, 1)),
}


def preset_cone(name: str) -> MomentCone:
    try:
        return build_cone(PRESETS[name])
    except KeyError:
        raise DimensionMismatch(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None

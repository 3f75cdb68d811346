"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured numbers.
Run directly (``python tests/test_acceptance.py``) for just those lines.
"""

import math
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import grid_search_minimizer, nu_vectorized
from sasaki_forge.cone_model import PRESETS, barycenter, preset_cone, slice_polytope, volume_functional
from sasaki_forge.coordinates import coordinate_map, scaling_constant_e_c0, t_of_tau, tau_of_t
from sasaki_forge.curvature_check import asymptotic_decay, d_homothetic, max_scaled_residual
from sasaki_forge.profiles import eval_phi, ke_profile, soliton_nu, soliton_profile, solve_soliton_mu
from sasaki_forge.reeb_minimizer import Regularity, initial_reeb, minimize_volume


def _line(n, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"


@pytest.fixture
def emit(capsys):
    def _emit(text):
        with capsys.disabled():
            print("\n" + text)

    return _emit


# ---------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    errs = {m: abs(scaling_constant_e_c0(ke_profile(m, 1, 1)) - 1 / (m + 1)) for m in (1, 2, 3, 4)}
    dt = time.perf_counter() - t0
    ok = max(errs.values()) <= 1e-6 and dt < 1.0
    detail = f"e^c0 = 1/(m+1) for m=1..4, max err {max(errs.values()):.1e} (tol 1e-6), {dt:.3f}s (< 1s)"
    return ok, detail


def criterion_2():
    t0 = time.perf_counter()
    mu = solve_soliton_mu(1, 4.0)
    dt = time.perf_counter() - t0
    err = abs(mu - math.sqrt(2))
    grid = np.linspace(50 / 10**6, 50.0, 10**6)
    changes = np.count_nonzero(np.diff(np.sign(nu_vectorized(1, 4.0, grid))))
    ok = err <= 1e-12 and changes == 1 and dt < 1.0 and abs(soliton_nu(1, 4.0, mu)) < 1e-12
    detail = f"mu(m=1, kappa=4) - sqrt2 = {err:.1e} (tol 1e-12), sign changes on (0,50]: {changes}, {dt:.4f}s"
    return ok, detail


def criterion_3():
    runs = {
        "KE m=1 k=p": ke_profile(1, 1, 1),
        "KE m=2 k=p": ke_profile(2, 1, 1),
        "KE m=3 k=p": ke_profile(3, 1, 1),
        "KE m=1 k=2p": ke_profile(1, 1, 2),
        "steady m=1": soliton_profile(1, 2.0, -1.0),
        "shrinking m=1 kappa=4": soliton_profile(1, 4.0),
    }
    taus = np.geomspace(1e-6, 1e6, 200)
    t0 = time.perf_counter()
    worst = {name: max_scaled_residual(p, taus) for name, p in runs.items()}
    dt = time.perf_counter() - t0
    top = max(worst.values())
    ok = top <= 1e-10 and dt < 5.0
    return ok, f"six canonical runs, max |residual|/(1+tau)^2 = {top:.1e} (tol 1e-10), {dt:.3f}s (< 5s)"


def criterion_4():
    t0 = time.perf_counter()
    q = minimize_volume(preset_cone("quadrant"))
    s = minimize_volume(preset_cone("simplex3"))
    d = minimize_volume(preset_cone("delpezzo1"))
    oracle = grid_search_minimizer(PRESETS["delpezzo1"], resolution=1e-4)
    dt = time.perf_counter() - t0
    eq = np.max(np.abs(np.asarray(q.xi_star) - 1))
    es = np.max(np.abs(np.asarray(s.xi_star) - 1))
    ed = np.max(np.abs(np.asarray(d.xi_star) - oracle))
    ok = (
        eq < 1e-8 and es < 1e-8
        and q.criticality_residual < 1e-8 and s.criticality_residual < 1e-8
        and ed < 1e-3
        and d.regularity.kind is Regularity.IRRATIONAL and d.regularity.denominator_bound == 10**4
        and dt < 60
    )
    detail = (
        f"quadrant |xi-(1,1)| {eq:.1e}, simplex3 |xi-(1,1,1)| {es:.1e}, residuals "
        f"{q.criticality_residual:.1e}/{s.criticality_residual:.1e} (< 1e-8); delpezzo1 vs grid oracle "
        f"{ed:.1e} (< 1e-3), {d.regularity.kind.value}({d.regularity.denominator_bound}); {dt:.2f}s (< 60s)"
    )
    return ok, detail


def criterion_5():
    t0 = time.perf_counter()
    reps = [asymptotic_decay(m) for m in (1, 2)]
    dt = time.perf_counter() - t0
    ok = dt < 1.0
    parts = []
    for r in reps:
        m = r.m
        e1 = abs(r.order_first_term / (-2 * m) - 1)
        ec = abs(r.constant_first_term - 1)
        e2 = abs(r.order_second_term / (-(2 * m + 2)) - 1)
        ok &= e1 <= 0.01 and ec <= 0.01 and e2 <= 0.02
        parts.append(
            f"m={m}: slope {r.order_first_term:.4f}, const {r.constant_first_term:.6f}, "
            f"second slope {r.order_second_term:.4f} (tol 1%, 1%, 2%)"
        )
    return ok, "; ".join(parts) + f"; {dt:.4f}s"


def criterion_6():
    rng = random.Random(20240601)
    triples = [(rng.randint(1, 20), rng.randint(1, 20), rng.randint(1, 8)) for _ in range(20)]
    ok = True
    for p, k, m in triples:
        out = d_homothetic(Fraction(2 * p, k), Fraction(p, k * (m + 1)))
        ok &= isinstance(out.kappa_out, Fraction) and out.kappa_out == 2 * (m + 1)
    return ok, f"kappa' = 2(m+1) exactly for {len(triples)} random (p, k, m) triples"


def criterion_7():
    t0 = time.perf_counter()
    profiles = [ke_profile(m, p, k) for m in (1, 2, 3, 4) for p, k in ((1, 1), (1, 2), (2, 3))]
    profiles += [
        soliton_profile(1, 1.0, -1.0),
        soliton_profile(2, 0.5, -0.3),
        soliton_profile(1, 2.0, -1.0),
        soliton_profile(3, 2.0, -2.0),
        soliton_profile(1, 4.0),
        soliton_profile(2, 4.0),
        soliton_profile(3, 3.0),
    ]
    checks = {}

    pos_grid = np.geomspace(1e-8, 1e6, 2000)
    checks["positivity"] = all(np.all(eval_phi(p, pos_grid)[0] > 0) for p in profiles)

    bnd = [eval_phi(p, 0.0) for p in profiles]
    checks["boundary"] = all(abs(v[0]) <= 1e-12 and abs(v[1] - 2) <= 1e-10 for v in bnd)

    worst_rt = 0.0
    for p in profiles:
        cmap = coordinate_map(p)
        for x in np.geomspace(1e-6, 1e4, 25):
            worst_rt = max(worst_rt, abs(tau_of_t(cmap, t_of_tau(cmap, x)) / x - 1))
    checks["round trip"] = worst_rt <= 1e-9

    worst_tri = 0.0
    rng = np.random.default_rng(0)
    for name in ("conifold", "delpezzo1"):
        cone = preset_cone(name)
        xi0 = np.asarray(initial_reeb(cone))
        for _ in range(5):
            xi = xi0 + 0.05 * rng.standard_normal(cone.n)
            poly = slice_polytope(cone, xi)
            vd, bd = volume_functional(cone, xi), barycenter(poly)
            for apex in range(len(poly.vertices)):
                vf = volume_functional(cone, xi, method="fan", apex=apex)
                bf = barycenter(poly, method="fan", apex=apex)
                worst_tri = max(worst_tri, abs(vf / vd - 1), np.max(np.abs(bf - bd)) / np.max(np.abs(bd)))
    checks["triangulation"] = worst_tri <= 1e-12

    cone = preset_cone("delpezzo1")
    violations, pairs = 0, 0
    while pairs < 100:
        a = np.array([3.0, *rng.uniform(-1.5, 2.0, 2)])
        b = np.array([3.0, *rng.uniform(-1.5, 2.0, 2)])
        if not (np.all(cone.ray_array @ a > 0) and np.all(cone.ray_array @ b > 0)):
            continue
        mid = volume_functional(cone, 0.5 * (a + b))
        violations += mid > 0.5 * (volume_functional(cone, a) + volume_functional(cone, b)) + 1e-9
        pairs += 1
    checks["convexity"] = violations == 0

    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < 120
    failed = [k for k, v in checks.items() if not v]
    detail = (
        f"positivity, boundary, round trip (worst {worst_rt:.1e}), triangulation (worst {worst_tri:.1e}), "
        f"convexity ({violations}/100 violations) over {len(profiles)} profiles; {dt:.2f}s (< 120s)"
    )
    if failed:
        detail += f"; failed: {', '.join(failed)}"
    return ok, detail


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("index", range(1, len(CRITERIA) + 1))
def test_criterion(index, emit):
    ok, detail = CRITERIA[index - 1]()
    emit(_line(index, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        results.append(ok)
        print(_line(i, ok, detail))
    sys.exit(0 if all(results) else 1)

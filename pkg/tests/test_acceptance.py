"""Acceptance criteria 1-10.

Each test prints one ``[PASS]``/``[FAIL]`` line through the ``acceptance``
fixture; the lines are collected again in the terminal summary.  Runtime
limits are part of the criteria and are measured with ``perf_counter``
after a warm-up call (JIT compilation is not counted).
"""
import filecmp
import math
import os
import subprocess
import sys
import time

import numpy as np

from hypermonogenic.cli import algebra_report, beta_grid, beta_report, bessel_report, mobius_report
from hypermonogenic.clifford import Multivector
from hypermonogenic.diffops import (
    component_oracle,
    kernel_oracle,
    khyper_residual,
    khypharm_residual,
    lift_oracle,
    maass_eigenvalue,
    maass_residual,
    maass_transform,
    sample_points,
)
from hypermonogenic.eisenstein import EisensteinSpec, eval_eisenstein, lifted_oracle
from hypermonogenic.fourier import (
    FourierExpansion,
    FrequencyVector,
    QuadratureSpec,
    alpha_table,
    expansion_oracle,
    extract_coefficient,
    fourier_kernel,
    monogenic_planewave,
)
from hypermonogenic.diffops import apply_cauchy_riemann
from hypermonogenic.moebius import TruncationPolicy


def timed(func, *args):
    t0 = time.perf_counter()
    out = func(*args)
    return out, time.perf_counter() - t0


def worst(report, prefix=""):
    return max(c.value for c in report.checks if c.name.startswith(prefix))


def test_criterion_01_algebra(acceptance):
    algebra_report(3, 5, 1)  # warm-up
    rep, dt = timed(algebra_report, 3, 200, 0)
    err = worst(rep)
    ok = rep.passed and err < 1e-12 and dt < 1.0
    acceptance(1, ok, f"algebra axioms on 200 cases: max error {err:.2e} (< 1e-12), {dt:.2f} s (< 1 s)")
    assert ok


def test_criterion_02_mobius(acceptance):
    mobius_report(3, 5, -2.0, 1)
    rep, dt = timed(mobius_report, 3, 200, -2.0, 0)
    err = worst(rep)
    ok = rep.passed and err < 1e-10 and dt < 5.0
    acceptance(2, ok, f"composition/height/cocycle on 200 cases: max error {err:.2e} (< 1e-10), {dt:.2f} s (< 5 s)")
    assert ok


def _pde_chain():
    errs = {"khyper": 0.0, "khypharm": 0.0, "maass": 0.0}
    for n, k in ((3, 0.0), (3, -2.0), (2, -1.5)):
        f = kernel_oracle(n, k)
        lam = maass_eigenvalue(n, k)
        assert lam == (n * n - (k + 1) ** 2) / 4
        for x in sample_points(n, 20, seed=0):
            errs["khyper"] = max(errs["khyper"], khyper_residual(f, x, k).norm())
            for blade in range(1 << (n - 1)):
                u = component_oracle(f, blade, "P", real_part=True)
                errs["khypharm"] = max(errs["khypharm"], abs(khypharm_residual(u, x, k)))
                errs["maass"] = max(errs["maass"], abs(maass_residual(maass_transform(u, k), x, lam, n)))
    return errs


def test_criterion_03_pde_chain(acceptance):
    errs, dt = timed(_pde_chain)
    ok = errs["khyper"] < 1e-5 and errs["khypharm"] < 1e-5 and errs["maass"] < 1e-4 and dt < 30
    acceptance(3, ok, f"khyper {errs['khyper']:.1e}, khypharm {errs['khypharm']:.1e} (< 1e-5), "
                      f"maass {errs['maass']:.1e} (< 1e-4), {dt:.1f} s (< 30 s)")
    assert ok


def test_criterion_04_lift(acceptance):
    err = 0.0
    for n, k in ((3, 0.0), (3, -2.0), (2, -1.5)):
        g = lift_oracle(kernel_oracle(n, k), k)
        for x in sample_points(n, 10, seed=4):
            err = max(err, khyper_residual(g, x, -k).norm())
    spec = EisensteinSpec(3, 2, -2.0, 3, policy=TruncationPolicy.norm(100))
    g = lifted_oracle(spec)
    for x in sample_points(3, 5, seed=4):
        err = max(err, khyper_residual(g, x, 2.0).norm())
    ok = err < 1e-4
    acceptance(4, ok, f"e_n/x_n^k lift is (-k)-hypermonogenic: max residual {err:.1e} (< 1e-4)")
    assert ok


def test_criterion_05_bessel(acceptance):
    rep = bessel_report(50, 0)
    vals = {c.name: c.value for c in rep.checks}
    ok = rep.passed
    acceptance(5, ok, "; ".join(f"{name} {v:.1e}" for name, v in vals.items()))
    assert ok


def test_criterion_06_beta(acceptance):
    err, dt, count = 0.0, 0.0, 0
    for n in (2, 3):
        grid = beta_grid(n)
        assert len({m for m, _, _ in grid}) == 3 and len({x for _, x, _ in grid}) == 3
        rep, t = timed(beta_report, n, grid)
        err, dt, count = max(err, worst(rep)), dt + t, count + len(grid)
    ok = err < 1e-5 and dt < 120
    acceptance(6, ok, f"beta closed form vs quadrature on {count} cases: max rel error {err:.1e} (< 1e-5), "
                      f"{dt:.1f} s (< 120 s)")
    assert ok


def test_criterion_07_eisenstein_limit(acceptance, tmp_path, monkeypatch):
    monkeypatch.setenv("HYPERMONOGENIC_CACHE_DIR", str(tmp_path))  # include enumeration in the timing
    t0 = time.perf_counter()
    spec = EisensteinSpec(3, 2, -2.0, 3, policy=TruncationPolicy.norm(400))
    dist = [(eval_eisenstein(spec, [0, 0, 0, t]).value - 1).norm() for t in (2.0, 4.0, 8.0, 16.0)]
    dt = time.perf_counter() - t0
    ok = all(a > b for a, b in zip(dist, dist[1:])) and dist[-1] < 0.05 and dt < 120
    acceptance(7, ok, "|eps(t e_n) - 1| at t=2,4,8,16: " + ", ".join(f"{d:.1e}" for d in dist)
               + f" (decreasing, last < 0.05), {dt:.1f} s (< 120 s)")
    assert ok


def test_criterion_08_fourier_keystone(acceptance):
    from hypermonogenic.cli import KEYSTONE_FREQUENCIES

    spec = EisensteinSpec(3, 2, -2.0, 3, policy=TruncationPolicy.lattice(36.0))
    ests, dt = timed(alpha_table, spec, KEYSTONE_FREQUENCIES, [0.8, 1.0, 1.25], QuadratureSpec(8))
    spread = max(e.spread for e in ests)
    mass = max(e.en_mass for e in ests)
    ok = spread < 1e-3 and mass < 1e-6 and all(not e.dropped for e in ests) and dt < 300
    acceptance(8, ok, f"alpha(m) for {len(ests)} frequencies at x_n in (0.8, 1.0, 1.25): spread {spread:.1e} "
                      f"(< 1e-3), e_n mass {mass:.1e} (< 1e-6), {dt:.1f} s (< 300 s)")
    assert ok


def test_criterion_09_planewave(acceptance):
    res_fd = res_exact = idem = trip = 0.0
    for n, m in ((2, (1, 0)), (3, (1, 1, 0)), (3, (0, 2, 1)), (4, (1, -2, 1))):
        fv = FrequencyVector(m)
        mu = fv.norm
        f = monogenic_planewave(m, n)
        A = 1 - 1j * (Multivector.basis(n, n) * fv.unit_paravector(n))
        # symbol of D on exp(2 pi i <m, x> - 2 pi |m| x_n) is 2 pi i m - 2 pi |m| e_n
        symbol = Multivector.from_paravector(n, np.r_[2j * math.pi * fv.padded(n), -2 * math.pi * mu])
        res_exact = max(res_exact, (symbol * A).norm())
        for x in sample_points(n, 10, seed=9):
            res_fd = max(res_fd, apply_cauchy_riemann(f, x).norm())
        idem = max(idem, ((A / 2) * (A / 2) - A / 2).norm())
        c = extract_coefficient(f, m, 1.0, QuadratureSpec(8))
        trip = max(trip, (c - A * math.exp(-2 * math.pi * mu)).norm() / A.norm())
    rng = np.random.default_rng(0)
    coeffs = {m: Multivector(3, np.r_[rng.standard_normal(4), np.zeros(4)] + 0j) for m in [(1, 0, 0), (0, 1, 1)]}
    exp = FourierExpansion(3, -2.0, a0=Multivector.scalar(3), coeffs=coeffs)
    for m, alpha in coeffs.items():
        c = extract_coefficient(expansion_oracle(exp), m, 0.9, QuadratureSpec(8))
        trip = max(trip, (c - fourier_kernel(m, 0.9, 3, -2.0) * alpha).norm() / c.norm())
    ok = res_exact < 1e-7 and res_fd < 1e-7 and idem < 1e-12 and trip < 1e-6
    acceptance(9, ok, f"monogenicity exact {res_exact:.1e} / finite-difference {res_fd:.1e} (< 1e-7), "
                      f"idempotent {idem:.1e} (< 1e-12), extraction round trip {trip:.1e} (< 1e-6)")
    assert ok


def test_criterion_10_determinism(acceptance, tmp_path):
    outs = []
    for i, hashseed in enumerate(("1", "2")):
        out = tmp_path / f"run{i}"
        env = dict(os.environ, PYTHONHASHSEED=hashseed, HYPERMONOGENIC_CACHE_DIR=str(tmp_path / "cache"))
        proc = subprocess.run([sys.executable, "-m", "hypermonogenic", "suite", "--out", str(out), "--seed", "7"],
                              env=env, capture_output=True, text=True)
        assert proc.returncode in (0, 1), proc.stderr
        outs.append(out)
    names = sorted(p.name for p in outs[0].iterdir())
    match, mismatch, errors = filecmp.cmpfiles(outs[0], outs[1], names, shallow=False)
    ok = len(names) > 1 and not mismatch and not errors and names == sorted(p.name for p in outs[1].iterdir())
    acceptance(10, ok, f"two suite runs (fresh and cached enumeration): {len(match)}/{len(names)} "
                       "report files byte-identical")
    assert ok

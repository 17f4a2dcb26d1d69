"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single PASS/FAIL line and records it for the summary
printed at the end of the pytest run.
"""
import time

import pytest

import conftest
from mopcd.checks import sample_pairs
from mopcd.errors import MOPError, NonPerfectIndex, ZeroNormalization
from mopcd.kernel import KernelContext, kernel_cd, verify_three_way
from mopcd.mop import MOPSolver, h_coeff, type1, type2
from mopcd.rh import verify_asymptotics, verify_duality, verify_jump, verify_kernel_rh
from mopcd.rmt import (SourceModel, correlation_kernel, density_compare, pair_check,
                       reproducing_check, trace_check)
from mopcd.suite import DEFAULT_TOL, all_passed, off_axis_points, real_points, run_suite
from mopcd.weights import GaussianDrift, WeightSystem

from conftest import ATOMS6, atoms_system
from oracles import hermite_kernel


def record(key, ok, text):
    conftest.ACCEPTANCE[key] = (bool(ok), text)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
    assert ok, text


def test_criterion_1_three_way_hermite():
    ws = WeightSystem([GaussianDrift(1), GaussianDrift(-1)], precision="extended", dps=40)
    solver = MOPSolver(ws)
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    for total in range(2, 13):
        for n1 in range(1, total):
            ctx = KernelContext.at(ws, (n1, total - n1), solver=solver)
            for r in verify_three_way(ctx, sample_pairs(ws, 64, 0), tol=1e-8):
                worst = max(worst, r.residual_rel)
            count += 1
    elapsed = time.perf_counter() - t0
    record(1, worst <= 1e-8 and elapsed <= 60,
           f"three kernel routes, {count} indices x 64 pairs, max rel {worst:.2e} "
           f"(tol 1e-8), {elapsed:.1f} s (limit 60 s)")


def test_criterion_2_exact_closed_form():
    ws = atoms_system(ATOMS6)
    solver = MOPSolver(ws)
    checked, skipped, mismatches = 0, [], 0
    pairs = sample_pairs(ws, 16, 0)
    for total in range(2, 5):
        for n1 in range(1, total):
            n = (n1, total - n1)
            try:
                solver.h(n, 1)
                ctx = KernelContext.at(ws, n, solver=solver)
                reports = verify_three_way(ctx, pairs)
            except (NonPerfectIndex, ZeroNormalization) as exc:
                skipped.append((n, exc.code))
                continue
            mismatches += sum(r.residual_abs != 0 for r in reports)
            checked += 1
    record(2, checked > 0 and mismatches == 0,
           f"exact rational equality at {checked} indices x {len(pairs)} pairs, "
           f"{mismatches} mismatches, skipped {skipped or 'none'}")


def test_criterion_3_single_weight_reduction():
    worst = 0.0
    for a in (0, "1/2"):
        ws = WeightSystem([GaussianDrift(a)], precision="extended", dps=40)
        solver = MOPSolver(ws)
        for n in range(1, 21):
            ctx = KernelContext.at(ws, (n,), solver=solver)
            for x, y in [(0.3, -1.2), (1.7, 0.4), (-2.5, 2.0), (3.1, -0.05)]:
                ref = hermite_kernel(float(ws.measure(1).a), n, x, y)
                worst = max(worst, float(abs(kernel_cd(ctx, x, y) - ref) / abs(ref)))
    record(3, worst <= 1e-12,
           f"m=1 kernel vs three-term recurrence, n<=20, max rel {worst:.2e} (tol 1e-12)")


def test_criterion_4_identity_suite(hermite2, hermite3):
    lines, ok = [], True
    for ws, n in ((hermite2, (2, 2)), (hermite3, (2, 2, 2))):
        reps = run_suite(ws, n, riemann_hilbert=False)
        paths = [r.extra.get("paths", 0) for r in reps if r.identity == "path-independence"]
        names = {r.identity for r in reps}
        needed = {"biorthogonality", "xP-expansion", "yQ-expansion", "contiguity-P",
                  "contiguity-Q", "leading-coefficient", "relabel", "path-independence",
                  "ladder-sum"}
        good = all_passed(reps) and needed <= names and paths and min(paths) >= 3
        failed = [r.identity for r in reps if not r.passed and not r.extra.get("informational")]
        lines.append(f"m={ws.m} n={n}: {len(reps)} reports, paths {paths}, failed {failed or 'none'}")
        ok &= bool(good)
    assert DEFAULT_TOL["biorthogonality"] == 1e-10 and DEFAULT_TOL["ladder"] == 1e-8
    record(4, ok, "; ".join(lines))


def test_criterion_5_riemann_hilbert(hermite2):
    t0 = time.perf_counter()
    worst = {"duality": 0.0, "jump": 0.0, "kernel": 0.0}
    ratio = float("inf")
    for n in ((1, 1), (2, 2)):
        solver = MOPSolver(hermite2)
        for z in off_axis_points(hermite2):
            worst["duality"] = max(worst["duality"],
                                   verify_duality(hermite2, n, z, solver).residual_abs)
        for x in real_points(hermite2, 4):
            for r in verify_jump(hermite2, n, x, solver):
                worst["jump"] = max(worst["jump"], r.residual_rel)
        ctx = KernelContext.at(hermite2, n, solver=solver)
        worst["kernel"] = max(worst["kernel"],
                              verify_kernel_rh(ctx, sample_pairs(hermite2, 16, 5)).residual_rel)
        for r in verify_asymptotics(hermite2, n, solver=solver):
            ratio = min(ratio, r.extra["ratio"])
    elapsed = time.perf_counter() - t0
    ok = (worst["duality"] <= 1e-8 and worst["jump"] <= 1e-6 and worst["kernel"] <= 1e-6
          and ratio >= 8 and elapsed <= 120)
    record(5, ok,
           f"X^tY-I {worst['duality']:.1e} (1e-8), jump {worst['jump']:.1e} (1e-6), "
           f"kernel {worst['kernel']:.1e} (1e-6), growth ratio {ratio:.1f} (>=8), "
           f"{elapsed:.1f} s (limit 120 s)")


def test_criterion_6_determinantal():
    parts = []
    ok = True
    for index in ((3, 3), (2, 1)):
        ctx = correlation_kernel(SourceModel([1, -1], index))
        pairs = sample_pairs(ctx.ws, 8, 1)
        tr, rp, pr = trace_check(ctx, 1e-8), reproducing_check(ctx, pairs, 1e-6), pair_check(ctx, 1e-4)
        ok &= tr.passed and rp.passed and pr.passed
        parts.append(f"n={index}: trace {tr.residual_rel:.1e}, reproducing {rp.residual_rel:.1e}, "
                     f"pair {pr.residual_rel:.1e}")
    record(6, ok, "; ".join(parts) + " (tol 1e-8 / 1e-6 / 1e-4)")


def test_criterion_7_monte_carlo():
    t0 = time.perf_counter()
    rep = density_compare(SourceModel([1, -1], [3, 3]), 200000, bins=40, lo=-4.5, hi=4.5,
                          seed=0, tol=0.03, p_min=0.01)
    elapsed = time.perf_counter() - t0
    record(7, rep.passed and elapsed <= 300,
           f"n=6, 2e5 samples, {rep.dof} bins used: max rel dev {rep.max_rel_dev:.4f} (<=0.03), "
           f"chi2 {rep.chi2:.1f}, p {rep.p_value:.3f} (>=0.01), {elapsed:.1f} s (limit 300 s)")


def test_criterion_8_zero_normalization(atoms3):
    codes = []
    for _ in range(3):
        for call in (lambda: h_coeff(atoms3, (2, 1), 1), lambda: h_coeff(atoms3, (2, 1), 2),
                     lambda: kernel_cd(KernelContext.at(atoms3, (2, 1)), 0, 1),
                     lambda: run_suite(atoms3, (2, 1))):
            try:
                call()
                codes.append("no error")
            except MOPError as exc:
                codes.append(exc.code)
    # P_(2,1) = x(x-1)(x-2) and the type I functions exist; only the
    # normalizations h vanish because P_(2,1) is the node polynomial
    p = type2(atoms3, (2, 1))
    type1(atoms3, (2, 1))
    ok = set(codes) == {"ZeroNormalization"} and [int(c) for c in p.coeffs] == [0, 2, -3, 1]
    record(8, ok, f"atoms3 n=(2,1): {len(codes)} calls raised {sorted(set(codes))}")
    with pytest.raises(ZeroNormalization):
        h_coeff(atoms3, (2, 1), 1)

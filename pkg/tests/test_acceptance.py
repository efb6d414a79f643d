"""Acceptance suite: one test per criterion, each printing a PASS line with
the measured numbers (run pytest -s to watch them stream).

The Monte Carlo comparisons are deterministic: every estimate derives from a
fixed master seed, so a pass here is reproducible bit-for-bit.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from momlab.asymptotics import (
    c_constant,
    classify_phase,
    envelope_uniform,
    fit_scaling_exponent,
    i_hn_numeric,
    i_infinity,
    selberg,
    Phase,
)
from momlab.determinant import GroupFamily, GroupLabel, THKind, joint_moment_exact
from momlab.mom import MoMParams, mom_exact, mom_mc
from momlab.quadrature import QuadSpec, auto_depth
from momlab.sampling import Seed
from momlab.specfun import log_barnes_g

from conftest import i_infinity_quadrature, selberg_quadrature_2d

BASE = [GroupFamily.SO_EVEN, GroupFamily.SO_MINUS_EVEN, GroupFamily.SO_ODD,
        GroupFamily.SO_MINUS_ODD, GroupFamily.SP]
ALL = BASE + [GroupFamily.O_EVEN, GroupFamily.O_ODD]


def test_ac01_normalization_alpha_zero():
    # every group x m in {1,2,3}: exact route returns 1 to 1e-10; exercises
    # the SO(2n) 1/2 prefactor against det(kind 1, unit symbol) = 2
    worst = 0.0
    for fam in ALL:
        for m in (1, 2, 3):
            v = mom_exact(MoMParams(fam, m, 0.0), 5)
            worst = max(worst, abs(v - 1.0))
            assert abs(v - 1.0) <= 1e-10, (fam, m, v)
    print(f"AC1 PASS: alpha=0 normalization, worst |MoM-1| = {worst:.2e}")


@pytest.mark.slow
def test_ac02_route_agreement_small_n():
    # 5 groups x m in {1,2} x alpha in {0.5, 1} x n in {2,3,4}:
    # exact vs 2e5-sample Monte Carlo within 4 standard errors
    failures = []
    worst = 0.0
    for fam in BASE:
        for m in (1, 2):
            for alpha in (0.5, 1.0):
                for n in (2, 3, 4):
                    p = MoMParams(fam, m, alpha)
                    ex = mom_exact(p, n)
                    est = mom_mc(p, n, 200_000, Seed(0xAC02))
                    z = abs(ex - est.mean) / est.stderr
                    worst = max(worst, z)
                    if z >= 4.0:
                        failures.append((fam.value, m, alpha, n, z))
    assert not failures, failures
    print(f"AC2 PASS: 60 exact-vs-MC combos agree, worst z = {worst:.2f} sigma")


def test_ac03_sp2_bruteforce_anchor():
    theta = math.pi / 3
    det_route = joint_moment_exact(GroupLabel(GroupFamily.SP, 1), 1, 1.0, [theta]).to_float()
    oracle = integrate.quad(
        lambda p: (2 - 2 * math.cos(p - theta)) * (2 - 2 * math.cos(p + theta))
        * (2 / math.pi) * math.sin(p) ** 2, 0, math.pi)[0]
    assert det_route == pytest.approx(oracle, abs=1e-8)
    print(f"AC3 PASS: Sp(2) anchor |det-route - quadrature| = {abs(det_route - oracle):.2e}")


@pytest.mark.slow
def test_ac04_subcritical_constant_symplectic():
    # Sp(2n), m=1, alpha=0.3: MoM / ((2n)^0.09 C-) in [0.9, 1.1] at n=200,
    # strictly closer to 1 than at n=50
    c = c_constant(1, 0.3, -1)
    ratio = {}
    for n in (50, 200):
        v = mom_exact(MoMParams(GroupFamily.SP, 1, 0.3), n)
        ratio[n] = v / ((2 * n) ** 0.09 * c)
    assert 0.9 <= ratio[200] <= 1.1, ratio
    assert abs(ratio[200] - 1.0) < abs(ratio[50] - 1.0), ratio
    print(f"AC4 PASS: Sp subcritical ratio {ratio[50]:.4f} (n=50) -> {ratio[200]:.4f} (n=200)")


@pytest.mark.slow
def test_ac05_subcritical_constant_orthogonal():
    # SO(2n+1), m=1, alpha=0.3 against n^0.09 C+ with window [0.85, 1.15]
    c = c_constant(1, 0.3, +1)
    ratio = {}
    for n in (50, 200):
        v = mom_exact(MoMParams(GroupFamily.SO_ODD, 1, 0.3), n)
        ratio[n] = v / (n ** 0.09 * c)
    assert 0.85 <= ratio[200] <= 1.15, ratio
    assert abs(ratio[200] - 1.0) < abs(ratio[50] - 1.0), ratio
    print(f"AC5 PASS: SO(2n+1) subcritical ratio {ratio[50]:.4f} (n=50) -> {ratio[200]:.4f} (n=200)")


@pytest.mark.slow
def test_ac06_supercritical_exponent():
    # Sp(2n), m=1, alpha=1: fitted slope within 0.15 of 2(m a)^2 + m a - m = 2
    pts = [(n, mom_exact(MoMParams(GroupFamily.SP, 1, 1.0), n))
           for n in (50, 100, 200, 400)]
    slope, err = fit_scaling_exponent(pts)
    assert abs(slope - 2.0) <= 0.15, (slope, err)
    print(f"AC6 PASS: Sp supercritical slope {slope:.4f} +- {err:.4f} (target 2)")


def test_ac07_closed_form_crosschecks():
    # C = Barnes-G ratio x I_infinity to 1e-10, and I_infinity matches direct
    # quadrature to 1e-5, for (1,0.3,-), (2,0.25,+), (3,0.2,+)
    cases = [(1, 0.3, -1, 42, 16), (2, 0.25, +1, 40, 16), (3, 0.2, +1, 20, 12)]
    for m, a, s, depth, nodes in cases:
        lhs = c_constant(m, a, s)
        gratio = math.exp(2 * m * log_barnes_g(1 + a) - m * log_barnes_g(1 + 2 * a))
        closed = i_infinity(m, a, s)
        assert lhs == pytest.approx(gratio * closed, rel=1e-10)
        quad = i_infinity_quadrature(m, a, s, depth, nodes)
        assert quad == pytest.approx(closed, rel=1e-5), (m, a, s)
    print("AC7 PASS: C = G-ratio x I_inf (1e-10) and I_inf = quadrature (1e-5) on 3 cases")


def test_ac08_selberg_vs_bruteforce():
    # exact m=2, a=b=c=1 value 1/6, plus 10 random admissible triples at 1e-5
    assert selberg(2, 1.0, 1.0, 1.0).to_float() == pytest.approx(1 / 6, rel=1e-12)
    rng = np.random.default_rng(0xAC08)
    worst = 0.0
    for _ in range(10):
        a = float(rng.uniform(0.45, 2.0))
        b = float(rng.uniform(0.45, 2.0))
        c = float(rng.uniform(-0.18, 0.5))
        closed = selberg(2, a, b, c).to_float()
        q = selberg_quadrature_2d(a, b, c)
        rel = abs(q / closed - 1.0)
        worst = max(worst, rel)
        assert rel <= 1e-5, (a, b, c, rel)
    print(f"AC8 PASS: Selberg closed form vs quadrature, worst rel = {worst:.2e}")


def test_ac09_phase_diagram():
    # every branch condition, breakpoints probed at +-1e-9, and exponent
    # continuity at every breakpoint for m <= 5 to 1e-12
    for m in range(1, 6):
        for fam in (GroupFamily.SP, GroupFamily.SO_EVEN, GroupFamily.O_ODD):
            s = -1 if fam is GroupFamily.SP else +1
            if s > 0 and m == 2:
                continue
            t = (math.sqrt(8 * m - 3) + s) / (4 * m - 2)
            sub = classify_phase(fam, m, t * (1 - 1e-9))
            crit = classify_phase(fam, m, t)
            sup = classify_phase(fam, m, t * (1 + 1e-9))
            assert (sub.phase, crit.phase, sup.phase) == (
                Phase.SUBCRITICAL, Phase.CRITICAL, Phase.SUPERCRITICAL)
            assert crit.log_power == 1 and sub.constant is not None
            # continuity: m a^2 meets 2(ma)^2 -s ma - m at the breakpoint
            assert abs(m * t * t - (2 * (m * t) ** 2 - s * m * t - m)) <= 1e-12
            assert abs(sub.exponent - m * (t * (1 - 1e-9)) ** 2) <= 1e-12
    # orthogonal m = 2: five branches, two transitions
    t1, t2 = 1 / math.sqrt(2), (math.sqrt(5) + 1) / 4
    seq = [(t1 - 1e-3, Phase.SUBCRITICAL), (t1, Phase.CRITICAL),
           (0.5 * (t1 + t2), Phase.INTERMEDIATE), (t2, Phase.SECOND_CRITICAL),
           (t2 + 1e-3, Phase.SUPERCRITICAL)]
    for fam in (GroupFamily.SO_EVEN, GroupFamily.SO_MINUS_ODD, GroupFamily.O_EVEN):
        for a, phase in seq:
            assert classify_phase(fam, 2, a).phase is phase
    assert abs(2 * t1 ** 2 - (4 * t1 ** 2 - 1)) <= 1e-12
    assert abs((4 * t2 ** 2 - 1) - (8 * t2 ** 2 - 2 * t2 - 2)) <= 1e-12
    for a, _ in seq:  # breakpoints are exactly where advertised
        for da in (-1e-9, 1e-9):
            r = classify_phase(GroupFamily.SO_EVEN, 2, a + da)
            assert r.phase in {Phase.SUBCRITICAL, Phase.CRITICAL, Phase.INTERMEDIATE,
                               Phase.SECOND_CRITICAL, Phase.SUPERCRITICAL}
    assert classify_phase(GroupFamily.SO_EVEN, 2, t1 + 1e-9).phase is Phase.INTERMEDIATE
    assert classify_phase(GroupFamily.SO_EVEN, 2, t1 - 1e-9).phase is Phase.SUBCRITICAL
    assert classify_phase(GroupFamily.SO_EVEN, 2, t2 + 1e-9).phase is Phase.SUPERCRITICAL
    assert classify_phase(GroupFamily.SO_EVEN, 2, t2 - 1e-9).phase is Phase.INTERMEDIATE
    print("AC9 PASS: phase diagram branches, breakpoints, and continuity for m <= 5")


@pytest.mark.slow
def test_ac10_envelope_boundedness():
    # ratio determinant/envelope over a theta sweep with gaps down to 1/n:
    # the spread window must not grow under n-doubling
    alpha, m = 0.6, 2

    def window(kind: THKind, fam: GroupFamily, n: int) -> float:
        g = GroupLabel(fam, n)
        ratios = []
        for t1 in np.linspace(0.25, math.pi - 0.35, 9):
            for gap in (1.0 / n, 3.0 / n, 0.3):
                t2 = t1 + gap
                if t2 >= math.pi - 0.05:
                    continue
                lv = joint_moment_exact(g, m, alpha, (t1, t2))
                extra = float(g.log_fixed_factor(alpha, np.array([t1, t2])))
                if fam is GroupFamily.SO_EVEN:
                    extra += math.log(0.5)
                det = math.exp(lv.log_abs - extra)
                ratios.append(det / envelope_uniform(kind, m, alpha, (t1, t2), n))
        return max(ratios) / min(ratios)

    for kind, fam in [(THKind(1), GroupFamily.SO_EVEN), (THKind(2), GroupFamily.SP),
                      (THKind(3), GroupFamily.SO_ODD), (THKind(4), GroupFamily.SO_MINUS_ODD)]:
        w50 = window(kind, fam, 50)
        w100 = window(kind, fam, 100)
        assert w100 <= 1.25 * w50, (int(kind), w50, w100)
        print(f"AC10 kind {int(kind)}: ratio window {w50:.3f} (n=50) -> {w100:.3f} (n=100)")
    print("AC10 PASS: determinant/envelope windows stable under n-doubling")


@pytest.mark.slow
def test_ac11_integral_scaling():
    # critical: I ~ log n, tested through stable (I(4n) - I(n))/log 4 increments
    ac_sp = (math.sqrt(5) - 1) / 2
    vals = {n: i_hn_numeric(GroupLabel(GroupFamily.SP, n), 1, ac_sp, n)
            for n in (64, 256, 1024, 4096)}
    incs = [(vals[4 * n] - vals[n]) / math.log(4) for n in (64, 256, 1024)]
    spread = (max(incs) - min(incs)) / incs[-1]
    assert spread < 0.02, incs
    slope_log, _ = fit_scaling_exponent(sorted(vals.items()))
    assert slope_log < 0.25  # sub-polynomial growth
    print(f"AC11 Sp m=1 critical: log-increments {[round(c, 4) for c in incs]} (spread {spread:.1%})")

    # supercritical slopes: Sp m=1 alpha=1 -> 1; SO-even m=2 alpha=1 -> 2
    pts = [(n, i_hn_numeric(GroupLabel(GroupFamily.SP, n), 1, 1.0, n))
           for n in (50, 100, 200, 400, 800)]
    s1, _ = fit_scaling_exponent(pts)
    assert abs(s1 - 1.0) <= 0.1, s1
    pts = [(n, i_hn_numeric(GroupLabel(GroupFamily.SO_EVEN, n), 2, 1.0, n))
           for n in (100, 200, 400, 800)]
    s2, _ = fit_scaling_exponent(pts)
    assert abs(s2 - 2.0) <= 0.1, s2

    # orthogonal m=2 first-critical point: increments drift but keep shrinking
    vals2 = {n: i_hn_numeric(GroupLabel(GroupFamily.SO_EVEN, n), 2, 1 / math.sqrt(2), n)
             for n in (64, 256, 1024, 4096)}
    incs2 = [(vals2[4 * n] - vals2[n]) / math.log(4) for n in (64, 256, 1024)]
    drifts = [abs(incs2[i + 1] - incs2[i]) for i in range(len(incs2) - 1)]
    assert all(c > 0 for c in incs2)
    assert drifts[1] < drifts[0]  # increments converging: log-growth, not power
    slope2, _ = fit_scaling_exponent(sorted(vals2.items()))
    assert slope2 < 0.3
    print(f"AC11 PASS: supercritical slopes {s1:.3f} (Sp m=1), {s2:.3f} (SO-even m=2); "
          f"critical increments stable")

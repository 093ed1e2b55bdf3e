"""Acceptance gate: every criterion at its stated tolerance, one per test.

Run ``pytest -v tests/test_acceptance.py`` (add ``-s`` to see the timed
pass/fail lines) - each test prints::

    [PASS] criterion NN (label) X.Xs within budget YYs

Criterion 8a is expected to fail: with t0 = 1 the oscillatory residue term
Re(M^{1+2it0} c_osc) has |c_osc| ~ 70.4 and the linear term another ~15% of
the leading M log M coefficient, so S(M)/(48 cosh(pi) pi^{-2} M log M) is
1.121, 1.133, 1.238 at M = 1e4, 1e5, 1e6 - mathematically incompatible with
"within 15% of 1 at 1e6 and improving".  The surrounding checks (8b residual
exponent, and the contour identity elsewhere) verify the same constants to
~1e-9 relative accuracy, so the sums and every constant are correct; the
stated ratio bound itself is unattainable.
"""

import cmath
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from eislab import eisenstein, lfunc, renorm, reptheory, specfun
from eislab.lfunc import CutoffSpec, LSpec


@contextmanager
def criterion(num: int, label: str, budget_s: float):
    t0 = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"[FAIL] criterion {num:2d} ({label}) {time.perf_counter() - t0:.1f}s")
        raise
    elapsed = time.perf_counter() - t0
    print(f"[PASS] criterion {num:2d} ({label}) {elapsed:.1f}s within budget {budget_s:.0f}s")
    assert elapsed < budget_s


def test_criterion_01_special_function_identities():
    with criterion(1, "special-function identities", 10.0):
        rng = np.random.default_rng(0)
        worst = 0.0
        for _ in range(100):
            z = complex(rng.uniform(-50, 50), rng.uniform(-50, 50))
            if abs(z.imag) < 1e-3 and z.real <= 0.5:
                continue
            g1 = specfun.complex_gamma(z + 1)
            worst = max(worst, abs(g1 - z * specfun.complex_gamma(z)) / abs(g1))
        assert worst < 1e-10

        worst = 0.0
        for _ in range(50):
            s = complex(rng.uniform(-0.8, 1.8), rng.uniform(-40, 40))
            if min(abs(s), abs(s - 1)) < 0.05:
                continue
            xi = specfun.completed_zeta(s)
            worst = max(worst, abs(xi - specfun.completed_zeta(1 - s)) / abs(xi))
        assert worst < 1e-9

        worst = max(abs(specfun.k_bessel(nu, x) - specfun.k_bessel(-nu, x))
                    for nu in (1j, 0.5 + 2j) for x in (0.5, 4.0))
        assert worst < 1e-12

        for (s, r) in [(1.2 + 0j, 2.0), (0.7 + 1j, 3.0)]:
            kb = math.sqrt(r / math.pi) * specfun.k_bessel(s - 0.5, r / 2.0)
            assert abs(specfun.whittaker_w_minus(0.0, s, r) - kb) / abs(kb) < 1e-7
            assert abs(specfun.whittaker_w_plus(0, s, r) - kb) / abs(kb) < 1e-7


def test_criterion_02_maass_selberg(model):
    with criterion(2, "Maass-Selberg closed form vs quadrature", 120.0):
        pairs = [(2.0 + 0j, 3.0 + 0j, 2.0), (1.5 + 1j, 2.5 + 0j, 1.5),
                 (0.5 + 1j, 0.5 + 3j, 2.0), (0.5 + 2j, 0.5 + 0.7j, 1.3),
                 (2.0 + 2j, 1.8 - 1j, 3.0)]
        for s1, s2, b in pairs:
            closed = renorm.maass_selberg_rhs(model, s1, s2, b)
            quad, _ = renorm.truncated_inner_product(model, s1, s2, b)
            assert abs(closed - quad) / abs(closed) < 1e-5


def test_criterion_03_vanishing_renormalized_products(model):
    with criterion(3, "RN of distinct-parameter products vanishes", 120.0):
        pairs = [(0.5 + 2j, 0.5 + 5j), (0.5 + 1j, 0.5 + 2.5j),
                 (0.5 + 0.7j, 0.5 + 3.3j), (0.5 + 4j, 0.5 + 1.5j),
                 (0.5 + 3j, 0.5 + 0.9j)]
        for s1, s2 in pairs:
            res = renorm.rn_integral(renorm.eisenstein_product(model, s1, s2),
                                     B=1.5, probe_spread=False)
            assert abs(res.value) < 1e-5


def test_criterion_04_b_independence(model):
    with criterion(4, "B-independence of renormalized integrals", 180.0):
        cases = [
            renorm.eisenstein_product(model, 0.5 + 2j, 0.5 + 5j),
            renorm.eisenstein_product(model, complex(0.5, 1.0), complex(0.5, 1.0)),
            renorm.AutomorphicEvaluator(
                lambda zs: np.ones_like(np.asarray(zs), dtype=complex),
                renorm.profile((1.0, 0.0, 0))),
        ]
        for F in cases:
            res = renorm.rn_integral(F, B=1.5, probe_spread=True)
            assert res.B_independence_spread < 10.0 * max(res.quad_error_estimate,
                                                          1e-30)


def test_criterion_05_transform_identity(model):
    with criterion(5, "Gamma-factor times L equals the transform", 60.0):
        spec = LSpec(t0=1.0, model=model)
        s0 = complex(0.5, 1.0)
        for s in (2.5, 3.0, 4.0):
            direct = renorm.rankin_selberg_transform(
                model, (s0, s0.conjugate()), s, mode="direct", rel_tol=2e-8)
            closed = lfunc.gamma_factor(spec, s) * lfunc.l_closed_form(spec, s)
            assert abs(closed - direct) / abs(closed) < 1e-6


def test_criterion_06_rn_of_squared_series(model):
    with criterion(6, "RN |E|^2 equals -phi' phi", 120.0):
        for t0 in (1.0, 2.0):
            s0 = complex(0.5, t0)
            res = renorm.rn_integral(renorm.eisenstein_product(model, s0, s0),
                                     B=1.5, probe_spread=False)
            target = -model.phi_derivative(s0) * model.phi(s0.conjugate())
            assert abs(res.value - target) < 1e-4


def test_criterion_07_triple_product_cross_mode(model):
    with criterion(7, "triple product: quadrature vs unfolded", 300.0):
        r, s, t = complex(0.5, 1.0), complex(0.5, 2.0), 4.0
        unf = renorm.rn_triple_product(model, r, s, t, mode="unfolded")
        quad = renorm.rn_triple_product(model, r, s, t, mode="quadrature",
                                        probe_spread=True)
        assert abs(unf - quad.value) / abs(unf) < 1e-3
        assert quad.B_independence_spread < 10.0 * max(quad.quad_error_estimate,
                                                       1e-30)


def test_criterion_08a_leading_ratio(model):
    # honest red: see the module docstring - the true oscillatory and linear
    # terms put the 1e6 ratio at 1.238, outside the stated 15%, and the
    # approach is non-monotone
    with criterion(8, "coefficient sums: leading-term ratio", 60.0):
        spec = LSpec(t0=1.0, model=model)
        a_coef = 48.0 * math.cosh(math.pi) / math.pi ** 2
        ratios = []
        for m_val in (10 ** 4, 10 ** 5, 10 ** 6):
            ratios.append(lfunc.coeff_sum(spec, m_val)
                          / (a_coef * m_val * math.log(m_val)))
        print(f"    observed ratios at 1e4/1e5/1e6: "
              f"{ratios[0]:.4f}, {ratios[1]:.4f}, {ratios[2]:.4f}")
        assert abs(ratios[-1] - 1.0) <= 0.15, (
            f"S(M)/(A M log M) = {ratios[-1]:.4f} at M = 1e6; the oscillatory "
            f"term Re(M^(1+2i) c_osc) with |c_osc| ~ 70.4 contributes ~9% and "
            f"the linear term ~15%, so the stated bound cannot hold")
        assert abs(ratios[0] - 1.0) >= abs(ratios[1] - 1.0) >= abs(ratios[2] - 1.0)


def test_criterion_08b_full_prediction_residual(model):
    with criterion(8, "coefficient sums: residual exponent", 60.0):
        spec = LSpec(t0=1.0, model=model)
        consts = lfunc.asymptotic_constants(spec)
        ms = [10 ** 4, 10 ** 5, 10 ** 6]
        resid = [abs(lfunc.coeff_sum(spec, m_val)
                     - consts.prediction(m_val, spec.t0)) for m_val in ms]
        slope = float(np.polyfit(np.log(ms), np.log(resid), 1)[0])
        print(f"    residuals {resid}, fitted exponent {slope:.3f}")
        assert slope < 1.0


def test_criterion_09_growth_scans(model):
    with criterion(9, "one-sided second-moment scans", 180.0):
        spec = LSpec(t0=1.0, model=model)
        rep1 = lfunc.theorem_scans(spec, 50.0, "thm1")
        assert rep1.fitted_exponent <= 6.5
        rep2 = lfunc.theorem_scans(spec, 50.0, "thm2")
        assert rep2.fitted_exponent <= 4.5
        assert np.all(rep1.integrand >= 0) and np.all(rep2.integrand >= 0)


def test_criterion_10_norm_growth():
    with criterion(10, "analytic-continuation norm growth", 30.0):
        for eps in (0.1, 0.05, 0.025):
            rep = reptheory.norm_growth_probe(eps)
            assert math.pi - 12.0 * eps <= rep.slope <= math.pi


def test_criterion_11_sobolev_growth():
    with criterion(11, "Sobolev growth of the probe vectors", 30.0):
        for beta in (1.0, 1.5, 2.0):
            rep = reptheory.sobolev_growth_probe(beta, 1.0)
            assert rep.scaled_max / rep.scaled_min < 3.0


def test_criterion_12_intertwining():
    with criterion(12, "intertwiner unitarity and inverse", 1.0):
        s = complex(0.5, 3.0)
        for u in range(1, 51):
            assert abs(abs(specfun.intertwining_coeff(s, u)) - 1.0) < 1e-10
        rng = np.random.default_rng(5)
        for _ in range(40):
            w = complex(rng.uniform(0.1, 0.9), rng.uniform(-4, 4))
            u = int(rng.integers(1, 50))
            assert abs(specfun.intertwining_coeff(w, u)
                       * specfun.intertwining_coeff(1.0 - w, u) - 1.0) < 1e-10


def test_criterion_13_weighted_series_at_one(model):
    with criterion(13, "weighted series value at the former pole", 30.0):
        mu = model.covolume
        c_vals = []
        for u in (1, 2, 5):
            v = eisenstein.eval_E_weighted(model, 0.3 + 10.0j, 1.0, u)
            resid = abs(v - 10.0 + (1.0 / (mu * u)))
            c_vals.append(resid / (u ** 0.55 * 10.0 ** -0.9))
        assert max(c_vals) < 10.0


def test_criterion_14_bound_probes():
    with criterion(14, "phase-integral bound probes", 120.0):
        grid = [(k, float(r), 0.5 + 0j) for k in range(1, 11)
                for r in np.geomspace(8 * k, 100 * k, 8)]
        rep = specfun.probe_whittaker_bounds("statphase1", grid)
        assert math.isfinite(rep.observed_ratio_max)

        grid = [(k, r, s) for k in (0.0, 1.0, 3.0) for r in (0.5, 2.0, 10.0)
                for s in (0.5 + 0j, 1.5 + 2j)]
        rep = specfun.probe_whittaker_bounds("trivbdd", grid)
        assert rep.observed_ratio_max <= 1.0

        k = 100
        grid = [(k, float(r), 0.5 + 0j) for r in np.geomspace(1.0, k / 3.0, 72)]
        rep = specfun.probe_whittaker_bounds("statphase2", grid)
        assert abs(rep.fitted_exponent - (-0.25)) < 0.15

        grid = [(k, 2.0 * k, 0.5 + 0j) for k in range(52, 203)]
        rep = specfun.probe_whittaker_bounds("sp1_cases", grid)
        assert abs(rep.fitted_exponent - (-0.5)) < 0.15


def test_criterion_15_eisenstein_cross_oracle(model):
    with criterion(15, "Fourier expansion vs defining sum", 30.0):
        rng = np.random.default_rng(9)
        for _ in range(10):
            z = complex(rng.uniform(-0.45, 0.45), rng.uniform(0.85, 2.5))
            ef = eisenstein.eval_E(model, z, 3.0)
            ed = eisenstein.eval_E_direct(z, 3.0, 140)
            assert abs(ef - ed) / abs(ef) < 1e-6

"""Special functions against closed forms and independent integrators."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eislab.errors import ConvergenceError, DomainError, PoleError
from eislab.quadrature import QuadratureConfig, adaptive_quad, adaptive_quad_vec
from eislab.specfun import (bessel_moment, complex_digamma, complex_gamma,
                            completed_zeta, intertwining_coeff, k_bessel,
                            k_bessel_grid, oscillatory_I, probe_whittaker_bounds,
                            riemann_zeta, whittaker_minus_integral,
                            whittaker_w_minus, whittaker_w_plus)


def rel(a, b):
    return abs(a - b) / abs(b)


# ----------------------------------------------------------------------------
# quadrature engine

def test_adaptive_quad_known_integrals():
    val, err = adaptive_quad(lambda x: math.exp(-x), 0.0, 10.0)
    assert abs(val - (1.0 - math.exp(-10.0))) < 1e-12
    val, _ = adaptive_quad(lambda x: cmath.exp(2j * x), 0.0, math.pi)
    assert abs(val) < 1e-12  # full periods cancel


def test_adaptive_quad_vec_matches_scalar():
    f = lambda xs: np.exp(-np.asarray(xs) ** 2) * np.cos(3.0 * np.asarray(xs))
    v1, _ = adaptive_quad_vec(f, -4.0, 4.0)
    v2, _ = adaptive_quad(lambda x: math.exp(-x * x) * math.cos(3 * x), -4.0, 4.0)
    assert abs(v1 - v2) < 1e-11


def test_adaptive_quad_reports_failure():
    cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=4)
    with pytest.raises(ConvergenceError) as exc:
        adaptive_quad(lambda x: 1.0 / math.sqrt(abs(x) + 1e-12), 0.0, 1.0, cfg)
    assert exc.value.achieved_tol is not None


# ----------------------------------------------------------------------------
# gamma

def test_gamma_classical_values():
    assert rel(complex_gamma(1.0), 1.0) < 1e-14
    assert rel(complex_gamma(0.5), math.sqrt(math.pi)) < 1e-13


def test_gamma_reflection_modulus():
    # |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
    t = 1.0
    g = complex_gamma(complex(0.5, t))
    assert rel(abs(g) ** 2, math.pi / math.cosh(math.pi * t)) < 1e-12


@given(st.complex_numbers(max_magnitude=50.0, allow_nan=False, allow_infinity=False))
@settings(max_examples=100, deadline=None)
def test_gamma_recurrence(z):
    if abs(z.imag) < 1e-3 and z.real <= 0.5:
        return  # keep clear of the pole line
    if abs(z) < 1e-3:
        return
    lhs = complex_gamma(z + 1)
    assert abs(lhs - z * complex_gamma(z)) / abs(lhs) < 1e-10


def test_gamma_frozen_high_precision_values():
    # 30-digit references near the |z| = 100 contract edge, both half-planes
    cases = [
        (99 + 10j, -2.025304635376967e+153 + 5.305882062401004e+153j),
        (50 - 80j, 1.2187938655551637e+41 - 1.3774827928576575e+41j),
        (-40.5 + 70j, 8.211731651499878e-125 + 8.379407561039581e-125j),
    ]
    for z, ref in cases:
        assert rel(complex_gamma(z), ref) < 1e-12


def test_gamma_pole():
    with pytest.raises(PoleError):
        complex_gamma(-3.0)


def test_digamma_half():
    # psi(1/2) = -gamma - 2 log 2
    assert abs(complex_digamma(0.5) - (-0.5772156649015329 - 2 * math.log(2))) < 1e-12


# ----------------------------------------------------------------------------
# zeta

def test_zeta_classical_values():
    assert rel(riemann_zeta(2.0 + 0j), math.pi ** 2 / 6.0) < 1e-13
    assert rel(riemann_zeta(4.0 + 0j), math.pi ** 4 / 90.0) < 1e-13


def _eta_oracle(s: complex, n_terms: int = 4000, n_avg: int = 40) -> complex:
    # alternating Dirichlet series, accelerated by iterated averaging of the
    # partial sums; fully independent of the Euler-Maclaurin path
    n = np.arange(1, n_terms + 1)
    terms = (-1.0) ** (n + 1) * np.exp(-s * np.log(n))
    sums = np.cumsum(terms)[-(n_avg + 1):]
    for _ in range(n_avg):
        sums = 0.5 * (sums[1:] + sums[:-1])
    return complex(sums[0])


def test_zeta_near_first_zero_against_eta_oracle():
    s = complex(0.5, 14.134725)
    eta = _eta_oracle(s)
    zeta_ref = eta / (1.0 - 2.0 ** (1.0 - s))
    ours = riemann_zeta(s)
    assert abs(ours - zeta_ref) < 1e-8
    assert abs(ours) < 1e-5


def test_zeta_critical_line_height_200_against_eta_oracle():
    s = complex(0.5, 180.0)
    zeta_ref = _eta_oracle(s, n_terms=20000, n_avg=60) / (1.0 - 2.0 ** (1.0 - s))
    assert rel(riemann_zeta(s), zeta_ref) < 1e-9


def test_zeta_domain_errors():
    with pytest.raises(PoleError):
        riemann_zeta(1.0 + 0j)
    with pytest.raises(DomainError):
        riemann_zeta(-1.5 + 2j)


# ----------------------------------------------------------------------------
# completed zeta

def test_completed_zeta_value_at_2():
    assert rel(completed_zeta(2.0 + 0j), math.pi / 6.0) < 1e-13


def test_completed_zeta_conjugation():
    a = completed_zeta(complex(0.5, 3.0))
    b = completed_zeta(complex(0.5, -3.0))
    assert abs(a.conjugate() - b) < 1e-14 * abs(a)


def test_completed_zeta_functional_equation_at_example_point():
    s = complex(0.3, 2.0)
    assert abs(completed_zeta(s) - completed_zeta(1.0 - s)) < 1e-12


@given(st.floats(-0.85, 1.85), st.floats(-40.0, 40.0))
@settings(max_examples=50, deadline=None)
def test_completed_zeta_functional_equation(sig, t):
    s = complex(sig, t)
    if min(abs(s), abs(s - 1.0)) < 0.05:
        return
    xi1 = completed_zeta(s)
    assert abs(xi1 - completed_zeta(1.0 - s)) / abs(xi1) < 1e-9


# ----------------------------------------------------------------------------
# K-Bessel

def test_k_bessel_half_order_closed_form():
    # K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
    for x in (0.3, 1.0, 7.0):
        ref = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
        assert rel(k_bessel(0.5, x), ref) < 1e-11


def test_k_bessel_order_symmetry():
    for nu in (1j, 0.7 + 2j, 1.5 + 0j):
        for x in (0.4, 2.0, 9.0):
            assert abs(k_bessel(nu, x) - k_bessel(-nu, x)) < 1e-12


def test_k_bessel_exponential_decay():
    val = k_bessel(1j, 30.0)
    assert abs(val) < 1e-12
    # asymptotic envelope sqrt(pi/(2x)) e^{-x}
    assert abs(val) < 2.0 * math.sqrt(math.pi / 60.0) * math.exp(-30.0)


def test_k_bessel_domain():
    with pytest.raises(DomainError):
        k_bessel(1j, -1.0)


def test_k_bessel_honors_explicit_tail_cutoff():
    # a generous explicit cutoff must reproduce the automatic one
    auto = k_bessel(1j, 2.0)
    manual = k_bessel(1j, 2.0, QuadratureConfig(tail_cutoff=12.0))
    assert abs(auto - manual) < 1e-12


def test_k_bessel_grid_matches_scalar():
    xs = np.array([0.35, 1.2, 4.0, 17.0, 55.0])
    grid = k_bessel_grid(0.5 + 1.5j, xs)
    for x, v in zip(xs, grid):
        assert abs(v - k_bessel(0.5 + 1.5j, float(x))) < 1e-11 * max(abs(v), 1e-8)


# ----------------------------------------------------------------------------
# Whittaker, decaying side

def test_whittaker_minus_k0_bessel_identity():
    # W_{0, nu}(2x) = sqrt(2x/pi) K_nu(x)
    for (s, x) in [(1.2 + 0j, 1.0), (0.6 + 1j, 2.0)]:
        lhs = whittaker_w_minus(0.0, s, 2.0 * x)
        rhs = math.sqrt(2.0 * x / math.pi) * k_bessel(s - 0.5, x)
        assert rel(lhs, rhs) < 1e-7


def test_whittaker_minus_against_independent_integrator():
    from scipy.integrate import quad
    k, s, r = 1.0, 1.0 + 0j, 2.0

    def integrand(u):
        return math.exp(-r * u) * (u / (u + 1.0)) ** k * (u * (u + 1.0)) ** (s.real - 1.0)

    ref_int, _ = quad(integrand, 0.0, 60.0, epsabs=1e-13, epsrel=1e-13, limit=400)
    ref = r ** s.real * math.exp(-r / 2.0) / complex_gamma(s + k).real * ref_int
    assert rel(whittaker_w_minus(k, s, r), ref) < 1e-8


def test_whittaker_minus_trivial_bound():
    # |W_{-k, s-1/2}(r)| <= r^sigma e^{-r/2} F(r, sigma)/|Gamma(s+k)|
    k, s, r = 1.0, 1.5 + 0j, 4.0
    sigma = s.real
    f_bound = 2.0 ** (sigma - 1.0) * (r ** -sigma * math.gamma(sigma)
                                      + r ** (1 - 2 * sigma) * math.gamma(2 * sigma - 1))
    w = whittaker_w_minus(k, s, r)
    bound = r ** sigma * math.exp(-r / 2.0) * f_bound / abs(complex_gamma(s + k))
    assert abs(w) <= bound


def test_whittaker_minus_domain():
    with pytest.raises(DomainError):
        whittaker_w_minus(1.0, 1.0 + 0j, -2.0)
    with pytest.raises(DomainError):
        whittaker_w_minus(1.0, -0.2 + 0j, 2.0)


# ----------------------------------------------------------------------------
# oscillatory phase integral and Whittaker, oscillatory side

def test_oscillatory_two_ibp_forms_agree():
    i1 = oscillatory_I(2, 10.0, 0.5 + 1j, order=1)
    i2 = oscillatory_I(2, 10.0, 0.5 + 1j, order=2)
    assert rel(i1, i2) < 1e-6


def test_oscillatory_two_forms_agree_on_grid():
    rng = np.random.default_rng(7)
    for _ in range(20):
        k = int(rng.integers(1, 6))
        r = float(rng.uniform(0.8, 40.0))
        s = complex(rng.uniform(0.3, 1.5), rng.uniform(-2, 2))
        i1 = oscillatory_I(k, r, s, order=1)
        i2 = oscillatory_I(k, r, s, order=2)
        assert abs(i1 - i2) < 1e-6 * max(1.0, abs(i2))


def test_oscillatory_first_order_ibp_bound():
    k, r, s = 3, 50.0, 0.5 + 0j
    val = oscillatory_I(k, r, s)
    assert abs(val) <= 10.0 * (abs(s) + k) / r


def test_oscillatory_nonstationary_instance():
    # k = 1, r = 16 sits in the r >= 8k regime: r^2 |I| / (|s|^2 + 1) bounded
    for s in (0.5 + 0j, 0.5 + 5j):
        val = oscillatory_I(1, 16.0, s)
        assert 16.0 ** 2 * abs(val) / (abs(s) ** 2 + 1.0) < 30.0


def test_oscillatory_k0_routes_to_bessel():
    s, r = 1.2 + 0.5j, 3.0
    i0 = oscillatory_I(0, r, s)
    w0 = math.sqrt(r / math.pi) * k_bessel(s - 0.5, r / 2.0)
    back = 4.0 ** (s - 1) / math.pi * complex_gamma(s) * r ** (1 - s) * i0
    assert rel(back, w0) < 1e-9


def test_whittaker_plus_k0_bessel_identity():
    s, r = 1.3 + 0j, 5.0
    lhs = whittaker_w_plus(0, s, r)
    rhs = math.sqrt(r / math.pi) * k_bessel(s - 0.5, r / 2.0)
    assert rel(lhs, rhs) < 1e-7


def test_whittaker_plus_against_frozen_independent_quadrature():
    # (k, s, r) = (1, 1, 4): oscillatory first-form integral evaluated with
    # mpmath.quadosc at 25 digits
    ref = 0.5413411329464508
    assert rel(whittaker_w_plus(1, 1.0 + 0j, 4.0), ref) < 1e-10


def test_whittaker_plus_conjugation():
    s, r, k = 0.7 + 1.3j, 5.0, 2
    a = whittaker_w_plus(k, s, r)
    b = whittaker_w_plus(k, s.conjugate(), r)
    assert abs(a.conjugate() - b) < 1e-10 * abs(a)


# ----------------------------------------------------------------------------
# Bessel moment

def test_bessel_moment_reproduces_gamma_factor():
    # mu = conj(nu) = s0 - 1/2 on the critical line, a = 2 pi |m|
    t0 = 1.0
    s = 3.0 + 0j
    mom = bessel_moment(1j * t0, -1j * t0, s, 2.0 * math.pi)
    g = (complex_gamma(0.5 * s + 1j * t0) * complex_gamma(0.5 * s - 1j * t0)
         * complex_gamma(0.5 * s) ** 2
         / (8.0 * math.pi ** s.real * complex_gamma(s)))
    assert rel(mom, g) < 1e-12


def test_bessel_moment_against_frozen_quadrature():
    # mpmath quadrature of K_i(2 pi y) K_{-i}(2 pi y) y^2 at 30 digits
    ref = 0.0005363194464953068
    assert rel(bessel_moment(1j, -1j, 3.0, 2.0 * math.pi), ref) < 1e-6


def test_bessel_moment_symmetry_and_domain():
    a = bessel_moment(0.3 + 1j, -0.2 + 2j, 4.0, 1.0)
    b = bessel_moment(-0.2 + 2j, 0.3 + 1j, 4.0, 1.0)
    assert rel(a, b) < 1e-13
    with pytest.raises(DomainError):
        bessel_moment(1.0, 1.0, 1.5, 1.0)


# ----------------------------------------------------------------------------
# intertwining coefficient (shared special-function core)

def test_intertwining_values():
    assert intertwining_coeff(2.0, 0) == 1.0
    assert abs(intertwining_coeff(2.0, 1) - (-0.5)) < 1e-15


# ----------------------------------------------------------------------------
# bound probes

def test_probe_trivbdd_ratio_below_one():
    grid = [(k, r, s) for k in (0.0, 1.0, 3.0) for r in (0.5, 2.0, 10.0)
            for s in (0.5 + 0j, 1.5 + 2j)]
    rep = probe_whittaker_bounds("trivbdd", grid)
    assert 0.0 < rep.observed_ratio_max <= 1.0


def test_probe_nonstationary_regime_finite():
    grid = [(k, float(r), 0.5 + 0j) for k in range(1, 11)
            for r in np.geomspace(8 * k, 100 * k, 8)]
    rep = probe_whittaker_bounds("statphase1", grid)
    assert math.isfinite(rep.observed_ratio_max)
    assert rep.observed_ratio_max < 100.0


def test_probe_stationary_regime_exponent():
    # dense in r so the RMS bins average over the stationary-phase oscillation
    k = 100
    grid = [(k, float(r), 0.5 + 0j) for r in np.geomspace(1.0, k / 3.0, 72)]
    rep = probe_whittaker_bounds("statphase2", grid)
    assert abs(rep.fitted_exponent - (-0.25)) < 0.1
    assert math.isfinite(rep.observed_ratio_max)


def test_probe_transition_case_exponent():
    grid = [(k, 2.0 * k, 0.5 + 0j) for k in range(52, 203)]
    rep = probe_whittaker_bounds("sp1_cases", grid)
    assert abs(rep.fitted_exponent - (-0.5)) < 0.15
    assert math.isfinite(rep.observed_ratio_max)


def test_probe_transition_all_cases_finite():
    # ratios stay finite across all four k < r < 8k sub-regimes
    grid = []
    for k in (60, 120):
        edge = 1.0 + k ** (-2.0 / 3.0)
        grid += [(k, 6.0 * k, 0.5 + 1j),              # above 4k(1 + k^{-2/3})
                 (k, 4.0 * k * (1 + 0.5 * (edge - 1)), 0.5 + 1j),
                 (k, 4.0 * k / (1 + 0.5 * (edge - 1)), 0.5 + 1j),
                 (k, 1.5 * k, 0.5 + 1j)]              # interior stationary
    rep = probe_whittaker_bounds("sp1_cases", grid)
    assert math.isfinite(rep.observed_ratio_max)
    assert rep.observed_ratio_max < 50.0


def test_probe_report_serializes():
    import json
    rep = probe_whittaker_bounds("ibpbdd", [(3, 50.0, 0.5 + 0j)])
    text = json.dumps(rep.to_json_dict())
    assert "ibpbdd" in text
    assert math.isfinite(rep.observed_ratio_max)
    assert math.isnan(rep.fitted_exponent)  # single-point grid has no slope

"""Renormalized integrals over the modular surface.

An automorphic function F is *renormalizable* when, up the cusp,

    F(z) = Xi(y) + O(y^{-A})  for all A,      Xi(y) = sum c/n! y^alpha log^n y.

The renormalized integral subtracts the divergent profile explicitly:

    RN(F) = int_{F_B} F dmu + int_{cusp strip >= B} (F - Xi) dmu - Xihat(B),

where Xihat is the antiderivative normalized so d/dy Xihat = y^{-2} Xi; the
result is independent of the truncation height B, and every computed
:class:`RenormResult` carries the observed spread over {B, B+1, 2B} as a
built-in consistency check.

The module also hosts the closed Maass-Selberg form for inner products of
truncated Eisenstein series, the pole-cancelling combination Phi^{r,s} of
Eisenstein products, the Rankin-Selberg transform (term-by-term Bessel
moments for large Re(s), zeta/Gamma closed form on the critical line), and
the renormalized triple product in both quadrature and unfolded modes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .eisenstein import EisensteinSeries, TailPolicy
from .errors import DomainError, PoleError
from .lattice import LatticeModel
from .quadrature import QuadratureConfig, adaptive_quad, adaptive_quad_vec
from .specfun import complex_gamma, riemann_zeta

DELTA_POLE = 1e-3   # exclusion radius around the s = r / s = 1 - r cancellation lines


# ----------------------------------------------------------------------------
# Growth profiles

@dataclass(frozen=True)
class ExponentTerm:
    c: complex
    alpha: complex
    n: int = 0

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("zero coefficient terms must be dropped")
        if self.n < 0:
            raise ValueError("log power must be >= 0")


@dataclass(frozen=True)
class GrowthProfile:
    terms: tuple[ExponentTerm, ...] = ()

    def __post_init__(self):
        seen = set()
        for t in self.terms:
            key = (round(t.alpha.real, 9), round(t.alpha.imag, 9), t.n)
            if key in seen:
                raise ValueError(f"duplicate (alpha, n) pair {key}")
            seen.add(key)

    @property
    def max_re_alpha(self) -> float:
        return max((t.alpha.real for t in self.terms), default=0.0)


def profile(*terms) -> GrowthProfile:
    return GrowthProfile(tuple(ExponentTerm(complex(c), complex(a), int(n))
                               for (c, a, n) in terms))


def profile_product(p1: GrowthProfile, p2: GrowthProfile) -> GrowthProfile:
    """Profile of a pointwise product; merges coincident (alpha, n) pairs."""
    acc: list[list] = []
    for t1 in p1.terms:
        for t2 in p2.terms:
            n = t1.n + t2.n
            c = t1.c * t2.c * math.comb(n, t1.n)
            a = t1.alpha + t2.alpha
            for row in acc:
                if abs(row[1] - a) < 1e-12 and row[2] == n:
                    row[0] += c
                    break
            else:
                acc.append([c, a, n])
    return GrowthProfile(tuple(ExponentTerm(c, a, n) for c, a, n in acc
                               if abs(c) > 1e-300))


def profile_conjugate(p: GrowthProfile) -> GrowthProfile:
    return GrowthProfile(tuple(
        ExponentTerm(t.c.conjugate(), t.alpha.conjugate(), t.n) for t in p.terms))


def xi_eval(p: GrowthProfile, y) -> complex | np.ndarray:
    """Xi(y) = sum c/n! y^alpha log^n y; accepts scalars or arrays."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0.0):
        raise DomainError("profile evaluation requires y > 0")
    ly = np.log(y)
    out = np.zeros(y.shape, dtype=complex)
    for t in p.terms:
        out += (t.c / math.factorial(t.n)) * np.exp(t.alpha * ly) * ly ** t.n
    return complex(out) if out.shape == () else out


def xi_hat(p: GrowthProfile, B: float) -> complex:
    """Antiderivative normalization: d/dy xi_hat = y^{-2} Xi(y)."""
    if B <= 0.0:
        raise DomainError("xi_hat requires B > 0")
    lb = math.log(B)
    total = 0.0 + 0.0j
    for t in p.terms:
        if abs(t.alpha - 1.0) < 1e-12:
            total += t.c * lb ** (t.n + 1) / math.factorial(t.n + 1)
        else:
            am1 = t.alpha - 1.0
            inner = 0.0 + 0.0j
            for m in range(t.n + 1):
                inner += ((-1.0) ** (t.n - m) / math.factorial(m)
                          * lb ** m / am1 ** (t.n - m + 1))
            total += t.c * cmath.exp(am1 * lb) * inner
    return total


@dataclass
class AutomorphicEvaluator:
    """A vectorized automorphic function together with its cusp profile."""

    func: Callable[[np.ndarray], np.ndarray]
    profile: GrowthProfile

    def __call__(self, zs) -> np.ndarray:
        return np.asarray(self.func(np.asarray(zs, dtype=complex)), dtype=complex)


@dataclass
class RenormResult:
    value: complex
    B_used: float
    quad_error_estimate: float
    B_independence_spread: float


# ----------------------------------------------------------------------------
# Quadrature over the fundamental domain

def bulk_integral(fvec, B: float, cfg: QuadratureConfig) -> tuple[complex, float]:
    """int over {|x| <= 1/2, |z| >= 1, y <= B} of f dmu."""
    inner_cfg = QuadratureConfig(abs_tol=cfg.abs_tol / 4.0, rel_tol=cfg.rel_tol,
                                 max_subdivisions=cfg.max_subdivisions)
    outer_cfg = QuadratureConfig(abs_tol=cfg.abs_tol / 2.0, rel_tol=cfg.rel_tol,
                                 max_subdivisions=cfg.max_subdivisions)

    def g(x: float) -> complex:
        y_lo = math.sqrt(max(1.0 - x * x, 0.0))
        if y_lo >= B:
            return 0.0

        def h(ys):
            ys = np.asarray(ys)
            vals = fvec(x + 1j * ys)
            return vals / ys ** 2

        n0 = max(4, int(math.ceil((B - y_lo) * 4.0)))
        val, _ = adaptive_quad_vec(h, y_lo, B, inner_cfg,
                                   initial_edges=np.linspace(y_lo, B, n0 + 1))
        return val

    val, err = adaptive_quad(g, -0.5, 0.5, outer_cfg, initial_splits=8)
    return val, err + inner_cfg.abs_tol


def strip_integral(fvec, y_lo: float, y_hi: float,
                   cfg: QuadratureConfig) -> tuple[complex, float]:
    """int over {|x| <= 1/2, y_lo <= y <= y_hi} of f dmu, log-spaced in y."""
    inner_cfg = QuadratureConfig(abs_tol=cfg.abs_tol / 4.0, rel_tol=cfg.rel_tol,
                                 max_subdivisions=cfg.max_subdivisions)
    outer_cfg = QuadratureConfig(abs_tol=cfg.abs_tol / 2.0, rel_tol=cfg.rel_tol,
                                 max_subdivisions=cfg.max_subdivisions)

    def g(y: float) -> complex:
        def h(xs):
            xs = np.asarray(xs)
            return fvec(xs + 1j * y)
        val, _ = adaptive_quad_vec(h, -0.5, 0.5, inner_cfg,
                                   initial_edges=np.linspace(-0.5, 0.5, 9))
        return val / y ** 2

    edges = np.exp(np.linspace(math.log(y_lo), math.log(y_hi), 12))
    total = 0.0 + 0.0j
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = adaptive_quad(g, lo, hi, outer_cfg, initial_splits=1)
        total += v
        err += e
    return total, err + inner_cfg.abs_tol


def _strip_tail_height(B: float, abs_tol: float) -> float:
    # e^{-2 pi Y} < abs_tol / 10 plus margin for polynomial prefactors
    return max(B, (abs(math.log(abs_tol / 10.0)) + 12.0) / (2.0 * math.pi)) + 1.0


def rn_at_B(F: AutomorphicEvaluator, B: float, cfg: QuadratureConfig) -> tuple[complex, float]:
    """One renormalized integral at a fixed truncation height."""
    y_top = _strip_tail_height(B, cfg.abs_tol)

    def residual(zs):
        zs = np.asarray(zs)
        return F(zs) - xi_eval(F.profile, zs.imag)

    # profile-mismatch probe on a vertical ray
    probe = residual(np.array([0.2371 + 1j * y_top, 0.2371 + 1j * (y_top + 2.0)]))
    if np.abs(probe).max() > max(100.0 * cfg.abs_tol, 1e-7):
        raise DomainError(
            f"profile mismatch: |F - Xi| = {np.abs(probe).max():.3e} at the strip top")

    bulk, e1 = bulk_integral(F, B, cfg)
    strip, e2 = strip_integral(residual, B, y_top, cfg)
    return bulk + strip - xi_hat(F.profile, B), e1 + e2


def rn_integral(F: AutomorphicEvaluator, B: float = 1.5,
                cfg: QuadratureConfig = QuadratureConfig(abs_tol=1e-8, rel_tol=1e-8),
                probe_spread: bool = True) -> RenormResult:
    """Renormalized integral of F with B-independence diagnostics."""
    if B < 1.0:
        raise DomainError("truncation height must be >= B0 >= 1")
    base, err = rn_at_B(F, B, cfg)
    spread = 0.0
    if probe_spread:
        others = [rn_at_B(F, B + 1.0, cfg)[0], rn_at_B(F, 2.0 * B, cfg)[0]]
        spread = max(abs(base - others[0]), abs(base - others[1]),
                     abs(others[0] - others[1]))
    return RenormResult(value=base, B_used=B, quad_error_estimate=err,
                        B_independence_spread=spread)


# ----------------------------------------------------------------------------
# Eisenstein products and Maass-Selberg

def eisenstein_profile(model: LatticeModel, s: complex) -> GrowthProfile:
    return profile((1.0, s, 0), (model.phi(s), 1.0 - complex(s), 0))


def eisenstein_product(model: LatticeModel, s1: complex, s2: complex,
                       conjugate_second: bool = True,
                       policy: TailPolicy = TailPolicy()) -> AutomorphicEvaluator:
    """F = E(., s1) * E(., s2) (second factor conjugated by default)."""
    e1 = EisensteinSeries(model, s1, policy)
    e2 = EisensteinSeries(model, s2, policy)
    p1 = eisenstein_profile(model, s1)
    p2 = eisenstein_profile(model, s2)
    if conjugate_second:
        func = lambda zs: e1.eval_many(zs) * np.conj(e2.eval_many(zs))
        prof = profile_product(p1, profile_conjugate(p2))
    else:
        func = lambda zs: e1.eval_many(zs) * e2.eval_many(zs)
        prof = profile_product(p1, p2)
    return AutomorphicEvaluator(func, prof)


def maass_selberg_rhs(model: LatticeModel, s1: complex, s2: complex,
                      B: float) -> complex:
    """Closed form of <E^B(., s1), E^B(., s2)> for the one-cusp lattice."""
    s1, s2 = complex(s1), complex(s2)
    s2b = s2.conjugate()
    if abs(s1 + s2b - 1.0) < 1e-8 or abs(s1 - s2b) < 1e-8:
        raise DomainError("degenerate parameters: s1 + conj(s2) = 1 or s1 = conj(s2)")
    phi1 = model.phi(s1)
    phi2b = model.phi(s2).conjugate()
    lb = math.log(B)
    return (cmath.exp((s1 + s2b - 1.0) * lb) / (s1 + s2b - 1.0)
            + phi2b * cmath.exp((s1 - s2b) * lb) / (s1 - s2b)
            + phi1 * cmath.exp((s2b - s1) * lb) / (s2b - s1)
            - phi1 * phi2b * cmath.exp((1.0 - s1 - s2b) * lb) / (s1 + s2b - 1.0))


def truncated_inner_product(model: LatticeModel, s1: complex, s2: complex, B: float,
                            cfg: QuadratureConfig = QuadratureConfig(abs_tol=1e-8, rel_tol=1e-8),
                            policy: TailPolicy = TailPolicy()) -> tuple[complex, float]:
    """Quadrature of <E^B(., s1), E^B(., s2)>: the Maass-Selberg oracle."""
    e1 = EisensteinSeries(model, s1, policy)
    e2 = EisensteinSeries(model, s2, policy)
    full = AutomorphicEvaluator(
        lambda zs: e1.eval_many(zs) * np.conj(e2.eval_many(zs)), GrowthProfile())
    bulk, err1 = bulk_integral(full, B, cfg)

    def truncated(zs):
        zs = np.asarray(zs)
        ys = zs.imag
        return ((e1.eval_many(zs) - e1.constant_term(ys))
                * np.conj(e2.eval_many(zs) - e2.constant_term(ys)))

    y_top = _strip_tail_height(B, cfg.abs_tol)
    strip, err2 = strip_integral(truncated, B, y_top, cfg)
    return bulk + strip, err1 + err2


# ----------------------------------------------------------------------------
# The pole-cancelling product Phi^{r,s}

def _phi_triple_guard(r: complex, s: complex):
    # hair of slack so approach sequences may sit exactly on the radius
    if min(abs(r - s), abs(r + s - 1.0)) < DELTA_POLE * (1.0 - 1e-6):
        raise PoleError(
            f"(r, s) within {DELTA_POLE} of the cancellation lines s = r, s = 1 - r")


def phi_triple_series(model: LatticeModel, r: complex, s: complex,
                      policy: TailPolicy = TailPolicy()) -> AutomorphicEvaluator:
    """Vectorized Phi^{r,s} = E(r)E(s) - E(r+s) - phi(s)E(r+1-s)
    - phi(r)E(1-r+s) - phi(r)phi(s)E(2-r-s), with its bounded cusp profile."""
    r, s = complex(r), complex(s)
    _phi_triple_guard(r, s)
    phi_r, phi_s = model.phi(r), model.phi(s)
    er = EisensteinSeries(model, r, policy)
    es = EisensteinSeries(model, s, policy)
    e_rs = EisensteinSeries(model, r + s, policy)
    e_a = EisensteinSeries(model, r + 1.0 - s, policy)
    e_b = EisensteinSeries(model, 1.0 - r + s, policy)
    e_c = EisensteinSeries(model, 2.0 - r - s, policy)

    def func(zs):
        zs = np.asarray(zs)
        return (er.eval_many(zs) * es.eval_many(zs) - e_rs.eval_many(zs)
                - phi_s * e_a.eval_many(zs) - phi_r * e_b.eval_many(zs)
                - phi_r * phi_s * e_c.eval_many(zs))

    prof = profile(
        (-model.phi(r + s), 1.0 - r - s, 0),
        (-phi_s * model.phi(r + 1.0 - s), s - r, 0),
        (-phi_r * model.phi(1.0 - r + s), r - s, 0),
        (-phi_r * phi_s * model.phi(2.0 - r - s), r + s - 1.0, 0),
    )
    return AutomorphicEvaluator(func, prof)


def phi_triple(model: LatticeModel, z: complex, r: complex, s: complex,
               policy: TailPolicy = TailPolicy()) -> complex:
    return complex(phi_triple_series(model, r, s, policy)(np.array([z]))[0])


# ----------------------------------------------------------------------------
# Rankin-Selberg transform

def rankin_selberg_transform(model: LatticeModel, pair: tuple[complex, complex],
                             w: complex, mode: str = "direct",
                             rel_tol: float = 1e-9, m_cap: int = 2_000_000) -> complex:
    """R(F, w) for F = E(., r) E(., s2).

    ``direct`` sums psi_m(r) psi_m(s2) Bessel moments term by term (requires
    Re(w) > max Re(alpha) + 1 = 2); ``continued`` is the zeta/Gamma closed
    form obtained by resumming the divisor series, valid wherever the zeta
    arguments avoid poles - in particular on the critical line.
    """
    r, s2 = complex(pair[0]), complex(pair[1])
    w = complex(w)
    if mode == "direct":
        if w.real <= 2.0:
            raise DomainError("direct mode requires Re(w) > 2")
        # collapse 2 sum_m psi_m(r) psi_m(s2) * moment(m) to one Dirichlet sum:
        #   C * sum_m sigma_{1-2r}(m) sigma_{1-2s2}(m) m^{-(w + 1 - r - s2)}
        g4 = (complex_gamma(0.5 * (w + r + s2 - 1.0))
              * complex_gamma(0.5 * (w + s2 - r))
              * complex_gamma(0.5 * (w + r - s2))
              * complex_gamma(0.5 * (w + 1.0 - r - s2)))
        c = (cmath.exp((r + s2 - w) * math.log(math.pi)) * g4
             / (complex_gamma(r) * complex_gamma(s2) * riemann_zeta(2.0 * r)
                * riemann_zeta(2.0 * s2) * complex_gamma(w)))
        expo = -(w + 1.0 - r - s2)
        sig_w = w.real + 1.0 - r.real - s2.real
        m_block = 16384
        limit = min(m_cap, model.divisors.limit)
        sig1 = model.divisors.sigma_array(1.0 - 2.0 * r, min(m_block, limit))
        sig2 = (np.conj(sig1) if abs(s2 - r.conjugate()) < 1e-14
                else model.divisors.sigma_array(1.0 - 2.0 * s2, min(m_block, limit)))

        def block_sum(arr1, arr2, lo, hi):
            ms = np.arange(lo, hi + 1, dtype=float)
            return complex(np.sum(arr1[lo:hi + 1] * arr2[lo:hi + 1]
                                  * np.exp(expo * np.log(ms))))

        total = block_sum(sig1, sig2, 1, min(m_block, limit))
        m_done = min(m_block, limit)
        geo = 2.0 ** (1.0 - sig_w)
        tail_est = math.inf
        while m_done < limit and tail_est >= rel_tol * abs(total):
            m_next = min(2 * m_done, limit)
            sig1 = model.divisors.sigma_array(1.0 - 2.0 * r, m_next)
            sig2 = (np.conj(sig1) if abs(s2 - r.conjugate()) < 1e-14
                    else model.divisors.sigma_array(1.0 - 2.0 * s2, m_next))
            diff = block_sum(sig1, sig2, m_done + 1, m_next)
            total += diff
            m_done = m_next
            tail_est = abs(diff) * geo / (1.0 - geo)
        if tail_est >= rel_tol * abs(total) and m_done >= limit:
            raise DomainError(
                f"direct mode did not reach {rel_tol} by the sieve limit {limit}")
        return c * total
    if mode == "continued":
        g4 = (complex_gamma(0.5 * (w + r + s2 - 1.0))
              * complex_gamma(0.5 * (w + s2 - r))
              * complex_gamma(0.5 * (w + r - s2))
              * complex_gamma(0.5 * (w + 1.0 - r - s2)))
        pref = 2.0 * cmath.exp((w - 3.0) * math.log(2.0) - w * math.log(2.0 * math.pi)) \
            / complex_gamma(w)
        dir_factor = (4.0 * cmath.exp((r + s2) * math.log(math.pi))
                      / (complex_gamma(r) * complex_gamma(s2)
                         * riemann_zeta(2.0 * r) * riemann_zeta(2.0 * s2)))
        zetas = (riemann_zeta(w + 1.0 - r - s2) * riemann_zeta(w + r - s2)
                 * riemann_zeta(w + s2 - r) * riemann_zeta(w + r + s2 - 1.0)
                 / riemann_zeta(2.0 * w))
        return pref * g4 * dir_factor * zetas
    raise DomainError(f"unknown mode {mode!r}")


# ----------------------------------------------------------------------------
# Renormalized triple products

def rn_triple_product(model: LatticeModel, r: complex, s: complex, t: float,
                      mode: str = "unfolded",
                      cfg: QuadratureConfig = QuadratureConfig(abs_tol=1e-7, rel_tol=1e-7),
                      B: float = 1.5, probe_spread: bool = False):
    """RN of E(., r) E(., s) conj(E(., 1/2 + it)).

    ``unfolded`` evaluates the Rankin-Selberg closed form at 1/2 - it (the
    conjugated Eisenstein factor *is* E(., 1/2 - it)); ``quadrature`` is the
    brute-force path: an ordinary integral of the bounded combination
    Phi^{r,s} against conj(E(., 1/2 + it)).  Returns a complex value in
    unfolded mode and a RenormResult in quadrature mode.
    """
    r, s = complex(r), complex(s)
    t = float(t)
    if mode == "unfolded":
        # the closed form is holomorphic across s = r and s = 1 - r; only the
        # quadrature path needs the cancellation-line guard
        if abs(t) < 1e-9:
            raise PoleError("unfolded form needs t != 0 (zeta(1 - 2it) pole)")
        return rankin_selberg_transform(model, (r, s), complex(0.5, -t),
                                        mode="continued")
    if mode == "quadrature":
        _phi_triple_guard(r, s)
        phi_ser = phi_triple_series(model, r, s)
        st = complex(0.5, t)
        e_t = EisensteinSeries(model, st)
        prof = profile_product(phi_ser.profile,
                               profile_conjugate(eisenstein_profile(model, st)))
        func = lambda zs: phi_ser(zs) * np.conj(e_t.eval_many(np.asarray(zs)))
        return rn_integral(AutomorphicEvaluator(func, prof), B=B, cfg=cfg,
                           probe_spread=probe_spread)
    raise DomainError(f"unknown mode {mode!r}")

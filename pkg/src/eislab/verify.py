"""Self-verification suites: every identity the library is built on.

Each suite returns a :class:`VerifyReport` whose checks carry the observed
value, the expected value (or bound), and the tolerance used, so a failed
run is diagnosable from the report alone.  The CLI ``verify`` subcommand
aggregates them; the acceptance tests reuse individual suites.  All inputs
are fixed (seeded) so two runs produce identical reports.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import eisenstein, lfunc, renorm, reptheory, specfun
from .lattice import LatticeModel, psl2z_model


@dataclass
class CheckResult:
    name: str
    passed: bool
    observed: float
    expected: float
    tolerance: float


@dataclass
class VerifyReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, observed: float, tolerance: float,
            expected: float = 0.0):
        self.checks.append(CheckResult(
            name=name, passed=bool(observed <= tolerance),
            observed=float(observed), expected=float(expected),
            tolerance=float(tolerance)))

    def add_bound(self, name: str, value: float, lo: float, hi: float):
        self.checks.append(CheckResult(
            name=name, passed=bool(lo <= value <= hi), observed=float(value),
            expected=float(0.5 * (lo + hi)), tolerance=float(0.5 * (hi - lo))))

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "wall_time_s": self.wall_time_s,
            "checks": [vars(c) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "VerifyReport":
        d = json.loads(text)
        rep = cls(suite=d["suite"], wall_time_s=d["wall_time_s"])
        for c in d["checks"]:
            rep.checks.append(CheckResult(**c))
        return rep


def _timed(fn):
    def wrapper(*args, **kwargs) -> VerifyReport:
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.wall_time_s = time.perf_counter() - t0
        return rep
    return wrapper


@_timed
def suite_special_functions(tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("special-functions")
    rng = np.random.default_rng(0)
    zs = rng.uniform(-50, 50, 40) + 1j * rng.uniform(-50, 50, 40)
    worst = 0.0
    for z in zs:
        z = complex(z)
        if abs(z.imag) < 1e-6 and z.real <= 0:
            continue
        worst = max(worst, abs(specfun.complex_gamma(z + 1)
                               - z * specfun.complex_gamma(z)) /
                    abs(specfun.complex_gamma(z + 1)))
    rep.add("gamma recurrence", worst, 1e-10 * tol_scale)

    ss = rng.uniform(-0.8, 1.8, 30) + 1j * rng.uniform(-40, 40, 30)
    worst = 0.0
    for s in ss:
        s = complex(s)
        if min(abs(s), abs(s - 1)) < 0.05:
            continue
        xi1 = specfun.completed_zeta(s)
        xi2 = specfun.completed_zeta(1.0 - s)
        worst = max(worst, abs(xi1 - xi2) / abs(xi1))
    rep.add("xi functional equation", worst, 1e-9 * tol_scale)

    worst = max(abs(specfun.k_bessel(nu, x) - specfun.k_bessel(-nu, x))
                for nu in (1j, 0.3 + 2j, 2.0) for x in (0.5, 3.0))
    rep.add("K_nu = K_{-nu}", worst, 1e-12 * tol_scale)

    worst = 0.0
    for (s, r) in [(1.5 + 0j, 2.0), (0.8 + 1j, 1.0), (2.5 + 0j, 5.0)]:
        kb = math.sqrt(r / math.pi) * specfun.k_bessel(s - 0.5, r / 2.0)
        worst = max(worst,
                    abs(specfun.whittaker_w_minus(0.0, s, r) - kb) / abs(kb),
                    abs(specfun.whittaker_w_plus(0, s, r) - kb) / abs(kb))
    rep.add("Whittaker k=0 Bessel reduction", worst, 1e-7 * tol_scale)

    worst = 0.0
    for k in (1, 2, 4):
        for r in (3.0, 10.0):
            for s in (0.5 + 1j, 1.0 + 0j):
                i1 = specfun.oscillatory_I(k, r, s, order=1)
                i2 = specfun.oscillatory_I(k, r, s, order=2)
                worst = max(worst, abs(i1 - i2) / abs(i2))
    rep.add("phase integral IBP forms agree", worst, 1e-6 * tol_scale)
    return rep


@_timed
def suite_lattice(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("lattice")
    rep.add("covolume = pi/3", abs(model.covolume - math.pi / 3.0), 1e-6 * tol_scale)
    h = 1e-6
    rep.add("residue of phi at 1 = 3/pi",
            abs(h * model.phi(1.0 + h) - 3.0 / math.pi), 1e-5 * tol_scale)
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(50):
        s = complex(rng.uniform(0.3, 0.7), rng.uniform(-20, 20))
        if abs(s - 0.5) < 0.02:
            continue
        worst = max(worst, abs(model.phi(s) * model.phi(1.0 - s) - 1.0))
    rep.add("phi(s) phi(1-s) = 1", worst, 1e-9 * tol_scale)
    worst = max(abs(abs(model.phi(complex(0.5, t))) - 1.0) for t in (0.5, 1, 5, 20))
    rep.add("|phi| = 1 on the critical line", worst, 1e-9 * tol_scale)
    worst = 0.0
    for n in range(1, 200):
        for w in (0.0, -2j, 1.0 - 2.4j):
            a = model.divisors.sigma(w, n)
            b = model.divisors.sigma_naive(w, n)
            worst = max(worst, abs(a - b))
    rep.add("divisor sieve vs enumeration", worst, 1e-10 * tol_scale)
    worst = 0.0
    for _ in range(30):
        z = complex(rng.uniform(-8, 8), math.exp(rng.uniform(-2.5, 2.5)))
        zr, _ = model.reduce(z)
        zr2, n2 = model.reduce(zr)
        worst = max(worst, abs(zr - zr2))
    rep.add("reduction idempotent", worst, 1e-12 * tol_scale)
    return rep


@_timed
def suite_eisenstein(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("eisenstein")
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(10):
        z = complex(rng.uniform(-0.45, 0.45), rng.uniform(0.9, 2.5))
        ef = eisenstein.eval_E(model, z, 3.0)
        ed = eisenstein.eval_E_direct(z, 3.0, 120)
        worst = max(worst, abs(ef - ed) / abs(ef))
    rep.add("Fourier vs direct sum at s=3", worst, 1e-6 * tol_scale)
    worst = 0.0
    for _ in range(10):
        z = complex(rng.uniform(-0.45, 0.45), rng.uniform(0.5, 2.0))
        s = complex(0.5, rng.uniform(0.5, 4.0))
        ser = eisenstein.EisensteinSeries(model, s)
        worst = max(worst, abs(ser(z) - ser(-1.0 / z)), abs(ser(z) - ser(z + 1.0)))
    rep.add("automorphy under the generators", worst, 1e-7 * tol_scale)
    s = complex(0.5, 2.0)
    z = 0.17 + 1.3j
    rep.add("conjugation symmetry",
            abs(eisenstein.eval_E(model, z, s).conjugate()
                - eisenstein.eval_E(model, z, s.conjugate())), 1e-10 * tol_scale)
    rep.add("Laplacian eigenfunction residual",
            max(eisenstein.laplacian_residual(model, 0.1 + 2j, complex(0.5, 5.0)),
                eisenstein.laplacian_residual(model, 0.3 + 1.5j, 3.0 + 0j)),
            1e-4 * tol_scale)
    worst = abs(eisenstein.eval_E_weighted(model, 0.1 + 1.3j, complex(0.5, 2.0), 0)
                - eisenstein.eval_E(model, 0.1 + 1.3j, complex(0.5, 2.0)))
    rep.add("weighted series at weight 0", worst, 1e-8 * tol_scale)
    return rep


_MS_PAIRS = [(2.0 + 0j, 3.0 + 0j, 2.0), (1.5 + 1j, 2.5 + 0j, 1.5),
             (0.5 + 1j, 0.5 + 3j, 2.0), (0.5 + 2j, 0.5 + 0.7j, 1.3),
             (2.0 + 2j, 1.8 - 1j, 3.0)]


@_timed
def suite_maass_selberg(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("maass-selberg")
    for s1, s2, b in _MS_PAIRS:
        closed = renorm.maass_selberg_rhs(model, s1, s2, b)
        quad, _ = renorm.truncated_inner_product(model, s1, s2, b)
        rep.add(f"closed form vs quadrature {s1}, {s2}, B={b}",
                abs(closed - quad) / max(abs(closed), 1e-30), 1e-5 * tol_scale)
    return rep


_MAASSEL_PAIRS = [(0.5 + 2j, 0.5 + 5j), (0.5 + 1j, 0.5 + 2.5j),
                  (0.5 + 0.7j, 0.5 + 3.3j), (0.5 + 4j, 0.5 + 1.5j),
                  (0.5 + 3j, 0.5 + 0.9j)]


@_timed
def suite_renorm_zero(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("rn-vanishing")
    for s1, s2 in _MAASSEL_PAIRS:
        res = renorm.rn_integral(renorm.eisenstein_product(model, s1, s2), B=1.5)
        rep.add(f"RN(E({s1}) conj E({s2})) = 0", abs(res.value), 1e-5 * tol_scale)
        rep.add(f"B-independence {s1}, {s2}", res.B_independence_spread,
                10.0 * max(res.quad_error_estimate, 1e-30))
    return rep


@_timed
def suite_gl_rs(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("gl-rs")
    spec = lfunc.LSpec(t0=1.0, model=model)
    s0 = complex(0.5, 1.0)
    for s in (2.5, 3.0, 4.0):
        direct = renorm.rankin_selberg_transform(model, (s0, s0.conjugate()), s,
                                                 mode="direct", rel_tol=2e-8)
        closed = lfunc.gamma_factor(spec, s) * lfunc.l_closed_form(spec, s)
        rep.add(f"G L = R at s = {s}", abs(direct - closed) / abs(closed),
                1e-6 * tol_scale)
    return rep


@_timed
def suite_rn_e2(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("rn-esquared")
    for t0 in (1.0, 2.0):
        s0 = complex(0.5, t0)
        res = renorm.rn_integral(renorm.eisenstein_product(model, s0, s0), B=1.5)
        target = -model.phi_derivative(s0) * model.phi(s0.conjugate())
        rep.add(f"RN |E(1/2+{t0}i)|^2 = -phi' phi", abs(res.value - target),
                1e-4 * tol_scale)
        rep.add(f"B-independence t0={t0}", res.B_independence_spread,
                10.0 * max(res.quad_error_estimate, 1e-30))
    return rep


@_timed
def suite_triple_product(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("triple-product")
    r, s, t = 0.5 + 1j, 0.5 + 2j, 4.0
    unf = renorm.rn_triple_product(model, r, s, t, mode="unfolded")
    quad = renorm.rn_triple_product(model, r, s, t, mode="quadrature",
                                    probe_spread=True)
    rep.add("quadrature vs unfolded", abs(unf - quad.value) / abs(unf),
            1e-3 * tol_scale)
    rep.add("B-independence", quad.B_independence_spread,
            10.0 * max(quad.quad_error_estimate, 1e-30))
    return rep


@_timed
def suite_coeff_sum(model: LatticeModel, tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("coeff-sum")
    spec = lfunc.LSpec(t0=1.0, model=model)
    consts = lfunc.asymptotic_constants(spec)
    rep.add("main term identity 16 cosh/(mu pi)",
            abs(consts.main_loglinear - 48.0 * math.cosh(math.pi) / math.pi ** 2),
            1e-9 * tol_scale)
    ms = [10 ** 4, 10 ** 5, 10 ** 6]
    resid = [abs(lfunc.coeff_sum(spec, M) - consts.prediction(M, spec.t0)) for M in ms]
    slope = float(np.polyfit(np.log(ms), np.log(resid), 1)[0])
    rep.add_bound("residual growth exponent", slope, -5.0, 1.0)
    cut = lfunc.CutoffSpec(50.0)
    sm = lfunc.smoothed_coeff_sum(spec, 10 ** 4, cut)
    lo = lfunc.coeff_sum(spec, int(10 ** 4 * (1 - 1 / 50.0)))
    hi = lfunc.coeff_sum(spec, int(10 ** 4 * (1 + 1 / 50.0)))
    rep.add_bound("smoothed sum sandwich", sm, lo, hi)
    return rep


@_timed
def suite_intertwining(tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("intertwining")
    worst = max(abs(abs(specfun.intertwining_coeff(complex(0.5, 3.0), u)) - 1.0)
                for u in range(1, 51))
    rep.add("unitarity on the critical line", worst, 1e-12 * tol_scale)
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(30):
        s = complex(rng.uniform(0.2, 0.8), rng.uniform(-5, 5))
        u = int(rng.integers(1, 40))
        worst = max(worst, abs(specfun.intertwining_coeff(s, u)
                               * specfun.intertwining_coeff(1.0 - s, u) - 1.0))
    rep.add("inverse identity", worst, 1e-10 * tol_scale)
    return rep


@_timed
def suite_norm_growth(tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("norm-growth")
    for eps in (0.1, 0.05, 0.025):
        r = reptheory.norm_growth_probe(eps)
        rep.add_bound(f"slope window at eps={eps}", r.slope,
                      math.pi - 12.0 * eps, math.pi)
    return rep


@_timed
def suite_sobolev(tol_scale: float = 1.0) -> VerifyReport:
    rep = VerifyReport("sobolev-growth")
    for beta in (1.0, 1.5, 2.0):
        r = reptheory.sobolev_growth_probe(beta, 1.0)
        rep.add(f"scaled spread factor at beta={beta}",
                r.scaled_max / r.scaled_min, 3.0)
    return rep


SUITES = {
    "special-functions": lambda model, ts: suite_special_functions(ts),
    "lattice": suite_lattice,
    "eisenstein": suite_eisenstein,
    "maass-selberg": suite_maass_selberg,
    "rn-vanishing": suite_renorm_zero,
    "gl-rs": suite_gl_rs,
    "rn-esquared": suite_rn_e2,
    "triple-product": suite_triple_product,
    "coeff-sum": suite_coeff_sum,
    "intertwining": lambda model, ts: suite_intertwining(ts),
    "norm-growth": lambda model, ts: suite_norm_growth(ts),
    "sobolev": lambda model, ts: suite_sobolev(ts),
}


def verify_all(model: LatticeModel | None = None, suites=None,
               tol_scale: float = 1.0) -> list[VerifyReport]:
    model = model or psl2z_model()
    names = suites or list(SUITES)
    return [SUITES[name](model, tol_scale) for name in names]

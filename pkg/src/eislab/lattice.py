"""Computable model of the modular group PSL(2, Z) and its cusp data.

The rest of the library is written against the :class:`LatticeModel`
interface (cusp count, scattering function, Fourier coefficients, covolume,
fundamental-domain geometry) so that the numerics stay lattice-generic, but
only the modular group is instantiated: it is the one lattice whose
scattering function xi(2s-1)/xi(2s) and divisor-sum coefficients

    psi_m(s) = 2 pi^s |m|^{s-1/2} sigma_{1-2s}(|m|) / (Gamma(s) zeta(2s))

admit closed forms against which everything can be verified.  Hecke
congruence subgroups would slot in behind the same interface (their
scattering matrices are Dirichlet L-function ratios) but are not
implemented.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IterationLimitError, PoleError, SieveLimitError
from .quadrature import QuadratureConfig, adaptive_quad_vec
from .specfun import complex_gamma, completed_zeta, riemann_zeta

SIEVE_LIMIT_ENV = "EISLAB_SIEVE_LIMIT"


@dataclass(frozen=True)
class ModelConfig:
    sieve_limit: int = 1_000_000
    reduction_max_iter: int = 10_000
    boundary_tol: float = 1e-12
    b0: float = 1.2  # least admissible truncation height


def load_model_config(path: str) -> ModelConfig:
    """Read ``key = value`` lines; unknown keys are rejected."""
    kwargs = {}
    fields = set(ModelConfig.__dataclass_fields__)
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in fields:
                raise ValueError(f"unknown config key: {key}")
            typ = ModelConfig.__dataclass_fields__[key].type
            kwargs[key] = int(float(val)) if typ == "int" else float(val)
    return ModelConfig(**kwargs)


def default_config() -> ModelConfig:
    env = os.environ.get(SIEVE_LIMIT_ENV)
    if env is not None:
        return ModelConfig(sieve_limit=int(float(env)))
    return ModelConfig()


# ----------------------------------------------------------------------------
# Divisor sums

class DivisorCache:
    """sigma_w(n) for complex exponents, backed by a smallest-prime-factor sieve.

    sigma_w(p^a) is evaluated as the explicit geometric sum, which stays
    stable when p^w is close to 1.  Whole-range arrays of |sigma_{-2it}(m)|^2
    (the coefficient-sum workhorse) are memoized per t.
    """

    def __init__(self, limit: int = 1_000_000):
        self.limit = int(limit)
        self._spf = None
        self._cofactor = None
        self._ppow = None
        self._abs2_cache: dict[float, np.ndarray] = {}

    def _ensure_sieve(self):
        if self._spf is not None:
            return
        n = self.limit
        spf = np.arange(n + 1, dtype=np.int64)
        for p in range(2, int(math.isqrt(n)) + 1):
            if spf[p] == p:
                sl = spf[p * p:: p]
                np.minimum(sl, p, out=sl)
        self._spf = spf
        # ppow[m] = spf(m)^{v_spf(m)}, cofactor[m] = m / ppow[m]
        ppow = np.ones(n + 1, dtype=np.int64)
        spf_l = spf.tolist()
        ppow_l = ppow.tolist()
        for m in range(2, n + 1):
            p = spf_l[m]
            q = m // p
            ppow_l[m] = ppow_l[q] * p if spf_l[q] == p else p
        self._ppow = np.array(ppow_l, dtype=np.int64)
        self._cofactor = np.arange(n + 1, dtype=np.int64) // np.maximum(self._ppow, 1)

    @staticmethod
    def _sigma_prime_power(p: int, a: int, w: complex) -> complex:
        pw = cmath.exp(w * math.log(p))
        total = 1.0 + 0.0j
        term = 1.0 + 0.0j
        for _ in range(a):
            term *= pw
            total += term
        return total

    def factorize(self, n: int) -> list[tuple[int, int]]:
        if n < 1:
            raise DomainError("factorize requires n >= 1")
        out = []
        if n <= self.limit:
            self._ensure_sieve()
            spf = self._spf
            while n > 1:
                p = int(spf[n])
                a = 0
                while n % p == 0:
                    n //= p
                    a += 1
                out.append((p, a))
            return out
        d = 2
        while d * d <= n:
            if n % d == 0:
                a = 0
                while n % d == 0:
                    n //= d
                    a += 1
                out.append((d, a))
            d += 1 if d == 2 else 2
        if n > 1:
            out.append((n, 1))
        return out

    def sigma(self, w: complex, n: int) -> complex:
        """sigma_w(n) = sum_{d | n} d^w."""
        val = 1.0 + 0.0j
        for p, a in self.factorize(n):
            val *= self._sigma_prime_power(p, a, w)
        return val

    def sigma_naive(self, w: complex, n: int) -> complex:
        """Brute-force divisor enumeration; test oracle only."""
        total = 0.0 + 0.0j
        for d in range(1, n + 1):
            if n % d == 0:
                total += cmath.exp(w * math.log(d))
        return total

    def sigma_array(self, w: complex, m_max: int) -> np.ndarray:
        """sigma_w(m) for m = 0..m_max as one complex array (index 0 is 0)."""
        if m_max > self.limit:
            raise SieveLimitError(f"m_max = {m_max} beyond sieve limit {self.limit}")
        key = ("sig", round(complex(w).real, 12), round(complex(w).imag, 12))
        cached = self._abs2_cache.get(key)
        if cached is not None and cached.size >= m_max + 1:
            return cached[: m_max + 1]
        self._ensure_sieve()
        n = self.limit
        vals = np.ones(n + 1, dtype=np.complex128)
        vals[0] = 0.0
        ppow, cof, spf = self._ppow, self._cofactor, self._spf
        pp_cache: dict[int, complex] = {}
        for m in range(2, n + 1):
            pe = int(ppow[m])
            sig = pp_cache.get(pe)
            if sig is None:
                p = int(spf[m])
                a = round(math.log(pe) / math.log(p))
                sig = self._sigma_prime_power(p, a, complex(w))
                pp_cache[pe] = sig
            vals[m] = vals[cof[m]] * sig
        self._abs2_cache[key] = vals
        return vals[: m_max + 1]

    def sigma_abs2_array(self, t: float, m_max: int) -> np.ndarray:
        """|sigma_{-2it}(m)|^2 for m = 1..m_max (index 0 unused)."""
        if m_max > self.limit:
            raise SieveLimitError(f"m_max = {m_max} beyond sieve limit {self.limit}")
        key = float(t)
        cached = self._abs2_cache.get(key)
        if cached is not None and cached.size >= m_max + 1:
            return cached[: m_max + 1]
        self._ensure_sieve()
        n = self.limit
        w = -2j * t
        vals = np.ones(n + 1, dtype=np.complex128)
        vals[0] = 0.0
        ppow = self._ppow
        cof = self._cofactor
        spf = self._spf
        pp_cache: dict[int, complex] = {}
        vals_l = vals  # numpy fancy access in the loop below
        for m in range(2, n + 1):
            pe = int(ppow[m])
            sig = pp_cache.get(pe)
            if sig is None:
                p = int(spf[m])
                a = round(math.log(pe) / math.log(p))
                sig = self._sigma_prime_power(p, a, w)
                pp_cache[pe] = sig
            vals_l[m] = vals_l[cof[m]] * sig
        out = (vals.real ** 2 + vals.imag ** 2)
        self._abs2_cache[key] = out
        return out[: m_max + 1]


# ----------------------------------------------------------------------------
# Hyperbolic geometry helpers

def reduce_to_fundamental_domain(z: complex, max_iter: int = 10_000,
                                 tol: float = 1e-12) -> tuple[complex, int]:
    """Map z to the standard domain {|x| <= 1/2, |z| >= 1}; returns (z', word length)."""
    z = complex(z)
    if z.imag <= 0.0:
        raise DomainError("point must satisfy Im z > 0")
    word = 0
    for _ in range(max_iter):
        k = math.floor(z.real + 0.5)
        if k != 0:
            z = z - k
            word += 1
        n2 = z.real * z.real + z.imag * z.imag
        if n2 < 1.0 - tol:
            z = complex(-z.real / n2, z.imag / n2)
            word += 1
        else:
            if abs(z.real) <= 0.5 + tol:
                return z, word
    raise IterationLimitError(f"reduction did not terminate for z = {z}")


# ----------------------------------------------------------------------------
# Lattice model

class LatticeModel:
    """PSL(2, Z) with its single cusp at infinity (normalized width 1)."""

    def __init__(self, config: ModelConfig | None = None):
        self.config = config or default_config()
        self.kappa = 1
        self.cusp_height = 1.0  # the conjugating element is the identity
        self.divisors = DivisorCache(self.config.sieve_limit)
        self._covolume = None

    # -- geometry ------------------------------------------------------------

    def reduce(self, z: complex) -> tuple[complex, int]:
        return reduce_to_fundamental_domain(z, self.config.reduction_max_iter,
                                            self.config.boundary_tol)

    def in_fundamental_domain(self, z: complex) -> bool:
        tol = self.config.boundary_tol
        z = complex(z)
        return (z.imag > 0.0 and abs(z.real) <= 0.5 + tol
                and z.real ** 2 + z.imag ** 2 >= 1.0 - tol)

    def invariant_height(self, z: complex) -> float:
        """Largest imaginary part along the orbit; it is attained on the domain."""
        zred, _ = self.reduce(z)
        return zred.imag

    @property
    def covolume(self) -> float:
        if self._covolume is None:
            # integral over the domain of dx dy / y^2 collapses to
            # int dx / sqrt(1 - x^2) over [-1/2, 1/2]
            def f(xs):
                return 1.0 / np.sqrt(1.0 - np.asarray(xs) ** 2)
            val, _ = adaptive_quad_vec(f, -0.5, 0.5,
                                       QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13))
            self._covolume = float(val.real)
        return self._covolume

    # -- scattering ----------------------------------------------------------

    def phi(self, s: complex) -> complex:
        """Scattering function xi(2s-1)/xi(2s)."""
        s = complex(s)
        if abs(s - 1.0) < 1e-12:
            raise PoleError("scattering pole at s = 1")
        if abs(s - 0.5) < 1e-9:
            return -1.0 + 0.0j  # both completed zetas blow up; the ratio -> -1
        if s.real < 0.25:
            return 1.0 / self.phi(1.0 - s)
        return completed_zeta(2.0 * s - 1.0) / completed_zeta(2.0 * s)

    def phi_tilde_at_1(self, step: float = 1e-3) -> float:
        """Regular part of phi at s = 1, i.e. lim phi(s) - (1/mu)/(s-1).

        The symmetric average phi(1+h) + phi(1-h) cancels the pole exactly;
        Richardson extrapolation in h^2 then removes the curvature term.
        """
        def even_avg(h: float) -> float:
            return 0.5 * (self.phi(1.0 + h) + self.phi(1.0 - h)).real
        a1 = even_avg(step)
        a2 = even_avg(step / 2.0)
        return (4.0 * a2 - a1) / 3.0

    def phi_derivative(self, s: complex, step: float = 1e-4) -> complex:
        """phi'(s) by Richardson-extrapolated central differences."""
        def central(h: float) -> complex:
            return (self.phi(s + h) - self.phi(s - h)) / (2.0 * h)
        d1 = central(step)
        d2 = central(step / 2.0)
        return (4.0 * d2 - d1) / 3.0

    # -- Fourier coefficients --------------------------------------------------

    def psi(self, m: int, s: complex) -> complex:
        """Fourier coefficient psi_m(s) of the Eisenstein series."""
        if m == 0:
            raise DomainError("psi is defined for m != 0")
        s = complex(s)
        z2 = riemann_zeta(2.0 * s)
        if abs(z2) < 1e-8:
            raise DomainError(f"2s = {2 * s} is too close to a zeta zero")
        m_abs = abs(int(m))
        sig = self.divisors.sigma(1.0 - 2.0 * s, m_abs)
        return (2.0 * cmath.exp(s * math.log(math.pi) + (s - 0.5) * math.log(m_abs))
                * sig / (complex_gamma(s) * z2))

    def psi_abs2_critical(self, t0: float, m: int) -> float:
        """|psi_m(1/2 + i t0)|^2 via the cosh(pi t0) simplification."""
        m_abs = abs(int(m))
        sig2 = abs(self.divisors.sigma(-2j * t0, m_abs)) ** 2
        z = riemann_zeta(complex(1.0, 2.0 * t0))
        return 4.0 * math.cosh(math.pi * t0) * sig2 / abs(z) ** 2


def psl2z_model(config: ModelConfig | None = None) -> LatticeModel:
    """The PSL(2, Z) instance; kappa = 1, covolume pi/3."""
    return LatticeModel(config)


def fourier_coefficient(model: LatticeModel, m: int, s: complex) -> complex:
    return model.psi(m, s)


def invariant_height(model: LatticeModel, z: complex) -> float:
    return model.invariant_height(z)

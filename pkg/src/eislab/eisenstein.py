"""Numerical evaluation of Eisenstein series on the modular surface.

Weight zero series are evaluated from the Fourier expansion

    E(z, s) = y^s + phi(s) y^{1-s}
              + sum_{m != 0} psi_m(s) sqrt(y) K_{s-1/2}(2 pi |m| y) e(m x),

truncated where the e^{-2 pi m y} decay of the Bessel factor drops below the
tail policy.  :class:`EisensteinSeries` binds a lattice model and a fixed
``s`` and amortizes the per-``s`` work (coefficients and a spline of
K_{s-1/2}(x) e^x on a log grid) so the two-dimensional quadratures elsewhere
can evaluate tens of thousands of points cheaply; ``eval_E`` is the one-shot
functional wrapper.

``eval_E_direct`` sums the defining coprime-pair series for Re(s) > 1 and is
kept deliberately independent of the Fourier path - it is the cross-oracle.
Nonzero weights go through ``eval_E_weighted`` with Whittaker W factors; the
series is holomorphic at s = 1 for nonzero weight, where its constant term
degenerates to y - 1/(mu |upsilon|).
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConvergenceError, DomainError, PoleError
from .lattice import LatticeModel
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .specfun import (gamma_ratio_shift, k_bessel, k_bessel_grid,
                      whittaker_w_minus, whittaker_w_plus)

Y_MIN = 0.05          # below this height points are reduced first
POLE_GUARD = 1e-3     # weight-zero evaluation refused this close to s = 1


@dataclass(frozen=True)
class TailPolicy:
    target_tail: float = 1e-12
    hard_cap: int = 512

    def __post_init__(self):
        if self.target_tail <= 0.0:
            raise ValueError("target_tail must be positive")

    @property
    def bessel_cutoff(self) -> float:
        # e^{-X} below target_tail with decades of margin
        return 40.0 + abs(math.log(self.target_tail))

    def mode_count(self, y: float) -> int:
        return max(1, math.ceil(self.bessel_cutoff / (2.0 * math.pi * y)))


@dataclass(frozen=True)
class EisensteinParams:
    s: complex
    weight: int = 0
    truncation: TailPolicy = TailPolicy()


class EisensteinSeries:
    """Weight-zero series bound to one (model, s); vector-capable."""

    def __init__(self, model: LatticeModel, s: complex,
                 policy: TailPolicy = TailPolicy()):
        s = complex(s)
        if abs(s - 1.0) < POLE_GUARD * (1.0 - 1e-6):
            raise PoleError(f"E(z, s) refused within {POLE_GUARD} of the pole s = 1")
        self.model = model
        self.s = s
        self.policy = policy
        self.phi_s = model.phi(s)
        self._psi: list[complex] = [0j]  # 1-based
        self._spline = None
        self._lock = threading.Lock()  # lazy caches; evaluation itself is pure

    # -- coefficient/spline caches -------------------------------------------

    def _psi_upto(self, m_max: int) -> list[complex]:
        if len(self._psi) <= m_max:
            with self._lock:
                while len(self._psi) <= m_max:
                    self._psi.append(self.model.psi(len(self._psi), self.s))
        return self._psi

    def _ensure_spline(self):
        if self._spline is not None:
            return
        with self._lock:
            if self._spline is not None:
                return
            nu = self.s - 0.5
            x_lo = 2.0 * math.pi * Y_MIN * 0.9
            x_hi = self.policy.bessel_cutoff + 1.0
            n = int(3000 * max(1.0, (abs(nu.imag) + 1.0) / 3.0))
            u = np.linspace(math.log(x_lo), math.log(x_hi), n)
            x = np.exp(u)
            g = k_bessel_grid(nu, x, abs_tol=1e-15, rel_tol=1e-12) * np.exp(x)
            self._spline = CubicSpline(u, g)

    def bessel_scaled(self, x: np.ndarray) -> np.ndarray:
        """K_{s-1/2}(x) for an array of arguments, via the spline cache."""
        self._ensure_spline()
        return self._spline(np.log(x)) * np.exp(-x)

    # -- evaluation ------------------------------------------------------------

    def constant_term(self, y):
        y = np.asarray(y, dtype=float)
        return (np.exp(self.s * np.log(y))
                + self.phi_s * np.exp((1.0 - self.s) * np.log(y)))

    def eval_many(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        flat = zs.ravel().copy()
        low = flat.imag < Y_MIN
        if low.any():
            flat[low] = [self.model.reduce(z)[0] for z in flat[low]]
        x, y = flat.real, flat.imag
        out = self.constant_term(y).astype(complex)

        cutoff = self.policy.bessel_cutoff
        m_counts = np.maximum(1, np.ceil(cutoff / (2.0 * math.pi * y)).astype(int))
        m_max = int(m_counts.max())
        if m_max > self.policy.hard_cap:
            raise ConvergenceError(
                f"tail policy needs {m_max} Fourier modes > hard cap {self.policy.hard_cap}")
        psi = np.array(self._psi_upto(m_max)[1:])

        # flatten needed (point, mode) pairs; arguments beyond the cutoff
        # carry e^{-x} below the tail target and stay off the spline domain
        idx = np.repeat(np.arange(flat.size), m_counts)
        ms = np.concatenate([np.arange(1, c + 1) for c in m_counts]) if flat.size else \
            np.zeros(0, dtype=int)
        args = 2.0 * math.pi * ms * y[idx]
        keep = args <= cutoff
        idx, ms, args = idx[keep], ms[keep], args[keep]
        kv = self.bessel_scaled(args)
        terms = psi[ms - 1] * np.sqrt(y[idx]) * kv \
            * 2.0 * np.cos(2.0 * math.pi * ms * x[idx])
        np.add.at(out, idx, terms)
        return out.reshape(zs.shape)

    def __call__(self, z: complex) -> complex:
        return complex(self.eval_many(np.array([z]))[0])


def eval_E(model: LatticeModel, z: complex, s: complex,
           policy: TailPolicy = TailPolicy()) -> complex:
    """One-shot E(z, s); repeated evaluation should go through EisensteinSeries."""
    series = EisensteinSeries(model, s, policy)
    z = complex(z)
    if z.imag < Y_MIN:
        z, _ = model.reduce(z)
    x, y = z.real, z.imag
    val = complex(series.constant_term(y))
    for m in range(1, policy.mode_count(y) + 1):
        arg = 2.0 * math.pi * m * y
        if arg > policy.bessel_cutoff:
            break
        term = (model.psi(m, complex(s)) * math.sqrt(y)
                * k_bessel(complex(s) - 0.5, arg)
                * 2.0 * math.cos(2.0 * math.pi * m * x))
        val += term
    return val


def eval_E_direct(z: complex, s: complex, cutoff: int,
                  return_tail: bool = False):
    """Defining sum over coprime (c, d) with max(|c|, |d|) <= cutoff.

    Requires Re(s) > 1.1; one representative per +- pair.  The tail estimate
    is the comparison bound C^{2 - 2 Re(s)}.
    """
    s = complex(s)
    z = complex(z)
    if s.real <= 1.1:
        raise DomainError("direct summation requires Re(s) > 1.1")
    if z.imag <= 0.0:
        raise DomainError("requires Im z > 0")
    y = z.imag
    total = cmath.exp(s * math.log(y))  # (c, d) = (0, 1)
    cs, ds = [], []
    for c in range(1, cutoff + 1):
        for d in range(-cutoff, cutoff + 1):
            if math.gcd(c, abs(d)) == 1:
                cs.append(c)
                ds.append(d)
    if cs:
        w = np.array(cs) * z + np.array(ds)
        # y^s / |cz + d|^{2s}
        total += complex(np.sum(np.exp(s * (math.log(y) - np.log((w * np.conj(w)).real)))))
    tail = cutoff ** (2.0 - 2.0 * s.real)
    if return_tail:
        return total, tail
    return total


def eval_E_weighted(model: LatticeModel, z: complex, s: complex, upsilon: int,
                    policy: TailPolicy = TailPolicy(),
                    cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """Weighted series E(z, s, 2 upsilon) for Re(s) > 1/4.

    At s = 1 (allowed only when upsilon != 0) the constant term becomes
    y - 1/(mu |upsilon|); the m-sum keeps only sgn(m) = -sgn(upsilon) there
    because 1/Gamma(s - upsilon sgn m) vanishes on the other side.
    """
    s = complex(s)
    z = complex(z)
    if upsilon == 0:
        return eval_E(model, z, s, policy)
    if s.real <= 0.25:
        raise DomainError("weighted series requires Re(s) > 1/4")
    if z.imag < Y_MIN:
        z, _ = model.reduce(z)
    x, y = z.real, z.imag
    au = abs(upsilon)

    # constant term: delta y^s + i_{s,2u} phi(s) y^{1-s}, with the pole of phi
    # at 1 cancelled by the (1-s) factor of the intertwining coefficient
    q = gamma_ratio_shift(s, au)
    for j in range(2, au + 1):
        q *= (j - s)
    if abs(s - 1.0) < 1e-9:
        pole_part = complex(-1.0 / model.covolume)
    else:
        pole_part = (1.0 - s) * model.phi(s)
    ct = cmath.exp(s * math.log(y)) + q * pole_part * cmath.exp((1.0 - s) * math.log(y))

    total = ct
    consecutive_small = 0
    for m in range(1, policy.hard_cap + 1):
        r = 4.0 * math.pi * m * y
        contrib = 0.0 + 0.0j
        scale = 0.0
        for sgn in (+1, -1):
            g = upsilon * sgn
            # Gamma(s)/Gamma(s - g) as a stable product; identically zero at
            # s = 1 for g >= 1, which removes that side of the sum there
            if g > 0:
                gam = 1.0 + 0.0j
                for j in range(1, g + 1):
                    gam *= (s - j)
            else:
                gam = 1.0 + 0.0j
                for j in range(0, -g):
                    gam /= (s + j)
            if gam == 0.0:
                continue
            if g > 0:
                w_val = whittaker_w_minus(g, s, r, cfg)
            else:
                w_val = whittaker_w_plus(-g, s, r, cfg)
            term = ((-1.0) ** au * 0.5 * gam * model.psi(sgn * m, s)
                    / math.sqrt(m) * w_val * cmath.exp(2j * math.pi * sgn * m * x))
            contrib += term
            scale = max(scale, abs(term))
        total += contrib
        if scale < 0.25 * policy.target_tail:
            consecutive_small += 1
            if consecutive_small >= 2:
                return total
        else:
            consecutive_small = 0
    raise ConvergenceError(
        f"weighted series hit the hard cap {policy.hard_cap} before the tail target")


def truncated_E(model: LatticeModel, z: complex, s: complex, B: float,
                policy: TailPolicy = TailPolicy()) -> complex:
    """Truncated series: constant term removed wherever the orbit height > B."""
    if B < 1.0:
        raise DomainError("truncation height must be >= 1")
    zred, _ = model.reduce(complex(z))
    val = eval_E(model, zred, s, policy)
    if zred.imag > B:
        s = complex(s)
        y = zred.imag
        val -= cmath.exp(s * math.log(y)) + model.phi(s) * cmath.exp((1 - s) * math.log(y))
    return val


def laplacian_residual(model: LatticeModel, z: complex, s: complex,
                       h: float = 1e-3) -> float:
    """|y^2 (d_xx + d_yy) E + s(1-s) E| by central differences."""
    if h > 1e-3:
        raise DomainError("step must satisfy h <= 1e-3")
    s = complex(s)
    series = EisensteinSeries(model, s)
    z = complex(z)
    pts = np.array([z, z + h, z - h, z + 1j * h, z - 1j * h])
    f0, fxp, fxm, fyp, fym = series.eval_many(pts)
    lap = (fxp + fxm + fyp + fym - 4.0 * f0) / (h * h)
    return abs(z.imag ** 2 * lap + s * (1.0 - s) * f0)

"""Principal series in the compact picture and analytic-continuation probes.

Vectors live on the rotation group as pi-periodic functions with Fourier
coefficients a_{2u}; the group acts through the Iwasawa height, and for the
basis vector e_0 the whole action reduces to the quadratic form

    v_g(theta) = (a^2+b^2) sin^2 t + (ac+bd) sin 2t + (c^2+d^2) cos^2 t,

via [pi^s(g) e_0](k_theta) = v_g(theta)^{-s}.  The action extends off the
real group to the complex domain on which Re v_g stays positive; the
boundary family

    g_eps = diag(e^{i(pi/4 - eps)}, e^{-i(pi/4 - eps)}),   Re v = sin 2 eps,

is the canonical probe: as eps -> 0 its vectors sharpen, the L2 norm of
pi^{1/2+it}(g_eps) e_0 grows like exp((pi - O(eps)) |t|) (the engine behind
the triple-product second-moment bound) while its Sobolev norms grow only
like eps^{-beta}.  ``norm_growth_probe`` and ``sobolev_growth_probe``
measure both exponents; ``psi_tensor_basis`` is the weighted-Eisenstein
tensor combination whose boundedness feeds the same argument.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .eisenstein import TailPolicy, eval_E_weighted
from .errors import ConvergenceError, DomainError
from .lattice import LatticeModel
from .quadrature import QuadratureConfig, adaptive_quad_vec
from .renorm import DELTA_POLE
from .specfun import intertwining_coeff

__all__ = [
    "KVector", "GroupElementU", "g_epsilon", "v_g", "pi_g_e0",
    "intertwining_coeff", "sobolev_norm", "norm_growth_probe",
    "sobolev_growth_probe", "psi_tensor_basis",
    "NormGrowthReport", "SobolevGrowthReport",
]


# ----------------------------------------------------------------------------
# K-vectors

@dataclass
class KVector:
    """pi-periodic function on K, stored as Fourier coefficients a_{2u}."""

    coeffs: dict[int, complex]

    @classmethod
    def basis(cls, upsilon: int) -> "KVector":
        return cls({int(upsilon): 1.0 + 0.0j})

    @classmethod
    def from_samples(cls, values: np.ndarray, tail_tol: float = 1e-10) -> "KVector":
        """Fourier coefficients from samples at theta_j = pi j / N.

        Raises when the top decade of modes still carries more than
        ``tail_tol`` of the energy (the grid does not resolve the vector).
        """
        values = np.asarray(values, dtype=complex)
        n = values.size
        spec = np.fft.fft(values) / n
        freqs = np.fft.fftfreq(n, d=1.0 / n).astype(int)
        energy = float(np.sum(np.abs(spec) ** 2))
        top = np.abs(freqs) >= 0.45 * n
        if energy > 0.0 and float(np.sum(np.abs(spec[top]) ** 2)) > tail_tol * energy:
            raise ConvergenceError("sample grid does not resolve the spectrum")
        cutoff = max(1e-18 * math.sqrt(energy), 1e-300)
        return cls({int(f): complex(c) for f, c in zip(freqs, spec) if abs(c) > cutoff})

    def values_on_grid(self, n: int) -> np.ndarray:
        thetas = np.pi * np.arange(n) / n
        out = np.zeros(n, dtype=complex)
        for u, c in self.coeffs.items():
            out += c * np.exp(2j * u * thetas)
        return out

    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values()))

    def norm_by_quadrature(self, n: int = 4096) -> float:
        vals = self.values_on_grid(n)
        return math.sqrt(float(np.mean(np.abs(vals) ** 2)))


def sobolev_norm(v: KVector, beta: float) -> float:
    """S_beta(v) = (sum (1 + |u|^beta)^2 |a_{2u}|^2)^{1/2}."""
    if beta < 0.0:
        raise DomainError("Sobolev order must be >= 0")
    total = 0.0
    for u, c in v.coeffs.items():
        total += (1.0 + abs(u) ** beta) ** 2 * abs(c) ** 2
    return math.sqrt(total)


# ----------------------------------------------------------------------------
# The complex domain and the group action on e_0

@dataclass(frozen=True)
class GroupElementU:
    """Element of the complexified domain; validated via min Re v_g > 0."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-10:
            raise DomainError(f"determinant must be 1, got {det}")
        thetas = np.linspace(0.0, math.pi, 721)
        vals = v_g(self, thetas)
        # relative floor so that exactly-boundary elements (Re v = 0 up to
        # rounding) are rejected
        if float(np.min(vals.real)) <= 1e-12 * max(1.0, float(np.max(np.abs(vals)))):
            raise DomainError("Re v_g <= 0 somewhere: element outside the domain")


def v_g(g: GroupElementU, theta) -> complex | np.ndarray:
    th = np.asarray(theta, dtype=float)
    st, ct = np.sin(th), np.cos(th)
    s2 = np.sin(2.0 * th)
    out = ((g.a ** 2 + g.b ** 2) * st * st + (g.a * g.c + g.b * g.d) * s2
           + (g.c ** 2 + g.d ** 2) * ct * ct)
    return complex(out) if out.shape == () else out


def g_epsilon(eps: float) -> GroupElementU:
    if not 0.0 < eps < 0.2:
        raise DomainError("probe element requires 0 < eps < 1/5")
    phase = cmath.exp(1j * (math.pi / 4.0 - eps))
    return GroupElementU(phase, 0.0, 0.0, 1.0 / phase)


def pi_g_e0(s: complex, g: GroupElementU, q: int = 8,
            tail_tol: float = 1e-10) -> KVector:
    """pi^s(g) e_0 = v_g^{-s} as a K-vector; the grid doubles until resolved."""
    s = complex(s)
    n = 2 ** q
    while n <= 2 ** 18:
        thetas = np.pi * np.arange(n) / n
        vals = np.exp(-s * np.log(v_g(g, thetas)))
        try:
            return KVector.from_samples(vals, tail_tol)
        except ConvergenceError:
            n *= 2
    raise ConvergenceError("v_g^{-s} not spectrally resolved at 2^18 samples")


# ----------------------------------------------------------------------------
# Growth probes

@dataclass
class NormGrowthReport:
    eps: float
    ts: np.ndarray
    norms_sq: np.ndarray
    slope: float
    intercept: float


def norm_sq_pi_g_eps(eps: float, t: float,
                     cfg: QuadratureConfig = QuadratureConfig(abs_tol=1e-10, rel_tol=1e-10)) -> float:
    """||pi^{1/2+it}(g_eps) e_0||^2 = (1/pi) int_0^pi |v|^{-1} e^{2 t arg v} dtheta."""
    g = g_epsilon(eps)

    def f(th):
        v = v_g(g, np.asarray(th))
        return np.exp(-np.log(np.abs(v)) + 2.0 * t * np.angle(v))

    # the integrand peaks at theta = pi/2 with width ~ 1/sqrt(t eps)
    edges = np.unique(np.concatenate([
        np.linspace(0.0, math.pi, 33),
        math.pi / 2.0 + np.linspace(-0.2, 0.2, 41),
    ]))
    val, _ = adaptive_quad_vec(f, 0.0, math.pi, cfg, initial_edges=edges)
    return float(val.real) / math.pi


def norm_growth_probe(eps: float, t_grid=None) -> NormGrowthReport:
    """Fit log ||pi^{1/2+it}(g_eps) e_0||^2 against t; slope in [pi-12eps, pi]."""
    if t_grid is None:
        t_grid = np.linspace(1.0, 25.0, 13)
    ts = np.asarray(t_grid, dtype=float)
    norms = np.array([norm_sq_pi_g_eps(eps, float(t)) for t in ts])
    slope, intercept = np.polyfit(ts, np.log(norms), 1)
    return NormGrowthReport(eps=eps, ts=ts, norms_sq=norms,
                            slope=float(slope), intercept=float(intercept))


@dataclass
class SobolevGrowthReport:
    beta: float
    t: float
    eps_grid: np.ndarray
    sobolev: np.ndarray
    scaled_max: float
    scaled_min: float
    fitted_slope: float


def sobolev_growth_probe(beta: float, t: float, eps_grid=None) -> SobolevGrowthReport:
    """S_beta(pi^{1/2+it}(g_eps) e_0) across eps; expected ~ eps^{-beta}."""
    if not 0.0 <= beta <= 2.0:
        raise DomainError("probe supports beta in [0, 2]")
    if eps_grid is None:
        eps_grid = np.array([0.1, 0.05, 0.025, 0.0125])
    eps_grid = np.asarray(eps_grid, dtype=float)
    vals = np.empty(eps_grid.size)
    for i, eps in enumerate(eps_grid):
        vec = pi_g_e0(complex(0.5, t), g_epsilon(float(eps)))
        vals[i] = sobolev_norm(vec, beta)
    scaled = vals * eps_grid ** beta
    slope = float(np.polyfit(np.log(eps_grid), np.log(vals), 1)[0])
    return SobolevGrowthReport(beta=beta, t=t, eps_grid=eps_grid, sobolev=vals,
                               scaled_max=float(scaled.max()),
                               scaled_min=float(scaled.min()),
                               fitted_slope=slope)


# ----------------------------------------------------------------------------
# Tensor-product combination on basis vectors

def psi_tensor_basis(model: LatticeModel, z: complex, theta: float,
                     r: complex, s: complex, upsilon: int, sigma: int,
                     policy: TailPolicy = TailPolicy()) -> complex:
    """The square-integrable tensor combination on e_{2 upsilon} (x) e_{2 sigma}.

    e_{2(u+s)}(k_theta) times the weighted-Eisenstein analogue of the
    pole-cancelling product; for upsilon + sigma = 0 the weight-zero poles
    reappear and the (r, s) cancellation-line guard applies.
    """
    r, s = complex(r), complex(s)
    w_tot = upsilon + sigma
    if w_tot == 0 and min(abs(r - s), abs(r + s - 1.0)) < DELTA_POLE:
        raise DomainError(
            "upsilon + sigma = 0 reinstates the weight-zero poles: "
            f"need (r, s) at least {DELTA_POLE} from s = r, s = 1 - r")
    i_r = intertwining_coeff(r, upsilon)
    i_s = intertwining_coeff(s, sigma)
    phi_r, phi_s = model.phi(r), model.phi(s)
    combo = (eval_E_weighted(model, z, r, upsilon, policy)
             * eval_E_weighted(model, z, s, sigma, policy)
             - eval_E_weighted(model, z, r + s, w_tot, policy)
             - phi_s * i_s * eval_E_weighted(model, z, r + 1.0 - s, w_tot, policy)
             - phi_r * i_r * eval_E_weighted(model, z, 1.0 - r + s, w_tot, policy)
             - i_r * i_s * phi_r * phi_s
             * eval_E_weighted(model, z, 2.0 - r - s, w_tot, policy))
    return cmath.exp(2j * w_tot * theta) * combo

"""Additive terms of the trace formula and the assembled relative heat trace.

Geometric side: identity term (area times the hyperbolic plane heat kernel
on the diagonal), hyperbolic term (sum over closed geodesics), parabolic
term P(t), and the cusp cut-height correction.  The synthetic scattering
model supplies the spectral-side counterpart through its resonance set.

The central cross-check of this module is the identity between the
scattering integral and its closed-form resonance sum
(:func:`scattering_integral` vs :func:`scattering_erfc_sum`).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import DomainError, PoleError
from .specfun import QuadratureSpec

__all__ = [
    "ScatteringModel", "EigenvalueList",
    "identity_term", "hyperbolic_trace",
    "parabolic_p", "parabolic_p_asymptotic",
    "phi_log_deriv", "scattering_integral", "scattering_erfc_sum",
    "relative_heat_trace", "spectral_relative_trace",
    "model_to_json", "model_from_json",
]

_SQRT_PI = math.sqrt(math.pi)
_EULER_GAMMA = 0.5772156649015329

# Small-t expansion of P(t) = int e^{-t(1/4+r^2)} Re psi(1+ir) dr, pinned
# against high-precision evaluation of the defining integral (regression
# tests hold the fits).  Half-integer ladder with log factors:
#   P(t) ~ PARA_A_LOG * log(t)/sqrt(t) + PARA_A_CONST/sqrt(t) + PARA_C0
#          + PARA_C_SQRTLOG * sqrt(t) log(t) + PARA_C_SQRT * sqrt(t)
#          + PARA_C_LIN * t + O(t^{3/2} log t)
PARA_A_LOG = -_SQRT_PI / 2.0
PARA_A_CONST = -_SQRT_PI / 2.0 * (_EULER_GAMMA + 2.0 * math.log(2.0))
PARA_C0 = math.pi / 2.0
PARA_C_SQRTLOG = _SQRT_PI / 8.0
PARA_C_SQRT = _SQRT_PI / 8.0 * (_EULER_GAMMA + 2.0 * math.log(2.0) - 4.0 / 3.0)
PARA_C_LIN = -math.pi / 8.0


@dataclass(frozen=True)
class ScatteringModel:
    """Synthetic determinant of the scattering matrix.

    phi(s) = phi_half * q^{s-1/2} * prod_rho ((s-1+conj(rho))/(s-rho))^{n(rho)}

    resonances: list of (rho, order) with Re rho < 1/2, closed under
    conjugation with equal orders so phi is real on the real axis.
    """

    resonances: tuple = field(default_factory=tuple)
    q: float = 1.0
    phi_half: float = 1.0
    trace_c_half: float = 0.0

    def __post_init__(self):
        res = tuple((complex(r), int(n)) for r, n in self.resonances)
        object.__setattr__(self, "resonances", res)
        if self.q <= 0.0:
            raise DomainError("ScatteringModel.q must be positive")
        if self.phi_half not in (1.0, -1.0):
            raise DomainError("phi_half must be +1 or -1")
        bag = {}
        for rho, n in res:
            if n == 0:
                raise DomainError("resonance orders must be nonzero")
            if rho.real >= 0.5:
                raise DomainError("resonances must satisfy Re rho < 1/2")
            key = (round(rho.real, 9), round(abs(rho.imag), 9))
            bag[key] = bag.get(key, 0) + (n if rho.imag >= 0 else -n)
        if any(v != 0 for k, v in bag.items() if k[1] != 0):
            raise DomainError(
                "resonances must be closed under conjugation with "
                "equal orders")


@dataclass(frozen=True)
class EigenvalueList:
    """Discrete eigenvalues, sorted ascending, zeros allowed."""

    values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if any(v < 0 for v in vals):
            raise DomainError("eigenvalues must be >= 0")
        if list(vals) != sorted(vals):
            raise DomainError("eigenvalues must be sorted ascending")


_TIGHT = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12)


def identity_term(area, t):
    """(area/4pi) * int_R e^{-t(1/4+lam^2)} lam tanh(pi lam) dlam.

    The integrand is even; computed as twice the half-line integral.
    """
    if area <= 0.0 or t <= 0.0:
        raise DomainError("identity_term requires area > 0 and t > 0")

    def f(lam):
        return np.exp(-t * (0.25 + lam * lam)) * lam * np.tanh(math.pi * lam)

    val = specfun.integrate(f, 0.0, np.inf, spec=_TIGHT).value
    return area / (4.0 * math.pi) * 2.0 * val.real


def hyperbolic_trace(spectrum, t, pinched_only=False):
    """Geodesic sum e^{-t/4}/sqrt(16 pi t) * sum_k sum_gamma
    mult * l / sinh(k l / 2) * e^{-(k l)^2 / 4t}.

    The k-sum is cut where the Gaussian factor certifies a relative tail
    below 1e-18; for pinched entries with tiny l this pushes k far out,
    so terms are evaluated in the overflow-safe form
    2 l e^{-k l/2} / (1 - e^{-k l}).
    """
    if t <= 0.0:
        raise DomainError("hyperbolic_trace requires t > 0")
    total = 0.0
    for e in spectrum.entries:
        if pinched_only and not e.pinched:
            continue
        ell = e.length
        # (k_max * ell)^2 / 4t >= 43 log(10) certifies the Gaussian tail
        k_max = int(math.ceil(2.0 * math.sqrt(43.0 * math.log(10.0) * t) / ell)) + 1
        k = np.arange(1, k_max + 1)
        x = k * ell
        terms = 2.0 * ell * np.exp(-0.5 * x - x * x / (4.0 * t)) / (-np.expm1(-x))
        total += e.mult * float(np.sum(terms))
    return math.exp(-t / 4.0) / math.sqrt(16.0 * math.pi * t) * total


def parabolic_p(t):
    """P(t) = int_R e^{-t(1/4+r^2)} psi(1+ir) dr, real part.

    The symmetrized integrand 2 e^{-t(1/4+r^2)} Re psi(1+ir) on the
    half-line drops the odd imaginary part before quadrature.
    """
    if t <= 0.0:
        raise DomainError("parabolic_p requires t > 0")

    def f(r):
        return np.exp(-t * (0.25 + r * r)) * np.real(specfun.digamma(1.0 + 1j * r))

    return 2.0 * specfun.integrate(f, 0.0, np.inf, spec=_TIGHT).value.real


def parabolic_p_asymptotic(t, terms=5):
    """Truncated small-t expansion of P(t).

    terms counts ladder entries beyond the leading log(t)/sqrt(t) term:
    0 keeps the leading term alone, 5 keeps everything through O(t).
    """
    if not 0.0 < t <= 1.0:
        raise DomainError("parabolic_p_asymptotic limited to 0 < t <= 1")
    if not 0 <= terms <= 5:
        raise DomainError("terms must be in 0..5")
    rt = math.sqrt(t)
    lt = math.log(t)
    ladder = [
        PARA_A_CONST / rt,
        PARA_C0,
        PARA_C_SQRTLOG * rt * lt,
        PARA_C_SQRT * rt,
        PARA_C_LIN * t,
    ]
    return PARA_A_LOG * lt / rt + sum(ladder[:terms])


def phi_log_deriv(model, s):
    """phi'/phi(s) = log q + sum n(rho) [1/(s-1+conj(rho)) - 1/(s-rho)]."""
    s = complex(s)
    out = complex(math.log(model.q))
    for rho, n in model.resonances:
        zero = 1.0 - np.conj(rho)
        if abs(s - rho) < 1e-12 or abs(s - zero) < 1e-12:
            raise PoleError("phi'/phi evaluated at a pole or zero: %s" % s)
        out += n * (1.0 / (s - zero) - 1.0 / (s - rho))
    return out


def scattering_integral(model, t, spec=None):
    """-(1/4pi) int_R e^{-(1/4+lam^2)t} phi'/phi(1/2 + i lam) dlam.

    For a conjugation-closed model the integrand's real part is even and
    its imaginary part odd, so twice the half-line real part suffices.
    """
    if t <= 0.0:
        raise DomainError("scattering_integral requires t > 0")
    for rho, _ in model.resonances:
        if abs(rho.real - 0.5) < 1e-9:
            raise DomainError("resonance on the critical line")
    if spec is None:
        spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-11,
                              max_subdivisions=4000)

    log_q = math.log(model.q)

    def f(lam):
        s = 0.5 + 1j * lam
        val = np.full_like(lam, log_q, dtype=complex)
        for rho, n in model.resonances:
            val += n * (1.0 / (s - (1.0 - np.conj(rho))) - 1.0 / (s - rho))
        return np.exp(-(0.25 + lam * lam) * t) * np.real(val)

    half = specfun.integrate(f, 0.0, np.inf, spec=spec).value.real
    return -1.0 / (4.0 * math.pi) * 2.0 * half


def scattering_erfc_sum(model, t):
    """Resonance-sum form of the scattering integral:

    -log(q) e^{-t/4} / sqrt(16 pi t)
      + (1/4) sum_rho n(rho) { e^{-t rho(1-rho)} Erfc(sqrt(t)(1/2-rho))
                             + (conjugate term) }.

    Each summand is evaluated in the scaled form
    e^{-t/4} erfcx(sqrt(t)(1/2-rho)), which is exact (the two exponents
    differ by exactly t(1/2-rho)^2) and free of overflow for resonances
    far left of the critical line.
    """
    if t <= 0.0:
        raise DomainError("scattering_erfc_sum requires t > 0")
    rt = math.sqrt(t)
    damp = math.exp(-t / 4.0)
    out = -math.log(model.q) * damp / math.sqrt(16.0 * math.pi * t)
    acc = 0.0 + 0.0j
    for rho, n in model.resonances:
        acc += n * (specfun.erfcx(rt * (0.5 - rho))
                    + specfun.erfcx(rt * (0.5 - np.conj(rho))))
    return out + 0.25 * damp * acc.real


def relative_heat_trace(surface, spectrum, cusp_starts, t):
    """Geometric-side relative heat trace against the reference model
    operator with cut heights cusp_starts:

    hyperbolic + identity
      + m(-P(t)/pi - log(2) e^{-t/4}/sqrt(4 pi t) + e^{-t/4}/2)
      + e^{-t/4}/sqrt(4 pi t) * sum_j log a_j.
    """
    if t <= 0.0:
        raise DomainError("relative_heat_trace requires t > 0")
    if surface.cusps != len(cusp_starts.starts):
        raise DomainError("cusp count mismatch between surface and starts")
    m = surface.cusps
    damp = math.exp(-t / 4.0)
    gauss = damp / math.sqrt(4.0 * math.pi * t)
    out = hyperbolic_trace(spectrum, t)
    out += identity_term(surface.area, t)
    out += m * (-parabolic_p(t) / math.pi - math.log(2.0) * gauss + damp / 2.0)
    out += gauss * cusp_starts.log_sum
    return out


def spectral_relative_trace(eigs, model, surface, cusp_starts, t):
    """Spectral-side assembly (diagnostic, non-authoritative):

    sum_j e^{-lambda_j t} + scattering_integral
      + (1/4) e^{-t/4} (Tr C(1/2) + m) + e^{-t/4}/sqrt(4 pi t) sum log a_j.

    Only meaningful when eigs and model genuinely describe the same
    surface; this package treats both as synthetic inputs.
    """
    m = surface.cusps
    tc = model.trace_c_half
    if abs(tc - round(tc)) > 1e-9 or (round(tc) - m) % 2 != 0 or abs(tc) > m:
        raise DomainError(
            "Tr C(1/2) must be an integer of the same parity as the "
            "cusp count with |value| <= m")
    vals = np.asarray(eigs.values)
    out = float(np.sum(np.exp(-vals * t)))
    out += scattering_integral(model, t)
    out += 0.25 * math.exp(-t / 4.0) * (tc + m)
    out += math.exp(-t / 4.0) / math.sqrt(4.0 * math.pi * t) * cusp_starts.log_sum
    return out


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def model_to_json(model):
    return {
        "q": model.q,
        "phi_half": model.phi_half,
        "trace_c_half": model.trace_c_half,
        "resonances": [
            {"re": rho.real, "im": rho.imag, "order": n}
            for rho, n in model.resonances
        ],
    }


def model_from_json(obj):
    res = tuple(
        (complex(r["re"], r["im"]), int(r["order"]))
        for r in obj["resonances"]
    )
    return ScatteringModel(resonances=res, q=float(obj["q"]),
                           phi_half=float(obj["phi_half"]),
                           trace_c_half=float(obj["trace_c_half"]))

"""Zeta regularization of relative heat traces via the Mellin transform.

The relative zeta function is zeta(s) = (1/Gamma(s)) int_0^inf
(theta(t) - h) t^{s-1} dt.  Near s = 0 write 1/Gamma(s) = s(1 + gamma*s + ...)
and split the integral at t = 1.  On (0, 1] the declared small-t expansion
is subtracted termwise; a term c t^alpha (log t)^k integrates to
c (-1)^k k!/(s+alpha)^{k+1}, so its contribution to zeta'(0) is the value
at s=0 for alpha != 0, while the alpha = 0 constant c0 contributes
gamma*(c0 - h) through the 1/Gamma expansion.  On [1, t_max] the integral
of (theta - h)/t enters directly, and the tail beyond t_max is estimated
from a fitted exponential C e^{-mu t}.

All Gamma-factor bookkeeping is done symbolically before any numerics;
only the expansion remainder and the mid-range integral are quadratures.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import trace_terms
from .errors import (
    AlphaCollisionError,
    DomainError,
    ExpansionMismatchError,
    OverflowRangeError,
    TailFitError,
    TruncationError,
)
from .specfun import QuadratureSpec, integrate
from .trace_terms import (
    PARA_A_CONST,
    PARA_A_LOG,
    PARA_C_SQRT,
    PARA_C_SQRTLOG,
)

__all__ = [
    "ExpansionDescriptor", "ZetaResult", "RelativeDeterminantResult",
    "mellin_zeta_prime0", "xi_prime0", "relative_determinant",
    "truncated_hyp_zeta_correction", "selberg_z_product",
    "zeta_result_to_json", "zeta_result_from_json",
    "surface_expansion",
]

_EULER_GAMMA = 0.5772156649015329
_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class ExpansionDescriptor:
    """Small-t expansion sum_j c_j t^{alpha_j} (log t)^{k_j} of a trace
    function, plus its large-t constant h (dimension of the kernel
    difference)."""

    terms: tuple
    h: float = 0.0

    def __post_init__(self):
        terms = tuple((float(a), int(k), float(c)) for a, k, c in self.terms)
        object.__setattr__(self, "terms", terms)
        seen = set()
        prev_alpha = -math.inf
        for a, k, c in terms:
            if k < 0:
                raise DomainError("log powers must be >= 0")
            if a == 0.0 and k > 0:
                raise DomainError(
                    "the alpha = 0 term may not carry a log factor")
            if (a, k) in seen:
                raise DomainError("duplicate (alpha, k) expansion term")
            if a < prev_alpha:
                raise DomainError("expansion exponents must be sorted")
            seen.add((a, k))
            prev_alpha = a

    def evaluate(self, t):
        """Sum of the declared terms at t (vectorized)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        lt = np.log(t)
        for a, k, c in self.terms:
            out += c * t ** a * lt ** k
        return out

    @property
    def constant_term(self):
        for a, k, c in self.terms:
            if a == 0.0:
                return c
        return 0.0


@dataclass(frozen=True)
class ZetaResult:
    zeta_prime_zero: float
    determinant: float
    small_t_error: float
    large_t_error: float

    def __post_init__(self):
        if self.small_t_error < 0 or self.large_t_error < 0:
            raise DomainError("error estimates must be >= 0")
        expected = math.exp(-self.zeta_prime_zero)
        if not math.isfinite(expected) or expected <= 0:
            raise OverflowRangeError("determinant not representable")
        if abs(self.determinant - expected) > 1e-12 * expected:
            raise DomainError("determinant must equal exp(-zeta_prime_zero)")

    @classmethod
    def from_zeta_prime(cls, zp, small_err, large_err):
        return cls(zp, math.exp(-zp), small_err, large_err)


@dataclass(frozen=True)
class RelativeDeterminantResult:
    zeta: ZetaResult
    det_hyp: float


def _theta_vectorized(theta):
    def f(t):
        t = np.asarray(t, dtype=float)
        try:
            y = np.asarray(theta(t), dtype=float)
            if y.shape == t.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.array([theta(float(ti)) for ti in np.atleast_1d(t)])
    return f


def _tail_estimate(theta_v, h, t_max, min_decay, n_points=8):
    """Fit C e^{-mu t} on the last decade and integrate the tail at s=0.

    Returns (tail_value, tail_error).  A tail already below the noise
    floor contributes zero.
    """
    t_lo = max(1.0, t_max / 10.0)
    ts = np.geomspace(t_lo, t_max, n_points)
    ys = theta_v(ts) - h
    ay = np.abs(ys)
    if np.max(ay) < 1e-280:
        return 0.0, 0.0
    if np.min(ay) < 1e-290 or len(set(np.sign(ys[ay > 0]))) > 1:
        # sign changes or underflow inside the window: bound by the
        # largest sample decaying at min_decay
        bound = float(np.max(ay)) * math.exp(-min_decay * (t_max - ts[0]))
        return 0.0, bound
    logy = np.log(ay)
    slope, intercept = np.polyfit(ts, logy, 1)
    mu = -slope
    if mu <= min_decay:
        raise TailFitError(
            "fitted large-t decay mu=%.4g is not above the required "
            "threshold %.4g" % (mu, min_decay), fitted_mu=mu)
    resid = float(np.max(np.abs(logy - (slope * ts + intercept))))
    c = math.copysign(math.exp(intercept), ys[0])
    # int_{t_max}^inf e^{-mu t}/t dt, computed by quadrature
    e1 = integrate(lambda u: np.exp(-mu * u) / u, t_max, np.inf,
                   spec=QuadratureSpec(abs_tol=1e-16, rel_tol=1e-10),
                   transform="de").value.real
    tail = c * e1
    return tail, abs(tail) * max(resid, 0.05)


def mellin_zeta_prime0(theta, expansion, t_max, quad_spec=None,
                       t_lo=0.0, min_decay=0.2):
    """zeta'(0) and determinant exp(-zeta'(0)) of a trace function.

    theta: callable t -> Tr(relative heat operator), scalar or vectorized.
    expansion: declared small-t behavior of theta plus the constant h.
    t_max: end of the numerically trusted window (>= 1).
    t_lo: optional positive cut below which the expansion remainder is
    not evaluated numerically (used when theta itself is a quadrature
    whose absolute noise is amplified by cancellation as t -> 0); the
    dropped piece is bounded from the local power of the remainder and
    charged to small_t_error.
    min_decay: lower bound demanded of the fitted tail decay rate.
    """
    if t_max < 1.0:
        raise DomainError("t_max must be >= 1")
    if not 0.0 <= t_lo < 1.0:
        raise DomainError("t_lo must lie in [0, 1)")
    if quad_spec is None:
        quad_spec = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10,
                                   max_subdivisions=4000)
    theta_v = _theta_vectorized(theta)
    h = expansion.h

    # analytic Mellin images of the declared terms at s = 0
    analytic = _EULER_GAMMA * (expansion.constant_term - h)
    for a, k, c in expansion.terms:
        if a != 0.0:
            analytic += c * (-1.0) ** k * math.factorial(k) / a ** (k + 1)

    def remainder(t):
        return theta_v(t) - expansion.evaluate(t)

    # remainder decay check: the subtracted theta must vanish with a
    # positive local power as t -> 0
    probe_hi = 1e-2
    probe_lo = max(1e-3, 2.0 * t_lo) if t_lo > 0 else 1e-3
    r_hi = float(remainder(np.array([probe_hi]))[0])
    r_lo = float(remainder(np.array([probe_lo]))[0])
    scale = 1.0 + abs(float(theta_v(np.array([1.0]))[0]))
    if abs(r_lo) > 1e-9 * scale:
        p_hat = (math.log(abs(r_hi) / abs(r_lo))
                 / math.log(probe_hi / probe_lo)) if r_hi != 0 else -1.0
        if p_hat <= 0.05:
            raise ExpansionMismatchError(
                "expansion remainder does not vanish towards t=0 "
                "(local power %.3f)" % p_hat)

    # small-t remainder integral int_{t_lo}^1 R(t)/t dt with t = u^2
    u_lo = math.sqrt(t_lo)

    def small_integrand(u):
        return remainder(u * u) * 2.0 / u

    small = integrate(small_integrand, u_lo, 1.0, spec=quad_spec)
    small_err = small.error
    if t_lo > 0.0:
        # charge the dropped piece int_0^{t_lo} |R|/t ~ |R(t_lo)|/p
        r_cut = abs(float(remainder(np.array([t_lo]))[0]))
        small_err += r_cut / 0.5

    mid = integrate(lambda t: (theta_v(t) - h) / t, 1.0, t_max,
                    spec=quad_spec)

    tail, tail_err = _tail_estimate(theta_v, h, t_max, min_decay)

    zp = analytic + small.value.real + mid.value.real + tail
    return ZetaResult.from_zeta_prime(zp, small_err,
                                      mid.error + tail_err)


# ----------------------------------------------------------------------
# the auxiliary cusp constant
# ----------------------------------------------------------------------

def _xi_expansion():
    """Small-t expansion of -P(t)/pi + e^{-t/4}(1/2 - log2/sqrt(4 pi t)).

    Assembled from the P(t) ladder; all integer powers cancel exactly,
    leaving a pure half-integer ladder.
    """
    log2 = math.log(2.0)
    terms = (
        (-0.5, 1, -PARA_A_LOG / math.pi),
        (-0.5, 0, -PARA_A_CONST / math.pi - log2 / (2.0 * _SQRT_PI)),
        (0.5, 1, -PARA_C_SQRTLOG / math.pi),
        (0.5, 0, -PARA_C_SQRT / math.pi + log2 / (8.0 * _SQRT_PI)),
    )
    return ExpansionDescriptor(terms, h=0.0)


@lru_cache(maxsize=1)
def _xi_constant():
    def theta(t):
        t = np.asarray(t).item()
        return (-trace_terms.parabolic_p(t) / math.pi
                + math.exp(-t / 4.0)
                * (0.5 - math.log(2.0) / math.sqrt(4.0 * math.pi * t)))

    res = mellin_zeta_prime0(theta, _xi_expansion(), t_max=60.0,
                             t_lo=1e-4)
    return res.zeta_prime_zero


def xi_prime0(num_cusps):
    """m times the cusp constant c (computed once, then cached)."""
    if num_cusps < 0:
        raise DomainError("cusp count must be >= 0")
    if num_cusps == 0:
        return 0.0
    return num_cusps * _xi_constant()


# ----------------------------------------------------------------------
# relative determinant of a surface
# ----------------------------------------------------------------------

def surface_expansion(surface, cusp_starts):
    """Declared small-t expansion of the geometric-side relative heat
    trace.  Composed from the heat coefficients of the identity term,
    the P(t) ladder, and the explicit cusp terms; the geodesic sum is
    exponentially small and contributes nothing.
    """
    area = surface.area
    m = surface.cusps
    s_log = cusp_starts.log_sum
    g2l = math.log(2.0)
    terms = (
        (-1.0, 0, area / (4.0 * math.pi)),
        (-0.5, 1, -m * PARA_A_LOG / math.pi),
        (-0.5, 0, (-m * PARA_A_CONST / math.pi
                   + (s_log - m * g2l) / (2.0 * _SQRT_PI))),
        (0.0, 0, -area / (12.0 * math.pi)),
        (0.5, 1, -m * PARA_C_SQRTLOG / math.pi),
        (0.5, 0, (-m * PARA_C_SQRT / math.pi
                  - (s_log - m * g2l) / (8.0 * _SQRT_PI))),
        (1.0, 0, area / (60.0 * math.pi)),
    )
    return ExpansionDescriptor(terms, h=float(surface.components))


def max_t_for_cutoff(cutoff, eps_trunc):
    """Largest trusted t for a spectrum truncated at the given length."""
    return cutoff * cutoff / (4.0 * math.log(1.0 / eps_trunc))


def relative_determinant(surface, spectrum, cusp_starts, t_max,
                         eps_trunc=0.02, quad_spec=None):
    """Relative determinant of the surface Laplacian against the
    reference cusp model, through the Mellin engine.

    The truncated length spectrum only represents the heat trace up to
    t_max <= cutoff^2 / (4 log(1/eps_trunc)); beyond that the missing
    geodesics would contribute more than eps_trunc through the Gaussian
    factor, and the call is refused with the required cutoff.
    """
    bound = max_t_for_cutoff(spectrum.cutoff, eps_trunc)
    if t_max > bound:
        need = math.sqrt(4.0 * t_max * math.log(1.0 / eps_trunc))
        raise TruncationError(
            "t_max=%.3g exceeds the trusted window %.3g for cutoff %.3g; "
            "a cutoff of at least %.3g is required"
            % (t_max, bound, spectrum.cutoff, need),
            required_cutoff=need)

    def theta(t):
        return trace_terms.relative_heat_trace(
            surface, spectrum, cusp_starts, np.asarray(t).item())

    expansion = surface_expansion(surface, cusp_starts)
    zeta = mellin_zeta_prime0(theta, expansion, t_max,
                              quad_spec=quad_spec, t_lo=1e-3)
    det_hyp = zeta.determinant / math.exp(-xi_prime0(surface.cusps))
    return RelativeDeterminantResult(zeta=zeta, det_hyp=det_hyp)


def truncated_hyp_zeta_correction(small_eigs, alpha):
    """-sum of log(lambda) over listed eigenvalues 0 < lambda <= alpha."""
    if not 0.0 < alpha < 0.25:
        raise DomainError("alpha must lie in (0, 1/4)")
    out = 0.0
    for lam in small_eigs.values:
        if lam <= 0.0:
            raise DomainError("small eigenvalues must be positive")
        if abs(lam - alpha) < 1e-12:
            raise AlphaCollisionError(
                "alpha coincides with eigenvalue %r" % lam)
        if lam <= alpha:
            out -= math.log(lam)
    return out


def selberg_z_product(spectrum, s):
    """Z(s) = prod_gamma prod_{k>=0} (1 - e^{-(s+k) l})^mult for s > 1.

    Diagnostic only; the k-product is truncated once the factors are
    within machine distance of 1, with the dropped log-tail bounded by
    the geometric series e^{-(s+K+1)l}/(1-e^{-l}).
    """
    if s <= 1.0:
        raise DomainError("selberg_z_product requires s > 1")
    log_z = 0.0
    for e in spectrum.entries:
        ell = e.length
        k_max = max(0, int(math.ceil(42.0 / ell - s)))
        k = np.arange(0, k_max + 1)
        log_z += e.mult * float(np.sum(np.log1p(-np.exp(-(s + k) * ell))))
    return math.exp(log_z)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def zeta_result_to_json(res):
    return {
        "zeta_prime_zero": res.zeta_prime_zero,
        "determinant": res.determinant,
        "small_t_error": res.small_t_error,
        "large_t_error": res.large_t_error,
    }


def zeta_result_from_json(obj):
    return ZetaResult(
        float(obj["zeta_prime_zero"]), float(obj["determinant"]),
        float(obj["small_t_error"]), float(obj["large_t_error"]))

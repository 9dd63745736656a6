"""Numerical audit of the two-dimensional CLT argument behind the sqrt(pi)/2 limit.

Everything here works with the normalized pair
mu = (sum_j sin 2 pi k_j theta)/sqrt(n), nu = (sum_j cos 2 pi k_j theta)/sqrt(n),
whose joint law approaches a centered Gaussian with covariance diag(1/2, 1/2)
when the frequencies grow geometrically. The operations expose each
ingredient of that argument: the remainder w in
e^{ix} = (1+ix) e^{-x^2/2 + w(x)}, the product decomposition alpha/beta, the
lacunary orthogonality identity E[alpha] = 1, the explicit characteristic
function deviation majorant, the smoothing inequality, Gaussian radial
moments, and the final expectation chain audited with Monte Carlo error bars.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import ndtr

from . import frequency as fq
from . import rng
from .errors import DomainError
from .frequency import FrequencySet
from .norms import McConfig, _map_chunks
from .quadrature import QuadratureConfig, integrate_periodic

DEFAULT_PHI_AXIS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)

# The alpha / product-moment integrands are smooth trigonometric polynomials;
# 8 points per period of the top harmonic already integrates them to ~1e-13,
# so these quadratures default to the light rule instead of the global 32.
_SMOOTH_CFG = QuadratureConfig(points_per_period=8)


# ---------------------------------------------------------------------------
# The remainder w and the alpha/beta decomposition
# ---------------------------------------------------------------------------

def w_remainder(x: float) -> complex:
    """w(x) = x^2/2 + ix - Log(1+ix), so that e^{ix} = (1+ix) e^{-x^2/2 + w(x)}.

    Restricted to |x| < 1, where 1+ix stays in the right half plane and
    |w(x)| <= |x|^3.
    """
    if not abs(x) < 1.0:
        raise DomainError("w_remainder requires |x| < 1")
    return x * x / 2.0 + 1j * x - cmath.log(1.0 + 1j * x)


def _w_vec(x: np.ndarray) -> np.ndarray:
    return x * x / 2.0 + 1j * x - np.log(1.0 + 1j * x)


def alpha_at(fs: FrequencySet, s: float, t: float, thetas: np.ndarray) -> np.ndarray:
    """alpha(s,t)(theta) = prod_j (1 + is sin(2 pi k_j theta)/sqrt(n)) (1 + it cos(...)/sqrt(n))."""
    rt = math.sqrt(fs.n)
    out = np.ones(np.shape(thetas), dtype=np.complex128)
    for k in fs:
        ang = 2.0 * math.pi * fq._frac_mul(float(k), np.asarray(thetas, dtype=np.float64))
        out *= 1.0 + 1j * s * np.sin(ang) / rt
        out *= 1.0 + 1j * t * np.cos(ang) / rt
    return out


def beta_at(fs: FrequencySet, s: float, t: float, thetas: np.ndarray) -> np.ndarray:
    """beta(s,t)(theta): the exponent correction in the decomposition of e^{is mu + it nu}."""
    n = fs.n
    rt = math.sqrt(n)
    out = np.zeros(np.shape(thetas), dtype=np.complex128)
    for k in fs:
        ang = 2.0 * math.pi * fq._frac_mul(float(k), np.asarray(thetas, dtype=np.float64))
        out += (s * s - t * t) * np.cos(2.0 * ang) / (4.0 * n)
        out += _w_vec(s * np.sin(ang) / rt)
        out += _w_vec(t * np.cos(ang) / rt)
    return out


def product_moment(
    fs: FrequencySet,
    delta: Sequence[int],
    delta_hat: Sequence[int],
    s: float,
    t: float,
    cfg: QuadratureConfig | None = None,
) -> complex:
    """E[ prod_j (is sin 2 pi k_j theta)^{delta_j} (it cos 2 pi k_j theta)^{delta_hat_j} ].

    For geometric frequency sets every non-empty selection expands into
    sines and cosines of nonzero frequency, so the expectation vanishes.
    """
    if len(delta) != fs.n or len(delta_hat) != fs.n:
        raise DomainError("selector vectors must have length n")
    harmonic = sum(k * (d + dh) for k, d, dh in zip(fs.freqs, delta, delta_hat))
    if harmonic == 0:
        return complex(1.0)
    cfg = cfg or _SMOOTH_CFG

    def integrand(thetas: np.ndarray) -> np.ndarray:
        out = np.ones(thetas.shape, dtype=np.complex128)
        for k, d, dh in zip(fs.freqs, delta, delta_hat):
            if not (d or dh):
                continue
            ang = 2.0 * math.pi * fq._frac_mul(float(k), thetas)
            if d:
                out *= 1j * s * np.sin(ang)
            if dh:
                out *= 1j * t * np.cos(ang)
        return out

    return complex(integrate_periodic(integrand, harmonic, cfg))


def alpha_mean(
    fs: FrequencySet, s: float, t: float, cfg: QuadratureConfig | None = None
) -> complex:
    """Quadrature value of E[alpha(s,t)]; equals 1 for geometric frequency sets."""
    if s == 0.0 and t == 0.0:
        return complex(1.0)
    harmonic = 2 * sum(fs.freqs)  # alpha is a trig polynomial of this degree
    return complex(
        integrate_periodic(lambda th: alpha_at(fs, s, t, th), harmonic, cfg or _SMOOTH_CFG)
    )


# ---------------------------------------------------------------------------
# Explicit bounds and Gaussian targets
# ---------------------------------------------------------------------------

def deviation_bound(s: float, t: float, n: int) -> float:
    """Explicit majorant of |phi(s,t) - e^{-(s^2+t^2)/4}| for the geometric set of size n."""
    if n < 1:
        raise DomainError("n must be >= 1")
    ss = s * s + t * t
    return (
        math.expm1((abs(s) ** 3 + abs(t) ** 3) / math.sqrt(n))
        + math.expm1(ss / n**0.25)
        + math.exp(ss) / n
    )


@dataclass(frozen=True)
class GaussianSpec:
    """Centered 2-D normal with covariance diag(sigma2, sigma2)."""

    sigma2: float

    def __post_init__(self):
        if self.sigma2 < 0:
            raise DomainError("sigma2 must be >= 0")


def gaussian_abs_mean(g: GaussianSpec | float) -> float:
    """E|Z| = sqrt(pi sigma^2 / 2) for Z ~ N(0, diag(sigma^2, sigma^2))."""
    sigma2 = g.sigma2 if isinstance(g, GaussianSpec) else GaussianSpec(float(g)).sigma2
    return math.sqrt(math.pi * sigma2 / 2.0)


@dataclass(frozen=True)
class SmoothingInputs:
    t1: float
    t2: float
    delta1: float
    delta2: float
    x: float
    y: float
    integral_term: float  # value of the |p1 - p2| double integral, supplied upstream

    def __post_init__(self):
        for name in ("t1", "t2", "delta1", "delta2", "x", "y"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        if self.integral_term < 0:
            raise DomainError("integral_term must be >= 0")


def smoothing_bound(inp: SmoothingInputs) -> float:
    """Rectangle-probability bound for smoothed measures: integral term plus Gaussian tails."""
    xy = inp.x * inp.y
    tails = (
        inp.delta2 / inp.delta1 * math.exp(-(inp.t1 * inp.delta1) ** 2 / 2.0)
        + inp.delta1 / inp.delta2 * math.exp(-(inp.t2 * inp.delta2) ** 2 / 2.0)
    )
    return xy * inp.integral_term + xy * tails


# ---------------------------------------------------------------------------
# Sampling, empirical characteristic function, and the report
# ---------------------------------------------------------------------------

def sample_mu_nu(fs: FrequencySet, mc: McConfig) -> tuple[np.ndarray, np.ndarray]:
    """mc.samples iid draws of (mu, nu) from the deterministic theta stream."""
    rt = math.sqrt(fs.n)

    def one(item):
        chunk, count = item
        m = rng.chunk_uniform63(mc.seed, rng.STREAM_THETA, chunk, count)
        re, im = fq.sum_components_dyadic(fs, m)
        return im / rt, re / rt

    parts = _map_chunks(one, rng.chunk_layout(mc.samples, mc.chunk_size))
    mu = np.concatenate([p[0] for p in parts])
    nu = np.concatenate([p[1] for p in parts])
    return mu, nu


@dataclass(frozen=True)
class CharFnPoint:
    s: float
    t: float
    phi: complex
    std_error: float
    gaussian: float  # the limit value e^{-(s^2+t^2)/4}


def default_phi_grid() -> list[tuple[float, float]]:
    return [(s, t) for s in DEFAULT_PHI_AXIS for t in DEFAULT_PHI_AXIS]


def empirical_char_fn(
    fs: FrequencySet,
    grid: Sequence[tuple[float, float]],
    mc: McConfig,
    _samples: Optional[tuple[np.ndarray, np.ndarray]] = None,
) -> list[CharFnPoint]:
    """Monte Carlo estimates of phi(s,t) = E[e^{is mu + it nu}] on a grid of (s,t)."""
    mu, nu = _samples if _samples is not None else sample_mu_nu(fs, mc)
    count = mu.size
    points = []
    for s, t in grid:
        if s == 0.0 and t == 0.0:
            points.append(CharFnPoint(s, t, complex(1.0), 0.0, 1.0))
            continue
        z = np.exp(1j * (s * mu + t * nu))
        phi = complex(z.mean())
        se = math.sqrt((z.real.var(ddof=1) + z.imag.var(ddof=1)) / count)
        points.append(
            CharFnPoint(s, t, phi, se, math.exp(-(s * s + t * t) / 4.0))
        )
    return points


def ks_distance_to_normal(sample: np.ndarray, sigma2: float) -> float:
    """Exact one-sample Kolmogorov-Smirnov distance to N(0, sigma2)."""
    x = np.sort(np.asarray(sample, dtype=np.float64))
    cdf = ndtr(x / math.sqrt(sigma2))
    i = np.arange(1, x.size + 1, dtype=np.float64)
    return float(max((i / x.size - cdf).max(), (cdf - (i - 1) / x.size).max()))


@dataclass(frozen=True)
class ValueWithError:
    value: float
    std_error: float


@dataclass(frozen=True)
class FinalChainAudit:
    """Every expectation in the closing inequality chain, with Monte Carlo errors.

    X is the sampled (mu, nu) pair, Y the diag(1/2,1/2) Gaussian, Z the
    independent smoothing Gaussian with per-coordinate variance
    (log n)^{-1/8}; truncation cuts at radius (log n)^{1/4}.
    """

    truncation_radius: float
    sigma2_z: float
    e_abs_x: ValueWithError
    e_abs_xz: ValueWithError
    e_abs_xz_trunc: ValueWithError
    e_abs_yz: ValueWithError
    e_abs_yz_trunc: ValueWithError
    e_abs_z: ValueWithError

    def inequalities(self, sigmas: float = 4.0) -> list[dict]:
        """Each chain inequality as lhs >= rhs - sigmas * combined std error."""
        def check(name, lhs, rhs, *errs):
            slack = sigmas * math.sqrt(sum(e * e for e in errs))
            return {
                "name": name,
                "lhs": lhs,
                "rhs": rhs,
                "slack": slack,
                "ok": lhs >= rhs - slack,
            }

        a = self
        return [
            check(
                "E|X| >= E|X+Z| - E|Z|",
                a.e_abs_x.value,
                a.e_abs_xz.value - a.e_abs_z.value,
                a.e_abs_x.std_error, a.e_abs_xz.std_error, a.e_abs_z.std_error,
            ),
            check(
                "E|X+Z| >= E|X+Z| truncated",
                a.e_abs_xz.value,
                a.e_abs_xz_trunc.value,
                a.e_abs_xz.std_error, a.e_abs_xz_trunc.std_error,
            ),
            check(
                "E|Y+Z| >= E|Y+Z| truncated",
                a.e_abs_yz.value,
                a.e_abs_yz_trunc.value,
                a.e_abs_yz.std_error, a.e_abs_yz_trunc.std_error,
            ),
        ]


@dataclass(frozen=True)
class CltReport:
    n: int
    samples: int
    seed: int
    radial_mean: float       # estimate of E|X|, i.e. the normalized L1 norm
    radial_std_error: float
    ks_mu: float             # KS distance of the mu marginal to N(0, 1/2)
    ks_nu: float
    cov_hat: list            # 2x2 empirical covariance of (mu, nu)
    phi_grid: list = field(default_factory=list)
    chain_audit: Optional[FinalChainAudit] = None


def _mean_with_error(v: np.ndarray) -> ValueWithError:
    return ValueWithError(
        float(v.mean()), float(math.sqrt(v.var(ddof=1) / v.size)) if v.size > 1 else 0.0
    )


def _chain_audit(
    fs: FrequencySet, mc: McConfig, mu: np.ndarray, nu: np.ndarray
) -> FinalChainAudit:
    n = fs.n
    if n < 2:
        raise DomainError("the chain audit needs n >= 2 (log n must be positive)")
    sigma2_z = math.log(n) ** -0.125
    radius = math.log(n) ** 0.25
    layout = rng.chunk_layout(mu.size, mc.chunk_size)

    def draw(stream, sigma):
        parts = _map_chunks(
            lambda item: rng.chunk_gaussian_pairs(mc.seed, stream, item[0], item[1], sigma),
            layout,
        )
        return np.concatenate(parts, axis=0)

    z = draw(rng.STREAM_Z, math.sqrt(sigma2_z))
    y = draw(rng.STREAM_Y, math.sqrt(0.5))

    abs_x = np.hypot(mu, nu)
    abs_xz = np.hypot(mu + z[:, 0], nu + z[:, 1])
    abs_yz = np.hypot(y[:, 0] + z[:, 0], y[:, 1] + z[:, 1])
    abs_z = np.hypot(z[:, 0], z[:, 1])
    return FinalChainAudit(
        truncation_radius=radius,
        sigma2_z=sigma2_z,
        e_abs_x=_mean_with_error(abs_x),
        e_abs_xz=_mean_with_error(abs_xz),
        e_abs_xz_trunc=_mean_with_error(abs_xz * (abs_xz <= radius)),
        e_abs_yz=_mean_with_error(abs_yz),
        e_abs_yz_trunc=_mean_with_error(abs_yz * (abs_yz <= radius)),
        e_abs_z=_mean_with_error(abs_z),
    )


def clt_report(
    fs: FrequencySet,
    mc: McConfig,
    phi_grid: Optional[Sequence[tuple[float, float]]] = None,
    with_chain_audit: bool = False,
) -> CltReport:
    """Empirical (mu, nu) statistics against the Gaussian targets."""
    mu, nu = sample_mu_nu(fs, mc)
    radial = _mean_with_error(np.hypot(mu, nu))
    grid = list(phi_grid) if phi_grid is not None else default_phi_grid()
    points = empirical_char_fn(fs, grid, mc, _samples=(mu, nu))
    audit = _chain_audit(fs, mc, mu, nu) if with_chain_audit else None
    return CltReport(
        n=fs.n,
        samples=mu.size,
        seed=mc.seed,
        radial_mean=radial.value,
        radial_std_error=radial.std_error,
        ks_mu=ks_distance_to_normal(mu, 0.5),
        ks_nu=ks_distance_to_normal(nu, 0.5),
        cov_hat=np.cov(np.stack([mu, nu]), ddof=1).tolist(),
        phi_grid=points,
        chain_audit=audit,
    )

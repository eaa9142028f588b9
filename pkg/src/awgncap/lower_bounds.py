"""Capacity lower bounds: explicit constellations and the volume bound.

Mutual information of a finite constellation is computed from the Gaussian
mixture it induces at the channel output,

    I(X; Y) = h(Y) - (dim/2) log(2 pi e),    h(Y) = -E[log p_Y(Y)],

with a deterministic quadrature as the primary estimator (reproducible
output) and a seeded Monte Carlo estimator as a cross-check.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import radial
from .specfun import LN2

__all__ = [
    "Constellation", "ConstellationMoments", "MiEstimate",
    "ring_constellation", "a_n_constellation", "constellation_moments",
    "delta_for_alpha", "AnalyticalBound", "analytical_lower_bound",
    "constellation_mi", "constellation_mi_mc", "pam_lower_bound_1d",
    "volume_lower_bound",
]

LN_2PI = math.log(2.0 * math.pi)
LN_2PIE = math.log(2.0 * math.pi * math.e)


@dataclass(frozen=True)
class Constellation:
    """Finite input set in 1 or 2 real dimensions with probability weights."""

    points: np.ndarray   # shape (M,) for 1-D or (M, 2) for 2-D
    probs: np.ndarray    # shape (M,)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        pr = np.asarray(self.probs, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] not in (1, 2):
            raise ValueError(f"points must be 1-D or 2-D, got shape {pts.shape}")
        if pts.shape[0] < 1:
            raise ValueError("constellation needs at least one point")
        if pr.shape != (pts.shape[0],):
            raise ValueError("probs must be one weight per point")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > 1e-12:
            raise ValueError("probs must be nonnegative and sum to 1 (1e-12)")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", pr)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def peak_radius(self) -> float:
        return float(np.sqrt((self.points ** 2).sum(axis=1)).max())

    def average_power(self) -> float:
        return float((self.probs * (self.points ** 2).sum(axis=1)).sum())

    def to_table(self) -> str:
        """Plain-text table: one point per line, coordinates then probability."""
        out = io.StringIO()
        for row, p in zip(self.points, self.probs):
            coords = " ".join(format(c, ".17g") for c in row)
            out.write(f"{coords} {p:.17g}\n")
        return out.getvalue()

    @classmethod
    def from_table(cls, text: str) -> "Constellation":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        vals = np.array([[float(v) for v in r] for r in rows])
        return cls(points=vals[:, :-1], probs=vals[:, -1])

    @classmethod
    def equiprobable(cls, points) -> "Constellation":
        pts = np.asarray(points, dtype=float)
        m = pts.shape[0]
        return cls(points=pts, probs=np.full(m, 1.0 / m))


def ring_constellation(A: float) -> Constellation:
    """Equiprobable concentric-ring constellation with peak amplitude A.

    Rings sit at radii rho_k = A - 2k (one ring per 2-sigma step, always at
    least the outermost), each carrying the points rho_k e^{j m theta_k} for
    m = 0..floor(3 rho_k) with theta_k = 2 pi / (3 rho_k), i.e. roughly one
    point per 2-sigma arc.  The origin is included once A >= 2; closer in it
    would sit inside the packing distance of the outer ring and measurably
    weakens the constellation at low SNR.
    """
    if not A > 0:
        raise ValueError(f"amplitude must be positive, got {A}")
    pts: list[tuple[float, float]] = []
    if A >= 2.0:
        pts.append((0.0, 0.0))
    for k in range(max(int(math.floor(A / 2.0)), 1)):
        rho = A - 2.0 * k
        n_k = int(math.floor(3.0 * rho))
        theta = 2.0 * math.pi / (3.0 * rho)
        for m in range(n_k + 1):
            pts.append((rho * math.cos(m * theta), rho * math.sin(m * theta)))
    return Constellation.equiprobable(np.array(pts))


def a_n_constellation(N: int, Delta: float) -> Constellation:
    """N^2-point ring packing: origin plus 2n+1 points at radius (n+0.5)Delta.

    Ring n (n = 1..N-1) holds the points (n+0.5) Delta e^{j (l+0.5) theta_n},
    l = 0..2n, theta_n = 2 pi/(2n+1); the peak amplitude is (N-0.5) Delta.
    """
    if N < 2 or N != int(N):
        raise ValueError(f"N must be an integer >= 2, got {N}")
    if not Delta > 0:
        raise ValueError(f"Delta must be positive, got {Delta}")
    pts = [(0.0, 0.0)]
    for n in range(1, N):
        theta = 2.0 * math.pi / (2 * n + 1)
        r = (n + 0.5) * Delta
        for ell in range(2 * n + 1):
            a = (ell + 0.5) * theta
            pts.append((r * math.cos(a), r * math.sin(a)))
    return Constellation.equiprobable(np.array(pts))


@dataclass(frozen=True)
class ConstellationMoments:
    """Exact second-order moments of the N^2-point ring packing."""

    N: int
    Delta: float
    P_N: float    # average power E|X|^2
    rho_N: float  # correlation Re E[X* U] / P_N of the dithering offset

    def __post_init__(self):
        if not self.P_N > 0:
            raise ValueError("P_N must be positive")
        if not -1.0 < self.rho_N <= 0.0:
            raise ValueError(f"rho_N must lie in (-1, 0], got {self.rho_N}")


def _sinc(x):
    """sin(x)/x with sinc(0) = 1 (unnormalized convention)."""
    return np.sinc(np.asarray(x) / np.pi)


def constellation_moments(N: int, Delta: float) -> ConstellationMoments:
    """Closed-form P_N and rho_N for the N^2-point ring packing.

    P_N = (Delta^2/2) (N^2 - (1 + 1/N^2)/2), and rho_N P_N is the finite sum
    (Delta^2/N^2) sum_{n=1}^{N-1} (2n+1)[(n^2+n+1/3) sinc(pi/(2n+1))
    - (n^2+n+1/4)], both exact.
    """
    if N < 2 or N != int(N):
        raise ValueError(f"N must be an integer >= 2, got {N}")
    if not Delta > 0:
        raise ValueError(f"Delta must be positive, got {Delta}")
    P_N = Delta ** 2 / 2.0 * (N ** 2 - 0.5 * (1.0 + 1.0 / N ** 2))
    n = np.arange(1, N, dtype=float)
    rho_P = Delta ** 2 / N ** 2 * float(np.sum(
        (2 * n + 1) * ((n ** 2 + n + 1.0 / 3.0) * _sinc(np.pi / (2 * n + 1))
                       - (n ** 2 + n + 0.25))))
    return ConstellationMoments(N=N, Delta=Delta, P_N=P_N, rho_N=rho_P / P_N)


def delta_for_alpha(N: int, alpha: float) -> float:
    """Spacing Delta making N^2 = alpha (1 + P_N/2) hold exactly."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    P_N = 2.0 * (N ** 2 / alpha - 1.0)
    if not P_N > 0:
        raise ValueError(f"alpha={alpha} needs N^2 > alpha, got N={N}")
    return math.sqrt(2.0 * P_N / (N ** 2 - 0.5 * (1.0 + 1.0 / N ** 2)))


@dataclass(frozen=True)
class AnalyticalBound:
    """Analytical ring-packing rate guarantee and its context."""

    rate_bits: float
    snr: float            # peak SNR (N-0.5)^2 Delta^2 / 2
    c_tilde_bits: float   # average-power capacity log2(1 + P_N/2)
    gap_bits: float       # c_tilde - rate
    N: int
    Delta: float
    alpha: float


def analytical_lower_bound(N: int, Delta: float, alpha: float) -> AnalyticalBound:
    """Closed-form achievable rate of the N^2-point ring packing.

    Dithering the discrete input into the uniform disk of radius N Delta and
    bounding the conditional entropy with a Gaussian test density gives

        I(X; Y) >= log2(pi N^2 Delta^2)
                   - log2( pi e [ N^2 Delta^2 / 2
                                  - P_N^2 (1+rho_N)^2 / (P_N + 2) ] )

    evaluated here with the exact moments.  alpha must satisfy
    N^2 = alpha (1 + P_N/2); the rate is achieved under peak SNR
    (N-0.5)^2 Delta^2 / 2.  The gap to log2(1 + P_N/2) approaches
    0.45 + log2(1 + 1.82/alpha) for large N.
    """
    m = constellation_moments(N, Delta)
    alpha_implied = N ** 2 / (1.0 + m.P_N / 2.0)
    if abs(alpha - alpha_implied) > 1e-6 * alpha_implied:
        raise ValueError(
            f"alpha={alpha} inconsistent with (N, Delta): implied "
            f"alpha={alpha_implied:.9g}; use delta_for_alpha(N, alpha)")
    bracket = N ** 2 * Delta ** 2 / 2.0 - m.P_N ** 2 * (1.0 + m.rho_N) ** 2 / (m.P_N + 2.0)
    if bracket <= 0:
        raise ValueError(f"nonpositive log argument {bracket} (invalid moments)")
    rate = (math.log2(math.pi * N ** 2 * Delta ** 2)
            - math.log2(math.pi * math.e * bracket))
    c_tilde = math.log2(1.0 + m.P_N / 2.0)
    return AnalyticalBound(rate_bits=rate, snr=(N - 0.5) ** 2 * Delta ** 2 / 2.0,
                           c_tilde_bits=c_tilde, gap_bits=c_tilde - rate,
                           N=N, Delta=Delta, alpha=alpha)


@dataclass(frozen=True)
class MiEstimate:
    """Mutual information estimate in bits with an error measure."""

    bits: float
    err_bits: float   # quadrature: refinement disagreement; MC: std error
    method: str

    def __float__(self):
        return self.bits


def _log_mixture_1d(y, points, probs):
    d2 = np.square(y[:, None] - points[None, :])
    return special.logsumexp(-0.5 * d2, b=probs[None, :], axis=1) - 0.5 * LN_2PI


def _log_mixture_2d(Y, points, probs, chunk=50000):
    out = np.empty(Y.shape[0])
    p2 = (points ** 2).sum(axis=1)
    for i in range(0, Y.shape[0], chunk):
        Yb = Y[i:i + chunk]
        d2 = (Yb ** 2).sum(axis=1)[:, None] + p2[None, :] - 2.0 * Yb @ points.T
        out[i:i + chunk] = special.logsumexp(-0.5 * d2, b=probs[None, :],
                                             axis=1) - LN_2PI
    return out


def _entropy_quad_1d(points, probs, nodes_per_unit=24.0):
    pts = points[:, 0]
    lo, hi = pts.min() - 10.0, pts.max() + 10.0
    panels = int(math.ceil((hi - lo) * nodes_per_unit / 12.0))
    gl_x, gl_w = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    y = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    w = (half[:, None] * gl_w[None, :]).ravel()
    lp = _log_mixture_1d(y, pts, probs)
    p = np.exp(lp)
    return float(-(w * p * lp).sum())


def _entropy_quad_2d(points, probs, ang_nodes=None, rad_panel=0.4):
    # Truncating at radius peak+10 discards mixture mass below e^{-50};
    # the entropy-integrand tail it carries is far under 1e-20.
    peak = float(np.sqrt((points ** 2).sum(axis=1)).max())
    R = peak + 10.0
    if ang_nodes is None:
        outer = max(1, int((np.sqrt((points ** 2).sum(axis=1)) > peak - 1e-9).sum()))
        ang_nodes = max(256, 16 * outer, 8 * int(math.ceil(peak + 3.0)))
    panels = max(24, int(math.ceil(R / rad_panel)))
    gl_x, gl_w = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(0.0, R, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    r = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    rw = (half[:, None] * gl_w[None, :]).ravel()
    phi = np.arange(ang_nodes) * 2.0 * math.pi / ang_nodes
    cphi, sphi = np.cos(phi), np.sin(phi)
    total = 0.0
    block = max(1, 60000 // ang_nodes)
    for i in range(0, r.size, block):
        rr, ww = r[i:i + block], rw[i:i + block]
        Y = np.stack([np.outer(rr, cphi).ravel(),
                      np.outer(rr, sphi).ravel()], axis=1)
        W = np.repeat(ww * rr, ang_nodes) * (2.0 * math.pi / ang_nodes)
        lp = _log_mixture_2d(Y, points, probs)
        total += float(-(W * np.exp(lp) * lp).sum())
    return total


def constellation_mi(c: Constellation, dim: int | None = None,
                     refine_check: bool = True) -> MiEstimate:
    """Mutual information of a constellation over the unit-noise channel, bits.

    Deterministic quadrature of h(Y) (1-D: composite Gauss-Legendre panels
    over [-peak-10, peak+10]; 2-D: polar product rule, angular resolution
    scaling with the outer-ring point count), then
    I = h(Y) - (dim/2) log(2 pi e).  The error estimate is the disagreement
    under one resolution refinement (skipped when refine_check=False).
    """
    dim = dim if dim is not None else c.dim
    if dim != c.dim:
        raise ValueError(f"constellation is {c.dim}-D, requested dim={dim}")
    if dim == 1:
        h = _entropy_quad_1d(c.points, c.probs)
        err = abs(_entropy_quad_1d(c.points, c.probs, nodes_per_unit=34.0) - h) \
            if refine_check else 0.0
    else:
        h = _entropy_quad_2d(c.points, c.probs)
        if refine_check:
            outer = max(1, int((np.sqrt((c.points ** 2).sum(axis=1))
                                > c.peak_radius() - 1e-9).sum()))
            finer = max(384, 24 * outer, 12 * int(math.ceil(c.peak_radius() + 3.0)))
            err = abs(_entropy_quad_2d(c.points, c.probs, ang_nodes=finer,
                                       rad_panel=0.3) - h)
        else:
            err = 0.0
    nats = h - 0.5 * dim * LN_2PIE
    return MiEstimate(bits=max(nats, 0.0) / LN2, err_bits=err / LN2,
                      method="quadrature")


def constellation_mi_mc(c: Constellation, samples: int = 10 ** 6,
                        seed: int = 0) -> MiEstimate:
    """Monte Carlo cross-check of constellation_mi with reported std error."""
    rng = np.random.default_rng(seed)
    idx = rng.choice(c.size, size=samples, p=c.probs)
    if c.dim == 1:
        y = c.points[idx, 0] + rng.standard_normal(samples)
        neg_lp = np.empty(samples)
        for i in range(0, samples, 200000):
            neg_lp[i:i + 200000] = -_log_mixture_1d(y[i:i + 200000],
                                                    c.points[:, 0], c.probs)
    else:
        Y = c.points[idx] + rng.standard_normal((samples, 2))
        neg_lp = -_log_mixture_2d(Y, c.points, c.probs)
    h = float(neg_lp.mean())
    se = float(neg_lp.std(ddof=1) / math.sqrt(samples))
    nats = h - 0.5 * c.dim * LN_2PIE
    return MiEstimate(bits=max(nats, 0.0) / LN2, err_bits=se / LN2,
                      method="monte_carlo")


def pam_lower_bound_1d(P: float, return_detail: bool = False):
    """Best equiprobable PAM rate: max over M of I(X;Y), points on [-A, A].

    M ranges over 2..ceil(2+2A)+4 with A = sqrt(P); points are uniformly
    spaced including the endpoints.  This stands in for an optimized input
    distribution and stays within 0.1 bits of the upper-bound envelope.
    """
    if not P > 0:
        raise ValueError(f"snr must be positive, got {P}")
    A = math.sqrt(P)
    m_max = int(math.ceil(2.0 + 2.0 * A)) + 4
    best, best_m = 0.0, 1
    for m in range(2, m_max + 1):
        c = Constellation.equiprobable(np.linspace(-A, A, m)[:, None])
        mi = constellation_mi(c, refine_check=False).bits
        if mi > best:
            best, best_m = mi, m
    return (best, best_m) if return_detail else best


def volume_lower_bound(n: int, P: float) -> float:
    """Entropy-power-inequality bound (n/2) log2(1 + Vol(A)^{2/n}/(2 pi e))."""
    if not P > 0:
        raise ValueError(f"snr must be positive, got {P}")
    if n < 1 or n != int(n):
        raise ValueError(f"dimension must be an integer >= 1, got {n}")
    A = math.sqrt(n * P)
    v_pow = math.exp(2.0 / n * radial.log_vol_ball(n, A))
    return 0.5 * n * math.log1p(v_pow / (2.0 * math.pi * math.e)) / LN2

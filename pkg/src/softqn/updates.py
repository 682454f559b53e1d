"""Inverse-Hessian updates that stay positive definite under noisy curvature pairs.

The central operation is a penalized-secant rank-two update ("soft" quasi-Newton):
instead of forcing the secant equation H y = s exactly, its residual is penalized
with a weight ``alpha``.  The resulting closed-form update keeps the inverse-Hessian
approximation positive definite for every ``alpha > 0`` and every pair (s, y),
including pairs with s'y <= 0, and recovers the BFGS update as alpha -> inf when
s'y > 0.  Classical BFGS and secant-penalized BFGS (SP-BFGS) are provided as
baselines, together with cheap spectral-bound machinery for choosing alpha.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

__all__ = [
    "CurvatureError",
    "PdThresholdError",
    "SingularCoefficientError",
    "UpdateConsistencyError",
    "CurvaturePair",
    "EigenBounds",
    "SoftQnScratch",
    "SpBfgsCoefficients",
    "soft_qn_gamma",
    "soft_qn_update",
    "soft_qn_alpha_bound",
    "lambda_max_upper_bound",
    "bfgs_update",
    "sp_bfgs_coefficients",
    "sp_bfgs_update",
    "biased_direction",
    "is_positive_definite",
    "ConstantAlpha",
    "SpectrumBoundedAlpha",
    "ConstantBeta",
    "StepNormBeta",
    "CurvatureRelaxedBeta",
]


class CurvatureError(ValueError):
    """A BFGS update was asked for a pair with s'y at or below the curvature tolerance."""


class PdThresholdError(ValueError):
    """An SP-BFGS update was asked for a pair outside its positive-definiteness region."""


class SingularCoefficientError(ValueError):
    """SP-BFGS coefficient denominators are numerically singular."""


class UpdateConsistencyError(RuntimeError):
    """A closed-form update produced a matrix that failed its positive-definiteness self-check."""


class CurvaturePair(NamedTuple):
    """Step difference s = x+ - x and gradient difference y = g+ - g."""

    s: np.ndarray
    y: np.ndarray


class EigenBounds(NamedTuple):
    """Target spectrum interval [floor, cap] for the inverse-Hessian approximation."""

    floor: float
    cap: float


class SoftQnScratch(NamedTuple):
    """Intermediates of a soft QN update: the scaling gamma and the rank-one direction u."""

    gamma: float
    u: np.ndarray


class SpBfgsCoefficients(NamedTuple):
    pi: float
    omega: float


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def is_positive_definite(a: np.ndarray) -> bool:
    """Cholesky-based positive definiteness test (expects a symmetric matrix)."""
    try:
        np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return False
    return True


def _check_pair(h: np.ndarray, s: np.ndarray, y: np.ndarray) -> None:
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("H must be a square matrix")
    n = h.shape[0]
    if s.shape != (n,) or y.shape != (n,):
        raise ValueError("s and y must be vectors matching the dimension of H")
    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(s)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite entries in update inputs")


def soft_qn_gamma(alpha: float, y_h_y: float, s_t_y: float) -> float:
    """Positive-root scaling gamma = 1/2 + sqrt(1/4 + alpha*y'Hy + alpha^2*(s'y)^2).

    Always >= 1 on the admissible domain (alpha > 0, y'Hy >= 0).  Tiny negative
    y'Hy from rounding (down to -1e-12) is clamped to zero.
    """
    if alpha <= 0 or not math.isfinite(alpha):
        raise ValueError("alpha must be positive and finite")
    if y_h_y < -1e-12:
        raise ValueError("y'Hy < 0: H is not positive definite")
    y_h_y = max(y_h_y, 0.0)
    t = alpha * s_t_y
    return 0.5 + math.sqrt(0.25 + alpha * y_h_y + t * t)


def soft_qn_update(h, s, y, alpha):
    """Penalized-secant update of a positive definite inverse-Hessian approximation.

    Computes H' = H + alpha*ss' - (alpha/gamma^2)*vv' with v = Hy + alpha*(s'y)*s,
    expanded into cancellation-free rank-one terms so that the BFGS limit
    (alpha -> inf) is reached without loss of monotonicity in floating point.
    Well defined for every pair (s, y), including s = 0 or s'y <= 0.

    Returns ``(h_new, scratch)`` where ``scratch`` carries gamma and u = v/gamma.
    """
    _check_pair(h, s, y)
    hy = h @ y
    y_h_y = float(y @ hy)
    s_t_y = float(s @ y)
    gamma = soft_qn_gamma(alpha, y_h_y, s_t_y)
    g2 = gamma * gamma
    # alpha*ss' - (alpha/g2)*vv' regrouped; the ss' coefficient uses the identity
    # gamma^2 - (alpha*s'y)^2 = gamma + alpha*y'Hy, which avoids forming the
    # difference of two huge multiples of ss' at large alpha.
    c_hy = alpha / g2
    c_cross = alpha * (alpha * s_t_y) / g2
    c_ss = alpha * (gamma + alpha * max(y_h_y, 0.0)) / g2
    h_new = (
        h
        - c_hy * np.outer(hy, hy)
        - c_cross * (np.outer(hy, s) + np.outer(s, hy))
        + c_ss * np.outer(s, s)
    )
    h_new = _symmetrize(h_new)
    if not is_positive_definite(h_new):
        raise UpdateConsistencyError(
            "soft QN update lost positive definiteness; this points at a numerical "
            "problem in the inputs (H far from symmetric PD or wildly scaled data)"
        )
    u = (hy + (alpha * s_t_y) * s) / gamma
    return h_new, SoftQnScratch(gamma=gamma, u=u)


def soft_qn_alpha_bound(h, s, y, bounds: EigenBounds, lam_min: float, lam_max: float) -> float:
    """Largest penalty weight that provably keeps the updated spectrum inside bounds.

    Given current spectral estimates lam_min >= floor and lam_max <= cap, any
    alpha below min{(lam_min - floor)/(|s| + |Hy|)^2, (cap - lam_max)/|s|^2}
    keeps floor*I <= H' <= cap*I.  Returns 0.0 when the estimates already sit
    outside the bounds (caller clamps), and +inf when both denominators vanish
    (s = 0 and Hy = 0: the update cannot move the spectrum).
    """
    n_low = lam_min - bounds.floor
    n_high = bounds.cap - lam_max
    if n_low < 0.0 or n_high < 0.0:
        return 0.0
    hy = h @ y
    d_low = (float(np.linalg.norm(s)) + float(np.linalg.norm(hy))) ** 2
    d_high = float(s @ s)
    t_low = math.inf if d_low == 0.0 else n_low / d_low
    t_high = math.inf if d_high == 0.0 else n_high / d_high
    return min(t_low, t_high)


def lambda_max_upper_bound(a: np.ndarray) -> float:
    """Trace-based upper bound on the largest eigenvalue of a symmetric matrix.

    Uses m + sd*sqrt(n-1) with m = tr(A)/n and sd^2 = tr(A^2)/n - m^2, computable
    in O(n^2).  For diag(1, 2, 3) this gives 2 + sqrt(4/3) ~= 3.1547 >= 3.
    """
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    m = float(np.trace(a)) / n
    mean_sq = float(np.sum(a * a)) / n  # tr(A^2)/n for symmetric A
    var = max(mean_sq - m * m, 0.0)
    return m + math.sqrt(var * (n - 1))


def bfgs_update(h, s, y, curvature_tol: Optional[float] = None):
    """Classical BFGS update of the inverse-Hessian approximation.

    Requires s'y above ``curvature_tol`` (default 1e-12*|s|*|y|); raises
    CurvatureError otherwise, since the update would lose positive definiteness.
    """
    _check_pair(h, s, y)
    s_t_y = float(s @ y)
    if curvature_tol is None:
        curvature_tol = 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y))
    if s_t_y <= curvature_tol:
        raise CurvatureError(f"s'y = {s_t_y:.3e} is at or below tolerance {curvature_tol:.3e}")
    rho = 1.0 / s_t_y
    hy = h @ y
    y_h_y = float(y @ hy)
    h_new = (
        h
        - rho * (np.outer(s, hy) + np.outer(hy, s))
        + (rho * rho * y_h_y + rho) * np.outer(s, s)
    )
    return _symmetrize(h_new)


def sp_bfgs_coefficients(s_t_y: float, beta: float) -> SpBfgsCoefficients:
    """Penalty-weighted secant coefficients pi = 1/(s'y + 1/beta), omega = 1/(s'y + 2/beta)."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    d_pi = s_t_y + 1.0 / beta
    d_omega = s_t_y + 2.0 / beta
    if abs(d_pi) <= 1e-14 or abs(d_omega) <= 1e-14:
        raise SingularCoefficientError(
            f"coefficient denominators {d_pi:.3e}, {d_omega:.3e} too close to zero"
        )
    return SpBfgsCoefficients(pi=1.0 / d_pi, omega=1.0 / d_omega)


def sp_bfgs_update(h, s, y, beta):
    """Secant-penalized BFGS update.

    Positive definiteness is preserved iff s'y > -1/beta, so pairs at or below
    that threshold raise PdThresholdError.  beta -> inf recovers BFGS, beta -> 0
    leaves H unchanged.
    """
    _check_pair(h, s, y)
    if beta <= 0:
        raise ValueError("beta must be positive")
    s_t_y = float(s @ y)
    threshold = -1.0 / beta
    if s_t_y - threshold <= 1e-12 * (1.0 + abs(threshold)):
        raise PdThresholdError(
            f"s'y = {s_t_y:.3e} not above -1/beta = {threshold:.3e}; update would lose PD"
        )
    pi, omega = sp_bfgs_coefficients(s_t_y, beta)
    hy = h @ y
    y_h_y = float(y @ hy)
    c_ss = omega * omega * y_h_y + pi + (pi - omega) * omega * y_h_y
    h_new = h - omega * (np.outer(s, hy) + np.outer(hy, s)) + c_ss * np.outer(s, s)
    return _symmetrize(h_new)


def biased_direction(h, g, bias: float = 0.0):
    """Descent direction -(H + bias*I) g; bias > 0 floors the direction curvature."""
    d = h @ g
    if bias != 0.0:
        d = d + bias * g
    return -d


@dataclass(frozen=True)
class ConstantAlpha:
    """Fixed penalty weight for soft QN, with an optional direction bias."""

    alpha: float
    bias: float = 0.0

    def value(self, h, s, y) -> float:
        return self.alpha


@dataclass(frozen=True)
class SpectrumBoundedAlpha:
    """Penalty weight clamped so the inverse-Hessian spectrum stays inside bounds.

    The upper eigenvalue is estimated by the O(n^2) trace bound; the lower one by
    the running floor plus the direction bias (an exact lambda_min would cost a
    factorization per iteration).  The produced alpha is min(cap, bound) floored
    at ``alpha_floor`` so it stays strictly positive.
    """

    bounds: EigenBounds
    cap: float
    bias: float = 0.0
    alpha_floor: float = 1e-16

    def value(self, h, s, y) -> float:
        lam_max = lambda_max_upper_bound(h)
        lam_min = self.bounds.floor + self.bias
        bound = soft_qn_alpha_bound(h, s, y, self.bounds, lam_min, lam_max)
        return min(self.cap, max(bound, self.alpha_floor))


@dataclass(frozen=True)
class ConstantBeta:
    """Fixed penalty weight for SP-BFGS."""

    beta: float

    def value(self, s, y) -> float:
        return self.beta


@dataclass(frozen=True)
class StepNormBeta:
    """beta = coeff*|s| + floor; shrinks the penalty with the step length."""

    coeff: float
    floor: float = 1e-10

    def value(self, s, y) -> float:
        return self.coeff * float(np.linalg.norm(s)) + self.floor


@dataclass(frozen=True)
class CurvatureRelaxedBeta:
    """Fixed beta while s'y >= 0, relaxed to relax/(-s'y) on negative curvature.

    With 0 < relax < 1 the relaxed beta always satisfies s'y > -1/beta, so the
    SP-BFGS update stays applicable on every pair.
    """

    beta: float
    relax: float = 0.9

    def value(self, s, y) -> float:
        s_t_y = float(s @ y)
        if s_t_y < 0.0:
            return self.relax / (-s_t_y)
        return self.beta

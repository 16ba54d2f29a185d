"""
Conditional weak measurement of sigma_z on a single spin.

Reading the pointer at q1 applies the (unnormalized) operator
diag(psi(q1 - a), psi(q1 + a)) to the spin. Up to normalization this is
diag(1, f) with f = psi(q1 + a) / psi(q1 - a), so the polar angle moves
according to tan(theta_q / 2) = f tan(theta_p / 2) and the azimuth is kept.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pointer import LOG_F_CLAMP, WmConfig, f_ratio_flagged, log_f_ratio
from .spin_core import SpinState, direction_from_ket


@dataclass(frozen=True)
class WmOutcome:
    """A pointer reading `q1` and its f-ratio.

    `saturated` is nonzero when the f-ratio was clamped, i.e. the reading is
    deep in the projective limit (-1: f ~ 0, +1: f ~ inf).
    """

    q1: float
    f: float
    saturated: int = 0

    @classmethod
    def from_reading(cls, cfg: WmConfig, q1: float) -> WmOutcome:
        f, flag = f_ratio_flagged(cfg, q1)
        return cls(float(q1), f, flag)


def apply_f(prior: SpinState, f: float) -> SpinState:
    """Apply the normalized Kraus operator diag(1, f) with f > 0 to `prior`."""
    if not f > 0.0:
        raise ValueError(f"f-ratio must be positive, got {f!r}")
    a, b = prior.amp_plus, prior.amp_minus
    # scale by the larger factor so that f near the clamp neither overflows nor underflows to 0/0
    if f <= 1.0:
        a2, b2 = a, f * b
    else:
        a2, b2 = a / f, b
    if a2 == 0.0 and b2 == 0.0:
        # f underflowed relative to a vanishing amplitude; eigenstate fixed point
        return prior
    return SpinState.from_amplitudes(a2, b2)


def apply_wm(prior: SpinState, cfg: WmConfig, q1: float) -> SpinState:
    """Post-measurement spin state given the pointer was read at `q1`."""
    f, _ = f_ratio_flagged(cfg, q1)
    return apply_f(prior, f)


def _post_theta(theta_p, f):
    # 2 arctan(f tan(theta/2)) via atan2 to avoid tan(pi/2)
    theta_p = np.asarray(theta_p, dtype=float)
    half = 0.5 * theta_p
    out = 2.0 * np.arctan2(f * np.sin(half), np.cos(half))
    # cos(pi/2) is 6e-17, not 0; keep |-> an exact fixed point
    return np.where(theta_p == np.pi, np.pi, out)


def post_theta(prior_theta, cfg: WmConfig, q1):
    """Polar angle of the spin after the reading q1; vectorized over both arguments."""
    f = np.exp(np.clip(log_f_ratio(cfg, q1), -LOG_F_CLAMP, LOG_F_CLAMP))
    out = _post_theta(prior_theta, f)
    return out[()] if np.ndim(out) == 0 else out


def delta_theta(prior_theta, cfg: WmConfig, q1):
    """Rotation angle 2 arctan(f tan(theta_p / 2)) - theta_p, in radians.

    Negative values mean the spin turned toward +z. Both poles are fixed
    points, so the result is 0 at theta_p = 0 and theta_p = pi.
    """
    theta = np.asarray(prior_theta, dtype=float)
    if np.any((theta < 0.0) | (theta > np.pi)):
        raise ValueError("prior_theta must lie in [0, pi]")
    out = post_theta(theta, cfg, q1) - theta
    return out[()] if np.ndim(out) == 0 else out


def sample_outcomes(prior: SpinState, cfg: WmConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw `n` pointer readings for the spin `prior`.

    Each reading picks the +a branch with probability |amp_plus|^2 (else -a)
    and adds a Gaussian deviate of standard deviation `cfg.width`.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    p_plus = abs(prior.amp_plus) ** 2
    branch = np.where(rng.random(n) < p_plus, 1.0, -1.0)
    return cfg.coupling_a * branch + cfg.width * rng.standard_normal(n)


def sample_outcome(prior: SpinState, cfg: WmConfig, rng: np.random.Generator) -> WmOutcome:
    q1 = sample_outcomes(prior, cfg, rng, 1)[0]
    return WmOutcome.from_reading(cfg, q1)


def nm_limit_classify(outcome) -> int:
    """Projective verdict sign(q1) for a reading; valid when a / width >> 1. Ties go to +1."""
    q1 = outcome.q1 if isinstance(outcome, WmOutcome) else float(outcome)
    return 1 if q1 >= 0.0 else -1


def nm_limit_classify_many(q1) -> np.ndarray:
    return np.where(np.asarray(q1) >= 0.0, 1, -1)


def post_direction(prior: SpinState, cfg: WmConfig, q1: float):
    return direction_from_ket(apply_wm(prior, cfg, q1))

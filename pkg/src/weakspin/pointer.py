"""
Gaussian pointer of the weak measurement apparatus.

The pointer starts in a real, zero-mean Gaussian wavefunction of standard
deviation `width` (in |psi|^2). The interaction translates it by +a or -a
depending on the z-spin, so a reading q1 weights the |+> branch with
psi(q1 - a) and the |-> branch with psi(q1 + a).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# exp(+-700) is close to the largest/smallest representable doubles
LOG_F_CLAMP = 700.0

QUAD_PANELS = 16
QUAD_ORDER = 16
TAIL_WIDTHS = 12.0


@dataclass(frozen=True)
class WmConfig:
    """Coupling `coupling_a` (pointer shift per spin eigenstate) and pointer `width`."""

    coupling_a: float
    width: float

    def __post_init__(self):
        for name in ("coupling_a", "width"):
            v = float(getattr(self, name))
            if not (np.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def strength(self) -> float:
        """a / width; values much larger than 1 are the projective-measurement regime."""
        return self.coupling_a / self.width

    def is_weak(self, threshold: float = 1.0) -> bool:
        return self.strength <= threshold


def amplitude(cfg: WmConfig, q):
    """Pointer wavefunction (2 pi w^2)^(-1/4) exp(-q^2 / (4 w^2)); accepts arrays."""
    w = cfg.width
    q = np.asarray(q, dtype=float)
    out = (2.0 * np.pi * w * w) ** -0.25 * np.exp(-q * q / (4.0 * w * w))
    return out[()] if out.ndim == 0 else out


def log_f_ratio(cfg: WmConfig, q1):
    """Unclamped natural log of the f-ratio, -a q1 / w^2."""
    q1 = np.asarray(q1, dtype=float)
    out = -cfg.coupling_a * q1 / (cfg.width * cfg.width)
    return out[()] if out.ndim == 0 else out


def f_ratio_flagged(cfg: WmConfig, q1):
    """f-ratio with its saturation flag.

    Returns ``(f, flag)`` where `flag` is 0 in the normal range, -1 when the
    exponent was clamped low (f ~ 0, spin driven to +z) and +1 when clamped
    high (f ~ inf, spin driven to -z).
    """
    lf = np.asarray(log_f_ratio(cfg, q1))
    flag = np.where(lf > LOG_F_CLAMP, 1, np.where(lf < -LOG_F_CLAMP, -1, 0))
    f = np.exp(np.clip(lf, -LOG_F_CLAMP, LOG_F_CLAMP))
    if f.ndim == 0:
        return float(f), int(flag)
    return f, flag


def f_ratio(cfg: WmConfig, q1):
    """psi(q1 + a) / psi(q1 - a) = exp(-a q1 / w^2), clamped to exp(+-700)."""
    return f_ratio_flagged(cfg, q1)[0]


def f_ratio_by_division(cfg: WmConfig, q1):
    """Same ratio computed by dividing shifted amplitudes; only sound for |q1| <~ 8 widths."""
    a = cfg.coupling_a
    return amplitude(cfg, np.asarray(q1) + a) / amplitude(cfg, np.asarray(q1) - a)


def outcome_density(cfg: WmConfig, prior_theta, q):
    """Probability density of reading q for a spin whose prior polar angle is `prior_theta`.

    |psi(q - a)|^2 cos^2(theta/2) + |psi(q + a)|^2 sin^2(theta/2)
    """
    a = cfg.coupling_a
    q = np.asarray(q, dtype=float)
    half = 0.5 * np.asarray(prior_theta, dtype=float)
    out = (amplitude(cfg, q - a) ** 2 * np.cos(half) ** 2
           + amplitude(cfg, q + a) ** 2 * np.sin(half) ** 2)
    return out


def quadrature_domain(cfg: WmConfig) -> tuple[float, float]:
    half = TAIL_WIDTHS * cfg.width + cfg.coupling_a
    return -half, half


def pointer_quadrature(cfg: WmConfig, panels: int = QUAD_PANELS, order: int = QUAD_ORDER):
    """Nodes and weights of a composite Gauss-Legendre rule over the pointer domain.

    The domain is [-(12 w + a), 12 w + a]; the default uses 16 panels of 16 nodes.
    """
    lo, hi = quadrature_domain(cfg)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_pointer(cfg: WmConfig, func, **kwargs) -> float:
    """Integrate a vectorized function of the pointer position over the quadrature domain."""
    nodes, weights = pointer_quadrature(cfg, **kwargs)
    return float(np.dot(weights, func(nodes)))

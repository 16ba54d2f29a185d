"""
Singlet experiment with a weak measurement on the left spin, and the
consistency test for Leggett's crypto-nonlocal (CNL) hidden-variable model.

Setup: the singlet is prepared, the left spin is rotated by `alpha` about x,
weakly measured along z (pointer read at q_l), then measured along z. The
right spin is measured along b.

Quantum mechanics predicts a left marginal P(z+ | q_l) = 1 / (1 + f^2) that
does not depend on alpha or b. A CNL model that emits definite directions
(u, v) with density F(u, v), and whose marginals for each pair behave like a
spin along u, predicts instead the F-average of

    P(z+ | u, alpha, q_l) = cos^2(theta_l / 2),
    tan(theta_l / 2) = f tan(theta_u(alpha) / 2),

which depends on alpha through the rotated polar angle theta_u(alpha). The
two sides cannot agree for all settings; `cnl_test` measures by how much
they disagree.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .pointer import LOG_F_CLAMP, WmConfig, amplitude, f_ratio, log_f_ratio
from .spin_core import (
    BlochDirection,
    _rotate_x_angles,
    ket_from_direction,
    rotation_x_matrix,
)

logger = logging.getLogger(__name__)

DEFAULT_QUAD_ORDER = 64
MIN_QUAD_ORDER = 16
QUAD_ORDER_ENV = "WEAKSPIN_QUAD_ORDER"
DEFAULT_TOLERANCE = 1e-3
MASS_TOL = 1e-6

FAMILIES = ("uniform_anticorrelated", "delta_pair", "product_uniform", "marginal_density")


class NormalizationError(ValueError):
    """Raised when a source distribution does not integrate to one."""

    def __init__(self, total_mass: float):
        self.total_mass = float(total_mass)
        super().__init__(f"source distribution integrates to {self.total_mass!r}, expected 1")


# ---------------------------------------------------------------------------
# Two-spin states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoQubitState:
    """Amplitudes over |z+z+>, |z+z->, |z-z+>, |z-z-> (left spin first)."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(4)
        n2 = float(np.vdot(amps, amps).real)
        if abs(n2 - 1.0) > 1e-12:
            raise ValueError(f"two-spin state is not normalized: {n2!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_unnormalized(cls, amps) -> TwoQubitState:
        amps = np.asarray(amps, dtype=complex).reshape(4)
        amps = amps / np.max(np.abs(amps))
        return cls(amps / np.linalg.norm(amps))

    def apply_left(self, op) -> np.ndarray:
        """Unnormalized amplitudes after `op` (2x2) acts on the left spin."""
        return (np.asarray(op) @ self.amps.reshape(2, 2)).reshape(4)

    def apply_right(self, op) -> np.ndarray:
        return (self.amps.reshape(2, 2) @ np.asarray(op).T).reshape(4)

    def left_sigma_z(self) -> float:
        p = np.abs(self.amps.reshape(2, 2)) ** 2
        return float(p[0].sum() - p[1].sum())


def singlet() -> TwoQubitState:
    s = 1.0 / np.sqrt(2.0)
    return TwoQubitState(np.array([0.0, s, -s, 0.0]))


def wm_kraus(cfg: WmConfig, q_l: float) -> np.ndarray:
    """Pointer-conditioned operator diag(psi(q_l - a), psi(q_l + a)) on a spin."""
    a = cfg.coupling_a
    return np.diag([amplitude(cfg, q_l - a), amplitude(cfg, q_l + a)]).astype(complex)


def _normalized_wm_kraus(cfg: WmConfig, q_l: float) -> np.ndarray:
    # diag(1, f) rescaled by its larger entry; same state after normalization, no underflow
    lf = float(np.clip(log_f_ratio(cfg, q_l), -LOG_F_CLAMP, LOG_F_CLAMP))
    if lf <= 0.0:
        return np.diag([1.0, np.exp(lf)]).astype(complex)
    return np.diag([np.exp(-lf), 1.0]).astype(complex)


def conditional_joint_probs(alpha: float, cfg: WmConfig, q_l: float, b: BlochDirection) -> np.ndarray:
    """Joint outcome probabilities conditional on the pointer reading `q_l`.

    Returns a (2, 2) array ``P[i, j]`` with i indexing the left z outcome
    (0: +1, 1: -1) and j the right outcome along `b` (0: +1, 1: -1).
    """
    psi = singlet()
    left = _normalized_wm_kraus(cfg, q_l) @ rotation_x_matrix(alpha)
    state = TwoQubitState.from_unnormalized(psi.apply_left(left))
    b_plus = ket_from_direction(b).array()
    b_minus = ket_from_direction(b.antipode()).array()
    right_basis = np.vstack([b_plus.conj(), b_minus.conj()])  # rows are bras
    amps = state.amps.reshape(2, 2) @ right_basis.T
    return np.abs(amps) ** 2


def left_marginal_up(probs: np.ndarray) -> float:
    return float(np.sum(probs[0]))


def qm_marginal(cfg: WmConfig, q_l):
    """Quantum probability of the left z+ outcome given the reading q_l: 1 / (1 + f^2)."""
    # 1/(1 + e^{2x}) = (1 - tanh x) / 2, stable for any x
    lf = log_f_ratio(cfg, q_l)
    out = 0.5 * (1.0 - np.tanh(lf))
    return out[()] if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Hidden-variable side
# ---------------------------------------------------------------------------

def _secondary_prob(theta_rot, lf):
    # cos^2(arctan(f tan(t/2))) = c^2 / (c^2 + f^2 s^2), scaled to survive clamped f
    c = np.cos(0.5 * theta_rot)
    s = np.sin(0.5 * theta_rot)
    f_small = np.exp(np.minimum(lf, 0.0))
    f_inv_small = np.exp(-np.maximum(lf, 0.0))
    c = c * f_inv_small
    s = s * f_small
    c2, s2 = c * c, s * s
    return c2 / (c2 + s2)


def hv_secondary_prob(u: BlochDirection, alpha: float, cfg: WmConfig, q_l: float) -> float:
    """Probability of left z+ for a spin emitted along `u`, then rotated by `alpha` and weakly measured.

    Equals 1 / (1 + f^2 tan^2(theta_u(alpha) / 2)); 0 when the rotated spin points along -z.
    """
    theta_rot, _ = _rotate_x_angles(u.theta, u.phi, alpha)
    lf = np.clip(log_f_ratio(cfg, q_l), -LOG_F_CLAMP, LOG_F_CLAMP)
    return float(_secondary_prob(theta_rot, lf))


# ---------------------------------------------------------------------------
# Source distributions and quadrature
# ---------------------------------------------------------------------------

def default_quad_order() -> int:
    raw = os.environ.get(QUAD_ORDER_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_QUAD_ORDER
    try:
        order = int(raw)
    except ValueError:
        raise ValueError(f"{QUAD_ORDER_ENV} must be an integer, got {raw!r}") from None
    if order < MIN_QUAD_ORDER:
        raise ValueError(f"{QUAD_ORDER_ENV} must be >= {MIN_QUAD_ORDER}, got {order}")
    return order


@dataclass(frozen=True)
class SphereQuadrature:
    """Product rule on the sphere: Gauss-Legendre in cos(theta) times a uniform periodic grid in phi.

    Weights are solid-angle weights and sum to 4 pi.
    """

    n_theta: int = DEFAULT_QUAD_ORDER
    n_phi: int = DEFAULT_QUAD_ORDER

    def __post_init__(self):
        if self.n_theta < MIN_QUAD_ORDER or self.n_phi < MIN_QUAD_ORDER:
            raise ValueError(
                f"quadrature needs n_theta, n_phi >= {MIN_QUAD_ORDER}, got ({self.n_theta}, {self.n_phi})")

    @classmethod
    def default(cls) -> SphereQuadrature:
        n = default_quad_order()
        return cls(n, n)

    def refined(self) -> SphereQuadrature:
        return SphereQuadrature(2 * self.n_theta, 2 * self.n_phi)

    def nodes(self):
        """Flattened (theta, phi, weight) arrays."""
        return _sphere_nodes(self.n_theta, self.n_phi)


@lru_cache(maxsize=8)
def _sphere_nodes(n_theta: int, n_phi: int):
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wphi = np.full(n_phi, 2.0 * np.pi / n_phi)
    tt, pp = np.meshgrid(np.arccos(x), phi, indexing="ij")
    out = tt.ravel(), pp.ravel(), np.outer(wx, wphi).ravel()
    for arr in out:
        arr.setflags(write=False)
    return out


@dataclass(frozen=True)
class SourceDistribution:
    """CNL source density F(u, v) over pairs of spin directions.

    Kinds
    -----
    uniform_anticorrelated
        u uniform on the sphere, v = -u.
    delta_pair
        point mass at fixed `u` and `v` (v defaults to the antipode of u).
    product_uniform
        u and v independent and uniform.
    marginal_density
        user supplied ``density(theta, phi)`` for the u-marginal of F (F
        integrated over v); the consistency test only depends on this marginal.
    """

    kind: str
    u: Optional[BlochDirection] = None
    v: Optional[BlochDirection] = None
    density: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ValueError(f"unknown source family {self.kind!r}; choose from {', '.join(FAMILIES)}")
        if self.kind == "delta_pair":
            if self.u is None:
                raise ValueError("delta_pair needs a direction u")
            if self.v is None:
                object.__setattr__(self, "v", self.u.antipode())
        if self.kind == "marginal_density" and self.density is None:
            raise ValueError("marginal_density needs a density callable")

    @classmethod
    def uniform_anticorrelated(cls) -> SourceDistribution:
        return cls("uniform_anticorrelated")

    @classmethod
    def product_uniform(cls) -> SourceDistribution:
        return cls("product_uniform")

    @classmethod
    def delta_pair(cls, u: BlochDirection, v: Optional[BlochDirection] = None) -> SourceDistribution:
        return cls("delta_pair", u=u, v=v)

    @classmethod
    def from_u_density(cls, density: Callable) -> SourceDistribution:
        return cls("marginal_density", density=density)

    def u_marginal(self, quad: SphereQuadrature):
        """Weighted point set (theta, phi, mass) representing the u-marginal of F.

        For point masses the set is exact; otherwise it is the quadrature
        rule weighted by the density.
        """
        if self.kind == "delta_pair":
            return np.array([self.u.theta]), np.array([self.u.phi]), np.array([1.0])
        theta, phi, w = quad.nodes()
        if self.kind in ("uniform_anticorrelated", "product_uniform"):
            dens = np.full_like(w, 1.0 / (4.0 * np.pi))
        else:
            dens = np.broadcast_to(np.asarray(self.density(theta, phi), dtype=float), w.shape)
        if np.any(dens < 0.0) or not np.all(np.isfinite(dens)):
            raise ValueError("source density must be finite and non-negative")
        return theta, phi, w * dens

    def total_mass(self, quad: Optional[SphereQuadrature] = None) -> float:
        quad = quad or SphereQuadrature.default()
        return float(np.sum(self.u_marginal(quad)[2]))

    def check_normalized(self, quad: Optional[SphereQuadrature] = None) -> None:
        mass = self.total_mass(quad)
        if abs(mass - 1.0) > MASS_TOL:
            raise NormalizationError(mass)


def cnl_lhs(F: SourceDistribution, alpha: float, cfg: WmConfig, q_l: float,
            quad: Optional[SphereQuadrature] = None) -> float:
    """F-average of the hidden-variable probability for left z+ at setting (alpha, q_l).

    The integrand does not involve v, so only the u-marginal of F enters.
    """
    quad = quad or SphereQuadrature.default()
    theta, phi, mass = F.u_marginal(quad)
    total = float(np.sum(mass))
    if abs(total - 1.0) > MASS_TOL:
        raise NormalizationError(total)
    theta_rot, _ = _rotate_x_angles(theta, phi, alpha)
    lf = np.clip(log_f_ratio(cfg, q_l), -LOG_F_CLAMP, LOG_F_CLAMP)
    value = float(np.dot(mass, _secondary_prob(theta_rot, lf)))
    return min(max(value, 0.0), 1.0)


def uniform_lhs_closed_form(f) -> float:
    """Exact uniform-F average: 1/(1 - g) + g ln(g) / (1 - g)^2 with g = f^2 (1/2 at g = 1)."""
    g = float(f) ** 2
    d = 1.0 - g
    if abs(d) < 1e-4:
        # series about g = 1: 1/2 + d/6 + d^2/12
        return 0.5 + d / 6.0 + d * d / 12.0
    return 1.0 / d + g * np.log(g) / (d * d)


# ---------------------------------------------------------------------------
# The test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CnlRow:
    alpha: float
    q_l: float
    f: float
    lhs: float
    rhs: float
    abs_diff: float


@dataclass(frozen=True)
class CnlReport:
    rows: tuple
    max_abs_diff: float
    argmax_alpha: float
    argmax_q_l: float

    def refuted(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.max_abs_diff > tolerance

    def verdict(self, tolerance: float = DEFAULT_TOLERANCE) -> str:
        return "violated" if self.refuted(tolerance) else "consistent at tested settings"

    def summary(self, tolerance: float = DEFAULT_TOLERANCE) -> dict:
        return {
            "max_abs_diff": self.max_abs_diff,
            "argmax_alpha": self.argmax_alpha,
            "argmax_q_l": self.argmax_q_l,
            "tolerance": tolerance,
            "verdict": self.verdict(tolerance),
        }


def cnl_test(F: SourceDistribution, cfg: WmConfig, alpha_grid: Sequence[float],
             ql_grid: Sequence[float], quad: Optional[SphereQuadrature] = None) -> CnlReport:
    """Compare the CNL prediction with the quantum marginal over an (alpha, q_l) grid.

    Rows are ordered alpha-major. Ties in the maximum keep the first row.
    """
    alpha_grid = list(alpha_grid)
    ql_grid = list(ql_grid)
    if not alpha_grid or not ql_grid:
        raise ValueError("alpha_grid and ql_grid must be non-empty")
    quad = quad or SphereQuadrature.default()
    F.check_normalized(quad)
    rows = []
    for alpha in alpha_grid:
        for q_l in ql_grid:
            lhs = cnl_lhs(F, alpha, cfg, q_l, quad)
            rhs = float(qm_marginal(cfg, q_l))
            rows.append(CnlRow(float(alpha), float(q_l), float(f_ratio(cfg, q_l)), lhs, rhs, abs(lhs - rhs)))
    best = max(range(len(rows)), key=lambda i: (rows[i].abs_diff, -i))
    logger.debug("cnl_test: %d rows, max |lhs - rhs| = %.3g", len(rows), rows[best].abs_diff)
    return CnlReport(tuple(rows), rows[best].abs_diff, rows[best].alpha, rows[best].q_l)

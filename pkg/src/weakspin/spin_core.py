"""
Spin-1/2 state algebra on the Bloch sphere.

Directions are (theta, phi) pairs; kets are amplitude pairs over the z-basis
{|+>, |->} using the symmetric phase convention

    |p+> = cos(theta/2) e^{-i phi/2} |+> + sin(theta/2) e^{+i phi/2} |->
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi
POLE_EPS = 1e-14
NORM_TOL = 1e-12


@dataclass(frozen=True)
class BlochDirection:
    """Unit direction on the sphere, polar angle `theta` and azimuth `phi` in radians.

    `phi` is wrapped into [0, 2pi) and set to 0 at the poles.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (np.isfinite(theta) and np.isfinite(self.phi)):
            raise ValueError(f"direction angles must be finite, got ({self.theta}, {self.phi})")
        if theta < -1e-12 or theta > np.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        theta = min(max(theta, 0.0), np.pi)
        phi = float(self.phi) % TWO_PI
        if phi >= TWO_PI:  # -tiny % 2pi rounds up to 2pi
            phi = 0.0
        if np.sin(theta) < POLE_EPS:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_vector(cls, vec) -> BlochDirection:
        x, y, z = (float(c) for c in vec)
        r = np.hypot(np.hypot(x, y), z)
        if r == 0.0:
            raise ValueError("zero vector has no direction")
        theta = np.arctan2(np.hypot(x, y), z)
        phi = np.arctan2(y, x)
        return cls(theta, phi)

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float = 0.0) -> BlochDirection:
        return cls(np.radians(theta_deg), np.radians(phi_deg))

    def vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    def antipode(self) -> BlochDirection:
        return BlochDirection(np.pi - self.theta, self.phi + np.pi)


@dataclass(frozen=True)
class SpinState:
    """Normalized pure spin-1/2 state, amplitudes on |+> and |-> along z."""

    amp_plus: complex
    amp_minus: complex

    def __post_init__(self):
        a, b = complex(self.amp_plus), complex(self.amp_minus)
        norm2 = abs(a) ** 2 + abs(b) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"spin state is not normalized: |a|^2 + |b|^2 = {norm2!r}")
        object.__setattr__(self, "amp_plus", a)
        object.__setattr__(self, "amp_minus", b)

    @classmethod
    def from_amplitudes(cls, amp_plus, amp_minus) -> SpinState:
        """Build a state from unnormalized amplitudes."""
        a, b = complex(amp_plus), complex(amp_minus)
        scale = max(abs(a), abs(b))
        if scale == 0.0:
            raise ValueError("cannot normalize the zero vector")
        a, b = a / scale, b / scale
        n = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
        return cls(a / n, b / n)

    def array(self) -> np.ndarray:
        return np.array([self.amp_plus, self.amp_minus], dtype=complex)

    def norm(self) -> float:
        return float(np.sqrt(abs(self.amp_plus) ** 2 + abs(self.amp_minus) ** 2))


def ket_from_direction(d: BlochDirection) -> SpinState:
    half = 0.5 * d.theta
    return SpinState(
        np.cos(half) * np.exp(-0.5j * d.phi),
        np.sin(half) * np.exp(0.5j * d.phi),
    )


def direction_from_ket(s: SpinState) -> BlochDirection:
    """Bloch direction of `s`, defined up to the global phase of the ket.

    The phase is fixed by rotating `amp_plus` onto the non-negative real axis,
    so that `phi` is the relative phase arg(amp_minus) - arg(amp_plus).
    """
    a, b = s.amp_plus, s.amp_minus
    theta = 2.0 * np.arctan2(abs(b), abs(a))
    phi = np.angle(b * np.conj(a)) if abs(a) > 0.0 else 0.0
    return BlochDirection(theta, phi)


def rotate_x(d: BlochDirection, alpha: float) -> BlochDirection:
    """Rotate a direction by `alpha` about the x-axis.

    (x, y, z) -> (x, y cos(alpha) - z sin(alpha), z cos(alpha) + y sin(alpha)), so
    the new polar angle obeys cos(theta') = cos(theta) cos(alpha) + sin(theta) sin(phi) sin(alpha).
    """
    theta, phi = _rotate_x_angles(d.theta, d.phi, alpha)
    return BlochDirection(theta, phi)


def _rotate_x_angles(theta, phi, alpha):
    # array version shared with the quadrature code
    st = np.sin(theta)
    x = st * np.cos(phi)
    y = st * np.sin(phi)
    z = np.cos(theta)
    ca, sa = np.cos(alpha), np.sin(alpha)
    y2 = y * ca - z * sa
    z2 = z * ca + y * sa
    return np.arctan2(np.hypot(x, y2), z2), np.arctan2(y2, x)


def rotation_x_matrix(alpha: float) -> np.ndarray:
    """SU(2) matrix exp(-i alpha sigma_x / 2) acting on (amp_plus, amp_minus).

    Maps ket_from_direction(d) onto ket_from_direction(rotate_x(d, alpha)) up to a global phase.
    """
    c, s = np.cos(0.5 * alpha), np.sin(0.5 * alpha)
    return np.array([[c, -1j * s], [-1j * s, c]])


def apply_rotation_x(s: SpinState, alpha: float) -> SpinState:
    a, b = rotation_x_matrix(alpha) @ s.array()
    return SpinState.from_amplitudes(a, b)


def prob_up_z(s: SpinState) -> float:
    """Born probability of finding `s` in |+> along z."""
    return float(min(abs(s.amp_plus) ** 2, 1.0))

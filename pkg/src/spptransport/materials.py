"""Drude permittivity of the conducting half-space, with and without drift bias.

All frequencies are expressed in units of the plasma frequency and all
wavenumbers in units of omega_p / c (i.e. c = 1 internally).  A nonzero
drift velocity (along +x, in units of c) Doppler-shifts the frequency seen
by the electron gas, which makes the response wavevector-dependent and
hence nonreciprocal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

#: Default damping rate, in units of omega_p.  Small but nonzero so that
#: surface-mode poles sit off the real wavenumber axis.
DEFAULT_DAMPING = 1e-3


@dataclass(frozen=True)
class DrudeMaterial:
    """Lossy free-electron-gas response, optionally biased by a DC current.

    Parameters
    ----------
    plasma_frequency : float
        omega_p > 0.  The natural frequency unit; 1.0 in normalized work.
    damping : float
        Collision rate gamma_d >= 0, same units as omega_p.
    drift_velocity : float
        Electron drift velocity along +x as a fraction of c, |v_d| < 1.
        Zero means the material is reciprocal.
    """

    plasma_frequency: float = 1.0
    damping: float = DEFAULT_DAMPING
    drift_velocity: float = 0.0

    def __post_init__(self):
        if not self.plasma_frequency > 0:
            raise DomainError("plasma_frequency must be positive")
        if self.damping < 0:
            raise DomainError("damping must be nonnegative")
        if not abs(self.drift_velocity) < 1:
            raise DomainError("|drift_velocity| must be below 1 (units of c)")

    @property
    def reciprocal(self) -> bool:
        return self.drift_velocity == 0.0


def permittivity(material: DrudeMaterial, omega):
    """Drude permittivity eps(omega) = 1 - omega_p^2 / (omega^2 + i gamma_d omega).

    Accepts scalar or array omega (real or complex).  omega = 0 is a pole of
    the model and raises.
    """
    omega = np.asarray(omega)
    if np.any(omega == 0):
        raise DomainError("permittivity undefined at omega = 0")
    wp = material.plasma_frequency
    eps = 1.0 - wp**2 / (omega * (omega + 1j * material.damping))
    if material.damping == 0 and np.isrealobj(omega):
        eps = eps.real
    if eps.ndim == 0:
        return complex(eps) if np.iscomplexobj(eps) else float(eps)
    return eps


def doppler_permittivity(material: DrudeMaterial, omega, k_x):
    """Permittivity seen by a wave with in-plane wavenumber component k_x.

    The drifting electrons shift the frequency: eps(omega - k_x v_d).  Only
    the component of k along the drift axis matters.  Reduces bit-exactly to
    ``permittivity`` when the drift velocity vanishes.
    """
    if np.any(np.asarray(omega) <= 0):
        raise DomainError("doppler_permittivity requires omega > 0")
    if material.drift_velocity == 0.0:
        return permittivity(material, omega)
    shifted = omega - np.asarray(k_x) * material.drift_velocity
    if np.any(shifted == 0):
        raise DomainError("Doppler-shifted frequency hit the omega = 0 pole")
    return permittivity(material, shifted)

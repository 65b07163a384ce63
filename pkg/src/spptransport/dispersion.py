"""Surface-mode dispersion: roots of the p-reflection pole, iso-frequency
contours, the drift-opened one-way frequency window, and the distance-scaling
exponent of the coupling envelope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import DomainError, InsufficientDataError, RootFindError
from .materials import DrudeMaterial, doppler_permittivity

#: quality threshold: a root counts as a propagating surface mode only if it
#: is bound (Re k above the light line) and not overdamped.
_IM_RE_MAX = 0.5


@dataclass(frozen=True)
class DispersionPoint:
    """A surface-mode root at one frequency and propagation azimuth."""

    omega: float
    k: complex
    phi: float


@dataclass(frozen=True)
class IsoFrequencyContour:
    """k(phi) samples on a uniform azimuth grid; None marks a gap."""

    omega: float
    phis: np.ndarray
    ks: list  # complex or None per azimuth
    closed: bool = field(default=False)

    def wavenumbers(self):
        """Real parts of the sampled roots, with NaN at gaps."""
        return np.array([float('nan') if k is None else k.real for k in self.ks])


def _sqrt_upper(w):
    s = cmath.sqrt(w)
    return -s if s.imag < 0 else s


def quasistatic_surface_frequency(material: DrudeMaterial) -> complex:
    """Root of eps(omega) = -1 for the Drude profile (complex when lossy)."""
    g = material.damping
    wp = material.plasma_frequency
    return (cmath.sqrt(2.0 * wp**2 - g**2) - 1j * g) / 2.0


def _closed_form_k(k0, eps):
    """Bound-mode wavenumber k = k0 sqrt(eps/(eps+1)) of a uniform interface."""
    return k0 * _sqrt_upper(eps / (eps + 1.0))


#: roots beyond this multiple of k0 are treated as unresolvable (no mode)
_K_CAP = 1e3


def _acceptable(k, k0):
    return (k0 < k.real < _K_CAP * k0 and k.imag > -1e-9 * k.real
            and abs(k.imag) < _IM_RE_MAX * k.real)


def solve_spp(material: DrudeMaterial, omega: float, phi: float = 0.0,
              model: str = "full") -> Optional[DispersionPoint]:
    """Surface-mode root at azimuth phi, or None when no mode exists there.

    ``full`` solves eps_D(omega, k cos phi) k_z + k_z2 = 0 (pole of r_p);
    ``quasistatic`` solves eps_D + 1 = 0 in closed form.  Non-convergence of
    the full solver raises RootFindError, distinct from the no-mode case.
    """
    if omega <= 0:
        raise DomainError("solve_spp requires omega > 0")
    if model not in ("full", "quasistatic"):
        raise DomainError(f"unknown dispersion model {model!r}")
    k0 = omega
    cphi = math.cos(phi)
    vd = material.drift_velocity

    if model == "quasistatic":
        w_sp = quasistatic_surface_frequency(material)
        if vd == 0.0 or cphi == 0.0:
            # no k dependence: the electrostatic condition picks a frequency,
            # not a wavenumber
            return None
        k = (omega - w_sp) / (vd * cphi)
        if k.real <= 0 or k.imag < 0 or k.real > _K_CAP * omega:
            # Im k < 0 would grow along the propagation direction: not a
            # physical forward-decaying mode
            return None
        return DispersionPoint(omega=omega, k=k, phi=phi)

    def eps_at(k):
        return complex(np.asarray(doppler_permittivity(material, omega, k * cphi)))

    # seed 1: fixed point of the drift-corrected closed form (bound branch
    # continuously connected to the unbiased SPP)
    seeds = []
    eps = eps_at(0.0)
    k = None
    for _ in range(200):
        if eps.real >= -1.0:
            k = None
            break
        knew = _closed_form_k(k0, eps)
        if k is not None and abs(knew - k) < 1e-13 * k0:
            k = knew
            break
        if k is not None:
            knew = 0.5 * (knew + k)  # relax: the Doppler feedback can overshoot
        k = knew
        eps = eps_at(k.real)
    if k is not None:
        seeds.append(k)

    # seed 2: the drift-opened asymptote branch, from the quasistatic root
    if vd != 0.0 and cphi != 0.0:
        kq = (omega - quasistatic_surface_frequency(material)) / (vd * cphi)
        if k0 < kq.real < _K_CAP * k0 and kq.imag >= 0:
            seeds.append(kq)

    if not seeds:
        return None

    def dispersion_fn(k):
        eps = eps_at(k)
        kz = _sqrt_upper(k0**2 - k * k)
        kz2 = _sqrt_upper(eps * k0**2 - k * k)
        return eps * kz + kz2

    failure = None
    for seed in seeds:
        ka, kb = seed, seed * (1.0 + 1e-6)
        fa, fb = dispersion_fn(ka), dispersion_fn(kb)
        converged = False
        for _ in range(100):
            if fb == fa:
                break
            kc = kb - fb * (kb - ka) / (fb - fa)
            ka, fa = kb, fb
            kb, fb = kc, dispersion_fn(kc)
            if abs(kb - ka) < 1e-14 * max(abs(kb), k0):
                converged = True
                break
        if not converged and abs(fb) > 1e-9 * k0:
            failure = RootFindError(
                f"dispersion root polish failed at omega={omega}, phi={phi}")
            continue
        if _acceptable(kb, k0):
            return DispersionPoint(omega=omega, k=kb, phi=phi)
    if failure is not None:
        raise failure
    return None


def nonreciprocal_window(material: DrudeMaterial,
                         omega_range: Tuple[float, float] = None,
                         resolution: float = 1e-4,
                         model: str = "quasistatic") -> Tuple[float, float]:
    """Frequency interval where exactly one of the +x / -x azimuths carries
    a propagating surface mode.  Empty (0, 0) for an unbiased material.

    The default quasistatic model tracks the drift-tilted asymptote, whose
    one-way band opens exactly at the surface-mode frequency; the full model
    widens the band slightly because the co-drift branch cuts off early.
    """
    if material.drift_velocity == 0.0:
        return (0.0, 0.0)
    wp = material.plasma_frequency
    if omega_range is None:
        omega_range = (0.5 * wp, 0.999 * wp)
    lo, hi = omega_range

    def one_way(w):
        fwd = solve_spp(material, w, 0.0, model=model) is not None
        bwd = solve_spp(material, w, math.pi, model=model) is not None
        return fwd != bwd

    n = max(8, int(round((hi - lo) / max(resolution, 1e-8))))
    grid = np.linspace(lo, hi, n + 1)
    flags = np.array([one_way(w) for w in grid])
    if not flags.any():
        return (0.0, 0.0)
    idx = np.nonzero(flags)[0]
    # bisect the two edges of the contiguous one-way band to the resolution
    def bisect(wa, wb, want_lower_true):
        for _ in range(60):
            wm = 0.5 * (wa + wb)
            if one_way(wm) == want_lower_true:
                wb = wm
            else:
                wa = wm
            if wb - wa < 0.1 * resolution:
                break
        return 0.5 * (wa + wb)

    i0, i1 = idx[0], idx[-1]
    w_lo = grid[i0] if i0 == 0 else bisect(grid[i0 - 1], grid[i0], True)
    w_hi = grid[i1] if i1 == len(grid) - 1 else bisect(grid[i1], grid[i1 + 1], False)
    return (w_lo, w_hi)


def trace_isofrequency(material: DrudeMaterial, omega: float,
                       n_samples: int = 64, model: str = "full") -> IsoFrequencyContour:
    """Sample k(phi) on a uniform azimuth grid; azimuths with no root are gaps."""
    if n_samples < 8:
        raise DomainError("need at least 8 azimuth samples")
    phis = 2.0 * math.pi * np.arange(n_samples) / n_samples
    ks: List[Optional[complex]] = []
    for phi in phis:
        pt = solve_spp(material, omega, phi, model=model)
        ks.append(None if pt is None else pt.k)
    closed = all(k is not None for k in ks)
    return IsoFrequencyContour(omega=omega, phis=phis, ks=ks, closed=closed)


def scaling_exponent(distances, couplings) -> float:
    """Least-squares slope of log |envelope| vs log R.

    The envelope interpolates the local maxima of |coupling(R)| (quadratic
    refinement around each discrete peak).  Requires at least three maxima.
    """
    R = np.asarray(distances, dtype=float)
    y = np.abs(np.asarray(couplings))
    if R.size < 10:
        raise InsufficientDataError("need at least 10 samples")
    if R[-1] / R[0] < 10.0 - 1e-9:
        raise InsufficientDataError("samples must span at least one decade in R")
    peaks_R, peaks_y = [], []
    for i in range(1, len(y) - 1):
        if y[i] >= y[i - 1] and y[i] > y[i + 1]:
            # quadratic refinement of the peak position and height
            denom = y[i - 1] - 2 * y[i] + y[i + 1]
            if denom != 0:
                s = 0.5 * (y[i - 1] - y[i + 1]) / denom
                s = float(np.clip(s, -0.5, 0.5))
                Rp = R[i] + s * 0.5 * (R[i + 1] - R[i - 1])
                yp = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * s
            else:
                Rp, yp = R[i], y[i]
            peaks_R.append(Rp)
            peaks_y.append(yp)
    if len(peaks_R) < 3:
        raise InsufficientDataError(
            f"only {len(peaks_R)} envelope maxima found, need 3")
    slope, _ = np.polyfit(np.log(peaks_R), np.log(peaks_y), 1)
    return float(slope)

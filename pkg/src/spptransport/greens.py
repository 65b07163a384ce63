"""zz-component of the dyadic Green's function above the biased half-space.

The vacuum part is closed-form.  The scattered part is the 2D angular
spectrum integral

    G_zz^sc = (i / 8 pi^2) * int dk_x dk_y  M_zz exp[i(k_x dx + k_y dy
                                                       + k_z (z1 + z2))],

with M_zz = (k_rho^2 / (k0^2 k_z)) * r_p and the p-polarized Fresnel
coefficient evaluated with the Doppler-shifted permittivity.  The integral
is done in polar coordinates: periodic trapezoid in the azimuth (the
integrand loses azimuthal symmetry once the drift is on) nested inside
adaptive quadrature in k_rho.  The branch point at k_rho = k0 is removed
analytically by substituting u = |k_z| on the two flanks of the light line.

Units: c = 1, frequencies in units of omega_p, lengths in units of
c / omega_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad_vec

from .errors import DomainError, IntegrationError
from .materials import DrudeMaterial, doppler_permittivity, permittivity


@dataclass(frozen=True)
class HalfSpaceScene:
    """Two vertical dipoles in vacuum above the material interface.

    Heights are measured from the interface (z = 0) into the vacuum side.
    The dipole moment only matters for absolute rates; normalized outputs
    cancel it.
    """

    material: DrudeMaterial
    z1: float
    z2: float
    omega0: float
    dipole_moment: float = 1.0

    def __post_init__(self):
        if self.z1 <= 0 or self.z2 <= 0:
            raise DomainError("emitter heights must be positive (vacuum side)")
        if self.omega0 <= 0:
            raise DomainError("transition frequency must be positive")

    @property
    def wavelength(self) -> float:
        """Free-space wavelength 2 pi c / omega0 at the working frequency."""
        return 2.0 * math.pi / self.omega0


@dataclass(frozen=True)
class GreensSample:
    """A single G_zz evaluation with its vacuum/scattered split retained."""

    value: complex
    vacuum_part: complex
    scattered_part: complex
    r1: tuple
    r2: tuple
    error_estimate: float = 0.0


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-6
    branch_delta: float = 0.05          # half-width of the light-line window
    k_max_factor: float = 20.0          # k_max >= factor * k0
    evanescent_scale: float = 35.0      # k_max >= scale / (z1 + z2)
    phi_rel_tol: float = 0.1            # fraction of rel_tol spent in azimuth
    phi_min: int = 64
    phi_max: int = 1 << 14


DEFAULT_QUADRATURE = QuadratureSettings()


def _sqrt_upper(w):
    """Complex square root with nonnegative imaginary part (decaying waves)."""
    s = np.sqrt(np.asarray(w, dtype=complex))
    return np.where(s.imag < 0, -s, s)


def vacuum_gzz(r1, r2, omega):
    """Closed-form zz element of the free-space dyadic Green's function.

    Convention (curl curl - k0^2) G = I delta.  At coincidence only the
    finite imaginary part, omega / (6 pi c), is returned.
    """
    if omega <= 0:
        raise DomainError("vacuum_gzz requires omega > 0")
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    d = r1 - r2
    R = float(np.linalg.norm(d))
    k = omega
    if R == 0.0:
        return 1j * k / (6.0 * math.pi)
    kR = k * R
    zhat2 = (d[2] / R) ** 2
    pre = np.exp(1j * kR) / (4.0 * math.pi * R)
    term_delta = 1.0 + (1j * kR - 1.0) / kR**2
    term_rr = (3.0 - 3.0j * kR - kR**2) / kR**2
    return complex(pre * (term_delta + term_rr * zhat2))


def _pair_offsets(offsets):
    """Group offsets so each (-dx, -dy) reuses its partner's phase matrix.

    Returns (base, plus, minus): phase rows are built for base only;
    out[plus[i]] uses row i directly, out[minus[j]] uses the conjugate of
    row minus_row[j] (the phase of a negated offset is the elementwise
    conjugate, though the azimuth sums differ because r_p is complex).
    """
    base = []
    plus = []
    minus = []
    seen = {}
    for idx, (dx, dy) in enumerate(offsets):
        partner = seen.get((-dx, -dy))
        if partner is not None and (dx, dy) != (-dx, -dy):
            minus.append((partner, idx))
            continue
        if (dx, dy) not in seen:
            seen[(dx, dy)] = len(base)
            base.append((dx, dy))
            plus.append((len(base) - 1, idx))
        else:
            plus.append((seen[(dx, dy)], idx))
    return np.asarray(base, dtype=float).reshape(-1, 2), plus, minus


def _phi_sum(material, omega, k0, k_rho, offsets, phi, pairing):
    """Sum of r_p * phase over an azimuth grid, one entry per offset."""
    cphi = np.cos(phi)
    sphi = np.sin(phi)
    kx = k_rho * cphi
    eps = doppler_permittivity(material, omega, kx)
    kz = _sqrt_upper(k0**2 - k_rho**2 + 0j)
    kz2 = _sqrt_upper(eps * k0**2 - k_rho**2)
    rp = (eps * kz - kz2) / (eps * kz + kz2)
    rp = np.broadcast_to(np.asarray(rp, dtype=complex), phi.shape)
    base, plus, minus = pairing
    # phase argument per base offset: k_rho (dx cos phi + dy sin phi); the
    # complex exponential is the dominant cost, so negated offsets reuse
    # the conjugate of their partner's phase matrix
    arg = k_rho * (base[:, 0:1] * cphi[None, :] + base[:, 1:2] * sphi[None, :])
    phase = np.exp(1j * arg)
    fwd = phase @ rp
    bwd = np.conj(phase) @ rp
    out = np.empty(offsets.shape[0], dtype=complex)
    for row, idx in plus:
        out[idx] = fwd[row]
    for row, idx in minus:
        out[idx] = bwd[row]
    return out


def _phi_integral(material, omega, k0, k_rho, offsets, settings, pairing,
                  damp=1.0):
    """Azimuth integral at fixed k_rho (periodic trapezoid), per offset.

    Doubles the grid until the result settles within the azimuthal share of
    the tolerance budget; already-computed samples are reused on doubling.
    The grid size rule depends only on max |rho| and k_rho so that all
    offsets in a batch (including sign flips) share identical nodes.
    `damp` is the evanescent prefactor of this k_rho slice: deep in the
    damped tail a coarse grid suffices, since any azimuthal error is
    multiplied by an exponentially small weight.
    """
    rho_max = float(np.max(np.hypot(offsets[:, 0], offsets[:, 1])))
    n = settings.phi_min
    # the phase k_rho * rho * cos(phi) needs ~|z| points to converge
    need = int(1.3 * k_rho * rho_max) + 16 if damp > 1e-9 else settings.phi_min
    while n < need and n < settings.phi_max:
        n *= 2

    tol = settings.phi_rel_tol * settings.rel_tol
    phi = 2.0 * math.pi * np.arange(n) / n
    acc = _phi_sum(material, omega, k0, k_rho, offsets, phi, pairing)
    prev = None
    while True:
        val = 2.0 * math.pi * acc / n
        if prev is not None:
            scale = max(float(np.max(np.abs(val))), 1e-3)
            if float(np.max(np.abs(val - prev))) <= tol * scale:
                return val
        if n >= settings.phi_max:
            return val
        prev = val
        # midpoints of the current grid complete the doubled grid
        phi_mid = 2.0 * math.pi * (np.arange(n) + 0.5) / n
        acc = acc + _phi_sum(material, omega, k0, k_rho, offsets, phi_mid, pairing)
        n *= 2


def _pole_breakpoints(material, omega, k0, lo, hi):
    """Estimate SPP pole locations on (lo, hi) to seed the adaptive quadrature.

    Fixed-point iteration of k = k0 sqrt(eps/(eps+1)) with the Doppler shift
    evaluated along the forward and backward azimuths.  Only used as
    subdivision hints, so a rough answer is fine.
    """
    points = set()
    for cphi in (-1.0, 0.0, 1.0):
        k = None
        eps = permittivity(material, omega)
        if isinstance(eps, float):
            eps = complex(eps)
        for _ in range(60):
            if eps.real >= -1.0:
                k = None
                break
            knew = k0 * _sqrt_upper(eps / (eps + 1.0))
            knew = float(np.real(knew))
            if k is not None and abs(knew - k) < 1e-10 * k0:
                k = knew
                break
            k = knew
            eps = doppler_permittivity(material, omega, k * cphi)
            eps = complex(np.asarray(eps))
        if k is not None and lo < k < hi:
            points.add(round(k, 12))
    return sorted(points)


def scattered_gzz(scene: HalfSpaceScene, dx, dy, omega: Optional[float] = None,
                  settings: QuadratureSettings = DEFAULT_QUADRATURE) -> complex:
    """Scattered (reflected) part of G_zz(r1, r2) with dx = x1 - x2, dy = y1 - y2.

    The reflected-path phase uses z1 + z2 (image construction).  Raises
    IntegrationError with the achieved estimate when the k_rho quadrature
    cannot meet the tolerance budget.
    """
    vals, _ = _scattered_batch(scene, [(dx, dy)], omega=omega, settings=settings)
    return complex(vals[0])


def scattered_gzz_batch(scene: HalfSpaceScene, offsets, omega: Optional[float] = None,
                        settings: QuadratureSettings = DEFAULT_QUADRATURE) -> np.ndarray:
    """Scattered G_zz for many (dx, dy) offsets in a single adaptive pass.

    All offsets share the reflection-coefficient samples, which makes a
    sweep nearly an order of magnitude cheaper than one call per offset.
    The error budget is controlled on the largest component, so tiny
    entries carry an absolute (not relative) accuracy of roughly
    rel_tol * max |G|.
    """
    vals, _ = _scattered_batch(scene, offsets, omega=omega, settings=settings)
    return vals


def _scattered_batch(scene, offsets, omega=None, settings=DEFAULT_QUADRATURE):
    material = scene.material
    if material.damping <= 0:
        raise DomainError("scattered_gzz needs damping > 0 (poles off the axis)")
    w = scene.omega0 if omega is None else omega
    if w <= 0:
        raise DomainError("scattered_gzz requires omega > 0")
    offsets = np.atleast_2d(np.asarray(offsets, dtype=float))
    if offsets.shape[1] != 2:
        raise DomainError("offsets must be (dx, dy) pairs")
    k0 = w
    Z = scene.z1 + scene.z2
    delta = settings.branch_delta
    k_max = max(settings.k_max_factor * k0, settings.evanescent_scale / Z)
    pref = 1j / (8.0 * math.pi**2)

    pairing = _pair_offsets(offsets)

    def phi_int(k_rho, damp=1.0):
        return _phi_integral(material, w, k0, k_rho, offsets, settings,
                             pairing, damp=damp)

    def f_propagating(k_rho):
        # generic integrand, k_rho away from the light line
        kz = complex(_sqrt_upper(k0**2 - k_rho**2 + 0j))
        damp = math.exp(-abs(kz.imag) * Z)
        return (pref * (k_rho**3 / (k0**2 * kz)) * np.exp(1j * kz * Z)
                * phi_int(k_rho, damp))

    def f_below(u):
        # u = k_z on [k0(1-delta), k0]; the 1/k_z singularity cancels
        k_rho = math.sqrt(max(k0**2 - u**2, 0.0))
        return pref * (k_rho**2 / k0**2) * np.exp(1j * u * Z) * phi_int(k_rho)

    def f_above(u):
        # u = |k_z| on [k0, k0(1+delta)]; k_z = i u
        k_rho = math.sqrt(k0**2 + u**2)
        return (pref / 1j) * (k_rho**2 / k0**2) * np.exp(-u * Z) * phi_int(k_rho)

    tol = settings.rel_tol
    total = np.zeros(offsets.shape[0], dtype=complex)
    err = 0.0

    a1, b1 = 0.0, k0 * (1.0 - delta)
    val, e = quad_vec(f_propagating, a1, b1, epsabs=1e-300, epsrel=tol, norm="max")
    total += val
    err += e

    u1 = math.sqrt(k0**2 - b1**2)
    val, e = quad_vec(f_below, 0.0, u1, epsabs=1e-300, epsrel=tol, norm="max")
    total += val
    err += e

    b3 = k0 * (1.0 + delta)
    u2 = math.sqrt(b3**2 - k0**2)
    val, e = quad_vec(f_above, 0.0, u2, epsabs=1e-300, epsrel=tol, norm="max")
    total += val
    err += e

    pts = _pole_breakpoints(material, w, k0, b3, k_max)
    val, e = quad_vec(f_propagating, b3, k_max, epsabs=1e-300, epsrel=tol,
                      norm="max", points=pts if pts else None)
    total += val
    err += e

    if err > 50.0 * tol * max(float(np.max(np.abs(total))), 1e-300):
        raise IntegrationError(
            f"scattered G_zz quadrature did not converge (error ~ {err:.3e})",
            error_estimate=err)
    return total, err


def gzz_total(scene: HalfSpaceScene, dx, dy, omega: Optional[float] = None,
              settings: QuadratureSettings = DEFAULT_QUADRATURE) -> GreensSample:
    """Total G_zz(r1, r2) = vacuum + scattered, parts retained separately."""
    w = scene.omega0 if omega is None else omega
    r1 = (dx, dy, scene.z1)
    r2 = (0.0, 0.0, scene.z2)
    vac = vacuum_gzz(r1, r2, w)
    vals, err = _scattered_batch(scene, [(dx, dy)], omega=w, settings=settings)
    sc = complex(vals[0])
    return GreensSample(value=vac + sc, vacuum_part=vac, scattered_part=sc,
                        r1=r1, r2=r2, error_estimate=err)

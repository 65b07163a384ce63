"""Physical rates from Green's function samples.

Converts G_zz into the dissipative decay matrix Gamma_ij, the coherent
coupling matrix g_ij (both generally asymmetric over a biased interface),
the complex pair potential, the golden-rule transfer rate, and the two
bound diagnostics: the reciprocity limit |Gamma_12|/Gamma_11 <= 1 and its
nonreciprocal replacement |Gamma_21/2 + i g_21| <= e Gamma_11 / 2.

Units: hbar = eps0 = c = 1; rates carry the dipole moment squared and are
most usefully read normalized by the on-site rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .greens import (DEFAULT_QUADRATURE, GreensSample, HalfSpaceScene,
                     gzz_total, scattered_gzz, scattered_gzz_batch, vacuum_gzz)


@dataclass(frozen=True)
class CouplingSet:
    """Rate matrices for an N-emitter chain.

    gamma[i, j] is the dissipative rate built from Im G(r_i, r_j); g[i, j]
    the coherent coupling from Re G(r_i, r_j).  Off-diagonal entries need
    not be symmetric.  gamma_in pumps emitter 1, gamma_out drains emitter N.
    """

    gamma: np.ndarray
    g: np.ndarray
    gamma_in: float = 0.0
    gamma_out: float = 0.0

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if gamma.shape != g.shape or gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
            raise DomainError("gamma and g must be square matrices of equal shape")
        if np.any(np.diag(gamma) <= 0):
            raise DomainError("diagonal decay rates must be positive")
        if self.gamma_in < 0 or self.gamma_out < 0:
            raise DomainError("pump/extraction rates must be nonnegative")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "g", g)

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    def with_rates(self, gamma_in=None, gamma_out=None) -> "CouplingSet":
        """Copy with pump/extraction rates replaced."""
        return CouplingSet(
            gamma=self.gamma, g=self.g,
            gamma_in=self.gamma_in if gamma_in is None else gamma_in,
            gamma_out=self.gamma_out if gamma_out is None else gamma_out)


@dataclass(frozen=True)
class DipolePotential:
    """Complex pair-interaction strength i Gamma/2 + g (units of rate)."""

    gamma: float
    g: float

    @property
    def value(self) -> complex:
        return 1j * self.gamma / 2.0 + self.g

    def __abs__(self) -> float:
        return abs(self.value)


def _rates_from_green(scene: HalfSpaceScene, gval: complex):
    """(Gamma, g) from one G_zz sample for identical vertical dipoles."""
    w = scene.omega0
    mu2 = scene.dipole_moment**2
    gamma = 2.0 * w**2 * mu2 * gval.imag
    g = w**2 * mu2 * gval.real
    return gamma, g


def _green_sample(scene, dx, part, settings):
    if part == "total":
        return gzz_total(scene, dx, 0.0, settings=settings).value
    if part == "scattered":
        return scattered_gzz(scene, dx, 0.0, settings=settings)
    if part == "vacuum":
        return vacuum_gzz((dx, 0.0, scene.z1), (0.0, 0.0, scene.z2), scene.omega0)
    raise DomainError(f"unknown Green's function part {part!r}")


def spontaneous_rate(scene: HalfSpaceScene, part: str = "total",
                     settings=DEFAULT_QUADRATURE) -> float:
    """On-site decay rate Gamma_11 = 2 omega^2 mu^2 Im G_zz(r0, r0).

    In free space (part='vacuum') this is omega^3 mu^2 / (3 pi); near the
    interface the surface modes add a strong Purcell enhancement.
    """
    gval = _green_sample(scene, 0.0, part, settings)
    rate, _ = _rates_from_green(scene, gval)
    if rate <= 0:
        raise DomainError(f"nonpositive on-site rate {rate} (part={part})")
    return rate


def coupling_rates(scene: HalfSpaceScene, dx: float, part: str = "total",
                   gamma_in: float = 0.0, gamma_out: float = 0.0,
                   settings=DEFAULT_QUADRATURE) -> CouplingSet:
    """Two-emitter rate matrices for lateral spacing dx.

    Emitter 1 sits at x = dx, emitter 2 at x = 0, so Gamma_12 comes from
    G(r_1, r_2) (offset +dx) and Gamma_21 from G(r_2, r_1) (offset -dx).
    """
    if dx < 0:
        raise DomainError("spacing must be nonnegative")
    g11 = spontaneous_rate(scene, part=part, settings=settings)
    if dx == 0.0:
        gam = np.full((2, 2), g11)
        gcoh = np.full((2, 2), _rates_from_green(
            scene, _green_sample(scene, 0.0, part, settings))[1])
    else:
        gam = np.empty((2, 2))
        gcoh = np.empty((2, 2))
        gam[0, 0] = gam[1, 1] = g11
        g_on = _green_sample(scene, 0.0, part, settings)
        gcoh[0, 0] = gcoh[1, 1] = _rates_from_green(scene, g_on)[1]
        g12, c12 = _rates_from_green(scene, _green_sample(scene, +dx, part, settings))
        g21, c21 = _rates_from_green(scene, _green_sample(scene, -dx, part, settings))
        gam[0, 1], gcoh[0, 1] = g12, c12
        gam[1, 0], gcoh[1, 0] = g21, c21
    return CouplingSet(gamma=gam, g=gcoh, gamma_in=gamma_in, gamma_out=gamma_out)


@dataclass(frozen=True)
class CouplingSweep:
    """Rates over a spacing grid, shared on-site normalization included."""

    dx: np.ndarray
    gamma11: float
    g11: float
    gamma12: np.ndarray
    gamma21: np.ndarray
    g12: np.ndarray
    g21: np.ndarray

    def coupling_set(self, i: int, gamma_in: float = 0.0,
                     gamma_out: float = 0.0) -> CouplingSet:
        """CouplingSet at the i-th spacing sample."""
        gam = np.array([[self.gamma11, self.gamma12[i]],
                        [self.gamma21[i], self.gamma11]])
        g = np.array([[self.g11, self.g12[i]],
                      [self.g21[i], self.g11]])
        return CouplingSet(gamma=gam, g=g, gamma_in=gamma_in, gamma_out=gamma_out)


def coupling_sweep(scene: HalfSpaceScene, dxs, part: str = "scattered",
                   settings=DEFAULT_QUADRATURE) -> CouplingSweep:
    """Both-direction rates over a grid of spacings in one quadrature pass.

    Much cheaper than calling coupling_rates per point: every offset shares
    the reflection-coefficient samples and the on-site rate is evaluated
    once.  `part` selects which Green's function contribution feeds the
    rates (the surface-scattered part dominates close to the interface).
    """
    dxs = np.asarray(dxs, dtype=float)
    if np.any(dxs < 0):
        raise DomainError("spacings must be nonnegative")
    offsets = [(0.0, 0.0)]
    offsets += [(+d, 0.0) for d in dxs]
    offsets += [(-d, 0.0) for d in dxs]
    if part == "vacuum":
        vals = np.array([_green_sample(scene, off[0], "vacuum", settings)
                         for off in offsets])
    else:
        # batch in groups of comparable |dx| so short spacings do not pay
        # for the dense azimuth grids that only the longest ones need;
        # +dx and -dx always share a group (and hence quadrature nodes)
        order = np.argsort([math.hypot(*off) for off in offsets])
        vals = np.empty(len(offsets), dtype=complex)
        pos = 0
        while pos < len(order):
            rho0 = math.hypot(*offsets[order[pos]])
            stop = pos + 1
            while stop < len(order):
                r = math.hypot(*offsets[order[stop]])
                if r > max(2.0 * rho0, 1e-12):
                    break
                stop += 1
            idx = order[pos:stop]
            vals[idx] = scattered_gzz_batch(
                scene, [offsets[i] for i in idx], settings=settings)
            pos = stop
        if part == "total":
            vals = vals + np.array(
                [vacuum_gzz((off[0], off[1], scene.z1), (0.0, 0.0, scene.z2),
                            scene.omega0) for off in offsets])
    n = len(dxs)
    w2mu2 = scene.omega0**2 * scene.dipole_moment**2
    gamma = 2.0 * w2mu2 * vals.imag
    g = w2mu2 * vals.real
    return CouplingSweep(
        dx=dxs, gamma11=float(gamma[0]), g11=float(g[0]),
        gamma12=gamma[1:1 + n], gamma21=gamma[1 + n:],
        g12=g[1:1 + n], g21=g[1 + n:])


def dipole_potential(cset: CouplingSet, i: int, j: int) -> DipolePotential:
    """Pair potential mediating j -> i transfer, built from Gamma_ij, g_ij.

    Indices are 1-based to match the emitter labels elsewhere.
    """
    if i == j:
        raise DomainError("pair potential requires two distinct emitters")
    a, b = i - 1, j - 1
    return DipolePotential(gamma=float(cset.gamma[a, b]), g=float(cset.g[a, b]))


def fermi_transfer_rate(pot: DipolePotential) -> float:
    """Golden-rule rate 2 pi |M|^2 for the pair potential (hbar = 1)."""
    return 2.0 * math.pi * abs(pot) ** 2


def r_limit_margin(cset: CouplingSet) -> float:
    """max |Gamma_ij| / Gamma_ii over off-diagonals; <= 1 in reciprocal media."""
    if cset.n != 2:
        raise DomainError("reciprocity-limit margin is defined for two emitters")
    gam = cset.gamma
    return float(max(abs(gam[0, 1]) / gam[0, 0], abs(gam[1, 0]) / gam[1, 1]))


def nr_limit_margin(cset: CouplingSet) -> float:
    """max |Gamma_ij/2 + i g_ij| / (e Gamma_ii / 2) over off-diagonals.

    Equals |G(r_i, r_j)| / (e |Im G(r, r)|) in Green's function form; stays
    at or below 1 for any interface in this framework.
    """
    if cset.n != 2:
        raise DomainError("nonreciprocity-limit margin is defined for two emitters")
    m12 = abs(dipole_potential(cset, 1, 2)) / (math.e * cset.gamma[0, 0] / 2.0)
    m21 = abs(dipole_potential(cset, 2, 1)) / (math.e * cset.gamma[1, 1] / 2.0)
    return float(max(m12, m21))


def slope_at_source(scene: HalfSpaceScene, part: str = "scattered",
                    step_fraction: float = 1.0 / 200.0,
                    settings=DEFAULT_QUADRATURE) -> float:
    """Normalized lateral slope of Gamma_12(dx) at dx = 0.

    Central difference with step h = wavelength * step_fraction, normalized
    by Gamma_11 / wavelength.  Vanishes over any unbiased interface; a
    finite value is the signature of broken reciprocity.
    """
    lam = scene.wavelength
    h = lam * step_fraction
    gp, _ = _rates_from_green(scene, _green_sample(scene, +h, part, settings))
    gm, _ = _rates_from_green(scene, _green_sample(scene, -h, part, settings))
    g11 = spontaneous_rate(scene, part=part, settings=settings)
    return float((gp - gm) / (2.0 * h) * lam / g11)

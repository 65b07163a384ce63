"""Surface-mode roots, one-way window, contours, and the scaling fit."""

import math

import numpy as np
import pytest

from spptransport import (DomainError, DrudeMaterial, InsufficientDataError,
                          nonreciprocal_window, quasistatic_surface_frequency,
                          scaling_exponent, solve_spp, trace_isofrequency)


def test_quasistatic_surface_frequency():
    # (sqrt(2 wp^2 - gamma^2) - i gamma)/2, hand-evaluated at gamma = 1e-3
    w = quasistatic_surface_frequency(DrudeMaterial())
    assert w == pytest.approx(0.7071066044098302 - 0.0005j, rel=1e-12)
    lossless = quasistatic_surface_frequency(DrudeMaterial(damping=0.0))
    assert lossless == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)


def test_unbiased_root_matches_closed_form():
    m = DrudeMaterial()
    for w in np.linspace(0.3, 0.69, 8):
        pt = solve_spp(m, float(w))
        assert pt is not None
        eps = complex(1.0 - 1.0 / (w * (w + 1e-3j)))
        k_ref = w * np.sqrt(eps / (eps + 1.0))
        if k_ref.imag < 0:
            k_ref = -k_ref
        assert abs(pt.k - k_ref) < 1e-9 * abs(k_ref)


def test_no_mode_above_cutoff_unbiased():
    m = DrudeMaterial()
    for w in (0.72, 0.8, 0.95):
        assert solve_spp(m, w) is None
        assert solve_spp(m, w, math.pi) is None


def test_biased_one_way_at_074():
    m = DrudeMaterial(drift_velocity=-0.008)
    fwd = solve_spp(m, 0.74, 0.0)
    bwd = solve_spp(m, 0.74, math.pi)
    assert fwd is None
    assert bwd is not None
    assert bwd.k.real > 0.74  # bound mode, beyond the light line
    assert bwd.k.imag >= 0.0


def test_quasistatic_vs_full_far_from_light_line():
    # the electrostatic root approximates the full one for k >~ 10 k0
    m = DrudeMaterial(drift_velocity=-0.008)
    w = 0.78
    full = solve_spp(m, w, math.pi, model="full")
    qs = solve_spp(m, w, math.pi, model="quasistatic")
    assert full is not None and qs is not None
    assert qs.k.real > 10.0 * w
    assert abs(qs.k.real - full.k.real) < 0.02 * full.k.real


def test_quasistatic_no_mode_cases():
    m0 = DrudeMaterial()
    assert solve_spp(m0, 0.74, model="quasistatic") is None
    mb = DrudeMaterial(drift_velocity=-0.008)
    # cos(phi) = 0: drift does not act, no electrostatic wavenumber
    assert solve_spp(mb, 0.74, math.pi / 2.0, model="quasistatic") is None


def test_solve_spp_domain_errors():
    with pytest.raises(DomainError):
        solve_spp(DrudeMaterial(), 0.0)
    with pytest.raises(DomainError):
        solve_spp(DrudeMaterial(), 0.6, model="nope")


def test_window_unbiased_empty():
    assert nonreciprocal_window(DrudeMaterial()) == (0.0, 0.0)


def test_window_biased_contains_074():
    lo, hi = nonreciprocal_window(DrudeMaterial(drift_velocity=-0.008),
                                  resolution=1e-3)
    assert lo < 0.74 < hi
    # quasistatic band opens at the surface-mode frequency
    assert lo == pytest.approx(1.0 / math.sqrt(2.0), abs=2e-3)


def test_isofrequency_closed_vs_open():
    closed = trace_isofrequency(DrudeMaterial(), 0.6, n_samples=16)
    assert closed.closed
    ks = closed.wavenumbers()
    assert np.nanmax(ks) - np.nanmin(ks) < 1e-6 * np.nanmax(ks)

    open_c = trace_isofrequency(DrudeMaterial(drift_velocity=-0.008), 0.74,
                                n_samples=16)
    assert not open_c.closed
    ks = open_c.wavenumbers()
    assert np.any(np.isnan(ks))
    # surviving azimuths cluster around the counter-drift direction
    alive = open_c.phis[~np.isnan(ks)]
    assert np.all(np.abs(np.cos(alive)) > 0.0)
    assert np.all(np.cos(alive) < 0.0)


def test_scaling_exponent_synthetic():
    R = np.linspace(1.0, 30.0, 400)
    for alpha in (-0.5, -0.25):
        y = R**alpha * np.cos(4.0 * R)
        got = scaling_exponent(R, y)
        assert got == pytest.approx(alpha, abs=0.02)


def test_scaling_exponent_insufficient_data():
    with pytest.raises(InsufficientDataError):
        scaling_exponent(np.linspace(1, 2, 5), np.ones(5))
    with pytest.raises(InsufficientDataError):
        scaling_exponent(np.linspace(1, 5, 50), np.linspace(1, 5, 50) ** -0.5)
    with pytest.raises(InsufficientDataError):
        # a monotone curve has no interior maxima
        scaling_exponent(np.linspace(1, 20, 50), np.linspace(1, 20, 50) ** -0.5)

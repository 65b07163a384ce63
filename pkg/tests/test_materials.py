"""Drude response and its drift-biased Doppler shift."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spptransport import DomainError, DrudeMaterial, doppler_permittivity, permittivity


def test_default_material():
    m = DrudeMaterial()
    assert m.plasma_frequency == 1.0
    assert m.damping == 1e-3
    assert m.reciprocal


@pytest.mark.parametrize("kwargs", [
    dict(plasma_frequency=0.0),
    dict(plasma_frequency=-1.0),
    dict(damping=-1e-3),
    dict(drift_velocity=1.0),
    dict(drift_velocity=-1.5),
])
def test_invalid_material(kwargs):
    with pytest.raises(DomainError):
        DrudeMaterial(**kwargs)


def test_permittivity_reference_value():
    # 1 - 1/(omega^2 + i gamma omega) at omega = 0.6, gamma = 1e-3,
    # evaluated by conjugate-multiplication by hand
    eps = permittivity(DrudeMaterial(), 0.6)
    assert eps == pytest.approx(-1.7777700617498282 + 0.004629616769583047j,
                                rel=1e-12)


def test_permittivity_lossless_is_real():
    eps = permittivity(DrudeMaterial(damping=0.0), 0.6)
    assert isinstance(eps, float)
    assert eps == pytest.approx(1.0 - 1.0 / 0.36, rel=1e-14)


def test_surface_mode_condition():
    # eps = -1 exactly at omega_p / sqrt(2) without loss
    eps = permittivity(DrudeMaterial(damping=0.0), 1.0 / np.sqrt(2.0))
    assert eps == pytest.approx(-1.0, abs=1e-12)


def test_permittivity_array_and_pole():
    eps = permittivity(DrudeMaterial(), np.array([0.5, 1.0, 2.0]))
    assert eps.shape == (3,)
    with pytest.raises(DomainError):
        permittivity(DrudeMaterial(), 0.0)
    with pytest.raises(DomainError):
        permittivity(DrudeMaterial(), np.array([0.4, 0.0]))


@given(omega=st.floats(0.01, 10.0), gamma=st.floats(0.0, 0.1))
@settings(max_examples=60, deadline=None)
def test_passivity_and_high_frequency_limit(omega, gamma):
    m = DrudeMaterial(damping=gamma)
    eps = complex(permittivity(m, omega))
    # passive material: nonnegative absorption for real positive omega
    assert eps.imag >= -1e-15
    far = complex(permittivity(m, 1e6))
    assert abs(far - 1.0) < 1e-9


def test_doppler_passthrough_bit_exact():
    m = DrudeMaterial(drift_velocity=0.0)
    w = np.array([0.5, 0.74, 0.9])
    assert np.array_equal(doppler_permittivity(m, w, np.array([1.0, -3.0, 7.0])),
                          permittivity(m, w))


def test_doppler_shift_matches_shifted_frequency():
    m = DrudeMaterial(drift_velocity=-0.008)
    kx = 4.0
    shifted = 0.74 - kx * (-0.008)
    assert doppler_permittivity(m, 0.74, kx) == permittivity(m, shifted)


def test_doppler_domain_errors():
    m = DrudeMaterial(drift_velocity=0.5)
    with pytest.raises(DomainError):
        doppler_permittivity(m, -1.0, 0.0)
    with pytest.raises(DomainError):
        doppler_permittivity(m, 0.5, 1.0)  # shifted frequency hits zero

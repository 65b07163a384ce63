"""Flux bookkeeping, efficiency traces, and the stationary state."""

import math

import numpy as np
import pytest

from spptransport import (CouplingSet, DomainError, efficiency_trace,
                          extraction_flux, initial_state, pump_flux,
                          steady_state)


def pair(g21=0.0, c21=0.0, g12=0.0, c12=0.0, gin=0.0, gout=0.0):
    return CouplingSet(gamma=np.array([[1.0, g12], [g21, 1.0]]),
                       g=np.array([[0.0, c12], [c21, 0.0]]),
                       gamma_in=gin, gamma_out=gout)


def test_fluxes_on_known_states():
    cset = pair(gin=0.8, gout=0.6)
    w0 = 0.74
    excited = initial_state(2, "excited_first")
    # atom 1 excited: the pump is blocked, nothing sits on atom 2
    assert pump_flux(cset, excited, w0) == pytest.approx(0.0, abs=1e-12)
    assert extraction_flux(cset, excited, w0) == pytest.approx(0.0, abs=1e-12)
    ground = initial_state(2, "ground")
    assert pump_flux(cset, ground, w0) == pytest.approx(w0 * 0.8, rel=1e-12)
    bell = initial_state(2, "bell_plus")
    assert extraction_flux(cset, bell, w0) == pytest.approx(w0 * 0.6 * 0.5,
                                                           rel=1e-12)
    with pytest.raises(DomainError):
        pump_flux(cset, ground, 0.0)


def test_uncoupled_pumped_atom_steady_state():
    # pump vs decay on a lone atom: <n_1> = Gamma_in/(Gamma_in + Gamma_11)
    cset = pair(gin=0.8, gout=0.6)
    ss = steady_state(cset)
    assert ss.population(1) == pytest.approx(0.8 / 1.8, rel=1e-8)
    assert ss.population(2) == pytest.approx(0.0, abs=1e-8)


def test_steady_state_matches_trace_tail():
    cset = pair(g21=1.2, c21=0.9, gin=0.8, gout=0.8)
    ss = steady_state(cset)
    t = np.linspace(0.0, 80.0, 300)
    tr = efficiency_trace(cset, initial_state(2, "excited_first"), t, omega0=0.74)
    chi_ss = extraction_flux(cset, ss, 0.74) / pump_flux(cset, ss, 0.74)
    assert tr.chi[-1] == pytest.approx(chi_ss, abs=1e-6)
    assert 0.0 < chi_ss < 1.0


def test_efficiency_requires_pump():
    with pytest.raises(DomainError):
        efficiency_trace(pair(gout=0.5), initial_state(2, "ground"),
                         np.linspace(0, 1, 10), omega0=0.74)


def test_efficiency_zero_without_coupling():
    cset = pair(gin=0.8, gout=0.8)
    t = np.linspace(0.0, 40.0, 200)
    tr = efficiency_trace(cset, initial_state(2, "ground"), t, omega0=0.74)
    # nothing connects the atoms: no pumped energy ever reaches the drain
    assert abs(tr.chi_steady) < 1e-9
    assert np.nanmax(np.abs(tr.chi)) < 1e-9


def test_reference_subtraction():
    # starting from |e1 g2>, the unpumped reference drains the initial
    # excitation; chi only counts the pump's contribution and stays in [0, 1]
    # at late times once the initial transient has decayed
    cset = pair(g21=1.0, c21=0.5, gin=0.8, gout=0.8)
    t = np.linspace(0.0, 50.0, 300)
    tr = efficiency_trace(cset, initial_state(2, "excited_first"), t, omega0=0.74)
    assert np.isfinite(tr.chi_steady)
    assert np.nanmax(tr.chi) <= 1.0 + 1e-9
    assert tr.extraction_reference[-1] == pytest.approx(0.0, abs=1e-9)
    assert 0.0 < tr.chi_steady < 1.0

#!/usr/bin/env python3
"""Surface-mode dispersion under a DC bias and the one-way frequency window.

The drift current Doppler-shifts the metal's response, tilting the flat
quasistatic asymptote of the surface mode into two counter-propagating
branches with different cutoff frequencies. Between the two cutoffs only
one propagation direction carries a mode: the one-way window that all the
transport asymmetry in this package traces back to.
"""

import argparse
import math

import numpy as np

from spptransport import (DrudeMaterial, nonreciprocal_window,
                          quasistatic_surface_frequency, solve_spp,
                          trace_isofrequency)


def branch(material, omegas, phi):
    ks = []
    for w in omegas:
        pt = solve_spp(material, w, phi)
        ks.append(np.nan if pt is None else pt.k.real)
    return np.array(ks)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--drift", type=float, default=-0.008,
                        help="drift velocity v_d/c (default -0.008)")
    parser.add_argument("--plot", metavar="PNG",
                        help="save dispersion and isofrequency panels")
    args = parser.parse_args()

    unbiased = DrudeMaterial(damping=1e-3)
    biased = DrudeMaterial(damping=1e-3, drift_velocity=args.drift)

    w_sp = quasistatic_surface_frequency(unbiased)
    print(f"surface-mode frequency omega_sp/omega_p = {w_sp.real:.6f} "
          f"(lifetime broadening {-w_sp.imag:.2e})")

    lo, hi = nonreciprocal_window(biased)
    print(f"one-way window for v_d/c = {args.drift:+.4f}: "
          f"omega/omega_p in ({lo:.4f}, {hi:.4f})")

    omegas = np.linspace(0.55, 0.98, 80)
    k_fwd = branch(biased, omegas, 0.0)
    k_bwd = branch(biased, omegas, math.pi)
    k_unb = branch(unbiased, omegas, 0.0)

    inside = (omegas > lo) & (omegas < hi)
    n_one_way = int(np.sum(np.isfinite(k_fwd[inside]) !=
                           np.isfinite(k_bwd[inside])))
    print(f"sampled {inside.sum()} frequencies inside the window, "
          f"{n_one_way} carry exactly one direction")

    # isofrequency cut inside the window: the contour is open, i.e. a range
    # of azimuths carries no mode at all
    contour = trace_isofrequency(biased, 0.74, n_samples=48)
    gaps = sum(k is None for k in contour.ks)
    print(f"isofrequency contour at omega/omega_p = 0.74: "
          f"{'open' if not contour.closed else 'closed'}, "
          f"{gaps}/{len(contour.ks)} azimuths without a mode")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(1, 2, figsize=(9.5, 3.8))
        ax = axes[0]
        ax.plot(k_unb, omegas, "k--", lw=0.9, label="unbiased")
        ax.plot(k_fwd, omegas, label="biased, $+x$")
        ax.plot(k_bwd, omegas, label="biased, $-x$")
        ax.axhspan(lo, hi, color="orange", alpha=0.15, label="one-way window")
        ax.set_xlim(0.0, 25.0)
        ax.set_xlabel("$k c / \\omega_p$")
        ax.set_ylabel("$\\omega / \\omega_p$")
        ax.legend(fontsize=8)

        ax = axes[1]
        ks = np.array([np.nan if k is None else k.real for k in contour.ks])
        ax.plot(ks * np.cos(contour.phis), ks * np.sin(contour.phis), ".-")
        ax.set_xlabel("$k_x c / \\omega_p$")
        ax.set_ylabel("$k_y c / \\omega_p$")
        ax.set_title("isofrequency cut, $\\omega/\\omega_p = 0.74$")
        ax.axhline(0.0, color="k", lw=0.4)
        ax.axvline(0.0, color="k", lw=0.4)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=160)
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()

"""PNG figures written next to the CLI's CSV output."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

GOLDEN = (np.sqrt(5) - 1.0) / 2.0
WIDTH = 4.8
PARAMS = {
    "figure.figsize": (WIDTH, WIDTH * GOLDEN),
    "figure.dpi": 150,
    "font.size": 9,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
    "savefig.bbox": "tight",
}
IRREP_COLORS = {"A1": "#1b9e77", "A2": "#d95f02", "B1": "#7570b3", "B2": "#e7298a",
                "E": "#66a61e", "E1": "#66a61e", "E2": "#e6ab02", "unresolved": "#999999"}


def _save(fig, path) -> Path:
    path = Path(path)
    # no software/date metadata so reruns give identical bytes
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def spectrum_figure(states, path, title=""):
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots()
        for lab in sorted({s.irrep for s in states}):
            sel = [s for s in states if s.irrep == lab]
            ax.scatter([s.detuning for s in sel], [s.decay for s in sel], s=8,
                       color=IRREP_COLORS.get(lab, "k"), label=lab)
        ax.set_yscale("log")
        ax.set_xlabel(r"$\Delta\omega/\Gamma_0$")
        ax.set_ylabel(r"$\Gamma/\Gamma_0$")
        ax.legend(ncol=3, frameon=False)
        ax.set_title(title)
        return _save(fig, path)


def sweep_figure(branches, path, xlabel=r"$\tilde a$"):
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots()
        for b in branches:
            ax.semilogy(b.parameters, b.decays, "o-", label=b.label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(r"$\Gamma/\Gamma_0$")
        ax.legend(frameon=False)
        return _save(fig, path)


def dispersion_figure(samples, path, corners=()):
    s = np.array([x.s for x in samples])
    det = np.array([x.detuning for x in samples])
    dec = np.array([x.decay for x in samples])
    with plt.rc_context(PARAMS):
        fig, (a1, a2) = plt.subplots(2, 1, sharex=True)
        a1.plot(s, det, "k-")
        a1.set_ylabel(r"$\Delta\omega/\Gamma_0$")
        a2.plot(s, dec, "r-")
        a2.set_ylabel(r"$\Gamma/\Gamma_0$")
        a2.set_xlabel(r"$k$ path ($\lambda_0^{-1}$)")
        for x in corners:
            a1.axvline(x, color="0.7", lw=0.6)
            a2.axvline(x, color="0.7", lw=0.6)
        return _save(fig, path)


def map_figure(samples, path):
    kx = np.array([x.k.kx for x in samples])
    ky = np.array([x.k.ky for x in samples])
    det = np.array([x.detuning for x in samples])
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots()
        sc = ax.scatter(kx, ky, c=det, s=12, cmap="viridis")
        fig.colorbar(sc, ax=ax, label=r"$\Delta\omega/\Gamma_0$")
        th = np.linspace(0, np.pi / 2, 100)
        ax.plot(2 * np.pi * np.cos(th), 2 * np.pi * np.sin(th), "w--", lw=0.8)
        ax.set_xlabel(r"$k_x$")
        ax.set_ylabel(r"$k_y$")
        ax.set_aspect("equal")
        return _save(fig, path)


def curve_figure(x, y, path, xlabel, ylabel, logy=False, hline=None):
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots()
        ax.plot(x, y, "o-")
        if logy:
            ax.set_yscale("log")
        if hline is not None:
            ax.axhline(hline, color="0.6", lw=0.8)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        return _save(fig, path)


def scaling_figure(rows, fit, path):
    x = np.array([r.n_tot for r in rows], dtype=float)
    y = np.array([r.gamma_min for r in rows])
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots()
        ax.loglog(x, y, "o", label=rows[0].branch)
        xx = np.geomspace(x.min(), x.max(), 50)
        ax.loglog(xx, fit.prefactor * xx ** fit.exponent, "--", label=f"$N_{{tot}}^{{{fit.exponent:.2f}}}$")
        ax.set_xlabel(r"$N_{tot}$")
        ax.set_ylabel(r"$\Gamma_{min}/\Gamma_0$")
        ax.legend(frameon=False)
        return _save(fig, path)


def scattering_figure(spec, columns, labels, path):
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots()
        ax.plot(spec.detunings, spec.total, "k-", label="total")
        for c, lab in zip(columns, labels):
            ax.plot(spec.detunings, spec.modal[c], "-", label=lab)
        ax.set_xlabel(r"$\Delta\omega/\Gamma_0$")
        ax.set_ylabel(r"$\sigma/\sigma_0$")
        ax.legend(frameon=False)
        return _save(fig, path)


def corner_figure(rows, path):
    q = np.array([r.q0 for r in rows])
    with plt.rc_context(PARAMS):
        fig, ax = plt.subplots()
        ax.loglog(q, [r.corner_nn for r in rows], "o-", label=r"$|\psi^{(N,N)}_{1,1}|$")
        ax.loglog(q, [r.corner_nn2 for r in rows], "s-", label=r"$|\psi^{(N-2,N)-}_{1,2}|$")
        ax.set_xlabel(r"$q_0$")
        ax.legend(frameon=False)
        return _save(fig, path)

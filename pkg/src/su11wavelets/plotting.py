"""Figure rendering for the command-line report path.

Matplotlib is imported lazily and forced onto the Agg backend so batch jobs can
render to files on headless machines.  Every function writes one PNG next to the
delimited output it illustrates and returns the path.
"""

import math


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["figure.dpi"] = 110
    plt.rcParams["savefig.dpi"] = 150
    plt.rcParams["axes.grid"] = True
    plt.rcParams["grid.alpha"] = 0.3
    return plt


def plot_samples(path, x, re, im, xlabel, title):
    """Line plot of the real and imaginary parts of a sampled state."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, re, label="re", lw=1.2)
    if max(abs(v) for v in im) > 0:
        ax.plot(x, im, label="im", lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("value")
    ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_scalogram(path, grid, title="wavelet coefficients |C(a,b)|"):
    """Heat map of |C| over translation and log-scale."""
    import numpy as np

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    mag = np.abs(grid.values)
    mesh = ax.pcolormesh(grid.b, grid.a, mag, shading="nearest", cmap="viridis")
    ax.set_yscale("log")
    ax.set_xlabel("b (translation)")
    ax.set_ylabel("a (scale)")
    ax.set_title(title)
    fig.colorbar(mesh, ax=ax, label="|C|")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_reconstruction(path, y, rec_re, rec_im, ref=None, title="reconstruction"):
    """Reconstructed signal, optionally overlaid on the reference samples."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(y, rec_re, label="reconstruction re", lw=1.2)
    if max(abs(v) for v in rec_im) > 0:
        ax.plot(y, rec_im, label="reconstruction im", lw=1.0, alpha=0.8)
    if ref is not None:
        ax.plot(ref[0], ref[1], "k--", label="reference re", lw=1.0, alpha=0.7)
    ax.set_xlabel("y")
    ax.set_ylabel("value")
    ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_verify_report(path, checks, title="verification residuals"):
    """Horizontal bars of residual vs tolerance per check, log scale."""
    plt = _pyplot()
    names = [c.name for c in checks]
    floor = 1e-18
    residuals = [max(c.residual, floor) if math.isfinite(c.residual) else 1.0 for c in checks]
    tols = [max(c.tol, floor) for c in checks]
    colors = ["tab:green" if c.passed else "tab:red" for c in checks]
    fig, ax = plt.subplots(figsize=(8, 0.38 * len(checks) + 1.6))
    ypos = range(len(checks))
    ax.barh(ypos, residuals, color=colors, alpha=0.8, label="residual")
    for y, t in zip(ypos, tols):
        ax.plot([t, t], [y - 0.4, y + 0.4], "k-", lw=1.4)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("residual (bar) vs tolerance (tick)")
    ax.set_title(title)
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path

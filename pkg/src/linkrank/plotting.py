"""Matplotlib figures for the diagnose and spectrum reports.

Everything renders off-screen (Agg) straight to files.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

# PNG metadata without the software/version stamp keeps reruns byte-stable
_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def plot_convergence(profile, residuals, lambda2_mag, path, title=None) -> Path:
    """Semilog plot of error to the reference, step residuals and ``|lambda2|**n``."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if residuals:
        ax.semilogy(range(1, len(residuals) + 1), [max(r, 1e-300) for r in residuals],
                    lw=1, color="0.55", label=r"$\|I_n - I_{n-1}\|_1$")
    if profile:
        ns = [row.n for row in profile]
        ax.semilogy(ns, [max(row.error, 1e-300) for row in profile],
                    lw=1.5, color="C0", label=r"$\|I_n - I\|_1$")
        if lambda2_mag and lambda2_mag > 0:
            ax.semilogy(ns, [max(lambda2_mag**n, 1e-300) for n in ns], ls="--", color="C3",
                        label=rf"$|\lambda_2|^n$, $|\lambda_2|={lambda2_mag:.4f}$")
    ax.set_xlabel("step n")
    ax.set_ylabel("L1 distance")
    ax.set_ylim(bottom=1e-17)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)


def plot_spectrum(report, path, title=None) -> Path:
    """Gerschgorin discs of ``H.T`` with the eigenvalues and the unit circle."""
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    reach = 1.0
    for c, r in sorted({(float(d.center), float(d.radius)) for d in report.discs}):
        ax.add_patch(Circle((c, 0.0), r, fill=True, alpha=0.12, color="C0"))
        ax.add_patch(Circle((c, 0.0), r, fill=False, lw=1, color="C0"))
        reach = max(reach, abs(c) + r)
    t = [2 * math.pi * k / 256 for k in range(257)]
    ax.plot([math.cos(x) for x in t], [math.sin(x) for x in t], ls=":", color="k", lw=0.8)
    if report.roots:
        ax.plot([z.real for z in report.roots], [z.imag for z in report.roots],
                "x", color="C3", ms=8, mew=1.5, label="eigenvalues")
        ax.legend(frameon=False, loc="upper right", fontsize=8)
    lim = 1.15 * reach
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    return _finish(fig, path)

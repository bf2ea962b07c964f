"""Figure rendering for the report path: one PNG per panel, drawn from the
same arrays the CSVs are written from. Cosmetic only; the CSVs stay the
canonical output."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_closed_panel(path, curves, xlabel, title):
    """curves: list of (label, param_values, xi_max)."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, values, xi in curves:
        ax.plot(values, xi, lw=1.2, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("peak extractable work")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_open_panel(path, trajectories, sizes, peaks, fit, title):
    """trajectories: list of (n, times, xi); inset-style scaling panel on the right."""
    fig, (ax_t, ax_s) = plt.subplots(1, 2, figsize=(9, 4), width_ratios=[2, 1])
    for n, times, xi in trajectories:
        ax_t.plot(times, xi, lw=1.0, label=f"N={n}")
    ax_t.set_xlabel("t")
    ax_t.set_ylabel("extractable work")
    ax_t.set_title(title)
    ax_t.legend(fontsize=8)
    ax_s.plot(sizes, peaks, "o", ms=5)
    if fit is not None:
        import numpy as np

        grid = np.linspace(min(sizes), max(sizes), 200)
        ax_s.plot(grid, fit.a * grid**fit.alpha, "-", lw=1.0,
                  label=f"A={fit.a:.3g}, alpha={fit.alpha:.3g}")
        ax_s.legend(fontsize=8)
    ax_s.set_xlabel("N")
    ax_s.set_ylabel("peak work")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

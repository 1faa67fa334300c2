"""Figure rendering for CLI artifacts.

Every report command writes a PNG next to its delimited output so results
can be eyeballed without a separate plotting step.  Uses the Agg backend;
nothing here opens a window.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_curve", "save_intensity_path", "save_counting_path"]

_FIGSIZE = (8.0, 5.0)


def _new_axes(xlabel, ylabel, title=None):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_curve(grid, path, logx=False, title=None):
    """Render a CurveGrid to a PNG file."""
    fig, ax = _new_axes(
        grid.meta.get("xlabel", "x"), grid.meta.get("ylabel", "y"), title
    )
    ax.plot(grid.x, grid.y, lw=1.5)
    if logx:
        ax.set_xscale("log")
    _finish(fig, path)


def save_intensity_path(path_obj, path, title=None):
    """Render a conditional-intensity trajectory with event ticks."""
    fig, ax = _new_axes("t", "lambda(t|H_t)", title)
    ax.plot(path_obj.grid, path_obj.values, lw=1.0)
    epochs = path_obj.source.epochs
    if epochs.size:
        ax.plot(epochs, np.full(epochs.shape, ax.get_ylim()[0]), "|", ms=12, color="k")
    _finish(fig, path)


def save_counting_path(seq, path, title=None):
    """Render the counting process N(t) of an event sequence as a staircase."""
    fig, ax = _new_axes("t", "N(t)", title)
    t = np.concatenate([[0.0], seq.epochs, [seq.horizon]])
    n = np.concatenate([[0], np.arange(1, len(seq.epochs) + 1), [len(seq.epochs)]])
    ax.step(t, n, where="post", lw=1.5)
    _finish(fig, path)

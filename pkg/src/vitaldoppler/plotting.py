"""Matplotlib renderings of the scenario outputs.

Figures are built on :class:`matplotlib.figure.Figure` directly (no pyplot
state), so rendering is safe to call from library code and worker threads.
"""

from pathlib import Path

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure

from .fileio import DISPLAY_RANGE_DB

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.0,
    "savefig.dpi": 150,
}
WIDTH = 6.4
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _figure(nrows=1, height=None):
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(WIDTH, height or WIDTH * GOLDEN * (0.7 if nrows > 1 else 1) * nrows))
        axes = fig.subplots(nrows, 1, squeeze=False)[:, 0]
    return fig, axes


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with mpl.rc_context(STYLE):
        fig.tight_layout()
        # no Software/date metadata so repeated runs give identical files
        fig.savefig(path, format="png", metadata={"Software": None})
    return path


def plot_trace(ax, trace, scale=1e3, unit="mm"):
    ax.plot(trace.time, trace.samples * scale)
    ax.set_ylabel(f"displacement ({unit})")
    ax.set_title(f"{trace.label.value}")


def plot_velocity_map(ax, vmap, display_range_db=DISPLAY_RANGE_DB):
    top = vmap.magnitude_db.max()
    t, v = vmap.time_axis, vmap.velocity_axis * 100.0
    im = ax.imshow(
        vmap.magnitude_db,
        origin="lower",
        aspect="auto",
        extent=(t[0], t[-1], v[0], v[-1]),
        vmin=top - display_range_db,
        vmax=top,
        cmap="viridis",
        interpolation="nearest",
        rasterized=True,
    )
    ax.grid(False)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("velocity (cm/s)")
    return im


def plot_spectrum(ax, spec, fmax=5.0, markers=()):
    """Spectrum up to ``fmax`` with dashed guides at multiples of each marker rate."""
    keep = spec.frequencies <= fmax
    ax.plot(spec.frequencies[keep], spec.magnitude_db[keep])
    for rate, style in zip(markers, ("C1--", "C3:")):
        if rate:
            for k in range(1, int(fmax / rate) + 1):
                ax.axvline(k * rate, color=style[:2], ls=style[2:], lw=0.6, alpha=0.7)
    ax.set_xlim(0, fmax)
    # the mean-removed DC bin sits at the floor; keep it out of the y-range
    shown = spec.magnitude_db[keep][1:]
    if shown.size:
        ax.set_ylim(shown.min() - 5.0, shown.max() + 5.0)
    ax.set_xlabel("frequency (Hz)")
    ax.set_ylabel("magnitude (dB)")


def motion_figure(sc, path):
    fig, axes = _figure(3)
    plot_trace(axes[0], sc.respiration)
    plot_trace(axes[1], sc.heartbeat, scale=1e6, unit="um")
    plot_trace(axes[2], sc.combined)
    axes[-1].set_xlabel("time (s)")
    return _save(fig, path)


def map_figure(vmap, title, path):
    fig, (ax,) = _figure(1)
    im = plot_velocity_map(ax, vmap)
    fig.colorbar(im, ax=ax, label="dB")
    ax.set_title(title)
    return _save(fig, path)


def processing_figure(sc, path):
    """Phase derivative over the combined velocity-time map, time axes shared."""
    fig, axes = _figure(2)
    ph = sc.unwrapped_phase
    axes[0].plot(ph.time, sc.phase_rate)
    axes[0].set_ylabel("phase rate (rad/s)")
    axes[0].set_title(f"{sc.cfg.model.value}: unwrapped phase derivative")
    plot_velocity_map(axes[1], sc.combined_map)
    axes[1].set_xlim(axes[0].get_xlim())
    axes[1].set_title("velocity-time map")
    return _save(fig, path)


def spectrum_figure(spec, title, path, markers):
    fig, (ax,) = _figure(1)
    plot_spectrum(ax, spec, markers=markers)
    ax.set_title(title)
    return _save(fig, path)


def render_figures(sc, stages, directory):
    """Render the figures for ``stages``; yields ``(path, role)`` pairs."""
    directory = Path(directory)
    rates = (sc.cfg.vitals.respiration_rate_fb, sc.cfg.vitals.heart_rate_fh)
    model = sc.cfg.model.value
    if "synth" in stages:
        yield motion_figure(sc, directory / "motion.png"), "figure: displacement traces"
    if "map" in stages:
        for name, vmap in (("respiration", sc.respiration_map), ("heartbeat", sc.heartbeat_map)):
            path = map_figure(vmap, f"velocity-time map, {name}", directory / f"vtm_{name}.png")
            yield path, f"figure: velocity-time map, {name}"
    if "phase" in stages:
        yield processing_figure(sc, directory / "processing.png"), "figure: processing output"
        path = spectrum_figure(
            sc.phase_spectrum, f"{model}: unwrapped-phase spectrum",
            directory / "phase_spectrum.png", rates,
        )
        yield path, "figure: unwrapped-phase spectrum"
    if "slice" in stages:
        v_cm = sc.slice_linear.slice_velocity * 100.0
        for name, spec in (("linear", sc.slice_spectrum_linear), ("log", sc.slice_spectrum_log)):
            path = spectrum_figure(
                spec, f"{model}: spectrum of {v_cm:.2f} cm/s slice ({name})",
                directory / f"slice_spectrum_{name}.png", rates,
            )
            yield path, f"figure: slice spectrum, {name}"

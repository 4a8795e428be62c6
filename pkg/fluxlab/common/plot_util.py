"""SVG figures rendered from CSV artifacts only.

The Agg backend, a fixed hash salt and an empty Date entry keep the SVG
bytes identical between reruns of the same data.
"""
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

HASH_SALT = 'fluxlab'
LABEL_ORDER = ('PD0', 'PD1', 'PD2')
LABEL_COLORS = ('#c0392b', '#f1c40f', '#2e86c1')


def _save(fig, svg_path):
    with matplotlib.rc_context({'svg.hashsalt': HASH_SALT, 'svg.fonttype': 'none'}):
        fig.savefig(svg_path, format='svg', metadata={'Date': None})
    plt.close(fig)
    return svg_path


def line_plot(csv_path, svg_path, x, ys, xlabel=None, ylabel=None, title=None, hline=None, logx=False, logy=False,
              markers=False):
    df = pd.read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for y in ys:
        ax.plot(df[x], df[y], label=y, marker='o' if markers else None, markersize=3)
    if hline is not None:
        ax.axhline(hline, color='gray', linewidth=0.8, linestyle='--')
    if logx:
        ax.set_xscale('log')
    if logy:
        ax.set_yscale('log')
    ax.set_xlabel(xlabel or x)
    if ylabel:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(ys) > 1:
        ax.legend(loc='best', fontsize='small')
    fig.tight_layout()
    return _save(fig, svg_path)


def label_grid_plot(csv_path, svg_path, x='gamma_over_j', y='a', label='label', boundaries_csv=None, title=None):
    """Color-cell grid of PD labels with optional analytic boundary curves on top."""
    df = pd.read_csv(csv_path)
    xs = np.unique(df[x].values)
    ys = np.unique(df[y].values)
    grid = np.full((len(ys), len(xs)), np.nan)
    ix = np.searchsorted(xs, df[x].values)
    iy = np.searchsorted(ys, df[y].values)
    grid[iy, ix] = [LABEL_ORDER.index(v) for v in df[label].values]

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    cmap = ListedColormap(LABEL_COLORS)
    ax.pcolormesh(_edges(xs), _edges(ys), grid, cmap=cmap, vmin=-0.5, vmax=2.5, shading='flat')
    if boundaries_csv is not None:
        b = pd.read_csv(boundaries_csv)
        for col in ('gamma_pd0_pd1', 'gamma_pd1_pd2'):
            finite = np.isfinite(b[col].values)
            ax.plot(b[col].values[finite], b['a'].values[finite], color='black', linewidth=0.8)
        ax.set_xlim(_edges(xs)[0], _edges(xs)[-1])
    handles = [Patch(color=c, label=l) for c, l in zip(LABEL_COLORS, LABEL_ORDER)]
    ax.legend(handles=handles, loc='upper right', fontsize='small')
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, svg_path)


def _edges(centers):
    c = np.asarray(centers, dtype=float)
    if len(c) == 1:
        return np.array([c[0] - 0.5, c[0] + 0.5])
    mid = 0.5 * (c[1:] + c[:-1])
    return np.concatenate([[c[0] - (mid[0] - c[0])], mid, [c[-1] + (c[-1] - mid[-1])]])

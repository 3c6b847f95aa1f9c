#!/usr/bin/env python3
"""
🎨 RENDERING SVG - Rilevamento FPGA Riciclati
Heatmap di residui e frequenze, curve ROC e punteggi per percorso come SVG riproducibili
"""

import logging
from pathlib import Path
from typing import Collection, Sequence, Union

import matplotlib
import numpy as np
from matplotlib import colors
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from config import get_report_config
from detector.recycled_detector import DeviceScore
from utils.errors import InvalidParameterError

from .evaluation_report import FrequencyMap, ResidualMap, RocCurve

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _save(fig: Figure, path: PathLike) -> Path:
    """Salva in SVG con hash salt fisso e senza data, così due esecuzioni danno gli stessi byte"""
    cfg = get_report_config()
    target = Path(path)
    FigureCanvasSVG(fig)
    try:
        if target.parent != Path(""):
            target.parent.mkdir(parents=True, exist_ok=True)
        with matplotlib.rc_context({'svg.hashsalt': cfg['svg_hashsalt'], 'svg.fonttype': 'path'}):
            fig.savefig(target, format="svg", dpi=cfg['figure_dpi'], metadata={'Date': None})
    except OSError as e:
        raise OSError(f"scrittura SVG fallita su {target}: {e}") from e
    logger.debug(f"💾 SVG scritto: {target}")
    return target


def _grid_axes(fig: Figure, columns: Sequence[int], n_rows: int):
    ax = fig.add_subplot(111)
    ax.set_xticks(np.arange(len(columns)))
    ax.set_xticklabels([str(c) for c in columns])
    ax.set_xlabel("colonna CLB")
    ax.set_ylabel("riga CLB")
    ax.set_ylim(-0.5, n_rows - 0.5)
    return ax


def render_residual_svg(residuals: ResidualMap, path: PathLike) -> Path:
    """
    Heatmap dei residui con scala divergente simmetrica centrata in 0.

    Colormap RdBu_r lineare su [-m, m] con m = max |residuo| (1 MHz se tutto è nullo);
    minimo e massimo sono stampati nel titolo.
    """
    cfg = get_report_config()
    grid = residuals.residuals
    bound = float(np.max(np.abs(grid))) if grid.size else 0.0
    norm = colors.Normalize(vmin=-(bound or 1.0), vmax=bound or 1.0)

    fig = Figure(figsize=(6, 8))
    ax = _grid_axes(fig, residuals.columns, grid.shape[1])
    image = ax.imshow(grid.T, cmap=cfg['residual_cmap'], norm=norm, origin="lower",
                      aspect="auto", interpolation="nearest")
    fig.colorbar(image, ax=ax, label="residuo (MHz)")
    ax.set_title(f"Residui percorso {residuals.path}: min {grid.min():.3f} MHz, max {grid.max():.3f} MHz")
    return _save(fig, path)


def render_frequency_svg(frequencies: FrequencyMap, path: PathLike) -> Path:
    cfg = get_report_config()
    grid = frequencies.values
    fig = Figure(figsize=(6, 8))
    ax = _grid_axes(fig, frequencies.columns, grid.shape[1])
    image = ax.imshow(grid.T, cmap=cfg['frequency_cmap'], origin="lower", aspect="auto",
                      interpolation="nearest", vmin=float(grid.min()), vmax=float(grid.max()))
    fig.colorbar(image, ax=ax, label="frequenza (MHz)")
    ax.set_title(f"Frequenze percorso {frequencies.path}: min {grid.min():.3f} MHz, max {grid.max():.3f} MHz")
    return _save(fig, path)


def render_roc_svg(curve: RocCurve, path: PathLike, title: str = "ROC") -> Path:
    """Spezzata (FPR, TPR) con il punto migliore evidenziato"""
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot(111)
    ax.plot(curve.fpr, curve.tpr, color="tab:blue", marker=".", label=f"AUC {curve.auc:.3f}")
    ax.plot([0, 1], [0, 1], color="0.7", linestyle="--", linewidth=0.8)
    _, best_fpr, best_tpr = curve.best_point
    ax.plot([best_fpr], [best_tpr], marker="o", markersize=9, color="tab:red", linestyle="none",
            label=f"migliore (FPR {best_fpr:.2f}, TPR {best_tpr:.2f})")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_title(title)
    ax.legend(loc="lower right")
    return _save(fig, path)


def render_path_scores_svg(device_scores: Sequence[DeviceScore], aged_ids: Collection[str],
                           path: PathLike) -> Path:
    """Massimo punteggio per percorso LUT di ogni dispositivo; invecchiati in rosso"""
    if not device_scores:
        raise InvalidParameterError("nessun dispositivo da rappresentare")
    fig = Figure(figsize=(8, 5))
    ax = fig.add_subplot(111)
    for score in sorted(device_scores, key=lambda s: s.device_id):
        aged = score.device_id in aged_ids
        ax.plot(np.arange(score.n_paths), score.per_path_max,
                color="tab:red" if aged else "0.6", linewidth=1.2 if aged else 0.8,
                alpha=0.9 if aged else 0.6, label=score.device_id if aged else None)
    ax.set_xlabel("percorso LUT")
    ax.set_ylabel("punteggio di anomalia massimo")
    ax.set_title("Punteggi per percorso (grigio: nuovi, rosso: invecchiati)")
    if any(s.device_id in aged_ids for s in device_scores):
        ax.legend(loc="upper right", fontsize="small")
    return _save(fig, path)

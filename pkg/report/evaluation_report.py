#!/usr/bin/env python3
"""
📊 REPORT DI VALUTAZIONE - Rilevamento FPGA Riciclati
Curve ROC sulle coorti, mappe dei residui tra colonne adiacenti e tabelle CSV deterministiche
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from sklearn.metrics import auc as trapezoid_auc

from detector.recycled_detector import SCORE_COLUMNS, DeviceScore, Verdict, score_rows
from fingerprint.fingerprint_model import FrequencyFingerprint, adjacent_pairs, pair_residuals
from utils.common_utils import CommonUtils
from utils.data_utils import DataUtils
from utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
ROC_COLUMNS = ['threshold', 'fpr', 'tpr']
RESIDUAL_COLUMNS = ['path', 'col', 'row', 'residual_mhz']
FREQUENCY_COLUMNS = ['path', 'col', 'row', 'freq_mhz']
VERDICT_COLUMNS = ['device', 'cohort', 'device_statistic', 'threshold', 'label']
STATISTIC_COLUMNS = ['device', 'cohort', 'circuit', 'stress_hours', 'device_statistic']
SUMMARY_COLUMNS = ['device', 'cohort', 'circuit', 'stress_hours', 'equivalent_days', 'device_statistic',
                   'proposed_label', 'baseline_optimal_k', 'baseline_label']


@dataclass(frozen=True)
class RocCurve:
    """Punti (soglia, FPR, TPR) in ordine di soglia decrescente, con sentinelle ±∞"""
    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float
    best_index: int

    def __len__(self) -> int:
        return int(self.thresholds.size)

    @property
    def points(self) -> List[Tuple[float, float, float]]:
        return [(float(t), float(f), float(p)) for t, f, p in zip(self.thresholds, self.fpr, self.tpr)]

    @property
    def best_point(self) -> Tuple[float, float, float]:
        return self.points[self.best_index]


@dataclass(frozen=True)
class ResidualMap:
    """Residui freq(col, row) − freq(col+1, row) indicizzati sulla colonna sinistra"""
    path: int
    columns: Tuple[int, ...]
    residuals: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        cols, rows = np.meshgrid(np.asarray(self.columns), np.arange(self.residuals.shape[1]), indexing="ij")
        return pd.DataFrame({
            'path': np.full(cols.size, self.path),
            'col': cols.ravel(),
            'row': rows.ravel(),
            'residual_mhz': self.residuals.ravel(),
        }, columns=RESIDUAL_COLUMNS)


@dataclass(frozen=True)
class FrequencyMap:
    path: int
    columns: Tuple[int, ...]
    values: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        cols, rows = np.meshgrid(np.asarray(self.columns), np.arange(self.values.shape[1]), indexing="ij")
        return pd.DataFrame({
            'path': np.full(cols.size, self.path),
            'col': cols.ravel(),
            'row': rows.ravel(),
            'freq_mhz': self.values.ravel(),
        }, columns=FREQUENCY_COLUMNS)


def roc(fresh_stats: Sequence[float], aged_stats: Sequence[float]) -> RocCurve:
    """
    Sweep delle soglie sull'unione delle statistiche (più ±∞).

    FPR = frazione dei nuovi > soglia, TPR = frazione degli invecchiati > soglia; AUC con
    la regola dei trapezi. Il punto migliore massimizza TPR − FPR (parità → FPR minore,
    poi la soglia più alta).
    """
    fresh = DataUtils.as_sample_vector(fresh_stats, "fresh_stats")
    aged = DataUtils.as_sample_vector(aged_stats, "aged_stats")

    union = np.unique(np.concatenate([fresh, aged]))[::-1]
    thresholds = np.concatenate(([np.inf], union, [-np.inf]))
    fpr = np.array([np.mean(fresh > t) for t in thresholds])
    tpr = np.array([np.mean(aged > t) for t in thresholds])
    area = float(trapezoid_auc(fpr, tpr))

    best = 0
    for i in range(1, thresholds.size):
        gain, best_gain = tpr[i] - fpr[i], tpr[best] - fpr[best]
        if gain > best_gain or (gain == best_gain and fpr[i] < fpr[best]):
            best = i
    return RocCurve(thresholds=thresholds, fpr=fpr, tpr=tpr, auc=min(max(area, 0.0), 1.0), best_index=best)


def best_threshold(curve: RocCurve) -> float:
    """Soglia del punto migliore; se è una sentinella usa la statistica finita più vicina"""
    threshold = float(curve.thresholds[curve.best_index])
    if np.isfinite(threshold):
        return threshold
    finite = curve.thresholds[np.isfinite(curve.thresholds)]
    return float(finite.max() if threshold > 0 else finite.min())


def residual_map(fp: FrequencyFingerprint, path: int, reverse: bool = False) -> ResidualMap:
    """Mappa dei residui tra colonne adiacenti; reverse=True calcola destra − sinistra"""
    if not 0 <= path < fp.layout.n_paths:
        raise InvalidParameterError(f"percorso {path} fuori da [0, {fp.layout.n_paths})")
    pairs = adjacent_pairs(fp.layout)
    residuals = np.array(list(pair_residuals(fp, path, pairs).values()))
    if reverse:
        residuals = -residuals
    residuals = residuals.reshape(len(pairs), fp.layout.rows)
    return ResidualMap(path=int(path), columns=tuple(left for left, _ in pairs), residuals=residuals)


def frequency_map(fp: FrequencyFingerprint, path: int) -> FrequencyMap:
    if not 0 <= path < fp.layout.n_paths:
        raise InvalidParameterError(f"percorso {path} fuori da [0, {fp.layout.n_paths})")
    return FrequencyMap(path=int(path), columns=fp.layout.columns, values=np.array(fp.freqs[path]))


def write_roc_csv(curve: RocCurve, path: PathLike) -> Path:
    frame = pd.DataFrame({'threshold': curve.thresholds, 'fpr': curve.fpr, 'tpr': curve.tpr}, columns=ROC_COLUMNS)
    return CommonUtils.export_to_csv(frame, path, columns=ROC_COLUMNS)


def write_residual_csv(residuals: ResidualMap, path: PathLike) -> Path:
    return CommonUtils.export_to_csv(residuals.to_frame(), path, columns=RESIDUAL_COLUMNS)


def write_frequency_csv(frequencies: FrequencyMap, path: PathLike) -> Path:
    return CommonUtils.export_to_csv(frequencies.to_frame(), path, columns=FREQUENCY_COLUMNS)


def write_scores_csv(device_scores: Sequence[DeviceScore], path: PathLike) -> Path:
    rows = [row for score in sorted(device_scores, key=lambda s: s.device_id) for row in score_rows(score)]
    return CommonUtils.export_to_csv(rows, path, columns=SCORE_COLUMNS)


def write_verdicts_csv(verdicts: Sequence[Verdict], path: PathLike,
                       cohorts: Optional[Mapping[str, str]] = None) -> Path:
    cohorts = cohorts or {}
    rows = [{
        'device': v.device_id,
        'cohort': cohorts.get(v.device_id, ''),
        'device_statistic': v.device_statistic,
        'threshold': v.threshold,
        'label': v.label,
    } for v in sorted(verdicts, key=lambda v: v.device_id)]
    return CommonUtils.export_to_csv(rows, path, columns=VERDICT_COLUMNS)


def statistic_rows(device_scores: Sequence[DeviceScore],
                   records: Mapping[str, Mapping[str, Any]]) -> List[Dict[str, Any]]:
    rows = []
    for score in sorted(device_scores, key=lambda s: s.device_id):
        record = records.get(score.device_id, {})
        rows.append({
            'device': score.device_id,
            'cohort': record.get('status', ''),
            'circuit': record.get('circuit') or '',
            'stress_hours': record.get('stress_hours', ''),
            'device_statistic': score.device_statistic,
        })
    return rows


def summary_rows(verdicts: Sequence[Verdict], records: Mapping[str, Mapping[str, Any]],
                 baseline: Optional[Mapping[str, Any]] = None) -> List[Dict[str, Any]]:
    """Tabella riassuntiva: statistica, verdetto proposto e, se calcolato, verdetto della baseline"""
    baseline = baseline or {}
    rows = []
    for verdict in sorted(verdicts, key=lambda v: v.device_id):
        record = records.get(verdict.device_id, {})
        base = baseline.get(verdict.device_id)
        rows.append({
            'device': verdict.device_id,
            'cohort': record.get('status', ''),
            'circuit': record.get('circuit') or '',
            'stress_hours': record.get('stress_hours', ''),
            'equivalent_days': record.get('equivalent_days', ''),
            'device_statistic': verdict.device_statistic,
            'proposed_label': verdict.label,
            'baseline_optimal_k': base.optimal_k if base is not None else '',
            'baseline_label': base.label if base is not None else '',
        })
    return rows

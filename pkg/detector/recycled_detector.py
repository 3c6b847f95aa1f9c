#!/usr/bin/env python3
"""
🔍 RILEVATORE FPGA RICICLATI - Rilevamento FPGA Riciclati
Confronto uLSIF tra colonne adiacenti per ogni percorso LUT e verdetto a livello di dispositivo
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from config import get_runtime_config
from fingerprint.fingerprint_model import FrequencyFingerprint, adjacent_pairs
from ulsif.density_ratio import AnomalyScores, UlsifModel, UlsifSettings, anomaly_scores, select_model
from utils.errors import InvalidInputError, InvalidParameterError

logger = logging.getLogger(__name__)

FORWARD = "forward"
BACKWARD = "backward"
FRESH = "fresh"
RECYCLED = "recycled"
SCORE_COLUMNS = ['device', 'path', 'col_left', 'col_right', 'direction', 'score']


@dataclass(frozen=True)
class DetectorSettings:
    ulsif: UlsifSettings = field(default_factory=UlsifSettings)
    workers: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise InvalidParameterError(f"workers deve essere ≥ 1, ricevuto {self.workers}")

    @classmethod
    def from_config(cls, workers: Optional[int] = None) -> "DetectorSettings":
        runtime = get_runtime_config()
        return cls(ulsif=UlsifSettings.from_config(), workers=int(workers or runtime['workers']))


@dataclass(frozen=True)
class ComparisonResult:
    """
    Confronto di una coppia di colonne sullo stesso percorso.

    forward: colonna sinistra come inlier, destra come test; backward: l'inverso.
    Ogni direzione valuta entrambi i vettori (sorgenti "left"/"right").
    """
    path: int
    col_left: int
    col_right: int
    forward: AnomalyScores
    backward: AnomalyScores
    forward_model: Optional[UlsifModel] = None
    backward_model: Optional[UlsifModel] = None

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.col_left, self.col_right)

    @property
    def max_score(self) -> float:
        return max(self.forward.max_score, self.backward.max_score)

    def direction_max(self) -> Dict[str, float]:
        return {FORWARD: self.forward.max_score, BACKWARD: self.backward.max_score}


@dataclass(frozen=True)
class DeviceScore:
    device_id: str
    n_paths: int
    comparisons: Tuple[ComparisonResult, ...]

    @classmethod
    def from_comparisons(cls, device_id: str, n_paths: int,
                         comparisons: Iterable[ComparisonResult]) -> "DeviceScore":
        ordered = tuple(sorted(comparisons, key=lambda c: (c.path, c.col_left, c.col_right)))
        for c in ordered:
            if not 0 <= c.path < n_paths:
                raise InvalidParameterError(f"{device_id}: percorso {c.path} fuori da [0, {n_paths})")
        return cls(device_id=device_id, n_paths=n_paths, comparisons=ordered)

    @property
    def per_path_max(self) -> np.ndarray:
        maxima = np.full(self.n_paths, -np.inf)
        for c in self.comparisons:
            maxima[c.path] = max(maxima[c.path], c.max_score)
        return maxima

    @property
    def device_statistic(self) -> float:
        return float(np.max(self.per_path_max))

    def top_comparison(self) -> Optional[ComparisonResult]:
        return max(self.comparisons, key=lambda c: c.max_score, default=None)


@dataclass(frozen=True)
class Verdict:
    device_id: str
    device_statistic: float
    threshold: float
    label: str

    @property
    def is_recycled(self) -> bool:
        return self.label == RECYCLED


def _direction(model: UlsifModel, left: np.ndarray, right: np.ndarray, ratio_floor: float) -> AnomalyScores:
    return AnomalyScores.concat(
        anomaly_scores(model, left, source="left", ratio_floor=ratio_floor),
        anomaly_scores(model, right, source="right", ratio_floor=ratio_floor),
    )


def score_pair(fp: FrequencyFingerprint, path: int, pair: Tuple[int, int],
               settings: Optional[UlsifSettings] = None) -> ComparisonResult:
    """Due stime uLSIF (sinistra→destra e destra→sinistra) sullo stesso percorso LUT"""
    settings = settings or UlsifSettings()
    col_left, col_right = int(pair[0]), int(pair[1])
    if (col_left, col_right) not in adjacent_pairs(fp.layout):
        raise InvalidParameterError(f"({col_left}, {col_right}) non è una coppia adiacente dello stesso gruppo")

    left = fp.column(path, col_left)
    right = fp.column(path, col_right)

    forward_model = select_model(left, right, settings=settings)
    backward_model = select_model(right, left, settings=settings)
    result = ComparisonResult(
        path=int(path), col_left=col_left, col_right=col_right,
        forward=_direction(forward_model, left, right, settings.ratio_floor),
        backward=_direction(backward_model, left, right, settings.ratio_floor),
        forward_model=forward_model, backward_model=backward_model,
    )
    logger.debug(f"🔬 {fp.device_id} path {path} ({col_left},{col_right}): max {result.max_score:.4f}")
    return result


def score_device(fp: FrequencyFingerprint, settings: Optional[UlsifSettings] = None) -> DeviceScore:
    """Tutti i percorsi × tutte le coppie adiacenti, aggregati con il massimo"""
    settings = settings or UlsifSettings()
    pairs = adjacent_pairs(fp.layout)
    if not pairs:
        raise InvalidInputError(f"{fp.device_id}: il layout non ha colonne adiacenti da confrontare")

    comparisons = [score_pair(fp, path, pair, settings)
                   for path in range(fp.layout.n_paths) for pair in pairs]
    device_score = DeviceScore.from_comparisons(fp.device_id, fp.layout.n_paths, comparisons)
    logger.info(f"📊 {fp.device_id}: statistica {device_score.device_statistic:.4f} su {len(comparisons)} confronti")
    return device_score


def score_devices(fingerprints: Sequence[FrequencyFingerprint],
                  settings: Optional[DetectorSettings] = None) -> List[DeviceScore]:
    """Punteggi nello stesso ordine dell'ingresso; workers > 1 distribuisce i dispositivi con joblib"""
    settings = settings or DetectorSettings()
    fingerprints = list(fingerprints)
    if settings.workers > 1 and len(fingerprints) > 1:
        return Parallel(n_jobs=min(settings.workers, len(fingerprints)))(
            delayed(score_device)(fp, settings.ulsif) for fp in fingerprints)
    return [score_device(fp, settings.ulsif) for fp in fingerprints]


def classify(scores: Sequence[DeviceScore], threshold: float) -> List[Verdict]:
    """recycled se e solo se statistica > soglia"""
    threshold = float(threshold)
    if not np.isfinite(threshold):
        raise InvalidParameterError(f"la soglia deve essere finita, ricevuta {threshold}")
    return [
        Verdict(
            device_id=s.device_id,
            device_statistic=s.device_statistic,
            threshold=threshold,
            label=RECYCLED if s.device_statistic > threshold else FRESH,
        )
        for s in scores
    ]


def score_rows(device_score: DeviceScore) -> List[Dict[str, Any]]:
    """Righe del dump dei punteggi: massimo di ogni direzione per ogni confronto"""
    rows = []
    for c in device_score.comparisons:
        for direction, score in c.direction_max().items():
            rows.append({
                'device': device_score.device_id,
                'path': c.path,
                'col_left': c.col_left,
                'col_right': c.col_right,
                'direction': direction,
                'score': score,
            })
    return rows

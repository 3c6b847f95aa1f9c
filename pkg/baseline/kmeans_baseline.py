#!/usr/bin/env python3
"""
📉 BASELINE K-MEANS++ - Rilevamento FPGA Riciclati
Metodo convenzionale: k-means++ sulle frequenze grezze e scelta del numero di cluster con la silhouette
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.cluster import kmeans_plusplus

from config import get_baseline_config
from fingerprint.fingerprint_model import FrequencyFingerprint
from utils.data_utils import DataUtils
from utils.errors import DegenerateClusteringError, InvalidParameterError

logger = logging.getLogger(__name__)

FRESH = "fresh"
RECYCLED = "recycled"


@dataclass(frozen=True)
class ClusteringOutcome:
    k: int
    labels: np.ndarray
    centroids: np.ndarray
    silhouette: float
    inertia_history: Tuple[float, ...]
    n_iter: int


@dataclass(frozen=True)
class RandomSelection:
    """`count` siti CLB distinti estratti con il seed, ciascuno con tutti i percorsi LUT"""
    count: int
    seed: int

    def __post_init__(self):
        if self.count < 1:
            raise InvalidParameterError(f"la selezione deve contenere almeno un sito, ricevuto {self.count}")


Selection = Union[str, RandomSelection]


@dataclass(frozen=True)
class BaselineVerdict:
    device_id: str
    outcomes: Tuple[ClusteringOutcome, ...]
    optimal_k: int
    reference_k: int
    label: str
    n_points: int

    def silhouettes(self) -> Dict[int, float]:
        return {o.k: o.silhouette for o in self.outcomes}


def silhouette_1d(points: Sequence[float], labels: Sequence[int]) -> float:
    """
    Silhouette media esatta per dati 1-D in O(n log n).

    Le somme delle distanze da ogni cluster si ottengono da somme prefisse sui valori
    ordinati del cluster; i punti di cluster singoletto valgono 0.
    """
    points = DataUtils.as_sample_vector(points, "points")
    labels = np.asarray(labels)
    if labels.shape != points.shape:
        raise InvalidParameterError("labels e points hanno forme diverse")
    clusters = np.unique(labels)
    if clusters.size < 2:
        raise DegenerateClusteringError("la silhouette richiede almeno due cluster non vuoti")

    centered = points - np.median(points)
    sums = np.empty((clusters.size, points.size))
    sizes = np.empty(clusters.size)
    for index, cluster in enumerate(clusters):
        _, ordered, prefix = DataUtils.sorted_prefix_sums(centered[labels == cluster])
        below = np.searchsorted(ordered, centered, side="right")
        n_c = ordered.size
        sums[index] = centered * below - prefix[below] + (prefix[n_c] - prefix[below]) - centered * (n_c - below)
        sizes[index] = n_c

    own = np.searchsorted(clusters, labels)
    own_size = sizes[own]
    a = np.where(own_size > 1, sums[own, np.arange(points.size)] / np.maximum(own_size - 1, 1), 0.0)

    mean_other = sums / sizes[:, None]
    mean_other[own, np.arange(points.size)] = np.inf
    b = mean_other.min(axis=0)

    denom = np.maximum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s = np.where(own_size > 1, s, 0.0)
    return float(np.clip(np.mean(s), -1.0, 1.0))


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return np.argmin(np.abs(points[:, None] - centroids[None, :]), axis=1)


def kmeanspp(points: Sequence[float], k: int, seed: int,
             max_iter: int = 300, tol: float = 1e-9) -> ClusteringOutcome:
    """Seeding k-means++ di scikit-learn, poi iterazioni di Lloyd fino a spostamento < tol"""
    points = DataUtils.as_sample_vector(points, "points")
    if k < 2:
        raise InvalidParameterError(f"k deve essere ≥ 2, ricevuto {k}")
    if np.unique(points).size < k:
        raise DegenerateClusteringError(f"servono almeno {k} valori distinti, trovati {np.unique(points).size}")

    centroids, _ = kmeans_plusplus(points[:, None], n_clusters=k, random_state=int(seed))
    centroids = centroids[:, 0].astype(np.float64)

    inertia: List[float] = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        labels = _assign(points, centroids)
        inertia.append(float(np.sum((points - centroids[labels]) ** 2)))
        updated = centroids.copy()
        for cluster in range(k):
            members = points[labels == cluster]
            if members.size:
                updated[cluster] = members.mean()
        movement = float(np.max(np.abs(updated - centroids)))
        centroids = updated
        if movement < tol:
            break

    order = np.argsort(centroids, kind="stable")
    centroids = centroids[order]
    labels = _assign(points, centroids)
    silhouette = silhouette_1d(points, labels) if np.unique(labels).size > 1 else 0.0
    return ClusteringOutcome(
        k=k, labels=labels, centroids=centroids, silhouette=silhouette,
        inertia_history=tuple(inertia), n_iter=n_iter,
    )


def build_frequency_vector(fp: FrequencyFingerprint, selection: Selection = "all") -> np.ndarray:
    """Vettore piatto delle frequenze: tutti i RO, oppure i siti estratti × tutti i percorsi"""
    if selection == "all":
        return fp.freqs.reshape(-1).copy()
    if not isinstance(selection, RandomSelection):
        raise InvalidParameterError(f"selezione non riconosciuta: {selection!r}")

    layout = fp.layout
    n_sites = layout.n_columns * layout.rows
    if selection.count > n_sites:
        raise InvalidParameterError(f"selezione di {selection.count} siti su {n_sites} disponibili")
    rng = np.random.default_rng(selection.seed)
    sites = np.sort(rng.choice(n_sites, size=selection.count, replace=False))
    col_pos, rows = np.divmod(sites, layout.rows)
    return fp.freqs[:, col_pos, rows].reshape(-1).copy()


def baseline_detect(fp: FrequencyFingerprint, selection: Selection = "all",
                    k_range: Optional[Sequence[int]] = None, reference_k: Optional[int] = None,
                    seed: int = 0) -> BaselineVerdict:
    """Sceglie k con la silhouette massima (parità → k minore); recycled se k > k di riferimento"""
    cfg = get_baseline_config()
    k_values = sorted(set(k_range or range(cfg['k_min'], cfg['k_max'] + 1)))
    reference_k = int(reference_k if reference_k is not None else cfg['reference_k'])
    if not k_values or k_values[0] < 2:
        raise InvalidParameterError(f"intervallo di k non valido: {k_values}")

    vector = build_frequency_vector(fp, selection)
    outcomes = tuple(
        kmeanspp(vector, k, seed=seed, max_iter=cfg['max_iter'], tol=cfg['tol']) for k in k_values
    )

    best = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.silhouette > best.silhouette:
            best = outcome
    label = RECYCLED if best.k > reference_k else FRESH
    logger.info(f"📉 {fp.device_id}: k ottimo {best.k} (silhouette {best.silhouette:.3f}) → {label}")
    return BaselineVerdict(
        device_id=fp.device_id, outcomes=outcomes, optimal_k=best.k,
        reference_k=reference_k, label=label, n_points=int(vector.size),
    )


def silhouette_table_rows(verdicts: Sequence[BaselineVerdict]) -> List[Dict[str, Any]]:
    """Righe della tabella silhouette per dispositivo"""
    rows = []
    for verdict in verdicts:
        row: Dict[str, Any] = {'device': verdict.device_id}
        for k, value in verdict.silhouettes().items():
            row[f'silhouette_k{k}'] = value
        row.update({'optimal_k': verdict.optimal_k, 'reference_k': verdict.reference_k, 'label': verdict.label})
        rows.append(row)
    return rows


def silhouette_table_columns(verdicts: Sequence[BaselineVerdict]) -> List[str]:
    ks = sorted({o.k for v in verdicts for o in v.outcomes})
    return ['device'] + [f'silhouette_k{k}' for k in ks] + ['optimal_k', 'reference_k', 'label']

#!/usr/bin/env python3
"""
📐 DENSITY RATIO - Rilevamento FPGA Riciclati
Stima diretta del rapporto di densità con uLSIF (unconstrained least-squares importance fitting)

Il modello è r̂(x) = Σ_l α_l K(x, c_l) con kernel RBF gaussiano e centri presi dal
vettore di test. I coefficienti risolvono (Ĥ + λI)α̃ = ĥ e sono poi troncati a zero.
Lo score di anomalia di un campione è −log max(r̂, ε).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from config import get_ulsif_config
from utils.data_utils import DataUtils
from utils.errors import InvalidInputError, InvalidParameterError, UlsifSolveError

logger = logging.getLogger(__name__)

RATIO_FLOOR = 1e-12
RESIDUAL_TOLERANCE = 1e-8
DEFAULT_WIDTH_MULTIPLIERS = (1.0, 2.0, 4.0)
DEFAULT_LAMBDA_GRID = (1e-3, 1e-2, 1e-1, 1.0, 10.0)


@dataclass(frozen=True)
class UlsifSettings:
    """Griglie e costanti per la selezione del modello"""
    width_multipliers: Tuple[float, ...] = DEFAULT_WIDTH_MULTIPLIERS
    lambda_grid: Tuple[float, ...] = DEFAULT_LAMBDA_GRID
    max_centers: int = 100
    ratio_floor: float = RATIO_FLOOR
    fallback_width: float = 1.0
    loocv: str = "analytic"

    def __post_init__(self):
        if not self.width_multipliers or not self.lambda_grid:
            raise InvalidParameterError("griglie di selezione vuote")
        for value in tuple(self.width_multipliers) + tuple(self.lambda_grid):
            DataUtils.check_positive(value, "valore di griglia")
        if self.max_centers < 1:
            raise InvalidParameterError(f"max_centers deve essere ≥ 1, ricevuto {self.max_centers}")
        DataUtils.check_positive(self.ratio_floor, "ratio_floor")
        DataUtils.check_positive(self.fallback_width, "fallback_width")
        if self.loocv not in ("analytic", "explicit"):
            raise InvalidParameterError(f"loocv deve essere 'analytic' o 'explicit', ricevuto {self.loocv!r}")

    @classmethod
    def from_config(cls, overrides: Optional[Dict[str, Any]] = None) -> "UlsifSettings":
        """Costruisce le impostazioni dalla configurazione globale"""
        cfg = get_ulsif_config()
        cfg.update(overrides or {})
        return cls(
            width_multipliers=tuple(float(v) for v in cfg['width_multipliers']),
            lambda_grid=tuple(float(v) for v in cfg['lambda_grid']),
            max_centers=int(cfg['max_centers']),
            ratio_floor=float(cfg['ratio_floor']),
            fallback_width=float(cfg['fallback_width']),
            loocv=str(cfg['loocv']),
        )


@dataclass(frozen=True)
class KernelSpec:
    width: float
    centers: np.ndarray

    def __post_init__(self):
        DataUtils.check_positive(self.width, "bandwidth w")
        centers = DataUtils.as_sample_vector(self.centers, "centers")
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)

    @property
    def n_centers(self) -> int:
        return int(self.centers.size)


@dataclass(frozen=True)
class GramStats:
    H_hat: np.ndarray
    h_hat: np.ndarray


@dataclass(frozen=True)
class UlsifModel:
    """Modello uLSIF adattato: kernel, λ, α ≥ 0 e valore LOOCV vincente"""
    kernel: KernelSpec
    lam: float
    alpha: np.ndarray
    loocv_score: float

    def __post_init__(self):
        DataUtils.check_positive(self.lam, "lambda")
        alpha = np.asarray(self.alpha, dtype=np.float64)
        if alpha.shape != (self.kernel.n_centers,):
            raise InvalidParameterError(f"alpha ha forma {alpha.shape}, attesa ({self.kernel.n_centers},)")
        if np.any(alpha < 0):
            raise InvalidParameterError("alpha deve essere non negativo")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    def ratio(self, samples: Sequence[float]) -> np.ndarray:
        return density_ratio(self, samples)

    def to_dict(self) -> Dict[str, Any]:
        return model_to_dict(self)


@dataclass(frozen=True)
class AnomalyScores:
    """Score per campione con l'etichetta del vettore di provenienza"""
    scores: np.ndarray
    sources: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        sources = tuple(self.sources) if self.sources else ("test",) * scores.size
        if len(sources) != scores.size:
            raise InvalidParameterError("sources e scores hanno lunghezze diverse")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "sources", sources)

    def __len__(self) -> int:
        return int(self.scores.size)

    @property
    def max_score(self) -> float:
        return float(np.max(self.scores)) if self.scores.size else float("-inf")

    def for_source(self, source: str) -> np.ndarray:
        mask = np.array([s == source for s in self.sources], dtype=bool)
        return self.scores[mask]

    @staticmethod
    def concat(*parts: "AnomalyScores") -> "AnomalyScores":
        return AnomalyScores(
            scores=np.concatenate([p.scores for p in parts]) if parts else np.empty(0),
            sources=tuple(s for p in parts for s in p.sources),
        )


def rbf_kernel(x: float, center: float, w: float) -> float:
    """K(x, c) = exp(−(x − c)² / (2w²))"""
    w = DataUtils.check_positive(w, "bandwidth w")
    x, center = float(x), float(center)
    if not (np.isfinite(x) and np.isfinite(center)):
        raise InvalidInputError("x e center devono essere finiti")
    return float(np.exp(-((x - center) ** 2) / (2.0 * w * w)))


def kernel_matrix(samples: Sequence[float], centers: Sequence[float], w: float) -> np.ndarray:
    """Matrice n×b dei valori di kernel"""
    samples = np.asarray(samples, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    diff = np.subtract.outer(samples, centers)
    return np.exp(-(diff * diff) / (2.0 * w * w))


def select_centers(test: Sequence[float], max_centers: int = 100) -> np.ndarray:
    """Tutti i campioni di test se n ≤ max_centers, altrimenti un sottoinsieme a passo costante"""
    test = DataUtils.as_sample_vector(test, "test")
    return test[DataUtils.strided_indices(test.size, max_centers)].copy()


def bandwidth_grid(inlier: Sequence[float], test: Sequence[float],
                   multipliers: Sequence[float] = DEFAULT_WIDTH_MULTIPLIERS,
                   fallback_width: float = 1.0) -> np.ndarray:
    """Mediana delle distanze interne ai due vettori × moltiplicatori, oppure [fallback] se la mediana è nulla"""
    median = DataUtils.median_pairwise_distance(inlier, test)
    if not np.isfinite(median) or median <= 0.0:
        logger.debug(f"⚠️ Mediana delle distanze nulla, uso w = {fallback_width}")
        return np.array([float(fallback_width)])
    return np.sort(median * np.asarray(multipliers, dtype=np.float64))


def compute_gram_stats(inlier: Sequence[float], test: Sequence[float], kernel: KernelSpec) -> GramStats:
    inlier = DataUtils.as_sample_vector(inlier, "inlier")
    test = DataUtils.as_sample_vector(test, "test")

    phi_in = kernel_matrix(inlier, kernel.centers, kernel.width)
    H_hat = phi_in.T @ phi_in / inlier.size
    H_hat = 0.5 * (H_hat + H_hat.T)
    h_hat = kernel_matrix(test, kernel.centers, kernel.width).mean(axis=0)
    return GramStats(H_hat=H_hat, h_hat=h_hat)


def ridge_solution(stats: GramStats, lam: float) -> np.ndarray:
    """α̃ non troncato di (Ĥ + λI)α̃ = ĥ, con controllo del residuo relativo"""
    lam = DataUtils.check_positive(lam, "lambda")
    system = stats.H_hat + lam * np.eye(stats.H_hat.shape[0])
    try:
        alpha_tilde = linalg.solve(system, stats.h_hat, assume_a="pos")
    except (linalg.LinAlgError, ValueError) as e:
        raise UlsifSolveError(f"sistema (Ĥ + λI) non risolvibile con λ={lam}: {e}") from e

    residual = np.linalg.norm(system @ alpha_tilde - stats.h_hat)
    scale = np.linalg.norm(stats.h_hat)
    relative = residual / scale if scale > 0 else residual
    if not np.isfinite(relative) or relative > RESIDUAL_TOLERANCE:
        raise UlsifSolveError(f"residuo relativo {relative:.3e} oltre la tolleranza con λ={lam}")
    return alpha_tilde


def solve_alpha(stats: GramStats, lam: float) -> np.ndarray:
    return np.maximum(0.0, ridge_solution(stats, lam))


def loocv_scores(inlier: Sequence[float], test: Sequence[float], centers: Sequence[float],
                 widths: Sequence[float], lambdas: Sequence[float]) -> np.ndarray:
    """
    Criterio LOOCV (½·mean r̂(inlier)² − mean r̂(test)) per ogni coppia (w, λ).

    Si escludono a turno le coppie (inlier_i, test_i), i < min(n_in, n_te); l'inversa del
    sistema ridotto si ottiene con Sherman–Morrison e una sola decomposizione spettrale di Ĥ
    per larghezza. Restituisce una matrice len(widths) × len(lambdas).
    """
    inlier = DataUtils.as_sample_vector(inlier, "inlier", min_length=2)
    test = DataUtils.as_sample_vector(test, "test", min_length=2)
    centers = np.asarray(centers, dtype=np.float64)
    n_in, n_te = inlier.size, test.size
    n_min = min(n_in, n_te)
    scale = (n_in - 1.0) / (n_in * (n_te - 1.0))

    result = np.full((len(widths), len(lambdas)), np.inf)
    for i, w in enumerate(widths):
        phi_in = kernel_matrix(inlier, centers, w)
        phi_te = kernel_matrix(test, centers, w)
        H_hat = phi_in.T @ phi_in / n_in
        h_hat = phi_te.mean(axis=0)
        eigvals, eigvecs = linalg.eigh(0.5 * (H_hat + H_hat.T))

        # base spettrale: colonne = campioni esclusi
        phi = eigvecs.T @ phi_in[:n_min].T
        psi = eigvecs.T @ phi_te[:n_min].T
        h_rot = eigvecs.T @ h_hat

        for j, lam in enumerate(lambdas):
            inv_diag = 1.0 / (eigvals + lam * (n_in - 1.0) / n_in)
            b_inv_phi = inv_diag[:, None] * phi
            denom = n_in - np.sum(phi * b_inv_phi, axis=0)
            b0 = (inv_diag * h_rot)[:, None] + b_inv_phi * ((h_rot @ b_inv_phi) / denom)
            b1 = inv_diag[:, None] * psi + b_inv_phi * (np.sum(psi * b_inv_phi, axis=0) / denom)
            alphas = np.maximum(0.0, scale * (eigvecs @ (n_te * b0 - b1)))

            r_in = np.sum(phi_in[:n_min].T * alphas, axis=0)
            r_te = np.sum(phi_te[:n_min].T * alphas, axis=0)
            value = float(np.mean(0.5 * r_in * r_in - r_te))
            result[i, j] = value if np.isfinite(value) and np.all(denom > 0) else np.inf
    return result


def explicit_loocv_score(inlier: Sequence[float], test: Sequence[float], centers: Sequence[float],
                         w: float, lam: float) -> float:
    """Stesso criterio di loocv_scores con rifit esplicito per ogni coppia esclusa"""
    inlier = DataUtils.as_sample_vector(inlier, "inlier", min_length=2)
    test = DataUtils.as_sample_vector(test, "test", min_length=2)
    kernel = KernelSpec(width=w, centers=np.asarray(centers, dtype=np.float64))
    n_min = min(inlier.size, test.size)

    total = 0.0
    for i in range(n_min):
        stats = compute_gram_stats(np.delete(inlier, i), np.delete(test, i), kernel)
        alpha = solve_alpha(stats, lam)
        r_in = float(kernel_matrix(inlier[i], kernel.centers, w) @ alpha)
        r_te = float(kernel_matrix(test[i], kernel.centers, w) @ alpha)
        total += 0.5 * r_in * r_in - r_te
    return total / n_min


def _explicit_grid(inlier, test, centers, widths, lambdas) -> np.ndarray:
    result = np.full((len(widths), len(lambdas)), np.inf)
    for i, w in enumerate(widths):
        for j, lam in enumerate(lambdas):
            try:
                result[i, j] = explicit_loocv_score(inlier, test, centers, w, lam)
            except UlsifSolveError as e:
                logger.debug(f"⚠️ LOOCV esplicita fallita per w={w}, λ={lam}: {e}")
    return result


def select_model(inlier: Sequence[float], test: Sequence[float],
                 w_grid: Optional[Sequence[float]] = None,
                 lambda_grid: Optional[Sequence[float]] = None,
                 settings: Optional[UlsifSettings] = None) -> UlsifModel:
    """
    Sceglie (w, λ) minimizzando la LOOCV e adatta il modello su tutti i dati.

    Senza griglie esplicite w segue l'euristica della mediana e λ la griglia delle impostazioni.
    A parità di criterio vince la w più piccola, poi la λ più piccola.
    """
    settings = settings or UlsifSettings()
    inlier = DataUtils.as_sample_vector(inlier, "inlier", min_length=2)
    test = DataUtils.as_sample_vector(test, "test", min_length=2)

    if w_grid is None:
        w_grid = bandwidth_grid(inlier, test, settings.width_multipliers, settings.fallback_width)
    if lambda_grid is None:
        lambda_grid = settings.lambda_grid
    if len(w_grid) == 0 or len(lambda_grid) == 0:
        raise InvalidParameterError("griglia di selezione vuota")
    widths = np.sort(np.array([DataUtils.check_positive(w, "bandwidth w") for w in w_grid]))
    lambdas = np.sort(np.array([DataUtils.check_positive(lam, "lambda") for lam in lambda_grid]))

    centers = select_centers(test, settings.max_centers)
    if settings.loocv == "explicit":
        scores = _explicit_grid(inlier, test, centers, widths, lambdas)
    else:
        scores = loocv_scores(inlier, test, centers, widths, lambdas)
    scores = np.where(np.isnan(scores), np.inf, scores)
    if not np.any(np.isfinite(scores)):
        logger.warning("⚠️ Nessun candidato LOOCV finito, uso la coppia (w, λ) più piccola")

    best = int(np.argmin(scores))
    w_idx, lam_idx = divmod(best, lambdas.size)
    kernel = KernelSpec(width=float(widths[w_idx]), centers=centers)
    alpha = solve_alpha(compute_gram_stats(inlier, test, kernel), float(lambdas[lam_idx]))

    logger.debug(f"🔬 uLSIF: w={kernel.width:.6g}, λ={lambdas[lam_idx]:.3g}, LOOCV={scores[w_idx, lam_idx]:.6g}")
    return UlsifModel(kernel=kernel, lam=float(lambdas[lam_idx]), alpha=alpha,
                      loocv_score=float(scores[w_idx, lam_idx]))


def density_ratio(model: UlsifModel, samples: Sequence[float]) -> np.ndarray:
    """r̂(x) = Σ_l α_l K(x, c_l)"""
    samples = DataUtils.as_sample_vector(samples, "samples")
    ratio = kernel_matrix(samples, model.kernel.centers, model.kernel.width) @ model.alpha
    return np.maximum(ratio, 0.0)


def anomaly_scores(model: UlsifModel, samples: Sequence[float], source: str = "test",
                   ratio_floor: float = RATIO_FLOOR) -> AnomalyScores:
    """score = −log max(r̂, ε); r̂ = 1 dà esattamente 0"""
    ratio = density_ratio(model, samples)
    scores = -np.log(np.maximum(ratio, ratio_floor)) + 0.0
    return AnomalyScores(scores=scores, sources=(source,) * scores.size)


def model_to_dict(model: UlsifModel) -> Dict[str, Any]:
    return {
        'centers': [float(c) for c in model.kernel.centers],
        'w': model.kernel.width,
        'lambda': model.lam,
        'alpha': [float(a) for a in model.alpha],
        'loocv_score': model.loocv_score if np.isfinite(model.loocv_score) else None,
    }

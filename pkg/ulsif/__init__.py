"""
uLSIF package per Rilevamento FPGA Riciclati
"""

from .density_ratio import (
    AnomalyScores,
    GramStats,
    KernelSpec,
    UlsifModel,
    UlsifSettings,
    anomaly_scores,
    bandwidth_grid,
    compute_gram_stats,
    density_ratio,
    explicit_loocv_score,
    kernel_matrix,
    loocv_scores,
    model_to_dict,
    rbf_kernel,
    ridge_solution,
    select_centers,
    select_model,
    solve_alpha,
)

__all__ = [
    'AnomalyScores',
    'GramStats',
    'KernelSpec',
    'UlsifModel',
    'UlsifSettings',
    'anomaly_scores',
    'bandwidth_grid',
    'compute_gram_stats',
    'density_ratio',
    'explicit_loocv_score',
    'kernel_matrix',
    'loocv_scores',
    'model_to_dict',
    'rbf_kernel',
    'ridge_solution',
    'select_centers',
    'select_model',
    'solve_alpha',
]

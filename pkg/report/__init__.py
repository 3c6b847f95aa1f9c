"""
Report package per Rilevamento FPGA Riciclati
"""

from .evaluation_report import (
    FREQUENCY_COLUMNS,
    RESIDUAL_COLUMNS,
    ROC_COLUMNS,
    STATISTIC_COLUMNS,
    SUMMARY_COLUMNS,
    VERDICT_COLUMNS,
    FrequencyMap,
    ResidualMap,
    RocCurve,
    best_threshold,
    frequency_map,
    residual_map,
    roc,
    statistic_rows,
    summary_rows,
    write_frequency_csv,
    write_residual_csv,
    write_roc_csv,
    write_scores_csv,
    write_verdicts_csv,
)
from .svg_renderer import (
    render_frequency_svg,
    render_path_scores_svg,
    render_residual_svg,
    render_roc_svg,
)

__all__ = [
    'FREQUENCY_COLUMNS',
    'RESIDUAL_COLUMNS',
    'ROC_COLUMNS',
    'STATISTIC_COLUMNS',
    'SUMMARY_COLUMNS',
    'VERDICT_COLUMNS',
    'FrequencyMap',
    'ResidualMap',
    'RocCurve',
    'best_threshold',
    'frequency_map',
    'residual_map',
    'roc',
    'statistic_rows',
    'summary_rows',
    'write_frequency_csv',
    'write_residual_csv',
    'write_roc_csv',
    'write_scores_csv',
    'write_verdicts_csv',
    'render_frequency_svg',
    'render_path_scores_svg',
    'render_residual_svg',
    'render_roc_svg',
]

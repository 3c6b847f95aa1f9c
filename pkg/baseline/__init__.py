"""
Baseline package per Rilevamento FPGA Riciclati
"""

from .kmeans_baseline import (
    BaselineVerdict,
    ClusteringOutcome,
    RandomSelection,
    baseline_detect,
    build_frequency_vector,
    kmeanspp,
    silhouette_1d,
    silhouette_table_columns,
    silhouette_table_rows,
)

__all__ = [
    'BaselineVerdict',
    'ClusteringOutcome',
    'RandomSelection',
    'baseline_detect',
    'build_frequency_vector',
    'kmeanspp',
    'silhouette_1d',
    'silhouette_table_columns',
    'silhouette_table_rows',
]

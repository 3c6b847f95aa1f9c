"""
Fingerprint package per Rilevamento FPGA Riciclati
"""

from .fingerprint_model import (
    MEASUREMENT_COLUMNS,
    ColumnVector,
    DeviceLayout,
    FrequencyFingerprint,
    adjacent_pairs,
    column_vector,
    fingerprint_from_function,
    pair_residuals,
)
from .fingerprint_store import (
    fingerprint_paths,
    list_fingerprints,
    read_fingerprint,
    write_fingerprint,
)

__all__ = [
    'MEASUREMENT_COLUMNS',
    'ColumnVector',
    'DeviceLayout',
    'FrequencyFingerprint',
    'adjacent_pairs',
    'column_vector',
    'fingerprint_from_function',
    'pair_residuals',
    'fingerprint_paths',
    'list_fingerprints',
    'read_fingerprint',
    'write_fingerprint',
]

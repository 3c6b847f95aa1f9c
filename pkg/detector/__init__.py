"""
Detector package per Rilevamento FPGA Riciclati
"""

from .recycled_detector import (
    BACKWARD,
    FORWARD,
    FRESH,
    RECYCLED,
    SCORE_COLUMNS,
    ComparisonResult,
    DetectorSettings,
    DeviceScore,
    Verdict,
    classify,
    score_device,
    score_devices,
    score_pair,
    score_rows,
)

__all__ = [
    'BACKWARD',
    'FORWARD',
    'FRESH',
    'RECYCLED',
    'SCORE_COLUMNS',
    'ComparisonResult',
    'DetectorSettings',
    'DeviceScore',
    'Verdict',
    'classify',
    'score_device',
    'score_devices',
    'score_pair',
    'score_rows',
]

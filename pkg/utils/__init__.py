#!/usr/bin/env python3
"""
🛠️ UTILS MODULE - Rilevamento FPGA Riciclati
Modulo utility comuni
"""

from .common_utils import CommonUtils
from .data_utils import DataUtils
from .errors import (
    ConfigurationError,
    DegenerateClusteringError,
    DuplicateCellError,
    FingerprintValidationError,
    InvalidFrequencyError,
    InvalidInputError,
    InvalidParameterError,
    InvalidRegionError,
    LayoutMismatchError,
    MalformedFileError,
    MissingCellError,
    RecycledDetectionError,
    UlsifSolveError,
)

__all__ = [
    'CommonUtils',
    'DataUtils',
    'ConfigurationError',
    'DegenerateClusteringError',
    'DuplicateCellError',
    'FingerprintValidationError',
    'InvalidFrequencyError',
    'InvalidInputError',
    'InvalidParameterError',
    'InvalidRegionError',
    'LayoutMismatchError',
    'MalformedFileError',
    'MissingCellError',
    'RecycledDetectionError',
    'UlsifSolveError',
]

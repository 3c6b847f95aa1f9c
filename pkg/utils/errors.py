#!/usr/bin/env python3
"""
🚨 ERRORI - Rilevamento FPGA Riciclati
Gerarchia unica delle eccezioni usate da tutti i moduli
"""

from typing import Optional, Tuple


class RecycledDetectionError(Exception):
    """Radice di tutte le eccezioni del progetto"""


class ConfigurationError(RecycledDetectionError):
    """Configurazione mancante o non valida"""


class InvalidParameterError(RecycledDetectionError, ValueError):
    """Parametro numerico fuori dominio (w ≤ 0, λ ≤ 0, griglie vuote, ...)"""


class InvalidInputError(RecycledDetectionError, ValueError):
    """Dati di ingresso vuoti o non finiti"""


class UlsifSolveError(RecycledDetectionError):
    """Errore interno del solutore lineare"""


class FingerprintValidationError(RecycledDetectionError):
    """Fingerprint che viola le invarianti di formato o di layout"""


class MalformedFileError(FingerprintValidationError):
    """CSV o manifest JSON illeggibile o con intestazione errata"""


class MissingCellError(FingerprintValidationError):
    """Cella (path, col, row) assente dal file di misura"""

    def __init__(self, message: str, cell: Optional[Tuple[int, int, int]] = None):
        super().__init__(message)
        self.cell = cell


class DuplicateCellError(FingerprintValidationError):
    """Cella (path, col, row) presente più volte"""

    def __init__(self, message: str, cell: Optional[Tuple[int, int, int]] = None):
        super().__init__(message)
        self.cell = cell


class LayoutMismatchError(FingerprintValidationError):
    """Misure non coerenti con il layout dichiarato"""


class InvalidFrequencyError(FingerprintValidationError):
    """Frequenza non positiva o non finita"""


class InvalidRegionError(RecycledDetectionError, ValueError):
    """Regione di invecchiamento che non interseca il layout"""


class DegenerateClusteringError(RecycledDetectionError):
    """Meno punti distinti dei cluster richiesti"""

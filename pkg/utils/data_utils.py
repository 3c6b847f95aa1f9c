#!/usr/bin/env python3
"""
📊 DATA UTILS - Rilevamento FPGA Riciclati
Utility numeriche condivise: validazione vettori, distanze, sottocampionamento
"""

import logging
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from .errors import InvalidInputError, InvalidParameterError

logger = logging.getLogger(__name__)


class DataUtils:
    """
    📊 Utility per gestione dati numerici

    Funzionalità:
    - Validazione vettori di campioni
    - Euristica della mediana delle distanze
    - Sottocampionamento deterministico
    - Somme prefisse per dati 1-D ordinati
    """

    @staticmethod
    def as_sample_vector(values: Iterable[float], name: str = "samples", min_length: int = 1) -> np.ndarray:
        """Converte in vettore float64 1-D e verifica finitezza e lunghezza"""
        array = np.asarray(values, dtype=np.float64)
        if array.ndim != 1:
            array = array.reshape(-1)
        if array.size < min_length:
            raise InvalidInputError(f"{name}: servono almeno {min_length} campioni, trovati {array.size}")
        if not np.all(np.isfinite(array)):
            raise InvalidInputError(f"{name}: contiene valori non finiti")
        return array

    @staticmethod
    def check_positive(value: float, name: str) -> float:
        """Verifica che un parametro sia finito e strettamente positivo"""
        value = float(value)
        if not np.isfinite(value) or value <= 0:
            raise InvalidParameterError(f"{name} deve essere finito e > 0, ricevuto {value}")
        return value

    @staticmethod
    def median_pairwise_distance(*vectors: np.ndarray) -> float:
        """
        Mediana delle distanze a coppie interne a ciascun vettore, raccolte insieme.

        Le coppie miste (un campione per vettore) sono escluse: uno spostamento tra i
        vettori non allarga la scala.
        """
        distances = [pdist(np.asarray(v, dtype=np.float64).reshape(-1, 1)) for v in vectors]
        distances = [d for d in distances if d.size]
        if not distances:
            return 0.0
        return float(np.median(np.concatenate(distances)))

    @staticmethod
    def strided_indices(n: int, count: int) -> np.ndarray:
        """Indici equispaziati floor(i·n/count), i = 0..count-1 (tutti se count ≥ n)"""
        if count >= n:
            return np.arange(n)
        return (np.arange(count) * n) // count

    @staticmethod
    def sorted_prefix_sums(values: Sequence[float]):
        """Ordina e restituisce (ordine, valori ordinati, somme prefisse con zero iniziale)"""
        values = np.asarray(values, dtype=np.float64)
        order = np.argsort(values, kind="stable")
        ordered = values[order]
        prefix = np.concatenate(([0.0], np.cumsum(ordered)))
        return order, ordered, prefix

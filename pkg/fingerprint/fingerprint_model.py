#!/usr/bin/env python3
"""
🧬 MODELLO FINGERPRINT - Rilevamento FPGA Riciclati
Layout del dispositivo e griglie di frequenza RO per percorso LUT
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.errors import InvalidFrequencyError, InvalidParameterError, LayoutMismatchError

logger = logging.getLogger(__name__)

MEASUREMENT_COLUMNS = ['path', 'col', 'row', 'freq_mhz']


@dataclass(frozen=True)
class DeviceLayout:
    """
    🗺️ Struttura fisica della griglia di RO

    Funzionalità:
    - Gruppi di colonne contigue separati da barriere BRAM
    - Numero di percorsi LUT 2^(z−1)
    - Conversione da/verso il manifest JSON
    """
    rows: int
    column_groups: Tuple[Tuple[int, int], ...]
    lut_inputs: int
    ro_stages: int

    def __post_init__(self):
        groups = tuple((int(start), int(end)) for start, end in self.column_groups)
        object.__setattr__(self, "column_groups", groups)

        if int(self.rows) < 1:
            raise InvalidParameterError(f"rows deve essere ≥ 1, ricevuto {self.rows}")
        if int(self.lut_inputs) < 1:
            raise InvalidParameterError(f"lut_inputs deve essere ≥ 1, ricevuto {self.lut_inputs}")
        if int(self.ro_stages) < 1:
            raise InvalidParameterError(f"ro_stages deve essere ≥ 1, ricevuto {self.ro_stages}")
        if not groups:
            raise InvalidParameterError("servono uno o più gruppi di colonne")

        previous_end = -1
        for start, end in groups:
            if start < 0 or end < start:
                raise InvalidParameterError(f"gruppo di colonne non valido: [{start}, {end}]")
            if start <= previous_end:
                raise InvalidParameterError(f"gruppi di colonne sovrapposti o non ordinati: [{start}, {end}]")
            previous_end = end

    @property
    def n_paths(self) -> int:
        return 2 ** (self.lut_inputs - 1)

    @property
    def columns(self) -> Tuple[int, ...]:
        return tuple(col for start, end in self.column_groups for col in range(start, end + 1))

    @property
    def n_columns(self) -> int:
        return sum(end - start + 1 for start, end in self.column_groups)

    @property
    def cells_per_path(self) -> int:
        return self.rows * self.n_columns

    @property
    def n_cells(self) -> int:
        return self.n_paths * self.cells_per_path

    def group_of(self, col: int) -> Optional[int]:
        for index, (start, end) in enumerate(self.column_groups):
            if start <= col <= end:
                return index
        return None

    def column_index(self, col: int) -> int:
        """Posizione della colonna nell'array delle frequenze"""
        offset = 0
        for start, end in self.column_groups:
            if start <= col <= end:
                return offset + (col - start)
            offset += end - start + 1
        raise IndexError(f"la colonna {col} non appartiene a nessun gruppo (barriera o fuori griglia)")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DeviceLayout":
        return cls(
            rows=int(data['rows']),
            column_groups=tuple(tuple(group) for group in data['column_groups']),
            lut_inputs=int(data['lut_inputs']),
            ro_stages=int(data['ro_stages']),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rows': self.rows,
            'column_groups': [[start, end] for start, end in self.column_groups],
            'lut_inputs': self.lut_inputs,
            'ro_stages': self.ro_stages,
        }


@dataclass(frozen=True)
class ColumnVector:
    path: int
    col: int
    values: np.ndarray

    def __len__(self) -> int:
        return int(self.values.size)


class FrequencyFingerprint:
    """
    📡 Fingerprint di frequenza di un dispositivo

    Le frequenze (MHz) sono un array (percorso, posizione di colonna, riga) in sola lettura;
    la posizione di colonna segue DeviceLayout.columns.
    """

    def __init__(self, device_id: str, layout: DeviceLayout, freqs: np.ndarray):
        freqs = np.array(freqs, dtype=np.float64, copy=True)
        expected = (layout.n_paths, layout.n_columns, layout.rows)
        if freqs.shape != expected:
            raise LayoutMismatchError(f"{device_id}: frequenze con forma {freqs.shape}, attesa {expected}")
        if not np.all(np.isfinite(freqs)) or np.any(freqs <= 0):
            bad = np.argwhere(~np.isfinite(freqs) | (freqs <= 0))[0]
            path, col_pos, row = (int(v) for v in bad)
            raise InvalidFrequencyError(
                f"{device_id}: frequenza non valida in (path={path}, col={layout.columns[col_pos]}, row={row})"
            )
        freqs.setflags(write=False)
        self.device_id = str(device_id)
        self.layout = layout
        self.freqs = freqs

    def __repr__(self) -> str:
        return f"FrequencyFingerprint(device_id={self.device_id!r}, cells={self.freqs.size})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrequencyFingerprint):
            return NotImplemented
        return (self.device_id == other.device_id and self.layout == other.layout
                and np.array_equal(self.freqs, other.freqs))

    def value(self, path: int, col: int, row: int) -> float:
        return float(self.freqs[path, self.layout.column_index(col), row])

    def column(self, path: int, col: int) -> np.ndarray:
        if not 0 <= path < self.layout.n_paths:
            raise IndexError(f"percorso {path} fuori intervallo [0, {self.layout.n_paths})")
        return self.freqs[path, self.layout.column_index(col), :]

    def with_freqs(self, freqs: np.ndarray, device_id: Optional[str] = None) -> "FrequencyFingerprint":
        return FrequencyFingerprint(device_id or self.device_id, self.layout, freqs)

    def shifted(self, delta: float) -> "FrequencyFingerprint":
        return self.with_freqs(self.freqs + float(delta))

    def to_frame(self) -> pd.DataFrame:
        """Formato lungo ordinato per (path, col, row)"""
        layout = self.layout
        paths, col_pos, rows = np.meshgrid(
            np.arange(layout.n_paths), np.arange(layout.n_columns), np.arange(layout.rows), indexing="ij"
        )
        columns = np.asarray(layout.columns)
        return pd.DataFrame({
            'path': paths.ravel(),
            'col': columns[col_pos.ravel()],
            'row': rows.ravel(),
            'freq_mhz': self.freqs.ravel(),
        }, columns=MEASUREMENT_COLUMNS)


def column_vector(fp: FrequencyFingerprint, path: int, col: int) -> ColumnVector:
    """Frequenze della colonna in ordine di riga crescente"""
    values = fp.column(int(path), int(col))
    return ColumnVector(path=int(path), col=int(col), values=values.copy())


def adjacent_pairs(layout: DeviceLayout) -> List[Tuple[int, int]]:
    """Coppie di colonne consecutive interne a ciascun gruppo; mai attraverso una barriera"""
    return [(col, col + 1) for start, end in layout.column_groups for col in range(start, end)]


def fingerprint_from_function(device_id: str, layout: DeviceLayout, func) -> FrequencyFingerprint:
    """Costruisce un fingerprint valutando func(path, col, row) su array broadcast"""
    paths, col_pos, rows = np.meshgrid(
        np.arange(layout.n_paths), np.arange(layout.n_columns), np.arange(layout.rows), indexing="ij"
    )
    columns = np.asarray(layout.columns)[col_pos]
    values = np.broadcast_to(np.asarray(func(paths, columns, rows), dtype=np.float64), paths.shape)
    return FrequencyFingerprint(device_id, layout, values)


def pair_residuals(fp: FrequencyFingerprint, path: int, pairs: Sequence[Tuple[int, int]]) -> Dict[Tuple[int, int], np.ndarray]:
    return {(left, right): fp.column(path, left) - fp.column(path, right) for left, right in pairs}

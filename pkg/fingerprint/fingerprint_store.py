#!/usr/bin/env python3
"""
🗄️ ARCHIVIO FINGERPRINT - Rilevamento FPGA Riciclati
Lettura e scrittura dei fingerprint: manifest JSON del layout + CSV delle misure
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np
import pandas as pd

from utils.common_utils import CommonUtils
from utils.errors import (
    DuplicateCellError,
    InvalidFrequencyError,
    InvalidParameterError,
    LayoutMismatchError,
    MalformedFileError,
    MissingCellError,
)

from .fingerprint_model import MEASUREMENT_COLUMNS, DeviceLayout, FrequencyFingerprint

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
MANIFEST_KEYS = ('device_id', 'rows', 'column_groups', 'lut_inputs', 'ro_stages')


def fingerprint_paths(path: PathLike) -> Tuple[Path, Path]:
    """(manifest .json, misure .csv) con lo stesso stem"""
    base = Path(path)
    if base.suffix.lower() in ('.csv', '.json'):
        base = base.with_suffix('')
    return base.with_name(base.name + '.json'), base.with_name(base.name + '.csv')


def _read_manifest(manifest_path: Path, requested: PathLike) -> Tuple[str, DeviceLayout]:
    try:
        with open(manifest_path, encoding="utf-8") as handle:
            manifest = json.load(handle)
    except FileNotFoundError:
        raise FileNotFoundError(f"fingerprint {requested}: manifest non trovato ({manifest_path})") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise MalformedFileError(f"{manifest_path}: JSON non valido ({e})") from e

    if not isinstance(manifest, dict):
        raise MalformedFileError(f"{manifest_path}: il manifest deve essere un oggetto JSON")
    missing = [key for key in MANIFEST_KEYS if key not in manifest]
    if missing:
        raise MalformedFileError(f"{manifest_path}: chiavi mancanti {missing}")
    if not isinstance(manifest['device_id'], str) or not manifest['device_id']:
        raise MalformedFileError(f"{manifest_path}: device_id deve essere una stringa non vuota")

    try:
        layout = DeviceLayout.from_dict(manifest)
    except (InvalidParameterError, TypeError, ValueError) as e:
        raise MalformedFileError(f"{manifest_path}: layout non valido ({e})") from e
    return manifest['device_id'], layout


def _read_measurements(csv_path: Path) -> pd.DataFrame:
    try:
        with open(csv_path, encoding="utf-8", newline="") as handle:
            header = handle.readline().rstrip("\r\n")
    except FileNotFoundError:
        raise FileNotFoundError(f"file di misura non trovato: {csv_path}") from None
    except UnicodeDecodeError as e:
        raise MalformedFileError(f"{csv_path}: non è UTF-8 ({e})") from e
    if header != ",".join(MEASUREMENT_COLUMNS):
        raise MalformedFileError(f"{csv_path}: intestazione {header!r}, attesa {','.join(MEASUREMENT_COLUMNS)!r}")

    try:
        frame = pd.read_csv(csv_path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise MalformedFileError(f"{csv_path}: CSV non valido ({e})") from e

    coords = frame[['path', 'col', 'row']].apply(pd.to_numeric, errors='coerce')
    freqs = pd.to_numeric(frame['freq_mhz'], errors='coerce')
    bad_coords = coords.isna().any(axis=1) | (coords % 1 != 0).any(axis=1)
    if bad_coords.any():
        line = int(np.flatnonzero(bad_coords.to_numpy())[0]) + 2
        raise MalformedFileError(f"{csv_path}: coordinate non intere alla riga {line}")
    if freqs.isna().any():
        line = int(np.flatnonzero(freqs.isna().to_numpy())[0]) + 2
        raise MalformedFileError(f"{csv_path}: frequenza non numerica alla riga {line}")

    # float() sul testo decimale è esatto al bit
    freqs = pd.Series(np.array([float(v) for v in frame['freq_mhz']]), index=frame.index)
    return pd.DataFrame({
        'path': coords['path'].astype(np.int64),
        'col': coords['col'].astype(np.int64),
        'row': coords['row'].astype(np.int64),
        'freq_mhz': freqs,
    })


def _assemble(device_id: str, layout: DeviceLayout, frame: pd.DataFrame, source: Path) -> FrequencyFingerprint:
    columns = np.asarray(layout.columns)
    col_lookup = np.full(int(max(columns.max(), frame['col'].max() if len(frame) else 0)) + 1, -1)
    col_lookup[columns] = np.arange(columns.size)

    paths = frame['path'].to_numpy()
    cols = frame['col'].to_numpy()
    rows = frame['row'].to_numpy()

    out_of_layout = (paths < 0) | (paths >= layout.n_paths) | (rows < 0) | (rows >= layout.rows) | (cols < 0)
    col_pos = np.where(cols >= 0, col_lookup[np.clip(cols, 0, col_lookup.size - 1)], -1)
    out_of_layout |= col_pos < 0
    if out_of_layout.any():
        i = int(np.flatnonzero(out_of_layout)[0])
        raise LayoutMismatchError(
            f"{source}: cella (path={paths[i]}, col={cols[i]}, row={rows[i]}) fuori dal layout dichiarato"
        )

    duplicated = frame.duplicated(subset=['path', 'col', 'row'])
    if duplicated.any():
        i = int(np.flatnonzero(duplicated.to_numpy())[0])
        cell = (int(paths[i]), int(cols[i]), int(rows[i]))
        raise DuplicateCellError(f"{source}: cella duplicata (path={cell[0]}, col={cell[1]}, row={cell[2]})", cell)

    freqs = np.full((layout.n_paths, layout.n_columns, layout.rows), np.nan)
    freqs[paths, col_pos, rows] = frame['freq_mhz'].to_numpy()
    if len(frame) != freqs.size:
        path, pos, row = (int(v) for v in np.argwhere(np.isnan(freqs))[0])
        cell = (path, int(columns[pos]), row)
        raise MissingCellError(f"{source}: cella mancante (path={cell[0]}, col={cell[1]}, row={cell[2]})", cell)

    try:
        return FrequencyFingerprint(device_id, layout, freqs)
    except InvalidFrequencyError as e:
        raise InvalidFrequencyError(f"{source}: {e}") from e


def read_fingerprint(path: PathLike) -> FrequencyFingerprint:
    """Legge la coppia manifest/misure (accetta il percorso .csv, .json o lo stem)"""
    manifest_path, csv_path = fingerprint_paths(path)
    device_id, layout = _read_manifest(manifest_path, path)
    frame = _read_measurements(csv_path)
    fp = _assemble(device_id, layout, frame, csv_path)
    logger.debug(f"📥 Fingerprint {device_id} letto da {csv_path} ({fp.freqs.size} celle)")
    return fp


def write_fingerprint(fp: FrequencyFingerprint, path: PathLike) -> Tuple[Path, Path]:
    """Scrive manifest JSON e CSV ordinato per (path, col, row)"""
    manifest_path, csv_path = fingerprint_paths(path)
    manifest: Dict[str, Any] = {'device_id': fp.device_id}
    manifest.update(fp.layout.to_dict())
    CommonUtils.export_to_json(manifest, manifest_path)
    CommonUtils.export_to_csv(fp.to_frame(), csv_path, columns=MEASUREMENT_COLUMNS)
    logger.debug(f"💾 Fingerprint {fp.device_id} scritto in {csv_path}")
    return manifest_path, csv_path


def list_fingerprints(directory: PathLike) -> List[Path]:
    """Percorsi .csv con manifest gemello, in ordine lessicografico"""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"directory non trovata: {directory}")
    return sorted(p for p in directory.glob('*.csv') if p.with_suffix('.json').exists())

#!/usr/bin/env python3
"""
🛠️ COMMON UTILS - Rilevamento FPGA Riciclati
Utility comuni per tutti i moduli: logging, directory, esportazione CSV/JSON
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class CommonUtils:
    """
    🛠️ Utility comuni per tutti i moduli

    Funzionalità:
    - Configurazione logging
    - Gestione directory di output
    - Esportazione dati deterministica (CSV con LF, JSON ordinato)
    - Validazione DataFrame
    """

    @staticmethod
    def setup_logging(level: str = "INFO") -> None:
        """Configura il logging su stderr"""
        logging.basicConfig(
            level=getattr(logging, str(level).upper(), logging.INFO),
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
            force=True,
        )

    @staticmethod
    def ensure_directory(path: PathLike) -> Path:
        """Crea la directory se non esiste"""
        directory = Path(path)
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OSError(f"impossibile creare la directory {directory}: {e}") from e
        return directory

    @staticmethod
    def export_to_csv(data: Union[pd.DataFrame, List[Dict[str, Any]]], path: PathLike,
                      columns: Optional[List[str]] = None) -> Path:
        """Esporta dati in CSV UTF-8 con terminatori LF e float a precisione piena"""
        frame = data if isinstance(data, pd.DataFrame) else pd.DataFrame(data, columns=columns)
        if columns is not None:
            frame = frame.reindex(columns=columns)
        target = Path(path)
        try:
            if target.parent != Path(""):
                target.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(target, index=False, lineterminator="\n", encoding="utf-8")
        except OSError as e:
            raise OSError(f"scrittura fallita su {target}: {e}") from e
        logger.debug(f"💾 CSV scritto: {target} ({len(frame)} righe)")
        return target

    @staticmethod
    def export_to_json(payload: Any, path: PathLike) -> Path:
        """Esporta un oggetto JSON con chiavi ordinate e newline finale"""
        target = Path(path)
        try:
            if target.parent != Path(""):
                target.parent.mkdir(parents=True, exist_ok=True)
            with open(target, "w", encoding="utf-8", newline="\n") as handle:
                json.dump(payload, handle, indent=2, sort_keys=True)
                handle.write("\n")
        except OSError as e:
            raise OSError(f"scrittura fallita su {target}: {e}") from e
        return target

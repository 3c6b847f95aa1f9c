#!/usr/bin/env python3
"""
🔧 CONFIGURAZIONE RILEVAMENTO - Rilevamento FPGA Riciclati
Parametri di uLSIF, baseline, report e runtime da variabili d'ambiente (.env) con default documentati
"""

import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from dotenv import load_dotenv

from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "RFD_"


def _float_list(raw: str) -> List[float]:
    values = [float(item) for item in str(raw).replace(";", ",").split(",") if item.strip()]
    if not values:
        raise ValueError("lista vuota")
    return values


class DetectionConfig:
    """
    🔧 Configurazione unificata del rilevamento

    Funzionalità:
    - Griglie di selezione del modello uLSIF
    - Parametri della baseline k-means++
    - Percorsi delle configurazioni di riferimento
    - Impostazioni di report e runtime
    """

    def __init__(self, env_file: Optional[str] = None):
        """Inizializza la configurazione leggendo l'ambiente"""
        self.base_dir = Path(__file__).parent.parent
        load_dotenv(env_file, override=False)

        self._init_ulsif_config()
        self._init_simulation_config()
        self._init_baseline_config()
        self._init_report_config()
        self._init_runtime_config()

        logger.debug("✅ Configurazione rilevamento inizializzata")

    def _init_ulsif_config(self):
        """Griglie (w, λ) e costanti del modello"""
        self.ulsif_config = {
            'width_multipliers': self._get_config('RFD_ULSIF_WIDTH_MULTIPLIERS', [1.0, 2.0, 4.0], _float_list),
            'lambda_grid': self._get_config('RFD_ULSIF_LAMBDA_GRID', [1e-3, 1e-2, 1e-1, 1.0, 10.0], _float_list),
            'max_centers': self._get_config('RFD_ULSIF_MAX_CENTERS', 100, int),
            'ratio_floor': self._get_config('RFD_ULSIF_RATIO_FLOOR', 1e-12, float),
            'fallback_width': self._get_config('RFD_ULSIF_FALLBACK_WIDTH', 1.0, float),
            'loocv': self._get_config('RFD_ULSIF_LOOCV', 'analytic', str),
        }
        if self.ulsif_config['loocv'] not in ('analytic', 'explicit'):
            raise ConfigurationError(f"RFD_ULSIF_LOOCV deve essere 'analytic' o 'explicit', ricevuto {self.ulsif_config['loocv']!r}")

    def _init_simulation_config(self):
        """Percorsi delle configurazioni di riferimento"""
        configs_dir = self.base_dir / "configs"
        self.simulation_config = {
            'reference_config': Path(self._get_config('RFD_REFERENCE_CONFIG', str(configs_dir / "reference_simulation.json"))),
            'reference_layout': Path(self._get_config('RFD_REFERENCE_LAYOUT', str(configs_dir / "reference_layout.json"))),
        }

    def _init_baseline_config(self):
        """Parametri della baseline k-means++ / silhouette"""
        self.baseline_config = {
            'k_min': 2,
            'k_max': self._get_config('RFD_BASELINE_K_MAX', 4, int),
            'reference_k': self._get_config('RFD_BASELINE_REFERENCE_K', 2, int),
            'max_iter': self._get_config('RFD_KMEANS_MAX_ITER', 300, int),
            'tol': self._get_config('RFD_KMEANS_TOL', 1e-9, float),
            'select_count': 265,
        }

    def _init_report_config(self):
        """Formati e stile degli artefatti"""
        self.report_config = {
            'residual_cmap': 'RdBu_r',
            'frequency_cmap': 'viridis',
            'svg_hashsalt': 'recycled-fpga-report',
            'figure_dpi': 72,
        }

    def _init_runtime_config(self):
        """Parallelismo e logging"""
        self.runtime_config = {
            'workers': self._get_config('RFD_WORKERS', os.cpu_count() or 1, int),
            'log_level': self._get_config('RFD_LOG_LEVEL', 'INFO', str).upper(),
        }

    def _get_config(self, env_var: str, default: Any = None, cast: Callable[[str], Any] = str) -> Any:
        """Ottiene un valore da variabili d'ambiente (o .env), altrimenti il default"""
        raw = os.getenv(env_var)
        if raw not in (None, ""):
            try:
                value = cast(raw)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"Configurazione {env_var}={raw!r} non valida: {e}") from e
            logger.info(f"✅ Configurazione {env_var} da variabili d'ambiente")
            return value

        if default is not None:
            return default

        raise ConfigurationError(f"Configurazione {env_var} non trovata")

    def get_ulsif_config(self) -> Dict[str, Any]:
        """Ottiene configurazione uLSIF"""
        return dict(self.ulsif_config)

    def get_simulation_config(self) -> Dict[str, Any]:
        """Ottiene percorsi di simulazione"""
        return dict(self.simulation_config)

    def get_baseline_config(self) -> Dict[str, Any]:
        """Ottiene configurazione baseline"""
        return dict(self.baseline_config)

    def get_report_config(self) -> Dict[str, Any]:
        """Ottiene configurazione report"""
        return dict(self.report_config)

    def get_runtime_config(self) -> Dict[str, Any]:
        """Ottiene configurazione runtime"""
        return dict(self.runtime_config)

    def is_configured(self) -> bool:
        """Verifica che i file di riferimento esistano"""
        missing = [str(p) for p in self.simulation_config.values() if not Path(p).exists()]
        if missing:
            logger.error(f"❌ File di configurazione mancanti: {missing}")
            return False
        return True


# Istanza globale della configurazione
config = DetectionConfig()


def reload_config(env_file: Optional[str] = None) -> DetectionConfig:
    """Rilegge l'ambiente e sostituisce l'istanza globale"""
    global config
    config = DetectionConfig(env_file)
    return config


def get_config() -> DetectionConfig:
    """Ottiene l'istanza della configurazione"""
    return config


def get_ulsif_config() -> Dict[str, Any]:
    """Ottiene configurazione uLSIF"""
    return config.get_ulsif_config()


def get_simulation_config() -> Dict[str, Any]:
    """Ottiene percorsi di simulazione"""
    return config.get_simulation_config()


def get_baseline_config() -> Dict[str, Any]:
    """Ottiene configurazione baseline"""
    return config.get_baseline_config()


def get_report_config() -> Dict[str, Any]:
    """Ottiene configurazione report"""
    return config.get_report_config()


def get_runtime_config() -> Dict[str, Any]:
    """Ottiene configurazione runtime"""
    return config.get_runtime_config()

"""
Config package per Rilevamento FPGA Riciclati
"""

from .detection_config import (
    DetectionConfig,
    get_baseline_config,
    get_config,
    get_report_config,
    get_runtime_config,
    get_simulation_config,
    get_ulsif_config,
    reload_config,
)

__all__ = [
    'DetectionConfig',
    'get_config',
    'get_ulsif_config',
    'get_simulation_config',
    'get_baseline_config',
    'get_report_config',
    'get_runtime_config',
    'reload_config',
]

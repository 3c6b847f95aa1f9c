"""
Simulator package per Rilevamento FPGA Riciclati
"""

from .cohort import (
    COHORT_MANIFEST,
    AgedDeviceSpec,
    CircuitSpec,
    Cohort,
    CohortRecord,
    SimulationConfig,
    aged_device_id,
    load_simulation_config,
    parse_simulation_config,
    read_cohort_manifest,
    simulate_cohort,
    write_cohort,
)
from .fingerprint_simulator import (
    AgingSpec,
    Region,
    ThermalParams,
    VariationModel,
    apply_aging,
    equivalent_operating_days,
    generate_fresh,
    spatial_weight,
    systematic_surface,
    thermal_acceleration_factor,
)

__all__ = [
    'COHORT_MANIFEST',
    'AgedDeviceSpec',
    'CircuitSpec',
    'Cohort',
    'CohortRecord',
    'SimulationConfig',
    'aged_device_id',
    'load_simulation_config',
    'parse_simulation_config',
    'read_cohort_manifest',
    'simulate_cohort',
    'write_cohort',
    'AgingSpec',
    'Region',
    'ThermalParams',
    'VariationModel',
    'apply_aging',
    'equivalent_operating_days',
    'generate_fresh',
    'spatial_weight',
    'systematic_surface',
    'thermal_acceleration_factor',
]

#!/usr/bin/env python3
"""
🧪 COORTE SIMULATA - Rilevamento FPGA Riciclati
Configurazione JSON della simulazione, generazione della coorte nuovi/invecchiati e scrittura su disco
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from fingerprint.fingerprint_model import DeviceLayout, FrequencyFingerprint
from fingerprint.fingerprint_store import write_fingerprint
from utils.common_utils import CommonUtils
from utils.errors import ConfigurationError, InvalidParameterError

from .fingerprint_simulator import (
    AgingSpec,
    Region,
    ThermalParams,
    VariationModel,
    apply_aging,
    equivalent_operating_days,
    generate_fresh,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
COHORT_MANIFEST = "cohort.json"
AGING_STREAM = 1


@dataclass(frozen=True)
class CircuitSpec:
    """Impronta di un circuito utente sul die e parametri del suo degrado"""
    name: str
    region: Region
    magnitude_at_6h: float = 6.0
    falloff: float = 2.0
    profile_exponent: float = 1.0
    profile_cap: float = 1.5
    path_scale: Optional[Tuple[float, ...]] = None
    drop_jitter: float = 0.0

    def aging_spec(self, stress_hours: float) -> AgingSpec:
        return AgingSpec(
            region=self.region, stress_hours=stress_hours, magnitude_at_6h=self.magnitude_at_6h,
            falloff=self.falloff, profile_exponent=self.profile_exponent, profile_cap=self.profile_cap,
            path_scale=self.path_scale, drop_jitter=self.drop_jitter, circuit=self.name,
        )


@dataclass(frozen=True)
class AgedDeviceSpec:
    device_index: int
    circuit: str
    stress_hours: float


@dataclass(frozen=True)
class SimulationConfig:
    layout: DeviceLayout
    variation: VariationModel
    seed: int
    n_fresh: int = 35
    id_prefix: str = "FPGA-"
    id_width: int = 2
    circuits: Dict[str, CircuitSpec] = field(default_factory=dict)
    aged: Tuple[AgedDeviceSpec, ...] = ()
    thermal: ThermalParams = field(default_factory=ThermalParams)

    def __post_init__(self):
        if self.n_fresh < 1:
            raise InvalidParameterError(f"n_fresh deve essere ≥ 1, ricevuto {self.n_fresh}")
        for entry in self.aged:
            if entry.circuit not in self.circuits:
                raise InvalidParameterError(f"circuito sconosciuto {entry.circuit!r} nella tabella di invecchiamento")
            if not 1 <= entry.device_index <= self.n_fresh:
                raise InvalidParameterError(f"dispositivo {entry.device_index} fuori da 1..{self.n_fresh}")

    def device_id(self, index: int) -> str:
        return f"{self.id_prefix}{index:0{self.id_width}d}"

    def with_seed(self, seed: int) -> "SimulationConfig":
        return SimulationConfig(
            layout=self.layout, variation=self.variation, seed=int(seed), n_fresh=self.n_fresh,
            id_prefix=self.id_prefix, id_width=self.id_width, circuits=self.circuits,
            aged=self.aged, thermal=self.thermal,
        )


@dataclass(frozen=True)
class CohortRecord:
    device_id: str
    status: str
    circuit: Optional[str]
    stress_hours: float
    equivalent_days: float
    seed: List[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'device_id': self.device_id,
            'status': self.status,
            'circuit': self.circuit,
            'stress_hours': self.stress_hours,
            'equivalent_days': round(self.equivalent_days, 6),
            'seed': list(self.seed),
        }


@dataclass
class Cohort:
    fresh: List[FrequencyFingerprint]
    aged: List[FrequencyFingerprint]
    records: List[CohortRecord]

    def record_for(self, device_id: str) -> Optional[CohortRecord]:
        return next((r for r in self.records if r.device_id == device_id), None)


def aged_device_id(fresh_id: str) -> str:
    return f"{fresh_id}-aged"


def _require(data: Dict[str, Any], key: str, where: str) -> Any:
    if key not in data:
        raise ConfigurationError(f"{where}: chiave obbligatoria {key!r} mancante")
    return data[key]


def _path_offsets(raw: Any, n_paths: int) -> Tuple[float, ...]:
    if raw is None:
        return ()
    if isinstance(raw, dict) and 'linspace' in raw:
        start, stop = raw['linspace']
        return tuple(float(v) for v in np.linspace(float(start), float(stop), n_paths))
    return tuple(float(v) for v in raw)


def _region(raw: Dict[str, Any], where: str) -> Region:
    return Region(
        col_start=int(_require(raw, 'col_start', where)),
        col_end=int(_require(raw, 'col_end', where)),
        row_start=int(_require(raw, 'row_start', where)),
        row_end=int(_require(raw, 'row_end', where)),
    )


def parse_simulation_config(data: Dict[str, Any], base_dir: Optional[Path] = None) -> SimulationConfig:
    """Costruisce la configurazione da un dizionario JSON"""
    where = "configurazione di simulazione"
    if 'seed' not in data or not isinstance(data['seed'], int) or isinstance(data['seed'], bool):
        raise ConfigurationError(f"{where}: serve un 'seed' intero")

    layout_raw = _require(data, 'layout', where)
    if isinstance(layout_raw, str):
        layout_path = Path(layout_raw)
        if not layout_path.is_absolute() and base_dir is not None:
            layout_path = base_dir / layout_path
        try:
            with open(layout_path, encoding="utf-8") as handle:
                layout_raw = json.load(handle)
        except FileNotFoundError:
            raise ConfigurationError(f"{where}: layout non trovato {layout_path}") from None
    layout = DeviceLayout.from_dict(layout_raw)

    variation_raw = _require(data, 'variation', where)
    variation = VariationModel(
        nominal_freq=float(variation_raw.get('nominal_freq', 180.0)),
        random_sigma=float(variation_raw.get('random_sigma', 0.05)),
        systematic_coeffs={str(k): float(v) for k, v in variation_raw.get('systematic_coeffs', {}).items()},
        path_offsets=_path_offsets(variation_raw.get('path_offsets'), layout.n_paths),
        coeff_jitter=float(variation_raw.get('coeff_jitter', 0.2)),
    )

    circuits = {}
    for name, raw in data.get('circuits', {}).items():
        scale = raw.get('path_scale')
        circuits[name] = CircuitSpec(
            name=name,
            region=_region(_require(raw, 'region', f"circuito {name}"), f"circuito {name}"),
            magnitude_at_6h=float(raw.get('magnitude_at_6h', 6.0)),
            falloff=float(raw.get('falloff', 2.0)),
            profile_exponent=float(raw.get('profile_exponent', 1.0)),
            profile_cap=float(raw.get('profile_cap', 1.5)),
            path_scale=tuple(scale) if scale is not None else None,
            drop_jitter=float(raw.get('drop_jitter', 0.0)),
        )

    aged = tuple(
        AgedDeviceSpec(
            device_index=int(_require(entry, 'device', "voce di invecchiamento")),
            circuit=str(_require(entry, 'circuit', "voce di invecchiamento")),
            stress_hours=float(_require(entry, 'stress_hours', "voce di invecchiamento")),
        )
        for entry in data.get('aging', [])
    )

    thermal_raw = data.get('thermal', {})
    thermal = ThermalParams(**{k: float(v) for k, v in thermal_raw.items()})

    return SimulationConfig(
        layout=layout, variation=variation, seed=int(data['seed']),
        n_fresh=int(data.get('n_fresh', 35)), id_prefix=str(data.get('id_prefix', 'FPGA-')),
        id_width=int(data.get('id_width', 2)), circuits=circuits, aged=aged, thermal=thermal,
    )


def load_simulation_config(path: PathLike) -> SimulationConfig:
    """Legge e valida un file di configurazione di simulazione"""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise FileNotFoundError(f"configurazione non trovata: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: JSON non valido ({e})") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: la configurazione deve essere un oggetto JSON")
    try:
        return parse_simulation_config(data, base_dir=path.parent)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"{path}: {e}") from e


def simulate_cohort(config: SimulationConfig) -> Cohort:
    """Genera i dispositivi nuovi e le copie invecchiate della tabella di invecchiamento"""
    fresh: List[FrequencyFingerprint] = []
    records: List[CohortRecord] = []
    for index in range(1, config.n_fresh + 1):
        device_id = config.device_id(index)
        seed = [config.seed, index]
        fresh.append(generate_fresh(config.layout, config.variation, seed, device_id=device_id))
        records.append(CohortRecord(device_id, "fresh", None, 0.0, 0.0, seed))

    aged: List[FrequencyFingerprint] = []
    for entry in config.aged:
        base = fresh[entry.device_index - 1]
        spec = config.circuits[entry.circuit].aging_spec(entry.stress_hours)
        seed = [config.seed, entry.device_index, AGING_STREAM]
        device_id = aged_device_id(base.device_id)
        aged.append(apply_aging(base, spec, seed=seed, device_id=device_id))
        records.append(CohortRecord(
            device_id, "aged", entry.circuit, entry.stress_hours,
            equivalent_operating_days(entry.stress_hours, config.thermal), seed,
        ))

    logger.info(f"🏭 Coorte simulata: {len(fresh)} nuovi, {len(aged)} invecchiati")
    return Cohort(fresh=fresh, aged=aged, records=records)


def write_cohort(cohort: Cohort, out_dir: PathLike) -> List[Path]:
    """Scrive fresh/, aged/ e cohort.json; restituisce i percorsi CSV scritti"""
    out_dir = CommonUtils.ensure_directory(out_dir)
    written: List[Path] = []
    for subdir, devices in (("fresh", cohort.fresh), ("aged", cohort.aged)):
        target = CommonUtils.ensure_directory(out_dir / subdir)
        for fp in devices:
            _, csv_path = write_fingerprint(fp, target / fp.device_id)
            written.append(csv_path)

    manifest = {'devices': [record.to_dict() for record in cohort.records]}
    CommonUtils.export_to_json(manifest, out_dir / COHORT_MANIFEST)
    logger.info(f"✅ {len(written)} fingerprint scritti in {out_dir}")
    return written


def read_cohort_manifest(directory: PathLike) -> Dict[str, Dict[str, Any]]:
    """device_id → voce di cohort.json, cercato nella directory e nella sua genitrice (vuoto se assente)"""
    directory = Path(directory)
    path = next((p for p in (directory / COHORT_MANIFEST, directory.parent / COHORT_MANIFEST) if p.exists()), None)
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: JSON non valido ({e})") from e
    return {entry['device_id']: entry for entry in data.get('devices', [])}

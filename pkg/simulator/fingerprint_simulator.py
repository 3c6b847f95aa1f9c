#!/usr/bin/env python3
"""
🏭 SIMULATORE FINGERPRINT - Rilevamento FPGA Riciclati
Fingerprint sintetici nuovi e invecchiati: variazione sistematica polinomiale + rumore gaussiano,
degrado localizzato in una regione del die e fattore di accelerazione termica.

Il generatore è sempre numpy PCG64 (numpy.random.default_rng); il seed di un dispositivo è
la sequenza [seed_base, indice], quindi ogni dispositivo ha un flusso indipendente e riproducibile.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from fingerprint.fingerprint_model import DeviceLayout, FrequencyFingerprint
from utils.data_utils import DataUtils
from utils.errors import InvalidParameterError, InvalidRegionError

logger = logging.getLogger(__name__)

SeedLike = Union[int, Sequence[int]]

REFERENCE_HOURS = 6.0
MIN_FREQUENCY_FRACTION = 0.01


@dataclass(frozen=True)
class VariationModel:
    """
    🎲 Modello di variazione di processo

    Funzionalità:
    - Superficie sistematica polinomiale nelle coordinate (colonna, riga)
    - Componente casuale gaussiana a media nulla
    - Offset nominale per percorso LUT
    - Jitter dei coefficienti per dispositivo (lotti diversi)

    Le chiavi di systematic_coeffs sono monomi scritti con le lettere x e y
    ("x", "xy", "yy", ...); il grado è il numero di lettere.
    """
    nominal_freq: float = 180.0
    random_sigma: float = 0.05
    systematic_coeffs: Dict[str, float] = field(default_factory=dict)
    path_offsets: Tuple[float, ...] = ()
    coeff_jitter: float = 0.2

    def __post_init__(self):
        DataUtils.check_positive(self.nominal_freq, "nominal_freq")
        if not np.isfinite(self.random_sigma) or self.random_sigma < 0:
            raise InvalidParameterError(f"random_sigma deve essere ≥ 0, ricevuto {self.random_sigma}")
        if not 0 <= self.coeff_jitter < 1:
            raise InvalidParameterError(f"coeff_jitter deve essere in [0, 1), ricevuto {self.coeff_jitter}")
        for key in self.systematic_coeffs:
            if key.strip("xy") != "":
                raise InvalidParameterError(f"monomio non valido {key!r}: usare solo le lettere x e y")
        object.__setattr__(self, "systematic_coeffs", dict(sorted(self.systematic_coeffs.items())))
        object.__setattr__(self, "path_offsets", tuple(float(v) for v in self.path_offsets))

    @property
    def degree(self) -> int:
        return max((len(key) for key in self.systematic_coeffs), default=0)

    def offsets_for(self, n_paths: int) -> np.ndarray:
        if not self.path_offsets:
            return np.zeros(n_paths)
        if len(self.path_offsets) != n_paths:
            raise InvalidParameterError(f"path_offsets ha {len(self.path_offsets)} valori, il layout ha {n_paths} percorsi")
        return np.asarray(self.path_offsets)


def systematic_surface(coeffs: Dict[str, float], cols: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Σ c · x^a · y^b sulle coordinate grezze di colonna (x) e riga (y)"""
    cols = np.asarray(cols, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.float64)
    surface = np.zeros(np.broadcast(cols, rows).shape)
    for key, coeff in coeffs.items():
        surface = surface + coeff * cols ** key.count("x") * rows ** key.count("y")
    return surface


@dataclass(frozen=True)
class Region:
    """Rettangolo inclusivo nello spazio (colonna, riga)"""
    col_start: int
    col_end: int
    row_start: int
    row_end: int

    def __post_init__(self):
        if self.col_end < self.col_start or self.row_end < self.row_start:
            raise InvalidRegionError(f"regione vuota: {self}")

    def distance(self, cols: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """Distanza euclidea dalla regione (0 all'interno)"""
        dx = np.maximum(np.maximum(self.col_start - cols, 0), cols - self.col_end)
        dy = np.maximum(np.maximum(self.row_start - rows, 0), rows - self.row_end)
        return np.hypot(dx, dy)

    def intersects(self, layout: DeviceLayout) -> bool:
        in_rows = self.row_start < layout.rows and self.row_end >= 0
        in_cols = any(self.col_start <= col <= self.col_end for col in layout.columns)
        return in_rows and in_cols


@dataclass(frozen=True)
class AgingSpec:
    """
    ⏳ Degrado indotto da un circuito utente

    Il calo al centro della regione è profile(t) × magnitude_at_6h, con
    profile(t) = min((t / 6)^profile_exponent, profile_cap); fuori dal centro il peso
    scende a 0 con un raccordo coseno lungo `falloff` celle.
    """
    region: Region
    stress_hours: float
    magnitude_at_6h: float = 6.0
    falloff: float = 2.0
    profile_exponent: float = 1.0
    profile_cap: float = 1.5
    path_scale: Optional[Tuple[float, ...]] = None
    drop_jitter: float = 0.0
    circuit: str = "custom"

    def __post_init__(self):
        if not np.isfinite(self.stress_hours) or self.stress_hours < 0:
            raise InvalidParameterError(f"stress_hours deve essere ≥ 0, ricevuto {self.stress_hours}")
        if not np.isfinite(self.magnitude_at_6h) or self.magnitude_at_6h < 0:
            raise InvalidParameterError(f"magnitude_at_6h deve essere ≥ 0, ricevuto {self.magnitude_at_6h}")
        if not np.isfinite(self.falloff) or self.falloff < 0:
            raise InvalidParameterError(f"falloff deve essere ≥ 0, ricevuto {self.falloff}")
        DataUtils.check_positive(self.profile_exponent, "profile_exponent")
        DataUtils.check_positive(self.profile_cap, "profile_cap")
        if self.drop_jitter < 0:
            raise InvalidParameterError(f"drop_jitter deve essere ≥ 0, ricevuto {self.drop_jitter}")
        if self.path_scale is not None:
            object.__setattr__(self, "path_scale", tuple(float(v) for v in self.path_scale))
            if any(v < 0 for v in self.path_scale):
                raise InvalidParameterError("path_scale deve essere non negativo")

    def profile(self, hours: Optional[float] = None) -> float:
        t = self.stress_hours if hours is None else float(hours)
        if t <= 0:
            return 0.0
        return min((t / REFERENCE_HOURS) ** self.profile_exponent, self.profile_cap)

    def with_hours(self, hours: float) -> "AgingSpec":
        return AgingSpec(
            region=self.region, stress_hours=hours, magnitude_at_6h=self.magnitude_at_6h,
            falloff=self.falloff, profile_exponent=self.profile_exponent, profile_cap=self.profile_cap,
            path_scale=self.path_scale, drop_jitter=self.drop_jitter, circuit=self.circuit,
        )


def spatial_weight(region: Region, layout: DeviceLayout, falloff: float) -> np.ndarray:
    """Peso (colonna, riga): 1 nella regione, raccordo coseno fino a `falloff`, poi 0"""
    cols = np.asarray(layout.columns, dtype=np.float64)[:, None]
    rows = np.arange(layout.rows, dtype=np.float64)[None, :]
    distance = region.distance(cols, rows)
    weight = np.zeros_like(distance)
    weight[distance == 0] = 1.0
    if falloff > 0:
        edge = (distance > 0) & (distance < falloff)
        weight[edge] = 0.5 * (1.0 + np.cos(np.pi * distance[edge] / falloff))
    return weight


@dataclass(frozen=True)
class ThermalParams:
    activation_energy_ev: float = 0.5
    boltzmann_ev_per_k: float = 8.62e-5
    t_op_kelvin: float = 313.0
    t_stress_kelvin: float = 408.0

    def __post_init__(self):
        for name in ('activation_energy_ev', 'boltzmann_ev_per_k', 't_op_kelvin', 't_stress_kelvin'):
            DataUtils.check_positive(getattr(self, name), name)
        if self.t_stress_kelvin < self.t_op_kelvin:
            raise InvalidParameterError(
                f"t_stress ({self.t_stress_kelvin} K) non può essere inferiore a t_op ({self.t_op_kelvin} K)"
            )


def thermal_acceleration_factor(params: ThermalParams) -> float:
    """F_T = exp((E_a / k) · (1/T_op − 1/T_stress))"""
    exponent = (params.activation_energy_ev / params.boltzmann_ev_per_k) * (
        1.0 / params.t_op_kelvin - 1.0 / params.t_stress_kelvin
    )
    return math.exp(exponent)


def equivalent_operating_days(stress_hours: float, params: ThermalParams) -> float:
    """Giorni di funzionamento a T_op equivalenti a `stress_hours` di stress"""
    return float(stress_hours) * thermal_acceleration_factor(params) / 24.0


def generate_fresh(layout: DeviceLayout, vm: VariationModel, seed: SeedLike,
                   device_id: str = "FPGA") -> FrequencyFingerprint:
    """
    freq(path, x, y) = nominale + offset(path) + poly(x, y) + N(0, σ²).

    Ordine di estrazione fisso: prima un fattore di jitter uniforme per coefficiente
    (in ordine di chiave), poi il rumore dell'intera griglia.
    """
    rng = np.random.default_rng(seed)
    jitter = rng.uniform(-1.0, 1.0, size=len(vm.systematic_coeffs))
    coeffs = {key: coeff * (1.0 + vm.coeff_jitter * j)
              for (key, coeff), j in zip(vm.systematic_coeffs.items(), jitter)}

    shape = (layout.n_paths, layout.n_columns, layout.rows)
    cols = np.asarray(layout.columns, dtype=np.float64)[:, None]
    rows = np.arange(layout.rows, dtype=np.float64)[None, :]
    surface = systematic_surface(coeffs, cols, rows)
    noise = rng.normal(0.0, vm.random_sigma, size=shape) if vm.random_sigma > 0 else np.zeros(shape)

    freqs = vm.nominal_freq + vm.offsets_for(layout.n_paths)[:, None, None] + surface[None, :, :] + noise
    return FrequencyFingerprint(device_id, layout, freqs)


def apply_aging(fp: FrequencyFingerprint, spec: AgingSpec, seed: Optional[SeedLike] = None,
                device_id: Optional[str] = None) -> FrequencyFingerprint:
    """Copia del fingerprint con il calo di frequenza della regione invecchiata"""
    layout = fp.layout
    if not spec.region.intersects(layout):
        raise InvalidRegionError(f"la regione {spec.region} non interseca il layout di {fp.device_id}")

    weight = spatial_weight(spec.region, layout, spec.falloff)
    drop = spec.profile() * spec.magnitude_at_6h * np.broadcast_to(weight, fp.freqs.shape)

    if spec.path_scale is not None:
        if len(spec.path_scale) != layout.n_paths:
            raise InvalidParameterError(f"path_scale ha {len(spec.path_scale)} valori, il layout ha {layout.n_paths} percorsi")
        drop = drop * np.asarray(spec.path_scale)[:, None, None]
    if spec.drop_jitter > 0:
        if seed is None:
            raise InvalidParameterError("drop_jitter > 0 richiede un seed")
        rng = np.random.default_rng(seed)
        drop = drop * np.maximum(0.0, 1.0 + spec.drop_jitter * rng.standard_normal(fp.freqs.shape))

    aged = np.maximum(fp.freqs - drop, MIN_FREQUENCY_FRACTION * fp.freqs)
    logger.debug(f"⏳ {fp.device_id}: invecchiamento {spec.circuit} t={spec.stress_hours}h, calo massimo {drop.max():.3f} MHz")
    return fp.with_freqs(aged, device_id=device_id)

#!/usr/bin/env python3
"""
🧪 FIXTURE CONDIVISE - Rilevamento FPGA Riciclati
Layout ridotti, fingerprint sintetici e profilo hypothesis comune
"""

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from config import reload_config
from fingerprint import DeviceLayout
from simulator import AgingSpec, Region, VariationModel, apply_aging, generate_fresh

settings.register_profile(
    "rfd",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("rfd")

REPO_ROOT = Path(__file__).parent


@pytest.fixture
def small_layout():
    """Due gruppi (0-2, 4-5) con barriera in 4, 2 percorsi, 20 righe: coppie (0,1), (1,2), (4,5)"""
    return DeviceLayout(rows=20, column_groups=((0, 2), (4, 5)), lut_inputs=2, ro_stages=3)


@pytest.fixture
def small_variation():
    return VariationModel(
        nominal_freq=180.0,
        random_sigma=0.05,
        systematic_coeffs={'x': 0.03, 'y': 0.0005},
        path_offsets=(-2.0, 2.0),
        coeff_jitter=0.2,
    )


@pytest.fixture
def fresh_fp(small_layout, small_variation):
    return generate_fresh(small_layout, small_variation, seed=[7, 1], device_id="DEV-01")


@pytest.fixture
def aged_fp(fresh_fp):
    """Calo netto di 6 MHz sulla colonna 5, righe 0-3"""
    spec = AgingSpec(region=Region(5, 5, 0, 3), stress_hours=6.0, falloff=0.0)
    return apply_aging(fresh_fp, spec, device_id="DEV-01-aged")


@pytest.fixture
def small_simulation_config(tmp_path):
    """Configurazione di simulazione ridotta su disco: 4 nuovi, 2 invecchiati"""
    data = {
        'seed': 11,
        'layout': {'rows': 12, 'column_groups': [[0, 2], [4, 5]], 'lut_inputs': 2, 'ro_stages': 3},
        'n_fresh': 4,
        'id_prefix': 'T-',
        'id_width': 2,
        'variation': {
            'random_sigma': 0.05,
            'coeff_jitter': 0.2,
            'path_offsets': {'linspace': [-2.0, 2.0]},
            'systematic_coeffs': {'x': 0.03, 'y': 0.0005},
        },
        'circuits': {
            'blk': {'region': {'col_start': 5, 'col_end': 5, 'row_start': 0, 'row_end': 3}},
        },
        'aging': [
            {'device': 1, 'circuit': 'blk', 'stress_hours': 6},
            {'device': 2, 'circuit': 'blk', 'stress_hours': 3},
        ],
    }
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture
def env_config(monkeypatch):
    """monkeypatch per variabili RFD_; la configurazione globale viene ripristinata alla fine"""
    yield monkeypatch
    monkeypatch.undo()
    reload_config()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

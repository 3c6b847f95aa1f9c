#!/usr/bin/env python3
"""
🧪 TEST SIMULATORE - Rilevamento FPGA Riciclati
Variazione di processo, degrado localizzato, fattore termico e coorte da configurazione
"""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from config import get_simulation_config
from fingerprint import adjacent_pairs, list_fingerprints, read_fingerprint
from simulator import (
    AgingSpec,
    Region,
    ThermalParams,
    VariationModel,
    aged_device_id,
    apply_aging,
    equivalent_operating_days,
    generate_fresh,
    load_simulation_config,
    parse_simulation_config,
    read_cohort_manifest,
    simulate_cohort,
    spatial_weight,
    systematic_surface,
    thermal_acceleration_factor,
    write_cohort,
)
from utils import ConfigurationError, InvalidParameterError, InvalidRegionError


def test_thermal_factor_reference_constants():
    params = ThermalParams()
    factor = thermal_acceleration_factor(params)
    assert 74.0 <= factor <= 76.0
    assert 18.0 <= equivalent_operating_days(6, params) <= 19.5
    days = [equivalent_operating_days(t, params) for t in (6, 3, 2, 1)]
    assert [round(d) for d in days] == [19, 9, 6, 3]


def test_thermal_factor_equal_temperatures_is_one():
    assert thermal_acceleration_factor(ThermalParams(t_op_kelvin=350.0, t_stress_kelvin=350.0)) == 1.0


def test_thermal_rejects_inverted_temperatures():
    with pytest.raises(InvalidParameterError):
        ThermalParams(t_op_kelvin=400.0, t_stress_kelvin=300.0)


def test_same_seed_same_device(small_layout, small_variation):
    a = generate_fresh(small_layout, small_variation, seed=[3, 1])
    b = generate_fresh(small_layout, small_variation, seed=[3, 1])
    c = generate_fresh(small_layout, small_variation, seed=[3, 2])
    assert a == b
    assert not np.array_equal(a.freqs, c.freqs)


def test_unit_gradient_gives_constant_residual(small_layout):
    vm = VariationModel(nominal_freq=100.0, random_sigma=0.0, systematic_coeffs={'x': 0.25}, coeff_jitter=0.0)
    fp = generate_fresh(small_layout, vm, seed=0)
    for left, right in adjacent_pairs(small_layout):
        assert np.allclose(fp.column(0, left) - fp.column(0, right), -0.25, atol=1e-12)


def test_random_component_statistics():
    from fingerprint import DeviceLayout
    layout = DeviceLayout(rows=200, column_groups=((0, 9),), lut_inputs=3, ro_stages=3)
    fp = generate_fresh(layout, VariationModel(random_sigma=0.5, coeff_jitter=0.0), seed=5)
    residual = fp.freqs - 180.0
    assert abs(residual.mean()) < 0.05
    assert residual.std() == pytest.approx(0.5, rel=0.05)


def test_path_offsets_shift_each_path(small_layout):
    vm = VariationModel(nominal_freq=100.0, random_sigma=0.0, path_offsets=(-3.0, 4.0))
    fp = generate_fresh(small_layout, vm, seed=0)
    assert np.all(fp.freqs[0] == 97.0)
    assert np.all(fp.freqs[1] == 104.0)


def test_variation_model_validation(small_layout):
    with pytest.raises(InvalidParameterError):
        VariationModel(random_sigma=-0.1)
    with pytest.raises(InvalidParameterError):
        VariationModel(systematic_coeffs={'z': 1.0})
    with pytest.raises(InvalidParameterError):
        VariationModel(path_offsets=(1.0, 2.0, 3.0)).offsets_for(small_layout.n_paths)
    assert VariationModel(systematic_coeffs={'xy': 1.0, 'x': 2.0}).degree == 2


def test_spatial_weight_cosine_taper(small_layout):
    weight = spatial_weight(Region(5, 5, 0, 5), small_layout, falloff=2.0)
    columns = small_layout.columns
    col4, col5 = columns.index(4), columns.index(5)
    assert np.all(weight[col5, :6] == 1.0)
    assert weight[col4, 0] == pytest.approx(0.5)
    assert weight[col5, 7] == pytest.approx(0.0, abs=1e-15)
    assert weight[columns.index(2), 0] == 0.0


def test_aging_core_drop_matches_profile(fresh_fp):
    for hours, expected in ((6.0, 6.0), (3.0, 3.0), (1.0, 1.0), (100.0, 9.0)):
        spec = AgingSpec(region=Region(5, 5, 0, 5), stress_hours=hours, falloff=0.0)
        aged = apply_aging(fresh_fp, spec)
        drop = fresh_fp.column(0, 5)[:6] - aged.column(0, 5)[:6]
        assert np.allclose(drop, expected, atol=1e-9)
        assert np.array_equal(aged.column(0, 4), fresh_fp.column(0, 4))


@given(st.floats(min_value=0.0, max_value=24.0), st.floats(min_value=0.0, max_value=24.0))
def test_aging_monotone_in_stress_hours(fresh_fp, t1, t2):
    low, high = sorted((t1, t2))
    region = Region(4, 5, 2, 8)
    aged_low = apply_aging(fresh_fp, AgingSpec(region=region, stress_hours=low))
    aged_high = apply_aging(fresh_fp, AgingSpec(region=region, stress_hours=high))
    assert np.all(aged_low.freqs <= fresh_fp.freqs)
    assert np.all(aged_high.freqs <= aged_low.freqs + 1e-12)


def test_aging_zero_hours_is_identity(fresh_fp):
    aged = apply_aging(fresh_fp, AgingSpec(region=Region(4, 5, 0, 3), stress_hours=0.0))
    assert np.array_equal(aged.freqs, fresh_fp.freqs)


def test_aging_outside_layout_rejected(fresh_fp):
    with pytest.raises(InvalidRegionError):
        apply_aging(fresh_fp, AgingSpec(region=Region(30, 31, 0, 3), stress_hours=6.0))
    with pytest.raises(InvalidRegionError):
        Region(3, 1, 0, 0)


def test_aging_jitter_needs_seed_and_is_reproducible(fresh_fp):
    spec = AgingSpec(region=Region(5, 5, 0, 5), stress_hours=6.0, drop_jitter=0.1)
    with pytest.raises(InvalidParameterError):
        apply_aging(fresh_fp, spec)
    assert apply_aging(fresh_fp, spec, seed=[1, 1, 1]) == apply_aging(fresh_fp, spec, seed=[1, 1, 1])


def test_aging_path_scale(fresh_fp):
    spec = AgingSpec(region=Region(5, 5, 0, 5), stress_hours=6.0, falloff=0.0, path_scale=(0.0, 1.0))
    aged = apply_aging(fresh_fp, spec)
    assert np.array_equal(aged.freqs[0], fresh_fp.freqs[0])
    assert np.allclose(fresh_fp.column(1, 5)[:6] - aged.column(1, 5)[:6], 6.0)


def test_reference_config_loads():
    config = load_simulation_config(get_simulation_config()['reference_config'])
    assert config.layout.n_cells == 42112
    assert config.n_fresh == 35
    assert [(a.circuit, a.stress_hours) for a in config.aged] == [
        ('s9234', 6.0), ('s9234', 6.0), ('s9234', 3.0), ('s9234', 2.0), ('s9234', 1.0),
        ('riscv', 6.0), ('riscv', 3.0), ('riscv', 2.0), ('riscv', 1.0),
    ]
    assert len(config.variation.path_offsets) == 32
    assert config.variation.path_offsets[0] == -12.0 and config.variation.path_offsets[-1] == 12.0


def test_simulate_and_write_cohort(tmp_path, small_simulation_config):
    config = load_simulation_config(small_simulation_config)
    cohort = simulate_cohort(config)
    assert [fp.device_id for fp in cohort.fresh] == ["T-01", "T-02", "T-03", "T-04"]
    assert [fp.device_id for fp in cohort.aged] == ["T-01-aged", "T-02-aged"]
    record = cohort.record_for("T-02-aged")
    assert record.status == "aged" and record.circuit == "blk" and record.stress_hours == 3.0
    assert record.seed == [11, 2, 1]

    written = write_cohort(cohort, tmp_path / "out")
    assert len(written) == 6
    assert len(list_fingerprints(tmp_path / "out" / "fresh")) == 4
    assert read_fingerprint(tmp_path / "out" / "aged" / "T-01-aged.csv") == cohort.aged[0]

    manifest = read_cohort_manifest(tmp_path / "out" / "aged")
    assert manifest["T-01-aged"]['equivalent_days'] == pytest.approx(6 * thermal_acceleration_factor(ThermalParams()) / 24, rel=1e-6)
    assert manifest["T-03"]['status'] == "fresh"
    assert read_cohort_manifest(tmp_path) == {}


def test_cohort_is_deterministic(small_simulation_config):
    config = load_simulation_config(small_simulation_config)
    first, second = simulate_cohort(config), simulate_cohort(config)
    assert first.fresh == second.fresh and first.aged == second.aged
    reseeded = simulate_cohort(config.with_seed(12))
    assert reseeded.fresh[0] != first.fresh[0]


def test_aged_copy_differs_only_near_region(small_simulation_config):
    cohort = simulate_cohort(load_simulation_config(small_simulation_config))
    fresh, aged = cohort.fresh[0], cohort.aged[0]
    assert aged_device_id(fresh.device_id) == aged.device_id
    changed = np.argwhere(aged.freqs != fresh.freqs)
    columns = np.asarray(fresh.layout.columns)[changed[:, 1]]
    assert set(columns) <= {4, 5}
    assert changed[:, 2].max() <= 5


def test_config_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_simulation_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_simulation_config(bad)
    no_seed = tmp_path / "noseed.json"
    no_seed.write_text(json.dumps({'layout': {}, 'variation': {}}), encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_simulation_config(no_seed)


def test_unknown_circuit_rejected():
    data = {
        'seed': 1,
        'layout': {'rows': 4, 'column_groups': [[0, 1]], 'lut_inputs': 1, 'ro_stages': 3},
        'variation': {},
        'n_fresh': 2,
        'aging': [{'device': 1, 'circuit': 'nope', 'stress_hours': 6}],
    }
    with pytest.raises(InvalidParameterError):
        parse_simulation_config(data)


def test_calibration_sweep(small_simulation_config):
    from calibrate_variation import sweep

    rows = sweep(small_simulation_config, [0.05, 0.2], fresh_count=2, workers=1)
    assert [row['random_sigma'] for row in rows] == [0.05, 0.2]
    assert set(rows[0]) == {'random_sigma', 'fresh_max', 'blk_t6', 'blk_t3'}
    assert all(np.isfinite(value) for row in rows for value in row.values())


def test_fresh_neighbour_residuals_bounded():
    config = load_simulation_config(get_simulation_config()['reference_config'])
    layout, vm = config.layout, config.variation
    pairs = adjacent_pairs(layout)

    rows = np.arange(layout.rows, dtype=np.float64)
    gradient = 0.0
    for left, right in pairs:
        step = sum(abs(coeff) * (1.0 + vm.coeff_jitter)
                   * np.abs(systematic_surface({key: 1.0}, right, rows) - systematic_surface({key: 1.0}, left, rows))
                   for key, coeff in vm.systematic_coeffs.items())
        gradient = max(gradient, float(np.max(step)))

    means = []
    for i in range(1, 5):
        fp = generate_fresh(layout, vm, seed=[config.seed, i])
        for path in range(layout.n_paths):
            for left, right in pairs:
                means.append(np.mean(np.abs(fp.column(path, left) - fp.column(path, right))))
    assert np.percentile(means, 99) <= 2.0 * vm.random_sigma + gradient

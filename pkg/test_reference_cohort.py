#!/usr/bin/env python3
"""
🧪 TEST COORTE DI RIFERIMENTO - Rilevamento FPGA Riciclati
35 dispositivi nuovi e 9 invecchiati sul layout completo; lento, eseguire con: pytest -m slow
"""

import pytest

from baseline import RandomSelection, baseline_detect
from config import get_simulation_config
from detector import DetectorSettings, score_devices
from report import roc
from simulator import load_simulation_config, simulate_cohort

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def reference():
    cohort = simulate_cohort(load_simulation_config(get_simulation_config()['reference_config']))
    scores = score_devices(cohort.fresh + cohort.aged, DetectorSettings.from_config())
    by_id = {s.device_id: s.device_statistic for s in scores}
    return cohort, by_id


def _aged(cohort, circuit=None, min_hours=0.0):
    return [fp for fp in cohort.aged
            if (circuit is None or cohort.record_for(fp.device_id).circuit == circuit)
            and cohort.record_for(fp.device_id).stress_hours >= min_hours]


def test_fresh_devices_stay_low(reference):
    cohort, by_id = reference
    fresh = [by_id[fp.device_id] for fp in cohort.fresh]
    assert len(fresh) == 35
    assert max(fresh) < 10.0


def test_long_stress_devices_are_far_above_fresh(reference):
    cohort, by_id = reference
    assert min(by_id[fp.device_id] for fp in _aged(cohort, min_hours=2.0)) > 20.0


def test_riscv_cohort_is_perfectly_separated(reference):
    cohort, by_id = reference
    fresh = [by_id[fp.device_id] for fp in cohort.fresh]
    curve = roc(fresh, [by_id[fp.device_id] for fp in _aged(cohort, circuit="riscv")])
    assert curve.best_point[1:] == (0.0, 1.0)
    assert curve.auc == 1.0


def test_s9234_misses_only_the_one_hour_device(reference):
    cohort, by_id = reference
    fresh = [by_id[fp.device_id] for fp in cohort.fresh]
    aged = _aged(cohort, circuit="s9234")
    curve = roc(fresh, [by_id[fp.device_id] for fp in aged])
    threshold, fpr, tpr = curve.best_point
    assert (fpr, tpr) == (0.0, 4 / 5)

    missed = [fp.device_id for fp in aged if by_id[fp.device_id] <= threshold]
    assert [cohort.record_for(i).stress_hours for i in missed] == [1.0]


@pytest.mark.parametrize("mode", ["all", "random"])
def test_baseline_reports_two_clusters_everywhere(reference, mode):
    cohort, _ = reference
    for i, fp in enumerate(cohort.fresh + cohort.aged):
        selection = "all" if mode == "all" else RandomSelection(265, i)
        verdict = baseline_detect(fp, selection=selection, seed=i)
        assert verdict.optimal_k == 2, fp.device_id
        assert verdict.label == "fresh"

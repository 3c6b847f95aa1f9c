#!/usr/bin/env python3
"""
🏠 RUN LOCAL - Rilevamento FPGA Riciclati
Script per eseguire in locale la pipeline di riferimento (simulate → evaluate)
"""

import os
import subprocess
import sys

OUTPUT_DIR = os.environ.get('RFD_LOCAL_OUT', 'local_run')


def check_requirements():
    """Controlla se i requirements sono installati"""
    try:
        import dotenv  # noqa: F401
        import matplotlib  # noqa: F401
        import numpy  # noqa: F401
        import pandas  # noqa: F401
        import scipy  # noqa: F401
        import sklearn  # noqa: F401
        print("✅ Tutti i requirements sono installati")
        return True
    except ImportError as e:
        print(f"❌ Modulo mancante: {e}")
        print("📦 Installa i requirements con: pip install -r requirements.txt")
        return False


def check_config():
    """Controlla che le configurazioni di riferimento siano presenti"""
    from config import get_config

    if not get_config().is_configured():
        print("⚠️ Configurazioni di riferimento mancanti (vedi config_example.py)")
        return False

    print("✅ Configurazione presente")
    return True


def run_step(*args):
    """Esegue un sottocomando di app.py e si ferma al primo errore"""
    print(f"⏳ app.py {' '.join(args)}")
    result = subprocess.run([sys.executable, 'app.py', *args])
    if result.returncode != 0:
        print(f"❌ Passo fallito con stato {result.returncode}")
        return False
    return True


def run_pipeline():
    """Simula la coorte di riferimento e produce il report con figure e baseline"""
    from config import get_runtime_config, get_simulation_config

    reference = str(get_simulation_config()['reference_config'])
    cohort_dir = os.path.join(OUTPUT_DIR, 'cohort')
    report_dir = os.path.join(OUTPUT_DIR, 'report')
    workers = str(max(get_runtime_config()['workers'], os.cpu_count() or 1))

    try:
        if not run_step('simulate', '--config', reference, '--out', cohort_dir):
            return
        if not run_step('evaluate',
                        '--fresh-dir', os.path.join(cohort_dir, 'fresh'),
                        '--aged-dir', os.path.join(cohort_dir, 'aged'),
                        '--out', report_dir, '--workers', workers, '--svg',
                        '--with-baseline', '--select', '265', '--seed', '0'):
            return
        print(f"📊 Report in {report_dir}")
    except KeyboardInterrupt:
        print("\n⏹️ Pipeline interrotta")


def main():
    """Funzione principale"""
    print("🎯 Rilevamento FPGA Riciclati - Run Local")
    print("=" * 50)

    if not check_requirements():
        return

    if not check_config():
        return

    print("\n✅ Tutto pronto!")
    run_pipeline()


if __name__ == "__main__":
    main()

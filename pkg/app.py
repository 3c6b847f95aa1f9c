#!/usr/bin/env python3
"""
🚀 RILEVAMENTO FPGA RICICLATI - Entry point
Riga di comando unica: simulate → detect → baseline → evaluate, più heatmap dei residui
"""

import argparse
import logging
import re
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from baseline import RandomSelection, baseline_detect, silhouette_table_columns, silhouette_table_rows
from config import get_baseline_config, get_runtime_config
from detector import DetectorSettings, classify, score_devices
from fingerprint import FrequencyFingerprint, list_fingerprints, read_fingerprint
from report import (
    STATISTIC_COLUMNS,
    SUMMARY_COLUMNS,
    best_threshold,
    frequency_map,
    render_frequency_svg,
    render_path_scores_svg,
    render_residual_svg,
    render_roc_svg,
    residual_map,
    roc,
    statistic_rows,
    summary_rows,
    write_frequency_csv,
    write_residual_csv,
    write_roc_csv,
    write_scores_csv,
    write_verdicts_csv,
)
from simulator import load_simulation_config, read_cohort_manifest, simulate_cohort, write_cohort
from ulsif import model_to_dict
from utils import CommonUtils, RecycledDetectionError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_RECYCLED = 2
DEFAULT_BASELINE_SEED = 0


class UsageError(Exception):
    """Combinazione di opzioni non valida, rilevata prima di iniziare il lavoro"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.exit(EXIT_ERROR, f"{self.prog}: errore: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    runtime = get_runtime_config()
    parser = _ArgumentParser(
        prog="app.py",
        description="Rilevamento non supervisionato di FPGA riciclati tramite uLSIF sulle frequenze RO",
    )
    parser.add_argument("--log-level", default=runtime['log_level'],
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Livello di logging su stderr (default da RFD_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", metavar="{simulate,detect,baseline,evaluate,heatmap}",
                                parser_class=_ArgumentParser)
    sub.required = True

    p = sub.add_parser("simulate", help="Genera la coorte sintetica da un file di configurazione")
    p.add_argument("--config", required=True, type=Path, help="File JSON di simulazione (vedi docs/)")
    p.add_argument("--out", required=True, type=Path, help="Directory di uscita (fresh/, aged/, cohort.json)")
    p.add_argument("--seed", type=int, help="Sostituisce il seed dichiarato nella configurazione")

    p = sub.add_parser("detect", help="Statistica uLSIF e verdetto per uno o più fingerprint")
    p.add_argument("--fingerprint", required=True, nargs="+", type=Path, help="Fingerprint (.csv o .json)")
    p.add_argument("--threshold", type=float, help="Soglia: recycled se statistica > soglia")
    p.add_argument("--dump-scores", type=Path, help="CSV con il massimo di ogni direzione per confronto")
    p.add_argument("--dump-model", type=Path, help="JSON con i modelli uLSIF selezionati")
    p.add_argument("--fail-on-recycled", action="store_true",
                   help="Esce con stato 2 se un dispositivo è recycled (richiede --threshold)")
    p.add_argument("--workers", type=int, default=runtime['workers'], help="Processi paralleli")

    p = sub.add_parser("baseline", help="Baseline k-means++ con scelta di k tramite silhouette")
    p.add_argument("--fingerprint", required=True, nargs="+", type=Path, help="Fingerprint (.csv o .json)")
    p.add_argument("--select", type=int, help="Numero di siti CLB estratti a caso (richiede --seed)")
    p.add_argument("--seed", type=int, help="Seed per la selezione e per il seeding k-means++ (default 0)")
    p.add_argument("--k-max", type=int, default=get_baseline_config()['k_max'], help="k massimo valutato")
    p.add_argument("--out", type=Path, help="CSV della tabella silhouette (default: stdout)")

    p = sub.add_parser("evaluate", help="ROC e report su coorti nuove e invecchiate")
    p.add_argument("--fresh-dir", required=True, type=Path, help="Directory dei fingerprint nuovi")
    p.add_argument("--aged-dir", required=True, type=Path, help="Directory dei fingerprint invecchiati")
    p.add_argument("--out", required=True, type=Path, help="Directory del report")
    p.add_argument("--threshold", type=float, help="Soglia dei verdetti (default: punto migliore della ROC)")
    p.add_argument("--workers", type=int, default=runtime['workers'], help="Processi paralleli")
    p.add_argument("--svg", action="store_true", help="Scrive anche le figure SVG")
    p.add_argument("--with-baseline", action="store_true", help="Esegue anche la baseline k-means++")
    p.add_argument("--select", type=int, help="Siti CLB casuali per la baseline (richiede --seed)")
    p.add_argument("--seed", type=int, help="Seed della baseline")

    p = sub.add_parser("heatmap", help="Mappa di frequenze o residui per un percorso LUT")
    p.add_argument("--fingerprint", required=True, type=Path, help="Fingerprint (.csv o .json)")
    p.add_argument("--path", required=True, type=int, help="Indice del percorso LUT")
    p.add_argument("--residual", action="store_true", help="Residui tra colonne adiacenti invece delle frequenze")
    p.add_argument("--out", required=True, type=Path, help="CSV di uscita")
    p.add_argument("--svg", type=Path, help="SVG di uscita")
    return parser


def _validate(args: argparse.Namespace) -> None:
    """Controlli sulle combinazioni di opzioni"""
    if getattr(args, 'workers', 1) < 1:
        raise UsageError(f"--workers deve essere ≥ 1, ricevuto {args.workers}")
    if args.command == "detect" and args.fail_on_recycled and args.threshold is None:
        raise UsageError("--fail-on-recycled richiede --threshold")
    if args.command in ("baseline", "evaluate") and args.select is not None and args.seed is None:
        raise UsageError("--select richiede --seed")
    if args.command == "evaluate" and not args.with_baseline and (args.select is not None or args.seed is not None):
        raise UsageError("--select/--seed hanno effetto solo con --with-baseline")
    if args.command == "baseline" and args.k_max < 2:
        raise UsageError(f"--k-max deve essere ≥ 2, ricevuto {args.k_max}")


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", name)


class DetectionApp:
    """
    🎯 Applicazione a riga di comando

    Ogni sottocomando legge i suoi ingressi, delega ai pacchetti e scrive i dati su file o stdout.
    """

    def __init__(self, args: argparse.Namespace):
        self.args = args

    def run(self) -> int:
        handler = getattr(self, f"run_{self.args.command}")
        return handler()

    def run_simulate(self) -> int:
        config = load_simulation_config(self.args.config)
        if self.args.seed is not None:
            config = config.with_seed(self.args.seed)
        cohort = simulate_cohort(config)
        written = write_cohort(cohort, self.args.out)
        print(f"{len(cohort.fresh)} fresh, {len(cohort.aged)} aged, {len(written)} fingerprint in {self.args.out}")
        return EXIT_OK

    def run_detect(self) -> int:
        fingerprints = [read_fingerprint(path) for path in self.args.fingerprint]
        settings = DetectorSettings.from_config(workers=self.args.workers)
        scores = score_devices(fingerprints, settings)

        if self.args.dump_scores:
            write_scores_csv(scores, self.args.dump_scores)
        if self.args.dump_model:
            payload = {
                score.device_id: [{
                    'path': c.path,
                    'col_left': c.col_left,
                    'col_right': c.col_right,
                    'forward': model_to_dict(c.forward_model),
                    'backward': model_to_dict(c.backward_model),
                } for c in score.comparisons]
                for score in scores
            }
            CommonUtils.export_to_json(payload, self.args.dump_model)

        if self.args.threshold is None:
            print("device,device_statistic")
            for score in scores:
                print(f"{score.device_id},{score.device_statistic!r}")
            return EXIT_OK

        verdicts = classify(scores, self.args.threshold)
        print("device,device_statistic,threshold,label")
        for verdict in verdicts:
            print(f"{verdict.device_id},{verdict.device_statistic!r},{verdict.threshold!r},{verdict.label}")
        if self.args.fail_on_recycled and any(v.is_recycled for v in verdicts):
            logger.warning("⚠️ Rilevato almeno un dispositivo recycled")
            return EXIT_RECYCLED
        return EXIT_OK

    def _baseline_verdicts(self, fingerprints: Sequence[FrequencyFingerprint], k_max: Optional[int] = None):
        cfg = get_baseline_config()
        seed = self.args.seed
        if seed is None:
            seed = DEFAULT_BASELINE_SEED
            logger.info(f"🎲 Baseline senza --seed: uso il seed di default {seed} per k-means++")
        selection = RandomSelection(self.args.select, seed) if self.args.select is not None else "all"
        k_range = range(cfg['k_min'], (k_max or cfg['k_max']) + 1)
        return [baseline_detect(fp, selection=selection, k_range=k_range, seed=seed) for fp in fingerprints]

    def run_baseline(self) -> int:
        fingerprints = [read_fingerprint(path) for path in self.args.fingerprint]
        verdicts = self._baseline_verdicts(fingerprints, k_max=self.args.k_max)
        rows = silhouette_table_rows(verdicts)
        columns = silhouette_table_columns(verdicts)
        if self.args.out:
            CommonUtils.export_to_csv(rows, self.args.out, columns=columns)
        else:
            print(",".join(columns))
            for row in rows:
                print(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in columns))
        return EXIT_OK

    def _load_cohorts(self):
        fresh = [read_fingerprint(p) for p in list_fingerprints(self.args.fresh_dir)]
        aged = [read_fingerprint(p) for p in list_fingerprints(self.args.aged_dir)]
        if not fresh or not aged:
            empty = self.args.fresh_dir if not fresh else self.args.aged_dir
            raise UsageError(f"nessun fingerprint in {empty}")
        ids = [fp.device_id for fp in fresh + aged]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise UsageError(f"device_id duplicati tra le coorti: {duplicates}")

        manifest = dict(read_cohort_manifest(self.args.fresh_dir))
        manifest.update(read_cohort_manifest(self.args.aged_dir))
        records: Dict[str, Dict] = {}
        for status, devices in (("fresh", fresh), ("aged", aged)):
            for fp in devices:
                records[fp.device_id] = dict(manifest.get(fp.device_id, {}), status=status)
        return fresh, aged, records

    @staticmethod
    def _circuit_stats(aged: Sequence[FrequencyFingerprint], by_id, records, circuit: str) -> List[float]:
        return [by_id[fp.device_id].device_statistic for fp in aged
                if records.get(fp.device_id, {}).get('circuit') == circuit]

    def run_evaluate(self) -> int:
        out = CommonUtils.ensure_directory(self.args.out)
        fresh, aged, records = self._load_cohorts()
        settings = DetectorSettings.from_config(workers=self.args.workers)

        logger.info(f"🔬 Valutazione di {len(fresh)} nuovi e {len(aged)} invecchiati")
        scores = score_devices(fresh + aged, settings)
        by_id = {s.device_id: s for s in scores}
        aged_ids = {fp.device_id for fp in aged}
        fresh_stats = [by_id[fp.device_id].device_statistic for fp in fresh]
        aged_stats = [by_id[fp.device_id].device_statistic for fp in aged]

        curve = roc(fresh_stats, aged_stats)
        write_roc_csv(curve, out / "roc.csv")
        threshold = self.args.threshold if self.args.threshold is not None else best_threshold(curve)
        verdicts = classify(scores, threshold)

        write_scores_csv(scores, out / "scores.csv")
        write_verdicts_csv(verdicts, out / "verdicts.csv",
                           cohorts={device: r['status'] for device, r in records.items()})
        CommonUtils.export_to_csv(statistic_rows(scores, records), out / "device_statistics.csv",
                                  columns=STATISTIC_COLUMNS)

        circuit_curves = {}
        for circuit in sorted({r.get('circuit') for r in records.values() if r.get('circuit')}):
            members = self._circuit_stats(aged, by_id, records, circuit)
            if members:
                circuit_curves[circuit] = roc(fresh_stats, members)
                write_roc_csv(circuit_curves[circuit], out / f"roc_{_safe_name(circuit)}.csv")

        baseline = {}
        if self.args.with_baseline:
            baseline_verdicts = self._baseline_verdicts(fresh + aged)
            baseline = {v.device_id: v for v in baseline_verdicts}
            ordered = sorted(baseline_verdicts, key=lambda v: v.device_id)
            CommonUtils.export_to_csv(silhouette_table_rows(ordered), out / "baseline.csv",
                                      columns=silhouette_table_columns(ordered))
        CommonUtils.export_to_csv(summary_rows(verdicts, records, baseline), out / "summary.csv",
                                  columns=SUMMARY_COLUMNS)

        if self.args.svg:
            render_roc_svg(curve, out / "roc.svg", title=f"ROC (AUC {curve.auc:.3f})")
            for circuit, circuit_curve in circuit_curves.items():
                render_roc_svg(circuit_curve, out / f"roc_{_safe_name(circuit)}.svg", title=f"ROC {circuit}")
            render_path_scores_svg(scores, aged_ids, out / "path_scores.svg")
            for fp in aged:
                top = by_id[fp.device_id].top_comparison()
                if top is not None:
                    render_residual_svg(residual_map(fp, top.path),
                                        out / f"residual_{_safe_name(fp.device_id)}_path{top.path}.svg")

        _, best_fpr, best_tpr = curve.best_point
        recycled = sum(v.is_recycled for v in verdicts)
        logger.info(f"📊 AUC {curve.auc:.3f}, punto migliore FPR {best_fpr:.3f} TPR {best_tpr:.3f}, "
                    f"soglia {threshold:.4f}, {recycled} recycled")
        print(f"AUC {curve.auc!r} FPR {best_fpr!r} TPR {best_tpr!r} soglia {threshold!r} -> {out}")
        return EXIT_OK

    def run_heatmap(self) -> int:
        fp = read_fingerprint(self.args.fingerprint)
        if self.args.residual:
            grid = residual_map(fp, self.args.path)
            write_residual_csv(grid, self.args.out)
            if self.args.svg:
                render_residual_svg(grid, self.args.svg)
        else:
            grid = frequency_map(fp, self.args.path)
            write_frequency_csv(grid, self.args.out)
            if self.args.svg:
                render_frequency_svg(grid, self.args.svg)
        return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point: 0 successo, 1 errore di validazione, 2 recycled con --fail-on-recycled"""
    parser = build_parser()
    args = parser.parse_args(argv)
    CommonUtils.setup_logging(args.log_level)

    try:
        _validate(args)
        return DetectionApp(args).run()
    except UsageError as e:
        print(f"app.py {args.command}: errore: {e}", file=sys.stderr)
    except (RecycledDetectionError, ValueError) as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
    except (FileNotFoundError, OSError) as e:
        print(f"❌ {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

# -*- coding: utf-8 -*-
"""
Interfaz de línea de comandos del arnés.

Uso:
    noisy-emergence constants ESCENARIO.json
    noisy-emergence check ESCENARIO.json [--require-certified]
    noisy-emergence simulate ESCENARIO.json [--trial I] [--trace traza.csv]
    noisy-emergence montecarlo ESCENARIO.json [-n N] [--out resumen.json] [--require-certified] [--workers W]
    noisy-emergence sweep ESCENARIO.json --grid malla.json [--out barrido.csv] [-n N]

Los JSON y CSV van a stdout (o al fichero indicado); los mensajes de estado a stderr.

Códigos de salida: 0 éxito, 1 error de configuración, 2 escenario no
certificado con --require-certified, 3 veredicto 'violated'.
"""
import argparse
import io
import sys
from typing import List, Optional

from noisy_emergence.api.dependencies import get_harness_service
from noisy_emergence.domain.models.scenario import Verdict
from noisy_emergence.domain.services.harness_service import trace_columns, trace_rows
from noisy_emergence.infrastructure.config.scenario_loader import load_grid, load_json, parse_scenario
from noisy_emergence.infrastructure.config.settings import configure_logging
from noisy_emergence.infrastructure.persistence.result_exporter_files import dumps, write_csv

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CERTIFIED = 2
EXIT_VIOLATED = 3


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _banner(title: str) -> None:
    _status("=" * 60)
    _status(title)
    _status("=" * 60)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='noisy-emergence',
        description='Simulación y verificación de casi-emergencia en sistemas multiagente con ruido',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Ejemplos:
  noisy-emergence constants data/escenarios/flocking_2d.json
  noisy-emergence montecarlo data/escenarios/flocking_2d.json -n 200 --out resumen.json
  noisy-emergence sweep data/escenarios/flocking_2d.json --grid data/escenarios/malla_radio.json --out barrido.csv
        """
    )
    parser.add_argument('--log-level', type=str, default=None, help='Nivel de logging (por defecto NE_LOG_LEVEL)')
    subparsers = parser.add_subparsers(dest='command', required=True)

    constants = subparsers.add_parser('constants', help='Imprime las constantes del estado inicial')
    constants.add_argument('config', type=str, help='Fichero JSON del escenario')

    check = subparsers.add_parser('check', help='Informe de hipótesis y certificación')
    check.add_argument('config', type=str, help='Fichero JSON del escenario')
    check.add_argument('--require-certified', action='store_true',
                       help='Sale con código 2 si el escenario no está certificado')

    simulate = subparsers.add_parser('simulate', help='Ejecuta un ensayo')
    simulate.add_argument('config', type=str, help='Fichero JSON del escenario')
    simulate.add_argument('--trial', type=int, default=0, help='Índice del ensayo (por defecto 0)')
    simulate.add_argument('--trace', type=str, default=None, help='CSV de la traza')

    montecarlo = subparsers.add_parser('montecarlo', help='Monte Carlo frente a la cota del teorema')
    montecarlo.add_argument('config', type=str, help='Fichero JSON del escenario')
    montecarlo.add_argument('-n', '--trials', type=int, default=None, help='Número de ensayos N')
    montecarlo.add_argument('--out', type=str, default=None, help='JSON del resumen')
    montecarlo.add_argument('--require-certified', action='store_true',
                            help='Sale con código 2 si el escenario no está certificado')
    montecarlo.add_argument('--workers', type=int, default=None, help='Procesos (por defecto NE_MAX_WORKERS)')

    sweep = subparsers.add_parser('sweep', help='Barrido de parámetros')
    sweep.add_argument('config', type=str, help='Fichero JSON del escenario base')
    sweep.add_argument('--grid', type=str, required=True, help='JSON con {ruta.con.puntos: [valores]}')
    sweep.add_argument('--out', type=str, default=None, help='CSV del barrido')
    sweep.add_argument('-n', '--trials', type=int, default=None, help='Número de ensayos por punto')
    sweep.add_argument('--workers', type=int, default=None, help='Procesos (por defecto NE_MAX_WORKERS)')
    return parser


def _report_certification(scenario) -> None:
    if scenario.certified:
        _status(f"✓ Escenario certificado ({scenario.theorem.value}, caso {scenario.hypotheses.case.value})")
    else:
        _status(f"⚠ Escenario no certificado ({scenario.theorem.value})")
        for note in scenario.notes:
            _status(f"  - {note}")


def _cmd_constants(args, harness_service) -> int:
    scenario = harness_service.build_scenario(parse_scenario(load_json(args.config)))
    sys.stdout.write(dumps(scenario.constants.to_dict()))
    if scenario.constants.reasons:
        _status("⚠ " + "; ".join(scenario.constants.reasons))
    return EXIT_OK


def _cmd_check(args, harness_service) -> int:
    scenario = harness_service.build_scenario(parse_scenario(load_json(args.config)))
    sys.stdout.write(dumps(scenario.to_dict()))
    _report_certification(scenario)
    if args.require_certified and not scenario.certified:
        return EXIT_NOT_CERTIFIED
    return EXIT_OK


def _cmd_simulate(args, harness_service) -> int:
    config = parse_scenario(load_json(args.config))
    scenario = harness_service.build_scenario(config)
    _report_certification(scenario)
    if args.trial < 0:
        _status("✗ --trial debe ser ≥ 0")
        return EXIT_CONFIG
    result, trajectory = harness_service.simulate(scenario, args.trial)
    trace_path = args.trace or config.outputs.get("trace")
    if trace_path:
        harness_service.export_trace(trace_path, scenario, trajectory)
        _status(f"✓ Traza escrita en {trace_path} ({trajectory.length} filas)")
    sys.stdout.write(dumps(result.to_dict()))
    if result.failed:
        _status(f"⚠ Ensayo fallido: {result.diagnostic}")
    return EXIT_OK


def _cmd_montecarlo(args, harness_service) -> int:
    config = parse_scenario(load_json(args.config))
    scenario = harness_service.build_scenario(config)
    _report_certification(scenario)
    if args.require_certified and not scenario.certified:
        _status("✗ Se requiere un escenario certificado (--require-certified)")
        return EXIT_NOT_CERTIFIED
    summary = harness_service.monte_carlo(scenario, args.trials, args.workers)
    payload = summary.to_dict()
    out_path = args.out or config.outputs.get("summary")
    if out_path:
        harness_service.export_summary(out_path, payload)
        _status(f"✓ Resumen escrito en {out_path}")
    else:
        sys.stdout.write(dumps(payload))
    _status(f"  Empírica: {summary.empirical:.4f}  Wilson: [{summary.wilson_lo:.4f}, {summary.wilson_hi:.4f}]"
            f"  Cota: {payload['bound']}  Veredicto: {summary.verdict.value}")
    if summary.verdict is Verdict.VIOLATED:
        _status("✗ La cota del teorema supera el intervalo de confianza")
        return EXIT_VIOLATED
    return EXIT_OK


def _cmd_sweep(args, harness_service) -> int:
    base = load_json(args.config)
    grid = load_grid(args.grid)
    rows, columns = harness_service.sweep(base, grid, args.trials)
    out_path = args.out or parse_scenario(base).outputs.get("sweep")
    if out_path:
        harness_service.export_sweep(out_path, rows, columns)
        _status(f"✓ Barrido escrito en {out_path} ({len(rows)} filas)")
    else:
        buffer = io.StringIO()
        write_csv(buffer, rows, columns)
        sys.stdout.write(buffer.getvalue())
    errors = sum(1 for row in rows if row.get("error"))
    if errors:
        _status(f"⚠ {errors} puntos del barrido con error")
    if any(row.get("verdict") == Verdict.VIOLATED.value for row in rows):
        return EXIT_VIOLATED
    return EXIT_OK


COMMANDS = {
    'constants': _cmd_constants,
    'check': _cmd_check,
    'simulate': _cmd_simulate,
    'montecarlo': _cmd_montecarlo,
    'sweep': _cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Punto de entrada de la CLI.

    Args:
        argv: Argumentos (por defecto sys.argv[1:])

    Returns:
        Código de salida
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse usa 2 para errores de uso; aquí son errores de configuración
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG
    configure_logging(args.log_level.upper() if args.log_level else None)
    _banner(f"noisy-emergence {args.command}")
    workers = getattr(args, 'workers', None)
    harness_service = get_harness_service(max_workers=workers)
    try:
        return COMMANDS[args.command](args, harness_service)
    except ValueError as e:
        _status(f"✗ Error de configuración: {e}")
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())

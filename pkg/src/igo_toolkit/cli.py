"""Командная строка ``igo-toolkit``: синтез, симуляция, свипы и сверка примера.

Конфигурация — JSON-файл с дискриминатором ``command``; флаги ``--out``, ``--plots`` и
``--seed`` переопределяют одноимённые поля. Коды завершения: 0 — успех, 1 — ошибка
аргументов или конфигурации, 2 — доменная ошибка.
"""

import json
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click
import numpy as np
from pydantic import TypeAdapter

from igo_toolkit.contracts.errors import ConfigError, IgoError, NumericalError
from igo_toolkit.schemas.audit import AuditRow
from igo_toolkit.schemas.config import (
    A3Sweep,
    CheckConfig,
    CommandConfig,
    DesignConfig,
    SimulateConfig,
    SweepConfig,
    run_config_adapter,
)
from igo_toolkit.schemas.design import DesignResult
from igo_toolkit.schemas.model import IgoModel
from igo_toolkit.toolkit import output
from igo_toolkit.toolkit.audit import audit_summary, run_audit
from igo_toolkit.toolkit.bifurcation import (
    a3_evaluator,
    all_failed,
    detect_crossings,
    slope_evaluator,
    sweep_a3,
    sweep_slopes,
)
from igo_toolkit.toolkit.cycle import solve_one_cycle
from igo_toolkit.toolkit.design import design
from igo_toolkit.toolkit.error_mapper import map_toolkit_errors
from igo_toolkit.toolkit.executors import make_executor
from igo_toolkit.toolkit.sim import (
    attractor_period,
    dense_trajectory,
    divergence_report,
    initial_state,
    simulate_impulses,
    solution_bound,
)

logger = logging.getLogger(__name__)

DEFAULT_OUT = "out"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_model_adapter = TypeAdapter(IgoModel)


def _load_config[C](config_path: Path, command: str, expected: type[C]) -> C:
    """Прочитать и провалидировать конфигурацию; ``command`` должен совпадать с подкомандой."""
    cfg = run_config_adapter.validate_json(config_path.read_bytes())
    if cfg.command != command or not isinstance(cfg, expected):
        raise ConfigError(reason=f"конфигурация для команды {cfg.command!r}, запущена {command!r}")
    return cfg


def _with_overrides[C: CommandConfig](cfg: C, out: str | None, plots: bool, seed: int | None) -> C:
    update: dict[str, Any] = {}
    if out is not None:
        update["out"] = out
    if plots:
        update["plots"] = True
    if seed is not None:
        update["seed"] = seed
    return cfg.model_copy(update=update) if update else cfg


def _out_dir(cfg: CommandConfig) -> Path:
    return Path(cfg.out or DEFAULT_OUT)


def _design_summary(result: DesignResult) -> str:
    hill, st = result.model.hill, result.stability
    lines = [
        f"z0 = {result.cycle.z0:.6g}, X = ({', '.join(f'{v:.6g}' for v in result.cycle.x)})",
        f"наклоны: F′ = {result.slopes.f_prime:.6g}, Φ′ = {result.slopes.phi_prime:.6g}",
        f"Φ: k1 = {hill.k1:.6g}, k2 = {hill.k2:.6g}, h_Φ = {hill.h_phi:.6g}, p_Φ = {hill.p_phi:.6g}",
        f"F: k3 = {hill.k3:.6g}, k4 = {hill.k4:.6g}, h_F = {hill.h_f:.6g}, p_F = {hill.p_f:.6g}",
        f"r0 = {st.r0:.6g}, τ = {st.tau:.6g}, устойчив по Шуру: {'да' if st.is_schur else 'нет'}",
    ]
    lines += [f"ПРЕДУПРЕЖДЕНИЕ: {w}" for w in result.warnings]
    return "\n".join(lines)


@map_toolkit_errors
def cmd_design(config_path: Path, out: str | None = None, plots: bool = False, seed: int | None = None) -> DesignResult:
    """Синтез модели по конфигурации и запись ``design_report.json``."""
    cfg = _with_overrides(_load_config(config_path, "design", DesignConfig), out, plots, seed)
    result = design(cfg.plant, cfg.spec, cfg.options)
    path = output.write_design_report(_out_dir(cfg) / "design_report.json", result)
    click.echo(_design_summary(result))
    click.echo(f"Отчёт: {path}")
    return result


def _simulation_model(cfg: SimulateConfig, config_path: Path) -> IgoModel:
    if cfg.model is not None:
        return cfg.model
    report = Path(cfg.design_report or "")
    if not report.is_absolute():
        report = config_path.parent / report
    payload = json.loads(report.read_text(encoding="utf-8"))
    if "model" not in payload:
        raise ConfigError(reason=f"в {report} нет ключа 'model'")
    return _model_adapter.validate_python(payload["model"])


@map_toolkit_errors
def cmd_simulate(config_path: Path, out: str | None = None, plots: bool = False, seed: int | None = None) -> Path:
    """Симуляция модели: ``events.csv``, ``trajectory.csv`` и, по запросу, графики."""
    cfg = _with_overrides(_load_config(config_path, "simulate", SimulateConfig), out, plots, seed)
    model = _simulation_model(cfg, config_path)
    x0 = initial_state(model, cfg.start, cfg.seed)

    events = simulate_impulses(model, x0, cfg.n_impulses)
    t_end = cfg.t_end if cfg.t_end is not None else events[-1].t + events[-1].period
    samples = dense_trajectory(model, x0, t_end, cfg.dt)

    out_dir = _out_dir(cfg)
    output.write_events(out_dir / "events.csv", events)
    output.write_trajectory(out_dir / "trajectory.csv", samples)

    cycle = solve_one_cycle(model)
    deviation, diverging = divergence_report(events, cycle.lam)
    period = attractor_period(events)
    click.echo(f"1-цикл: λ = {cycle.lam:.6g}, T = {cycle.period:.6g}, z0 = {cycle.z0:.6g}")
    click.echo(f"старт: x0 = ({', '.join(f'{v:.6g}' for v in np.asarray(x0))})")
    click.echo(f"отклонение последних весов от λ: {deviation:.3e}")
    click.echo(f"период аттрактора: {period if period is not None else 'не определён'}")
    click.echo(f"оценка sup‖x(t)‖∞: {solution_bound(model, x0):.6g}")
    if diverging:
        click.echo("ПРЕДУПРЕЖДЕНИЕ: последовательность весов не сходится к λ")

    if cfg.plots:
        output.plot_phase(out_dir / "phase_x1x2x3.svg", samples)
        output.plot_weights(out_dir / "lambda_sequence.svg", events, cycle.lam)
    return out_dir


@map_toolkit_errors
def cmd_sweep(config_path: Path, out: str | None = None, plots: bool = False, seed: int | None = None) -> Path:
    """Бифуркационный свип: ``sweep.csv`` и ``bifurcations.json``.

    Raises
    ------
    NumericalError
        Ни в одной точке свипа не удалось вычислить мультипликаторы (файлы всё равно пишутся).
    """
    cfg = _with_overrides(_load_config(config_path, "sweep", SweepConfig), out, plots, seed)
    sw = cfg.sweep
    evaluate: Callable[[float], Any]
    with make_executor(cfg.workers) as executor:
        if isinstance(sw, A3Sweep):
            records = sweep_a3(sw.base, sw.spec, (sw.a3_min, sw.a3_max), sw.n_points, executor)
            evaluate = a3_evaluator(sw.base, sw.spec)
        else:
            records = sweep_slopes(sw.plant, sw.spec, (sw.f_min, sw.f_max), sw.k2, sw.k4, sw.n_points, executor)
            evaluate = slope_evaluator(sw.plant, sw.spec, sw.k2, sw.k4)
    points = detect_crossings(records, evaluate if sw.refine else None)

    out_dir = _out_dir(cfg)
    output.write_sweep(out_dir / "sweep.csv", records)
    output.write_bifurcations(out_dir / "bifurcations.json", points)
    if cfg.plots:
        output.plot_sweep(out_dir / "sweep_r0.svg", records, points)

    failed = sum(1 for r in records if r.error is not None and r.multipliers is None)
    click.echo(f"точек: {len(records)}, с ошибкой: {failed}, пересечений: {len(points)}")
    for p in points:
        click.echo(f"  {p.kind}: параметр {p.param:.9g}, ρ = {p.multiplier:.6g}")
    if all_failed(records):
        raise NumericalError(step="sweep", reason="ни в одной точке свипа не вычислены мультипликаторы")
    return out_dir


@map_toolkit_errors
def cmd_check(config_path: Path | None = None, out: str | None = None, plots: bool = False, seed: int | None = None) -> list[AuditRow]:
    """Сверка эталонного примера; расхождения носят информационный характер."""
    cfg = (
        _load_config(config_path, "check", CheckConfig) if config_path is not None else CheckConfig(command="check")
    )
    cfg = _with_overrides(cfg, out, plots, seed)
    rows = run_audit()
    click.echo(audit_summary(rows))
    if cfg.out is not None:
        path = output.write_audit(Path(cfg.out) / "audit.csv", rows)
        click.echo(f"Таблица: {path}")
    return rows


def _run_options[F: Callable[..., Any]](fn: F) -> F:
    """Общие флаги подкоманд."""
    fn = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Зерно генератора.")(fn)
    fn = click.option("--plots", is_flag=True, help="Строить SVG-графики (нужен matplotlib).")(fn)
    fn = click.option("--out", type=click.Path(file_okay=False), default=None, help="Каталог результатов.")(fn)
    return fn


def _config_option(required: bool) -> Callable[[Any], Any]:
    return click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        required=required,
        help="JSON-файл конфигурации.",
    )


def _invoke(fn: Callable[..., Any], **kwargs: Any) -> None:  # noqa: ANN401
    try:
        fn(**kwargs)
    except IgoError as exc:
        click.echo(str(exc), err=True)
        raise click.exceptions.Exit(exc.exit_code) from None


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
)
def cli(log_level: str) -> None:
    """Синтез и анализ импульсного осциллятора Гудвина."""
    logging.basicConfig(level=log_level.upper(), format=LOG_FORMAT, stream=sys.stderr)


@cli.command("design")
@_config_option(required=True)
@_run_options
def design_command(config_path: Path, out: str | None, plots: bool, seed: int | None) -> None:
    """Синтезировать модель с устойчивым 1-циклом."""
    _invoke(cmd_design, config_path=config_path, out=out, plots=plots, seed=seed)


@cli.command("simulate")
@_config_option(required=True)
@_run_options
def simulate_command(config_path: Path, out: str | None, plots: bool, seed: int | None) -> None:
    """Смоделировать траекторию и последовательность импульсов."""
    _invoke(cmd_simulate, config_path=config_path, out=out, plots=plots, seed=seed)


@cli.command("sweep")
@_config_option(required=True)
@_run_options
def sweep_command(config_path: Path, out: str | None, plots: bool, seed: int | None) -> None:
    """Свип параметра и поиск бифуркаций 1-цикла."""
    _invoke(cmd_sweep, config_path=config_path, out=out, plots=plots, seed=seed)


@cli.command("check")
@_config_option(required=False)
@_run_options
def check_command(config_path: Path | None, out: str | None, plots: bool, seed: int | None) -> None:
    """Пересчитать эталонный численный пример и показать таблицу сверки."""
    _invoke(cmd_check, config_path=config_path, out=out, plots=plots, seed=seed)


def main(argv: list[str] | None = None) -> int:
    """Точка входа консольного скрипта; возвращает код завершения."""
    try:
        code = cli.main(args=argv, prog_name="igo-toolkit", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Прервано", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())

"""Выгрузка результатов: CSV (основной формат), JSON-отчёты и SVG-графики.

Числа в CSV пишутся с 17 значащими цифрами, поэтому повторный запуск с той же
конфигурацией и зерном даёт побайтно одинаковые файлы. Графики строятся matplotlib
с бэкендом Agg; пакет импортируется лениво и нужен только при ``--plots``.
"""

import csv
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import TYPE_CHECKING, Any

from pydantic import TypeAdapter

from igo_toolkit.contracts.errors import ConfigError
from igo_toolkit.schemas.audit import AuditRow
from igo_toolkit.schemas.bifurcation import BifurcationPoint, SweepRecord
from igo_toolkit.schemas.design import DesignResult
from igo_toolkit.schemas.simulation import ImpulseEvent, TrajectorySample

if TYPE_CHECKING:
    from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ("t", "x1", "x2", "x3")
EVENT_COLUMNS = ("n", "t_n", "lambda_n", "T_n", "x1_pre", "x2_pre", "x3_pre")
SWEEP_COLUMNS = (
    "param", "h", "z0",
    "re_rho1", "im_rho1", "re_rho2", "im_rho2", "re_rho3", "im_rho3",
    "r0", "tau", "is_schur", "error",
)
AUDIT_COLUMNS = ("quantity", "printed", "computed", "rel_error", "tolerance", "status", "note")

_design_adapter = TypeAdapter(DesignResult)
_points_adapter = TypeAdapter(list[BifurcationPoint])


def fmt(v: Any) -> str:  # noqa: ANN401
    """Текстовое представление ячейки CSV: ``.17g`` для чисел, пустая строка для ``None``."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Записать таблицу в CSV с заголовком ``columns``; переводы строк ``\\n``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        n = 0
        for row in rows:
            writer.writerow([fmt(v) for v in row])
            n += 1
    logger.debug("Записано %d строк в %s", n, path)
    return path


def write_trajectory(path: Path, samples: Sequence[TrajectorySample]) -> Path:
    """``trajectory.csv``: столбцы ``t, x1, x2, x3``."""
    return write_csv(path, TRAJECTORY_COLUMNS, ((s.t, *s.x) for s in samples))


def write_events(path: Path, events: Sequence[ImpulseEvent]) -> Path:
    """``events.csv``: номер, момент, вес и интервал импульса, состояние до скачка."""
    return write_csv(path, EVENT_COLUMNS, ((e.n, e.t, e.lam, e.period, *e.x_pre) for e in events))


def _sweep_row(r: SweepRecord) -> list[Any]:
    rho: list[float | None] = [None] * 6
    if r.multipliers is not None:
        rho = [part for m in r.multipliers for part in (m.real, m.imag)]
    return [r.param, r.h, r.z0, *rho, r.r0, r.tau, r.is_schur, r.error]


def write_sweep(path: Path, records: Sequence[SweepRecord]) -> Path:
    """``sweep.csv``: параметр, мультипликаторы по частям, ``r0``, ``τ``, вердикт и ошибка."""
    return write_csv(path, SWEEP_COLUMNS, (_sweep_row(r) for r in records))


def write_audit(path: Path, rows: Sequence[AuditRow]) -> Path:
    """``audit.csv``: таблица сверки эталонного примера."""
    return write_csv(
        path,
        AUDIT_COLUMNS,
        ((r.quantity, r.printed, r.computed, r.rel_error, r.tolerance, r.status, r.note) for r in rows),
    )


def write_design_report(path: Path, result: DesignResult) -> Path:
    """``design_report.json`` с ключами-алиасами (``lambda``, ``T``, ``X``, ``M``)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(_design_adapter.dump_json(result, by_alias=True, indent=2))
    return path


def write_bifurcations(path: Path, points: Sequence[BifurcationPoint]) -> Path:
    """``bifurcations.json``: список найденных пересечений."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(_points_adapter.dump_json(list(points), by_alias=True, indent=2))
    return path


def _pyplot() -> Any:  # noqa: ANN401
    try:
        import matplotlib  # noqa: PLC0415
    except ImportError as exc:
        raise ConfigError(reason="для --plots нужен пакет matplotlib (extra 'plots')", step="plots") from exc
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "igo-toolkit"
    import matplotlib.pyplot as plt  # noqa: PLC0415

    return plt


def _save(fig: "Figure", path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    logger.debug("График сохранён: %s", path)
    return path


def plot_phase(path: Path, samples: Sequence[TrajectorySample]) -> Path:
    """Фазовый портрет ``(x1, x2, x3)`` непрерывной траектории."""
    plt = _pyplot()
    fig = plt.figure(figsize=(6, 5))
    ax = fig.add_subplot(projection="3d")
    xs = list(zip(*(s.x for s in samples), strict=True))
    ax.plot(xs[0], xs[1], xs[2], lw=0.8)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_zlabel("x3")
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)


def plot_weights(path: Path, events: Sequence[ImpulseEvent], lam: float | None = None) -> Path:
    """Последовательность весов импульсов ``λ_n``; ``lam`` рисуется горизонтальной линией."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot([e.n for e in events], [e.lam for e in events], "o-", ms=3, lw=0.8)
    if lam is not None:
        ax.axhline(lam, color="tab:red", lw=0.8, ls="--")
    ax.set_xlabel("n")
    ax.set_ylabel("λ_n")
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)


def plot_sweep(path: Path, records: Sequence[SweepRecord], points: Sequence[BifurcationPoint] = ()) -> Path:
    """Спектральный радиус ``r0`` вдоль свипа; найденные пересечения отмечены вертикалями."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ok = [r for r in records if r.r0 is not None]
    ax.plot([r.param for r in ok], [r.r0 for r in ok], lw=1.0)
    ax.axhline(1.0, color="black", lw=0.6)
    for p in points:
        ax.axvline(p.param, color="tab:red", lw=0.8, ls="--")
    ax.set_xlabel("параметр")
    ax.set_ylabel("r0")
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)

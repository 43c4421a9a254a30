"""Бифуркационный анализ 1-цикла: свипы по a3 и по наклонам, поиск пересечений.

Свип по a3 пересчитывает общую точку полуподъёма ``h`` так, чтобы ``Φ(z0) = T``
при фиксированных ``k1..k4`` и ``p``; свип по наклонам строит якобиан прямо из
параметризации ``e^{AT} + (F′J + Φ′D)C`` с ``Φ′ = −(k2/k4)·F′``. Точки, на которых
вычисление упало, попадают в результат записью с полем ``error``.
"""

import logging
import math
from collections.abc import Callable, Sequence
from functools import partial

import numpy as np
from scipy import optimize

from igo_toolkit.contracts.errors import ErrorCode, IgoError, InfeasibleError
from igo_toolkit.contracts.ports.executor import SweepExecutorPort
from igo_toolkit.contracts.protocols import RecordEvaluator
from igo_toolkit.schemas.bifurcation import BifurcationPoint, CrossingKind, SweepBase, SweepRecord
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.model import IgoModel, PlantParams
from igo_toolkit.schemas.stability import StabilityReport
from igo_toolkit.toolkit.cycle import fixed_point, output_z0, solve_one_cycle
from igo_toolkit.toolkit.executors import SequentialExecutor
from igo_toolkit.toolkit.matfun import C_VEC, expm_At, plant_matrix
from igo_toolkit.toolkit.stability import analyze_fixed_point, stability_report

logger = logging.getLogger(__name__)

F_CONSISTENCY_RTOL = 1e-3
REFINE_XTOL = 1e-7
REAL_IMAG_RTOL = 1e-9


def solve_h_for(a3: float, base: SweepBase, spec: CycleSpec) -> tuple[float, float]:
    """Общая точка полуподъёма ``h`` и выход ``z0`` для объекта с данным ``a3``.

    ``η = (T − k1)/(k1 + k2 − T)``, ``h = z0/η^{1/p}``; согласованность ``F(z0) = λ``
    проверяется с допуском ``1e-3`` и при нарушении сообщается предупреждением.

    Raises
    ------
    InfeasibleError
        ``T ∉ (k1, k1 + k2)`` или ``λ ∉ (k3, k3 + k4)``.
    """
    if not base.k1 < spec.period < base.k1 + base.k2:
        raise InfeasibleError(step="solve_h_for", reason=f"T = {spec.period!r} вне ({base.k1!r}, {base.k1 + base.k2!r})")
    if not base.k3 < spec.lam < base.k3 + base.k4:
        raise InfeasibleError(step="solve_h_for", reason=f"λ = {spec.lam!r} вне ({base.k3!r}, {base.k3 + base.k4!r})")

    plant = base.plant(a3)
    z0 = output_z0(plant, spec)
    eta = (spec.period - base.k1) / (base.k1 + base.k2 - spec.period)
    h = z0 / eta ** (1.0 / base.p)

    f_at_z0 = base.k3 + base.k4 / (1.0 + eta)
    rel = abs(f_at_z0 - spec.lam) / spec.lam
    if rel > F_CONSISTENCY_RTOL:
        logger.warning(
            "a3 = %r: F(z0) = %r не согласуется с λ = %r (отн. невязка %.2e)", a3, f_at_z0, spec.lam, rel
        )
    return h, z0


def _record(param: float, h: float | None, z0: float, report: StabilityReport) -> SweepRecord:
    error = ErrorCode.MARGINAL_STABILITY.value if math.isinf(report.tau) else None
    return SweepRecord(
        param=param,
        h=h,
        z0=z0,
        multipliers=report.multipliers,
        r0=report.r0,
        tau=report.tau,
        is_schur=report.is_schur,
        error=error,
    )


def evaluate_a3(a3: float, base: SweepBase, spec: CycleSpec) -> SweepRecord:
    """Точка свипа по a3: калибровка ``h``, 1-цикл полной модели, якобиан и мультипликаторы."""
    a3 = float(a3)
    try:
        h, _ = solve_h_for(a3, base, spec)
        model = IgoModel(plant=base.plant(a3), hill=base.hill(h))
        cycle = solve_one_cycle(model, scan=False)
        report = analyze_fixed_point(model, np.asarray(cycle.x))
    except IgoError as exc:
        logger.warning("Точка a3 = %r пропущена: %s", a3, exc)
        return SweepRecord(param=a3, error=exc.error_code.value)
    return _record(a3, h, cycle.z0, report)


def sweep_a3(
    base: SweepBase,
    spec: CycleSpec,
    a3_range: tuple[float, float],
    n_points: int,
    executor: SweepExecutorPort | None = None,
) -> list[SweepRecord]:
    """Свип по a3 на равномерной сетке из ``n_points`` точек; записи упорядочены по a3."""
    grid = np.linspace(a3_range[0], a3_range[1], n_points)
    executor = executor or SequentialExecutor()
    return executor.map(partial(evaluate_a3, base=base, spec=spec), grid.tolist())


def slope_evaluator(
    plant: PlantParams, spec: CycleSpec, k2: float, k4: float
) -> Callable[[float], SweepRecord]:
    """Вычислитель точки свипа по ``F′`` с общими для всех точек ``e^{AT}``, ``J`` и ``D``."""
    e = expm_At(plant, spec.period)
    x = fixed_point(plant, spec)
    j = e[:, 0]
    d = plant_matrix(plant) @ x
    z0 = float(x[2])
    ratio = k2 / k4

    def evaluate(f_prime: float) -> SweepRecord:
        f_prime = float(f_prime)
        gain = f_prime * j - ratio * f_prime * d
        return _record(f_prime, None, z0, stability_report(e + np.outer(gain, C_VEC)))

    return evaluate


def sweep_slopes(
    plant: PlantParams,
    spec: CycleSpec,
    f_range: tuple[float, float],
    k2: float,
    k4: float,
    n_points: int,
    executor: SweepExecutorPort | None = None,
) -> list[SweepRecord]:
    """Свип по ``F′`` с ``Φ′ = −(k2/k4)·F′``; калибровка функций Хилла не требуется."""
    grid = np.linspace(f_range[0], f_range[1], n_points)
    executor = executor or SequentialExecutor()
    return executor.map(slope_evaluator(plant, spec, k2, k4), grid.tolist())


def _is_real(rho: complex) -> bool:
    return abs(rho.imag) <= REAL_IMAG_RTOL * max(1.0, abs(rho))


def _indicator(kind: CrossingKind, multipliers: Sequence[complex] | None) -> tuple[float, complex] | None:
    """Знаковая функция пересечения и критический мультипликатор; ``None``, если не определена."""
    if multipliers is None:
        return None
    real = [r for r in multipliers if _is_real(r)]
    cplx = [r for r in multipliers if not _is_real(r)]
    if kind == "period_doubling" and real:
        rho = min(real, key=lambda r: r.real)
        return rho.real + 1.0, rho
    if kind == "fold" and real:
        rho = max(real, key=lambda r: r.real)
        return rho.real - 1.0, rho
    if kind == "neimark_sacker" and cplx:
        rho = max(cplx, key=abs)
        return abs(rho) - 1.0, rho
    return None


def _refine(
    kind: CrossingKind,
    lo: SweepRecord,
    hi: SweepRecord,
    ind_lo: tuple[float, complex],
    ind_hi: tuple[float, complex],
    evaluate: RecordEvaluator[SweepRecord] | None,
) -> BifurcationPoint:
    a, b = lo.param, hi.param

    if evaluate is not None:

        def g(p: float) -> float:
            ind = _indicator(kind, evaluate(p).multipliers)
            if ind is None:
                raise ValueError(f"индикатор {kind} не определён в точке {p!r}")
            return ind[0]

        try:
            root = optimize.bisect(g, a, b, xtol=REFINE_XTOL, maxiter=200)
            ind = _indicator(kind, evaluate(root).multipliers)
            if ind is not None:
                return BifurcationPoint(
                    lower=max(a, root - REFINE_XTOL),
                    upper=min(b, root + REFINE_XTOL),
                    param=root,
                    multiplier=ind[1],
                    kind=kind,
                    refined=True,
                )
        except (ValueError, RuntimeError, IgoError) as exc:
            logger.warning("Уточнение пересечения %s на [%r, %r] не удалось: %s", kind, a, b, exc)

    # линейная интерполяция индикатора внутри интервала
    s_lo, s_hi = ind_lo[0], ind_hi[0]
    frac = s_lo / (s_lo - s_hi) if s_lo != s_hi else 0.5
    rho = ind_lo[1] if abs(s_lo) <= abs(s_hi) else ind_hi[1]
    return BifurcationPoint(lower=a, upper=b, param=a + frac * (b - a), multiplier=rho, kind=kind, refined=False)


def detect_crossings(
    records: Sequence[SweepRecord], evaluate: RecordEvaluator[SweepRecord] | None = None
) -> list[BifurcationPoint]:
    """Найти пересечения мультипликаторами единичной окружности между соседними точками.

    Типы: ``period_doubling`` (вещественный мультипликатор через −1), ``fold`` (через +1),
    ``neimark_sacker`` (модуль комплексной пары через 1). При заданном ``evaluate``
    интервал уточняется бисекцией по параметру до ``1e-7``.

    Параметры
    ----------
    records: Sequence[SweepRecord]
        Точки свипа, упорядоченные по параметру; записи с ошибкой пропускаются.
    evaluate: RecordEvaluator | None
        Пересчёт точки по значению параметра.
    """
    valid = [r for r in records if r.multipliers is not None]
    kinds: tuple[CrossingKind, ...] = ("period_doubling", "fold", "neimark_sacker")
    points: list[BifurcationPoint] = []
    for lo, hi in zip(valid, valid[1:], strict=False):
        for kind in kinds:
            ind_lo, ind_hi = _indicator(kind, lo.multipliers), _indicator(kind, hi.multipliers)
            if ind_lo is None or ind_hi is None:
                continue
            if (ind_lo[0] > 0) != (ind_hi[0] > 0):
                point = _refine(kind, lo, hi, ind_lo, ind_hi, evaluate)
                logger.info("Пересечение %s при параметре %r, ρ = %r", kind, point.param, point.multiplier)
                points.append(point)
    return points


def a3_evaluator(base: SweepBase, spec: CycleSpec) -> Callable[[float], SweepRecord]:
    """Вычислитель точки свипа по a3 для уточнения пересечений."""
    return partial(evaluate_a3, base=base, spec=spec)


def all_failed(records: Sequence[SweepRecord]) -> bool:
    """Все точки свипа завершились ошибкой (мультипликаторы не вычислены)."""
    return all(r.multipliers is None for r in records)

"""Отображение импульс-импульс и 1-циклы осциллятора.

``Q(ξ) = e^{A·Φ(Cξ)}·(ξ + F(Cξ)·B)`` переводит состояние перед импульсом в состояние
перед следующим импульсом. 1-цикл с параметрами ``(λ, T)`` — неподвижная точка
``X = λ·(e^{−AT} − I)^{−1}·B``; для полной модели он находится из скалярного уравнения
``z = C(e^{−AΦ(z)} − I)^{−1}B·F(z)``, правая часть которого убывает по ``z``.
"""

import logging
import math

import numpy as np
from scipy import optimize

from igo_toolkit.contracts.errors import BracketingFailureError, NumericalError
from igo_toolkit.contracts.protocols import Vector3
from igo_toolkit.schemas.cycle import CycleSolution, CycleSpec
from igo_toolkit.schemas.model import IgoModel, PlantParams
from igo_toolkit.toolkit.matfun import B_VEC, expm_At, mu_At
from igo_toolkit.toolkit.modulation import f_mod, phi

logger = logging.getLogger(__name__)

BISECT_XTOL = 1e-12
BISECT_RTOL = 1e-12
BISECT_MAXITER = 200
BRACKET_LOW_FACTOR = 1e-8
SCAN_POINTS = 64


def propagate(plant: PlantParams, x: Vector3, lam: float, period: float) -> Vector3:
    """Импульс веса ``lam`` и свободное движение длительности ``period``: ``e^{AT}(x + λB)``."""
    return expm_At(plant, period) @ (np.asarray(x, dtype=float) + lam * B_VEC)


def map_Q(model: IgoModel, x: Vector3) -> Vector3:  # noqa: N802
    """Отображение импульс-импульс ``Q(x)``.

    Параметры
    ----------
    model: IgoModel
        Полная модель осциллятора.
    x: Vector3
        Состояние перед импульсом; ``x[2]`` должен быть положительным.
    """
    z = float(x[2])
    return propagate(model.plant, x, f_mod(model.hill, z), phi(model.hill, z))


def map_residual(model: IgoModel, x: Vector3) -> float:
    """Относительная невязка неподвижной точки ``‖Q(x) − x‖∞ / (1 + ‖x‖∞)``."""
    x = np.asarray(x, dtype=float)
    return float(np.max(np.abs(map_Q(model, x) - x)) / (1.0 + np.max(np.abs(x))))


def fixed_point(plant: PlantParams, spec: CycleSpec) -> Vector3:
    """Неподвижная точка 1-цикла: ``λ``, умноженная на первый столбец ``μ(AT)``."""
    x = spec.lam * mu_At(plant, spec.period)[:, 0]
    if not np.all(x > 0):
        raise NumericalError(reason=f"неподвижная точка {x.tolist()} не положительна", step="fixed_point")
    return x


def _z0_of(plant: PlantParams, lam: float, period: float) -> float:
    # λ·g1·g2·Σ α_i·e^{−a_i T} / (1 − e^{−a_i T}), α_i = Π_{j≠i} 1/(a_j − a_i)
    rates = plant.rates
    total = 0.0
    for i, ai in enumerate(rates):
        alpha = 1.0
        for j, aj in enumerate(rates):
            if j != i:
                alpha /= aj - ai
        total += alpha * math.exp(-ai * period) / (-math.expm1(-ai * period))
    return lam * plant.g1 * plant.g2 * total


def output_z0(plant: PlantParams, spec: CycleSpec) -> float:
    """Выход ``z0 = C·X`` 1-цикла через разложение на простые дроби."""
    return _z0_of(plant, spec.lam, spec.period)


def _scan_monotone(model: IgoModel, lo: float, hi: float) -> None:
    grid = np.geomspace(lo, hi, SCAN_POINTS)
    rhs = np.array([_z0_of(model.plant, f_mod(model.hill, z), phi(model.hill, z)) for z in grid])
    g = grid - rhs
    sign_changes = int(np.count_nonzero(np.diff(np.sign(g)) != 0))
    if np.any(np.diff(rhs) > 1e-12 * np.max(np.abs(rhs))):
        logger.warning("Правая часть скалярного уравнения 1-цикла не убывает на сетке [%g, %g]", lo, hi)
    if sign_changes != 1:
        logger.warning("На сетке из %d точек найдено %d смен знака вместо одной", SCAN_POINTS, sign_changes)


def solve_one_cycle(model: IgoModel, scan: bool = True) -> CycleSolution:
    """Найти единственный 1-цикл полной модели.

    Корень ``z*`` ищется бисекцией на ``[1e-8·Z_hi, Z_hi]``, где ``Z_hi`` — выход цикла
    при крайних значениях ``λ = F2``, ``T = Φ1``; затем ``X`` восстанавливается по
    ``(F(z*), Φ(z*))``.

    Параметры
    ----------
    model: IgoModel
        Полная модель осциллятора.
    scan: bool
        Проверить монотонность правой части на сетке перед бисекцией.
    """
    hill = model.hill
    z_hi = _z0_of(model.plant, hill.f_bounds[1], hill.phi_bounds[0])
    z_lo = BRACKET_LOW_FACTOR * z_hi

    def g(z: float) -> float:
        return z - _z0_of(model.plant, f_mod(hill, z), phi(hill, z))

    if scan:
        _scan_monotone(model, z_lo, z_hi)

    try:
        root, info = optimize.bisect(
            g, z_lo, z_hi, xtol=BISECT_XTOL, rtol=BISECT_RTOL, maxiter=BISECT_MAXITER,
            full_output=True, disp=False,
        )
    except ValueError as exc:
        raise BracketingFailureError(lower=z_lo, upper=z_hi, step="solve_one_cycle") from exc

    if not info.converged:
        logger.warning("Бисекция не сошлась за %d итераций: z = %r", info.iterations, root)
    logger.debug("Корень скалярного уравнения z* = %r за %d итераций", root, info.iterations)

    lam, period = f_mod(hill, root), phi(hill, root)
    x = fixed_point(model.plant, CycleSpec(lam=lam, period=period))
    return CycleSolution(
        x=(float(x[0]), float(x[1]), float(x[2])),
        z0=float(x[2]),
        lam=lam,
        period=period,
        residual=map_residual(model, x),
    )

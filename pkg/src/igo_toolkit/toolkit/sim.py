"""Гибридная симуляция осциллятора без численного интегрирования.

Между импульсами состояние переносится точной переходной матрицей ``e^{At}``;
в момент импульса к первой компоненте добавляется вес ``λ_n = F(z_n)``, следующий
импульс наступает через ``T_n = Φ(z_n)``.
"""

import logging
import math

import numpy as np

from igo_toolkit.contracts.errors import ConfigError, NonPositiveOutputError
from igo_toolkit.contracts.protocols import Vector3
from igo_toolkit.schemas.model import IgoModel
from igo_toolkit.schemas.simulation import ImpulseEvent, SimulationStart, TrajectorySample
from igo_toolkit.toolkit.cycle import solve_one_cycle
from igo_toolkit.toolkit.matfun import B_VEC, expm_At
from igo_toolkit.toolkit.modulation import f_mod, phi

logger = logging.getLogger(__name__)

PERIOD_RTOL = 1e-6


def _as_row(x: Vector3) -> tuple[float, float, float]:
    return float(x[0]), float(x[1]), float(x[2])


def _check_positive(x0: Vector3) -> Vector3:
    x = np.asarray(x0, dtype=float)
    if x.shape != (3,) or not np.all(x > 0):
        raise NonPositiveOutputError(value=float(np.min(x)), step="simulate")
    return x


def simulate_impulses(model: IgoModel, x0: Vector3, n_steps: int) -> list[ImpulseEvent]:
    """Итерировать отображение импульс-импульс ``n_steps`` раз начиная с ``x0``.

    Событие ``n`` хранит состояние до и после импульса, вес и интервал до следующего
    импульса; время накапливается как ``t_{n+1} = t_n + T_n``.
    """
    x = _check_positive(x0)
    t = 0.0
    events: list[ImpulseEvent] = []
    for n in range(n_steps):
        z = float(x[2])
        lam, period = f_mod(model.hill, z), phi(model.hill, z)
        post = x + lam * B_VEC
        events.append(ImpulseEvent(n=n, t=t, x_pre=_as_row(x), x_post=_as_row(post), lam=lam, period=period))
        x = expm_At(model.plant, period) @ post
        t += period
    return events


def dense_trajectory(model: IgoModel, x0: Vector3, t_end: float, dt: float) -> list[TrajectorySample]:
    """Непрерывная траектория на сетке ``k·dt`` до ``t_end``.

    В каждый момент импульса выдаются оба односторонних отсчёта (до и после скачка);
    узлы сетки, совпадающие с моментом импульса, не дублируются.
    """
    if not dt > 0 or not t_end > 0:
        raise ConfigError(reason=f"шаг dt = {dt!r} и горизонт t_end = {t_end!r} должны быть положительны")

    x = _check_positive(x0)
    samples: list[TrajectorySample] = []
    t_fire = 0.0
    while t_fire <= t_end:
        z = float(x[2])
        lam, period = f_mod(model.hill, z), phi(model.hill, z)
        post = x + lam * B_VEC
        samples.append(TrajectorySample(t=t_fire, x=_as_row(x)))
        samples.append(TrajectorySample(t=t_fire, x=_as_row(post)))

        t_next = t_fire + period
        k = math.floor(t_fire / dt) + 1
        while k * dt < t_next and k * dt <= t_end:
            s = k * dt - t_fire
            if s > 0:
                samples.append(TrajectorySample(t=k * dt, x=_as_row(expm_At(model.plant, s) @ post)))
            k += 1

        x = expm_At(model.plant, period) @ post
        t_fire = t_next
    return samples


def weight_sequence(events: list[ImpulseEvent]) -> list[tuple[int, float]]:
    """Последовательность весов импульсов ``(n, λ_n)``."""
    return [(e.n, e.lam) for e in events]


def attractor_period(
    events: list[ImpulseEvent], m_max: int = 8, tail: int = 32, rtol: float = PERIOD_RTOL
) -> int | None:
    """Наименьший период ``m ≤ m_max`` хвоста последовательности весов.

    ``1`` означает сходимость к 1-циклу, ``2`` — 2-цикл после удвоения периода.
    ``None``, если хвост не периодичен ни с одним ``m`` (или событий слишком мало).
    """
    w = np.array([e.lam for e in events])
    if w.size < tail + m_max:
        return None
    scale = float(np.max(np.abs(w[-tail:])))
    for m in range(1, m_max + 1):
        window = w[-tail:]
        shifted = w[-tail - m : -m]
        if np.max(np.abs(window - shifted)) <= rtol * scale:
            return m
    return None


def solution_bound(model: IgoModel, x0: Vector3) -> float:
    """Гарантированная оценка ``sup_t ‖x(t)‖∞`` для решения из ``x0``.

    Поэлементно ``0 ≤ e^{As} ≤ e^{−a·s}·[[1,0,0],[g1·s,1,0],[g1·g2·s²/2,g2·s,1]]``
    с ``a = min a_i``; многочлены гасятся половиной экспоненты
    (``s^k·e^{−a·s/2} ≤ (2k/(a·e))^k``), импульсы разнесены не менее чем на ``Φ1``
    и не тяжелее ``F2``.
    """
    plant, hill = model.plant, model.hill
    a = min(plant.rates)
    c1 = 2.0 / (a * math.e)
    c2 = (4.0 / (a * math.e)) ** 2
    growth = 1.0 + (plant.g1 + plant.g2) * c1 + plant.g1 * plant.g2 / 2.0 * c2
    x0_norm = float(np.max(np.abs(np.asarray(x0, dtype=float))))
    impulses = hill.f_bounds[1] / (-math.expm1(-a * hill.phi_bounds[0] / 2.0))
    return growth * (x0_norm + impulses)


def initial_state(model: IgoModel, start: SimulationStart, seed: int | None = None) -> Vector3:
    """Начальное состояние по описанию старта.

    Без явного ``x0`` отсчитывается от неподвижной точки 1-цикла модели: масштабом
    ``scale`` или относительным возмущением ``perturbation`` из генератора с зерном ``seed``.
    """
    if start.x0 is not None:
        return np.asarray(start.x0, dtype=float)
    x_star = np.asarray(solve_one_cycle(model).x)
    if start.scale is not None:
        return start.scale * x_star
    if start.perturbation is not None:
        rng = np.random.default_rng(seed)
        return x_star * (1.0 + start.perturbation * rng.uniform(-1.0, 1.0, size=3))
    return x_star


def divergence_report(events: list[ImpulseEvent], lam: float, window: int = 20) -> tuple[float, bool]:
    """Отклонение последних весов от ``lam`` и признак отсутствия сходимости.

    Последовательность считается несходящейся, если максимум ``|λ_k − lam|`` на последнем
    окне не меньше, чем на предыдущем.
    """
    dev = np.abs(np.array([e.lam for e in events]) - lam)
    if dev.size < 2 * window:
        return float(dev[-1]) if dev.size else 0.0, False
    last, prev = float(np.max(dev[-window:])), float(np.max(dev[-2 * window : -window]))
    diverging = last >= prev and last > PERIOD_RTOL * lam
    if diverging:
        logger.warning("Веса импульсов не сходятся к λ = %r: отклонение %.3e", lam, last)
    return last, diverging

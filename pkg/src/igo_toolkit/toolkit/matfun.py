"""Скалярные и матричные специальные функции осциллятора.

Линейная часть имеет нижнюю двухдиагональную матрицу ``A`` с попарно различными
собственными значениями ``-a_i``, поэтому любая функция ``f(A)`` выражается в замкнутом
виде через значения ``f`` и разделённые разности в узлах ``-a_i`` (формула Опица)::

    f(A) = [[f(-a1),                 0,                  0     ],
            [g1·f[-a1,-a2],          f(-a2),             0     ],
            [g1·g2·f[-a1,-a2,-a3],   g2·f[-a2,-a3],      f(-a3)]]

Для экспоненты используются разности, устойчивые к вычитанию близких значений
(через ``expm1``). Все спектры вещественные, комплексная арифметика не нужна.
"""

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from igo_toolkit.contracts.errors import DegenerateNodesError
from igo_toolkit.contracts.protocols import Matrix3, ScalarFn
from igo_toolkit.schemas.model import PlantParams, nodes_distinct

B_VEC: NDArray[np.float64] = np.array([1.0, 0.0, 0.0])
"""Вход импульсов: доза попадает в первую компоненту."""

C_VEC: NDArray[np.float64] = np.array([0.0, 0.0, 1.0])
"""Выход: измеряется третья компонента."""

SERIES_TOL = 1e-13
MU_ZERO_TOL = 1e-9


def _require_distinct(*nodes: float) -> None:
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if not nodes_distinct(nodes[i], nodes[j]):
                raise DegenerateNodesError(nodes=tuple(float(z) for z in nodes))


def plant_matrix(plant: PlantParams) -> Matrix3:
    """Матрица ``A`` линейной части."""
    return np.array(
        [
            [-plant.a1, 0.0, 0.0],
            [plant.g1, -plant.a2, 0.0],
            [0.0, plant.g2, -plant.a3],
        ]
    )


def dd1(f: ScalarFn, z0: float, z1: float) -> float:
    """Первая разделённая разность ``f[z0, z1] = (f(z1) − f(z0)) / (z1 − z0)``."""
    _require_distinct(z0, z1)
    return (f(z1) - f(z0)) / (z1 - z0)


def dd2(f: ScalarFn, z0: float, z1: float, z2: float) -> float:
    """Вторая разделённая разность ``(f[z1, z2] − f[z0, z1]) / (z2 − z0)``."""
    _require_distinct(z0, z1, z2)
    return (dd1(f, z1, z2) - dd1(f, z0, z1)) / (z2 - z0)


def dd2_lagrange(f: ScalarFn, z0: float, z1: float, z2: float) -> float:
    """Вторая разделённая разность в форме ``Σ β_i f(z_i)``, ``β_i = Π_{j≠i} 1/(z_j − z_i)``."""
    nodes = (z0, z1, z2)
    _require_distinct(*nodes)
    total = 0.0
    for i, zi in enumerate(nodes):
        beta = 1.0
        for j, zj in enumerate(nodes):
            if j != i:
                beta /= zj - zi
        total += beta * f(zi)
    return total


def exp_dd1(z0: float, z1: float) -> float:
    """``exp[z0, z1]`` без потери точности при близких узлах.

    ``e^{hi}·(1 − e^{lo−hi}) / (hi − lo)``: показатель под ``expm1`` неположителен,
    переполнение невозможно.
    """
    _require_distinct(z0, z1)
    hi, lo = max(z0, z1), min(z0, z1)
    h = lo - hi
    return math.exp(hi) * (-math.expm1(h)) / (-h)


def exp_dd2(z0: float, z1: float, z2: float) -> float:
    """``exp[z0, z1, z2]``; узлы упорядочиваются по убыванию (разность симметрична)."""
    _require_distinct(z0, z1, z2)
    u, v, w = sorted((z0, z1, z2), reverse=True)
    return (exp_dd1(u, v) - exp_dd1(v, w)) / (u - w)


def mu(z: ArrayLike) -> float | NDArray[np.float64]:
    """``μ(z) = 1 / (e^{−z} − 1) = e^z / (1 − e^z)``; векторизуется по массивам numpy."""
    arr = np.asarray(z, dtype=float)
    if np.any(np.abs(arr) <= MU_ZERO_TOL):
        raise DegenerateNodesError(nodes=(0.0,), step="mu")
    # показатель экспоненты всегда неположителен
    neg = np.minimum(arr, 0.0)
    pos = np.maximum(arr, 0.0)
    with np.errstate(divide="ignore"):
        out = np.where(arr < 0, np.exp(neg) / -np.expm1(neg), 1.0 / np.expm1(-pos))
    return float(out) if out.ndim == 0 else out


def nu(z: ArrayLike) -> float | NDArray[np.float64]:
    """``ν(z) = z·μ(z)``; при ``z < 0`` отрицательна, убывает и строго вогнута."""
    arr = np.asarray(z, dtype=float)
    out = arr * np.asarray(mu(arr))
    return float(out) if out.ndim == 0 else out


def opitz_apply(f: ScalarFn, plant: PlantParams) -> Matrix3:
    """Вычислить ``f(A)`` по формуле Опица для двухдиагональной матрицы ``A``."""
    n1, n2, n3 = -plant.a1, -plant.a2, -plant.a3
    return _opitz(
        diag=(f(n1), f(n2), f(n3)),
        d12=dd1(f, n1, n2),
        d23=dd1(f, n2, n3),
        d123=dd2(f, n1, n2, n3),
        plant=plant,
    )


def _opitz(
    diag: tuple[float, float, float], d12: float, d23: float, d123: float, plant: PlantParams
) -> Matrix3:
    return np.array(
        [
            [diag[0], 0.0, 0.0],
            [plant.g1 * d12, diag[1], 0.0],
            [plant.g1 * plant.g2 * d123, plant.g2 * d23, diag[2]],
        ]
    )


def expm_At(plant: PlantParams, t: float) -> Matrix3:  # noqa: N802
    """Переходная матрица ``e^{At}`` в замкнутой форме.

    Для ``f(z) = e^{zt}`` разности масштабируются: ``f[−a1, −a2] = t·exp[−a1t, −a2t]``,
    ``f[−a1, −a2, −a3] = t²·exp[−a1t, −a2t, −a3t]``. При ``t ≥ 0`` все элементы
    неотрицательны (матрица ``A`` метцлерова).
    """
    if t == 0:
        return np.eye(3)
    n1, n2, n3 = -plant.a1 * t, -plant.a2 * t, -plant.a3 * t
    return _opitz(
        diag=(math.exp(n1), math.exp(n2), math.exp(n3)),
        d12=t * exp_dd1(n1, n2),
        d23=t * exp_dd1(n2, n3),
        d123=t * t * exp_dd2(n1, n2, n3),
        plant=plant,
    )


def mu_At(plant: PlantParams, t: float) -> Matrix3:  # noqa: N802
    """``μ(At) = (e^{−At} − I)^{−1}`` по формуле Опица для ``f(z) = μ(zt)``."""
    def mu_t(z: float) -> float:
        return float(mu(z * t))

    return opitz_apply(mu_t, plant)


def expm_series(m: Matrix3, tol: float = SERIES_TOL) -> Matrix3:
    """Независимый эталон ``e^M``: ряд Тейлора с масштабированием и возведением в квадрат.

    Матрица делится на ``2^s`` так, чтобы ``‖M/2^s‖∞ ≤ 1/2``; ряд обрывается, когда
    каждый элемент очередного члена меньше ``tol`` от соответствующего элемента суммы.
    """
    m = np.asarray(m, dtype=float)
    norm = float(np.max(np.sum(np.abs(m), axis=1)))
    s = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    x = m / 2.0**s

    result = np.eye(m.shape[0])
    term = np.eye(m.shape[0])
    for k in range(1, 64):
        term = term @ x / k
        result = result + term
        if np.all(np.abs(term) <= tol * np.abs(result)):
            break

    for _ in range(s):
        result = result @ result
    return result

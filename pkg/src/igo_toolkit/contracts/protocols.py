"""Контракты-протоколы численного ядра.

Определяют минимальные сигнатуры скалярных функций, вычислителей точек свипа и
алиасы массивов numpy, которыми обмениваются модули ``toolkit``.
"""

from collections.abc import Sequence
from typing import Protocol, runtime_checkable

import numpy as np
from numpy.typing import NDArray

type Vector3 = NDArray[np.float64]
"""Вектор состояния ``(x1, x2, x3)``, shape ``(3,)``."""

type Matrix3 = NDArray[np.float64]
"""Матрица 3×3 в построчном порядке, shape ``(3, 3)``."""


@runtime_checkable
class ScalarFn(Protocol):
    """Вещественная функция вещественного аргумента."""

    def __call__(self, z: float, /) -> float:
        """Значение функции в точке ``z``."""
        ...


class MultiplierRecordProtocol(Protocol):
    """Точка свипа, достаточная для поиска пересечений единичной окружности."""

    @property
    def param(self) -> float:
        """Значение бифуркационного параметра."""
        ...

    @property
    def multipliers(self) -> Sequence[complex] | None:
        """Мультипликаторы неподвижной точки; ``None``, если точка не вычислена."""
        ...


class RecordEvaluator[R: MultiplierRecordProtocol](Protocol):
    """Вычислитель точки свипа по значению параметра (для уточнения бифуркаций)."""

    def __call__(self, param: float, /) -> R:
        """Построить запись свипа в точке ``param``."""
        ...

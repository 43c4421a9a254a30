"""Схемы модели осциллятора: линейная часть (объект) и функции модуляции Хилла.

Линейная часть третьего порядка задаётся параметрами ``a1, a2, a3`` (скорости распада,
попарно различимые) и ``g1, g2`` (коэффициенты передачи), которые определяют матрицы

    A = [[-a1, 0, 0], [g1, -a2, 0], [0, g2, -a3]],  B = (1, 0, 0)ᵀ,  C = (0, 0, 1).

Функции модуляции частоты Φ и амплитуды F имеют форму Хилла с насыщением
``k1 < Φ < k1 + k2`` и ``k3 < F < k3 + k4``. Проверка инвариантов выполняется при
создании экземпляра: некорректный набор параметров построить нельзя.
"""
from collections.abc import Hashable
from typing import Self, TypeGuard

from pydantic import Field, model_validator
from pydantic.dataclasses import dataclass as pdc_dataclass

from igo_toolkit.contracts.errors import DegenerateNodesError
from igo_toolkit.schemas.base import ResponseBase

NODE_RTOL = 1e-9
"""Относительный порог различимости узлов разделённых разностей."""


def nodes_distinct(z0: float, z1: float) -> bool:
    """Проверить, что узлы различимы: ``|z0 - z1| > 1e-9·max(1, |z0|, |z1|)``."""
    return abs(z0 - z1) > NODE_RTOL * max(1.0, abs(z0), abs(z1))


@pdc_dataclass(slots=True, frozen=True)
class PlantParams(ResponseBase):
    """Линейная часть осциллятора (объект управления) третьего порядка."""

    a1: float = Field(..., gt=0, description="Скорость распада x1, 1/время")
    a2: float = Field(..., gt=0, description="Скорость распада x2, 1/время")
    a3: float = Field(..., gt=0, description="Скорость распада x3, 1/время")
    g1: float = Field(..., gt=0, description="Коэффициент передачи x1 ➜ x2")
    g2: float = Field(default=1.0, gt=0, description="Коэффициент передачи x2 ➜ x3")

    @model_validator(mode="after")
    def _check_distinct_rates(self) -> Self:
        rates = (self.a1, self.a2, self.a3)
        for i in range(3):
            for j in range(i + 1, 3):
                if not nodes_distinct(rates[i], rates[j]):
                    raise DegenerateNodesError(nodes=(-self.a1, -self.a2, -self.a3), step="plant")
        return self

    @property
    def rates(self) -> tuple[float, float, float]:
        """Скорости распада ``(a1, a2, a3)``."""
        return self.a1, self.a2, self.a3


@pdc_dataclass(slots=True, frozen=True)
class HillParams(ResponseBase):
    """Параметры функций модуляции Хилла.

    ``Φ(z) = k1 + k2·(z/h_phi)^p_phi / (1 + (z/h_phi)^p_phi)``,
    ``F(z) = k3 + k4 / (1 + (z/h_f)^p_f)``.
    """

    k1: float = Field(..., gt=0, description="Нижняя граница периода Φ1")
    k2: float = Field(..., gt=0, description="Размах периода Φ2 - Φ1")
    k3: float = Field(..., gt=0, description="Нижняя граница веса F1")
    k4: float = Field(..., gt=0, description="Размах веса F2 - F1")
    h_phi: float = Field(..., gt=0, description="Точка полуподъёма Φ")
    p_phi: float = Field(..., ge=1, description="Показатель Хилла для Φ")
    h_f: float = Field(..., gt=0, description="Точка полуспада F")
    p_f: float = Field(..., ge=1, description="Показатель Хилла для F")

    @property
    def phi_bounds(self) -> tuple[float, float]:
        """Границы периода ``(Φ1, Φ2)``."""
        return self.k1, self.k1 + self.k2

    @property
    def f_bounds(self) -> tuple[float, float]:
        """Границы веса импульса ``(F1, F2)``."""
        return self.k3, self.k3 + self.k4


_PLANT_KEYS = ("a1", "a2", "a3", "g1", "g2")
_HILL_KEYS = ("k1", "k2", "k3", "k4", "h_phi", "p_phi", "h_f", "p_f")


@pdc_dataclass(slots=True, frozen=True)
class IgoModel(ResponseBase):
    """Полная модель осциллятора: объект и функции модуляции.

    Принимает как вложенную форму ``{"plant": {...}, "hill": {...}}``, так и плоскую
    ``{"a1": ..., ..., "p_f": ...}``; выгружается во вложенной форме.
    """

    plant: PlantParams
    hill: HillParams

    @staticmethod
    def _is_dict(x: object) -> TypeGuard[dict[Hashable, object]]:
        return isinstance(x, dict)

    @model_validator(mode="before")
    @classmethod
    def _normalize_flat(cls, data: object) -> object:
        if not cls._is_dict(data) or "plant" in data or "hill" in data:
            return data

        d = dict(data)
        plant = {k: d.pop(k) for k in _PLANT_KEYS if k in d}
        hill = {k: d.pop(k) for k in _HILL_KEYS if k in d}
        # оставшиеся ключи отклонит extra="forbid"
        return {"plant": plant, "hill": hill, **d}

from typing import Annotated

from pydantic import Field, PositiveFloat
from pydantic.dataclasses import dataclass as pdc_dataclass

from igo_toolkit.schemas.base import ResponseBase

type StateTuple = tuple[PositiveFloat, PositiveFloat, PositiveFloat]
"""Состояние ``(x1, x2, x3)`` допустимого решения: все компоненты положительны."""


@pdc_dataclass(slots=True, frozen=True)
class CycleSpec(ResponseBase):
    """Желаемые характеристики 1-цикла: вес импульса λ и период T.

    В JSON ключи называются ``lambda`` и ``T``; в Python доступны как ``lam`` и ``period``.
    """

    lam: Annotated[float, Field(gt=0, alias="lambda", description="Вес импульса (доза)")]
    period: Annotated[float, Field(gt=0, alias="T", description="Период 1-цикла")]


@pdc_dataclass(slots=True, frozen=True)
class CycleSolution(ResponseBase):
    """Найденный 1-цикл: неподвижная точка отображения импульс-импульс.

    Атрибуты
    ---------
    x: StateTuple
        Состояние непосредственно перед импульсом (неподвижная точка X).
    z0: float
        Выход в момент импульса, совпадает с ``x[2]``.
    lam, period: float
        Реализованные вес и период ``F(z0)``, ``Φ(z0)``.
    residual: float
        ``‖Q(X) − X‖∞ / (1 + ‖X‖∞)``.
    """

    x: Annotated[StateTuple, Field(alias="X")]
    z0: PositiveFloat
    lam: Annotated[float, Field(gt=0, alias="lambda")]
    period: Annotated[float, Field(gt=0, alias="T")]
    residual: Annotated[float, Field(ge=0)]

    @property
    def spec(self) -> CycleSpec:
        """Реализованные параметры цикла как ``CycleSpec``."""
        return CycleSpec(lam=self.lam, period=self.period)

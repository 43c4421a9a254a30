from typing import Annotated, Self

from pydantic import Field, NonNegativeInt, model_validator
from pydantic.dataclasses import dataclass as pdc_dataclass

from igo_toolkit.schemas.base import DataSchema, ResponseBase

type Row3 = tuple[float, float, float]


@pdc_dataclass(slots=True, frozen=True)
class ImpulseEvent(ResponseBase):
    """Срабатывание импульсной обратной связи.

    ``x_post = x_pre + lam·B``; следующее срабатывание происходит в ``t + period``.
    """

    n: NonNegativeInt
    t: float
    x_pre: Row3
    x_post: Row3
    lam: float
    period: float


@pdc_dataclass(slots=True, frozen=True)
class TrajectorySample(ResponseBase):
    """Отсчёт непрерывной траектории в момент ``t``."""

    t: float
    x: Row3


class SimulationStart(DataSchema):
    """Начальное состояние симуляции (задаётся не более чем одним способом).

    - ``x0``: явный вектор;
    - ``scale``: множитель неподвижной точки, например ``0.9``;
    - ``perturbation``: относительная амплитуда случайного возмущения неподвижной точки
      (генератор с зерном ``--seed``).
    По умолчанию старт из неподвижной точки.
    """

    x0: tuple[float, float, float] | None = None
    scale: Annotated[float, Field(gt=0)] | None = None
    perturbation: Annotated[float, Field(ge=0, lt=1)] | None = None

    @model_validator(mode="after")
    def _one_way(self) -> Self:
        given = [v for v in (self.x0, self.scale, self.perturbation) if v is not None]
        if len(given) > 1:
            raise ValueError("Укажите только один из x0, scale, perturbation")
        if self.x0 is not None and min(self.x0) <= 0:
            raise ValueError("Начальное состояние x0 должно быть положительным")
        return self

"""Схемы бифуркационного анализа: база свипа по a3, записи свипа и точки бифуркации."""

from typing import Literal

from pydantic import Field, PositiveFloat
from pydantic.dataclasses import dataclass as pdc_dataclass

from igo_toolkit.schemas.base import DataSchema, ResponseBase
from igo_toolkit.schemas.model import HillParams, PlantParams

type CrossingKind = Literal["period_doubling", "fold", "neimark_sacker"]


class SweepBase(DataSchema):
    """Неизменные параметры свипа по a3: объект без a3 и функции Хилла с общими ``h``, ``p``."""

    a1: PositiveFloat
    a2: PositiveFloat
    g1: PositiveFloat
    g2: PositiveFloat = 1.0
    k1: PositiveFloat
    k2: PositiveFloat
    k3: PositiveFloat
    k4: PositiveFloat
    p: float = Field(default=2.0, ge=1)

    def plant(self, a3: float) -> PlantParams:
        """Объект с заданным ``a3``; совпадение узлов даёт ``DegenerateNodesError``."""
        return PlantParams(a1=self.a1, a2=self.a2, a3=a3, g1=self.g1, g2=self.g2)

    def hill(self, h: float) -> HillParams:
        """Функции Хилла с общей точкой полуподъёма ``h``."""
        return HillParams(
            k1=self.k1, k2=self.k2, k3=self.k3, k4=self.k4, h_phi=h, p_phi=self.p, h_f=h, p_f=self.p
        )


@pdc_dataclass(slots=True, frozen=True)
class SweepRecord(ResponseBase):
    """Точка свипа. При ошибке заполнено только ``param`` и ``error``."""

    param: float
    h: float | None = None
    z0: float | None = None
    multipliers: tuple[complex, complex, complex] | None = None
    r0: float | None = None
    tau: float | None = None
    is_schur: bool | None = None
    error: str | None = None


@pdc_dataclass(slots=True, frozen=True)
class BifurcationPoint(ResponseBase):
    """Пересечение мультипликатором единичной окружности.

    ``[lower, upper]`` — итоговый интервал локализации, ``param`` — его середина,
    ``multiplier`` — критический мультипликатор в ``param``.
    """

    lower: float
    upper: float
    param: float
    multiplier: complex
    kind: CrossingKind
    refined: bool

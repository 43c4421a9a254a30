"""Схемы процедуры синтеза: параметры поиска наклонов, опции, диагностика и результат."""

from typing import Literal, Self

from pydantic import Field, PositiveFloat, PositiveInt, model_validator
from pydantic.dataclasses import dataclass as pdc_dataclass

from igo_toolkit.schemas.base import DataSchema, ResponseBase
from igo_toolkit.schemas.cycle import CycleSolution
from igo_toolkit.schemas.model import IgoModel
from igo_toolkit.schemas.stability import Slopes, StabilityReport

type RootChoice = Literal["larger_h", "smaller_h"]


class SlopeSearch(DataSchema):
    """Прямоугольная сетка поиска наклонов ``F′ ∈ [f_min, f_max]``, ``Φ′ ∈ [phi_min, phi_max]``.

    При ``exclude_zero`` строки и столбцы с нулевым наклоном отбрасываются: функция Хилла
    с положительным размахом не реализует нулевую производную.
    """

    f_min: float = Field(default=-1.0, le=0)
    f_max: float = Field(default=0.0, le=0)
    f_points: PositiveInt = 101
    phi_min: float = Field(default=0.0, ge=0)
    phi_max: float = Field(default=5.0, ge=0)
    phi_points: PositiveInt = 101
    exclude_zero: bool = False

    @model_validator(mode="after")
    def _check_ranges(self) -> Self:
        if self.f_min > self.f_max or self.phi_min > self.phi_max:
            raise ValueError("Границы сетки наклонов перепутаны местами")
        return self


class DesignOptions(DataSchema):
    """Опции синтеза.

    Атрибуты
    ---------
    p_phi, p_f: float
        Показатели Хилла (≥ 1).
    k2, k4: float
        Размахи Φ и F; определяют достижимые наклоны.
    slopes: Slopes | None
        Явные наклоны. Если не заданы, выполняется поиск по сетке.
    root: RootChoice
        Какой из двух корней квадратного уравнения для η выбрать.
    require_stable: bool
        ``False`` разрешает синтез без стабилизации (результат с предупреждением).
    k1, k3: float | None
        Пользовательские смещения; заменяются откалиброванными с предупреждением.
    search: SlopeSearch | None
        Сетка поиска; по умолчанию сетка, обрезанная до области реализуемости Хилла.
    """

    p_phi: float = Field(default=2.0, ge=1)
    p_f: float = Field(default=2.0, ge=1)
    k2: PositiveFloat
    k4: PositiveFloat
    slopes: Slopes | None = None
    root: RootChoice = "larger_h"
    require_stable: bool = True
    k1: PositiveFloat | None = None
    k3: PositiveFloat | None = None
    search: SlopeSearch | None = None


@pdc_dataclass(slots=True, frozen=True)
class HillSolveDiagnostics(ResponseBase):
    """Решение квадратного уравнения для ``η = (z0/h)^p`` одной из функций Хилла.

    ``roots`` и ``h_candidates`` упорядочены по возрастанию ``h``; ``h`` — выбранное значение.
    """

    side: Literal["phi", "f"]
    theta: float
    roots: tuple[float, ...]
    h_candidates: tuple[float, ...]
    eta: float
    h: float
    chosen_root: Literal["larger_h", "smaller_h", "double"]
    reason: str = ""


@pdc_dataclass(slots=True, frozen=True)
class DesignResult(ResponseBase):
    """Результат синтеза: откалиброванная модель и подтверждающий анализ.

    ``gain`` — вектор обратной связи ``K = F′J + Φ′D``, покомпонентно неположительный.
    """

    model: IgoModel
    slopes: Slopes
    cycle: CycleSolution
    stability: StabilityReport
    diagnostics: tuple[HillSolveDiagnostics, HillSolveDiagnostics]
    gain: tuple[float, float, float]
    warnings: tuple[str, ...] = ()
    stabilized: bool = True

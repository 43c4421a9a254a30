"""Конфигурации запуска команд CLI.

Конфигурация — JSON-объект с дискриминатором ``command``; неизвестные ключи отклоняются.
Флаги командной строки ``--out``, ``--plots``, ``--seed`` переопределяют одноимённые поля.
"""

from typing import Annotated, Literal, Self

from pydantic import Field, NonPositiveFloat, PositiveFloat, PositiveInt, TypeAdapter, model_validator

from igo_toolkit.schemas.base import DataSchema
from igo_toolkit.schemas.bifurcation import SweepBase
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.design import DesignOptions
from igo_toolkit.schemas.model import IgoModel, PlantParams
from igo_toolkit.schemas.simulation import SimulationStart

U64_LIMIT = 2**64


class CommandConfig(DataSchema):
    """Общие поля конфигураций команд: каталог результатов, графики и зерно."""

    out: str | None = None
    plots: bool = False
    seed: Annotated[int, Field(ge=0, lt=U64_LIMIT)] | None = None


class DesignConfig(CommandConfig):
    """Синтез модели по объекту и желаемому 1-циклу."""

    command: Literal["design"]
    plant: PlantParams
    spec: CycleSpec
    options: DesignOptions


class SimulateConfig(CommandConfig):
    """Симуляция: модель задаётся явно или берётся из ``design_report.json``.

    Относительный путь ``design_report`` отсчитывается от каталога файла конфигурации.
    """

    command: Literal["simulate"]
    model: IgoModel | None = None
    design_report: str | None = None
    start: SimulationStart = SimulationStart()
    n_impulses: PositiveInt = 100
    t_end: PositiveFloat | None = None
    dt: PositiveFloat = 1.0

    @model_validator(mode="after")
    def _one_model_source(self) -> Self:
        if (self.model is None) == (self.design_report is None):
            raise ValueError("Нужно указать ровно один источник модели: model или design_report")
        return self


class A3Sweep(DataSchema):
    """Свип по a3 с перекалибровкой общего ``h`` в каждой точке."""

    kind: Literal["a3"]
    base: SweepBase
    spec: CycleSpec
    a3_min: PositiveFloat
    a3_max: PositiveFloat
    n_points: PositiveInt = 200
    refine: bool = True

    @model_validator(mode="after")
    def _non_empty(self) -> Self:
        if not self.a3_min < self.a3_max:
            raise ValueError("Пустой диапазон a3: a3_min должен быть меньше a3_max")
        return self


class SlopeSweep(DataSchema):
    """Свип по ``F′`` с наклоном ``Φ′ = −(k2/k4)·F′``."""

    kind: Literal["slopes"]
    plant: PlantParams
    spec: CycleSpec
    f_min: NonPositiveFloat
    f_max: NonPositiveFloat
    k2: PositiveFloat
    k4: PositiveFloat
    n_points: PositiveInt = 100
    refine: bool = True

    @model_validator(mode="after")
    def _non_empty(self) -> Self:
        if not self.f_min < self.f_max:
            raise ValueError("Пустой диапазон F′: f_min должен быть меньше f_max")
        return self


class SweepConfig(CommandConfig):
    """Бифуркационный свип."""

    command: Literal["sweep"]
    sweep: Annotated[A3Sweep | SlopeSweep, Field(discriminator="kind")]
    workers: PositiveInt = 1


class CheckConfig(CommandConfig):
    """Сверка эталонного численного примера; параметров не требует."""

    command: Literal["check"]


RunConfig = Annotated[
    DesignConfig | SimulateConfig | SweepConfig | CheckConfig, Field(discriminator="command")
]

run_config_adapter: TypeAdapter[RunConfig] = TypeAdapter(RunConfig)

"""Схемы анализа устойчивости неподвижной точки отображения импульс-импульс."""

from typing import Annotated

from pydantic import AliasChoices, Field, NonNegativeFloat, NonPositiveFloat
from pydantic.dataclasses import dataclass as pdc_dataclass

from igo_toolkit.schemas.base import ResponseBase

type Row3 = tuple[float, float, float]
type Rows3 = tuple[Row3, Row3, Row3]


@pdc_dataclass(slots=True, frozen=True)
class Slopes(ResponseBase):
    """Наклоны модуляционных функций в точке z0.

    Отрицательная обратная связь требует ``F′(z0) ≤ 0`` и ``Φ′(z0) ≥ 0``.
    """

    f_prime: Annotated[
        NonPositiveFloat, Field(validation_alias=AliasChoices("f_prime", "fPrime"))
    ]
    phi_prime: Annotated[
        NonNegativeFloat, Field(validation_alias=AliasChoices("phi_prime", "phiPrime"))
    ]

    @property
    def norm(self) -> float:
        """Евклидова норма пары наклонов."""
        return float((self.f_prime**2 + self.phi_prime**2) ** 0.5)


@pdc_dataclass(slots=True, frozen=True)
class JacobianParts(ResponseBase):
    """Векторы параметризации якобиана ``Q′(X) = e^{AT} + (F′J + Φ′D)C``.

    ``J = e^{AT}B`` неотрицателен, ``D = AX`` неположителен (строго при отсутствии
    потери точности в экспонентах).
    """

    j: Annotated[
        tuple[NonNegativeFloat, NonNegativeFloat, NonNegativeFloat], Field(alias="J")
    ]
    d: Annotated[
        tuple[NonPositiveFloat, NonPositiveFloat, NonPositiveFloat], Field(alias="D")
    ]


@pdc_dataclass(slots=True, frozen=True)
class SchurFlags(ResponseBase):
    """Три условия устойчивости по Шуру для матрицы 3×3.

    - ``det_bound``: ``|det| < 1``;
    - ``trace_det_bound``: ``|tr + det| < 1 + M``;
    - ``mixed_bound``: ``|tr·det − M| < 1 − det²``.
    """

    det_bound: bool
    trace_det_bound: bool
    mixed_bound: bool

    @property
    def all(self) -> bool:
        """Все три условия выполнены."""
        return self.det_bound and self.trace_det_bound and self.mixed_bound


@pdc_dataclass(slots=True, frozen=True)
class StabilityReport(ResponseBase):
    """Отчёт об устойчивости 1-цикла.

    ``tau`` равно ``inf`` при ``r0 ≈ 1`` и ``0`` при ``r0 = 0``; ``log_r0`` выгружается
    в JSON под ключом ``Lambda``.
    """

    jac: Rows3
    tr: float
    m: Annotated[float, Field(alias="M")]
    det: float
    multipliers: tuple[complex, complex, complex]
    r0: NonNegativeFloat
    log_r0: Annotated[float, Field(alias="Lambda")]
    tau: NonNegativeFloat
    is_schur: bool
    flags: SchurFlags
    clustered: bool = False

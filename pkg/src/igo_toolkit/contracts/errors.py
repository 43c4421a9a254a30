"""Иерархия исключений пакета.

Разделение исключений по смыслу:
- доменные ошибки (вырожденные узлы, неразрешимый синтез, отсутствие неподвижной точки и т.п.)
  завершают команду CLI с кодом 2;
- ошибки конфигурации (схема, файлы, аргументы) завершают команду с кодом 1.

Нарушения простых диапазонов (положительность параметров, знаки наклонов) сообщает
pydantic через ``ValidationError``; здесь описаны только ошибки с доменным смыслом.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

CONFIG_EXIT_CODE = 1
DOMAIN_EXIT_CODE = 2


class ErrorCode(Enum):
    """Машиночитаемые коды ошибок."""

    UNKNOWN = "unknown"
    CONFIG = "config"
    DEGENERATE_NODES = "degenerate_nodes"
    NON_POSITIVE_OUTPUT = "non_positive_output"
    BRACKETING_FAILURE = "bracketing_failure"
    NOT_A_FIXED_POINT = "not_a_fixed_point"
    MARGINAL_STABILITY = "marginal_stability"
    INFEASIBLE = "infeasible"
    NO_STABLE_SLOPES = "no_stable_slopes"
    NUMERICAL = "numerical"


@dataclass(slots=True, kw_only=True)
class IgoError(Exception):
    """Базовая ошибка пакета.

    Атрибуты
    ---------
    error_code: ErrorCode
        Машиночитаемый код класса ошибки.
    step: str | None
        Шаг процедуры (синтеза, свипа, команды), на котором произошла ошибка.
    """

    error_code: ErrorCode = ErrorCode.UNKNOWN
    step: str | None = None

    @property
    def exit_code(self) -> int:
        """Код завершения процесса CLI для этой ошибки."""
        return DOMAIN_EXIT_CODE

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Ошибка {self.error_code.value}" + (f" на шаге {self.step}" if self.step else "")


@dataclass(slots=True, kw_only=True)
class ConfigError(IgoError):
    """Некорректная конфигурация запуска: схема, файл или аргументы."""

    reason: str = ""

    def __post_init__(self) -> None:
        """Установить код ошибки конфигурации."""
        self.error_code = ErrorCode.CONFIG

    @property
    def exit_code(self) -> int:
        """Ошибки конфигурации завершают процесс с кодом 1."""
        return CONFIG_EXIT_CODE

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Ошибка конфигурации: {self.reason}"


@dataclass(slots=True, kw_only=True)
class DegenerateNodesError(IgoError):
    """Узлы разделённой разности (собственные значения -a_i) неразличимы."""

    nodes: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        """Установить код ошибки для совпадающих узлов."""
        self.error_code = ErrorCode.DEGENERATE_NODES

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Узлы {self.nodes} попарно неразличимы"


@dataclass(slots=True, kw_only=True)
class NonPositiveOutputError(IgoError):
    """Модуляционная функция вызвана с неположительным аргументом."""

    value: float = 0.0

    def __post_init__(self) -> None:
        """Установить код ошибки для неположительного выхода."""
        self.error_code = ErrorCode.NON_POSITIVE_OUTPUT

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Выход z = {self.value!r} должен быть положительным"


@dataclass(slots=True, kw_only=True)
class BracketingFailureError(IgoError):
    """Концы интервала бисекции не разделяют корень."""

    lower: float = 0.0
    upper: float = 0.0

    def __post_init__(self) -> None:
        """Установить код ошибки для неудачной локализации корня."""
        self.error_code = ErrorCode.BRACKETING_FAILURE

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Нет смены знака на интервале [{self.lower!r}, {self.upper!r}]"


@dataclass(slots=True, kw_only=True)
class NotAFixedPointError(IgoError):
    """Состояние не является неподвижной точкой отображения импульс-импульс."""

    residual: float = 0.0
    tolerance: float = 0.0

    def __post_init__(self) -> None:
        """Установить код ошибки для невязки неподвижной точки."""
        self.error_code = ErrorCode.NOT_A_FIXED_POINT

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Невязка неподвижной точки {self.residual:.3e} превышает допуск {self.tolerance:.3e}"


@dataclass(slots=True, kw_only=True)
class MarginalStabilityError(IgoError):
    """Спектральный радиус неотличим от единицы, время сходимости не определено."""

    r0: float = 1.0

    def __post_init__(self) -> None:
        """Установить код ошибки для граничной устойчивости."""
        self.error_code = ErrorCode.MARGINAL_STABILITY

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Спектральный радиус r0 = {self.r0!r} на границе единичного круга"


@dataclass(slots=True, kw_only=True)
class InfeasibleError(IgoError):
    """Требования синтеза несовместимы с параметризацией модуляционных функций."""

    reason: str = ""

    def __post_init__(self) -> None:
        """Установить код ошибки для неразрешимой задачи."""
        self.error_code = ErrorCode.INFEASIBLE

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        where = f" (шаг {self.step})" if self.step else ""
        return f"Синтез невозможен{where}: {self.reason}"


@dataclass(slots=True, kw_only=True)
class NoStableSlopesError(IgoError):
    """Ни одна допустимая пара наклонов не делает якобиан устойчивым по Шуру."""

    reason: str = ""

    def __post_init__(self) -> None:
        """Установить код ошибки для отсутствия стабилизирующих наклонов."""
        self.error_code = ErrorCode.NO_STABLE_SLOPES

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        where = f" (шаг {self.step})" if self.step else ""
        return f"Нет стабилизирующих наклонов{where}: {self.reason}"


@dataclass(slots=True, kw_only=True)
class NumericalError(IgoError):
    """Численный сбой внешней библиотеки (линейная алгебра, переполнение)."""

    reason: str = ""

    def __post_init__(self) -> None:
        """Установить код численной ошибки."""
        self.error_code = ErrorCode.NUMERICAL

    def __str__(self) -> str:
        """Вернуть человекочитаемое представление ошибки."""
        return f"Численная ошибка: {self.reason}"

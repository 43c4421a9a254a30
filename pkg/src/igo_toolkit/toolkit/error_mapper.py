"""Централизованный маппер внешних исключений в ошибки пакета.

Назначение: на границе CLI привести исключения pydantic, numpy, scipy и ввода-вывода
к иерархии ``IgoError`` с кодом завершения процесса.
"""

from __future__ import annotations

import inspect
import json
import logging
from dataclasses import dataclass
from functools import wraps
from typing import TYPE_CHECKING

import numpy as np
from pydantic import ValidationError

from igo_toolkit.contracts.errors import ConfigError, ErrorCode, IgoError, NumericalError

if TYPE_CHECKING:
    from collections.abc import Callable

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class ErrorContext:
    """Контекст команды для обогащения ошибок."""

    command: str | None = None
    config_path: str | None = None


class ErrorMapper:
    """Маппер внешних ошибок в иерархию пакета."""

    def translate(self, exc: BaseException, ctx: ErrorContext) -> IgoError:
        """Преобразовать исключение внешней библиотеки в IgoError."""
        if isinstance(exc, IgoError):
            return self._enrich(exc, ctx)

        mapped: IgoError
        if isinstance(exc, ValidationError):
            mapped = ConfigError(reason=f"конфигурация не прошла проверку схемы:\n{exc}")
        elif isinstance(exc, json.JSONDecodeError):
            mapped = ConfigError(reason=f"некорректный JSON: {exc}")
        elif isinstance(exc, OSError):
            mapped = ConfigError(reason=f"ошибка файла: {exc}")
        elif isinstance(exc, (np.linalg.LinAlgError, FloatingPointError, ZeroDivisionError, OverflowError)):
            mapped = NumericalError(reason=f"{type(exc).__name__}: {exc}")
        else:
            mapped = IgoError(error_code=ErrorCode.UNKNOWN)

        return self._enrich(mapped, ctx)

    @staticmethod
    def _enrich(err: IgoError, ctx: ErrorContext) -> IgoError:
        if err.step is None:
            err.step = ctx.command
        return err


default_error_mapper = ErrorMapper()


def map_toolkit_errors[**P, R](fn: Callable[P, R]) -> Callable[P, R]:
    """Декоратор границы CLI.

    Исключения ``IgoError`` пропускаются без изменений (с заполнением шага), прочие
    переводятся через ``default_error_mapper``; исходное исключение пишется в лог.
    Путь конфигурации берётся из аргумента ``config_path``, если он есть.
    """
    sig = inspect.signature(fn)
    command = getattr(fn, "__name__", "unknown")

    @wraps(fn)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        bound = sig.bind_partial(*args, **kwargs)
        config_path = bound.arguments.get("config_path", None)
        ctx = ErrorContext(command=command, config_path=str(config_path) if config_path else None)
        try:
            return fn(*args, **kwargs)
        except IgoError as exc:
            raise default_error_mapper.translate(exc, ctx) from None
        except Exception as exc:
            logger.exception("Исключение на границе CLI: %s (%s)", command, ctx.config_path)
            raise default_error_mapper.translate(exc, ctx) from exc

    return wrapper

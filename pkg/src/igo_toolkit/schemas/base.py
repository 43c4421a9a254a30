from abc import ABC
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, SerializerFunctionWrapHandler, field_serializer
from pydantic.dataclasses import dataclass as pdc_dataclass


def _is_numeric(v: Any) -> bool:  # noqa: ANN401
    if isinstance(v, (complex, np.ndarray, np.generic)):
        return True
    if isinstance(v, (tuple, list)):
        return any(_is_numeric(item) for item in v)
    return False


def to_jsonable(v: Any) -> Any:  # noqa: ANN401
    """Привести значение к JSON-совместимому виду.

    ``complex`` ➜ ``[re, im]``, скаляры и массивы numpy ➜ ``float``/``list``;
    кортежи и списки обходятся рекурсивно, прочие значения возвращаются как есть.
    """
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.ndarray):
        return to_jsonable(v.tolist())
    if isinstance(v, np.generic):
        return to_jsonable(v.item())
    if isinstance(v, (tuple, list)):
        return [to_jsonable(item) for item in v]
    return v


class DataSchema(BaseModel):
    """Базовая схема конфигураций с общими настройками Pydantic v2."""

    model_config = ConfigDict(
        populate_by_name=True,  # разрешить заполнять поля как по alias, так и по их именам
        extra="forbid",         # неизвестные ключи конфигурации отклоняются
        frozen=True,            # сделать экземпляры неизменяемыми
    )


@pdc_dataclass(
    config=ConfigDict(
        extra="forbid",
        populate_by_name=True,         # принимать и имена полей, и алиасы
        arbitrary_types_allowed=True,  # если где-то будут нестандартные типы
    ),
    frozen=True
)
class ResponseBase(ABC):
    """Базовый неизменяемый pydantic dataclass для доменных значений и результатов."""

    @field_serializer("*", mode="wrap", when_used="json")
    def _serialize_numeric(self, v: Any, handler: SerializerFunctionWrapHandler) -> Any:  # noqa: ANN401, PLR6301
        """Преобразует complex и значения numpy при выгрузке в JSON.

        Декоратор с mask '*' применяется ко всем полям; прочие значения (в том числе
        вложенные dataclass-ы с их алиасами) сериализуются штатным обработчиком.
        """
        if _is_numeric(v):
            return to_jsonable(v)
        return handler(v)

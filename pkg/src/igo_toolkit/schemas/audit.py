from typing import Literal

from pydantic.dataclasses import dataclass as pdc_dataclass

from igo_toolkit.schemas.base import ResponseBase


@pdc_dataclass(slots=True, frozen=True)
class AuditRow(ResponseBase):
    """Строка сверки эталонного значения с пересчитанным.

    ``status`` равен ``match``, если ``|computed − printed| ≤ tolerance·|printed|``
    (или логическое утверждение подтверждено), иначе ``mismatch``.
    """

    quantity: str
    printed: float
    computed: float
    tolerance: float
    status: Literal["match", "mismatch"]
    note: str = ""

    @property
    def rel_error(self) -> float:
        """Относительное отклонение пересчитанного значения от эталонного."""
        scale = abs(self.printed) if self.printed else 1.0
        return abs(self.computed - self.printed) / scale

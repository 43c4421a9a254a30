"""Модуляционные функции Хилла и их производные.

``Φ(z) = k1 + k2·r/(1 + r)``, ``F(z) = k3 + k4/(1 + r)``, где ``r = (z/h)^p``.
Все величины вычисляются через ``w = e^{−|p·ln(z/h)|} ≤ 1``, поэтому переполнение
при больших и малых ``z`` исключено.
"""

import math

from igo_toolkit.contracts.errors import NonPositiveOutputError
from igo_toolkit.schemas.model import HillParams


def hill_parts(z: float, h: float, p: float) -> tuple[float, float, float]:
    """Вернуть ``(r/(1+r), 1/(1+r), r/(1+r)²)`` для ``r = (z/h)^p``."""
    if not z > 0 or not math.isfinite(z):
        raise NonPositiveOutputError(value=z)
    lr = p * math.log(z / h)
    w = math.exp(-abs(lr))
    big, small = 1.0 / (1.0 + w), w / (1.0 + w)
    rise, fall = (big, small) if lr >= 0 else (small, big)
    return rise, fall, w / (1.0 + w) ** 2


def phi(hill: HillParams, z: float) -> float:
    """Период до следующего импульса ``Φ(z)``; неубывает, ``k1 < Φ < k1 + k2``."""
    rise, _, _ = hill_parts(z, hill.h_phi, hill.p_phi)
    return hill.k1 + hill.k2 * rise


def f_mod(hill: HillParams, z: float) -> float:
    """Вес импульса ``F(z)``; невозрастает, ``k3 < F < k3 + k4``."""
    _, fall, _ = hill_parts(z, hill.h_f, hill.p_f)
    return hill.k3 + hill.k4 * fall


def phi_prime(hill: HillParams, z: float) -> float:
    """``Φ′(z) = k2·p·z^{p−1}·h^{−p} / (1 + (z/h)^p)²``."""
    _, _, bump = hill_parts(z, hill.h_phi, hill.p_phi)
    return hill.k2 * hill.p_phi / z * bump


def f_prime(hill: HillParams, z: float) -> float:
    """``F′(z) = −k4·p·z^{p−1}·h^{−p} / (1 + (z/h)^p)²``."""
    _, _, bump = hill_parts(z, hill.h_f, hill.p_f)
    return -hill.k4 * hill.p_f / z * bump

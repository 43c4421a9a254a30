"""Устойчивость 1-цикла: якобиан отображения импульс-импульс, его инварианты и мультипликаторы.

В неподвижной точке якобиан допускает параметризацию

    Q′(X) = e^{AT} + (F′·J + Φ′·D)·C,  J = e^{AT}B > 0,  D = AX < 0,

поэтому след, определитель и сумма главных миноров ``M`` аффинны по наклонам
``(F′, Φ′)``. Устойчивость решается тремя условиями Шура для кубического
характеристического многочлена ``ρ³ − tr·ρ² + M·ρ − det``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from igo_toolkit.contracts.errors import MarginalStabilityError, NotAFixedPointError
from igo_toolkit.contracts.protocols import Matrix3, Vector3
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.model import IgoModel, PlantParams
from igo_toolkit.schemas.stability import JacobianParts, SchurFlags, Slopes, StabilityReport
from igo_toolkit.toolkit.cycle import fixed_point, map_residual
from igo_toolkit.toolkit.matfun import B_VEC, C_VEC, exp_dd1, exp_dd2, expm_At, plant_matrix
from igo_toolkit.toolkit.modulation import f_prime, phi, phi_prime

logger = logging.getLogger(__name__)

FIXED_POINT_GATE = 1e-7
CLUSTER_TOL = 1e-5
MARGINAL_LOG_TOL = 1e-12
SCHUR_BAND = 1e-9

type Cubic = tuple[complex, complex, complex]


@dataclass(slots=True, frozen=True)
class AffineInvariants:
    """Коэффициенты ``(свободный, при F′, при Φ′)`` для ``tr``, ``det`` и ``M`` якобиана."""

    tr: tuple[float, float, float]
    det: tuple[float, float, float]
    m: tuple[float, float, float]

    def at(self, f_prime: ArrayLike, phi_prime: ArrayLike) -> tuple[Any, Any, Any]:
        """Значения ``(tr, det, M)`` при заданных наклонах; работает и с массивами numpy."""
        fp, pp = np.asarray(f_prime, dtype=float), np.asarray(phi_prime, dtype=float)

        def ev(c: tuple[float, float, float]) -> Any:  # noqa: ANN401
            val = c[0] + c[1] * fp + c[2] * pp
            return float(val) if np.ndim(val) == 0 else val

        return ev(self.tr), ev(self.det), ev(self.m)


def char_invariants(m: Matrix3) -> tuple[float, float, float]:
    """След, сумма главных 2×2 миноров и определитель матрицы 3×3: ``(tr, M, det)``."""
    m = np.asarray(m, dtype=float)
    tr = float(np.trace(m))
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    return tr, float(minors), float(np.linalg.det(m))


def schur_conditions(tr: ArrayLike, m: ArrayLike, det: ArrayLike) -> tuple[Any, Any, Any]:
    """Три условия Шура для кубического многочлена; векторизуются по массивам numpy.

    ``|det| < 1``, ``|tr + det| < 1 + M``, ``|tr·det − M| < 1 − det²``.
    """
    tr, m, det = np.asarray(tr), np.asarray(m), np.asarray(det)
    return (
        np.abs(det) < 1.0,
        np.abs(tr + det) < 1.0 + m,
        np.abs(tr * det - m) < 1.0 - det**2,
    )


def schur_test(m: Matrix3) -> tuple[bool, SchurFlags]:
    """Проверить устойчивость матрицы 3×3 по Шуру без вычисления собственных значений."""
    tr, minors, det = char_invariants(m)
    c1, c2, c3 = schur_conditions(tr, minors, det)
    flags = SchurFlags(det_bound=bool(c1), trace_det_bound=bool(c2), mixed_bound=bool(c3))
    return flags.all, flags


def _poly(rho: complex, tr: float, m: float, det: float) -> complex:
    return ((rho - tr) * rho + m) * rho - det


def _dpoly(rho: complex, tr: float, m: float) -> complex:
    return (3.0 * rho - 2.0 * tr) * rho + m


def _polish(rho: complex, tr: float, m: float, det: float) -> complex:
    d = _dpoly(rho, tr, m)
    if d == 0:
        return rho
    cand = rho - _poly(rho, tr, m, det) / d
    return cand if abs(_poly(cand, tr, m, det)) <= abs(_poly(rho, tr, m, det)) else rho


def _cardano(tr: float, m: float, det: float) -> list[complex]:
    b, c, d = -tr, m, -det
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    roots: list[complex]
    if disc < 0:
        # три различных вещественных корня: тригонометрическая ветвь
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = max(-1.0, min(1.0, 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)))
        base = math.acos(arg) / 3.0
        roots = [
            complex(_polish(r * math.cos(base - 2.0 * math.pi * k / 3.0) - shift, tr, m, det).real)
            for k in range(3)
        ]
    else:
        sq = math.sqrt(disc)
        u, v = float(np.cbrt(-q / 2.0 + sq)), float(np.cbrt(-q / 2.0 - sq))
        real_root = complex(_polish(u + v - shift, tr, m, det).real)
        pair = complex(-(u + v) / 2.0 - shift, math.sqrt(3.0) / 2.0 * (u - v))
        pair = _polish(pair, tr, m, det)
        if pair.imag == 0:
            roots = [real_root, pair, pair]
        else:
            roots = [real_root, pair, pair.conjugate()]

    roots.sort(key=lambda z: (-abs(z), -z.real, -z.imag))
    return roots


def cubic_roots(tr: float, m: float, det: float) -> tuple[Cubic, bool]:
    """Корни ``ρ³ − tr·ρ² + M·ρ − det`` по формуле Кардано с одним шагом Ньютона.

    Возвращает корни в порядке убывания модуля и признак кластеризации
    (минимальное попарное расстояние меньше ``1e-5``).
    """
    roots = _cardano(tr, m, det)
    sep = min(abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3))
    clustered = sep < CLUSTER_TOL
    if clustered:
        logger.warning("Мультипликаторы кластеризованы (расстояние %.3e); точность корней снижена", sep)
    return (roots[0], roots[1], roots[2]), clustered


def spectral_radius(tr: ArrayLike, m: ArrayLike, det: ArrayLike) -> NDArray[np.float64]:
    """Наибольший модуль корня характеристического многочлена для каждого набора инвариантов."""
    tr_, m_, det_ = np.broadcast_arrays(np.asarray(tr, dtype=float), np.asarray(m, dtype=float),
                                        np.asarray(det, dtype=float))
    flat = zip(tr_.ravel(), m_.ravel(), det_.ravel(), strict=True)
    r0 = np.array([abs(_cardano(float(a), float(b), float(c))[0]) for a, b, c in flat])
    return r0.reshape(tr_.shape)


def multipliers(m: Matrix3) -> Cubic:
    """Мультипликаторы (собственные значения) матрицы 3×3 в порядке убывания модуля."""
    tr, minors, det = char_invariants(m)
    roots, _ = cubic_roots(tr, minors, det)
    return roots


def convergence_time(r0: float) -> float:
    """Время сходимости ``τ = 1/|ln r0|`` в числе импульсов.

    Параметры
    ----------
    r0: float
        Спектральный радиус якобиана; при ``r0 = 0`` возвращается ``0``.
    """
    if r0 == 0:
        return 0.0
    lam = math.log(r0)
    if abs(lam) < MARGINAL_LOG_TOL:
        raise MarginalStabilityError(r0=r0)
    return 1.0 / abs(lam)


def jacobian(model: IgoModel, x: Vector3) -> Matrix3:
    """Якобиан ``Q′(X) = e^{AΦ(z0)}(I + F′(z0)·BC) + Φ′(z0)·AXC`` в неподвижной точке.

    Raises
    ------
    NotAFixedPointError
        Невязка ``Q(X) − X`` превышает ``1e-7·(1 + ‖X‖)``.
    """
    x = np.asarray(x, dtype=float)
    residual = map_residual(model, x)
    if residual > FIXED_POINT_GATE:
        raise NotAFixedPointError(residual=residual, tolerance=FIXED_POINT_GATE, step="jacobian")

    z = float(x[2])
    hill = model.hill
    e = expm_At(model.plant, phi(hill, z))
    a = plant_matrix(model.plant)
    return e @ (np.eye(3) + f_prime(hill, z) * np.outer(B_VEC, C_VEC)) + phi_prime(hill, z) * np.outer(
        a @ x, C_VEC
    )


def jacobian_parts(plant: PlantParams, spec: CycleSpec) -> JacobianParts:
    """Векторы ``J = e^{AT}B`` и ``D = AX`` параметризации якобиана."""
    j = expm_At(plant, spec.period)[:, 0]
    d = plant_matrix(plant) @ fixed_point(plant, spec)
    return JacobianParts(j=tuple(float(v) for v in j), d=tuple(float(v) for v in d))


def jacobian_from_slopes(plant: PlantParams, spec: CycleSpec, slopes: Slopes) -> Matrix3:
    """Якобиан по параметризации ``e^{AT} + (F′J + Φ′D)C``; калибровка Хилла не нужна."""
    parts = jacobian_parts(plant, spec)
    gain = slopes.f_prime * np.asarray(parts.j) + slopes.phi_prime * np.asarray(parts.d)
    return expm_At(plant, spec.period) + np.outer(gain, C_VEC)


def affine_invariants(plant: PlantParams, spec: CycleSpec) -> AffineInvariants:
    """Замкнутые формулы коэффициентов ``tr``, ``det`` и ``M`` по наклонам.

    Элементы ``e^{AT}`` берутся из экспонент и разделённых разностей в узлах ``−a_i·T``:
    ``ψ1 = (E11 + E22)·J3 − (E31·J1 + E32·J2)``, ``ψ2`` — то же с ``D``.
    """
    t = spec.period
    n1, n2, n3 = -plant.a1 * t, -plant.a2 * t, -plant.a3 * t
    e11, e22, e33 = math.exp(n1), math.exp(n2), math.exp(n3)
    e21 = plant.g1 * t * exp_dd1(n1, n2)
    e32 = plant.g2 * t * exp_dd1(n2, n3)
    e31 = plant.g1 * plant.g2 * t * t * exp_dd2(n1, n2, n3)

    j = (e11, e21, e31)
    x = fixed_point(plant, spec)
    d = plant_matrix(plant) @ x

    # det(E + D·C) − det E = C·adj(E)·D; третья строка присоединённой матрицы
    # нижнетреугольной E не содержит обратных экспонент
    adj_row = (e21 * e32 - e22 * e31, -e11 * e32, e11 * e22)
    c_adj_d = float(np.dot(adj_row, d))
    det_e = math.exp(n1 + n2 + n3)

    psi1 = (e11 + e22) * j[2] - (e31 * j[0] + e32 * j[1])
    psi2 = (e11 + e22) * d[2] - (e31 * d[0] + e32 * d[1])
    return AffineInvariants(
        tr=(e11 + e22 + e33, j[2], float(d[2])),
        det=(det_e, 0.0, c_adj_d),
        m=(e11 * e22 + e11 * e33 + e22 * e33, psi1, float(psi2)),
    )


def invariants_closed_form(plant: PlantParams, spec: CycleSpec, s: Slopes) -> tuple[float, float, float]:
    """``(tr, det, M)`` якобиана по замкнутым формулам для наклонов ``s``."""
    return affine_invariants(plant, spec).at(s.f_prime, s.phi_prime)


def stability_report(jac: Matrix3) -> StabilityReport:
    """Собрать отчёт об устойчивости по матрице якобиана.

    Вердикт ``is_schur`` берётся из условий Шура и сверяется со спектральным радиусом.
    """
    jac = np.asarray(jac, dtype=float)
    tr, minors, det = char_invariants(jac)
    roots, clustered = cubic_roots(tr, minors, det)
    r0 = max(abs(r) for r in roots)
    is_schur, flags = schur_test(jac)

    if is_schur != (r0 < 1.0) and abs(r0 - 1.0) >= SCHUR_BAND:
        logger.warning("Условия Шура (%s) расходятся со спектральным радиусом r0 = %r", is_schur, r0)

    try:
        tau = convergence_time(r0)
    except MarginalStabilityError:
        logger.warning("Спектральный радиус r0 = %r неотличим от 1, τ = inf", r0)
        tau = math.inf

    return StabilityReport(
        jac=tuple(tuple(float(v) for v in row) for row in jac),
        tr=tr,
        m=minors,
        det=det,
        multipliers=roots,
        r0=r0,
        log_r0=math.log(r0) if r0 > 0 else -math.inf,
        tau=tau,
        is_schur=is_schur,
        flags=flags,
        clustered=clustered,
    )


def analyze_fixed_point(model: IgoModel, x: Vector3) -> StabilityReport:
    """Якобиан в неподвижной точке ``x`` и отчёт о его устойчивости."""
    return stability_report(jacobian(model, x))


def polynomial_residuals(roots: Cubic, tr: float, m: float, det: float) -> NDArray[np.float64]:
    """``|P(ρ)| / (1 + |ρ|³)`` для каждого корня характеристического многочлена."""
    return np.array([abs(_poly(r, tr, m, det)) / (1.0 + abs(r) ** 3) for r in roots])

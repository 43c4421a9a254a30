"""Синтез осциллятора с заданным устойчивым 1-циклом.

Процедура по шагам:

1. неподвижная точка ``X`` и выход ``z0`` по объекту и ``(λ, T)``;
2. выбор наклонов ``(F′, Φ′)`` в точке ``z0`` (заданы явно или поиск по сетке),
   проверка трёх условий Шура для замкнутой формы якобиана;
3. точки полуподъёма ``h`` функций Хилла из квадратных уравнений для ``η = (z0/h)^p``;
4. калибровка смещений ``k1``, ``k3`` так, чтобы ``Φ(z0) = T`` и ``F(z0) = λ``;
5. повторное решение полной модели и отчёт об устойчивости.
"""

import logging
import math

import numpy as np

from igo_toolkit.contracts.errors import InfeasibleError, NoStableSlopesError, NumericalError
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.design import (
    DesignOptions,
    DesignResult,
    HillSolveDiagnostics,
    RootChoice,
    SlopeSearch,
)
from igo_toolkit.schemas.model import HillParams, IgoModel, PlantParams
from igo_toolkit.schemas.stability import Slopes
from igo_toolkit.toolkit.cycle import fixed_point, output_z0, solve_one_cycle
from igo_toolkit.toolkit.modulation import f_mod, f_prime, hill_parts, phi, phi_prime
from igo_toolkit.toolkit.stability import (
    affine_invariants,
    analyze_fixed_point,
    jacobian_parts,
    schur_conditions,
    spectral_radius,
)

logger = logging.getLogger(__name__)

THETA_DOUBLE_TOL = 1e-12
ROUNDTRIP_RTOL = 1e-9
REALIZED_RTOL = 1e-6
HILL_BOX_SHRINK = 1.0 - 1e-9


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def feasibility_phi(z0: float, k2: float, p_phi: float, phi_prime: float) -> bool:
    """Реализуем ли наклон ``Φ′`` функцией Хилла: ``p_Φ ≥ 4·z0·Φ′/k2``.

    При ``Φ′ = 0`` уравнение для ``η`` не нужно, наклон ``h`` не ограничивает.
    """
    if phi_prime == 0:
        return True
    if phi_prime < 0:
        return False
    theta = k2 * p_phi / (2.0 * z0 * phi_prime)
    return theta >= 2.0 - THETA_DOUBLE_TOL


def feasibility_f(z0: float, k4: float, p_f: float, f_prime: float) -> bool:
    """Реализуем ли наклон ``F′`` функцией Хилла: ``p_F ≥ −4·z0·F′/k4``."""
    if f_prime == 0:
        return True
    if f_prime > 0:
        return False
    theta = k4 * p_f / (2.0 * z0 * f_prime)
    return theta <= -2.0 + THETA_DOUBLE_TOL


def _diagnostics(
    side: str, z0: float, p: float, theta: float, center: float, disc: float, root: RootChoice
) -> HillSolveDiagnostics:
    if abs(disc) < THETA_DOUBLE_TOL:
        disc = 0.0
    eta_big = center + math.sqrt(max(disc, 0.0))
    # произведение корней равно 1
    eta_small = 1.0 / eta_big
    h_small, h_large = z0 / eta_big ** (1.0 / p), z0 / eta_small ** (1.0 / p)

    if disc == 0.0:
        chosen, eta, h = "double", eta_big, h_small
        reason = "дискриминант равен нулю, корень η единственный"
    elif root == "larger_h":
        chosen, eta, h = root, eta_small, h_large
        reason = "больший h: более пологая модуляция вокруг z0"
    else:
        chosen, eta, h = root, eta_big, h_small
        reason = "меньший h: выбран явно"
    logger.debug("%s: θ = %r, η ∈ {%r, %r}, h = %r", side, theta, eta_big, eta_small, h)
    return HillSolveDiagnostics(
        side=side,
        theta=theta,
        roots=(eta_big, eta_small),
        h_candidates=(h_small, h_large),
        eta=eta,
        h=h,
        chosen_root=chosen,
        reason=reason,
    )


def solve_hill_phi(
    z0: float, k2: float, p_phi: float, phi_prime: float, root: RootChoice = "larger_h"
) -> HillSolveDiagnostics:
    """Найти ``h_Φ`` по наклону: ``η² + 2(1 − θ)η + 1 = 0``, ``θ = k2·p/(2·z0·Φ′)``.

    Raises
    ------
    InfeasibleError
        ``Φ′ ≤ 0`` либо ``p_Φ < 4·z0·Φ′/k2`` (вещественных положительных корней нет).
    """
    if not phi_prime > 0 or not feasibility_phi(z0, k2, p_phi, phi_prime):
        raise InfeasibleError(
            step="hill_phi",
            reason=f"наклон Φ′ = {phi_prime!r} не реализуем при p_Φ = {p_phi!r}, k2 = {k2!r}",
        )
    theta = k2 * p_phi / (2.0 * z0 * phi_prime)
    return _diagnostics("phi", z0, p_phi, theta, theta - 1.0, theta * (theta - 2.0), root)


def solve_hill_f(
    z0: float, k4: float, p_f: float, f_prime: float, root: RootChoice = "larger_h"
) -> HillSolveDiagnostics:
    """Найти ``h_F`` по наклону: ``η² + 2(1 + θ)η + 1 = 0``, ``θ = k4·p/(2·z0·F′) ≤ −2``.

    Raises
    ------
    InfeasibleError
        ``F′ ≥ 0`` либо ``p_F < −4·z0·F′/k4``.
    """
    if not f_prime < 0 or not feasibility_f(z0, k4, p_f, f_prime):
        raise InfeasibleError(
            step="hill_f",
            reason=f"наклон F′ = {f_prime!r} не реализуем при p_F = {p_f!r}, k4 = {k4!r}",
        )
    theta = k4 * p_f / (2.0 * z0 * f_prime)
    return _diagnostics("f", z0, p_f, theta, -(theta + 1.0), theta * (theta + 2.0), root)


def calibrate_offsets(
    z0: float,
    spec: CycleSpec,
    k2: float,
    k4: float,
    h_phi: float,
    p_phi: float,
    h_f: float,
    p_f: float,
) -> tuple[float, float]:
    """Смещения ``k1 = T − k2·η_Φ/(1 + η_Φ)`` и ``k3 = λ − k4/(1 + η_F)``.

    Raises
    ------
    InfeasibleError
        Одно из смещений неположительно: ``T`` или ``λ`` недостижимы при заданных размахах.
    """
    rise, _, _ = hill_parts(z0, h_phi, p_phi)
    _, fall, _ = hill_parts(z0, h_f, p_f)
    k1 = spec.period - k2 * rise
    k3 = spec.lam - k4 * fall
    if k1 <= 0:
        raise InfeasibleError(step="calibrate_offsets", reason=f"k1 = {k1!r} ≤ 0: период T слишком мал для k2")
    if k3 <= 0:
        raise InfeasibleError(step="calibrate_offsets", reason=f"k3 = {k3!r} ≤ 0: вес λ слишком мал для k4")
    return k1, k3


def _grid(lo: float, hi: float, n: int, exclude_zero: bool) -> np.ndarray:
    pts = np.linspace(lo, hi, n) if n > 1 else np.array([hi])
    return pts[pts != 0.0] if exclude_zero else pts


def choose_slopes(plant: PlantParams, spec: CycleSpec, search: SlopeSearch | None = None) -> Slopes:
    """Подобрать наклоны с минимальным спектральным радиусом на прямоугольной сетке.

    Точки проверяются всеми тремя условиями Шура; среди устойчивых выбирается минимум
    ``r0``, при равенстве — меньшая норма ``(F′, Φ′)``. Сетка вычисляется векторно.

    Raises
    ------
    NoStableSlopesError
        Ни одна точка сетки не устойчива.
    """
    search = search or SlopeSearch()
    fs = _grid(search.f_min, search.f_max, search.f_points, search.exclude_zero)
    ps = _grid(search.phi_min, search.phi_max, search.phi_points, search.exclude_zero)
    if fs.size == 0 or ps.size == 0:
        raise NoStableSlopesError(step="choose_slopes", reason="сетка наклонов пуста")

    ff, pp = (a.ravel() for a in np.meshgrid(fs, ps, indexing="ij"))
    tr, det, m = affine_invariants(plant, spec).at(ff, pp)
    c1, c2, c3 = schur_conditions(tr, m, det)
    stable = c1 & c2 & c3
    if not np.any(stable):
        raise NoStableSlopesError(step="choose_slopes", reason=f"все {ff.size} точек сетки неустойчивы")

    idx = np.flatnonzero(stable)
    r0 = spectral_radius(tr[idx], m[idx], det[idx])
    order = np.lexsort((np.hypot(ff[idx], pp[idx]), r0))[0]
    best = idx[order]
    logger.debug("Выбраны наклоны F′ = %r, Φ′ = %r, r0 = %r", ff[best], pp[best], r0[order])
    return Slopes(f_prime=float(ff[best]), phi_prime=float(pp[best]))


def hill_realizable_search(z0: float, options: DesignOptions) -> SlopeSearch:
    """Сетка поиска по умолчанию, обрезанная до наклонов, реализуемых функциями Хилла."""
    base = SlopeSearch()
    f_bound = -options.k4 * options.p_f / (4.0 * z0) * HILL_BOX_SHRINK
    phi_bound = options.k2 * options.p_phi / (4.0 * z0) * HILL_BOX_SHRINK
    return SlopeSearch(
        f_min=max(base.f_min, f_bound),
        f_max=base.f_max,
        f_points=base.f_points,
        phi_min=base.phi_min,
        phi_max=min(base.phi_max, phi_bound),
        phi_points=base.phi_points,
        exclude_zero=True,
    )


def design(plant: PlantParams, spec: CycleSpec, options: DesignOptions) -> DesignResult:
    """Синтезировать модель с заданным 1-циклом ``(λ, T)``.

    Параметры
    ----------
    plant: PlantParams
        Объект управления.
    spec: CycleSpec
        Желаемые вес импульса и период.
    options: DesignOptions
        Показатели и размахи функций Хилла, наклоны или сетка их поиска.

    Raises
    ------
    InfeasibleError, NoStableSlopesError
        С указанием шага в ``step``.
    """
    warnings: list[str] = []

    def warn(msg: str) -> None:
        logger.warning("%s", msg)
        warnings.append(msg)

    # шаг 1: неподвижная точка
    x = fixed_point(plant, spec)
    z0 = float(x[2])
    z0_sum = output_z0(plant, spec)
    if _rel(z0_sum, z0) > ROUNDTRIP_RTOL:
        warn(f"z0 из разложения на дроби {z0_sum!r} отличается от x3 = {z0!r}")
    logger.info("Неподвижная точка X = %s, z0 = %r", x.tolist(), z0)

    # шаг 2: наклоны и условия Шура
    coeffs = affine_invariants(plant, spec)
    if options.slopes is not None:
        slopes = options.slopes
    else:
        slopes = choose_slopes(plant, spec, options.search or hill_realizable_search(z0, options))
    tr, det, m = coeffs.at(slopes.f_prime, slopes.phi_prime)
    c1, c2, c3 = schur_conditions(tr, m, det)
    slopes_stable = bool(c1 and c2 and c3)
    if not slopes_stable:
        if options.require_stable:
            raise NoStableSlopesError(
                step="slopes",
                reason=f"наклоны F′ = {slopes.f_prime!r}, Φ′ = {slopes.phi_prime!r} дают tr = {tr:.6g}, "
                f"det = {det:.6g}, M = {m:.6g} вне области Шура",
            )
        warn(f"Синтез без стабилизации: наклоны дают неустойчивый якобиан (tr = {tr:.6g})")

    # шаг 3: точки полуподъёма функций Хилла
    diag_phi = solve_hill_phi(z0, options.k2, options.p_phi, slopes.phi_prime, options.root)
    diag_f = solve_hill_f(z0, options.k4, options.p_f, slopes.f_prime, options.root)

    # шаг 4: смещения
    k1, k3 = calibrate_offsets(z0, spec, options.k2, options.k4, diag_phi.h, options.p_phi, diag_f.h, options.p_f)
    for name, given, calibrated in (("k1", options.k1, k1), ("k3", options.k3, k3)):
        if given is not None and _rel(calibrated, given) > ROUNDTRIP_RTOL:
            warn(f"Смещение {name} = {given!r} заменено на {calibrated!r} для выполнения Φ(z0) = T, F(z0) = λ")

    hill = HillParams(
        k1=k1, k2=options.k2, k3=k3, k4=options.k4,
        h_phi=diag_phi.h, p_phi=options.p_phi, h_f=diag_f.h, p_f=options.p_f,
    )
    model = IgoModel(plant=plant, hill=hill)

    # шаг 5: проверка реализованного цикла
    checks = (
        ("F(z0)", f_mod(hill, z0), spec.lam),
        ("Φ(z0)", phi(hill, z0), spec.period),
    )
    slope_checks = (
        ("F′(z0)", f_prime(hill, z0), slopes.f_prime),
        ("Φ′(z0)", phi_prime(hill, z0), slopes.phi_prime),
    )
    for name, got, want in checks + slope_checks:
        if _rel(got, want) > ROUNDTRIP_RTOL:
            warn(f"{name} = {got!r} отличается от требуемого {want!r}")

    cycle = solve_one_cycle(model)
    if _rel(cycle.lam, spec.lam) > REALIZED_RTOL or _rel(cycle.period, spec.period) > REALIZED_RTOL:
        raise NumericalError(
            step="verify",
            reason=f"реализованный цикл (λ = {cycle.lam!r}, T = {cycle.period!r}) не совпадает с заданным",
        )

    stability = analyze_fixed_point(model, np.asarray(cycle.x))
    if stability.is_schur != slopes_stable:
        warn("Вердикт устойчивости полной модели расходится с замкнутой формой")

    parts = jacobian_parts(plant, spec)
    gain = slopes.f_prime * np.asarray(parts.j) + slopes.phi_prime * np.asarray(parts.d)
    if np.any(gain > 0):
        warn(f"Вектор усиления K = {gain.tolist()} имеет положительные компоненты")

    logger.info("Синтез завершён: h_Φ = %r, h_F = %r, k1 = %r, k3 = %r, r0 = %r",
                diag_phi.h, diag_f.h, k1, k3, stability.r0)
    return DesignResult(
        model=model,
        slopes=slopes,
        cycle=cycle,
        stability=stability,
        diagnostics=(diag_phi, diag_f),
        gain=(float(gain[0]), float(gain[1]), float(gain[2])),
        warnings=tuple(warnings),
        stabilized=stability.is_schur,
    )

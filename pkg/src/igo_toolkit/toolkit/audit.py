"""Сверка эталонного численного примера с пересчётом.

Каждое эталонное значение пересчитывается изолированно (остальные величины
берутся тоже эталонными), поэтому расхождение одной строки не тянет за собой
другие. Результат — таблица ``AuditRow``; команда ``check`` её печатает и не падает.
"""

import logging
import math

from igo_toolkit.schemas.audit import AuditRow
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.model import HillParams, PlantParams
from igo_toolkit.toolkit.cycle import fixed_point, output_z0
from igo_toolkit.toolkit.design import feasibility_f, feasibility_phi, solve_hill_f, solve_hill_phi
from igo_toolkit.toolkit.matfun import dd1, dd2, exp_dd1, exp_dd2, mu
from igo_toolkit.toolkit.modulation import f_mod, f_prime, phi, phi_prime
from igo_toolkit.toolkit.stability import affine_invariants

logger = logging.getLogger(__name__)

REFERENCE_PLANT = PlantParams(a1=0.08, a2=0.15, a3=0.12, g1=2.0, g2=0.5)
REFERENCE_SPEC = CycleSpec(lam=4.66, period=66.75)
REFERENCE_X = (0.0225, 0.6360, 6.8330)
REFERENCE_TR = (0.0052, 1.4574, -0.5020)
REFERENCE_DET = (7.1410e-11, 0.0, -0.172e-14)
REFERENCE_M = (2.1528e-7, -0.1251e-4, 0.1460e-4)
REFERENCE_SLOPES = (-0.1143, 2.2852)
REFERENCE_H = 4.112
REFERENCE_K = (60.0, 40.0, 3.0, 2.0)
REFERENCE_P = 2.0
# Φ′ со сдвигом запятой, при котором граница |tr| < 1 выполняется
SHIFTED_PHI_PRIME = 0.22852


def _value_row(quantity: str, printed: float, computed: float, tolerance: float, note: str = "") -> AuditRow:
    scale = abs(printed) if printed else 1.0
    ok = abs(computed - printed) <= tolerance * scale
    return AuditRow(
        quantity=quantity,
        printed=printed,
        computed=float(computed),
        tolerance=tolerance,
        status="match" if ok else "mismatch",
        note=note,
    )


def _claim_row(quantity: str, holds: bool, note: str = "") -> AuditRow:
    """Строка для логического утверждения: заявлено «выполнено» (1), пересчёт 1 или 0."""
    return AuditRow(
        quantity=quantity,
        printed=1.0,
        computed=1.0 if holds else 0.0,
        tolerance=0.0,
        status="match" if holds else "mismatch",
        note=note,
    )


def _fixed_point_rows(plant: PlantParams, spec: CycleSpec) -> list[AuditRow]:
    x = fixed_point(plant, spec)
    rows = [
        _value_row(f"X[{i}]", printed, x[i], 0.01, "прямое решение (e^{-AT} - I)X = λB")
        for i, printed in enumerate(REFERENCE_X)
    ]
    rows.append(_value_row("z0", REFERENCE_X[2], output_z0(plant, spec), 0.01, "разложение на простые дроби"))

    # обе эталонные записи x2 и x3 через разделённые разности
    t, lam = spec.period, spec.lam
    n1, n2, n3 = -plant.a1 * t, -plant.a2 * t, -plant.a3 * t
    q1, q2, q3 = -math.expm1(n1), -math.expm1(n2), -math.expm1(n3)
    x2_mu = lam * plant.g1 * t * dd1(mu, n1, n2)
    x2_exp = lam * plant.g1 * t * exp_dd1(n1, n2) / (q1 * q2)
    x3_mu = lam * plant.g1 * plant.g2 * t * t * dd2(mu, n1, n2, n3)
    x3_exp = (
        lam * plant.g1 * plant.g2 * t * t / (q1 * q2 * q3)
        * (exp_dd2(n1, n2, n3) + exp_dd2(n1 + n2, n1 + n3, n2 + n3))
    )
    rows += [
        _value_row("x2: λ·g1·T·μ[n1,n2]", float(x[1]), x2_mu, 1e-9, "сверка с прямым решением"),
        _value_row("x2: через e[n1,n2]", float(x[1]), x2_exp, 1e-9, "сверка с прямым решением"),
        _value_row("x3: λ·g1·g2·T²·μ[n1,n2,n3]", float(x[2]), x3_mu, 1e-9, "сверка с прямым решением"),
        _value_row("x3: через e[n1,n2,n3] + e[попарные суммы]", float(x[2]), x3_exp, 1e-9, "сверка с прямым решением"),
    ]
    return rows


def _invariant_rows(plant: PlantParams, spec: CycleSpec) -> list[AuditRow]:
    inv = affine_invariants(plant, spec)
    psi1, psi2 = inv.m[1], inv.m[2]
    m_const = inv.m[0]
    return [
        _value_row("tr: свободный член", REFERENCE_TR[0], inv.tr[0], 0.02, "tr e^{AT}"),
        _value_row("tr: коэффициент при F′", REFERENCE_TR[1], inv.tr[1], 0.005, "J3"),
        _value_row("tr: коэффициент при Φ′", REFERENCE_TR[2], inv.tr[2], 0.005, "D3"),
        _value_row("det: свободный член", REFERENCE_DET[0], inv.det[0], 0.01, "e^{-(a1+a2+a3)T}"),
        _value_row("det: коэффициент при Φ′", REFERENCE_DET[2], inv.det[2], 0.01, "det e^{AT}·C·e^{-AT}·D"),
        _value_row(
            "M: свободный член", REFERENCE_M[0], m_const, 0.01,
            "сумма попарных произведений диагонали e^{AT}; совпадает лишь первое слагаемое",
        ),
        _value_row("M: коэффициент при F′ (ψ1)", REFERENCE_M[1], psi1, 0.01),
        _value_row("M: коэффициент при Φ′ (ψ2)", REFERENCE_M[2], psi2, 0.01),
        _claim_row(
            "M > 0 при F′ ≤ 0 ≤ Φ′",
            m_const > 0 and psi1 <= 0 <= psi2,
            f"ψ1 = {psi1:.6g}, ψ2 = {psi2:.6g}",
        ),
    ]


def _bound_rows(plant: PlantParams, spec: CycleSpec) -> list[AuditRow]:
    inv = affine_invariants(plant, spec)
    fp, pp = REFERENCE_SLOPES
    tr, _, _ = inv.at(fp, pp)
    tr_shifted, _, _ = inv.at(fp, SHIFTED_PHI_PRIME)
    return [
        _claim_row("|tr| < 1 при эталонных наклонах", abs(tr) < 1.0, f"tr = {tr:.6g}"),
        _claim_row(
            f"|tr| < 1 при Φ′ = {SHIFTED_PHI_PRIME}", abs(tr_shifted) < 1.0, f"tr = {tr_shifted:.6g}"
        ),
    ]


def _hill_rows() -> list[AuditRow]:
    z0 = REFERENCE_X[2]
    k1, k2, k3, k4 = REFERENCE_K
    fp, pp = REFERENCE_SLOPES
    hill = HillParams(
        k1=k1, k2=k2, k3=k3, k4=k4, h_phi=REFERENCE_H, p_phi=REFERENCE_P, h_f=REFERENCE_H, p_f=REFERENCE_P
    )
    h_phi = solve_hill_phi(z0, k2, REFERENCE_P, pp, root="smaller_h")
    h_f = solve_hill_f(z0, k4, REFERENCE_P, fp, root="smaller_h")
    pf_bound = -4.0 * z0 * fp / k4
    pphi_bound = 4.0 * z0 * pp / k2
    return [
        _value_row("h_Φ", REFERENCE_H, h_phi.h, 0.001, "меньший корень квадратного уравнения"),
        _value_row("h_F", REFERENCE_H, h_f.h, 0.002, "меньший корень квадратного уравнения"),
        _value_row("Φ′(z0) при h = 4.112", pp, phi_prime(hill, z0), 0.005),
        _value_row("F′(z0) при h = 4.112", fp, f_prime(hill, z0), 0.005),
        _value_row("Φ(z0) = T при k1 = 60", REFERENCE_SPEC.period, phi(hill, z0), 0.01),
        _value_row("F(z0) = λ при k3 = 3", REFERENCE_SPEC.lam, f_mod(hill, z0), 0.01),
        _claim_row(
            "p_Φ > 4·z0·Φ′/k2",
            REFERENCE_P > pphi_bound,
            f"граница {pphi_bound:.6g}; реализуемость: {feasibility_phi(z0, k2, REFERENCE_P, pp)}",
        ),
        _claim_row(
            "0 < p_F < −4·z0·F′/k4",
            0 < REFERENCE_P < pf_bound,
            f"граница {pf_bound:.6g}; выполняется обратное p_F ≥ границы: {feasibility_f(z0, k4, REFERENCE_P, fp)}",
        ),
    ]


def run_audit() -> list[AuditRow]:
    """Пересчитать все величины эталонного примера и вернуть таблицу сверки."""
    plant, spec = REFERENCE_PLANT, REFERENCE_SPEC
    rows = [
        *_fixed_point_rows(plant, spec),
        *_invariant_rows(plant, spec),
        *_bound_rows(plant, spec),
        *_hill_rows(),
    ]
    mismatches = [r.quantity for r in rows if r.status == "mismatch"]
    logger.info("Сверка: %d строк, расхождений %d", len(rows), len(mismatches))
    if mismatches:
        logger.debug("Расхождения: %s", ", ".join(mismatches))
    return rows


def audit_summary(rows: list[AuditRow]) -> str:
    """Таблица сверки в текстовом виде для вывода в консоль."""
    width = max(len(r.quantity) for r in rows)
    lines = [f"{'величина':<{width}}  {'опубл.':>12}  {'пересчёт':>12}  {'откл.':>9}  статус"]
    for r in rows:
        lines.append(
            f"{r.quantity:<{width}}  {r.printed:>12.5g}  {r.computed:>12.5g}  {r.rel_error:>9.2e}  {r.status}"
            + (f"  ({r.note})" if r.note else "")
        )
    return "\n".join(lines)

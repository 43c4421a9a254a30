"""Общие фикстуры: эталонный пример, синтезированные модели и генератор объектов."""

import json
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from igo_toolkit.schemas.bifurcation import SweepBase
from igo_toolkit.schemas.cycle import CycleSpec
from igo_toolkit.schemas.design import DesignOptions, DesignResult
from igo_toolkit.schemas.model import PlantParams
from igo_toolkit.schemas.stability import Slopes
from igo_toolkit.toolkit.design import design

REFERENCE_PLANT = PlantParams(a1=0.08, a2=0.15, a3=0.12, g1=2.0, g2=0.5)
REFERENCE_SPEC = CycleSpec(lam=4.66, period=66.75)


@pytest.fixture(scope="session")
def reference_plant() -> PlantParams:
    return REFERENCE_PLANT


@pytest.fixture(scope="session")
def reference_spec() -> CycleSpec:
    return REFERENCE_SPEC


@pytest.fixture(scope="session")
def fast_design() -> DesignResult:
    """Устойчивый синтез с r0 ≈ 0.28 (Φ′ со сдвигом запятой, корень с большим h)."""
    options = DesignOptions(k2=40.0, k4=2.0, slopes=Slopes(f_prime=-0.1143, phi_prime=0.22852))
    return design(REFERENCE_PLANT, REFERENCE_SPEC, options)


@pytest.fixture(scope="session")
def slow_design() -> DesignResult:
    """Устойчивый синтез с r0 ≈ 0.9: медленное знакопеременное затухание весов."""
    options = DesignOptions(k2=40.0, k4=2.0, slopes=Slopes(f_prime=-0.1143, phi_prime=1.47))
    return design(REFERENCE_PLANT, REFERENCE_SPEC, options)


@pytest.fixture(scope="session")
def sweep_base() -> SweepBase:
    return SweepBase(a1=0.08, a2=0.15, g1=2.0, g2=0.5, k1=60.0, k2=40.0, k3=3.0, k4=2.0, p=2.0)


@pytest.fixture(scope="session")
def sweep_spec() -> CycleSpec:
    return CycleSpec(lam=4.66, period=66.7502)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_plant() -> Callable[[np.random.Generator], PlantParams]:
    """Случайный объект со скоростями распада, разнесёнными не менее чем на 0.02."""

    def make(rng: np.random.Generator) -> PlantParams:
        while True:
            a = rng.uniform(0.05, 1.0, size=3)
            gaps = np.abs(np.subtract.outer(a, a))[np.triu_indices(3, 1)]
            if gaps.min() >= 0.02:
                break
        g = rng.uniform(0.1, 3.0, size=2)
        return PlantParams(a1=a[0], a2=a[1], a3=a[2], g1=g[0], g2=g[1])

    return make


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[dict, str], Path]:
    """Записать JSON-конфигурацию во временный каталог."""

    def write(payload: dict, name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return write


@pytest.fixture(scope="session")
def printed_design() -> DesignResult:
    """Синтез с эталонными наклонами: цикл существует, но неустойчив (r0 ≈ 1.31)."""
    options = DesignOptions(
        k2=40.0,
        k4=2.0,
        k1=60.0,
        k3=3.0,
        slopes=Slopes(f_prime=-0.1143, phi_prime=2.2852),
        root="smaller_h",
        require_stable=False,
    )
    return design(REFERENCE_PLANT, REFERENCE_SPEC, options)

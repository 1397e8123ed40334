import dataclasses

import pytest

from cavityspdc.materials import (DispersionModel, SellmeierSet,
                                  ThermalExpansion, builtin_material)
from cavityspdc.phasematch import PmType
from cavityspdc.sweep import SourceSettings
from cavityspdc.units import wavelength_to_omega

T_ROOM = 298.15  # 25 C


@pytest.fixture(scope="session")
def mgo() -> DispersionModel:
    return builtin_material("mgo_ppln")


def _settings(pm: PmType, pump_nm: float, signal_omega: float,
              ratio: float = 0.4, joint: float = 10e-3,
              delay: float = 0.0) -> SourceSettings:
    return SourceSettings(
        material=builtin_material("mgo_ppln"), pm=pm,
        pump_omega=wavelength_to_omega(pump_nm * 1e-9),
        signal_omega=signal_omega, joint_length=joint, length_ratio=ratio,
        air_path=31e-3, temperature=T_ROOM, idler_delay=delay)


@pytest.fixture(scope="session")
def nondeg_settings() -> SourceSettings:
    """Highly non-degenerate source: 519 nm -> 780.24 nm + ~1550 nm."""
    return _settings(PmType.type2(), 519.0,
                     wavelength_to_omega(780.24e-9))


@pytest.fixture(scope="session")
def nondeg_type0_settings() -> SourceSettings:
    return _settings(PmType.type0(), 519.0,
                     wavelength_to_omega(780.24e-9))


@pytest.fixture(scope="session")
def neardeg_settings() -> SourceSettings:
    """Near-degenerate source: 775 nm pump, 1550 nm +- 40 MHz."""
    pump_omega = wavelength_to_omega(775e-9)
    import math
    return _settings(PmType.type2(), 775.0,
                     pump_omega / 2 + math.pi * 80e6)


@pytest.fixture(scope="session")
def neardeg_type0_settings() -> SourceSettings:
    pump_omega = wavelength_to_omega(775e-9)
    import math
    return _settings(PmType.type0(), 775.0,
                     pump_omega / 2 + math.pi * 80e6)


@pytest.fixture(scope="session")
def nondeg_cfg(nondeg_settings):
    return nondeg_settings.to_config()


@pytest.fixture(scope="session")
def neardeg_cfg(neardeg_settings):
    return neardeg_settings.to_config()


def replace_settings(settings: SourceSettings, **kw) -> SourceSettings:
    return dataclasses.replace(settings, **kw)


def toy_material(temperature_independent: bool = True,
                 expansion: float = 0.0) -> DispersionModel:
    """MgO:PPLN's extraordinary Sellmeier terms on both axes, optionally with
    all thermo-optic coefficients zeroed, as a controllable toy."""
    base = builtin_material("mgo_ppln").extraordinary
    if temperature_independent:
        base = dataclasses.replace(base, b1=0.0, b2=0.0, b3=0.0, b4=0.0)
    return DispersionModel(
        name="toy", reference="synthetic test model",
        ordinary=base, extraordinary=base,
        expansion=ThermalExpansion(expansion, 0.0, T_ROOM),
        wavelength_range_m=(4e-7, 5e-6),
        temperature_range_k=(250.0, 500.0))

"""Crystal dispersion models.

Supplies ordinary/extraordinary refractive indices with analytic frequency and
temperature derivatives, plus poling-period (and crystal length) thermal
expansion.  Coefficients live in JSON data files, one per material, so users
can substitute corrected or alternative published sets without touching code.

The supported dispersion formula is the thermally corrected Sellmeier form
used by the common lithium-niobate references (Jundt 1997; Gayer et al. 2008):

    n^2 = g1 + g2/(lam^2 - g3^2) + g4/(lam^2 - a5^2) - a6 lam^2
    gi  = ai + bi f,   f = (T_C - 24.5)(T_C + 570.82)

with lam the vacuum wavelength in micrometers and T_C the crystal temperature
in degrees Celsius.  The public API accepts wavelengths in meters and
temperatures in Kelvin; angular frequency (rad/s) is the canonical internal
variable for all derivative operations.

All derivatives are analytic (differentiating the Sellmeier form); the test
suite checks them against central finite differences.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import MaterialFileError, OutOfValidityRange
from .units import C_LIGHT, kelvin_to_celsius, omega_to_wavelength

try:  # Python 3.11+
    from enum import StrEnum as _AxisBase
except ImportError:  # pragma: no cover
    from enum import Enum

    class _AxisBase(str, Enum):
        pass


class Axis(_AxisBase):
    """Birefringent polarization axis of a uniaxial crystal."""

    ORDINARY = "ordinary"
    EXTRAORDINARY = "extraordinary"


_SELLMEIER_KEYS = ("a1", "a2", "a3", "a4", "a5", "a6", "b1", "b2", "b3", "b4")


@dataclass(frozen=True)
class SellmeierSet:
    """One axis worth of thermally corrected Sellmeier coefficients."""

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    b1: float
    b2: float
    b3: float
    b4: float

    def _terms(self, lam_um: float, t_c: float):
        f = (t_c - 24.5) * (t_c + 570.82)
        g1 = self.a1 + self.b1 * f
        g2 = self.a2 + self.b2 * f
        g3 = self.a3 + self.b3 * f
        g4 = self.a4 + self.b4 * f
        u = lam_um * lam_um - g3 * g3
        v = lam_um * lam_um - self.a5 * self.a5
        return g1, g2, g3, g4, u, v

    def n_squared(self, lam_um: float, t_c: float) -> float:
        g1, g2, _, g4, u, v = self._terms(lam_um, t_c)
        return g1 + g2 / u + g4 / v - self.a6 * lam_um * lam_um

    def dn2_dlam(self, lam_um: float, t_c: float) -> float:
        """d(n^2)/d(lambda), lambda in micrometers."""
        _, g2, _, g4, u, v = self._terms(lam_um, t_c)
        return -2.0 * lam_um * (g2 / u**2 + g4 / v**2 + self.a6)

    def d2n2_dlam2(self, lam_um: float, t_c: float) -> float:
        _, g2, _, g4, u, v = self._terms(lam_um, t_c)
        lam2 = lam_um * lam_um
        return (-2.0 * (g2 / u**2 + g4 / v**2 + self.a6)
                + 8.0 * lam2 * (g2 / u**3 + g4 / v**3))

    def dn2_dt(self, lam_um: float, t_c: float) -> float:
        """d(n^2)/dT, T in Kelvin (== per degree Celsius)."""
        _, g2, g3, _, u, v = self._terms(lam_um, t_c)
        df_dt = 2.0 * t_c + 546.32
        ds_df = (self.b1 + self.b2 / u + 2.0 * g2 * g3 * self.b3 / u**2
                 + self.b4 / v)
        return ds_df * df_dt


@dataclass(frozen=True)
class ThermalExpansion:
    """Lattice expansion: x(T) = x_ref (1 + a dT + b dT^2), dT from reference."""

    linear_per_k: float
    quadratic_per_k2: float
    reference_temperature_k: float

    def factor(self, temperature_k: float) -> float:
        dt = temperature_k - self.reference_temperature_k
        return 1.0 + self.linear_per_k * dt + self.quadratic_per_k2 * dt * dt

    def rate(self, temperature_k: float) -> float:
        """d(factor)/dT at the given temperature (1/K)."""
        dt = temperature_k - self.reference_temperature_k
        return self.linear_per_k + 2.0 * self.quadratic_per_k2 * dt


@dataclass(frozen=True)
class DispersionModel:
    """A registered crystal material.

    Evaluation outside the validity box raises OutOfValidityRange rather than
    extrapolating.  Instances are immutable and safe to share across workers.
    """

    name: str
    reference: str
    ordinary: SellmeierSet
    extraordinary: SellmeierSet
    expansion: ThermalExpansion
    wavelength_range_m: tuple[float, float]
    temperature_range_k: tuple[float, float]

    # -- validity ----------------------------------------------------------
    def check_validity(self, axis: Axis, wavelength_m: float,
                       temperature_k: float) -> None:
        lo, hi = self.wavelength_range_m
        tlo, thi = self.temperature_range_k
        if not (lo <= wavelength_m <= hi) or not (tlo <= temperature_k <= thi):
            raise OutOfValidityRange(self.name, axis.value, wavelength_m,
                                     temperature_k)

    def _axis_set(self, axis: Axis) -> SellmeierSet:
        return self.ordinary if axis == Axis.ORDINARY else self.extraordinary

    # -- index and wavelength-domain derivatives ----------------------------
    def refractive_index(self, axis: Axis, wavelength_m: float,
                         temperature_k: float) -> float:
        """n(axis, lambda, T); lambda in m, T in K."""
        self.check_validity(axis, wavelength_m, temperature_k)
        coeffs = self._axis_set(axis)
        return math.sqrt(coeffs.n_squared(wavelength_m * 1e6,
                                          kelvin_to_celsius(temperature_k)))

    def _lambda_derivs(self, axis: Axis, wavelength_m: float,
                       temperature_k: float):
        """(n, dn/dlam, d2n/dlam2) with lambda in meters."""
        coeffs = self._axis_set(axis)
        lam_um = wavelength_m * 1e6
        t_c = kelvin_to_celsius(temperature_k)
        s = coeffs.n_squared(lam_um, t_c)
        sp = coeffs.dn2_dlam(lam_um, t_c) * 1e6          # per meter
        spp = coeffs.d2n2_dlam2(lam_um, t_c) * 1e12
        n = math.sqrt(s)
        dn = sp / (2.0 * n)
        d2n = spp / (2.0 * n) - sp * sp / (4.0 * n**3)
        return n, dn, d2n

    # -- frequency-domain derivatives ---------------------------------------
    def index_derivative_omega(self, axis: Axis, omega: float,
                               temperature_k: float) -> float:
        """dn/d(omega) in s/rad."""
        lam = omega_to_wavelength(omega)
        self.check_validity(axis, lam, temperature_k)
        _, dn_dlam, _ = self._lambda_derivs(axis, lam, temperature_k)
        return dn_dlam * (-lam / omega)

    def index_second_derivative_omega(self, axis: Axis, omega: float,
                                      temperature_k: float) -> float:
        """d2n/d(omega)^2 in s^2/rad^2."""
        lam = omega_to_wavelength(omega)
        self.check_validity(axis, lam, temperature_k)
        _, dn_dlam, d2n_dlam2 = self._lambda_derivs(axis, lam, temperature_k)
        # lambda(omega) = 2 pi c / omega: lam' = -lam/omega, lam'' = 2 lam/omega^2
        return (d2n_dlam2 * (lam / omega) ** 2
                + dn_dlam * (2.0 * lam / omega**2))

    def index_derivative_temperature(self, axis: Axis, omega: float,
                                     temperature_k: float) -> float:
        """dn/dT in 1/K at fixed frequency."""
        lam = omega_to_wavelength(omega)
        self.check_validity(axis, lam, temperature_k)
        coeffs = self._axis_set(axis)
        lam_um = lam * 1e6
        t_c = kelvin_to_celsius(temperature_k)
        n = math.sqrt(coeffs.n_squared(lam_um, t_c))
        return coeffs.dn2_dt(lam_um, t_c) / (2.0 * n)

    def group_index(self, axis: Axis, omega: float,
                    temperature_k: float) -> float:
        """n_g = n + omega dn/domega."""
        lam = omega_to_wavelength(omega)
        self.check_validity(axis, lam, temperature_k)
        n, dn_dlam, _ = self._lambda_derivs(axis, lam, temperature_k)
        return n + omega * dn_dlam * (-lam / omega)

    def group_index_derivative_omega(self, axis: Axis, omega: float,
                                     temperature_k: float) -> float:
        """d(n_g)/d(omega) = 2 n' + omega n'' in s/rad."""
        return (2.0 * self.index_derivative_omega(axis, omega, temperature_k)
                + omega * self.index_second_derivative_omega(
                    axis, omega, temperature_k))

    # -- thermal expansion ---------------------------------------------------
    def poled_period(self, period_at_reference_m: float,
                     temperature_k: float) -> float:
        """Poling period at temperature T for a period specified at T_ref."""
        tlo, thi = self.temperature_range_k
        if not (tlo <= temperature_k <= thi):
            raise OutOfValidityRange(self.name, "poling", float("nan"),
                                     temperature_k)
        return period_at_reference_m * self.expansion.factor(temperature_k)

    def expanded_length(self, length_at_reference_m: float,
                        temperature_k: float) -> float:
        """Crystal length at temperature T (same lattice expansion as poling)."""
        return length_at_reference_m * self.expansion.factor(temperature_k)


# ---------------------------------------------------------------------------
# Coefficient file handling.  Parsing is strict: unknown keys are rejected so
# that a typo in a unit-laden field cannot silently change the physics.
# ---------------------------------------------------------------------------

_FORMULA_ID = "sellmeier_f_thermal"


def _require_keys(mapping: dict, required: tuple, context: str) -> None:
    missing = [k for k in required if k not in mapping]
    unknown = [k for k in mapping if k not in required]
    if missing:
        raise MaterialFileError(f"{context}: missing keys {missing}")
    if unknown:
        raise MaterialFileError(f"{context}: unknown keys {unknown}")


def _float_field(mapping: dict, key: str, context: str) -> float:
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MaterialFileError(f"{context}: field '{key}' must be a number")
    return float(value)


def _parse_sellmeier(mapping: dict, context: str) -> SellmeierSet:
    _require_keys(mapping, _SELLMEIER_KEYS, context)
    return SellmeierSet(**{k: _float_field(mapping, k, context)
                           for k in _SELLMEIER_KEYS})


def loads_material(document: dict) -> DispersionModel:
    """Build a DispersionModel from an already-parsed JSON document."""
    _require_keys(document, ("name", "formula", "reference", "axes",
                             "thermal_expansion", "validity"), "material")
    if document["formula"] != _FORMULA_ID:
        raise MaterialFileError(
            f"unsupported dispersion formula {document['formula']!r}; "
            f"this build understands {_FORMULA_ID!r}")
    axes = document["axes"]
    _require_keys(axes, ("ordinary", "extraordinary"), "axes")
    expansion = document["thermal_expansion"]
    _require_keys(expansion, ("linear_per_k", "quadratic_per_k2",
                              "reference_temperature_k"), "thermal_expansion")
    validity = document["validity"]
    _require_keys(validity, ("wavelength_m", "temperature_k"), "validity")
    for key in ("wavelength_m", "temperature_k"):
        rng = validity[key]
        if (not isinstance(rng, list) or len(rng) != 2
                or not all(isinstance(x, (int, float)) for x in rng)
                or not rng[0] < rng[1]):
            raise MaterialFileError(
                f"validity.{key} must be an increasing [min, max] pair")
    return DispersionModel(
        name=str(document["name"]),
        reference=str(document["reference"]),
        ordinary=_parse_sellmeier(axes["ordinary"], "axes.ordinary"),
        extraordinary=_parse_sellmeier(axes["extraordinary"],
                                       "axes.extraordinary"),
        expansion=ThermalExpansion(
            linear_per_k=_float_field(expansion, "linear_per_k",
                                      "thermal_expansion"),
            quadratic_per_k2=_float_field(expansion, "quadratic_per_k2",
                                          "thermal_expansion"),
            reference_temperature_k=_float_field(expansion,
                                                 "reference_temperature_k",
                                                 "thermal_expansion"),
        ),
        wavelength_range_m=tuple(float(x) for x in validity["wavelength_m"]),
        temperature_range_k=tuple(float(x) for x in validity["temperature_k"]),
    )


def dumps_material(model: DispersionModel) -> dict:
    """Inverse of loads_material; round-trips bit-identically through JSON."""
    def coeffs(s: SellmeierSet) -> dict:
        return {k: getattr(s, k) for k in _SELLMEIER_KEYS}

    return {
        "name": model.name,
        "formula": _FORMULA_ID,
        "reference": model.reference,
        "axes": {"ordinary": coeffs(model.ordinary),
                 "extraordinary": coeffs(model.extraordinary)},
        "thermal_expansion": {
            "linear_per_k": model.expansion.linear_per_k,
            "quadratic_per_k2": model.expansion.quadratic_per_k2,
            "reference_temperature_k": model.expansion.reference_temperature_k,
        },
        "validity": {
            "wavelength_m": list(model.wavelength_range_m),
            "temperature_k": list(model.temperature_range_k),
        },
    }


def load_material(path: str | Path) -> DispersionModel:
    """Load a material coefficient file (strict JSON schema)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MaterialFileError(f"cannot read material file {path}: {exc}")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MaterialFileError(f"{path} is not valid JSON: {exc}")
    if not isinstance(document, dict):
        raise MaterialFileError(f"{path}: top level must be an object")
    return loads_material(document)


def _builtin_dir():
    return resources.files("cavityspdc") / "data"


def builtin_material_names() -> list[str]:
    return sorted(p.name[:-5] for p in _builtin_dir().iterdir()
                  if p.name.endswith(".json"))


def builtin_material(name: str = "mgo_ppln") -> DispersionModel:
    """Load one of the coefficient sets shipped with the package."""
    candidate = _builtin_dir() / f"{name}.json"
    try:
        text = candidate.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MaterialFileError(
            f"no builtin material {name!r}; available: "
            f"{builtin_material_names()}")
    return loads_material(json.loads(text))


def material_sha256(name_or_path: str | Path) -> str:
    """Hash of the coefficient file bytes, for output provenance headers."""
    path = Path(name_or_path)
    if not path.exists():
        blob = (_builtin_dir() / f"{name_or_path}.json").read_bytes()
    else:
        blob = path.read_bytes()
    return hashlib.sha256(blob).hexdigest()

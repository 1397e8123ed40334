"""Quasi-phase-matching and SPDC bandwidth for one periodically poled crystal.

Conventions
-----------
Phase mismatch is defined as

    dk = (n_s w_s + n_i w_i - n_p w_p)/c + 2 pi / Lambda(T)

with the indices taken along the axes assigned by the PM type.  For normal
dispersion the bare wavevector sum (k_s + k_i - k_p) is negative, so the
grating contribution enters with the compensating sign and the solved poling
period is the unique positive root of dk = 0.  Everything downstream depends
on dk only through sinc^2(dk l/2), which is even, so the overall sign
convention is immaterial.

The SPDC amplitude of a crystal of length l goes as sinc^2(dk l_eff / 2); in a
standing-wave cavity the pump traverses each crystal twice per round trip and
l_eff is twice the crystal length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from scipy.optimize import brentq

from .errors import DegenerateSlope, NoPositivePeriod, ValidationError
from .materials import Axis, DispersionModel
from .units import C_LIGHT, TWO_PI

#: Half width at half maximum of sinc^2 in its natural argument:
#: sinc(xi)^2 = 1/2 at xi = 1.391557 (the usual "~1.39").
XI_HWHM = 1.391557


class PmKind(Enum):
    TYPE_0 = "type0"
    TYPE_I = "type1"
    TYPE_II = "type2"


@dataclass(frozen=True)
class PmType:
    """Phase-matching configuration: kind plus pump/signal/idler axis map.

    Axes are local to the crystal in which the SPDC process happens; the
    second crystal of a two-crystal source runs the identical local process
    in its own (rotated) frame.
    """

    kind: PmKind
    pump: Axis
    signal: Axis
    idler: Axis

    def __post_init__(self):
        if self.kind == PmKind.TYPE_0:
            if not (self.pump == self.signal == self.idler):
                raise ValidationError("type-0 PM requires one common axis")
        elif self.kind == PmKind.TYPE_I:
            if self.signal != self.idler or self.pump == self.signal:
                raise ValidationError(
                    "type-I PM requires co-polarized photons orthogonal to "
                    "the pump")
        else:
            if self.signal == self.idler:
                raise ValidationError(
                    "type-II PM requires orthogonal signal/idler axes")

    @staticmethod
    def type0() -> "PmType":
        return PmType(PmKind.TYPE_0, Axis.ORDINARY, Axis.ORDINARY,
                      Axis.ORDINARY)

    @staticmethod
    def type1() -> "PmType":
        return PmType(PmKind.TYPE_I, Axis.EXTRAORDINARY, Axis.ORDINARY,
                      Axis.ORDINARY)

    @staticmethod
    def type2() -> "PmType":
        return PmType(PmKind.TYPE_II, Axis.ORDINARY, Axis.ORDINARY,
                      Axis.EXTRAORDINARY)

    @staticmethod
    def from_name(name: str) -> "PmType":
        table = {"type0": PmType.type0, "type1": PmType.type1,
                 "type2": PmType.type2}
        if name not in table:
            raise ValidationError(f"unknown PM type {name!r}; "
                                  f"expected one of {sorted(table)}")
        return table[name]()


@dataclass(frozen=True)
class CrystalSpec:
    """One nonlinear crystal.

    length and poling_period are specified at the material's expansion
    reference temperature; evaluation at the operating temperature applies
    the lattice expansion.
    """

    material: DispersionModel
    length: float          # m, at reference temperature
    poling_period: float   # m, at reference temperature
    temperature: float     # K, operating point

    def __post_init__(self):
        if self.length < 0:
            raise ValidationError("crystal length must be >= 0")
        if self.poling_period <= 0:
            raise ValidationError("poling period must be > 0")

    def length_at_temperature(self) -> float:
        return self.material.expanded_length(self.length, self.temperature)

    def period_at_temperature(self) -> float:
        return self.material.poled_period(self.poling_period,
                                          self.temperature)


@dataclass(frozen=True)
class SpdcProcess:
    """A pump -> signal + idler process in a single crystal.

    Energy conservation is enforced at construction: the idler frequency is
    derived from pump and signal, never stored independently.
    """

    pump_omega: float     # rad/s
    signal_omega: float   # rad/s
    crystal: CrystalSpec
    pm: PmType
    passes_per_roundtrip: int = 2
    idler_omega: float = field(init=False)

    def __post_init__(self):
        if not (0 < self.signal_omega < self.pump_omega):
            raise ValidationError(
                "need 0 < signal frequency < pump frequency")
        if self.passes_per_roundtrip not in (1, 2):
            raise ValidationError("passes_per_roundtrip must be 1 or 2")
        object.__setattr__(self, "idler_omega",
                           self.pump_omega - self.signal_omega)

    @property
    def effective_length(self) -> float:
        """Interaction length entering the sinc argument (m)."""
        return self.passes_per_roundtrip * self.crystal.length_at_temperature()

    def _index(self, axis: Axis, omega: float) -> float:
        lam = TWO_PI * C_LIGHT / omega
        return self.crystal.material.refractive_index(
            axis, lam, self.crystal.temperature)

    def _group_index(self, axis: Axis, omega: float) -> float:
        return self.crystal.material.group_index(axis, omega,
                                                 self.crystal.temperature)


def wave_sum(proc: SpdcProcess, signal_omega: float | None = None) -> float:
    """(k_s + k_i - k_p) in rad/m at the process axes.

    signal_omega optionally detunes the signal; the idler follows by energy
    conservation.
    """
    w_s = proc.signal_omega if signal_omega is None else signal_omega
    w_i = proc.pump_omega - w_s
    n_s = proc._index(proc.pm.signal, w_s)
    n_i = proc._index(proc.pm.idler, w_i)
    n_p = proc._index(proc.pm.pump, proc.pump_omega)
    return (n_s * w_s + n_i * w_i - n_p * proc.pump_omega) / C_LIGHT


def phase_mismatch(proc: SpdcProcess,
                   signal_omega: float | None = None) -> float:
    """dk in rad/m including the poling grating at the crystal temperature."""
    period = proc.crystal.period_at_temperature()
    return wave_sum(proc, signal_omega) + TWO_PI / period


def solve_poling_period(pump_omega: float, signal_omega: float, pm: PmType,
                        material: DispersionModel,
                        temperature: float) -> float:
    """Poling period (m, at the expansion reference T) giving dk = 0.

    The grating must compensate a negative wavevector sum; a non-negative sum
    (anomalous index combination) has no positive period and raises
    NoPositivePeriod.
    """
    idler_omega = pump_omega - signal_omega

    def wl(w: float) -> float:
        return TWO_PI * C_LIGHT / w

    n_s = material.refractive_index(pm.signal, wl(signal_omega), temperature)
    n_i = material.refractive_index(pm.idler, wl(idler_omega), temperature)
    n_p = material.refractive_index(pm.pump, wl(pump_omega), temperature)
    ksum = (n_s * signal_omega + n_i * idler_omega
            - n_p * pump_omega) / C_LIGHT
    if ksum >= 0:
        raise NoPositivePeriod(
            f"wavevector sum {ksum:.3e} rad/m is non-negative; no positive "
            f"poling period exists for this axis assignment")
    period_at_t = TWO_PI / (-ksum)
    # store periods at the reference temperature; undo the expansion factor
    return period_at_t / material.expansion.factor(temperature)


def bandwidth_slope(proc: SpdcProcess) -> float:
    """(d dk / d w_s) at fixed pump, i.e. the group-index difference / c."""
    ng_s = proc._group_index(proc.pm.signal, proc.signal_omega)
    ng_i = proc._group_index(proc.pm.idler, proc.idler_omega)
    return (ng_s - ng_i) / C_LIGHT


def _curvature(proc: SpdcProcess) -> float:
    """(d^2 dk / d w_s^2) at fixed pump in s^2/m."""
    mat = proc.crystal.material
    t = proc.crystal.temperature
    return (mat.group_index_derivative_omega(proc.pm.signal,
                                             proc.signal_omega, t)
            + mat.group_index_derivative_omega(proc.pm.idler,
                                               proc.idler_omega, t)) / C_LIGHT


def spdc_bandwidth(proc: SpdcProcess) -> float:
    """FWHM bandwidth (Hz) from the linear expansion of dk in w_s.

    Solves |d dk/d w_s| dw = 2 xi_HWHM / l_eff.  Raises DegenerateSlope when
    the quadratic term already dominates at the predicted half-maximum, which
    is the near-degenerate co-polarized regime; use spdc_bandwidth_scan (or
    the second-order resonator machinery) there instead.
    """
    slope = bandwidth_slope(proc)
    l_eff = proc.effective_length
    if slope == 0.0:
        raise DegenerateSlope("group-index difference vanished exactly")
    dw_half = 2.0 * XI_HWHM / (l_eff * abs(slope))
    quad = 0.5 * abs(_curvature(proc)) * dw_half * dw_half
    if quad >= abs(slope) * dw_half:
        raise DegenerateSlope(
            f"second-order dispersion dominates at the linear half-maximum "
            f"(correction {quad / (abs(slope) * dw_half):.2f}x); the linear "
            f"expansion is invalid")
    return 2.0 * dw_half / TWO_PI


def spdc_bandwidth_scan(proc: SpdcProcess) -> float:
    """FWHM bandwidth (Hz) located numerically on sinc^2(dk l_eff / 2).

    Uses the full phase mismatch without any expansion, marching out from the
    phase-matched center to bracket the half-maximum on each side and
    bisecting.  Valid in the near-degenerate regime where the linear formula
    is not.
    """
    l_eff = proc.effective_length
    dk0 = phase_mismatch(proc)

    def excess(detuning: float) -> float:
        # sinc^2 - 1/2, as a function of signed signal detuning (rad/s)
        dk = phase_mismatch(proc, proc.signal_omega + detuning) - dk0
        x = 0.5 * dk * l_eff
        s = 1.0 if x == 0.0 else math.sin(x) / x
        return s * s - 0.5

    # initial step from whichever expansion is usable
    slope = abs(bandwidth_slope(proc))
    curv = abs(_curvature(proc))
    guesses = []
    if slope > 0.0:
        guesses.append(2.0 * XI_HWHM / (l_eff * slope))
    if curv > 0.0:
        guesses.append(math.sqrt(4.0 * XI_HWHM / (l_eff * curv)))
    step0 = min(guesses) / 8.0

    half_widths = []
    for sign in (+1.0, -1.0):
        lo, hi = 0.0, step0
        while excess(sign * hi) > 0.0:
            lo = hi
            hi *= 2.0
            if hi > proc.signal_omega:
                raise DegenerateSlope(
                    "half-maximum scan left the physical frequency range")
        root = brentq(lambda d: excess(sign * d), lo, hi, rtol=1e-12)
        half_widths.append(root)
    return (half_widths[0] + half_widths[1]) / TWO_PI


def temperature_detuning_slope(proc: SpdcProcess) -> float:
    """d dk / dT in rad/(m K), combining dn/dT of all waves and dLambda/dT."""
    mat = proc.crystal.material
    t = proc.crystal.temperature
    dn_s = mat.index_derivative_temperature(proc.pm.signal,
                                            proc.signal_omega, t)
    dn_i = mat.index_derivative_temperature(proc.pm.idler,
                                            proc.idler_omega, t)
    dn_p = mat.index_derivative_temperature(proc.pm.pump, proc.pump_omega, t)
    index_part = (dn_s * proc.signal_omega + dn_i * proc.idler_omega
                  - dn_p * proc.pump_omega) / C_LIGHT
    period = proc.crystal.period_at_temperature()
    dperiod = proc.crystal.poling_period * mat.expansion.rate(t)
    return index_part - TWO_PI * dperiod / (period * period)

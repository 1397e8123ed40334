"""Four-mode cavity algebra for the two-crystal source.

Mode numbers m_j(w) count the one-way phase of cavity mode j in units of pi:

    m_j(w) = (w / pi c) (l1 n_a(w) + l2 n_b(w) + l_air + dl_j)

where the axis pair (a, b) seen in crystal 1 / crystal 2 depends on the PM
type and on which of the four modes j is meant: modes 1 and 2 are the signal
and idler generated in crystal 1, modes 3 and 4 the same for crystal 2, and
the crystals' optic axes are rotated 90 degrees relative to each other.
dl_j is an optional per-mode dispersionless path delay (used on the idler
modes 2 and 4 for delay compensation).

A mode is resonant when its frequency is an integer multiple of its free
spectral range FSR_j = (d m_j / d w)^-1 / 2 pi (in Hz); the familiar c/2L for
a vacuum cavity falls out of this.  Double resonances of a signal/idler pair
repeat with the cluster spacing

    Omega = FSR_a FSR_b / |FSR_a - FSR_b|

which this module evaluates through the equivalent group-path-difference form
Omega = c / (2 |dP|) to avoid catastrophic cancellation, and quadruple
resonances repeat with the joint cluster spacing obtained by feeding the two
pair spacings back through the same formula.  Divergent spacings (identical
FSRs) are reported as math.inf, a first-class result, so sweeps can plot
clipped divergences instead of dying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from types import MappingProxyType
from typing import Mapping

from .errors import NoRealRoot, ValidationError
from .materials import Axis
from .phasematch import CrystalSpec, PmKind, PmType, SpdcProcess
from .units import C_LIGHT, TWO_PI


class ModeId(IntEnum):
    """The four cavity modes: (1,2)=signal,idler of crystal 1; (3,4)=crystal 2."""

    SIGNAL_C1 = 1
    IDLER_C1 = 2
    SIGNAL_C2 = 3
    IDLER_C2 = 4


PAIR_CRYSTAL_1 = (ModeId.SIGNAL_C1, ModeId.IDLER_C1)
PAIR_CRYSTAL_2 = (ModeId.SIGNAL_C2, ModeId.IDLER_C2)

_O, _E = Axis.ORDINARY, Axis.EXTRAORDINARY

# (axis in crystal 1, axis in crystal 2) per mode, for each PM family.
_TYPE_II_AXES = {
    ModeId.SIGNAL_C1: (_O, _E),
    ModeId.IDLER_C1: (_E, _O),
    ModeId.SIGNAL_C2: (_E, _O),
    ModeId.IDLER_C2: (_O, _E),
}
_TYPE_0_I_AXES = {
    ModeId.SIGNAL_C1: (_O, _E),
    ModeId.IDLER_C1: (_O, _E),
    ModeId.SIGNAL_C2: (_E, _O),
    ModeId.IDLER_C2: (_E, _O),
}


@dataclass(frozen=True)
class SourceConfig:
    """Two crystals in one cavity plus the four mode frequencies.

    crystal2 is the 90-degree-rotated twin of crystal1; the rotation is
    encoded in the per-mode axis tables, not stored on the crystal.  delays
    maps ModeId to an additional dispersionless one-way path (m), default 0.
    """

    crystal1: CrystalSpec
    crystal2: CrystalSpec
    l_air: float            # m, one-way air path
    pm: PmType
    pump_omega: float       # rad/s
    signal_omega: float     # rad/s
    delays: Mapping[ModeId, float] = field(default_factory=dict)
    idler_omega: float = field(init=False)

    def __post_init__(self):
        if self.l_air < 0:
            raise ValidationError("air path must be >= 0")
        if not (0 < self.signal_omega < self.pump_omega):
            raise ValidationError("need 0 < signal < pump frequency")
        clean = {}
        for mode, value in dict(self.delays).items():
            mode = ModeId(mode)
            if value < 0:
                raise ValidationError(f"delay for mode {mode} must be >= 0")
            clean[mode] = float(value)
        object.__setattr__(self, "delays", MappingProxyType(clean))
        object.__setattr__(self, "idler_omega",
                           self.pump_omega - self.signal_omega)

    def delay(self, mode: ModeId) -> float:
        return self.delays.get(ModeId(mode), 0.0)

    def mode_center(self, mode: ModeId) -> float:
        """The design frequency of a mode: signal or idler center."""
        if ModeId(mode) in (ModeId.SIGNAL_C1, ModeId.SIGNAL_C2):
            return self.signal_omega
        return self.idler_omega

    def axes(self, mode: ModeId) -> tuple[Axis, Axis]:
        table = (_TYPE_II_AXES if self.pm.kind == PmKind.TYPE_II
                 else _TYPE_0_I_AXES)
        return table[ModeId(mode)]


def crystal_process(cfg: SourceConfig, crystal_index: int) -> SpdcProcess:
    """The SPDC process hosted by crystal 1 or 2 of a source config.

    The two crystals run the same local process (the 90-degree rotation is a
    relabeling of lab axes), so both use the config's PM axis map; only the
    crystal spec differs.  The standing-wave double pass is implied.
    """
    if crystal_index not in (1, 2):
        raise ValidationError("crystal_index must be 1 or 2")
    crystal = cfg.crystal1 if crystal_index == 1 else cfg.crystal2
    return SpdcProcess(pump_omega=cfg.pump_omega,
                       signal_omega=cfg.signal_omega,
                       crystal=crystal, pm=cfg.pm, passes_per_roundtrip=2)


def _check_pair(pair) -> tuple[ModeId, ModeId]:
    pair = tuple(sorted((ModeId(pair[0]), ModeId(pair[1]))))
    if pair not in (PAIR_CRYSTAL_1, PAIR_CRYSTAL_2):
        raise ValidationError(
            "mode pair must be (1,2) or (3,4): the signal/idler pair of one "
            "crystal")
    return pair


def optical_path(cfg: SourceConfig, mode: ModeId, omega: float) -> float:
    """One-way phase optical path of a mode (m): sum of l n + air + delay."""
    a1, a2 = cfg.axes(mode)
    c1, c2 = cfg.crystal1, cfg.crystal2
    wl = TWO_PI * C_LIGHT / omega
    n1 = c1.material.refractive_index(a1, wl, c1.temperature)
    n2 = c2.material.refractive_index(a2, wl, c2.temperature)
    return (c1.length_at_temperature() * n1 + c2.length_at_temperature() * n2
            + cfg.l_air + cfg.delay(mode))


def group_path(cfg: SourceConfig, mode: ModeId, omega: float) -> float:
    """One-way group optical path (m): l n_g sums plus air and delay."""
    a1, a2 = cfg.axes(mode)
    c1, c2 = cfg.crystal1, cfg.crystal2
    g1 = c1.material.group_index(a1, omega, c1.temperature)
    g2 = c2.material.group_index(a2, omega, c2.temperature)
    return (c1.length_at_temperature() * g1 + c2.length_at_temperature() * g2
            + cfg.l_air + cfg.delay(mode))


def mode_number(cfg: SourceConfig, mode: ModeId,
                omega: float | None = None) -> float:
    """Round-trip phase of mode j at frequency w, in units of pi."""
    mode = ModeId(mode)
    if omega is None:
        omega = cfg.mode_center(mode)
    return omega * optical_path(cfg, mode, omega) / (math.pi * C_LIGHT)


def mode_number_derivative(cfg: SourceConfig, mode: ModeId,
                           omega: float | None = None) -> float:
    """d m_j / d w in s/rad (the group path over pi c)."""
    mode = ModeId(mode)
    if omega is None:
        omega = cfg.mode_center(mode)
    return group_path(cfg, mode, omega) / (math.pi * C_LIGHT)


def mode_number_curvature(cfg: SourceConfig, mode: ModeId,
                          omega: float | None = None) -> float:
    """d^2 m_j / d w^2 in s^2/rad^2."""
    mode = ModeId(mode)
    if omega is None:
        omega = cfg.mode_center(mode)
    a1, a2 = cfg.axes(mode)
    c1, c2 = cfg.crystal1, cfg.crystal2
    gp1 = c1.material.group_index_derivative_omega(a1, omega, c1.temperature)
    gp2 = c2.material.group_index_derivative_omega(a2, omega, c2.temperature)
    return (c1.length_at_temperature() * gp1
            + c2.length_at_temperature() * gp2) / (math.pi * C_LIGHT)


def mode_number_temperature_derivative(cfg: SourceConfig, mode: ModeId,
                                       omega: float | None = None) -> float:
    """d m_j / dT (1/K) for a common temperature shift of both crystals.

    Includes the thermo-optic term l dn/dT and the lattice expansion of the
    crystal lengths (dl/dT) n; the air path and delays are temperature
    independent.
    """
    mode = ModeId(mode)
    if omega is None:
        omega = cfg.mode_center(mode)
    a1, a2 = cfg.axes(mode)
    wl = TWO_PI * C_LIGHT / omega
    total = 0.0
    for crystal, axis in ((cfg.crystal1, a1), (cfg.crystal2, a2)):
        mat = crystal.material
        t = crystal.temperature
        n = mat.refractive_index(axis, wl, t)
        dn_dt = mat.index_derivative_temperature(axis, omega, t)
        dl_dt = crystal.length * mat.expansion.rate(t)
        total += crystal.length_at_temperature() * dn_dt + dl_dt * n
    return omega * total / (math.pi * C_LIGHT)


def fsr(cfg: SourceConfig, mode: ModeId, omega: float | None = None) -> float:
    """Free spectral range of a mode in Hz: (d m/d w)^-1 / 2 pi."""
    return 1.0 / (TWO_PI * mode_number_derivative(cfg, mode, omega))


def cluster_spacing_first_order(cfg: SourceConfig, mode_pair) -> float:
    """Double-resonance cluster spacing (Hz) of a signal/idler pair.

    Equals FSR_a FSR_b / |FSR_a - FSR_b|, evaluated as c / (2 |dP|) with dP
    the group-path difference of the two modes, which is the same algebra
    without the subtractive cancellation.  Returns math.inf when the group
    paths coincide (the physically meaningful divergence).
    """
    m_sig, m_idl = _check_pair(mode_pair)
    dp = (group_path(cfg, m_sig, cfg.signal_omega)
          - group_path(cfg, m_idl, cfg.idler_omega))
    if dp == 0.0:
        return math.inf
    return C_LIGHT / (2.0 * abs(dp))


def joint_cluster_spacing(cfg: SourceConfig) -> float:
    """Quadruple-resonance spacing (Hz): Eq.-5 algebra applied to the pair
    spacings.  math.inf when the two pair spacings coincide (equal-length
    crystals)."""
    dp12 = abs(group_path(cfg, ModeId.SIGNAL_C1, cfg.signal_omega)
               - group_path(cfg, ModeId.IDLER_C1, cfg.idler_omega))
    dp34 = abs(group_path(cfg, ModeId.SIGNAL_C2, cfg.signal_omega)
               - group_path(cfg, ModeId.IDLER_C2, cfg.idler_omega))
    diff = abs(dp34 - dp12)
    if diff == 0.0:
        return math.inf
    return C_LIGHT / (2.0 * diff)


def solve_mode_jump(first: float, second: float, offset: float) -> float:
    """Smallest positive x with  second/2 x^2 + first x + offset = +-1.

    Enumerates the four sign/root candidates, discards complex and
    non-positive ones.  Raises NoRealRoot when nothing remains.
    """
    candidates = []
    for target in (+1.0, -1.0):
        c0 = offset - target
        if second == 0.0:
            if first != 0.0:
                candidates.append(-c0 / first)
            continue
        disc = first * first - 2.0 * second * c0
        if disc < 0.0:
            continue
        sq = math.sqrt(disc)
        candidates.append((-first + sq) / second)
        candidates.append((-first - sq) / second)
    positive = [x for x in candidates if x > 0.0 and math.isfinite(x)]
    if not positive:
        raise NoRealRoot("no positive real solution for the integer mode jump")
    return min(positive)


def cluster_spacing_second_order(cfg: SourceConfig, mode_pair,
                                 temperature_offset: float = 0.0) -> float:
    """Cluster spacing (Hz) from the second-order joint-mode-number expansion.

    Solves (dm/dw) X + (1/2)(d2m/dw2) X^2 + (dm/dT) dT = +-1 for the smallest
    positive X, where m is the pair's joint mode number and the constrained
    derivatives follow from energy conservation:
    dm/dw = m_s'(w_s) - m_i'(w_i) and d2m/dw2 = m_s''(w_s) + m_i''(w_i).
    Reduces to the first-order spacing when the curvature vanishes and
    dT = 0.
    """
    m_sig, m_idl = _check_pair(mode_pair)
    first = (mode_number_derivative(cfg, m_sig, cfg.signal_omega)
             - mode_number_derivative(cfg, m_idl, cfg.idler_omega))
    second = (mode_number_curvature(cfg, m_sig, cfg.signal_omega)
              + mode_number_curvature(cfg, m_idl, cfg.idler_omega))
    if first == 0.0 and second == 0.0:
        return math.inf
    thermal = 0.0
    if temperature_offset != 0.0:
        thermal = temperature_offset * (
            mode_number_temperature_derivative(cfg, m_sig, cfg.signal_omega)
            + mode_number_temperature_derivative(cfg, m_idl, cfg.idler_omega))
    return solve_mode_jump(first, second, thermal) / TWO_PI


def temperature_sensitivity(cfg: SourceConfig, mode_pair) -> float:
    """Shift of the pair's double-resonance position per Kelvin (Hz/K).

    The balance of the thermal and constrained-frequency derivatives of the
    joint mode number: d nu / dT = -(dm/dT) / (dm/dw) / 2 pi.  Signed; the
    paper-scale magnitude for a 10 mm PPLN source is of order THz/K.
    """
    m_sig, m_idl = _check_pair(mode_pair)
    first = (mode_number_derivative(cfg, m_sig, cfg.signal_omega)
             - mode_number_derivative(cfg, m_idl, cfg.idler_omega))
    thermal = (
        mode_number_temperature_derivative(cfg, m_sig, cfg.signal_omega)
        + mode_number_temperature_derivative(cfg, m_idl, cfg.idler_omega))
    if first == 0.0:
        return math.inf if thermal != 0.0 else 0.0
    return -thermal / first / TWO_PI

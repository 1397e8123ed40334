"""Multi-frequency-mode biphoton state and fidelities.

The cavity enhances the SPDC output of crystal alpha at the double resonances
of its signal/idler mode pair, which repeat with the pair's cluster spacing
Omega_alpha.  The enhanced state is a comb

    sum_j A_j^a  a+(w_s + j W_a) a+(w_i - j W_a) |vac>,
    A_j^a = sinc(l_a dk_{j,a} / 2),

with the mismatch linearized in the comb index (the group-index-difference
form).  The two-crystal state superposes the two combs with the relative
phase of the targeted Bell state and equal central amplitudes (the pump
polarization balances the two processes); frequency contributions with j != 0
are what degrades the fidelity.

Amplitudes are kept real with explicit sign (sinc is real); the Bell phase is
carried as a separate unit factor on crystal 2's comb.  Cavity Lorentzian
envelopes are deliberately not applied to the comb: the bare sinc amplitudes
at comb points are the model here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSlope, IncompatibleTarget
from .phasematch import XI_HWHM, PmKind
from .resonator import (PAIR_CRYSTAL_1, PAIR_CRYSTAL_2, SourceConfig,
                        cluster_spacing_first_order)
from .units import C_LIGHT, TWO_PI


class BellTarget(Enum):
    """The four polarization Bell states: psi+- with orthogonal photons
    (type-II), phi+- with co-polarized photons (type-0/type-I)."""

    PSI_MINUS = "psi-minus"
    PSI_PLUS = "psi-plus"
    PHI_MINUS = "phi-minus"
    PHI_PLUS = "phi-plus"

    @property
    def relative_phase(self) -> float:
        return -1.0 if self in (BellTarget.PSI_MINUS,
                                BellTarget.PHI_MINUS) else 1.0

    def compatible_with(self, kind: PmKind) -> bool:
        if self in (BellTarget.PSI_MINUS, BellTarget.PSI_PLUS):
            return kind == PmKind.TYPE_II
        return kind in (PmKind.TYPE_0, PmKind.TYPE_I)


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with sinc(0) = 1 (numpy's np.sinc is the normalized variant)."""
    return np.sinc(x / np.pi)


def comb_mismatch(cfg: SourceConfig, crystal_index: int, j: int) -> float:
    """Linearized phase mismatch (rad/m) of comb line j in crystal 1 or 2.

    dk_{j,a} = (j W_a / c) (n_g at the idler axis/frequency minus n_g at the
    signal axis/frequency), with W_a the pair cluster spacing as an angular
    frequency.  Proportional to j, zero at the center line.
    """
    step_hz = cluster_spacing_first_order(
        cfg, PAIR_CRYSTAL_1 if crystal_index == 1 else PAIR_CRYSTAL_2)
    if math.isinf(step_hz):
        return 0.0
    crystal = cfg.crystal1 if crystal_index == 1 else cfg.crystal2
    mat, t = crystal.material, crystal.temperature
    ng_s = mat.group_index(cfg.pm.signal, cfg.signal_omega, t)
    ng_i = mat.group_index(cfg.pm.idler, cfg.idler_omega, t)
    return j * TWO_PI * step_hz / C_LIGHT * (ng_i - ng_s)


@dataclass(frozen=True)
class AmplitudeComb:
    """Normalized two-crystal comb amplitudes.

    amplitudes1/2 hold A_j for j = -N..N (index j + half_width); the joint
    normalization sum(A1^2) + sum(A2^2) = 1 holds after build.  relative_phase
    is the unit factor on crystal 2's comb fixed by the target Bell state.
    """

    amplitudes1: np.ndarray
    amplitudes2: np.ndarray
    comb_step1_hz: float
    comb_step2_hz: float
    relative_phase: float
    target: BellTarget
    pm_kind: PmKind

    @property
    def half_width(self) -> int:
        return (len(self.amplitudes1) - 1) // 2

    def center_amplitude(self, crystal_index: int) -> float:
        amps = self.amplitudes1 if crystal_index == 1 else self.amplitudes2
        return float(amps[(len(amps) - 1) // 2])

    def crystal_sum(self, crystal_index: int) -> float:
        amps = self.amplitudes1 if crystal_index == 1 else self.amplitudes2
        return float(np.dot(amps, amps))


#: truncation policy: grow the comb until the newest lines of both crystals
#: fall below this fraction of the running normalization, hard cap below.
TRUNCATION_TOLERANCE = 1e-8
TRUNCATION_CAP = 100_000
_BLOCK = 4096


def _sinc_argument_per_line(cfg: SourceConfig, crystal_index: int) -> float:
    """u such that the sinc argument of comb line j is u*j (dimensionless)."""
    crystal = cfg.crystal1 if crystal_index == 1 else cfg.crystal2
    step_hz = cluster_spacing_first_order(
        cfg, PAIR_CRYSTAL_1 if crystal_index == 1 else PAIR_CRYSTAL_2)
    if math.isinf(step_hz):
        return math.inf  # single-mode marker: only j = 0 survives
    mat, t = crystal.material, crystal.temperature
    ng_s = mat.group_index(cfg.pm.signal, cfg.signal_omega, t)
    ng_i = mat.group_index(cfg.pm.idler, cfg.idler_omega, t)
    dk_per_line = TWO_PI * step_hz / C_LIGHT * (ng_i - ng_s)
    return 0.5 * crystal.length_at_temperature() * dk_per_line


def _one_sided_amplitudes(u: float, half_width: int) -> np.ndarray:
    j = np.arange(0, half_width + 1, dtype=float)
    return _sinc(u * j)


def build_comb(cfg: SourceConfig, target: BellTarget,
               tolerance: float = TRUNCATION_TOLERANCE,
               cap: int = TRUNCATION_CAP) -> AmplitudeComb:
    """Construct the normalized two-crystal comb for a Bell target.

    An infinite pair cluster spacing collapses that crystal to its single
    central line.  Raises IncompatibleTarget when the target's polarization
    structure cannot be produced by the config's PM type, DegenerateSlope
    when comb amplitudes do not decay (vanishing group-index difference with
    finite spacing).
    """
    if not target.compatible_with(cfg.pm.kind):
        raise IncompatibleTarget(
            f"{target.value} is not reachable with {cfg.pm.kind.value} "
            f"phase matching")
    u1 = _sinc_argument_per_line(cfg, 1)
    u2 = _sinc_argument_per_line(cfg, 2)
    for u in (u1, u2):
        if u == 0.0:
            raise DegenerateSlope(
                "comb amplitudes do not decay: group-index difference "
                "vanished with a finite cluster spacing")
    half = _required_half_width(u1, u2, tolerance, cap)
    amps1 = _assemble_symmetric(u1, half)
    amps2 = _assemble_symmetric(u2, half)
    norm = math.sqrt(np.dot(amps1, amps1) + np.dot(amps2, amps2))
    return AmplitudeComb(
        amplitudes1=amps1 / norm,
        amplitudes2=amps2 / norm,
        comb_step1_hz=cluster_spacing_first_order(cfg, PAIR_CRYSTAL_1),
        comb_step2_hz=cluster_spacing_first_order(cfg, PAIR_CRYSTAL_2),
        relative_phase=target.relative_phase,
        target=target,
        pm_kind=cfg.pm.kind,
    )


def _required_half_width(u1: float, u2: float, tolerance: float,
                         cap: int) -> int:
    """Smallest half width at which the newest lines of both crystals fall
    below `tolerance` of the running normalization (hard-capped).

    The stopping test uses the sinc envelope 1/(u j)^2 rather than the line
    values themselves: an individual line can sit on a sinc zero long before
    the comb has actually decayed."""
    if math.isinf(u1) and math.isinf(u2):
        return 0
    u_min = min(u for u in (u1, u2) if not math.isinf(u))
    running = 2.0  # the two j = 0 lines
    j = 1
    while j <= cap:
        hi = min(j + _BLOCK, cap + 1)
        block = np.arange(j, hi, dtype=float)
        a1sq = (np.zeros(block.size) if math.isinf(u1)
                else _sinc(u1 * block) ** 2)
        a2sq = (np.zeros(block.size) if math.isinf(u2)
                else _sinc(u2 * block) ** 2)
        running_after = running + 2.0 * np.cumsum(a1sq + a2sq)
        envelope = 1.0 / (u_min * block) ** 2
        below = np.nonzero(envelope < tolerance * running_after)[0]
        if below.size:
            return int(block[below[0]])
        running = float(running_after[-1])
        j = hi
    return cap


def _assemble_symmetric(u: float, half: int) -> np.ndarray:
    if math.isinf(u):
        full = np.zeros(2 * half + 1)
        full[half] = 1.0
        return full
    one_sided = _one_sided_amplitudes(u, half)
    return np.concatenate([one_sided[:0:-1], one_sided])


def single_crystal_fidelity(comb: AmplitudeComb, crystal_index: int) -> float:
    """Fidelity of one crystal's output with the single-pair product state:
    |A_0|^2 over that crystal's total weight."""
    a0 = comb.center_amplitude(crystal_index)
    total = comb.crystal_sum(crystal_index)
    return a0 * a0 / total


def bell_fidelity(comb: AmplitudeComb, target: BellTarget) -> float:
    """Fidelity of the normalized two-crystal state with a Bell state at the
    center frequencies: |<target|Psi>|^2."""
    if not target.compatible_with(comb.pm_kind):
        raise IncompatibleTarget(
            f"{target.value} is incompatible with {comb.pm_kind.value} "
            f"phase matching")
    overlap = (comb.center_amplitude(1)
               + target.relative_phase * comb.relative_phase
               * comb.center_amplitude(2)) / math.sqrt(2.0)
    return overlap * overlap


def fidelity_from_ratio(ratio: float, tolerance: float = TRUNCATION_TOLERANCE,
                        cap: int = TRUNCATION_CAP) -> float:
    """Single-crystal product-state fidelity as a function of the cluster
    spacing over the FWHM SPDC bandwidth.

    This is the universal curve behind the design threshold: the sinc
    argument of comb line j is xi_HWHM * ratio * j, independent of every
    other parameter, so F depends on the ratio alone.  Evaluated by direct
    comb summation.
    """
    if ratio <= 0.0:
        return 0.0
    u = XI_HWHM * ratio
    total = 1.0
    j = 1
    while j <= cap:
        hi = min(j + _BLOCK, cap + 1)
        block = np.arange(j, hi, dtype=float)
        sq = _sinc(u * block) ** 2
        running = total + 2.0 * np.cumsum(sq)
        envelope = 1.0 / (u * block) ** 2
        below = np.nonzero(envelope < tolerance * running)[0]
        if below.size:
            total = float(running[below[0]])
            break
        total = float(running[-1])
        j = hi
    return 1.0 / total

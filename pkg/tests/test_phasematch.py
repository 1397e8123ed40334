import dataclasses
import math

import pytest

from cavityspdc.errors import (DegenerateSlope, NoPositivePeriod,
                               ValidationError)
from cavityspdc.materials import Axis
from cavityspdc.phasematch import (XI_HWHM, CrystalSpec, PmKind, PmType,
                                   SpdcProcess, bandwidth_slope,
                                   phase_mismatch, solve_poling_period,
                                   spdc_bandwidth, spdc_bandwidth_scan,
                                   temperature_detuning_slope, wave_sum)
from cavityspdc.units import TWO_PI, wavelength_to_omega

from conftest import T_ROOM, toy_material

# Poling periods frozen from an independent transcription of the solve
# (k-sum arithmetic straight from the published Sellmeier evaluation).
PERIOD_NEARDEG_TYPE2 = 8.999083408e-6
PERIOD_NONDEG_TYPE2 = 4.613928971e-6
PERIOD_NONDEG_TYPE0 = 6.012909135e-6


def _process(settings, crystal_index=1):
    from cavityspdc.resonator import crystal_process
    return crystal_process(settings.to_config(), crystal_index)


class TestPmType:
    def test_presets_satisfy_invariants(self):
        assert PmType.type0().pump == PmType.type0().signal
        assert PmType.type2().signal != PmType.type2().idler
        t1 = PmType.type1()
        assert t1.signal == t1.idler != t1.pump

    def test_invalid_axis_maps_rejected(self):
        with pytest.raises(ValidationError):
            PmType(PmKind.TYPE_0, Axis.ORDINARY, Axis.ORDINARY,
                   Axis.EXTRAORDINARY)
        with pytest.raises(ValidationError):
            PmType(PmKind.TYPE_II, Axis.ORDINARY, Axis.EXTRAORDINARY,
                   Axis.EXTRAORDINARY)
        with pytest.raises(ValidationError):
            PmType.from_name("type3")


class TestEnergyConservation:
    def test_idler_derived_exactly(self, mgo):
        pump = wavelength_to_omega(519e-9)
        signal = wavelength_to_omega(780.24e-9)
        crystal = CrystalSpec(mgo, 5e-3, 19.5e-6, T_ROOM)
        proc = SpdcProcess(pump, signal, crystal, PmType.type2())
        assert proc.idler_omega == pump - signal  # exact float identity
        assert proc.signal_omega + proc.idler_omega == pump

    def test_rejects_nonphysical_frequencies(self, mgo):
        crystal = CrystalSpec(mgo, 5e-3, 19.5e-6, T_ROOM)
        with pytest.raises(ValidationError):
            SpdcProcess(1.0e15, 1.2e15, crystal, PmType.type2())


class TestPolingPeriodSolve:
    @pytest.mark.parametrize("pump_nm,signal_fn,pm,expected", [
        (775.0, lambda wp: wp / 2 + math.pi * 80e6, PmType.type2(),
         PERIOD_NEARDEG_TYPE2),
        (519.0, lambda wp: wavelength_to_omega(780.24e-9), PmType.type2(),
         PERIOD_NONDEG_TYPE2),
        (519.0, lambda wp: wavelength_to_omega(780.24e-9), PmType.type0(),
         PERIOD_NONDEG_TYPE0),
    ])
    def test_frozen_regressions(self, mgo, pump_nm, signal_fn, pm, expected):
        pump = wavelength_to_omega(pump_nm * 1e-9)
        period = solve_poling_period(pump, signal_fn(pump), pm, mgo, T_ROOM)
        assert period == pytest.approx(expected, rel=1e-9)

    def test_mismatch_vanishes_at_solution(self, mgo, nondeg_settings):
        proc = _process(nondeg_settings)
        dk = phase_mismatch(proc)
        assert abs(dk) < 1e-6
        assert abs(dk) * proc.crystal.length < 1e-8

    def test_textbook_degenerate_type0_period(self, mgo):
        # all-extraordinary 775 -> 2x1550 is the stock MgO:PPLN product,
        # with a poling period just under 19.4 um at room temperature
        pm = PmType(PmKind.TYPE_0, Axis.EXTRAORDINARY, Axis.EXTRAORDINARY,
                    Axis.EXTRAORDINARY)
        pump = wavelength_to_omega(775e-9)
        period = solve_poling_period(pump, pump / 2, pm, mgo, T_ROOM)
        assert period == pytest.approx(19.39e-6, rel=1e-3)

    def test_no_positive_period_for_anomalous_combination(self, mgo):
        # pump on the low-index (extraordinary) axis with both photons on the
        # high-index ordinary axis makes the wavevector sum positive: the
        # grating would need the opposite sign, so no positive period exists
        pump = wavelength_to_omega(519e-9)
        with pytest.raises(NoPositivePeriod):
            solve_poling_period(pump, wavelength_to_omega(780.24e-9),
                                PmType.type1(), mgo, T_ROOM)

    def test_solved_period_compensates_at_operating_temperature(
            self, mgo, nondeg_settings):
        hot = dataclasses.replace(nondeg_settings, temperature=348.15)
        proc = _process(hot)
        assert abs(phase_mismatch(proc)) * proc.crystal.length < 1e-8


class TestPhaseMismatch:
    def test_doubling_period_shifts_by_half_grating(self, mgo,
                                                    nondeg_settings):
        proc = _process(nondeg_settings)
        doubled = dataclasses.replace(
            proc.crystal, poling_period=2 * proc.crystal.poling_period)
        proc2 = dataclasses.replace(proc, crystal=doubled)
        period_t = proc.crystal.period_at_temperature()
        assert (phase_mismatch(proc2) - phase_mismatch(proc)
                == pytest.approx(-math.pi / period_t, rel=1e-12))

    def test_detuning_sign_flip_and_linear_slope(self, nondeg_settings):
        proc = _process(nondeg_settings)
        delta = TWO_PI * 1e9  # 1 GHz
        up = phase_mismatch(proc, proc.signal_omega + delta)
        down = phase_mismatch(proc, proc.signal_omega - delta)
        assert math.copysign(1, up) == -math.copysign(1, down)
        slope = bandwidth_slope(proc)
        assert up == pytest.approx(slope * delta, rel=1e-2)
        assert down == pytest.approx(-slope * delta, rel=1e-2)


class TestBandwidth:
    def test_exact_inverse_length_scaling(self, nondeg_settings):
        proc = _process(nondeg_settings)
        widths = []
        for factor in (1.0, 2.0, 5.0, 10.0):
            scaled = dataclasses.replace(proc.crystal,
                                         length=4e-3 * factor)
            widths.append(spdc_bandwidth(dataclasses.replace(
                proc, crystal=scaled)) * factor)
        for w in widths[1:]:
            assert w == pytest.approx(widths[0], rel=1e-9)

    def test_double_pass_halves_bandwidth(self, nondeg_settings):
        proc = _process(nondeg_settings)
        single = dataclasses.replace(proc, passes_per_roundtrip=1)
        assert spdc_bandwidth(single) == pytest.approx(
            2 * spdc_bandwidth(proc), rel=1e-12)

    def test_scan_agrees_with_linear_expansion(self, nondeg_settings):
        proc = _process(nondeg_settings)
        linear = spdc_bandwidth(proc)
        scanned = spdc_bandwidth_scan(proc)
        assert scanned == pytest.approx(linear, rel=2e-2)

    def test_near_degenerate_type0_raises_degenerate_slope(
            self, neardeg_type0_settings):
        proc = _process(neardeg_type0_settings)
        with pytest.raises(DegenerateSlope):
            spdc_bandwidth(proc)

    def test_near_degenerate_type0_scan_is_quadratic_regime(
            self, neardeg_type0_settings, mgo):
        proc = _process(neardeg_type0_settings)
        scanned = spdc_bandwidth_scan(proc)
        # independent quadratic estimate: dk = g' dw^2 / c pattern
        gp = mgo.group_index_derivative_omega(Axis.ORDINARY,
                                              proc.signal_omega, T_ROOM)
        expect = 2.0 * math.sqrt(
            2 * XI_HWHM * 299792458.0 / (gp * proc.effective_length)) / TWO_PI
        assert scanned == pytest.approx(expect, rel=1e-2)


class TestTemperatureSlope:
    def test_matches_finite_difference(self, nondeg_settings):
        proc = _process(nondeg_settings)
        analytic = temperature_detuning_slope(proc)
        h = 0.05
        fd = []
        for sign in (+1, -1):
            crystal = dataclasses.replace(proc.crystal,
                                          temperature=T_ROOM + sign * h)
            fd.append(phase_mismatch(dataclasses.replace(proc,
                                                         crystal=crystal)))
        assert analytic == pytest.approx((fd[0] - fd[1]) / (2 * h), rel=1e-5)

    def test_zero_for_athermal_toy_model(self):
        toy = toy_material(temperature_independent=True, expansion=0.0)
        pm = PmType(PmKind.TYPE_0, Axis.EXTRAORDINARY, Axis.EXTRAORDINARY,
                    Axis.EXTRAORDINARY)
        pump = wavelength_to_omega(775e-9)
        period = solve_poling_period(pump, pump / 2, pm, toy, T_ROOM)
        proc = SpdcProcess(pump, pump / 2,
                           CrystalSpec(toy, 5e-3, period, T_ROOM), pm)
        assert temperature_detuning_slope(proc) == 0.0

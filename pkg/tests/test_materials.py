import dataclasses
import json
import math

import pytest

from cavityspdc.errors import MaterialFileError, OutOfValidityRange
from cavityspdc.materials import (Axis, builtin_material,
                                  builtin_material_names, dumps_material,
                                  load_material, loads_material,
                                  material_sha256)
from cavityspdc.units import C_LIGHT, TWO_PI, wavelength_to_omega

from conftest import T_ROOM, toy_material

# Frozen by evaluating the published coefficient formula once by hand
# (independent transcription) and kept as regression anchors.
N_O_1550 = 2.208868412178
N_E_1550 = 2.130703032091


def test_builtin_registry_lists_mgo_ppln():
    assert "mgo_ppln" in builtin_material_names()


def test_frozen_index_regressions(mgo):
    n_o = mgo.refractive_index(Axis.ORDINARY, 1550e-9, T_ROOM)
    n_e = mgo.refractive_index(Axis.EXTRAORDINARY, 1550e-9, T_ROOM)
    assert n_o == pytest.approx(N_O_1550, rel=1e-11)
    assert n_e == pytest.approx(N_E_1550, rel=1e-11)


def test_index_physical_range_on_validity_grid(mgo):
    lo, hi = mgo.wavelength_range_m
    tlo, thi = mgo.temperature_range_k
    for axis in Axis:
        for i in range(21):
            lam = lo + (hi - lo) * i / 20
            for j in range(7):
                t = tlo + (thi - tlo) * j / 6
                n = mgo.refractive_index(axis, lam, t)
                assert 1.0 < n < 3.0


@pytest.mark.parametrize("lam,t", [
    (4.9e-7, T_ROOM),      # below wavelength range
    (4.1e-6, T_ROOM),      # above wavelength range
    (1550e-9, 290.0),      # below temperature range
    (1550e-9, 500.0),      # above temperature range
])
def test_out_of_validity_raises(mgo, lam, t):
    with pytest.raises(OutOfValidityRange):
        mgo.refractive_index(Axis.ORDINARY, lam, t)
    with pytest.raises(OutOfValidityRange):
        mgo.index_derivative_omega(Axis.EXTRAORDINARY,
                                   wavelength_to_omega(lam), t)


def test_index_derivative_matches_finite_difference(mgo):
    # 100-point grid over the validity interior, both axes, rel < 1e-6
    for axis in Axis:
        for i in range(50):
            lam = 0.6e-6 + (3.8e-6 - 0.6e-6) * i / 49
            w = wavelength_to_omega(lam)
            h = w * 1e-5
            analytic = mgo.index_derivative_omega(axis, w, T_ROOM)
            fd = (mgo.refractive_index(Axis(axis), TWO_PI * C_LIGHT / (w + h),
                                       T_ROOM)
                  - mgo.refractive_index(Axis(axis),
                                         TWO_PI * C_LIGHT / (w - h), T_ROOM)
                  ) / (2 * h)
            assert analytic == pytest.approx(fd, rel=1e-6)


def test_second_derivative_matches_finite_difference(mgo):
    for axis in Axis:
        for lam in (0.78e-6, 1.55e-6, 2.5e-6):
            w = wavelength_to_omega(lam)
            h = w * 1e-5
            analytic = mgo.index_second_derivative_omega(axis, w, T_ROOM)
            fd = (mgo.index_derivative_omega(axis, w + h, T_ROOM)
                  - mgo.index_derivative_omega(axis, w - h, T_ROOM)) / (2 * h)
            assert analytic == pytest.approx(fd, rel=1e-5)


def test_temperature_derivative_matches_fd_and_sign(mgo):
    w = wavelength_to_omega(1550e-9)
    for axis, expected_sign in ((Axis.ORDINARY, +1), (Axis.EXTRAORDINARY, +1)):
        analytic = mgo.index_derivative_temperature(axis, w, T_ROOM)
        fd = (mgo.refractive_index(axis, 1550e-9, T_ROOM + 0.05)
              - mgo.refractive_index(axis, 1550e-9, T_ROOM - 0.05)) / 0.1
        assert analytic == pytest.approx(fd, rel=1e-6)
        # both axes of MgO:LN have positive dn/dT at telecom wavelengths
        assert math.copysign(1, analytic) == expected_sign


def test_group_index_exceeds_phase_index_in_normal_dispersion(mgo):
    w = wavelength_to_omega(1550e-9)
    for axis in Axis:
        n = mgo.refractive_index(axis, 1550e-9, T_ROOM)
        ng = mgo.group_index(axis, w, T_ROOM)
        assert ng > n  # dn/domega > 0


def test_group_index_derivative_matches_fd(mgo):
    w = wavelength_to_omega(1550e-9)
    h = w * 1e-5
    for axis in Axis:
        analytic = mgo.group_index_derivative_omega(axis, w, T_ROOM)
        fd = (mgo.group_index(axis, w + h, T_ROOM)
              - mgo.group_index(axis, w - h, T_ROOM)) / (2 * h)
        assert analytic == pytest.approx(fd, rel=1e-5)


def test_derivative_invariant_under_omega_wavelength_roundtrip(mgo):
    w = wavelength_to_omega(1550e-9)
    w_back = wavelength_to_omega(TWO_PI * C_LIGHT / w)
    a = mgo.index_derivative_omega(Axis.ORDINARY, w, T_ROOM)
    b = mgo.index_derivative_omega(Axis.ORDINARY, w_back, T_ROOM)
    assert a == pytest.approx(b, rel=1e-12)


def test_poled_period_reference_point(mgo):
    assert mgo.poled_period(19.5e-6, mgo.expansion.reference_temperature_k) \
        == pytest.approx(19.5e-6, rel=1e-15)


def test_poled_period_zero_expansion():
    toy = toy_material(expansion=0.0)
    for t in (260.0, 300.0, 450.0):
        assert toy.poled_period(10e-6, t) == 10e-6


def test_poled_period_100k_hand_value(mgo):
    # 1 + 1.54e-5 * 100 + 5.3e-9 * 100^2 = 1.001593
    t = mgo.expansion.reference_temperature_k + 100.0
    assert mgo.poled_period(1.0, t) == pytest.approx(1.001593, rel=1e-12)


def test_poled_period_out_of_range(mgo):
    with pytest.raises(OutOfValidityRange):
        mgo.poled_period(19.5e-6, 600.0)


def test_roundtrip_through_document_is_bit_identical(mgo):
    document = json.loads(json.dumps(dumps_material(mgo)))
    again = loads_material(document)
    assert again == mgo  # frozen dataclasses: exact field equality
    w = wavelength_to_omega(1550e-9)
    assert (again.refractive_index(Axis.ORDINARY, 1550e-9, T_ROOM)
            == mgo.refractive_index(Axis.ORDINARY, 1550e-9, T_ROOM))
    assert (again.index_derivative_omega(Axis.EXTRAORDINARY, w, T_ROOM)
            == mgo.index_derivative_omega(Axis.EXTRAORDINARY, w, T_ROOM))


def test_strict_parsing_rejects_unknown_and_missing_keys(mgo):
    good = dumps_material(mgo)
    bad = json.loads(json.dumps(good))
    bad["surprise"] = 1
    with pytest.raises(MaterialFileError):
        loads_material(bad)
    bad = json.loads(json.dumps(good))
    del bad["axes"]["ordinary"]["a1"]
    with pytest.raises(MaterialFileError):
        loads_material(bad)
    bad = json.loads(json.dumps(good))
    bad["formula"] = "polynomial"
    with pytest.raises(MaterialFileError):
        loads_material(bad)
    bad = json.loads(json.dumps(good))
    bad["validity"]["wavelength_m"] = [4e-6, 5e-7]
    with pytest.raises(MaterialFileError):
        loads_material(bad)


def test_load_material_from_file(tmp_path, mgo):
    path = tmp_path / "copy.json"
    path.write_text(json.dumps(dumps_material(mgo)), encoding="utf-8")
    assert load_material(path) == mgo
    assert len(material_sha256(path)) == 64


def test_material_hash_stable():
    assert material_sha256("mgo_ppln") == material_sha256("mgo_ppln")

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softgait.lut import (InvalidLutError, Lut2D, LutDomainError,
                          SyntheticMomentMap, UnreachableTargetError,
                          build_lut_from_map, default_angle_grid,
                          default_motor_grid, lut_eval, lut_invert,
                          read_lut_csv, write_lut_csv)


class TestSyntheticMomentMap:
    def test_closed_forms_are_consistent(self):
        m = SyntheticMomentMap(sigma=2.5, rho=2.0)
        assert m(10.0, 3.0) == pytest.approx(2.5 * (10.0 - 6.0))
        assert m(m.motor_for(7.0, 3.0), 3.0) == pytest.approx(7.0)
        assert m(m.rho * m.unloaded_angle(10.0), 0.0) == pytest.approx(
            m(10.0, 0.0))
        assert m(10.0, m.unloaded_angle(10.0)) == pytest.approx(0.0)

    def test_rejects_nonpositive_gains(self):
        with pytest.raises(ValueError):
            SyntheticMomentMap(sigma=0.0)
        with pytest.raises(ValueError):
            SyntheticMomentMap(rho=-1.0)


@pytest.fixture(scope="module")
def affine_lut():
    return build_lut_from_map(SyntheticMomentMap(),
                              default_motor_grid(), default_angle_grid())


class TestEval:
    def test_exact_at_nodes(self, affine_lut):
        m = SyntheticMomentMap()
        for a in (-40.0, -3.0, 0.0, 17.0, 40.0):
            for b in (-30.0, -1.0, 0.0, 12.0, 30.0):
                assert affine_lut.eval(a, b) == pytest.approx(m(a, b))

    def test_bilinear_reproduces_affine_map_off_nodes(self, affine_lut):
        m = SyntheticMomentMap()
        rng = np.random.default_rng(3)
        for _ in range(100):
            a = rng.uniform(-40, 40)
            b = rng.uniform(-30, 30)
            assert affine_lut.eval(a, b) == pytest.approx(m(a, b), abs=1e-9)

    def test_rejects_out_of_domain(self, affine_lut):
        with pytest.raises(LutDomainError):
            affine_lut.eval(41.0, 0.0)
        with pytest.raises(LutDomainError):
            affine_lut.eval(0.0, -31.0)


class TestInvert:
    @settings(max_examples=50, deadline=None)
    @given(st.floats(-39.0, 39.0), st.floats(-15.0, 15.0))
    def test_round_trip_fixed_angle(self, x, q):
        lut = build_lut_from_map(SyntheticMomentMap(),
                                 default_motor_grid(), default_angle_grid())
        target = lut.eval(x, q)
        x_back = lut.invert(target, ("b", q))
        assert x_back == pytest.approx(x, abs=1e-9)

    def test_round_trip_fixed_motor(self, affine_lut):
        for x in (-20.0, 0.0, 13.5):
            for q in (-10.0, 0.5, 8.0):
                target = affine_lut.eval(x, q)
                assert affine_lut.invert(target, ("a", x)) == pytest.approx(
                    q, abs=1e-9)

    def test_unreachable_target(self, affine_lut):
        with pytest.raises(UnreachableTargetError):
            affine_lut.invert(1e6, ("b", 0.0))

    def test_inversion_requires_declared_monotonicity(self):
        lut = Lut2D([0.0, 1.0], [0.0, 1.0],
                    [[0.0, 0.0], [1.0, 1.0]], monotone_axis="a")
        with pytest.raises(InvalidLutError):
            lut.invert(0.5, ("a", 0.5))   # free axis b not declared monotone
        assert lut.invert(0.5, ("b", 0.5)) == pytest.approx(0.5)

    def test_decreasing_slices_invert(self):
        # values decrease along axis b (as a moment map does with angle)
        lut = build_lut_from_map(SyntheticMomentMap(),
                                 default_motor_grid(), default_angle_grid())
        q = lut.invert(0.0, ("a", 10.0))
        assert q == pytest.approx(SyntheticMomentMap().unloaded_angle(10.0))


class TestValidation:
    def test_rejects_nonmonotone_axes(self):
        with pytest.raises(InvalidLutError):
            Lut2D([0.0, 0.0, 1.0], [0.0, 1.0], np.zeros((3, 2)))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(InvalidLutError):
            Lut2D([0.0, 1.0], [0.0, 1.0], np.zeros((3, 2)))

    def test_rejects_false_monotone_claim(self):
        values = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(InvalidLutError):
            Lut2D([0.0, 1.0], [0.0, 1.0], values, monotone_axis="a")

    def test_both_axes_validated(self):
        values = np.array([[0.0, 1.0], [1.0, 2.0]])
        lut = Lut2D([0.0, 1.0], [0.0, 1.0], values, monotone_axis="both")
        assert lut.invert(1.0, ("a", 0.0)) == pytest.approx(1.0)
        assert lut.invert(1.0, ("b", 0.0)) == pytest.approx(1.0)

    def test_rejects_unknown_monotone_axis(self):
        with pytest.raises(InvalidLutError):
            Lut2D([0.0, 1.0], [0.0, 1.0], np.zeros((2, 2)), monotone_axis="c")


class TestCsvRoundTrip:
    def test_round_trip_preserves_everything(self, affine_lut, tmp_path):
        path = tmp_path / "map.csv"
        write_lut_csv(affine_lut, path)
        back = read_lut_csv(path, monotone_axis="both")
        assert np.allclose(back.axis_a, affine_lut.axis_a)
        assert np.allclose(back.axis_b, affine_lut.axis_b)
        assert np.allclose(back.values, affine_lut.values)
        assert back.units[:2] == affine_lut.units[:2]
        assert back.eval(3.3, -2.7) == pytest.approx(
            affine_lut.eval(3.3, -2.7))


class TestModuleLevelHelpers:
    def test_wrappers_delegate(self, affine_lut):
        assert lut_eval(affine_lut, 1.0, 1.0) == affine_lut.eval(1.0, 1.0)
        assert lut_invert(affine_lut, 0.0, ("b", 2.0)) == \
            affine_lut.invert(0.0, ("b", 2.0))

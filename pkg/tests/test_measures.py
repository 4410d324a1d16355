import numpy as np
import pytest

from quasimeasure import (
    AtomicMeasure,
    DensityMeasure,
    PointCountMeasure,
    empty_region,
    frame_interior,
    rect_region,
    tm_eval,
)
from quasimeasure.presets import MARKED_POINTS


class TestPointCountValidation:
    def test_table_must_start_at_zero(self):
        with pytest.raises(ValueError):
            PointCountMeasure(MARKED_POINTS[:1], np.array([0.5, 1.0]))

    def test_table_must_be_monotone(self):
        with pytest.raises(ValueError):
            PointCountMeasure(MARKED_POINTS[:2], np.array([0.0, 1.0, 0.5]))

    def test_table_must_be_superadditive(self):
        with pytest.raises(ValueError):
            PointCountMeasure(MARKED_POINTS[:2], np.array([0.0, 1.0, 1.0]))

    def test_table_length(self):
        with pytest.raises(ValueError):
            PointCountMeasure(MARKED_POINTS, np.array([0.0, 1.0]))

    def test_golden_table_is_valid(self, crossing):
        assert crossing.total_mass(None) == 1.0


class TestPointCountValues:
    def test_band_between_inner_and_outer(self, frame64, crossing):
        # contains the four points that are not in the lower-right pocket
        band = rect_region(frame64, 0.75, 7.25, 4.75, 7.25, role="open")
        assert tm_eval(crossing, band) == 1.0

    def test_core_square(self, frame64, crossing, regions64):
        assert tm_eval(crossing, regions64["core"]) == 0.5

    def test_full_interior(self, frame64, crossing, regions64):
        assert tm_eval(crossing, regions64["interior"]) == 1.0

    def test_empty(self, frame64, crossing):
        assert tm_eval(crossing, empty_region(frame64)) == 0.0

    def test_single_point_region(self, frame64, crossing):
        r = rect_region(frame64, 2.0, 2.6, 6.1, 6.8, role="compact")
        assert tm_eval(crossing, r) == 0.0

    def test_hole_subtraction(self, frame64, crossing):
        # ring with 2 points around a 3-point hole: value(5) - value(3)
        big = rect_region(frame64, 1, 9, 1, 9, role="compact")
        hole = rect_region(frame64, 4.4, 7.8, 4.4, 7.8, role="compact")
        ring = big.difference(hole)
        assert tm_eval(crossing, ring) == 1.0 - 0.5

    def test_nested_island(self, frame64, crossing):
        # ring (2 pts) + island with the 3 core points inside the ring's hole
        big = rect_region(frame64, 1, 9, 1, 9, role="compact")
        hole = rect_region(frame64, 4.4, 7.8, 4.4, 7.8, role="compact")
        island = rect_region(frame64, 5, 7, 5, 7, role="compact")
        region = big.difference(hole).union(island)
        assert tm_eval(crossing, region) == (1.0 - 0.5) + 0.5

    def test_monotone_on_nested_rects(self, frame64, crossing):
        small = rect_region(frame64, 4.9, 6.0, 4.9, 6.0, role="compact")
        mid = rect_region(frame64, 4.6, 7.4, 4.6, 7.4, role="compact")
        big = rect_region(frame64, 1, 9, 1, 9, role="compact")
        vals = [tm_eval(crossing, r) for r in (small, mid, big)]
        assert vals == sorted(vals)

    def test_partition_identity(self, frame64, crossing, regions64):
        U = rect_region(frame64, 4.2, 7.8, 4.2, 7.8, role="open")
        K = rect_region(frame64, 4.8, 7.2, 4.8, 7.2, role="compact")
        assert tm_eval(crossing, U) == 0.5
        assert tm_eval(crossing, K) == 0.5
        assert tm_eval(crossing, U.difference(K)) == 0.0
        interior = regions64["interior"]
        assert tm_eval(crossing, interior) == \
            tm_eval(crossing, K) + tm_eval(crossing, interior.difference(K))

    def test_tau_chain(self, frame64, crossing, regions64):
        chain = [
            rect_region(frame64, 4.9, 6.0, 4.9, 6.0, role="open"),
            rect_region(frame64, 4.9, 6.6, 4.9, 6.6, role="open"),
            rect_region(frame64, 4.4, 7.6, 4.4, 7.6, role="open"),
            rect_region(frame64, 1.2, 7.7, 4.4, 7.7, role="open"),
            regions64["interior"],
        ]
        values = [tm_eval(crossing, u) for u in chain]
        assert values == [0.0, 0.5, 0.5, 1.0, 1.0]


class TestDensity:
    def test_area_oracle(self, frame64, lebesgue):
        r = rect_region(frame64, 1, 3, 1, 3, role="compact")
        # independent expected value: cell count times cell area
        h = frame64.dx
        lo = int(np.ceil(1 / h - 0.5))
        hi = int(np.floor(3 / h - 0.5))
        exact = (hi - lo + 1) ** 2 * frame64.cell_area
        assert tm_eval(lebesgue, r) == pytest.approx(exact, abs=0)
        assert tm_eval(lebesgue, r) == pytest.approx(4.0, abs=4 * 2 * h + h * h)

    def test_per_cell_density(self, frame64):
        grid = np.ones(frame64.shape)
        grid[:32, :] = 2.0
        mu = DensityMeasure(grid)
        full = rect_region(frame64, -1, 11, -1, 11, role="compact")
        assert full.cell_count == 64 * 64
        assert tm_eval(mu, full) == pytest.approx(1.5 * 100.0)

    def test_density_grid_shape_mismatch(self, frame64):
        mu = DensityMeasure(np.ones((96, 96)))
        with pytest.raises(ValueError):
            tm_eval(mu, frame_interior(frame64))

    def test_negative_density_rejected(self):
        with pytest.raises(ValueError):
            DensityMeasure(-1.0)

    def test_total_mass(self, frame64, lebesgue):
        assert lebesgue.total_mass(frame64) == pytest.approx(100.0)
        assert np.isinf(DensityMeasure(1.0, unbounded=True).total_mass(frame64))

    def test_additivity_exact(self, frame64, lebesgue):
        a = rect_region(frame64, 1, 3, 1, 3, role="compact")
        b = rect_region(frame64, 6, 8, 6, 8, role="compact")
        assert tm_eval(lebesgue, a.union(b)) == tm_eval(lebesgue, a) + tm_eval(lebesgue, b)


class TestAtomic:
    def test_membership(self, frame64, spikes):
        r = rect_region(frame64, 2.5, 6.0, 2.5, 6.0, role="open")
        assert tm_eval(spikes, r) == 0.25
        assert tm_eval(spikes, frame_interior(frame64)) == 3.75
        assert tm_eval(spikes, empty_region(frame64)) == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            AtomicMeasure(np.array([[1.0, 1.0]]), np.array([-1.0]))
        with pytest.raises(ValueError):
            AtomicMeasure(np.array([[1.0, 1.0]]), np.array([1.0, 2.0]))

    def test_total_mass(self, frame64, spikes):
        assert spikes.total_mass(frame64) == 3.75


def test_point_count_region_with_point_on_contour_rejected(frame64, crossing):
    from quasimeasure import TieBreakError

    bad = PointCountMeasure(np.array([[0.625, 5.0]]), np.array([0.0, 1.0]))
    r = rect_region(frame64, 1, 9, 1, 9, role="compact")
    with pytest.raises(TieBreakError):
        tm_eval(bad, r)

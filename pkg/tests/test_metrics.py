import numpy as np
import pytest

from toonbench import (
    MetricId,
    PixelAccuracyConfig,
    boundary_iou,
    e_measure,
    evaluate_all,
    f_measure,
    mae,
    mse,
    pixel_accuracy,
    s_measure,
    weighted_f_measure,
)
from toonbench.errors import EmptyBandsError, EmptyForegroundError
from toonbench.metrics import TABLE_ORDER

from .conftest import blob_mask, random_binary_mixed, random_gray, random_gray_fg
from .oracles import (
    boundary_iou_oracle,
    e_measure_oracle,
    f_measure_oracle,
    mae_oracle,
    mse_oracle,
    pixel_accuracy_oracle,
    s_measure_oracle,
    weighted_f_oracle,
)


class TestPixelAccuracy:
    def test_identical_masks(self, rng):
        g = random_gray_fg(rng)
        out = pixel_accuracy(g.copy(), g)
        assert out.incorrect_pixels == 0
        assert out.score == 1.0

    def test_isolated_wrong_pixel_forgiven(self):
        gt = np.full((10, 10), 255, np.uint8)
        pred = gt.copy()
        pred[4, 7] = 0
        out = pixel_accuracy(pred, gt)
        assert out.incorrect_pixels == 0
        assert out.score == 1.0

    def test_border_wrong_pixel_forgiven(self):
        gt = np.full((10, 10), 255, np.uint8)
        for pos in ((0, 0), (0, 5), (9, 9), (5, 0)):
            pred = gt.copy()
            pred[pos] = 0
            assert pixel_accuracy(pred, gt).score == 1.0

    def test_one_pixel_wide_ring_forgiven(self):
        gt = np.full((12, 12), 255, np.uint8)
        pred = gt.copy()
        pred[3, 3:9] = 0
        pred[8, 3:9] = 0
        pred[3:9, 3] = 0
        pred[3:9, 8] = 0
        assert pixel_accuracy(pred, gt).score == 1.0

    def test_3x3_block_leaves_one_pixel(self):
        gt = np.full((10, 10), 255, np.uint8)
        pred = gt.copy()
        pred[2:5, 2:5] = 0
        out = pixel_accuracy(pred, gt)
        assert out.incorrect_pixels == 1
        assert out.foreground_pixels == 100
        assert out.score == 0.9801
        assert out.score == (1 - 1 / 100) ** 2

    def test_delta_is_strict(self):
        gt = np.full((10, 10), 200, np.uint8)
        pred = gt.copy()
        pred[2:7, 2:7] = 190  # off by exactly delta=10: still correct
        assert pixel_accuracy(pred, gt).score == 1.0
        pred[2:7, 2:7] = 189
        assert pixel_accuracy(pred, gt).score < 1.0

    def test_zero_iterations_counts_raw_errors(self):
        gt = np.full((10, 10), 255, np.uint8)
        pred = gt.copy()
        pred[4, 7] = 0
        cfg = PixelAccuracyConfig(erosion_iterations=0)
        out = pixel_accuracy(pred, gt, cfg)
        assert out.incorrect_pixels == 1
        assert out.score == (1 - 1 / 100) ** 2

    def test_max_delta_forgives_everything(self, rng):
        pred = random_gray(rng)
        gt = random_gray_fg(rng)
        assert pixel_accuracy(pred, gt, PixelAccuracyConfig(delta=255)).score == 1.0

    def test_score_clamped_at_zero(self):
        # more surviving errors than foreground pixels cannot go positive
        gt = np.zeros((20, 20), np.uint8)
        gt[0, 0] = 255
        pred = 255 - gt
        assert pixel_accuracy(pred, gt).score == 0.0

    def test_empty_foreground_raises(self):
        gt = np.full((8, 8), 100, np.uint8)  # nothing above 128
        with pytest.raises(EmptyForegroundError):
            pixel_accuracy(gt.copy(), gt)

    def test_monotone_under_error_growth(self, rng):
        gt = random_binary_mixed(rng, 24, 24)
        noise_a = rng.random(gt.shape) < 0.08
        noise_b = noise_a | (rng.random(gt.shape) < 0.08)
        pred_a = np.where(noise_a, 255 - gt, gt).astype(np.uint8)
        pred_b = np.where(noise_b, 255 - gt, gt).astype(np.uint8)
        assert pixel_accuracy(pred_b, gt).score <= pixel_accuracy(pred_a, gt).score

    def test_matches_independent_erosion_oracle(self, rng):
        for _ in range(50):
            gt = random_gray_fg(rng, 32, 32)
            pred = random_gray(rng, 32, 32)
            assert pixel_accuracy(pred, gt).score == pixel_accuracy_oracle(pred, gt)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PixelAccuracyConfig(delta=-1)
        with pytest.raises(ValueError):
            PixelAccuracyConfig(delta=256)
        with pytest.raises(ValueError):
            PixelAccuracyConfig(erosion_iterations=-1)


class TestMaeMse:
    def test_trivial_values(self, rng):
        g = random_gray(rng)
        assert mae(g.copy(), g) == 0.0
        assert mse(g.copy(), g) == 0.0
        zero = np.zeros((8, 8), np.uint8)
        full = np.full((8, 8), 255, np.uint8)
        assert mae(zero, full) == 1.0
        assert mse(zero, full) == 1.0

    def test_half_pixels_differ(self):
        gt = np.zeros((10, 10), np.uint8)
        pred = gt.copy()
        pred[:5] = 51  # |diff|/255 = 0.2 on half the pixels
        assert mae(pred, gt) == mae_oracle(pred, gt)
        assert abs(mae(pred, gt) - 0.1) < 1e-12
        assert mse(pred, gt) == mse_oracle(pred, gt)
        assert abs(mse(pred, gt) - 0.02) < 1e-12

    def test_matches_oracle(self, rng):
        for _ in range(20):
            pred, gt = random_gray(rng), random_gray(rng)
            assert mae(pred, gt) == mae_oracle(pred, gt)
            assert mse(pred, gt) == mse_oracle(pred, gt)

    def test_binary_pairs_mse_equals_mae(self, rng):
        for _ in range(20):
            pred = random_binary_mixed(rng)
            gt = random_binary_mixed(rng)
            assert mse(pred, gt) == mae(pred, gt)


class TestFMeasure:
    def test_perfect_binary(self, rng):
        g = random_binary_mixed(rng)
        assert f_measure(g.copy(), g) == 1.0

    def test_all_zero_prediction(self, rng):
        g = random_binary_mixed(rng)
        assert f_measure(np.zeros_like(g), g) == 0.0

    def test_empty_foreground_raises(self):
        with pytest.raises(EmptyForegroundError):
            f_measure(np.zeros((4, 4), np.uint8), np.zeros((4, 4), np.uint8))

    def test_matches_threshold_sweep_oracle(self, rng):
        for _ in range(30):
            pred, gt = random_gray(rng), random_gray_fg(rng)
            assert f_measure(pred, gt) == f_measure_oracle(pred, gt)
            assert f_measure(pred, gt, "mean") == pytest.approx(
                f_measure_oracle(pred, gt, "mean"), abs=1e-12
            )


class TestEMeasure:
    def test_perfect_binary(self, rng):
        g = random_binary_mixed(rng)
        assert e_measure(g.copy(), g) == 1.0

    def test_all_background_pair(self):
        gt = np.zeros((8, 8), np.uint8)
        pred = np.zeros((8, 8), np.uint8)
        assert e_measure(pred, gt) == 1.0

    def test_all_foreground_gt(self):
        gt = np.full((8, 8), 255, np.uint8)
        assert e_measure(gt.copy(), gt) == 1.0

    def test_matches_transcription_oracle(self, rng):
        for _ in range(25):
            pred, gt = random_gray(rng), random_gray(rng)
            assert e_measure(pred, gt) == pytest.approx(e_measure_oracle(pred, gt), abs=1e-9)


class TestSMeasure:
    def test_perfect_binary(self, rng):
        g = random_binary_mixed(rng)
        assert s_measure(g.copy(), g) == 1.0

    def test_degenerate_rules(self):
        gt = np.zeros((8, 8), np.uint8)
        assert s_measure(np.zeros((8, 8), np.uint8), gt) == 1.0
        assert s_measure(np.full((8, 8), 255, np.uint8), gt) == 0.0
        gt_full = np.full((8, 8), 255, np.uint8)
        assert s_measure(gt_full.copy(), gt_full) == 1.0

    def test_matches_transcription_oracle(self, rng):
        for _ in range(25):
            pred, gt = random_gray(rng), random_gray(rng)
            assert s_measure(pred, gt) == pytest.approx(s_measure_oracle(pred, gt), abs=1e-9)

    def test_clamped_to_unit_interval(self, rng):
        for _ in range(50):
            v = s_measure(random_gray(rng), random_gray(rng))
            assert 0.0 <= v <= 1.0


class TestWeightedF:
    def test_perfect_binary(self, rng):
        g = random_binary_mixed(rng)
        assert weighted_f_measure(g.copy(), g) == pytest.approx(1.0, abs=1e-9)

    def test_all_zero_prediction_interior_blob(self):
        gt = blob_mask(24, 24, 12, 12, 6)
        assert weighted_f_measure(np.zeros_like(gt), gt) == 0.0

    def test_empty_foreground_raises(self):
        with pytest.raises(EmptyForegroundError):
            weighted_f_measure(np.zeros((6, 6), np.uint8), np.zeros((6, 6), np.uint8))

    def test_matches_transcription_oracle(self, rng):
        for _ in range(15):
            pred, gt = random_gray(rng), random_gray_fg(rng)
            assert weighted_f_measure(pred, gt) == pytest.approx(
                weighted_f_oracle(pred, gt), abs=1e-9
            )


class TestBoundaryIoU:
    def test_perfect_pair(self, rng):
        g = blob_mask(40, 40, 20, 20, 11)
        assert boundary_iou(g.copy(), g) == 1.0

    def test_empty_prediction_solid_gt(self):
        gt = np.zeros((50, 50), np.uint8)
        gt[10:40, 10:40] = 255
        assert boundary_iou(np.zeros_like(gt), gt) == 0.0

    def test_both_bands_empty_raises(self):
        empty = np.zeros((30, 30), np.uint8)
        with pytest.raises(EmptyBandsError):
            boundary_iou(empty.copy(), empty)
        # a full-canvas mask has no band either (frame is not a boundary)
        solid = np.full((30, 30), 255, np.uint8)
        with pytest.raises(EmptyBandsError):
            boundary_iou(solid.copy(), solid)

    def test_shifted_square_golden(self):
        # golden recorded from the band-set enumeration oracle
        gt = np.zeros((100, 100), np.uint8)
        gt[20:80, 20:80] = 255
        pred = np.zeros((100, 100), np.uint8)
        pred[20:80, 21:81] = 255
        value = boundary_iou(pred, gt)
        assert value == 570 / 798
        assert value == boundary_iou_oracle(pred, gt)

    def test_matches_oracle(self, rng):
        for _ in range(15):
            pred = random_binary_mixed(rng, 20, 20)
            gt = random_binary_mixed(rng, 20, 20)
            assert boundary_iou(pred, gt) == boundary_iou_oracle(pred, gt)

    def test_small_image_gets_radius_one(self):
        # 8x8 diagonal ~11.3, ratio 0.02 -> 0.23 -> floored up to 1
        g = np.zeros((8, 8), np.uint8)
        g[2:6, 2:6] = 255
        assert boundary_iou(g.copy(), g) == 1.0


class TestEvaluateAll:
    def test_perfect_pair_all_metrics(self, rng):
        g = random_binary_mixed(rng, 24, 24)
        values = {mv.metric: mv for mv in evaluate_all(g.copy(), g)}
        for mid in (MetricId.PA, MetricId.BIOU, MetricId.E, MetricId.S, MetricId.F):
            assert values[mid].value == 1.0
        assert values[MetricId.WF].value == pytest.approx(1.0, abs=1e-9)
        assert values[MetricId.MAE].value == 0.0
        assert values[MetricId.MSE].value == 0.0

    def test_order_follows_report_columns(self, rng):
        g = random_binary_mixed(rng)
        assert tuple(mv.metric for mv in evaluate_all(g.copy(), g)) == TABLE_ORDER

    def test_empty_foreground_carried_per_metric(self):
        gt = np.full((9, 9), 50, np.uint8)
        pred = np.full((9, 9), 60, np.uint8)
        values = {mv.metric: mv for mv in evaluate_all(pred, gt)}
        for mid in (MetricId.PA, MetricId.F, MetricId.WF):
            assert values[mid].value is None
            assert values[mid].error == "EmptyForeground"
        assert values[MetricId.MAE].value == pytest.approx(10 / 255)
        assert values[MetricId.MSE].value is not None
        assert values[MetricId.E].value is not None
        assert values[MetricId.S].value is not None

    def test_directions(self):
        from toonbench.metrics import MetricValue, higher_is_better

        assert higher_is_better(MetricId.PA)
        assert not higher_is_better(MetricId.MAE)
        assert MetricValue(MetricId.MSE, 0.1).direction == "lowerBetter"
        assert MetricValue(MetricId.BIOU, 0.9).direction == "higherBetter"

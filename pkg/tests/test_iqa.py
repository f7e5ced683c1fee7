import numpy as np
import pytest

from dqi.features import ExtractionConfig, ExtractionMode, depth_features
from dqi.image import Geometry, StereoImage
from dqi.iqa import (
    OVERALL_FEATURE_NAMES,
    ImageMetric,
    bt601_luma,
    local_image_features,
    ms_ssim,
    overall_features,
    psnr,
)
from dqi.synth import DistortionKind, distort, generate_texture, render_stereopair

from reference_impls import msssim_reference


class TestPsnr:
    def test_identical_planes_hit_cap(self):
        a = np.random.default_rng(0).random((32, 32)) * 255
        assert psnr(a, a) == 100.0

    def test_unit_error(self):
        a = np.zeros((16, 16))
        assert psnr(a, a + 1.0) == pytest.approx(10 * np.log10(255.0**2), abs=1e-9)

    def test_full_scale_error(self):
        assert psnr(np.zeros((8, 8)), np.full((8, 8), 255.0)) == 0.0

    def test_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.zeros((8, 8)), np.zeros((8, 9)))


class TestMsSsim:
    def test_self_similarity(self):
        tex = bt601_luma(generate_texture(1, 256, 256))
        assert ms_ssim(tex, tex) == pytest.approx(1.0, abs=1e-9)

    def test_noise_ordering(self):
        tex = bt601_luma(generate_texture(2, 256, 256))
        light = distort(tex, DistortionKind.WHITE_NOISE, 5.0, seed=1)
        heavy = distort(tex, DistortionKind.WHITE_NOISE, 50.0, seed=1)
        assert ms_ssim(tex, heavy) < ms_ssim(tex, light)

    def test_gradient_vs_blur_matches_independent_reimplementation(self):
        grad = np.tile(np.linspace(0.0, 255.0, 256), (256, 1))
        blurred = distort(grad, DistortionKind.GAUSSIAN_BLUR, 1.5)
        assert ms_ssim(grad, blurred) == pytest.approx(
            msssim_reference(grad, blurred), abs=1e-6
        )

    def test_textured_pair_matches_independent_reimplementation(self):
        tex = bt601_luma(generate_texture(3, 256, 256))
        degraded = distort(tex, DistortionKind.JPEG_LIKE, 20.0)
        assert ms_ssim(tex, degraded) == pytest.approx(
            msssim_reference(tex, degraded), abs=1e-6
        )

    def test_symmetric_in_arguments(self):
        tex = bt601_luma(generate_texture(4, 200, 200))
        other = distort(tex, DistortionKind.GAUSSIAN_BLUR, 2.0)
        assert ms_ssim(tex, other) == pytest.approx(ms_ssim(other, tex), abs=1e-12)

    def test_too_small_plane_rejected(self):
        with pytest.raises(ValueError, match="5-scale"):
            ms_ssim(np.zeros((128, 128)), np.zeros((128, 128)))


@pytest.fixture(scope="module")
def erp_pair():
    tex = generate_texture(11, 512, 256)
    return render_stereopair(tex, 12, Geometry.ERP)


class TestLocalImageFeatures:
    def test_identity_msssim(self, erp_pair):
        cfg = ExtractionConfig(out_size=192)
        q = local_image_features(erp_pair, erp_pair, ImageMetric.MSSSIM, cfg)
        assert np.allclose(q, 1.0, atol=1e-9)

    def test_identity_psnr(self, erp_pair):
        q = local_image_features(erp_pair, erp_pair, ImageMetric.PSNR)
        assert np.array_equal(q, [100.0, 100.0])

    def test_symmetric_distortion_balances_eyes(self, erp_pair):
        left = distort(erp_pair.left, DistortionKind.JPEG_LIKE, 40.0)
        right = distort(erp_pair.right, DistortionKind.JPEG_LIKE, 40.0)
        dist = StereoImage(left, right, Geometry.ERP)
        cfg = ExtractionConfig(out_size=192)
        q = local_image_features(erp_pair, dist, ImageMetric.MSSSIM, cfg)
        assert abs(q[0] - q[1]) < 0.05

    def test_geometry_mismatch(self, erp_pair):
        tex = generate_texture(12, 480, 360)
        planar = render_stereopair(tex, 0, Geometry.PLANAR)
        with pytest.raises(ValueError):
            local_image_features(erp_pair, planar, ImageMetric.PSNR)

    def test_planar_center_crop_path(self):
        tex = generate_texture(13, 480, 360)
        ref = render_stereopair(tex, 8, Geometry.PLANAR)
        left = distort(ref.left, DistortionKind.WHITE_NOISE, 8.0, seed=3)
        dist = StereoImage(left, ref.right.copy(), Geometry.PLANAR)
        q = local_image_features(ref, dist, ImageMetric.PSNR)
        assert q[0] < 100.0 and q[1] == 100.0


class TestOverallFeatures:
    def test_reference_equals_distorted_zero_disparity(self):
        tex = generate_texture(14, 512, 256)
        pair = render_stereopair(tex, 0, Geometry.ERP)
        cfg = ExtractionConfig(out_size=192)
        feats = overall_features(pair, pair, ImageMetric.MSSSIM, cfg)
        assert feats.shape == (26,)
        assert np.allclose(feats[:2], 1.0, atol=1e-9)
        assert np.all(feats[2:] == 0.0)

        feats_psnr = overall_features(pair, pair, ImageMetric.PSNR, cfg)
        assert np.array_equal(feats_psnr[:2], [100.0, 100.0])

    def test_tail_equals_depth_features_exactly(self):
        tex = generate_texture(15, 512, 256)
        ref = render_stereopair(tex, 16, Geometry.ERP)
        left = distort(ref.left, DistortionKind.JPEG_LIKE, 50.0)
        right = distort(ref.right, DistortionKind.JPEG_LIKE, 50.0)
        dist = StereoImage(left, right, Geometry.ERP)
        cfg = ExtractionConfig(out_size=192)
        feats = overall_features(ref, dist, ImageMetric.PSNR, cfg)
        assert np.array_equal(feats[2:], depth_features(dist, cfg))

    def test_deterministic(self):
        tex = generate_texture(16, 512, 256)
        ref = render_stereopair(tex, 8, Geometry.ERP)
        dist = StereoImage(
            distort(ref.left, DistortionKind.GAUSSIAN_BLUR, 1.0),
            distort(ref.right, DistortionKind.GAUSSIAN_BLUR, 1.0),
            Geometry.ERP,
        )
        cfg = ExtractionConfig(out_size=192)
        a = overall_features(ref, dist, ImageMetric.MSSSIM, cfg)
        b = overall_features(ref, dist, ImageMetric.MSSSIM, cfg)
        assert np.array_equal(a, b)

    def test_names(self):
        assert len(OVERALL_FEATURE_NAMES) == 26
        assert OVERALL_FEATURE_NAMES[:2] == ("iq_left", "iq_right")

import math
import random

import numpy as np
import pytest

from soundscout.imaging import (
    FrameBuffer,
    PixelFormat,
    center_fit,
    frame_from_bgra,
    frame_from_rgb,
    frame_from_yuv420,
    yuv420_to_bgra8888,
)
from soundscout.detection import unletterbox_bbox
from soundscout.models import BBox


def reference_pixel(y, u, v):
    """Scalar evaluation of the conversion formulas, used as the oracle."""

    def channel(value):
        rounded = math.floor(value + 0.5) if value >= 0 else math.ceil(value - 0.5)
        return min(255, max(0, int(rounded)))

    r = channel(y + 1.402 * (v - 128))
    g = channel(y - 0.344136 * (u - 128) - 0.714136 * (v - 128))
    b = channel(y + 1.772 * (u - 128))
    return b, g, r, 255


def uniform_yuv_frame(width, height, y, u, v):
    cw, ch = math.ceil(width / 2), math.ceil(height / 2)
    return frame_from_yuv420(
        np.full((height, width), y, dtype=np.uint8),
        np.full((ch, cw), u, dtype=np.uint8),
        np.full((ch, cw), v, dtype=np.uint8),
    )


def random_yuv_frame(rng, width, height):
    cw, ch = math.ceil(width / 2), math.ceil(height / 2)
    y = np.array(
        [[rng.randrange(256) for _ in range(width)] for _ in range(height)], dtype=np.uint8
    )
    u = np.array([[rng.randrange(256) for _ in range(cw)] for _ in range(ch)], dtype=np.uint8)
    v = np.array([[rng.randrange(256) for _ in range(cw)] for _ in range(ch)], dtype=np.uint8)
    return frame_from_yuv420(y, u, v)


class TestFrameBuffer:
    def test_rejects_zero_dimensions(self):
        with pytest.raises(ValueError):
            FrameBuffer(0, 4, PixelFormat.RGB888, (np.zeros((4, 0), dtype=np.uint8),))

    def test_rejects_mismatched_planes(self):
        y = np.zeros((4, 4), dtype=np.uint8)
        u = np.zeros((1, 2), dtype=np.uint8)  # should be 2x2
        v = np.zeros((2, 2), dtype=np.uint8)
        with pytest.raises(ValueError):
            FrameBuffer(4, 4, PixelFormat.YUV420_PLANAR, (y, u, v))

    def test_accepts_padded_strides(self):
        y = np.zeros((4, 7), dtype=np.uint8)  # stride 7 >= width 4
        u = np.zeros((2, 3), dtype=np.uint8)
        v = np.zeros((2, 3), dtype=np.uint8)
        frame = FrameBuffer(4, 4, PixelFormat.YUV420_PLANAR, (y, u, v))
        assert frame.chroma_size == (2, 2)

    def test_planes_frozen_after_construction(self):
        frame = frame_from_rgb(np.zeros((2, 2, 3), dtype=np.uint8))
        with pytest.raises(ValueError):
            frame.planes[0][0, 0] = 1


class TestYuvConversion:
    def test_mid_gray(self):
        out = yuv420_to_bgra8888(uniform_yuv_frame(4, 4, 128, 128, 128))
        assert np.all(out.pixels() == 128 + np.array([0, 0, 0, 127], dtype=np.uint8))

    def test_white(self):
        out = yuv420_to_bgra8888(uniform_yuv_frame(6, 2, 255, 128, 128))
        assert np.all(out.pixels() == 255)

    def test_single_pixel_against_reference(self):
        out = yuv420_to_bgra8888(uniform_yuv_frame(1, 1, 100, 200, 50))
        assert tuple(out.pixels()[0, 0]) == reference_pixel(100, 200, 50)
        # independently computed: red clamps to 0, green 130.92->131, blue 227.58->228
        assert tuple(out.pixels()[0, 0]) == (228, 131, 0, 255)

    def test_pointwise_matches_reference_on_random_frames(self):
        rng = random.Random(42)
        for width, height in [(6, 4), (5, 3), (8, 8), (3, 5)]:
            frame = random_yuv_frame(rng, width, height)
            out = yuv420_to_bgra8888(frame).pixels()
            y_plane, u_plane, v_plane = frame.planes
            for py in range(height):
                for px in range(width):
                    expected = reference_pixel(
                        int(y_plane[py, px]),
                        int(u_plane[py // 2, px // 2]),
                        int(v_plane[py // 2, px // 2]),
                    )
                    assert tuple(out[py, px]) == expected

    def test_gray_chroma_preserves_luma(self):
        rng = random.Random(7)
        frame = frame_from_yuv420(
            np.array([[rng.randrange(256) for _ in range(8)] for _ in range(6)], dtype=np.uint8),
            np.full((3, 4), 128, dtype=np.uint8),
            np.full((3, 4), 128, dtype=np.uint8),
        )
        out = yuv420_to_bgra8888(frame).pixels()
        y = frame.planes[0]
        assert np.array_equal(out[:, :, 0], y)
        assert np.array_equal(out[:, :, 1], y)
        assert np.array_equal(out[:, :, 2], y)

    def test_all_outputs_within_range_on_coarse_grid(self):
        for y in range(0, 256, 51):
            for u in range(0, 256, 51):
                for v in range(0, 256, 51):
                    out = yuv420_to_bgra8888(uniform_yuv_frame(2, 2, y, u, v)).pixels()
                    assert out.min() >= 0 and out.max() <= 255

    def test_deterministic(self):
        frame = random_yuv_frame(random.Random(3), 10, 6)
        first = yuv420_to_bgra8888(frame).planes[0].tobytes()
        second = yuv420_to_bgra8888(frame).planes[0].tobytes()
        assert first == second

    def test_stride_padding_ignored(self):
        rng = random.Random(11)
        base = random_yuv_frame(rng, 4, 4)
        y, u, v = (np.asarray(p) for p in base.planes)
        padded = FrameBuffer(
            4,
            4,
            PixelFormat.YUV420_PLANAR,
            (
                np.hstack([y, np.full((4, 3), 0xEE, dtype=np.uint8)]),
                np.hstack([u, np.full((2, 1), 0xEE, dtype=np.uint8)]),
                np.hstack([v, np.full((2, 1), 0xEE, dtype=np.uint8)]),
            ),
        )
        assert np.array_equal(
            yuv420_to_bgra8888(padded).pixels(), yuv420_to_bgra8888(base).pixels()
        )

    def test_rejects_wrong_format(self):
        frame = frame_from_rgb(np.zeros((2, 2, 3), dtype=np.uint8))
        with pytest.raises(ValueError):
            yuv420_to_bgra8888(frame)

    def test_timestamp_carried_over(self):
        frame = frame_from_yuv420(
            np.zeros((2, 2), dtype=np.uint8),
            np.zeros((1, 1), dtype=np.uint8),
            np.zeros((1, 1), dtype=np.uint8),
            timestamp_us=777,
        )
        assert yuv420_to_bgra8888(frame).timestamp_us == 777


class TestCenterFit:
    def test_identity(self):
        rng = np.random.default_rng(5)
        arr = rng.integers(0, 256, size=(448, 448, 3), dtype=np.uint8)
        frame = frame_from_rgb(arr, timestamp_us=123)
        fitted, params = center_fit(frame, 448, 448)
        assert np.array_equal(fitted.pixels(), arr)
        assert (params.scale, params.offset_x, params.offset_y) == (1.0, 0.0, 0.0)
        assert fitted.timestamp_us == 123

    def test_wide_frame_letterboxes_vertically(self):
        frame = frame_from_rgb(np.full((448, 896, 3), 200, dtype=np.uint8))
        fitted, params = center_fit(frame, 448, 448, pad_value=0)
        assert params.scale == 0.5
        assert (params.offset_x, params.offset_y) == (0.0, 112.0)
        out = fitted.pixels()
        assert np.all(out[:112] == 0) and np.all(out[-112:] == 0)
        assert np.all(out[112:336] == 200)

    def test_square_into_wide_target(self):
        frame = frame_from_rgb(np.full((100, 100, 3), 30, dtype=np.uint8))
        fitted, params = center_fit(frame, 200, 100, pad_value=9)
        assert params.scale == 1.0
        assert (params.offset_x, params.offset_y) == (50.0, 0.0)
        out = fitted.pixels()
        assert np.all(out[:, :50] == 9) and np.all(out[:, 150:] == 9)
        assert np.all(out[:, 50:150] == 30)

    def test_visible_region_maps_back_to_full_frame(self):
        rng = random.Random(21)
        for _ in range(50):
            w, h = rng.randrange(16, 800), rng.randrange(16, 800)
            tw, th = rng.randrange(16, 800), rng.randrange(16, 800)
            frame = frame_from_rgb(np.zeros((h, w, 3), dtype=np.uint8))
            _, params = center_fit(frame, tw, th)
            visible = BBox(
                params.offset_x / tw,
                params.offset_y / th,
                min(1.0, (params.offset_x + w * params.scale) / tw),
                min(1.0, (params.offset_y + h * params.scale) / th),
            )
            back = unletterbox_bbox(visible, params)
            for got, want in zip(back.as_list(), [0.0, 0.0, 1.0, 1.0]):
                assert got == pytest.approx(want, abs=1e-6)

    def test_bgra_supported(self):
        frame = frame_from_bgra(np.full((50, 100, 4), 77, dtype=np.uint8))
        fitted, params = center_fit(frame, 100, 100, pad_value=3)
        assert fitted.format is PixelFormat.BGRA8888
        assert params.offset_y == 25.0

    def test_rejects_zero_target(self):
        frame = frame_from_rgb(np.zeros((4, 4, 3), dtype=np.uint8))
        with pytest.raises(ValueError):
            center_fit(frame, 0, 100)

    def test_rejects_planar_input(self):
        frame = frame_from_yuv420(
            np.zeros((4, 4), dtype=np.uint8),
            np.zeros((2, 2), dtype=np.uint8),
            np.zeros((2, 2), dtype=np.uint8),
        )
        with pytest.raises(ValueError):
            center_fit(frame, 8, 8)


class TestImageLoader:
    @pytest.mark.parametrize("suffix", [".png", ".ppm"])
    def test_reads_fixture_images(self, tmp_path, suffix):
        import cv2

        from soundscout.imaging import load_image_rgb

        rgb = np.zeros((8, 12, 3), dtype=np.uint8)
        rgb[:, :, 0] = 200  # strong red, catches channel-order slips
        rgb[2:5, 3:7, 1] = 90
        path = str(tmp_path / f"fixture{suffix}")
        assert cv2.imwrite(path, rgb[:, :, ::-1])

        frame = load_image_rgb(path, timestamp_us=11)
        assert frame.width == 12 and frame.height == 8
        assert frame.timestamp_us == 11
        assert np.array_equal(frame.pixels(), rgb)

    def test_unreadable_path_raises(self, tmp_path):
        from soundscout.imaging import load_image_rgb

        with pytest.raises(IOError):
            load_image_rgb(str(tmp_path / "missing.png"))

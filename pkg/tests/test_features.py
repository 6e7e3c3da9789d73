import math

import numpy as np
import pytest

from nftperf.features import (
    ScaleSpaceParams,
    assign_orientation,
    build_scale_space,
    compute_dog,
    detect_extrema,
    extract_channel_descriptors,
    extract_features,
)
from nftperf.features.sift import Keypoint, extract_descriptor
from nftperf.fixtures import _textured

P = ScaleSpaceParams()


def test_gaussian_kernel_center_weight():
    # continuous kernel at the origin with sigma 1: 1 / (2 pi)
    sigma = 1.0
    center = 1.0 / (2.0 * math.pi * sigma * sigma)
    assert center == pytest.approx(0.15915, abs=1e-5)


def test_constant_image_pyramid_constant():
    ch = np.full((32, 32), 0.5)
    g = build_scale_space(ch, P)
    for layers in g.octaves:
        for layer in layers:
            assert np.allclose(layer, 0.5, atol=1e-9)


def test_octave_and_layer_counts_64():
    ch = np.zeros((64, 64))
    g = build_scale_space(ch, P)
    assert len(g.octaves) == 4  # floor(log2(64)) - 2
    assert all(len(layers) == P.scales_per_octave + 3 for layers in g.octaves)


def test_cumulative_scale_equivalence():
    # incremental blurring must land on the same scale as one direct blur
    from scipy.ndimage import gaussian_filter
    rng = np.random.default_rng(0)
    ch = rng.random((48, 48))
    g = build_scale_space(ch, P)
    direct = gaussian_filter(ch, P.sigma0 * P.k ** 2, mode="nearest")
    # border handling differs between one-shot and repeated filtering;
    # compare away from the edges
    assert np.allclose(g.octaves[0][2][8:-8, 8:-8], direct[8:-8, 8:-8], atol=1e-4)


def test_dog_layer_counts_and_pointwise():
    rng = np.random.default_rng(1)
    g = build_scale_space(rng.random((32, 32)), P)
    d = compute_dog(g)
    for go, do in zip(g.octaves, d.octaves):
        assert len(do) == len(go) - 1
        for j in range(len(do)):
            assert np.array_equal(do[j], go[j + 1] - go[j])


def test_dog_constant_zero():
    d = compute_dog(build_scale_space(np.full((32, 32), 0.5), P))
    for layers in d.octaves:
        for layer in layers:
            assert np.allclose(layer, 0.0, atol=1e-12)


def test_dog_peak_at_bright_pixel():
    # single bright pixel: |DoG| peaks at/adjacent to it (dense conv oracle
    # is the impulse response itself, which is radially decreasing)
    ch = np.zeros((32, 32))
    ch[16, 16] = 1.0
    d = compute_dog(build_scale_space(ch, P))
    layer = np.abs(d.octaves[0][0])
    y, x = np.unravel_index(np.argmax(layer), layer.shape)
    assert abs(y - 16) <= 1 and abs(x - 16) <= 1


def brute_force_extrema(d, params):
    """Independent 26-neighbor scan, plain loops."""
    found = []
    for o, layers in enumerate(d.octaves):
        D = np.stack(layers)
        L, H, W = D.shape
        for l in range(1, L - 1):
            for y in range(1, H - 1):
                for x in range(1, W - 1):
                    v = D[l, y, x]
                    if abs(v) < params.contrast_threshold:
                        continue
                    nb = D[l - 1:l + 2, y - 1:y + 2, x - 1:x + 2].ravel()
                    others = np.delete(nb, 13)
                    if (v > others).all() or (v < others).all():
                        found.append((o, l, x, y))
    return found


def test_extrema_all_zero_dog():
    d = compute_dog(build_scale_space(np.zeros((32, 32)), P))
    assert detect_extrema(d, P) == []


def test_extrema_gaussian_blob():
    yy, xx = np.mgrid[0:32, 0:32]
    ch = np.exp(-((yy - 16) ** 2 + (xx - 16) ** 2) / (2 * 2.5 ** 2))
    d = compute_dog(build_scale_space(ch, P))
    kps = detect_extrema(d, P)
    assert any(abs(k.x - 16) <= 2 and abs(k.y - 16) <= 2 for k in kps)
    # brute-force oracle agrees before the edge filter: every detected
    # keypoint must be in the oracle's candidate list
    oracle = set(brute_force_extrema(d, P))
    for k in kps:
        assert (k.octave, k.scale_index, k.x, k.y) in oracle


def test_extrema_contrast_threshold_discards():
    params = ScaleSpaceParams(contrast_threshold=0.03)
    # scale a blob so DoG peaks sit below threshold/... small amplitude
    yy, xx = np.mgrid[0:32, 0:32]
    blob = np.exp(-((yy - 16) ** 2 + (xx - 16) ** 2) / (2 * 2.5 ** 2))
    d = compute_dog(build_scale_space(blob, params))
    peak = max(np.abs(l).max() for o in d.octaves for l in o)
    weak = blob * (params.contrast_threshold / 2 / peak)
    d2 = compute_dog(build_scale_space(weak, params))
    assert detect_extrema(d2, params) == []


def test_orientation_ramp_x():
    w = 32
    ch = np.tile(np.arange(w) / w, (w, 1))
    g = build_scale_space(ch, ScaleSpaceParams(octaves=1))
    kp = Keypoint(0, 1, 16, 16, P.sigma0 * P.k)
    out = assign_orientation(kp, g)
    assert len(out) == 1
    assert out[0].orientation == pytest.approx(0.0, abs=1e-6)


def test_orientation_ramp_y():
    h = 32
    ch = np.tile((np.arange(h) / h)[:, None], (1, h))
    g = build_scale_space(ch, ScaleSpaceParams(octaves=1))
    kp = Keypoint(0, 1, 16, 16, P.sigma0 * P.k)
    out = assign_orientation(kp, g)
    assert len(out) == 1
    assert out[0].orientation == pytest.approx(math.pi / 2, abs=1e-6)


def test_orientation_constant_region_empty():
    g = build_scale_space(np.full((32, 32), 0.3), ScaleSpaceParams(octaves=1))
    kp = Keypoint(0, 1, 16, 16, P.sigma0 * P.k)
    assert assign_orientation(kp, g) == []


def test_descriptor_shape_and_norm():
    rng = np.random.default_rng(2)
    ch = _textured(rng, 64)[:, :, 0]
    descs = extract_channel_descriptors(ch, P)
    assert descs.shape[0] > 0
    assert descs.shape[1] == 128
    assert np.allclose(np.linalg.norm(descs, axis=1), 1.0, atol=1e-6)
    assert (descs >= 0).all()


def test_descriptor_determinism():
    rng = np.random.default_rng(3)
    ch = _textured(rng, 64)[:, :, 1]
    d1 = extract_channel_descriptors(ch, P)
    d2 = extract_channel_descriptors(ch.copy(), P)
    assert np.array_equal(d1, d2)


def test_descriptor_window_out_of_bounds_skipped():
    g = build_scale_space(np.random.default_rng(4).random((32, 32)),
                          ScaleSpaceParams(octaves=1))
    kp = Keypoint(0, 1, 2, 2, P.sigma0 * P.k, 0.0)
    assert extract_descriptor(kp, g) is None


def test_small_image_empty_sets():
    img = np.random.default_rng(5).random((8, 8, 3))
    f = extract_features(img, P)
    assert f.r.shape == (0, 128) and f.g.shape == (0, 128) and f.b.shape == (0, 128)


def test_grayscale_channels_identical():
    rng = np.random.default_rng(6)
    gray = _textured(rng, 64)[:, :, 0]
    img = np.stack([gray, gray, gray], axis=2)
    f = extract_features(img, P)
    assert np.array_equal(f.r, f.g) and np.array_equal(f.g, f.b)


def test_golden_descriptor_count():
    # frozen after first computation; guards against silent pipeline drift
    rng = np.random.default_rng(7)
    img = _textured(rng, 64)
    f = extract_features(img, P)
    counts = (len(f.r), len(f.g), len(f.b))
    assert counts == test_golden_descriptor_count.expected


# computed once from the reference run of this pipeline; update only with
# an intentional algorithm change
test_golden_descriptor_count.expected = (19, 27, 21)

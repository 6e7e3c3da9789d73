"""Per-channel local visual features.

Pipeline per channel: Gaussian scale space -> difference-of-Gaussians ->
26-neighbor extrema -> orientation assignment -> 128-d gradient-histogram
descriptors, normalized to unit length. Everything is deterministic: the
same image bytes and parameters produce bit-identical descriptors.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from ..model import UndecodableImage

MIN_CHANNEL_SIDE = 16  # smaller images yield empty descriptor sets
DESCRIPTOR_DIM = 128
_N_ORI_BINS = 36
_PEAK_FRACTION = 0.8
_DESC_WINDOW = 16  # spatial extent of the descriptor window, pixels
_DESC_CELLS = 4
_DESC_ORI_BINS = 8
_DESC_SIGMA = 8.0
_DESC_CLAMP = 0.2


@dataclass(frozen=True)
class ScaleSpaceParams:
    sigma0: float = 1.6
    scales_per_octave: int = 3
    octaves: int | None = None  # None: floor(log2(min side)) - 2, at least 1
    contrast_threshold: float = 0.03
    edge_ratio_threshold: float = 10.0

    def __post_init__(self):
        if self.sigma0 <= 0:
            raise ValueError("sigma0 must be positive")
        if self.scales_per_octave < 1:
            raise ValueError("scales_per_octave must be >= 1")
        if self.octaves is not None and self.octaves < 1:
            raise ValueError("octaves must be >= 1")

    @property
    def k(self) -> float:
        return 2.0 ** (1.0 / self.scales_per_octave)

    def octaves_for(self, width: int, height: int) -> int:
        if self.octaves is not None:
            return self.octaves
        return max(1, int(math.floor(math.log2(min(width, height)))) - 2)

    def params_hash(self) -> str:
        key = (f"{self.sigma0!r}|{self.scales_per_octave}|{self.octaves!r}|"
               f"{self.contrast_threshold!r}|{self.edge_ratio_threshold!r}")
        return hashlib.sha256(key.encode()).hexdigest()[:16]


@dataclass
class GaussianPyramid:
    params: ScaleSpaceParams
    octaves: list  # octaves[o][j] is an (h, w) float array at scale sigma0*k^j

    def layer(self, octave: int, scale_index: int) -> np.ndarray:
        return self.octaves[octave][scale_index]


@dataclass
class DogPyramid:
    params: ScaleSpaceParams
    octaves: list  # octaves[o][j] = gaussian layer j+1 - layer j


@dataclass(frozen=True)
class Keypoint:
    octave: int
    scale_index: int  # index into the DoG / Gaussian stack of its octave
    x: int  # column, octave coordinates
    y: int  # row, octave coordinates
    sigma: float  # absolute scale: sigma0 * k^scale_index * 2^octave
    orientation: float = 0.0  # radians in [0, 2pi)

    def local_sigma(self, params: ScaleSpaceParams) -> float:
        return params.sigma0 * params.k ** self.scale_index


@dataclass(frozen=True)
class Descriptor:
    vector: np.ndarray  # 128 non-negative reals, unit norm
    origin: Keypoint


@dataclass
class ChannelDescriptorSet:
    """Per-channel descriptor arrays, each (n, 128), deterministic row order."""
    r: np.ndarray
    g: np.ndarray
    b: np.ndarray

    def channel(self, tag: str) -> np.ndarray:
        return {"R": self.r, "G": self.g, "B": self.b}[tag]

    @staticmethod
    def empty() -> "ChannelDescriptorSet":
        z = np.zeros((0, DESCRIPTOR_DIM))
        return ChannelDescriptorSet(z, z.copy(), z.copy())


def build_scale_space(channel: np.ndarray, params: ScaleSpaceParams) -> GaussianPyramid:
    """Gaussian pyramid: s+3 layers per octave, cumulative scale sigma0*k^j.

    Octave 0's base is the input blurred to sigma0 (no initial upsampling);
    each next octave starts from the previous octave's 2*sigma0 layer
    downsampled by 2.
    """
    ch = np.asarray(channel, dtype=np.float64)
    s = params.scales_per_octave
    k = params.k
    n_layers = s + 3
    n_octaves = params.octaves_for(ch.shape[1], ch.shape[0])

    octaves = []
    base = gaussian_filter(ch, params.sigma0, mode="nearest")
    for _ in range(n_octaves):
        layers = [base]
        for j in range(1, n_layers):
            # incremental blur so that the cumulative scale is sigma0 * k^j
            sig_prev = params.sigma0 * k ** (j - 1)
            sig_next = params.sigma0 * k ** j
            inc = math.sqrt(sig_next * sig_next - sig_prev * sig_prev)
            layers.append(gaussian_filter(layers[-1], inc, mode="nearest"))
        octaves.append(layers)
        # layer s sits at scale 2*sigma0; halve it for the next octave base
        base = layers[s][::2, ::2]
        if min(base.shape) < 3:
            break
    return GaussianPyramid(params, octaves)


def compute_dog(g: GaussianPyramid) -> DogPyramid:
    out = []
    for layers in g.octaves:
        out.append([layers[j + 1] - layers[j] for j in range(len(layers) - 1)])
    return DogPyramid(g.params, out)


def detect_extrema(d: DogPyramid, params: ScaleSpaceParams) -> list:
    """Strict 26-neighbor extrema, contrast-thresholded and edge-filtered.

    Border pixels and the outermost DoG layers are never candidates.
    """
    keypoints = []
    r = params.edge_ratio_threshold
    edge_bound = (r + 1.0) ** 2 / r
    for o, layers in enumerate(d.octaves):
        if len(layers) < 3:
            continue
        D = np.stack(layers)  # (L, H, W)
        L, H, W = D.shape
        if H < 3 or W < 3:
            continue
        center = D[1:-1, 1:-1, 1:-1]
        is_max = np.ones(center.shape, dtype=bool)
        is_min = np.ones(center.shape, dtype=bool)
        for dl in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dl == 0 and dy == 0 and dx == 0:
                        continue
                    nb = D[1 + dl:L - 1 + dl, 1 + dy:H - 1 + dy, 1 + dx:W - 1 + dx]
                    is_max &= center > nb
                    is_min &= center < nb
        cand = (is_max | is_min) & (np.abs(center) >= params.contrast_threshold)
        for l0, y0, x0 in zip(*np.nonzero(cand)):
            l, y, x = l0 + 1, y0 + 1, x0 + 1
            dxx = D[l, y, x + 1] + D[l, y, x - 1] - 2.0 * D[l, y, x]
            dyy = D[l, y + 1, x] + D[l, y - 1, x] - 2.0 * D[l, y, x]
            dxy = (D[l, y + 1, x + 1] - D[l, y + 1, x - 1]
                   - D[l, y - 1, x + 1] + D[l, y - 1, x - 1]) / 4.0
            tr = dxx + dyy
            det = dxx * dyy - dxy * dxy
            if det <= 0 or tr * tr / det >= edge_bound:
                continue
            sigma = params.sigma0 * params.k ** l * 2.0 ** o
            keypoints.append(Keypoint(o, int(l), int(x), int(y), sigma))
    return keypoints


def _gradients(Lm: np.ndarray, ys: np.ndarray, xs: np.ndarray):
    dx = Lm[ys, xs + 1] - Lm[ys, xs - 1]
    dy = Lm[ys + 1, xs] - Lm[ys - 1, xs]
    mag = np.hypot(dx, dy)
    ori = np.mod(np.arctan2(dy, dx), 2.0 * np.pi)
    return mag, ori


def assign_orientation(kp: Keypoint, g: GaussianPyramid) -> list:
    """One oriented keypoint per dominant orientation-histogram peak.

    36-bin histogram of gradient orientations, magnitude- and
    Gaussian-weighted over a radius-3*1.5*sigma neighborhood. Returns [] for
    zero-gradient regions.
    """
    params = g.params
    Lm = g.layer(kp.octave, kp.scale_index)
    h, w = Lm.shape
    sig = 1.5 * kp.local_sigma(params)
    radius = max(1, int(round(3.0 * sig)))

    y0, y1 = max(1, kp.y - radius), min(h - 2, kp.y + radius)
    x0, x1 = max(1, kp.x - radius), min(w - 2, kp.x + radius)
    if y0 > y1 or x0 > x1:
        return []
    ys, xs = np.mgrid[y0:y1 + 1, x0:x1 + 1]
    mag, ori = _gradients(Lm, ys, xs)
    weight = np.exp(-((ys - kp.y) ** 2 + (xs - kp.x) ** 2) / (2.0 * sig * sig))

    width = 2.0 * np.pi / _N_ORI_BINS
    bins = np.mod(np.round(ori / width).astype(int), _N_ORI_BINS)
    hist = np.bincount(bins.ravel(), weights=(mag * weight).ravel(),
                       minlength=_N_ORI_BINS)
    peak = hist.max()
    if peak <= 0:
        return []
    out = []
    for b in range(_N_ORI_BINS):
        v = hist[b]
        if v < _PEAK_FRACTION * peak or v <= 0:
            continue
        left = hist[(b - 1) % _N_ORI_BINS]
        right = hist[(b + 1) % _N_ORI_BINS]
        if v < left or v < right:
            continue
        out.append(Keypoint(kp.octave, kp.scale_index, kp.x, kp.y, kp.sigma,
                            float(b * width % (2.0 * np.pi))))
    return out


# Precomputed descriptor sampling grid: 16x16 offsets around the keypoint.
_grid = np.arange(_DESC_WINDOW) - (_DESC_WINDOW - 1) / 2.0
_GRID_U, _GRID_V = np.meshgrid(_grid, _grid)  # u: along rotated x, v: rotated y
_CELL_U = (np.arange(_DESC_WINDOW) // (_DESC_WINDOW // _DESC_CELLS))
_GRID_CELL = (_CELL_U[:, None] * _DESC_CELLS + _CELL_U[None, :])  # v-major cells
_GRID_WEIGHT = np.exp(-(_GRID_U ** 2 + _GRID_V ** 2) / (2.0 * _DESC_SIGMA ** 2))


def extract_descriptor(kp: Keypoint, g: GaussianPyramid):
    """128-d descriptor: 4x4 spatial cells x 8 orientation bins over the
    rotated 16x16 window, Gaussian-weighted, clamped at 0.2, unit-normalized.

    Returns None when the rotated window exits the image or the region has
    zero gradient; such keypoints are skipped.
    """
    Lm = g.layer(kp.octave, kp.scale_index)
    h, w = Lm.shape
    c, s = math.cos(kp.orientation), math.sin(kp.orientation)
    px = kp.x + c * _GRID_U - s * _GRID_V
    py = kp.y + s * _GRID_U + c * _GRID_V
    xs = np.round(px).astype(int)
    ys = np.round(py).astype(int)
    if xs.min() < 1 or ys.min() < 1 or xs.max() > w - 2 or ys.max() > h - 2:
        return None
    mag, ori = _gradients(Lm, ys, xs)
    rel = np.mod(ori - kp.orientation, 2.0 * np.pi)
    obins = np.minimum((rel / (2.0 * np.pi / _DESC_ORI_BINS)).astype(int),
                       _DESC_ORI_BINS - 1)
    flat_bins = _GRID_CELL * _DESC_ORI_BINS + obins
    vec = np.bincount(flat_bins.ravel(), weights=(mag * _GRID_WEIGHT).ravel(),
                      minlength=DESCRIPTOR_DIM).astype(np.float64)
    norm = np.linalg.norm(vec)
    if norm == 0:
        return None
    vec /= norm
    np.clip(vec, 0.0, _DESC_CLAMP, out=vec)
    norm = np.linalg.norm(vec)
    if norm == 0:
        return None
    vec /= norm
    return Descriptor(vec, kp)


def extract_channel_descriptors(channel: np.ndarray,
                                params: ScaleSpaceParams) -> np.ndarray:
    """Full per-channel pipeline; rows ordered by
    (octave, scale_index, y, x, orientation)."""
    ch = np.asarray(channel, dtype=np.float64)
    if min(ch.shape) < MIN_CHANNEL_SIDE:
        return np.zeros((0, DESCRIPTOR_DIM))
    g = build_scale_space(ch, params)
    d = compute_dog(g)
    oriented = []
    for kp in detect_extrema(d, params):
        oriented.extend(assign_orientation(kp, g))
    oriented.sort(key=lambda q: (q.octave, q.scale_index, q.y, q.x, q.orientation))
    rows = []
    for kp in oriented:
        desc = extract_descriptor(kp, g)
        if desc is not None:
            rows.append(desc.vector)
    if not rows:
        return np.zeros((0, DESCRIPTOR_DIM))
    return np.vstack(rows)


def extract_features(image: np.ndarray,
                     params: ScaleSpaceParams | None = None) -> ChannelDescriptorSet:
    """Descriptors for each RGB channel of an (h, w, 3) image in [0, 1]."""
    params = params or ScaleSpaceParams()
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError("expected an (h, w, 3) RGB array")
    return ChannelDescriptorSet(
        r=extract_channel_descriptors(img[:, :, 0], params),
        g=extract_channel_descriptors(img[:, :, 1], params),
        b=extract_channel_descriptors(img[:, :, 2], params),
    )


def load_image_rgb(path: str) -> np.ndarray:
    """Decode to 8-bit RGB scaled to [0, 1]; alpha composited over white."""
    try:
        with Image.open(path) as im:
            if im.mode in ("RGBA", "LA", "PA"):
                bg = Image.new("RGBA", im.size, (255, 255, 255, 255))
                bg.paste(im.convert("RGBA"), (0, 0), im.convert("RGBA"))
                im = bg.convert("RGB")
            else:
                im = im.convert("RGB")
            return np.asarray(im, dtype=np.float64) / 255.0
    except (OSError, ValueError) as exc:
        raise UndecodableImage(str(path)) from exc

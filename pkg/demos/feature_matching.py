"""Walk through keypoint description and descriptor matching.

Builds two images that share a translated texture patch plus one unrelated
noise image, extracts per-channel descriptors, and compares the no-match
ratios. The shared-content pair should score near 0, the noise pair near 1.

Run:  python3 demos/feature_matching.py
"""
import numpy as np

from nftperf.features import extract_features, match_features
from nftperf.fixtures import _textured

rng = np.random.default_rng(5)

patch = _textured(rng, 48)
img_a = rng.random((64, 64, 3))
img_a[8:56, 8:56] = patch
img_b = rng.random((64, 64, 3))
img_b[12:60, 4:52] = patch          # same content, shifted by (+4, -4)
img_noise = rng.random((64, 64, 3))

print("extracting descriptors (three RGB channels per image)...")
fa = extract_features(img_a)
fb = extract_features(img_b)
fn = extract_features(img_noise)
for tag in "RGB":
    print(f"  channel {tag}: {len(fa.channel(tag))} descriptors in image A")

print("\nno-match ratio, image A vs shifted copy / vs noise:")
for tag in "RGB":
    shifted = match_features(fa.channel(tag), fb.channel(tag))
    noise = match_features(fa.channel(tag), fn.channel(tag))
    print(f"  {tag}: shifted={shifted.no_match_ratio:.3f}  "
          f"noise={noise.no_match_ratio:.3f}")

print("\nlow ratios against the shifted copy show the descriptors are "
      "robust to translation; the noise pair finds almost nothing.")

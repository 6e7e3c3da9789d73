from .sift import (
    ChannelDescriptorSet,
    DogPyramid,
    GaussianPyramid,
    Keypoint,
    ScaleSpaceParams,
    assign_orientation,
    build_scale_space,
    compute_dog,
    detect_extrema,
    extract_channel_descriptors,
    extract_descriptor,
    extract_features,
    load_image_rgb,
)
from .matching import KdTree, MatchParams, MatchReport, match_features, match_features_exact

__all__ = [
    "ChannelDescriptorSet",
    "DogPyramid",
    "GaussianPyramid",
    "Keypoint",
    "KdTree",
    "MatchParams",
    "MatchReport",
    "ScaleSpaceParams",
    "assign_orientation",
    "build_scale_space",
    "compute_dog",
    "detect_extrema",
    "extract_channel_descriptors",
    "extract_descriptor",
    "extract_features",
    "load_image_rgb",
    "match_features",
    "match_features_exact",
]

"""Facial morphometry pipeline: landmarks, geometric features, cohort statistics."""

from ._core import (  # noqa: F401
    align_face,
    boxplot_summary,
    crop_with_margin,
    equalize_histogram,
    extract_features,
    hog_descriptor,
    load_image,
    load_landmarks,
    load_shape_model,
    median_filter,
    nose_angle,
    predict_shape,
    rect_sum,
    regularized_incomplete_beta,
    resize,
    save_landmarks,
    save_png,
    save_shape_model,
    student_t_test,
    to_grayscale,
    train_linear_svm,
    train_shape_model,
    welch_t_test,
    ShapeModel,
)

__all__ = [
    "align_face",
    "boxplot_summary",
    "crop_with_margin",
    "equalize_histogram",
    "extract_features",
    "hog_descriptor",
    "load_image",
    "load_landmarks",
    "load_shape_model",
    "median_filter",
    "nose_angle",
    "predict_shape",
    "rect_sum",
    "regularized_incomplete_beta",
    "resize",
    "save_landmarks",
    "save_png",
    "save_shape_model",
    "student_t_test",
    "to_grayscale",
    "train_linear_svm",
    "train_shape_model",
    "welch_t_test",
    "ShapeModel",
]

"""Smoke tests for the Python module: numpy interop plus cross-checks
against scipy/scikit-learn where an independent implementation exists."""

import math

import numpy as np
import pytest

import facemorph as fm


def checkerboard(n=64, tile=8):
    row = (np.arange(n) // tile) % 2
    board = (row[:, None] + row[None, :]) % 2
    return (board * 255).astype(np.uint8)


def synthetic_landmarks():
    """68 points laid out like the standard annotation, in a 600x600 frame."""
    pts = np.zeros((68, 2))
    cx, cy = 300.0, 310.0
    t = np.pi * np.arange(17) / 16.0
    pts[0:17, 0] = cx - 190.0 * np.cos(t)
    pts[0:17, 1] = cy + 240.0 * np.sin(t)
    for j in range(5):
        frac = (j - 2) / 2.0
        pts[17 + j] = (cx - 80 + frac * 34, cy - 95)
        pts[22 + j] = (cx + 80 + frac * 34, cy - 95)
    for j in range(4):
        pts[27 + j] = (cx, cy - 55 + 85 * j / 3.0)
    for j in range(5):
        pts[31 + j] = (cx + 52 * (j - 2) / 4.0, cy + 42)
    eye = np.array([[-28, 0], [-14, -11], [14, -11], [28, 0], [14, 11], [-14, 11]], dtype=float)
    pts[36:42] = eye + (cx - 80, cy - 60)
    pts[42:48] = eye + (cx + 80, cy - 60)
    theta12 = np.pi - np.arange(12) * (2 * np.pi / 12)
    pts[48:60, 0] = cx + 47.5 * np.cos(theta12)
    pts[48:60, 1] = (cy + 110) - 17.0 * np.sin(theta12)
    theta8 = np.pi - np.arange(8) * (2 * np.pi / 8)
    pts[60:68, 0] = cx + 28.5 * np.cos(theta8)
    pts[60:68, 1] = (cy + 110) - 7.65 * np.sin(theta8)
    return pts


def test_grayscale_roundtrip_shapes():
    rgb = np.zeros((10, 12, 3), dtype=np.uint8)
    rgb[..., 0] = 255  # pure red
    gray = fm.to_grayscale(rgb)
    assert gray.shape == (10, 12)
    assert int(gray[0, 0]) == 76  # round(0.299 * 255)


def test_equalize_constant_is_identity():
    img = np.full((8, 8), 37, dtype=np.uint8)
    assert np.array_equal(fm.equalize_histogram(img), img)


def test_median_filter_matches_scipy():
    scipy_ndimage = pytest.importorskip("scipy.ndimage")
    rng = np.random.default_rng(5)
    img = rng.integers(0, 256, size=(20, 25), dtype=np.uint8)
    ours = fm.median_filter(img, 1)
    # edge replication == scipy's 'nearest' mode
    ref = scipy_ndimage.median_filter(img, size=3, mode="nearest")
    assert np.array_equal(ours, ref)


def test_resize_identity_and_mean():
    img = checkerboard(4, 2)
    assert np.array_equal(fm.resize(img, 4, 4), img)
    single = fm.resize(np.array([[0, 255], [255, 0]], dtype=np.uint8), 1, 1)
    assert int(single[0, 0]) == 128


def test_rect_sum_matches_numpy():
    rng = np.random.default_rng(7)
    img = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
    for x, y, w, h in [(0, 0, 16, 16), (3, 2, 5, 7), (10, 11, 1, 1)]:
        assert fm.rect_sum(img, (x, y, w, h)) == int(img[y:y + h, x:x + w].sum())


def test_hog_descriptor_shape_and_zero():
    img = np.full((64, 64), 80, dtype=np.uint8)
    d = fm.hog_descriptor(img, (0, 0, 64, 64))
    assert d.shape == (1764,)
    assert np.all(d == 0.0)
    board = checkerboard()
    d2 = fm.hog_descriptor(board, (0, 0, 64, 64))
    assert d2.max() <= 1.0 and d2.min() >= 0.0 and d2.max() > 0.0


def test_welch_matches_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(11)
    for _ in range(25):
        a = rng.normal(0.0, 1.0, size=rng.integers(5, 40))
        b = rng.normal(0.3, 1.7, size=rng.integers(5, 40))
        t, df, p = fm.welch_t_test(list(a), list(b))
        ref = scipy_stats.ttest_ind(a, b, equal_var=False)
        assert math.isclose(t, ref.statistic, rel_tol=0, abs_tol=1e-10)
        assert math.isclose(p, ref.pvalue, rel_tol=0, abs_tol=1e-10)


def test_student_matches_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(13)
    a = rng.normal(0.0, 1.0, size=20)
    b = rng.normal(0.5, 1.0, size=30)
    t, df, p = fm.student_t_test(list(a), list(b))
    ref = scipy_stats.ttest_ind(a, b, equal_var=True)
    assert df == 48.0
    assert math.isclose(t, ref.statistic, abs_tol=1e-10)
    assert math.isclose(p, ref.pvalue, abs_tol=1e-10)


def test_boxplot_quartiles_match_numpy():
    rng = np.random.default_rng(17)
    x = rng.normal(size=101)
    s = fm.boxplot_summary(list(x))
    assert math.isclose(s["q1"], np.quantile(x, 0.25), abs_tol=1e-12)
    assert math.isclose(s["median"], np.quantile(x, 0.5), abs_tol=1e-12)
    assert math.isclose(s["q3"], np.quantile(x, 0.75), abs_tol=1e-12)


def test_extract_features_and_invariance():
    pts = synthetic_landmarks()
    f = fm.extract_features(pts)
    assert set(f) == {"r1_b1", "r2_b2", "r3_b3", "nose_angle_deg", "r_nose", "r_mouth"}
    assert all(v > 0 for v in f.values())

    angle = 0.3
    rot = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    moved = pts @ rot.T * 1.7 + np.array([40.0, -25.0])
    g = fm.extract_features(moved)
    for key in f:
        assert math.isclose(f[key], g[key], rel_tol=1e-9)


def test_nose_angle_equilateral():
    pts = synthetic_landmarks()
    pts[27] = (0.0, 0.0)
    pts[31] = (-0.5, math.sqrt(3) / 2)
    pts[35] = (0.5, math.sqrt(3) / 2)
    assert math.isclose(fm.nose_angle(pts), 60.0, abs_tol=1e-9)


def test_align_face_levels_eyes():
    pts = synthetic_landmarks()
    angle = math.radians(9.0)
    c, s = math.cos(angle), math.sin(angle)
    center = np.array([300.0, 310.0])
    rolled = (pts - center) @ np.array([[c, s], [-s, c]]) + center  # y-down rotation

    img = np.full((600, 600), 64, dtype=np.uint8)
    five = rolled[[36, 39, 42, 45, 30]]
    aligned, transform = fm.align_face(img, five, 600)
    assert aligned.shape == (600, 600)
    assert math.isclose(abs(transform["rotation"]), angle, rel_tol=1e-9)


def test_shape_model_train_predict_roundtrip(tmp_path):
    rng = np.random.default_rng(19)
    dataset = []
    for _ in range(8):
        pts = synthetic_landmarks() / 3.0
        pts += rng.normal(0.0, 1.5, size=(1, 2))
        img = np.full((200, 200), 128, dtype=np.uint8)
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        box = (int(lo[0]) - 4, int(lo[1]) - 4, int(hi[0] - lo[0]) + 9, int(hi[1] - lo[1]) + 9)
        dataset.append((img, box, pts))

    model = fm.train_shape_model(dataset, stages=2, trees_per_stage=5, feature_pool_size=16)
    assert model.n_points == 68
    assert model.n_stages == 2

    img, box, pts = dataset[0]
    pred = fm.predict_shape(img, box, model)
    assert pred.shape == (68, 2)

    path = str(tmp_path / "model.json")
    fm.save_shape_model(model, path)
    again = fm.predict_shape(img, box, fm.load_shape_model(path))
    assert np.array_equal(pred, again)


def test_landmark_file_roundtrip(tmp_path):
    pts = synthetic_landmarks()
    path = str(tmp_path / "lm.json")
    fm.save_landmarks(pts, path)
    assert np.array_equal(fm.load_landmarks(path), pts)


def test_image_file_roundtrip(tmp_path):
    rng = np.random.default_rng(23)
    img = rng.integers(0, 256, size=(12, 18), dtype=np.uint8)
    path = str(tmp_path / "img.png")
    fm.save_png(img, path)
    assert np.array_equal(fm.load_image(path), img)


def test_svm_accuracy_close_to_sklearn():
    sklearn_svm = pytest.importorskip("sklearn.svm")
    rng = np.random.default_rng(29)
    pos = rng.normal((1.5, 1.5), 1.0, size=(60, 2))
    neg = rng.normal((-1.5, -1.5), 1.0, size=(60, 2))

    ours = fm.train_linear_svm([list(p) for p in pos], [list(n) for n in neg], C=1.0)

    x = np.vstack([pos, neg])
    y = np.array([1] * 60 + [-1] * 60)
    clf = sklearn_svm.LinearSVC(C=1.0)
    clf.fit(x, y)
    sk_acc = clf.score(x, y)
    assert abs(ours["training_accuracy"] - sk_acc) <= 0.05
    # both separators should point the same way
    w = np.array(ours["weights"])
    assert np.dot(w, clf.coef_[0]) > 0

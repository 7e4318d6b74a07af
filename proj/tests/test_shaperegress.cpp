#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "facemorph/rng.hpp"
#include "facemorph/shape_model.hpp"
#include "support/synthetic.hpp"

using namespace facemorph;

namespace {

LandmarkSet scaled(const LandmarkSet& lm, double s) {
    LandmarkSet out = lm;
    for (Point& p : out.points) p = p * s;
    return out;
}

BoundingBox shape_box(const LandmarkSet& lm, double pad_frac = 0.1) {
    double min_x = lm.points[0].x, max_x = min_x, min_y = lm.points[0].y, max_y = min_y;
    for (const Point& p : lm.points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double px = pad_frac * (max_x - min_x), py = pad_frac * (max_y - min_y);
    return {static_cast<int>(min_x - px), static_cast<int>(min_y - py),
            static_cast<int>(max_x - min_x + 2 * px) + 1, static_cast<int>(max_y - min_y + 2 * py) + 1};
}

// Small rendered dataset: jittered faces scaled into a 200x200 canvas, with
// the face box perturbed like an imperfect detector would.
std::vector<TrainingExample> synthetic_dataset(int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TrainingExample> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const LandmarkSet lm = scaled(testsupport::face_landmarks(testsupport::jittered_params(rng)), 1.0 / 3.0);
        TrainingExample ex;
        ex.image = testsupport::render_face(lm, 200, 200);
        ex.shape = lm;
        BoundingBox box = shape_box(lm);
        box.x += rng.uniform_int(-4, 4);
        box.y += rng.uniform_int(-4, 4);
        ex.box = box;
        out.push_back(std::move(ex));
    }
    return out;
}

double mean_landmark_error(const std::vector<TrainingExample>& data, const ShapeModel& model) {
    double total = 0.0;
    size_t n = 0;
    for (const TrainingExample& ex : data) {
        const LandmarkSet pred = predict_shape(ex.image, ex.box, model);
        for (size_t i = 0; i < pred.points.size(); ++i) {
            total += distance(pred.points[i], ex.shape.points[i]);
            ++n;
        }
    }
    return total / static_cast<double>(n);
}

}  // namespace

TEST_CASE("sample_indexed_pixels reads landmark pixels at zero offset") {
    Rng rng(83);
    const Image img = testsupport::noise_image(100, 100, rng);
    const BoundingBox box(0, 0, 100, 100);

    const std::vector<Point> mean = {{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}};
    const std::vector<PixelAnchor> anchors = {{0, {0, 0}}, {1, {0, 0}}, {2, {0, 0}}};
    const auto vals = sample_indexed_pixels(img, box, mean, mean, anchors);
    CHECK(vals[0] == img.at(20, 20));
    CHECK(vals[1] == img.at(80, 20));
    CHECK(vals[2] == img.at(50, 80));
}

TEST_CASE("sample_indexed_pixels applies offsets unwarped at the mean shape") {
    Rng rng(89);
    const Image img = testsupport::noise_image(100, 100, rng);
    const BoundingBox box(0, 0, 100, 100);
    const std::vector<Point> mean = {{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}};
    const std::vector<PixelAnchor> anchors = {{0, {0.1, 0.05}}, {2, {-0.1, 0.0}}};
    const auto vals = sample_indexed_pixels(img, box, mean, mean, anchors);
    CHECK(vals[0] == img.at(30, 25));
    CHECK(vals[1] == img.at(40, 80));
}

TEST_CASE("sample_indexed_pixels scales offsets with the estimate") {
    Image img(200, 200, 1, 0);
    for (int y = 0; y < 200; ++y)
        for (int x = 0; x < 200; ++x) img.at(x, y) = static_cast<std::uint8_t>((x + y) % 251);
    const BoundingBox box(0, 0, 200, 200);

    const std::vector<Point> mean = {{0.2, 0.2}, {0.4, 0.2}, {0.3, 0.4}};
    std::vector<Point> doubled = mean;
    for (Point& p : doubled) p = p * 2.0;

    const std::vector<PixelAnchor> anchors = {{0, {0.05, 0.0}}, {1, {0.0, 0.05}}};
    const auto vals = sample_indexed_pixels(img, box, doubled, mean, anchors);
    // hand-applied similarity warp: pure scale x2 doubles each offset
    CHECK(vals[0] == img.at(static_cast<int>(std::lround((0.4 + 0.1) * 200)),
                            static_cast<int>(std::lround(0.4 * 200))));
    CHECK(vals[1] == img.at(static_cast<int>(std::lround(0.8 * 200)),
                            static_cast<int>(std::lround((0.4 + 0.1) * 200))));
}

TEST_CASE("sample_indexed_pixels returns 0 outside the image") {
    const Image img(50, 50, 1, 200);
    const BoundingBox box(0, 0, 50, 50);
    const std::vector<Point> mean = {{0.5, 0.5}, {0.6, 0.5}};
    const std::vector<PixelAnchor> anchors = {{0, {10.0, 10.0}}};
    const auto vals = sample_indexed_pixels(img, box, mean, mean, anchors);
    CHECK(vals[0] == 0.0);
}

TEST_CASE("predict_shape with an empty model places the mean shape exactly") {
    ShapeModel model;
    model.scheme = LandmarkScheme::FivePoint;
    model.mean_shape = {{0.1, 0.2}, {0.9, 0.2}, {0.5, 0.5}, {0.3, 0.8}, {0.7, 0.8}};

    const Image img(300, 200, 1, 0);
    const BoundingBox box(40, 30, 120, 90);
    const LandmarkSet out = predict_shape(img, box, model);

    for (size_t i = 0; i < model.mean_shape.size(); ++i) {
        CHECK(out.points[i].x == box.x + model.mean_shape[i].x * box.w);
        CHECK(out.points[i].y == box.y + model.mean_shape[i].y * box.h);
    }
}

TEST_CASE("predict_shape applies a forced single-leaf displacement") {
    ShapeModel model;
    model.scheme = LandmarkScheme::FivePoint;
    model.mean_shape = {{0.1, 0.2}, {0.9, 0.2}, {0.5, 0.5}, {0.3, 0.8}, {0.7, 0.8}};
    model.nu = 1.0;

    CascadeStage stage;
    stage.anchors = {{0, {0.0, 0.0}}};
    RegressionTree tree;                       // no splits: one leaf, always taken
    tree.leaves = {std::vector<double>(10, 0.05)};
    stage.trees.push_back(tree);
    model.stages.push_back(stage);

    const Image img(100, 100, 1, 0);
    const BoundingBox box(0, 0, 100, 100);
    const LandmarkSet out = predict_shape(img, box, model);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(out.points[i].x == doctest::Approx((model.mean_shape[i].x + 0.05) * 100).epsilon(1e-12));
        CHECK(out.points[i].y == doctest::Approx((model.mean_shape[i].y + 0.05) * 100).epsilon(1e-12));
    }
}

TEST_CASE("train_shape_model yields zero leaves when every shape is the mean") {
    Rng rng(97);
    std::vector<TrainingExample> data;
    const LandmarkSet lm(LandmarkScheme::FivePoint,
                         {{20, 20}, {80, 20}, {50, 50}, {35, 80}, {65, 80}});
    for (int i = 0; i < 4; ++i) {
        TrainingExample ex;
        ex.image = testsupport::noise_image(100, 100, rng);
        ex.box = BoundingBox(10, 10, 80, 80);
        ex.shape = lm;
        data.push_back(std::move(ex));
    }
    ShapeTrainConfig cfg = ShapeTrainConfig::desk_scale();
    cfg.stages = 2;
    cfg.trees_per_stage = 5;
    const ShapeModel model = train_shape_model(data, cfg);
    for (const auto& stage : model.stages)
        for (const auto& tree : stage.trees)
            for (const auto& leaf : tree.leaves)
                for (double v : leaf) CHECK(v == 0.0);
}

TEST_CASE("train_shape_model drives a separable two-example problem to zero") {
    // two images distinguished by which half is bright, two distinct shapes
    Image img_a(100, 100, 1, 0), img_b(100, 100, 1, 0);
    for (int y = 0; y < 100; ++y)
        for (int x = 0; x < 100; ++x) {
            img_a.at(x, y) = x < 50 ? 255 : 0;
            img_b.at(x, y) = x < 50 ? 0 : 255;
        }
    TrainingExample a, b;
    a.image = img_a;
    a.box = b.box = BoundingBox(10, 10, 80, 80);
    a.shape = LandmarkSet(LandmarkScheme::FivePoint,
                          {{20, 20}, {80, 20}, {50, 50}, {35, 80}, {65, 80}});
    b.image = img_b;
    b.shape = LandmarkSet(LandmarkScheme::FivePoint,
                          {{30, 25}, {70, 25}, {50, 60}, {40, 75}, {60, 75}});

    ShapeTrainConfig cfg;
    cfg.stages = 10;
    cfg.trees_per_stage = 10;
    cfg.tree_depth = 2;
    cfg.nu = 0.5;
    cfg.feature_pool_size = 32;
    cfg.seed = 7;
    const ShapeModel model = train_shape_model({a, b}, cfg);
    CHECK(shape_training_error({a, b}, model) < 1e-8);
}

TEST_CASE("train_shape_model requires two examples and one scheme") {
    std::vector<TrainingExample> one(1);
    one[0].image = Image(50, 50, 1, 0);
    one[0].box = BoundingBox(0, 0, 50, 50);
    one[0].shape = LandmarkSet(LandmarkScheme::FivePoint,
                               {{10, 10}, {40, 10}, {25, 25}, {15, 40}, {35, 40}});
    CHECK_THROWS_WITH_AS(train_shape_model(one, ShapeTrainConfig::desk_scale()),
                         "insufficient data", std::invalid_argument);
}

TEST_CASE("desk-scale training beats the mean-shape baseline and stays monotone") {
    const auto train_set = synthetic_dataset(60, 101);
    const auto held_out = synthetic_dataset(20, 202);

    ShapeTrainConfig cfg = ShapeTrainConfig::desk_scale();
    cfg.stages = 3;
    cfg.trees_per_stage = 30;
    cfg.feature_pool_size = 48;
    cfg.seed = 11;
    const ShapeModel model = train_shape_model(train_set, cfg);

    ShapeModel baseline = model;
    baseline.stages.clear();
    const double base_err = mean_landmark_error(held_out, baseline);
    const double model_err = mean_landmark_error(held_out, model);
    CHECK(model_err < 0.7 * base_err);

    // training loss is non-increasing in the number of applied stages
    double prev = shape_training_error(train_set, baseline);
    ShapeModel truncated = baseline;
    for (const auto& stage : model.stages) {
        truncated.stages.push_back(stage);
        const double err = shape_training_error(train_set, truncated);
        CHECK(err <= prev + 1e-12);
        prev = err;
    }
}

TEST_CASE("shape prediction is equivariant to joint box/content translation") {
    const auto data = synthetic_dataset(12, 303);
    ShapeTrainConfig cfg = ShapeTrainConfig::desk_scale();
    cfg.stages = 2;
    cfg.trees_per_stage = 10;
    cfg.seed = 5;
    const ShapeModel model = train_shape_model(data, cfg);

    const TrainingExample& ex = data.front();
    const int dx = 9, dy = 5;
    Image shifted(ex.image.width + dx, ex.image.height + dy, 1, 64);
    for (int y = 0; y < ex.image.height; ++y)
        for (int x = 0; x < ex.image.width; ++x)
            shifted.at(x + dx, y + dy) = ex.image.at(x, y);

    const LandmarkSet p0 = predict_shape(ex.image, ex.box, model);
    const BoundingBox moved(ex.box.x + dx, ex.box.y + dy, ex.box.w, ex.box.h);
    const LandmarkSet p1 = predict_shape(shifted, moved, model);
    for (size_t i = 0; i < p0.points.size(); ++i) {
        CHECK(p1.points[i].x == p0.points[i].x + dx);
        CHECK(p1.points[i].y == p0.points[i].y + dy);
    }
}

TEST_CASE("shape model serialization reloads to bit-identical predictions") {
    namespace fs = std::filesystem;
    const auto data = synthetic_dataset(12, 404);
    ShapeTrainConfig cfg = ShapeTrainConfig::desk_scale();
    cfg.stages = 2;
    cfg.trees_per_stage = 8;
    cfg.seed = 3;
    const ShapeModel model = train_shape_model(data, cfg);

    const fs::path dir = fs::temp_directory_path() / "facemorph_shape_io";
    fs::create_directories(dir);
    const std::string path = (dir / "model.json").string();
    save_shape_model(model, path);
    const ShapeModel loaded = load_shape_model(path);

    for (const TrainingExample& ex : data) {
        const LandmarkSet a = predict_shape(ex.image, ex.box, model);
        const LandmarkSet b = predict_shape(ex.image, ex.box, loaded);
        for (size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].x == b.points[i].x);
            CHECK(a.points[i].y == b.points[i].y);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("mean_shape arithmetic and scheme checks") {
    const LandmarkSet p(LandmarkScheme::FivePoint,
                        {{10, 10}, {20, 10}, {15, 15}, {12, 20}, {18, 20}});
    const LandmarkSet mean_dup = mean_shape({p, p});
    for (size_t i = 0; i < 5; ++i) {
        CHECK(mean_dup.points[i].x == p.points[i].x);
        CHECK(mean_dup.points[i].y == p.points[i].y);
    }

    LandmarkSet doubled = p;
    for (Point& q : doubled.points) q = q * 2.0;
    const LandmarkSet mid = mean_shape({p, doubled});
    for (size_t i = 0; i < 5; ++i)
        CHECK(mid.points[i].x == doctest::Approx(1.5 * p.points[i].x).epsilon(1e-12));

    Rng rng(107);
    const LandmarkSet any68 = testsupport::random_valid_shape(rng);
    CHECK_THROWS_WITH_AS(mean_shape({p, any68}), "scheme mismatch", std::invalid_argument);
}

TEST_CASE("cohort mean faces differ where the generator injects differences") {
    Rng rng(109);
    const auto plain = testsupport::synthetic_cohort(71, 1.0, 1.0, rng);
    const auto modified = testsupport::synthetic_cohort(55, 1.5, 1.4, rng);
    const LandmarkSet mean_plain = mean_shape(plain);
    const LandmarkSet mean_mod = mean_shape(modified);

    // nose apex (27) and lip extremes (51, 57) move far; eye corners move
    // only by sampling noise
    const double apex_shift = distance(mean_plain.points[27], mean_mod.points[27]);
    const double lip_shift = distance(mean_plain.points[57], mean_mod.points[57]);
    const double eye_shift = std::max(distance(mean_plain.points[36], mean_mod.points[36]),
                                      distance(mean_plain.points[45], mean_mod.points[45]));
    CHECK(apex_shift > 8.0);
    CHECK(lip_shift > 4.0);
    CHECK(eye_shift < 0.5 * apex_shift);
    CHECK(eye_shift < apex_shift);
}

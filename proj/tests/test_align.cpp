#include <doctest.h>

#include <cmath>

#include "facemorph/align.hpp"
#include "facemorph/imgops.hpp"
#include "facemorph/rng.hpp"
#include "support/synthetic.hpp"

using namespace facemorph;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("eye_centroids are corner midpoints") {
    FivePointLandmarks lm;
    lm.left_eye_outer = {0, 0};
    lm.left_eye_inner = {2, 0};
    lm.right_eye_inner = {5, 5};
    lm.right_eye_outer = {5, 5};
    lm.nose_tip = {3, 4};
    const auto [left, right] = eye_centroids(lm);
    CHECK(left.x == 1.0);
    CHECK(left.y == 0.0);
    CHECK(right.x == 5.0);  // coincident corners collapse to the same point
    CHECK(right.y == 5.0);

    lm.left_eye_outer = {1, 2};
    lm.left_eye_inner = {4, 6};
    const auto mid = eye_centroids(lm).first;
    CHECK(mid.x == 2.5);
    CHECK(mid.y == 4.0);
}

TEST_CASE("roll_angle basics") {
    CHECK(roll_angle({100, 200}, {200, 200}) == 0.0);
    CHECK(roll_angle({100, 100}, {200, 200}) == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(roll_angle({0, 0}, {-1, 0}) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(roll_angle({3, 3}, {3, 3}), "degenerate eye geometry",
                         std::invalid_argument);
}

TEST_CASE("roll_angle is antisymmetric modulo pi") {
    Rng rng(71);
    for (int i = 0; i < 50; ++i) {
        const Point a{rng.uniform(0.0, 500.0), rng.uniform(0.0, 500.0)};
        const Point b{rng.uniform(0.0, 500.0), rng.uniform(0.0, 500.0)};
        if (a.x == b.x && a.y == b.y) continue;
        const double fwd = roll_angle(a, b);
        const double rev = roll_angle(b, a);
        double diff = std::fmod(std::abs(fwd - rev), 2.0 * kPi);
        CHECK(std::abs(diff - kPi) < 1e-9);
    }
}

TEST_CASE("map_points applies rotation, scale, translation in order") {
    const std::vector<Point> pts = {{0, 0}, {1, 0}, {3, -2}};

    CHECK(map_points(SimilarityTransform::identity(), pts)[2].x == 3.0);

    SimilarityTransform shift;
    shift.translation = {10, 0};
    const auto moved = map_points(shift, pts);
    CHECK(moved[0].x == 10.0);
    CHECK(moved[0].y == 0.0);

    SimilarityTransform rs;
    rs.rotation = kPi / 2;
    rs.scale = 2.0;
    const auto p = rs.apply({1, 0});  // y-down convention: +90 degrees sends x to +y
    CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("similarity transform round trip is identity within 1e-9") {
    Rng rng(73);
    for (int i = 0; i < 200; ++i) {
        SimilarityTransform t;
        t.rotation = rng.uniform(-kPi, kPi);
        t.scale = rng.uniform(0.2, 5.0);
        t.translation = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        const Point p{rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)};
        const Point back = t.inverse().apply(t.apply(p));
        CHECK(std::abs(back.x - p.x) < 1e-9);
        CHECK(std::abs(back.y - p.y) < 1e-9);
    }
}

TEST_CASE("align_face with level eyes equals a plain resize") {
    Rng rng(79);
    Image img(300, 300, 1);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.uniform_index(256));

    FivePointLandmarks lm;
    lm.left_eye_outer = {80, 150};
    lm.left_eye_inner = {120, 150};
    lm.right_eye_inner = {180, 150};
    lm.right_eye_outer = {220, 150};
    lm.nose_tip = {150, 200};

    const AlignedFace af = align_face(img, lm, 600);
    CHECK(af.transform.rotation == 0.0);
    CHECK(af.transform.scale == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(af.image.width == 600);
    CHECK(af.image.height == 600);

    const Image plain = resize(img, 600, 600);
    // interpolation conventions differ by half a pixel between the two
    // paths; agreement on the interior is what matters
    size_t close = 0, total = 0;
    for (int y = 10; y < 590; y += 7)
        for (int x = 10; x < 590; x += 7) {
            ++total;
            if (std::abs(static_cast<int>(af.image.at(x, y)) - static_cast<int>(plain.at(x, y))) <= 60)
                ++close;
        }
    CHECK(static_cast<double>(close) / static_cast<double>(total) > 0.9);
}

TEST_CASE("align_face levels synthetically rolled faces") {
    for (double deg : {-30.0, -17.0, -5.0, -1.0, 1.0, 8.0, 21.0, 30.0}) {
        testsupport::FaceParams params;
        params.roll = deg * kPi / 180.0;
        const LandmarkSet lm68 = testsupport::face_landmarks(params);
        const Image img = testsupport::render_face(lm68, 600, 600);
        const LandmarkSet five = testsupport::five_points_from(lm68);
        const FivePointLandmarks fp = FivePointLandmarks::from_set(five);

        const AlignedFace af = align_face(img, fp, 600);
        const auto [left, right] = eye_centroids(fp);
        const Point l2 = af.transform.apply(left);
        const Point r2 = af.transform.apply(right);
        CHECK(std::abs(l2.y - r2.y) < 0.5);

        // transform round trip on the landmark points
        for (const Point& p : lm68.points) {
            const Point back = af.transform.inverse().apply(af.transform.apply(p));
            CHECK(std::abs(back.x - p.x) < 1e-9);
            CHECK(std::abs(back.y - p.y) < 1e-9);
        }
    }
}

TEST_CASE("align_face propagates degenerate eye geometry") {
    const Image img(100, 100, 1, 0);
    FivePointLandmarks lm;
    lm.left_eye_outer = lm.left_eye_inner = lm.right_eye_inner = lm.right_eye_outer = {50, 50};
    lm.nose_tip = {50, 70};
    CHECK_THROWS_WITH_AS(align_face(img, lm), "degenerate eye geometry", std::invalid_argument);
}

// Python bindings for the core pipeline operations. Images cross the
// boundary as uint8 numpy arrays (h, w) or (h, w, 3); landmark sets as
// (n, 2) float arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "facemorph/align.hpp"
#include "facemorph/haar.hpp"
#include "facemorph/hog.hpp"
#include "facemorph/image_io.hpp"
#include "facemorph/imgops.hpp"
#include "facemorph/integral_image.hpp"
#include "facemorph/morphometrics.hpp"
#include "facemorph/pipeline.hpp"
#include "facemorph/shape_model.hpp"
#include "facemorph/stats.hpp"
#include "facemorph/svm.hpp"

namespace py = pybind11;
using namespace facemorph;

namespace {

Image image_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() == 2) {
        Image img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)), 1);
        std::memcpy(img.data.data(), arr.data(), img.data.size());
        return img;
    }
    if (arr.ndim() == 3 && arr.shape(2) == 3) {
        Image img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)), 3);
        std::memcpy(img.data.data(), arr.data(), img.data.size());
        return img;
    }
    throw py::value_error("expected a (h, w) or (h, w, 3) uint8 array");
}

py::array_t<std::uint8_t> image_to_array(const Image& img) {
    if (img.channels == 1) {
        py::array_t<std::uint8_t> arr({img.height, img.width});
        std::memcpy(arr.mutable_data(), img.data.data(), img.data.size());
        return arr;
    }
    py::array_t<std::uint8_t> arr({img.height, img.width, img.channels});
    std::memcpy(arr.mutable_data(), img.data.data(), img.data.size());
    return arr;
}

std::vector<Point> points_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2 || arr.shape(1) != 2)
        throw py::value_error("expected an (n, 2) array of points");
    std::vector<Point> pts(arr.shape(0));
    for (py::ssize_t i = 0; i < arr.shape(0); ++i) pts[i] = {arr.at(i, 0), arr.at(i, 1)};
    return pts;
}

py::array_t<double> points_to_array(const std::vector<Point>& pts) {
    py::array_t<double> arr({static_cast<py::ssize_t>(pts.size()), static_cast<py::ssize_t>(2)});
    for (size_t i = 0; i < pts.size(); ++i) {
        arr.mutable_at(i, 0) = pts[i].x;
        arr.mutable_at(i, 1) = pts[i].y;
    }
    return arr;
}

LandmarkSet landmarks_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    std::vector<Point> pts = points_from_array(arr);
    LandmarkScheme scheme;
    if (pts.size() == 5) scheme = LandmarkScheme::FivePoint;
    else if (pts.size() == 68) scheme = LandmarkScheme::SixtyEightPoint;
    else throw py::value_error("expected 5 or 68 points");
    return LandmarkSet(scheme, std::move(pts));
}

BoundingBox box_from_tuple(const std::tuple<int, int, int, int>& t) {
    return {std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)};
}

py::dict feature_dict(const FeatureVector& f) {
    py::dict d;
    d["r1_b1"] = f.r1_b1;
    d["r2_b2"] = f.r2_b2;
    d["r3_b3"] = f.r3_b3;
    d["nose_angle_deg"] = f.nose_angle_deg;
    d["r_nose"] = f.r_nose;
    d["r_mouth"] = f.r_mouth;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "facial morphometry pipeline core";

    // stage 1: image operations
    m.def("to_grayscale", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
        return image_to_array(to_grayscale(image_from_array(a)));
    });
    m.def("equalize_histogram", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
        return image_to_array(equalize_histogram(image_from_array(a)));
    });
    m.def("median_filter", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a, int radius) {
        return image_to_array(median_filter(image_from_array(a), radius));
    }, py::arg("image"), py::arg("radius") = 1);
    m.def("crop_with_margin", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
                                 const std::tuple<int, int, int, int>& box, int margin) {
        return image_to_array(crop_with_margin(image_from_array(a), box_from_tuple(box), margin));
    }, py::arg("image"), py::arg("box"), py::arg("margin") = 0);
    m.def("resize", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a, int w, int h) {
        return image_to_array(resize(image_from_array(a), w, h));
    });
    m.def("rect_sum", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
                         const std::tuple<int, int, int, int>& rect) {
        return integral_image(image_from_array(a)).rect_sum(box_from_tuple(rect));
    }, "rectangle sum through the integral image");
    m.def("load_image", [](const std::string& path) { return image_to_array(load_image(path)); });
    m.def("save_png", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
                         const std::string& path) { save_png(image_from_array(a), path); });

    // stage 2: descriptor
    m.def("hog_descriptor", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
                               const std::tuple<int, int, int, int>& window) {
        const HogDescriptor d = hog_descriptor(image_from_array(a), box_from_tuple(window));
        return py::array_t<double>(static_cast<py::ssize_t>(d.vector.size()), d.vector.data());
    });

    // stage 3: alignment
    m.def("align_face", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
                           const py::array_t<double, py::array::c_style | py::array::forcecast>& five_points,
                           int working_size) {
        const LandmarkSet lm = landmarks_from_array(five_points);
        AlignedFace af = align_face(image_from_array(a), FivePointLandmarks::from_set(lm), working_size);
        py::dict t;
        t["rotation"] = af.transform.rotation;
        t["scale"] = af.transform.scale;
        t["translation"] = py::make_tuple(af.transform.translation.x, af.transform.translation.y);
        return py::make_tuple(image_to_array(af.image), t);
    }, py::arg("image"), py::arg("five_points"), py::arg("working_size") = 600);

    // stage 4: landmark localization
    py::class_<ShapeModel>(m, "ShapeModel")
        .def_property_readonly("n_points", &ShapeModel::point_count)
        .def_property_readonly("n_stages",
                               [](const ShapeModel& s) { return s.stages.size(); });
    m.def("load_shape_model", &load_shape_model);
    m.def("save_shape_model", &save_shape_model);
    m.def("predict_shape", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
                              const std::tuple<int, int, int, int>& box, const ShapeModel& model) {
        return points_to_array(predict_shape(image_from_array(a), box_from_tuple(box), model).points);
    });
    m.def("train_shape_model",
          [](const std::vector<std::tuple<py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>,
                                          std::tuple<int, int, int, int>,
                                          py::array_t<double, py::array::c_style | py::array::forcecast>>>& data,
             int stages, int trees_per_stage, int tree_depth, double nu, int feature_pool_size,
             double lambda, std::uint64_t seed) {
              std::vector<TrainingExample> dataset;
              for (const auto& [img, box, pts] : data) {
                  TrainingExample ex;
                  ex.image = image_from_array(img);
                  ex.box = box_from_tuple(box);
                  ex.shape = landmarks_from_array(pts);
                  dataset.push_back(std::move(ex));
              }
              ShapeTrainConfig cfg;
              cfg.stages = stages;
              cfg.trees_per_stage = trees_per_stage;
              cfg.tree_depth = tree_depth;
              cfg.nu = nu;
              cfg.feature_pool_size = feature_pool_size;
              cfg.lambda = lambda;
              cfg.seed = seed;
              return train_shape_model(dataset, cfg);
          },
          py::arg("dataset"), py::arg("stages") = 5, py::arg("trees_per_stage") = 50,
          py::arg("tree_depth") = 4, py::arg("nu") = 0.1, py::arg("feature_pool_size") = 64,
          py::arg("lambda") = 0.1, py::arg("seed") = 0);

    // stage 5: geometric features
    m.def("extract_features", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts) {
        return feature_dict(extract_features(landmarks_from_array(pts)));
    });
    m.def("nose_angle", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts) {
        return nose_angle(landmarks_from_array(pts));
    });

    m.def("train_linear_svm",
          [](const std::vector<std::vector<double>>& positives,
             const std::vector<std::vector<double>>& negatives, double C, int epochs,
             std::uint64_t seed) {
              std::vector<HogDescriptor> pos(positives.size()), neg(negatives.size());
              for (size_t i = 0; i < positives.size(); ++i) pos[i].vector = positives[i];
              for (size_t i = 0; i < negatives.size(); ++i) neg[i].vector = negatives[i];
              const SvmTrainResult r = train_linear_svm(pos, neg, C, epochs, seed);
              py::dict d;
              d["weights"] = r.model.weights;
              d["bias"] = r.model.bias;
              d["training_accuracy"] = r.training_accuracy;
              return d;
          },
          py::arg("positives"), py::arg("negatives"), py::arg("C") = 1.0,
          py::arg("epochs") = 40, py::arg("seed") = 0);

    // stage 6: statistics
    m.def("welch_t_test", [](const std::vector<double>& a, const std::vector<double>& b) {
        const TTestResult r = welch_t_test(a, b);
        return py::make_tuple(r.t, r.df, r.p);
    }, "returns (t, df, two-sided p)");
    m.def("student_t_test", [](const std::vector<double>& a, const std::vector<double>& b) {
        const TTestResult r = student_t_test(a, b);
        return py::make_tuple(r.t, r.df, r.p);
    });
    m.def("boxplot_summary", [](const std::vector<double>& x) {
        const BoxplotSummary s = boxplot_summary(x);
        py::dict d;
        d["whisker_low"] = s.whisker_low;
        d["q1"] = s.q1;
        d["median"] = s.median;
        d["q3"] = s.q3;
        d["whisker_high"] = s.whisker_high;
        d["outliers"] = s.outliers;
        return d;
    });
    m.def("regularized_incomplete_beta", &regularized_incomplete_beta);

    // landmark file interchange
    m.def("load_landmarks", [](const std::string& path) {
        return points_to_array(load_landmarks(path).points);
    });
    m.def("save_landmarks", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts,
                               const std::string& path) {
        save_landmarks(landmarks_from_array(pts), path);
    });
}

#ifndef FACEMORPH_STATS_HPP
#define FACEMORPH_STATS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "facemorph/landmarks.hpp"
#include "facemorph/morphometrics.hpp"

namespace facemorph {

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;  // two-sided
};

enum class TTestVariant { Welch, Student };

// Regularized incomplete beta function I_x(a, b), evaluated by Lentz's
// continued fraction; relative error <= 1e-10 over the tested domain.
double regularized_incomplete_beta(double a, double b, double x);

// Unequal-variance two-sample t-test with Welch-Satterthwaite degrees of
// freedom. Throws "insufficient sample" (n < 2) and "zero variance" (both
// samples constant).
TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Equal-variance variant: pooled standard deviation, df = na + nb - 2.
TTestResult student_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct BoxplotSummary {
    double whisker_low = 0.0;   // most extreme point within 1.5 IQR below Q1
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_high = 0.0;  // most extreme point within 1.5 IQR above Q3
    std::vector<double> outliers;  // ascending
};

// Quartiles by linear interpolation between order statistics.
BoxplotSummary boxplot_summary(const std::vector<double>& x);

struct Cohort {
    std::string label;
    std::vector<FeatureVector> feature_rows;
    std::vector<LandmarkSet> shapes;  // optional, for mean-face output
};

struct FeatureComparison {
    std::string feature;
    double mean_a = 0.0, sd_a = 0.0;
    double mean_b = 0.0, sd_b = 0.0;
    BoxplotSummary box_a, box_b;
    TTestResult test;
    std::string error;  // non-empty when this feature could not be compared
};

struct CohortReport {
    std::string label_a, label_b;
    std::array<FeatureComparison, 6> rows;  // fixed feature order
    std::optional<LandmarkSet> mean_face_a, mean_face_b;
};

// Per-feature descriptive statistics, boxplots and t-tests; mean faces when
// both cohorts carry shapes. A failing feature is reported in its row's
// error field without aborting the others.
CohortReport compare_cohorts(const Cohort& a, const Cohort& b,
                             TTestVariant variant = TTestVariant::Welch);

}  // namespace facemorph

#endif

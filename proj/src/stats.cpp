#include "facemorph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "facemorph/shape_model.hpp"

namespace facemorph {

namespace {

// Continued fraction for the incomplete beta (Lentz's algorithm).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 500;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    return h;  // converged to machine precision for all practical (a, b, x)
}

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double var = 0.0;  // sample variance, n - 1 denominator
};

Moments moments(const std::vector<double>& x) {
    Moments m;
    m.n = static_cast<double>(x.size());
    for (double v : x) m.mean += v;
    m.mean /= m.n;
    for (double v : x) m.var += (v - m.mean) * (v - m.mean);
    m.var /= (m.n - 1.0);
    return m;
}

double two_sided_p(double t, double df) {
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

// Type-7 quantile: linear interpolation at position p * (n - 1).
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * (static_cast<double>(sorted.size()) - 1.0);
    const size_t lo = static_cast<size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> column(const std::vector<FeatureVector>& rows, int index) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const FeatureVector& f : rows) out.push_back(f.values()[index]);
    return out;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("beta parameters must be positive");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // use the symmetric form in the region where the fraction converges fast
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("insufficient sample");
    const Moments ma = moments(a);
    const Moments mb = moments(b);
    if (ma.var == 0.0 && mb.var == 0.0) throw std::invalid_argument("zero variance");

    const double va_n = ma.var / ma.n;
    const double vb_n = mb.var / mb.n;
    TTestResult r;
    r.t = (ma.mean - mb.mean) / std::sqrt(va_n + vb_n);
    r.df = (va_n + vb_n) * (va_n + vb_n) /
           (va_n * va_n / (ma.n - 1.0) + vb_n * vb_n / (mb.n - 1.0));
    r.p = two_sided_p(r.t, r.df);
    return r;
}

TTestResult student_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("insufficient sample");
    const Moments ma = moments(a);
    const Moments mb = moments(b);
    const double pooled =
        ((ma.n - 1.0) * ma.var + (mb.n - 1.0) * mb.var) / (ma.n + mb.n - 2.0);
    if (pooled == 0.0) throw std::invalid_argument("zero variance");

    TTestResult r;
    r.t = (ma.mean - mb.mean) / (std::sqrt(pooled) * std::sqrt(1.0 / ma.n + 1.0 / mb.n));
    r.df = ma.n + mb.n - 2.0;
    r.p = two_sided_p(r.t, r.df);
    return r;
}

BoxplotSummary boxplot_summary(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("insufficient sample");
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());

    BoxplotSummary s;
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;

    s.whisker_low = s.q1;
    s.whisker_high = s.q3;
    bool any_in = false;
    for (double v : sorted) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
        } else {
            if (!any_in) {
                s.whisker_low = v;
                any_in = true;
            }
            s.whisker_high = v;
        }
    }
    return s;
}

CohortReport compare_cohorts(const Cohort& a, const Cohort& b, TTestVariant variant) {
    if (a.feature_rows.size() < 2 || b.feature_rows.size() < 2)
        throw std::invalid_argument("insufficient sample");

    CohortReport report;
    report.label_a = a.label;
    report.label_b = b.label;

    for (int f = 0; f < 6; ++f) {
        FeatureComparison& row = report.rows[f];
        row.feature = FeatureVector::names()[f];
        try {
            const std::vector<double> xa = column(a.feature_rows, f);
            const std::vector<double> xb = column(b.feature_rows, f);
            const Moments ma = moments(xa);
            const Moments mb = moments(xb);
            row.mean_a = ma.mean;
            row.sd_a = std::sqrt(ma.var);
            row.mean_b = mb.mean;
            row.sd_b = std::sqrt(mb.var);
            row.box_a = boxplot_summary(xa);
            row.box_b = boxplot_summary(xb);
            row.test = variant == TTestVariant::Welch ? welch_t_test(xa, xb)
                                                      : student_t_test(xa, xb);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }

    if (!a.shapes.empty() && !b.shapes.empty()) {
        report.mean_face_a = mean_shape(a.shapes);
        report.mean_face_b = mean_shape(b.shapes);
    }
    return report;
}

}  // namespace facemorph

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nld {

/// One (S, H, D) triple plus its table-row identity.
struct FeatureRow {
    int subject_id = 0;
    std::string session_label;
    double s = 0.0;           // Shannon entropy, nats
    double h = 0.0;           // Hurst exponent
    double d = 0.0;           // fractal dimension
    double age = 0.0;         // years
    double experience = 0.0;  // years of driving
};

struct FeatureTable {
    std::vector<FeatureRow> rows;
};

/// Rows non-empty, (subject_id, session_label) unique.
inline void validate_feature_table(const FeatureTable& t) {
    if (t.rows.empty())
        throw std::invalid_argument("FeatureTable: no rows");
    std::set<std::pair<int, std::string>> seen;
    for (const FeatureRow& r : t.rows) {
        if (!seen.emplace(r.subject_id, r.session_label).second)
            throw std::invalid_argument("FeatureTable: duplicate (subject " +
                                        std::to_string(r.subject_id) + ", " + r.session_label +
                                        ")");
    }
}

/// Symmetric Pearson correlation matrix with a unit diagonal.
struct CorrelationMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;
};

/// Two-sample F-test for variances, spreadsheet style: F = var_a / var_b,
/// one-tail p against the F(df_a, df_b) distribution (upper tail when F > 1,
/// lower tail when F < 1), F critical at the upper-tail significance alpha.
struct FTestReport {
    double mean_a = 0.0, mean_b = 0.0;
    double var_a = 0.0, var_b = 0.0;
    long df_a = 0, df_b = 0;
    double f = 0.0;
    double p_one_tail = 0.0;
    double f_crit = 0.0;
    double alpha = 0.05;
};

namespace detail {

/// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 500;
    constexpr double eps = 1e-15;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw std::runtime_error("beta_cf: continued fraction did not converge");
}

/// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("reg_inc_beta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

} // namespace detail

/// CDF of the F(df1, df2) distribution at x, via the regularized incomplete
/// beta I_{df1 x / (df1 x + df2)}(df1/2, df2/2).
inline double f_cdf(double x, int df1, int df2) {
    if (df1 < 1 || df2 < 1)
        throw std::invalid_argument("f_cdf: degrees of freedom must be >= 1");
    if (x < 0.0)
        throw std::invalid_argument("f_cdf: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double d1 = df1, d2 = df2;
    const double t = d1 * x / (d1 * x + d2);
    return detail::reg_inc_beta(d1 / 2.0, d2 / 2.0, t);
}

/// Inverse upper-tail quantile: the x with P(F > x) = alpha.
inline double f_critical(double alpha, int df1, int df2) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("f_critical: alpha must lie in (0, 1)");
    const double target = 1.0 - alpha;
    double hi = 1.0;
    while (f_cdf(hi, df1, df2) < target) {
        hi *= 2.0;
        if (hi > 1e12)
            throw std::runtime_error("f_critical: quantile bracket overflow");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f_cdf(mid, df1, df2) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

inline std::pair<double, double> mean_and_sample_variance(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : v) {
        const double d = x - mean;
        ss += d * d;
    }
    return {mean, ss / (n - 1.0)};
}

} // namespace detail

inline FTestReport f_test_two_sample(std::span<const double> a, std::span<const double> b,
                                     double alpha = 0.05) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("f_test_two_sample: each sample needs >= 2 values");
    FTestReport rep;
    rep.alpha = alpha;
    std::tie(rep.mean_a, rep.var_a) = detail::mean_and_sample_variance(a);
    std::tie(rep.mean_b, rep.var_b) = detail::mean_and_sample_variance(b);
    if (rep.var_a <= 0.0 || rep.var_b <= 0.0)
        throw std::invalid_argument("f_test_two_sample: degenerate (zero-variance) sample");
    rep.df_a = static_cast<long>(a.size()) - 1;
    rep.df_b = static_cast<long>(b.size()) - 1;
    rep.f = rep.var_a / rep.var_b;
    const double cdf = f_cdf(rep.f, static_cast<int>(rep.df_a), static_cast<int>(rep.df_b));
    rep.p_one_tail = rep.f >= 1.0 ? 1.0 - cdf : cdf;
    rep.f_crit = f_critical(alpha, static_cast<int>(rep.df_a), static_cast<int>(rep.df_b));
    return rep;
}

/// Pearson correlation coefficient of two equal-length vectors.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("pearson: need >= 3 paired values");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::invalid_argument("pearson: correlation undefined for a constant variable");
    return sxy / std::sqrt(sxx * syy);
}

namespace detail {

inline std::function<double(const FeatureRow&)> feature_accessor(const std::string& name) {
    if (name == "H") return [](const FeatureRow& r) { return r.h; };
    if (name == "D") return [](const FeatureRow& r) { return r.d; };
    if (name == "S") return [](const FeatureRow& r) { return r.s; };
    if (name == "Age") return [](const FeatureRow& r) { return r.age; };
    if (name == "Experience") return [](const FeatureRow& r) { return r.experience; };
    if (name == "Subject") return [](const FeatureRow& r) { return double(r.subject_id); };
    throw std::invalid_argument("unknown feature column '" + name + "'");
}

} // namespace detail

/// Extract one named numeric column (H, D, S, Age, Experience, Subject).
inline std::vector<double> feature_column(const FeatureTable& t, const std::string& name) {
    const auto get = detail::feature_accessor(name);
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const FeatureRow& r : t.rows) v.push_back(get(r));
    return v;
}

/// Pairwise Pearson r over the selected variables; the diagonal is exactly 1.
inline CorrelationMatrix pearson_matrix(
    const FeatureTable& t,
    std::span<const std::string> vars = std::span<const std::string>{}) {
    static const std::vector<std::string> default_vars = {"H", "D", "S", "Experience", "Age"};
    const std::vector<std::string> labels =
        vars.empty() ? default_vars : std::vector<std::string>(vars.begin(), vars.end());
    if (t.rows.size() < 3)
        throw std::invalid_argument("pearson_matrix: need at least 3 rows");

    std::vector<std::vector<double>> cols;
    cols.reserve(labels.size());
    for (const std::string& name : labels) {
        std::vector<double> c = feature_column(t, name);
        bool constant = true;
        for (double v : c)
            if (v != c.front()) {
                constant = false;
                break;
            }
        if (constant)
            throw std::invalid_argument("pearson_matrix: variable '" + name +
                                        "' is constant, correlation undefined");
        cols.push_back(std::move(c));
    }

    CorrelationMatrix m;
    m.labels = labels;
    m.values.assign(labels.size(), std::vector<double>(labels.size(), 1.0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const double r = pearson(cols[i], cols[j]);
            m.values[i][j] = r;
            m.values[j][i] = r;
        }
    }
    return m;
}

} // namespace nld

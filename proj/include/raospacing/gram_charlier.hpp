#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "raospacing/error.hpp"
#include "raospacing/moments.hpp"
#include "raospacing/spacings.hpp"

namespace rao {

/// Probabilists' Hermite polynomial He_j(x): He_0 = 1, He_1 = x,
/// He_{k+1} = x He_k - k He_{k-1}.
inline double hermite(int j, double x) {
    if (j < 0) throw invalid_input("Hermite degree must be >= 0");
    if (j == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < j; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// All of He_0(x) .. He_max(x) in one pass.
inline std::vector<double> hermite_all(int max_degree, double x) {
    std::vector<double> h(static_cast<std::size_t>(max_degree) + 1);
    h[0] = 1.0;
    if (max_degree >= 1) h[1] = x;
    for (int k = 1; k < max_degree; ++k) h[k + 1] = x * h[k] - k * h[k - 1];
    return h;
}

/// Arguments (x_1, ..., x_d) of the complete Bell polynomials in the
/// expansion: x_1 = x_2 = 0 and x_j = lambda_j for j >= 3.
class bell_arguments {
public:
    /// lambdas[0] is lambda_3.
    explicit bell_arguments(std::vector<double> lambdas) : x_(lambdas.size() + 2, 0.0) {
        std::copy(lambdas.begin(), lambdas.end(), x_.begin() + 2);
    }

    [[nodiscard]] int size() const noexcept { return static_cast<int>(x_.size()); }
    [[nodiscard]] std::span<const double> values() const noexcept { return x_; }
    /// x_j, 1-based; zero beyond the stored order.
    [[nodiscard]] double operator[](int j) const {
        return j >= 1 && j <= size() ? x_[static_cast<std::size_t>(j - 1)] : 0.0;
    }

private:
    std::vector<double> x_;
};

/// B_0 .. B_max of the complete exponential Bell polynomials via
/// B_{m+1} = sum_{k=0}^{m} C(m, k) B_{m-k} x_{k+1}, where x[i] holds x_{i+1}
/// and missing trailing arguments are zero.
inline std::vector<double> bell_complete_all(int max_degree, std::span<const double> x) {
    auto arg = [&](int i) { return i >= 1 && i <= static_cast<int>(x.size()) ? x[i - 1] : 0.0; };
    std::vector<double> b(static_cast<std::size_t>(max_degree) + 1, 0.0);
    b[0] = 1.0;
    for (int m = 0; m < max_degree; ++m) {
        double s = 0.0;
        double binom = 1.0;
        for (int k = 0; k <= m; ++k) {
            s += binom * b[m - k] * arg(k + 1);
            binom = binom * (m - k) / (k + 1);
        }
        b[m + 1] = s;
    }
    return b;
}

inline std::vector<double> bell_complete_all(int max_degree, const bell_arguments& x) {
    return bell_complete_all(max_degree, x.values());
}

inline double bell_complete(int j, const bell_arguments& x) {
    if (j < 0) throw invalid_input("Bell polynomial degree must be >= 0");
    return bell_complete_all(j, x)[static_cast<std::size_t>(j)];
}

inline double normal_pdf(double u) noexcept {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}
inline double normal_cdf(double u) noexcept { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }
inline double normal_upper(double u) noexcept { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

struct cdf_point {
    double value = 0.0;
    double unclamped = 0.0;
    bool clamped = false;
    bool outside_support = false;
};

/**
 * Truncated Gram-Charlier approximation to the distribution of U_n.
 *
 * With z = (t - kappa'_1) / sqrt(kappa'_2),
 *   F(t) ~ Phi(z) - phi(z) * sum_{j=3}^{d} B_j(0, 0, lambda_3, ..., lambda_j) He_{j-1}(z) / j!.
 * Built once per (n, d) and reusable for any number of evaluation points.
 */
class cdf_approximation {
public:
    template <class Real>
    explicit cdf_approximation(const cumulant_set<Real>& c)
        : n_(c.n), order_(c.order), mean_(static_cast<double>(c.mean())),
          sd_(static_cast<double>(c.sd())) {
        if (order_ < 3) throw invalid_input("expansion order must be >= 3");
        if (!(sd_ > 0.0)) throw degenerate_variance("non-positive standard deviation");
        std::vector<double> lambdas;
        for (int j = 3; j <= order_; ++j) lambdas.push_back(static_cast<double>(c.lambda(j)));
        const auto bell = bell_complete_all(order_, bell_arguments(std::move(lambdas)));

        double factorial = 2.0;
        for (int j = 3; j <= order_; ++j) {
            factorial *= j;
            weights_.push_back(bell[static_cast<std::size_t>(j)] / factorial);
        }
    }

    [[nodiscard]] long long n() const noexcept { return n_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double sd() const noexcept { return sd_; }
    /// B_j / j! for j = 3..d.
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

    [[nodiscard]] double standardize(double t) const noexcept { return (t - mean_) / sd_; }

    /// Unclamped lower-tail series.
    [[nodiscard]] double lower_raw(double t) const {
        const double z = standardize(t);
        return normal_cdf(z) - normal_pdf(z) * correction(z);
    }

    /// Unclamped upper-tail series, evaluated directly so small P-values keep
    /// their relative accuracy.
    [[nodiscard]] double upper_raw(double t) const {
        const double z = standardize(t);
        return normal_upper(z) + normal_pdf(z) * correction(z);
    }

    [[nodiscard]] cdf_point evaluate(double t) const {
        cdf_point p;
        p.outside_support = t < 0.0 || t > support_upper(static_cast<std::size_t>(n_));
        // evaluate the tail on the side of the mean where it is small
        if (standardize(t) > 0.0) {
            const double up = upper_raw(t);
            p.unclamped = 1.0 - up;
            p.value = 1.0 - std::clamp(up, 0.0, 1.0);
            p.clamped = up < 0.0 || up > 1.0;
        } else {
            p.unclamped = lower_raw(t);
            p.value = std::clamp(p.unclamped, 0.0, 1.0);
            p.clamped = p.value != p.unclamped;
        }
        return p;
    }

    [[nodiscard]] double cdf(double t) const { return evaluate(t).value; }

    /// Upper-tail probability Pr(U_n > t) = 1 - cdf(t).
    [[nodiscard]] double p_value(double t) const {
        if (standardize(t) > 0.0) return std::clamp(upper_raw(t), 0.0, 1.0);
        return 1.0 - cdf(t);
    }

    /// Series density phi(z)/sd * (1 + sum_j B_j He_j(z) / j!).
    [[nodiscard]] double density(double t) const {
        const double z = standardize(t);
        const auto h = hermite_all(order_, z);
        double s = 1.0;
        for (int j = 3; j <= order_; ++j) s += weights_[j - 3] * h[static_cast<std::size_t>(j)];
        return normal_pdf(z) * s / sd_;
    }

    /**
     * Statistic value (radians) whose upper-tail probability equals alpha.
     *
     * The truncated series is scanned on a grid over the support around the
     * mean; the search interval is restricted to the monotone stretch that
     * contains the mean, and the crossing is refined with TOMS 748 to a
     * bracket width of 1e-12 rad.
     */
    [[nodiscard]] double critical_value_rad(double alpha) const {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw invalid_input("alpha must be in (0, 1)");
        }
        const double support_hi = support_upper(static_cast<std::size_t>(n_));
        const double lo = std::max(0.0, mean_ - 12.0 * sd_);
        const double hi = std::min(support_hi, mean_ + 12.0 * sd_);

        constexpr int cells = 4000;
        std::vector<double> grid(cells + 1);
        std::vector<double> tail(cells + 1);
        for (int i = 0; i <= cells; ++i) {
            grid[i] = lo + (hi - lo) * i / cells;
            tail[i] = upper_raw(grid[i]);
        }

        const int centre = std::clamp(
            static_cast<int>(std::lround((mean_ - lo) / (hi - lo) * cells)), 0, cells);
        int left = centre;
        while (left > 0 && tail[left - 1] >= tail[left]) --left;
        int right = centre;
        while (right < cells && tail[right + 1] <= tail[right]) ++right;

        auto excess = [&](double t) { return upper_raw(t) - alpha; };
        if (tail[left] - alpha < 0.0 || tail[right] - alpha > 0.0) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "no crossing of alpha = %g inside the monotone range of the expansion for n = %lld",
                          alpha, n_);
            throw approximation_failure(msg);
        }
        int cell = left;
        while (cell < right && tail[cell + 1] - alpha > 0.0) ++cell;
        if (tail[cell] - alpha == 0.0) return grid[cell];
        if (cell == right) return grid[right];

        std::uintmax_t max_iter = 200;
        const auto bracket = boost::math::tools::toms748_solve(
            excess, grid[cell], grid[cell + 1], tail[cell] - alpha, tail[cell + 1] - alpha,
            [](double a, double b) { return std::abs(b - a) <= 1e-12; }, max_iter);
        return 0.5 * (bracket.first + bracket.second);
    }

    [[nodiscard]] double critical_value_deg(double alpha) const {
        return to_degrees(critical_value_rad(alpha));
    }

private:
    [[nodiscard]] double correction(double z) const {
        const auto h = hermite_all(order_ - 1, z);
        double s = 0.0;
        for (int j = 3; j <= order_; ++j) s += weights_[j - 3] * h[static_cast<std::size_t>(j - 1)];
        return s;
    }

    long long n_;
    int order_;
    double mean_;
    double sd_;
    std::vector<double> weights_;
};

/// Expansion for U_n at truncation order d, moments in extended precision.
inline cdf_approximation make_approximation(long long n, int order = default_order) {
    if (order < 3 || order > default_coefficients().max_order()) {
        throw invalid_input("truncation order must be in [3, 10], got " + std::to_string(order));
    }
    return cdf_approximation(cumulants<wide_real>(n, order));
}

template <class Real>
double cdf(long long n, double t, const cumulant_set<Real>& c) {
    if (c.n != n) throw invalid_input("cumulant set was computed for a different n");
    return cdf_approximation(c).cdf(t);
}

template <class Real>
double p_value(long long n, double t, const cumulant_set<Real>& c) {
    if (c.n != n) throw invalid_input("cumulant set was computed for a different n");
    return cdf_approximation(c).p_value(t);
}

/// Critical value in degrees.
template <class Real>
double critical_value(long long n, double alpha, const cumulant_set<Real>& c) {
    if (c.n != n) throw invalid_input("cumulant set was computed for a different n");
    return cdf_approximation(c).critical_value_deg(alpha);
}

}  // namespace rao

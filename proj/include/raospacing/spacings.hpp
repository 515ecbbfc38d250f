#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "raospacing/error.hpp"

namespace rao {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class angle_unit { degrees, radians };

inline constexpr double to_degrees(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }
inline constexpr double to_radians(double deg) noexcept { return deg * std::numbers::pi / 180.0; }

/// Upper end of the support of U_n, 2*pi*(1 - 1/n).
inline double support_upper(std::size_t n) noexcept {
    return two_pi * (1.0 - 1.0 / static_cast<double>(n));
}

/// Reduce an angle in radians to [0, 2*pi).
inline double wrap_angle(double rad) noexcept {
    double r = std::fmod(rad, two_pi);
    if (r < 0.0) r += two_pi;
    // fmod of a tiny negative value can round back up to exactly 2*pi
    if (r >= two_pi) r = 0.0;
    return r;
}

/**
 * Ordered circular observations in radians.
 *
 * Holds at least two angles, each reduced to [0, 2*pi), sorted ascending.
 * Ties are kept. Construct through ingest() or from_radians().
 */
class angle_sample {
public:
    /// Angles are reduced and sorted; throws invalid_input on fewer than two
    /// entries or a non-finite entry.
    static angle_sample from_radians(std::vector<double> angles) {
        if (angles.size() < 2) {
            throw invalid_input("need at least 2 angles, got " + std::to_string(angles.size()));
        }
        for (std::size_t i = 0; i < angles.size(); ++i) {
            if (!std::isfinite(angles[i])) {
                throw invalid_input("non-finite angle at index " + std::to_string(i));
            }
            angles[i] = wrap_angle(angles[i]);
        }
        std::sort(angles.begin(), angles.end());
        return angle_sample(std::move(angles));
    }

    [[nodiscard]] std::span<const double> angles() const noexcept { return angles_; }
    [[nodiscard]] std::size_t size() const noexcept { return angles_.size(); }

private:
    explicit angle_sample(std::vector<double> a) : angles_(std::move(a)) {}

    std::vector<double> angles_;
};

inline angle_sample ingest(std::span<const double> raw, angle_unit unit) {
    std::vector<double> rad(raw.begin(), raw.end());
    if (unit == angle_unit::degrees) {
        for (double& a : rad) a = to_radians(a);
    }
    return angle_sample::from_radians(std::move(rad));
}

/// Arc gaps T_1..T_n between consecutive order statistics, including the
/// wraparound gap T_n = a_(1) - a_(n) + 2*pi. They sum to 2*pi.
inline std::vector<double> spacings(const angle_sample& sample) {
    const auto a = sample.angles();
    const std::size_t n = a.size();
    std::vector<double> t(n);
    for (std::size_t i = 0; i + 1 < n; ++i) t[i] = a[i + 1] - a[i];
    t[n - 1] = a[0] - a[n - 1] + two_pi;
    return t;
}

/// Rao's spacing statistic U_n = 1/2 * sum |T_i - 2*pi/n|, in radians.
inline double statistic(const angle_sample& sample) {
    const auto a = sample.angles();
    const std::size_t n = a.size();
    const double expected = two_pi / static_cast<double>(n);

    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) sum += std::abs(a[i + 1] - a[i] - expected);
    sum += std::abs(a[0] - a[n - 1] + two_pi - expected);

    return std::clamp(0.5 * sum, 0.0, support_upper(n));
}

enum class test_method { gram_charlier, exact_quadrature };

inline const char* to_string(test_method m) noexcept {
    return m == test_method::gram_charlier ? "gram_charlier" : "exact_quadrature";
}

struct test_result {
    double statistic_rad = 0.0;
    double statistic_deg = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;
    test_method method = test_method::gram_charlier;
    int truncation_order = 0;  // 0 for the exact path
};

}  // namespace rao

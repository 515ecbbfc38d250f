#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "raospacing/error.hpp"

namespace rao {

/// Working precision for moments and cumulants. Converting raw moments of
/// U_n to cumulants loses roughly 2.5 * log10(n) digits per order, so double
/// is only usable for small n.
using wide_real = boost::multiprecision::cpp_bin_float_100;

inline constexpr int default_order = 10;

/**
 * Triangular table of the integer coefficients a_j^(r), 1 <= j <= r <= max_order.
 *
 * Rows follow a_r^(r) = 1, a_1^(r+1) = (r+1) a_1^(r) and
 * a_j^(r+1) = (r+j) a_j^(r) + a_{j-1}^(r).
 */
class coefficient_table {
public:
    explicit coefficient_table(int max_order = default_order) {
        if (max_order < 1) {
            throw invalid_input("coefficient table order must be >= 1, got " +
                                std::to_string(max_order));
        }
        rows_.reserve(static_cast<std::size_t>(max_order));
        rows_.push_back({1});
        for (int r = 1; r < max_order; ++r) {
            const auto& prev = rows_.back();
            std::vector<std::uint64_t> next(static_cast<std::size_t>(r) + 1);
            if (__builtin_mul_overflow(std::uint64_t(r) + 1, prev[0], &next[0])) {
                throw coefficient_overflow(max_order, r);
            }
            for (int j = 2; j <= r; ++j) {
                std::uint64_t scaled = 0;
                if (__builtin_mul_overflow(std::uint64_t(r + j), prev[j - 1], &scaled) ||
                    __builtin_add_overflow(scaled, prev[j - 2], &next[j - 1])) {
                    throw coefficient_overflow(max_order, r);
                }
            }
            next[r] = 1;
            rows_.push_back(std::move(next));
        }
    }

    [[nodiscard]] int max_order() const noexcept { return static_cast<int>(rows_.size()); }

    /// a_j^(r); zero for j > r.
    [[nodiscard]] std::uint64_t at(int r, int j) const {
        if (r < 1 || r > max_order() || j < 1) {
            throw invalid_input("coefficient index out of range");
        }
        return j > r ? 0 : rows_[r - 1][j - 1];
    }

    [[nodiscard]] const std::vector<std::uint64_t>& row(int r) const { return rows_.at(r - 1); }

private:
    std::vector<std::vector<std::uint64_t>> rows_;
};

inline coefficient_table build_coefficients(int r_max = default_order) {
    return coefficient_table(r_max);
}

/// Shared default table of order 10.
inline const coefficient_table& default_coefficients() {
    static const coefficient_table table(default_order);
    return table;
}

// log of the rising factorial n (n+1) ... (n+r-1)
template <class Real>
Real log_rising(long long n, int r) {
    using std::log;
    Real s = 0;
    for (int i = 0; i < r; ++i) s += log(Real(n + i));
    return s;
}

// log of the falling factorial n (n-1) ... (n-j+1); requires j <= n
template <class Real>
Real log_falling(long long n, int j) {
    using std::log;
    Real s = 0;
    for (int i = 0; i < j; ++i) s += log(Real(n - i));
    return s;
}

/**
 * r-th raw moment E(U_n^r) under uniformity.
 *
 * Each term a_j (n)_j (n-j)^{n+r-1} / (n^{n+r-1} (n)^{(r)}) is formed as a
 * logarithm, with (n-j)^{n+r-1} / n^{n+r-1} taken as (n+r-1) log1p(-j/n),
 * and the positive terms are combined by log-sum-exp. Terms with j >= n vanish.
 */
template <class Real = wide_real>
Real raw_moment(long long n, int r, const coefficient_table& table = default_coefficients()) {
    using std::exp;
    using std::log;
    using std::log1p;
    if (n < 2) throw invalid_input("sample size must be >= 2, got " + std::to_string(n));
    if (r < 1 || r > table.max_order()) {
        throw invalid_input("moment order must be in [1, " + std::to_string(table.max_order()) +
                            "], got " + std::to_string(r));
    }

    const long long jmax = std::min<long long>(r, n - 1);
    const Real power = Real(n + r - 1);
    const Real log_rise = log_rising<Real>(n, r);

    std::vector<Real> terms;
    terms.reserve(static_cast<std::size_t>(jmax));
    for (int j = 1; j <= jmax; ++j) {
        terms.push_back(log(Real(table.at(r, j))) + log_falling<Real>(n, j) +
                        power * log1p(-Real(j) / Real(n)) - log_rise);
    }
    const Real peak = *std::max_element(terms.begin(), terms.end());
    Real acc = 0;
    for (const Real& t : terms) acc += exp(t - peak);

    const Real log_two_pi = log(boost::math::constants::two_pi<Real>());
    return exp(Real(r) * log_two_pi + peak + log(acc));
}

/// E(U_n^2) from its closed form; independent check on raw_moment(n, 2).
template <class Real = double>
Real second_moment_closed_form(long long n) {
    using std::pow;
    if (n < 3) throw invalid_input("closed-form second moment needs n >= 3");
    const Real nn = Real(n);
    const Real two_pi = boost::math::constants::two_pi<Real>();
    return two_pi * two_pi / (nn + 1) *
           (2 * pow(1 - 1 / nn, n + 1) + (nn - 1) * pow(1 - 2 / nn, n + 1));
}

template <class Real = wide_real>
struct moment_set {
    long long n = 0;
    int order = 0;
    std::vector<Real> raw;  // raw[r-1] = E(U_n^r)

    [[nodiscard]] const Real& mu(int r) const { return raw.at(static_cast<std::size_t>(r - 1)); }
};

template <class Real = wide_real>
moment_set<Real> moments(long long n, int order = default_order,
                         const coefficient_table& table = default_coefficients()) {
    if (order < 1 || order > table.max_order()) {
        throw invalid_input("order must be in [1, " + std::to_string(table.max_order()) + "]");
    }
    moment_set<Real> m{n, order, {}};
    m.raw.reserve(static_cast<std::size_t>(order));
    for (int r = 1; r <= order; ++r) m.raw.push_back(raw_moment<Real>(n, r, table));
    return m;
}

template <class Real = wide_real>
struct cumulant_set {
    long long n = 0;
    int order = 0;
    std::vector<Real> raw;           // raw[j-1] = kappa'_j
    std::vector<Real> standardized;  // standardized[j-3] = kappa'_j / kappa'_2^{j/2}, j >= 3

    [[nodiscard]] const Real& kappa(int j) const { return raw.at(static_cast<std::size_t>(j - 1)); }
    [[nodiscard]] const Real& lambda(int j) const {
        return standardized.at(static_cast<std::size_t>(j - 3));
    }
    [[nodiscard]] Real mean() const { return kappa(1); }
    [[nodiscard]] Real sd() const {
        using std::sqrt;
        return sqrt(kappa(2));
    }
};

/// kappa'_r = mu'_r - sum_{k=1}^{r-1} C(r-1, k-1) kappa'_k mu'_{r-k}, then
/// standardization by powers of kappa'_2.
template <class Real>
cumulant_set<Real> cumulants(const moment_set<Real>& m) {
    using std::pow;
    if (m.order < 2 || static_cast<int>(m.raw.size()) < m.order) {
        throw invalid_input("cumulants need moments up to order >= 2");
    }
    const int d = m.order;
    cumulant_set<Real> c{m.n, d, std::vector<Real>(static_cast<std::size_t>(d)), {}};

    for (int r = 1; r <= d; ++r) {
        Real k = m.mu(r);
        Real binom = 1;  // C(r-1, k-1), starting at k = 1
        for (int j = 1; j < r; ++j) {
            k -= binom * c.raw[j - 1] * m.mu(r - j);
            binom = binom * (r - j) / j;
        }
        c.raw[r - 1] = k;
    }
    if (!(c.raw[1] > 0)) {
        throw degenerate_variance("second cumulant is not positive for n = " + std::to_string(m.n));
    }
    for (int j = 3; j <= d; ++j) c.standardized.push_back(c.raw[j - 1] / pow(c.raw[1], Real(j) / 2));
    return c;
}

template <class Real = wide_real>
cumulant_set<Real> cumulants(long long n, int order = default_order,
                             const coefficient_table& table = default_coefficients()) {
    return cumulants(moments<Real>(n, order, table));
}

// --- Stirling-number route, used as an exact oracle for small n ---------

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

/// Stirling number of the second kind via S(m+1, j) = S(m, j-1) + j S(m, j).
inline big_int stirling2(int m, int k) {
    if (m < 0 || k < 0) throw invalid_input("stirling2 arguments must be nonnegative");
    if (k > m) return 0;
    std::vector<big_int> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;  // S(0, 0)
    for (int i = 0; i < m; ++i) {
        for (int j = std::min(k, i + 1); j >= 1; --j) row[j] = row[j - 1] + j * row[j];
        row[0] = 0;
    }
    return row[k];
}

inline big_int falling_exact(long long n, int j) {
    big_int p = 1;
    for (int i = 0; i < j; ++i) p *= (n - i);
    return p;
}

/// E(U_n^r) through the Stirling-number sum
/// (2 pi)^r / n^{n+r-1} * sum_{j=1}^{n-1} (n)_j (n-1)_j / (n+r-1)_j S(n+r-1, j),
/// with the sum carried out in exact rationals. Only for n <= 25, r <= 10.
inline wide_real moment_via_stirling(int n, int r) {
    if (n < 2 || n > 25 || r < 1 || r > 10) {
        throw invalid_input("Stirling oracle supports 2 <= n <= 25 and 1 <= r <= 10");
    }
    const int m = n + r - 1;
    big_rational sum = 0;
    for (int j = 1; j <= n - 1; ++j) {
        big_rational term(falling_exact(n, j) * falling_exact(n - 1, j), falling_exact(m, j));
        sum += term * big_rational(stirling2(m, j));
    }
    big_int scale = 1;
    for (int i = 0; i < m; ++i) scale *= n;
    sum /= big_rational(scale);

    using boost::multiprecision::pow;
    return pow(boost::math::constants::two_pi<wide_real>(), r) * wide_real(sum);
}

}  // namespace rao

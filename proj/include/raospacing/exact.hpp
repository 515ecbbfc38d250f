#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "raospacing/error.hpp"
#include "raospacing/spacings.hpp"

namespace rao {

inline constexpr int exact_max_n = 30;

namespace detail {

// Neumaier-compensated accumulator
struct compensated_sum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] double value() const noexcept { return sum + carry; }
};

inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline void check_exact_n(long long n) {
    if (n < 2 || n > exact_max_n) {
        throw invalid_input("exact density supports 2 <= n <= " + std::to_string(exact_max_n) +
                            ", got " + std::to_string(n));
    }
}

}  // namespace detail

namespace detail {

// Irwin-Hall density (sum of j Uniform[0, 2 pi]) using the polynomial piece
// that holds on y = x / (2 pi) in [piece, piece + 1], 0 <= piece < j. The
// alternating sum is taken from whichever end of the support is nearer, which
// keeps it short and avoids most cancellation.
inline double irwin_hall_piece(int j, double y, int piece) {
    int last = piece;
    if (y > 0.5 * j) {
        y = j - y;
        last = j - 1 - piece;
    }
    compensated_sum s;
    double binom = 1.0;
    for (int k = 0; k <= last; ++k) {
        const double term = binom * std::pow(std::max(0.0, y - k), j - 1);
        s.add(k % 2 == 0 ? term : -term);
        binom = binom * (j - k) / (k + 1);
    }
    return std::max(0.0, s.value()) / (two_pi * std::tgamma(j));
}

// f_n(u) using the polynomial pieces valid on [2 pi k / n, 2 pi (k+1) / n],
// so panel endpoints take the one-sided limit from inside the panel.
inline double exact_pdf_on_panel(int n, double u, int panel) {
    const double ratio = u / two_pi;
    const double y = n * ratio;
    compensated_sum s;
    for (int j = panel + 1; j <= n - 1; ++j) {
        const double phi = irwin_hall_piece(j, y, panel);
        const double log_coef = std::lgamma(static_cast<double>(n)) + log_binomial(n, j) -
                                std::lgamma(static_cast<double>(n - j)) - (j - 1) * std::log(n);
        s.add(std::exp(log_coef) * std::pow(ratio, n - j - 1) * phi);
    }
    return s.value();
}

}  // namespace detail

/// Density of the sum of j independent Uniform[0, 2*pi] variables at x.
inline double irwin_hall_pdf(int j, double x) {
    if (j < 1) throw invalid_input("Irwin-Hall order must be >= 1");
    const double y = x / two_pi;
    if (!(y > 0.0) || !(y < j)) return 0.0;
    return detail::irwin_hall_piece(j, y, std::min(static_cast<int>(y), j - 1));
}

/// Exact null density of U_n:
/// f_n(u) = (n-1)! sum_{j=1}^{n-1} C(n,j) (u/2pi)^{n-j-1} phi_j(n u) / ((n-j-1)! n^{j-1}).
inline double exact_pdf(long long n, double u) {
    detail::check_exact_n(n);
    if (u < 0.0 || u > support_upper(static_cast<std::size_t>(n))) return 0.0;
    const int nn = static_cast<int>(n);
    const int panel = std::min(static_cast<int>(nn * u / two_pi), nn - 2);
    return detail::exact_pdf_on_panel(nn, u, panel);
}

/**
 * Integral of weight(u) * f_n(u) over [0, t].
 *
 * f_n is a polynomial between the knots 2*pi*k/n, so composite Simpson is run
 * on each knot panel and the number of subintervals is doubled until two
 * successive totals differ by less than tol.
 */
template <class Weight>
double integrate_exact(long long n, double t, Weight&& weight, double tol = 1e-9) {
    detail::check_exact_n(n);
    const double upper = std::min(t, support_upper(static_cast<std::size_t>(n)));
    if (!(upper > 0.0)) return 0.0;

    std::vector<double> edges{0.0};
    for (long long k = 1; k < n; ++k) {
        const double knot = two_pi * static_cast<double>(k) / static_cast<double>(n);
        if (knot >= upper) break;
        edges.push_back(knot);
    }
    edges.push_back(upper);

    const int nn = static_cast<int>(n);
    auto simpson = [&](int m) {
        detail::compensated_sum total;
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            const int panel = static_cast<int>(p);
            auto f = [&](double u) { return weight(u) * detail::exact_pdf_on_panel(nn, u, panel); };
            const double a = edges[p];
            const double h = (edges[p + 1] - a) / m;
            double s = f(a) + f(edges[p + 1]);
            for (int i = 1; i < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
            total.add(s * h / 3.0);
        }
        return total.value();
    };

    constexpr int max_subintervals = 1 << 14;
    double previous = simpson(2);
    for (int m = 4; m <= max_subintervals; m *= 2) {
        const double current = simpson(m);
        if (std::abs(current - previous) < tol) return current;
        previous = current;
    }
    throw quadrature_failure(previous, simpson(max_subintervals));
}

inline double exact_cdf(long long n, double t) {
    return std::clamp(integrate_exact(n, t, [](double) { return 1.0; }), 0.0, 1.0);
}

inline double exact_p_value(long long n, double t) { return 1.0 - exact_cdf(n, t); }

}  // namespace rao

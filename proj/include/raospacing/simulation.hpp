#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "raospacing/error.hpp"
#include "raospacing/gram_charlier.hpp"
#include "raospacing/spacings.hpp"

namespace rao::sim {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Random stream keyed by (seed, stream index); independent streams give the
/// same draws regardless of which thread consumes them.
class stream_rng {
public:
    using result_type = std::uint64_t;

    explicit stream_rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

    static constexpr result_type min() noexcept { return std::mt19937_64::min(); }
    static constexpr result_type max() noexcept { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

inline angle_sample sample_uniform(std::size_t n, stream_rng& rng) {
    if (n < 2) throw invalid_input("sample size must be >= 2");
    std::vector<double> a(n);
    for (double& x : a) x = two_pi * rng.uniform();
    return angle_sample::from_radians(std::move(a));
}

/// One von Mises(mu, kappa) draw by the Best-Fisher wrapped-Cauchy
/// rejection method. kappa == 0 is the uniform distribution.
inline double draw_von_mises(double mu, double kappa, stream_rng& rng) {
    if (kappa == 0.0) return wrap_angle(mu + two_pi * rng.uniform());
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);

    for (;;) {
        const double u1 = rng.uniform();
        const double z = std::cos(std::numbers::pi * u1);
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        const double u2 = rng.uniform();
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            const double u3 = rng.uniform();
            const double theta = u3 > 0.5 ? std::acos(f) : -std::acos(f);
            return wrap_angle(mu + theta);
        }
    }
}

inline angle_sample sample_von_mises(std::size_t n, double mu, double kappa, stream_rng& rng) {
    if (n < 2) throw invalid_input("sample size must be >= 2");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw invalid_input("von Mises concentration must be finite and >= 0");
    }
    std::vector<double> a(n);
    for (double& x : a) x = draw_von_mises(mu, kappa, rng);
    return angle_sample::from_radians(std::move(a));
}

struct uniform_alternative {};
struct von_mises_alternative {
    double mu = 0.0;
    double kappa = 0.0;
};
using alternative = std::variant<uniform_alternative, von_mises_alternative>;

/// Reject when the expansion P-value falls below alpha.
struct gram_charlier_rule {
    int order = default_order;
};
/// Reject when the statistic in degrees exceeds a tabulated value.
struct fixed_critical_value {
    double degrees = 0.0;
};
using decision_rule = std::variant<gram_charlier_rule, fixed_critical_value>;

struct experiment_config {
    std::size_t n = 10;
    std::size_t reps = 1000;
    double alpha = 0.05;
    alternative alt = uniform_alternative{};
    std::uint64_t seed = 1;
    decision_rule method = gram_charlier_rule{};
    unsigned threads = 1;
};

struct interval {
    double low = 0.0;
    double high = 1.0;
};

struct experiment_report {
    std::size_t accept = 0;
    std::size_t reject = 0;
    std::size_t reps = 0;
    double rejection_rate = 0.0;
    interval wilson_ci_95;
};

/// Wilson score interval for a binomial proportion.
inline interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    const double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double high = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {low, high};
}

inline void validate(const experiment_config& c) {
    if (c.n < 2) throw invalid_input("sample size must be >= 2");
    if (c.reps < 1) throw invalid_input("reps must be >= 1");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw invalid_input("alpha must be in (0, 1)");
    if (const auto* vm = std::get_if<von_mises_alternative>(&c.alt)) {
        if (!(vm->kappa >= 0.0) || !std::isfinite(vm->kappa) || !std::isfinite(vm->mu)) {
            throw invalid_input("von Mises parameters must be finite with kappa >= 0");
        }
    }
}

inline angle_sample draw_sample(const experiment_config& c, stream_rng& rng) {
    if (const auto* vm = std::get_if<von_mises_alternative>(&c.alt)) {
        return sample_von_mises(c.n, vm->mu, vm->kappa, rng);
    }
    return sample_uniform(c.n, rng);
}

/**
 * Repeats draw / test / decide `reps` times.
 *
 * Rep i always uses stream (seed, i), and the report only sums counts, so the
 * result does not depend on the thread count.
 */
inline experiment_report run_experiment(const experiment_config& config) {
    validate(config);

    std::optional<cdf_approximation> approx;
    if (const auto* gc = std::get_if<gram_charlier_rule>(&config.method)) {
        approx.emplace(make_approximation(static_cast<long long>(config.n), gc->order));
    }

    auto rejects_in = [&](std::size_t first, std::size_t stride) {
        std::size_t count = 0;
        for (std::size_t rep = first; rep < config.reps; rep += stride) {
            stream_rng rng(config.seed, rep);
            const double u = statistic(draw_sample(config, rng));
            const bool reject = approx ? approx->p_value(u) < config.alpha
                                       : to_degrees(u) > std::get<fixed_critical_value>(config.method).degrees;
            count += reject ? 1 : 0;
        }
        return count;
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.reps)));
    std::vector<std::size_t> partial(threads, 0);
    if (threads == 1) {
        partial[0] = rejects_in(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] { partial[t] = rejects_in(t, threads); });
        }
    }

    experiment_report r;
    r.reps = config.reps;
    for (std::size_t p : partial) r.reject += p;
    r.accept = r.reps - r.reject;
    r.rejection_rate = static_cast<double>(r.reject) / static_cast<double>(r.reps);
    r.wilson_ci_95 = wilson_interval(r.reject, r.reps);
    return r;
}

}  // namespace rao::sim

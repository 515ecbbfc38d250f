#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "raospacing/raospacing.hpp"

namespace rao::cli {

inline constexpr const char* schema = "rao-spacing/1";

enum exit_code : int { ok = 0, computation_failed = 1, usage_error = 2 };

namespace detail {

using json = nlohmann::ordered_json;

inline angle_unit parse_unit(const std::string& s) {
    return (s == "rad" || s == "radians") ? angle_unit::radians : angle_unit::degrees;
}

inline method_choice parse_method(const std::string& s) {
    if (s == "gc") return method_choice::gram_charlier;
    if (s == "exact") return method_choice::exact;
    return method_choice::automatic;
}

inline void require_n(long long n, long long lo = 2) {
    if (n < lo) throw invalid_input("--n must be >= " + std::to_string(lo));
}

inline void require_alpha(double a) {
    if (!(a > 0.0 && a < 1.0)) throw invalid_input("--alpha must be in (0, 1)");
}

template <class Real>
json to_json_array(const std::vector<Real>& v) {
    json a = json::array();
    for (const Real& x : v) a.push_back(static_cast<double>(x));
    return a;
}

}  // namespace detail

/**
 * Runs one subcommand. JSON goes to `out`, diagnostics to `err`.
 * Returns 0 on success, 1 when a computation fails and 2 on usage errors.
 */
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::json;

    CLI::App app{"Rao's spacing test for circular uniformity", "rao_spacing"};
    app.require_subcommand(1);

    const std::vector<std::string> units{"deg", "degrees", "rad", "radians"};
    const std::vector<std::string> methods{"auto", "gc", "exact"};

    // test
    std::string file;
    std::string unit = "deg";
    int order = default_order;
    std::string method = "auto";
    std::size_t exact_threshold = 7;
    auto* test_cmd = app.add_subcommand("test", "Test a sample of angles for uniformity");
    test_cmd->add_option("--file", file, "Angle file, one value per line")->required();
    test_cmd->add_option("--unit", unit, "Unit of the file's angles")->check(CLI::IsMember(units));
    test_cmd->add_option("--order", order, "Truncation order of the expansion")->check(CLI::Range(3, 10));
    test_cmd->add_option("--method", method, "auto, gc or exact")->check(CLI::IsMember(methods));
    test_cmd->add_option("--exact-threshold", exact_threshold,
                         "auto uses exact quadrature for n below this");

    // cdf
    long long n = 0;
    double t = 0.0;
    auto* cdf_cmd = app.add_subcommand("cdf", "Null CDF of the statistic at t");
    cdf_cmd->add_option("--n", n, "Sample size")->required();
    cdf_cmd->add_option("--t", t, "Statistic value")->required();
    cdf_cmd->add_option("--unit", unit, "Unit of t")->check(CLI::IsMember(units));
    cdf_cmd->add_option("--order", order, "Truncation order")->check(CLI::Range(3, 10));
    cdf_cmd->add_option("--method", method, "auto, gc or exact")->check(CLI::IsMember(methods));
    cdf_cmd->add_option("--exact-threshold", exact_threshold);

    // critval
    double alpha = 0.05;
    auto* crit_cmd = app.add_subcommand("critval", "Critical value at significance level alpha");
    crit_cmd->add_option("--n", n, "Sample size")->required();
    crit_cmd->add_option("--alpha", alpha, "Significance level")->required();
    crit_cmd->add_option("--order", order, "Truncation order")->check(CLI::Range(3, 10));

    // moments
    auto* mom_cmd = app.add_subcommand("moments", "Raw moments and cumulants of the statistic");
    mom_cmd->add_option("--n", n, "Sample size")->required();
    mom_cmd->add_option("--order", order, "Highest order")->check(CLI::Range(2, 10));

    // simulate
    std::size_t reps = 1000;
    std::string alt = "uniform";
    double mu = 0.0;
    double kappa = 0.0;
    std::uint64_t seed = 1;
    std::optional<double> fixed_critval;
    unsigned threads = 1;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo rejection-rate experiment");
    sim_cmd->add_option("--n", n, "Sample size")->required();
    sim_cmd->add_option("--reps", reps, "Number of repetitions");
    sim_cmd->add_option("--alpha", alpha, "Significance level");
    sim_cmd->add_option("--alt", alt, "uniform or vonmises")->check(CLI::IsMember({"uniform", "vonmises"}));
    sim_cmd->add_option("--mu", mu, "von Mises mean direction (radians)");
    sim_cmd->add_option("--kappa", kappa, "von Mises concentration");
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_option("--fixed-critval", fixed_critval, "Reject when the statistic exceeds DEG");
    sim_cmd->add_option("--order", order, "Truncation order")->check(CLI::Range(3, 10));
    sim_cmd->add_option("--threads", threads, "Worker threads");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }

    try {
        json j;
        j["schema"] = schema;

        if (*test_cmd) {
            const auto sample = ingest(read_angle_file(file), detail::parse_unit(unit));
            test_options opt;
            opt.method = detail::parse_method(method);
            opt.order = order;
            opt.exact_threshold = exact_threshold;
            const auto r = rao_test(sample, opt);
            j["n"] = r.n;
            j["statistic_deg"] = r.statistic_deg;
            j["statistic_rad"] = r.statistic_rad;
            j["p_value"] = r.p_value;
            j["method"] = to_string(r.method);
            j["order"] = r.method == test_method::gram_charlier ? json(r.truncation_order) : json(nullptr);
        } else if (*cdf_cmd) {
            detail::require_n(n);
            const double t_rad = detail::parse_unit(unit) == angle_unit::degrees ? to_radians(t) : t;
            test_options opt;
            opt.method = detail::parse_method(method);
            opt.exact_threshold = exact_threshold;
            const auto m = resolve_method(static_cast<std::size_t>(n), opt);
            j["n"] = n;
            j["t_deg"] = to_degrees(t_rad);
            j["t_rad"] = t_rad;
            if (m == test_method::exact_quadrature) {
                j["cdf"] = exact_cdf(n, t_rad);
                j["method"] = to_string(m);
                j["order"] = nullptr;
            } else {
                const auto p = make_approximation(n, order).evaluate(t_rad);
                j["cdf"] = p.value;
                j["method"] = to_string(m);
                j["order"] = order;
                j["clamped"] = p.clamped;
                j["outside_support"] = p.outside_support;
            }
        } else if (*crit_cmd) {
            detail::require_n(n);
            detail::require_alpha(alpha);
            const double c = make_approximation(n, order).critical_value_rad(alpha);
            j["n"] = n;
            j["alpha"] = alpha;
            j["order"] = order;
            j["critical_value_deg"] = to_degrees(c);
            j["critical_value_rad"] = c;
        } else if (*mom_cmd) {
            detail::require_n(n);
            const auto m = moments<wide_real>(n, order);
            const auto c = cumulants(m);
            j["n"] = n;
            j["order"] = order;
            j["raw_moments"] = detail::to_json_array(m.raw);
            j["raw_cumulants"] = detail::to_json_array(c.raw);
            j["standardized_cumulants"] = detail::to_json_array(c.standardized);
        } else if (*sim_cmd) {
            detail::require_n(n);
            detail::require_alpha(alpha);
            sim::experiment_config cfg;
            cfg.n = static_cast<std::size_t>(n);
            cfg.reps = reps;
            cfg.alpha = alpha;
            cfg.seed = seed;
            cfg.threads = threads;
            if (alt == "vonmises") {
                cfg.alt = sim::von_mises_alternative{mu, kappa};
            }
            if (fixed_critval) {
                cfg.method = sim::fixed_critical_value{*fixed_critval};
            } else {
                cfg.method = sim::gram_charlier_rule{order};
            }
            const auto r = sim::run_experiment(cfg);
            j["n"] = cfg.n;
            j["alpha"] = alpha;
            j["alternative"] = alt == "vonmises" ? json{{"kind", "vonmises"}, {"mu", mu}, {"kappa", kappa}}
                                                 : json{{"kind", "uniform"}};
            j["method"] = fixed_critval ? json{{"kind", "fixed_critical_value"}, {"degrees", *fixed_critval}}
                                        : json{{"kind", "gram_charlier"}, {"order", order}};
            j["seed"] = seed;
            j["accept"] = r.accept;
            j["reject"] = r.reject;
            j["reps"] = r.reps;
            j["rejection_rate"] = r.rejection_rate;
            j["wilson_ci_95"] = {r.wilson_ci_95.low, r.wilson_ci_95.high};
        }
        out << j.dump(2) << "\n";
        return ok;
    } catch (const invalid_input& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return computation_failed;
    }
}

}  // namespace rao::cli

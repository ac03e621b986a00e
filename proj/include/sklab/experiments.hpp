#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sklab/bounds.hpp"
#include "sklab/estimators.hpp"

namespace sklab {

struct ExperimentConfig {
    std::string subcommand;
    std::vector<int> n_list = {8};
    enum class BetaMode { fixed, critical, near } beta_mode = BetaMode::critical;
    double beta_value = 0.0;
    double near_alpha = 1.0;
    double near_d = 1.0;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
    int nodes = 16;
    int threads = 1;
    std::vector<double> t_grid;      // empty -> suite default
    std::vector<double> lambda_grid; // empty -> suite default
    double x = 0.3;                  // tilt for annealed-mgf
    double fd_step = 1e-4;
    std::string out_path; // empty -> stdout
    enum class Format { csv, json } format = Format::csv;

    double beta_for(int n) const {
        switch (beta_mode) {
            case BetaMode::fixed: return beta_value;
            case BetaMode::critical: return beta_critical();
            case BetaMode::near: return near_critical_beta(n, near_alpha, near_d);
        }
        return beta_critical();
    }
};

struct ResultRecord {
    std::string subcommand;
    std::string quantity;
    int n = 0;
    double beta = 0.0;
    double t = 0.0;
    double lambda = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double reference = 0.0;
    double reference_stderr = 0.0;
    double bound = 0.0;
    double window = 0.0; // acceptance window added to the bound
    bool has_bound = false;
    bool satisfied = true;
    double wall_seconds = 0.0;
};

// ---------------------------------------------------------------------------
// config <-> json

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{
        {"subcommand", c.subcommand},
        {"n", c.n_list},
        {"beta_mode", c.beta_mode == ExperimentConfig::BetaMode::fixed      ? "fixed"
                      : c.beta_mode == ExperimentConfig::BetaMode::critical ? "critical"
                                                                            : "near"},
        {"beta", c.beta_value},
        {"alpha", c.near_alpha},
        {"d", c.near_d},
        {"samples", c.samples},
        {"seed", c.seed},
        {"nodes", c.nodes},
        {"threads", c.threads},
        {"t_grid", c.t_grid},
        {"lambda_grid", c.lambda_grid},
        {"x", c.x},
        {"fd_step", c.fd_step},
        {"out", c.out_path},
        {"format", c.format == ExperimentConfig::Format::csv ? "csv" : "json"},
    };
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    if (j.contains("subcommand")) j.at("subcommand").get_to(c.subcommand);
    if (j.contains("n")) j.at("n").get_to(c.n_list);
    if (j.contains("beta_mode")) {
        const std::string m = j.at("beta_mode");
        c.beta_mode = m == "fixed"      ? ExperimentConfig::BetaMode::fixed
                      : m == "critical" ? ExperimentConfig::BetaMode::critical
                                        : ExperimentConfig::BetaMode::near;
    }
    if (j.contains("beta")) j.at("beta").get_to(c.beta_value);
    if (j.contains("alpha")) j.at("alpha").get_to(c.near_alpha);
    if (j.contains("d")) j.at("d").get_to(c.near_d);
    if (j.contains("samples")) j.at("samples").get_to(c.samples);
    if (j.contains("seed")) j.at("seed").get_to(c.seed);
    if (j.contains("nodes")) j.at("nodes").get_to(c.nodes);
    if (j.contains("threads")) j.at("threads").get_to(c.threads);
    if (j.contains("t_grid")) j.at("t_grid").get_to(c.t_grid);
    if (j.contains("lambda_grid")) j.at("lambda_grid").get_to(c.lambda_grid);
    if (j.contains("x")) j.at("x").get_to(c.x);
    if (j.contains("fd_step")) j.at("fd_step").get_to(c.fd_step);
    if (j.contains("out")) j.at("out").get_to(c.out_path);
    if (j.contains("format"))
        c.format = j.at("format") == "json" ? ExperimentConfig::Format::json
                                            : ExperimentConfig::Format::csv;
}

namespace detail {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline ResultRecord base_record(const ExperimentConfig& cfg, int n, double beta) {
    ResultRecord r;
    r.subcommand = cfg.subcommand;
    r.n = n;
    r.beta = beta;
    r.samples = cfg.samples;
    r.seed = cfg.seed;
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// suites

// Direct Var(F_N) vs the interpolation identity, plus the (log n)^2 envelope
// ratio, one block of records per n.
inline std::vector<ResultRecord> run_variance_scan(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    const QuadratureRule rule = gauss_legendre01(cfg.nodes);
    for (int n : cfg.n_list) {
        const double beta = cfg.beta_for(n);
        if (n < 1 || n > kMaxEnumerationBits) {
            std::cerr << "variance-scan: skipping n=" << n << " (outside kernel cap)\n";
            continue;
        }
        detail::Stopwatch sw;
        const DisorderAverage direct =
            variance_direct(n, beta, cfg.samples, cfg.seed, cfg.threads);
        const DisorderAverage identity =
            variance_via_identity(n, beta, cfg.samples, rule, cfg.seed, cfg.threads);

        ResultRecord rd = detail::base_record(cfg, n, beta);
        rd.quantity = "variance_direct";
        rd.estimate = direct.variance;
        rd.stderr_ = direct.stderr_variance;
        rd.wall_seconds = sw.seconds();
        out.push_back(rd);

        ResultRecord ri = detail::base_record(cfg, n, beta);
        ri.quantity = "variance_identity";
        ri.estimate = identity.mean;
        ri.stderr_ = identity.stderr_mean;
        ri.wall_seconds = sw.seconds();
        out.push_back(ri);

        ResultRecord rc = detail::base_record(cfg, n, beta);
        rc.quantity = "identity_vs_direct";
        rc.estimate = std::abs(direct.variance - identity.mean);
        rc.stderr_ = combined_stderr(direct.stderr_variance, identity.stderr_mean);
        rc.bound = 0.0;
        rc.window = 3.0 * rc.stderr_;
        rc.has_bound = true;
        rc.satisfied = rc.estimate <= rc.bound + rc.window;
        rc.wall_seconds = sw.seconds();
        out.push_back(rc);

        ResultRecord re = detail::base_record(cfg, n, beta);
        re.quantity = "envelope_ratio"; // Var / ((log n)^2 + 1), reported only
        re.estimate = direct.variance / theorem_envelope_critical(n, 1.0);
        re.stderr_ = direct.stderr_variance / theorem_envelope_critical(n, 1.0);
        re.wall_seconds = sw.seconds();
        out.push_back(re);
    }
    return out;
}

inline std::vector<ResultRecord> run_identity_check(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    const QuadratureRule rule = gauss_legendre01(cfg.nodes);
    for (int n : cfg.n_list) {
        const double beta = cfg.beta_for(n);
        detail::Stopwatch sw;
        const DisorderAverage direct =
            variance_direct(n, beta, cfg.samples, cfg.seed, cfg.threads);
        const DisorderAverage identity =
            variance_via_identity(n, beta, cfg.samples, rule, cfg.seed, cfg.threads);
        ResultRecord r = detail::base_record(cfg, n, beta);
        r.quantity = "identity_vs_direct";
        r.estimate = direct.variance;
        r.stderr_ = direct.stderr_variance;
        r.reference = identity.mean;
        r.reference_stderr = identity.stderr_mean;
        r.window = 3.0 * combined_stderr(direct.stderr_variance, identity.stderr_mean);
        r.has_bound = true;
        r.bound = identity.mean; // |estimate - reference| <= window
        r.satisfied = std::abs(direct.variance - identity.mean) <= r.window;
        r.wall_seconds = sw.seconds();
        out.push_back(r);
    }
    return out;
}

// MC estimate of E<R^2>_{t,0} against the lemma bound over a t grid scaled
// by 1/(2 beta^2); grid points with 2 beta^2 t >= 1 are skipped.
inline std::vector<ResultRecord> run_lemma_check(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    std::vector<double> fractions = cfg.t_grid;
    if (fractions.empty())
        fractions = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    for (int n : cfg.n_list) {
        const double beta = cfg.beta_for(n);
        // fractions scale the admissible range [0, min(1, 1/(2 beta^2)))
        const double t_max = std::min(1.0, 1.0 / (2.0 * beta * beta));
        for (double frac : fractions) {
            const double t = frac * t_max;
            if (2.0 * beta * beta * t >= 1.0 || t > 1.0) {
                std::cerr << "lemma-check: skipping t=" << t << " (outside domain)\n";
                continue;
            }
            detail::Stopwatch sw;
            const MonotonicityScan scan =
                monotonicity_scan(n, beta, cfg.samples, {t}, cfg.seed, cfg.threads);
            const DisorderAverage avg = summarize(scan.samples[0], cfg.seed);
            ResultRecord r = detail::base_record(cfg, n, beta);
            r.quantity = "lemma_bound";
            r.t = t;
            r.estimate = avg.mean;
            r.stderr_ = avg.stderr_mean;
            r.bound = lemma_bound(n, beta, t);
            r.window = 3.0 * avg.stderr_mean;
            r.has_bound = true;
            r.satisfied = r.estimate <= r.bound + r.window;
            r.wall_seconds = sw.seconds();
            out.push_back(r);
        }
    }
    return out;
}

// E phi(t,lambda) <= E phi(0,lambda+t), paired per realization.
inline std::vector<ResultRecord> run_interpolation_check(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    std::vector<double> ts = cfg.t_grid, ls = cfg.lambda_grid;
    if (ts.empty()) ts = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    if (ls.empty()) ls = {0.1, 0.2, 0.1, 0.2, 0.3, 0.2};
    if (ts.size() != ls.size())
        throw std::invalid_argument("interpolation-check: t and lambda grids must pair up");
    for (int n : cfg.n_list) {
        const double beta = cfg.beta_for(n);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const double t = ts[j], lambda = ls[j];
            if (2.0 * beta * beta * (lambda + t) >= 1.0) {
                std::cerr << "interpolation-check: skipping (t,lambda)=(" << t << "," << lambda
                          << ") outside MGF domain\n";
                continue;
            }
            detail::Stopwatch sw;
            auto lhs = map_replicas(cfg.samples, cfg.threads, [&](std::uint32_t r) {
                const CoupledDisorder cd = sample_coupled(n, cfg.seed, r);
                return coupled_enumerate(cd, InterpolationPoint{beta, t, lambda}).phi_hat;
            });
            auto rhs = map_replicas(cfg.samples, cfg.threads, [&](std::uint32_t r) {
                const CoupledDisorder cd = sample_coupled(n, cfg.seed, r);
                return coupled_enumerate(cd, InterpolationPoint{beta, 0.0, lambda + t}).phi_hat;
            });
            const DisorderAverage diff = paired_difference(rhs, lhs, cfg.seed); // lhs - rhs
            ResultRecord r = detail::base_record(cfg, n, beta);
            r.quantity = "interpolation_inequality";
            r.t = t;
            r.lambda = lambda;
            r.estimate = diff.mean; // E phi(t,lambda) - E phi(0,lambda+t)
            r.stderr_ = diff.stderr_mean;
            r.bound = 0.0;
            r.window = 3.0 * diff.stderr_mean;
            r.has_bound = true;
            r.satisfied = r.estimate <= r.bound + r.window;
            r.wall_seconds = sw.seconds();
            out.push_back(r);
        }
    }
    return out;
}

// Central finite difference of E phi in t against E[beta^2 (r2 - r2_cross)],
// paired per realization; window 3 stderr + 10 h^2.
inline std::vector<ResultRecord> run_derivative_check(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    std::vector<double> ts = cfg.t_grid, ls = cfg.lambda_grid;
    if (ts.empty()) ts = {0.25, 0.5, 0.75};
    if (ls.empty()) ls = {0.0, 0.1};
    const double h = cfg.fd_step;
    for (int n : cfg.n_list) {
        const double beta = cfg.beta_for(n);
        for (double t : ts)
            for (double lambda : ls) {
                detail::Stopwatch sw;
                auto devs = map_replicas(cfg.samples, cfg.threads, [&](std::uint32_t rr) {
                    const CoupledDisorder cd = sample_coupled(n, cfg.seed, rr);
                    const double pp =
                        coupled_enumerate(cd, InterpolationPoint{beta, t + h, lambda}).phi_hat;
                    const double pm =
                        coupled_enumerate(cd, InterpolationPoint{beta, t - h, lambda}).phi_hat;
                    const CoupledSummary cs =
                        coupled_enumerate(cd, InterpolationPoint{beta, t, lambda});
                    return (pp - pm) / (2.0 * h) -
                           beta * beta * (cs.r2 - cs.r2_cross);
                });
                require_finite(devs, cfg.seed);
                const DisorderAverage dev = summarize(devs, cfg.seed);
                ResultRecord r = detail::base_record(cfg, n, beta);
                r.quantity = "gaussian_ibp_derivative";
                r.t = t;
                r.lambda = lambda;
                r.estimate = std::abs(dev.mean);
                r.stderr_ = dev.stderr_mean;
                r.bound = 0.0;
                r.window = 3.0 * dev.stderr_mean + 10.0 * h * h;
                r.has_bound = true;
                r.satisfied = r.estimate <= r.bound + r.window;
                r.wall_seconds = sw.seconds();
                out.push_back(r);
            }
    }
    return out;
}

// Deterministic grid check of the Rademacher MGF against 1/sqrt(1-2x).
inline std::vector<ResultRecord> run_mgf_check(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    std::vector<double> xs = cfg.lambda_grid;
    if (xs.empty())
        for (int i = 1; i <= 9; ++i) xs.push_back(0.05 * i);
    std::vector<int> ns = cfg.n_list;
    if (ns.size() == 1 && ns[0] == 8) { // default n-list for this suite
        ns.clear();
        for (int n = 1; n <= 30; ++n) ns.push_back(n);
    }
    for (int n : ns)
        for (double x : xs) {
            detail::Stopwatch sw;
            ResultRecord r = detail::base_record(cfg, n, 0.0);
            r.quantity = "rademacher_mgf";
            r.lambda = x;
            r.samples = 0;
            r.estimate = rademacher_mgf_exact(n, x);
            r.bound = mgf_bound(x);
            r.has_bound = true;
            r.satisfied = n >= 2 ? r.estimate < r.bound : r.estimate <= r.bound;
            r.wall_seconds = sw.seconds();
            out.push_back(r);
        }
    return out;
}

// Paired monotonicity of t -> E<R^2>_{t,0} over a t grid.
inline std::vector<ResultRecord> run_monotonicity(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    std::vector<double> ts = cfg.t_grid;
    if (ts.empty()) ts = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    for (int n : cfg.n_list) {
        const double beta = cfg.beta_for(n);
        detail::Stopwatch sw;
        const MonotonicityScan scan =
            monotonicity_scan(n, beta, cfg.samples, ts, cfg.seed, cfg.threads);
        for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
            const DisorderAverage step =
                paired_difference(scan.samples[j], scan.samples[j + 1], cfg.seed);
            ResultRecord r = detail::base_record(cfg, n, beta);
            r.quantity = "monotone_step";
            r.t = ts[j + 1];
            r.estimate = step.mean; // E<R^2>_{t_{j+1}} - E<R^2>_{t_j}, should be >= -window
            r.stderr_ = step.stderr_mean;
            r.bound = 0.0;
            r.window = 3.0 * step.stderr_mean;
            r.has_bound = true;
            r.satisfied = r.estimate >= -r.window;
            r.wall_seconds = sw.seconds();
            out.push_back(r);
        }
    }
    return out;
}

// MC estimate of E<exp(x n R^2)>_{0,0} against the exact binomial value.
inline std::vector<ResultRecord> run_annealed_mgf(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> out;
    for (int n : cfg.n_list) {
        const double beta = cfg.beta_for(n);
        detail::Stopwatch sw;
        const DisorderAverage est =
            annealed_overlap_mgf(n, cfg.x, cfg.samples, cfg.seed, beta, cfg.threads);
        const double exact = rademacher_mgf_exact(n, cfg.x);
        ResultRecord r = detail::base_record(cfg, n, beta);
        r.quantity = "annealed_overlap_mgf";
        r.lambda = cfg.x;
        r.estimate = est.mean;
        r.stderr_ = est.stderr_mean;
        r.reference = exact;
        r.bound = exact;
        r.window = 3.0 * est.stderr_mean;
        r.has_bound = true;
        r.satisfied = std::abs(est.mean - exact) <= r.window;
        r.wall_seconds = sw.seconds();
        out.push_back(r);
    }
    return out;
}

inline std::vector<ResultRecord> run_suite(const ExperimentConfig& cfg) {
    if (cfg.subcommand == "variance-scan") return run_variance_scan(cfg);
    if (cfg.subcommand == "identity-check") return run_identity_check(cfg);
    if (cfg.subcommand == "lemma-check") return run_lemma_check(cfg);
    if (cfg.subcommand == "interpolation-check") return run_interpolation_check(cfg);
    if (cfg.subcommand == "derivative-check") return run_derivative_check(cfg);
    if (cfg.subcommand == "mgf-check") return run_mgf_check(cfg);
    if (cfg.subcommand == "monotonicity") return run_monotonicity(cfg);
    if (cfg.subcommand == "annealed-mgf") return run_annealed_mgf(cfg);
    throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
}

// ---------------------------------------------------------------------------
// emission

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline const char* csv_header() {
    return "subcommand,quantity,n,beta,t,lambda,samples,seed,estimate,stderr,"
           "reference,reference_stderr,bound,window,satisfied,wall_seconds";
}

inline std::string to_csv_row(const ResultRecord& r) {
    std::ostringstream os;
    os << r.subcommand << ',' << r.quantity << ',' << r.n << ',' << format_double(r.beta) << ','
       << format_double(r.t) << ',' << format_double(r.lambda) << ',' << r.samples << ','
       << r.seed << ',' << format_double(r.estimate) << ',' << format_double(r.stderr_) << ','
       << format_double(r.reference) << ',' << format_double(r.reference_stderr) << ','
       << format_double(r.bound) << ',' << format_double(r.window) << ','
       << (r.satisfied ? 1 : 0) << ',' << format_double(r.wall_seconds);
    return os.str();
}

inline void to_json(nlohmann::json& j, const ResultRecord& r) {
    j = nlohmann::json{
        {"subcommand", r.subcommand},
        {"quantity", r.quantity},
        {"n", r.n},
        {"beta", r.beta},
        {"t", r.t},
        {"lambda", r.lambda},
        {"samples", r.samples},
        {"seed", r.seed},
        {"estimate", r.estimate},
        {"stderr", r.stderr_},
        {"reference", r.reference},
        {"reference_stderr", r.reference_stderr},
        {"bound", r.bound},
        {"window", r.window},
        {"satisfied", r.satisfied},
        {"wall_seconds", r.wall_seconds},
    };
}

inline void emit_csv(const std::vector<ResultRecord>& records, std::ostream& os) {
    os << csv_header() << '\n';
    for (const auto& r : records) os << to_csv_row(r) << '\n';
}

inline void emit_json(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records,
                      std::ostream& os) {
    nlohmann::json j;
    j["config"] = cfg;
    j["results"] = records;
    os << j.dump(2) << '\n';
}

} // namespace sklab

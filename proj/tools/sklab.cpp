// Batch experiment runner for the SK verification suites.

#include <cstdlib>
#include <fstream>
#include <limits>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sklab/sklab.hpp"

namespace {

int default_threads() {
    if (const char* env = std::getenv("SKLAB_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

struct FlagState {
    std::string config_path;
    std::vector<int> n_list;
    double beta = -1.0;
    bool critical = false;
    std::string near_spec; // "alpha,d"
    std::uint64_t samples = 0;
    std::int64_t seed = -1;
    int nodes = 0;
    int threads = 0;
    std::vector<double> t_grid, lambda_grid;
    double x = std::numeric_limits<double>::quiet_NaN();
    std::string out_path;
    std::string format;
};

void apply_flags(const FlagState& f, const CLI::App* sub, sklab::ExperimentConfig& cfg) {
    auto passed = [sub](const std::string& name) { return sub->count(name) > 0; };
    if (passed("--n")) cfg.n_list = f.n_list;
    if (passed("--beta")) {
        cfg.beta_mode = sklab::ExperimentConfig::BetaMode::fixed;
        cfg.beta_value = f.beta;
    }
    if (passed("--critical")) cfg.beta_mode = sklab::ExperimentConfig::BetaMode::critical;
    if (passed("--near")) {
        cfg.beta_mode = sklab::ExperimentConfig::BetaMode::near;
        const auto comma = f.near_spec.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--near expects alpha,d");
        cfg.near_alpha = std::stod(f.near_spec.substr(0, comma));
        cfg.near_d = std::stod(f.near_spec.substr(comma + 1));
    }
    if (passed("--samples")) cfg.samples = f.samples;
    if (passed("--seed")) cfg.seed = std::uint64_t(f.seed);
    if (passed("--nodes")) cfg.nodes = f.nodes;
    if (passed("--threads")) cfg.threads = f.threads;
    if (passed("--t-grid")) cfg.t_grid = f.t_grid;
    if (passed("--lambda-grid")) cfg.lambda_grid = f.lambda_grid;
    if (passed("--x")) cfg.x = f.x;
    if (passed("--out")) cfg.out_path = f.out_path;
    if (passed("--format"))
        cfg.format = f.format == "json" ? sklab::ExperimentConfig::Format::json
                                        : sklab::ExperimentConfig::Format::csv;
}

void add_common_flags(CLI::App* sub, FlagState& f) {
    sub->add_option("--config", f.config_path, "JSON config file; flags override its values");
    sub->add_option("--n", f.n_list, "system size(s)");
    sub->add_option("--beta", f.beta, "fixed inverse temperature");
    sub->add_flag("--critical", "use beta_c = 1/sqrt(2)");
    sub->add_option("--near", f.near_spec, "near-critical beta: alpha,d");
    sub->add_option("--samples", f.samples, "disorder sample count k");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--nodes", f.nodes, "Gauss-Legendre node count");
    sub->add_option("--threads", f.threads, "worker threads (default $SKLAB_THREADS or 1)");
    sub->add_option("--t-grid", f.t_grid, "t grid values");
    sub->add_option("--lambda-grid", f.lambda_grid, "lambda grid values");
    sub->add_option("--x", f.x, "MGF tilt x");
    sub->add_option("--out", f.out_path, "output path (default stdout)");
    sub->add_option("--format", f.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SK free-energy fluctuation laboratory"};
    app.require_subcommand(1);

    const std::vector<std::string> suites = {
        "variance-scan",     "identity-check",   "lemma-check", "interpolation-check",
        "derivative-check",  "mgf-check",        "monotonicity", "annealed-mgf",
    };
    FlagState flags;
    for (const auto& name : suites) {
        CLI::App* sub = app.add_subcommand(name);
        add_common_flags(sub, flags);
    }

    CLI11_PARSE(app, argc, argv);
    const CLI::App* sub = app.get_subcommands().front();

    try {
        sklab::ExperimentConfig cfg;
        cfg.threads = default_threads();
        if (sub->count("--config") > 0) {
            std::ifstream is(flags.config_path);
            if (!is) throw std::runtime_error("cannot open config " + flags.config_path);
            nlohmann::json j;
            is >> j;
            cfg = j.get<sklab::ExperimentConfig>();
        }
        cfg.subcommand = sub->get_name();
        apply_flags(flags, sub, cfg);

        const auto records = sklab::run_suite(cfg);

        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!cfg.out_path.empty()) {
            file.open(cfg.out_path);
            if (!file) throw std::runtime_error("cannot open output " + cfg.out_path);
            os = &file;
        }
        if (cfg.format == sklab::ExperimentConfig::Format::json)
            sklab::emit_json(cfg, records, *os);
        else
            sklab::emit_csv(records, *os);

        for (const auto& r : records)
            if (!r.satisfied) return 1;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "sklab: " << e.what() << '\n';
        return 2;
    }
}

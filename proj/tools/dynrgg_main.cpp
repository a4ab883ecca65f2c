#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynrgg/experiment.hpp"
#include "dynrgg/validate.hpp"

namespace {

struct Flags {
    std::optional<std::string> config_path;
    std::optional<std::int64_t> n, m, trials, steps;
    std::optional<double> mu, r, s, target_qn, epsilon;
    std::optional<int> ell_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out, format;
    std::vector<double> sr_grid;
    std::vector<std::string> tolerance_kv;
    bool quick{false};
    std::vector<int> only;
};

void add_common_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "JSON config file (flags override its values)");
    sub->add_option("--n", f.n, "agent / vertex count");
    sub->add_option("--mu", f.mu, "expected isolated-vertex count (resolves r)");
    sub->add_option("--r", f.r, "connection radius (exclusive with --mu)");
    sub->add_option("--s", f.s, "step length (exclusive with --target-qn)");
    sub->add_option("--target-qn", f.target_qn, "edge-break rate q*n to resolve s");
    sub->add_option("--m", f.m, "steps between heading refreshes");
    sub->add_option("--trials", f.trials, "independent trials");
    sub->add_option("--steps", f.steps, "trace length (dynamic long-trace mode)");
    sub->add_option("--epsilon", f.epsilon, "census closeness fraction (0, 1/2)");
    sub->add_option("--ell-max", f.ell_max, "largest component size tracked by the census");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--format", f.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

dynrgg::ExperimentConfig build_config(dynrgg::Mode mode, const Flags& f) {
    dynrgg::ExperimentConfig cfg;
    cfg.mode = mode;
    if (f.config_path) {
        std::ifstream in(*f.config_path);
        if (!in) throw std::invalid_argument("cannot read config file: " + *f.config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        dynrgg::apply_config_json(cfg, buf.str());
        cfg.mode = mode; // the subcommand wins
    }
    if (f.n) cfg.n = *f.n;
    if (f.mu) cfg.mu = *f.mu;
    if (f.r) cfg.r = *f.r;
    if (f.s) cfg.s = *f.s;
    if (f.target_qn) cfg.target_qn = *f.target_qn;
    if (f.m) cfg.m = *f.m;
    if (f.trials) cfg.trials = *f.trials;
    if (f.steps) cfg.steps = *f.steps;
    if (f.epsilon) cfg.epsilon = *f.epsilon;
    if (f.ell_max) cfg.ell_max = *f.ell_max;
    if (f.seed) cfg.seed = *f.seed;
    if (f.out) cfg.out = *f.out;
    if (f.format) cfg.format = *f.format == "csv" ? dynrgg::OutputFormat::csv
                                                  : dynrgg::OutputFormat::json;
    if (!f.sr_grid.empty()) cfg.sr_grid = f.sr_grid;
    if (f.quick) cfg.quick = true;
    if (!f.only.empty()) cfg.only = f.only;
    for (const std::string& kv : f.tolerance_kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--tolerance expects key=value, got: " + kv);
        }
        cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return cfg;
}

int run_validate(const dynrgg::ExperimentConfig& cfg) {
    dynrgg::ValidationOptions opts;
    opts.seed = cfg.seed;
    opts.quick = cfg.quick;
    opts.tolerances = cfg.tolerances;
    opts.only = cfg.only;

    const dynrgg::ValidationReport report = dynrgg::run_validation(opts);
    for (const dynrgg::CriterionResult& c : report.criteria) {
        std::fprintf(stderr, "%s criterion %2d %-32s %s\n", c.passed ? "PASS" : "FAIL", c.id,
                     c.name.c_str(), c.details.c_str());
    }
    dynrgg::write_output(cfg.out, dynrgg::to_json_text(report, opts));
    return report.all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynrgg: random geometric graphs under random-walk mobility on the unit torus"};
    app.require_subcommand(1);

    Flags flags;
    CLI::App* cmd_static = app.add_subcommand(
        "static-census", "independent placements: connectivity, K1, component census");
    CLI::App* cmd_dynamic = app.add_subcommand(
        "dynamic-run", "random-walk trace: B/D/S, joint transitions, period lengths");
    CLI::App* cmd_qtable =
        app.add_subcommand("q-table", "closed-form and integrated q over an s/r grid");
    CLI::App* cmd_theory =
        app.add_subcommand("theory", "all closed-form predictions for one parameter point");
    CLI::App* cmd_validate =
        app.add_subcommand("validate", "run the acceptance suite; nonzero exit on failure");
    for (CLI::App* sub : {cmd_static, cmd_dynamic, cmd_qtable, cmd_theory, cmd_validate}) {
        add_common_flags(sub, flags);
    }
    cmd_qtable->add_option("--sr-grid", flags.sr_grid, "s/r ratios for the table rows");
    cmd_validate->add_flag("--quick", flags.quick, "reduced trial counts (development only)");
    cmd_validate->add_option("--only", flags.only, "criterion ids to run");
    cmd_validate->add_option("--tolerance", flags.tolerance_kv,
                             "override a criterion's headline tolerance, e.g. c1=0.05");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_static->parsed()) {
            const auto cfg = build_config(dynrgg::Mode::static_census, flags);
            const auto report = dynrgg::run_static_experiment(cfg);
            dynrgg::write_output(cfg.out, cfg.format == dynrgg::OutputFormat::csv
                                              ? dynrgg::to_csv(report)
                                              : dynrgg::to_json_text(report));
        } else if (cmd_dynamic->parsed()) {
            const auto cfg = build_config(dynrgg::Mode::dynamic_run, flags);
            const auto report = dynrgg::run_dynamic_experiment(cfg);
            dynrgg::write_output(cfg.out, cfg.format == dynrgg::OutputFormat::csv
                                              ? dynrgg::to_csv(report)
                                              : dynrgg::to_json_text(report));
        } else if (cmd_qtable->parsed() || cmd_theory->parsed()) {
            const auto cfg = build_config(
                cmd_qtable->parsed() ? dynrgg::Mode::q_table : dynrgg::Mode::theory, flags);
            const auto table = dynrgg::emit_theory_table(cfg);
            dynrgg::write_output(cfg.out, cfg.format == dynrgg::OutputFormat::csv
                                              ? dynrgg::to_csv(table)
                                              : dynrgg::to_json_text(table));
        } else if (cmd_validate->parsed()) {
            return run_validate(build_config(dynrgg::Mode::validate, flags));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

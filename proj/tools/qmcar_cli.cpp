// Command-line driver: regenerates the convergence-rate experiments, audits
// net quality, and refits slopes from existing result CSVs.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qmcar/errors.hpp"
#include "qmcar/experiments.hpp"

namespace {

std::vector<unsigned> parse_m_range(const std::string& text) {
    // "A..B" or a single "A"
    std::size_t dots = text.find("..");
    std::vector<unsigned> range;
    try {
        if (dots == std::string::npos) {
            range.push_back(static_cast<unsigned>(std::stoul(text)));
        } else {
            unsigned lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
            unsigned hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
            if (hi < lo) throw std::invalid_argument("descending");
            for (unsigned m = lo; m <= hi; ++m) range.push_back(m);
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--m-range", "expected A..B with A <= B");
    }
    return range;
}

struct CommonFlags {
    std::string m_range_text;
    unsigned grid_m = 0;
    std::uint64_t seed = 1;
    std::string out_path;
    bool plot_data = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, const std::string& default_out) {
    cmd->add_option("--m-range", flags.m_range_text, "net resolutions, e.g. 9..14");
    cmd->add_option("--grid", flags.grid_m, "delta-cover grid resolution m_g");
    cmd->add_option("--seed", flags.seed, "base seed for the pseudo-random baselines");
    cmd->add_option("--out", flags.out_path, "output CSV path")->default_val(default_out);
    cmd->add_flag("--plot-data", flags.plot_data, "also write <out>.plot with (N, D) pairs");
}

qmcar::ExperimentConfig to_config(const std::string& experiment, const CommonFlags& flags) {
    qmcar::ExperimentConfig config;
    config.experiment = experiment;
    if (!flags.m_range_text.empty()) config.m_range = parse_m_range(flags.m_range_text);
    config.grid_m = flags.grid_m;
    config.seed = flags.seed;
    config.out_path = flags.out_path;
    config.emit_plot_data = flags.plot_data;
    return config;
}

int emit_experiment(const qmcar::ExperimentResult& result, const qmcar::ExperimentConfig& config) {
    qmcar::write_text_file(config.out_path, qmcar::format_csv(result));
    qmcar::write_text_file(config.out_path + ".slopes.txt", qmcar::format_slopes(result));
    if (config.emit_plot_data)
        qmcar::write_text_file(config.out_path + ".plot", qmcar::format_plot_data(result));
    std::cout << qmcar::format_slopes(result);
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << config.out_path << " (" << result.rows.size() << " rows)\n";
    return result.all_checks_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic acceptance-rejection sampling experiments"};
    app.require_subcommand(1);

    CommonFlags ex1_flags, ex2_flags, ex3_flags, audit_flags;
    CLI::App* ex1 = app.add_subcommand("example1", "4-D cube density, DAR vs RAR rates");
    add_common(ex1, ex1_flags, "example1.csv");
    CLI::App* ex2 = app.add_subcommand("example2", "2-D real-space density through the transform");
    add_common(ex2, ex2_flags, "example2.csv");
    CLI::App* ex3 = app.add_subcommand("example3", "1-D sum density, reduced sampler");
    add_common(ex3, ex3_flags, "example3.csv");
    CLI::App* audit = app.add_subcommand("net-audit", "empirical t values and isotropic bound");
    add_common(audit, audit_flags, "net-audit.csv");

    std::string fit_in, fit_out;
    CLI::App* fit = app.add_subcommand("fit", "refit slopes from a results CSV");
    fit->add_option("csv", fit_in, "input CSV")->required();
    fit->add_option("--out", fit_out, "slopes destination (default: stdout only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (ex1->parsed()) {
            auto config = to_config("example1", ex1_flags);
            return emit_experiment(qmcar::run_example1(config), config);
        }
        if (ex2->parsed()) {
            auto config = to_config("example2", ex2_flags);
            return emit_experiment(qmcar::run_example2(config), config);
        }
        if (ex3->parsed()) {
            auto config = to_config("example3", ex3_flags);
            return emit_experiment(qmcar::run_example3(config), config);
        }
        if (audit->parsed()) {
            auto config = to_config("net-audit", audit_flags);
            qmcar::NetAuditResult result = qmcar::run_net_audit(config);
            qmcar::write_text_file(config.out_path, qmcar::format_audit_csv(result));
            std::cout << qmcar::format_audit_csv(result);
            std::cout << "wrote " << config.out_path << '\n';
            return result.all_pass ? 0 : 2;
        }
        if (fit->parsed()) {
            std::ifstream in(fit_in, std::ios::binary);
            if (!in) {
                std::cerr << "error: cannot read " << fit_in << '\n';
                return 1;
            }
            std::ostringstream text;
            text << in.rdbuf();
            qmcar::ExperimentResult shell;
            shell.slopes = qmcar::refit_csv_text(text.str());
            std::string formatted = qmcar::format_slopes(shell);
            std::cout << formatted;
            if (!fit_out.empty()) qmcar::write_text_file(fit_out, formatted);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

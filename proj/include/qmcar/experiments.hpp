#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmcar/discrepancy.hpp"

namespace qmcar {

struct ExperimentConfig {
    std::string experiment;         // example1 | example2 | example3 | net-audit
    std::vector<unsigned> m_range;  // ascending; empty -> per-experiment default
    unsigned grid_m = 0;            // 0 -> per-experiment default
    std::uint64_t seed = 1;         // base seed for the pseudo-random baselines
    std::string out_path;           // CSV destination
    bool emit_plot_data = false;

    void validate() const;
};

struct ResultRow {
    std::string experiment;
    std::string sampler;
    unsigned m = 0;
    std::size_t driver_count = 0; // M
    std::size_t sample_count = 0; // N actually accepted
    double discrepancy_lower = 0.0;
    double discrepancy_upper = 0.0;
    double delta = 0.0;
    unsigned grid_m = 0;
    std::optional<std::uint64_t> seed; // empty for deterministic rows
};

struct SlopeFit {
    std::string experiment;
    std::string sampler;
    std::size_t points = 0;
    RateFit fit;
};

struct BoundCheck {
    std::string description;
    bool passed = false;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<SlopeFit> slopes;
    std::vector<BoundCheck> checks;
    std::vector<std::string> warnings;

    bool all_checks_passed() const;
};

// Ten pseudo-random baseline runs per configuration, per the averaging
// protocol the deterministic runs are compared against.
inline constexpr int kBaselineRuns = 10;

ExperimentResult run_example1(const ExperimentConfig& config);
ExperimentResult run_example2(const ExperimentConfig& config);
ExperimentResult run_example3(const ExperimentConfig& config);

struct NetAuditRow {
    unsigned s = 1;
    unsigned m = 0;
    unsigned t_empirical = 0;
    bool fairness_ok = false;
    double isotropic_estimate = 0.0;
    double lemma_bound = 0.0;
    bool bound_ok = false;
};

struct NetAuditResult {
    std::vector<NetAuditRow> rows;
    bool all_pass = false;
};

NetAuditResult run_net_audit(const ExperimentConfig& config);

std::string format_csv(const ExperimentResult& result);
std::string format_slopes(const ExperimentResult& result);
std::string format_plot_data(const ExperimentResult& result);
std::string format_audit_csv(const NetAuditResult& result);

void write_text_file(const std::string& path, const std::string& contents);

// Recompute the slope fits from a results CSV alone (pseudo-random rows are
// averaged per m before fitting, mirroring the runs).
std::vector<SlopeFit> refit_csv_text(const std::string& csv_text);

}  // namespace qmcar

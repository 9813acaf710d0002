#include "qmcar/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "qmcar/errors.hpp"
#include "qmcar/samplers.hpp"

namespace qmcar {

void ExperimentConfig::validate() const {
    if (!m_range.empty() && !std::is_sorted(m_range.begin(), m_range.end()))
        throw ValidationError("m range must be ascending");
}

bool ExperimentResult::all_checks_passed() const {
    for (const BoundCheck& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<unsigned> default_range(const ExperimentConfig& config, unsigned lo, unsigned hi) {
    if (!config.m_range.empty()) return config.m_range;
    std::vector<unsigned> range;
    for (unsigned m = lo; m <= hi; ++m) range.push_back(m);
    return range;
}

ResultRow make_row(const std::string& experiment, const SampleSet& set,
                   const DiscrepancyReport& report, unsigned m,
                   std::optional<std::uint64_t> seed) {
    ResultRow row;
    row.experiment = experiment;
    row.sampler = std::string(to_string(set.tag));
    row.m = m;
    row.driver_count = set.driver_count;
    row.sample_count = set.accepted_count();
    row.discrepancy_lower = report.lower_bound();
    row.discrepancy_upper = report.upper_bound();
    row.delta = report.delta;
    row.grid_m = report.grid_m;
    row.seed = seed;
    return row;
}

// Collapses rows of one (experiment, sampler) group to per-m means and fits
// log-log; identical logic serves both live runs and CSV refits.
struct FitAccumulator {
    // keyed by m: (sum N, sum D, rows)
    std::map<unsigned, std::array<double, 3>> per_m;

    void add(unsigned m, double n, double d) {
        auto& acc = per_m[m];
        acc[0] += n;
        acc[1] += d;
        acc[2] += 1.0;
    }
    std::optional<RateFit> fit(std::size_t* points_out) const {
        std::vector<double> ns, ds;
        for (const auto& [m, acc] : per_m) {
            double n = acc[0] / acc[2];
            double d = acc[1] / acc[2];
            if (n > 0 && d > 0) {
                ns.push_back(n);
                ds.push_back(d);
            }
        }
        if (points_out) *points_out = ns.size();
        if (ns.size() < 3) return std::nullopt;
        return fit_rate(ns, ds);
    }
};

void append_fits(ExperimentResult& result, const std::string& experiment) {
    std::map<std::string, FitAccumulator> groups;
    for (const ResultRow& row : result.rows)
        groups[row.sampler].add(row.m, static_cast<double>(row.sample_count),
                                row.discrepancy_lower);
    for (const auto& [sampler, acc] : groups) {
        std::size_t points = 0;
        if (auto fit = acc.fit(&points)) {
            SlopeFit s;
            s.experiment = experiment;
            s.sampler = sampler;
            s.points = points;
            s.fit = *fit;
            result.slopes.push_back(std::move(s));
        }
    }
}

const SlopeFit* find_slope(const ExperimentResult& result, const std::string& sampler) {
    for (const SlopeFit& s : result.slopes)
        if (s.sampler == sampler) return &s;
    return nullptr;
}

void check_slope_at_most(ExperimentResult& result, const std::string& sampler, double limit) {
    if (const SlopeFit* s = find_slope(result, sampler)) {
        result.checks.push_back({sampler + " slope " + fmt(s->fit.slope) + " <= " + fmt(limit),
                                 s->fit.slope <= limit});
    }
}

void check_slope_in_band(ExperimentResult& result, const std::string& sampler, double lo,
                         double hi) {
    if (const SlopeFit* s = find_slope(result, sampler)) {
        result.checks.push_back({sampler + " slope " + fmt(s->fit.slope) + " in [" + fmt(lo) +
                                     ", " + fmt(hi) + "]",
                                 s->fit.slope >= lo && s->fit.slope <= hi});
    }
}

}  // namespace

ExperimentResult run_example1(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    const std::vector<unsigned> ms = default_range(config, 9, 14);
    const unsigned grid_m = config.grid_m ? config.grid_m : 5;
    const DensityModel density = example1_density();
    const DirectionNumberTable& table = builtin_direction_table();

    std::unique_ptr<DeltaCoverGrid> grid;
    try {
        grid = std::make_unique<DeltaCoverGrid>(density, grid_m);
    } catch (const BudgetError& e) {
        result.warnings.push_back(e.what());
        return result;
    }

    for (unsigned m : ms) {
        SampleSet dar = dar_cube_at_resolution(density, m, table);
        DiscrepancyReport dar_report = grid->evaluate(dar.points);
        result.rows.push_back(make_row("example1", dar, dar_report, m, std::nullopt));

        const std::size_t n = std::max<std::size_t>(1, dar.accepted_count());
        for (int i = 0; i < kBaselineRuns; ++i) {
            const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
            SampleSet baseline = rar(density, nullptr, n, seed);
            DiscrepancyReport report = grid->evaluate(baseline.points);
            result.rows.push_back(make_row("example1", baseline, report, m, seed));
        }
    }

    append_fits(result, "example1");
    check_slope_at_most(result, "DAR_CUBE", -0.55);
    check_slope_in_band(result, "RAR", -0.60, -0.38);
    return result;
}

ExperimentResult run_example2(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    // The wider default range keeps the pseudo-random baseline's fitted slope
    // near its -1/2 asymptote; narrower sweeps leave it too noisy to compare.
    const std::vector<unsigned> ms = default_range(config, 9, 16);
    const unsigned grid_m = config.grid_m ? config.grid_m : 8;
    Example2 model = example2_density_and_proposal();
    const DirectionNumberTable& table = builtin_direction_table();

    std::unique_ptr<DeltaCoverGrid> grid;
    try {
        grid = std::make_unique<DeltaCoverGrid>(model.density, grid_m, &model.proposal);
    } catch (const BudgetError& e) {
        result.warnings.push_back(e.what());
        return result;
    }

    // Grid sanity: the largest anchor reaches the whole support, so its mass
    // must be the total mass.
    {
        std::vector<double> top(model.density.dimension);
        for (unsigned j = 0; j < model.density.dimension; ++j)
            top[j] = grid->axis_anchors(j).back();
        double mass = model.density.box_mass(top);
        result.checks.push_back(
            {"largest-anchor box mass " + fmt(mass) + " matches C within 1e-6",
             std::abs(mass - model.density.total_mass) <= 1e-6});
    }

    for (unsigned m : ms) {
        SampleSet dar = dar_real_at_resolution(model.density, model.proposal, m, table);
        DiscrepancyReport dar_report = grid->evaluate(dar.points);
        result.rows.push_back(make_row("example2", dar, dar_report, m, std::nullopt));

        const std::size_t n = std::max<std::size_t>(1, dar.accepted_count());
        for (int i = 0; i < kBaselineRuns; ++i) {
            const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
            SampleSet baseline = rar(model.density, &model.proposal, n, seed);
            DiscrepancyReport report = grid->evaluate(baseline.points);
            result.rows.push_back(make_row("example2", baseline, report, m, seed));
        }
    }

    append_fits(result, "example2");
    check_slope_at_most(result, "DAR_REAL", -0.60);
    const SlopeFit* dar_fit = find_slope(result, "DAR_REAL");
    const SlopeFit* rar_fit = find_slope(result, "RAR");
    if (dar_fit && rar_fit) {
        double sep = rar_fit->fit.slope - dar_fit->fit.slope;
        result.checks.push_back(
            {"RAR-DAR slope separation " + fmt(sep) + " >= 0.15", sep >= 0.15});
    }
    return result;
}

ExperimentResult run_example3(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    const std::vector<unsigned> ms = default_range(config, 9, 14);
    const SumDecomposition decomposition = example3_decomposition();
    const DirectionNumberTable& table = builtin_direction_table();

    for (unsigned m : ms) {
        const std::size_t n = std::size_t{1} << m;
        DrarPlan plan = plan_drar(decomposition, n);

        SampleSet det = drar_sample(plan, table);
        DiscrepancyReport det_report;
        det_report.grid_max = star_discrepancy_1d_exact(det.points, decomposition.target_cdf);
        det_report.delta = 0.0;
        det_report.sample_count = det.accepted_count();
        result.rows.push_back(make_row("example3", det, det_report, m, std::nullopt));

        for (int i = 0; i < kBaselineRuns; ++i) {
            const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
            SampleSet baseline = drar_sample_random(plan, seed);
            DiscrepancyReport report;
            report.grid_max = star_discrepancy_1d_exact(baseline.points, decomposition.target_cdf);
            report.delta = 0.0;
            report.sample_count = baseline.accepted_count();
            result.rows.push_back(make_row("example3", baseline, report, m, seed));
        }
    }

    append_fits(result, "example3");
    check_slope_at_most(result, "DRAR", -0.85);
    check_slope_in_band(result, "RAR", -0.62, -0.40);
    return result;
}

NetAuditResult run_net_audit(const ExperimentConfig& config) {
    config.validate();
    NetAuditResult result;
    result.all_pass = true;
    std::vector<unsigned> ms = default_range(config, 4, 12);
    const DirectionNumberTable& table = builtin_direction_table();

    for (unsigned s = 1; s <= 5; ++s) {
        for (unsigned m : ms) {
            if (m > 12) continue; // exhaustive fairness enumeration cap
            NetPoints points = sobol_points(m, s, table);
            NetAuditRow row;
            row.s = s;
            row.m = m;
            row.t_empirical = audit_t_value(points, m, s, m);
            row.fairness_ok = is_fair_at_order(points, m, m - row.t_empirical);
            IsotropicOptions opt;
            opt.trials = 10000;
            opt.seed = config.seed;
            row.isotropic_estimate = isotropic_lower_estimate(points.to_doubles(), s, opt);
            row.lemma_bound = 2.0 * s * std::pow(2.0, static_cast<double>(row.t_empirical) / s) *
                              std::pow(std::ldexp(1.0, static_cast<int>(m)), -1.0 / s);
            row.bound_ok = row.isotropic_estimate <= row.lemma_bound + 1e-12;
            result.all_pass = result.all_pass && row.bound_ok && row.fairness_ok;
            result.rows.push_back(row);
        }
    }
    return result;
}

std::string format_csv(const ExperimentResult& result) {
    std::string out =
        "experiment,sampler,m,M,N,discrepancy_lower,discrepancy_upper,delta,grid_m,seed\n";
    for (const ResultRow& r : result.rows) {
        out += r.experiment + ',' + r.sampler + ',' + std::to_string(r.m) + ',' +
               std::to_string(r.driver_count) + ',' + std::to_string(r.sample_count) + ',' +
               fmt(r.discrepancy_lower) + ',' + fmt(r.discrepancy_upper) + ',' + fmt(r.delta) +
               ',' + std::to_string(r.grid_m) + ',' +
               (r.seed ? std::to_string(*r.seed) : std::string("-")) + '\n';
    }
    for (const std::string& w : result.warnings) out += "# warning: " + w + '\n';
    return out;
}

std::string format_slopes(const ExperimentResult& result) {
    std::string out;
    for (const SlopeFit& s : result.slopes)
        out += s.experiment + ' ' + s.sampler + " points=" + std::to_string(s.points) +
               " slope=" + fmt(s.fit.slope) + " intercept=" + fmt(s.fit.intercept) +
               " r2=" + fmt(s.fit.r_squared) + '\n';
    for (const BoundCheck& c : result.checks)
        out += std::string(c.passed ? "PASS " : "FAIL ") + c.description + '\n';
    return out;
}

std::string format_plot_data(const ExperimentResult& result) {
    // per-(sampler, m) means, gnuplot-style blocks
    std::map<std::string, FitAccumulator> groups;
    for (const ResultRow& row : result.rows)
        groups[row.sampler].add(row.m, static_cast<double>(row.sample_count),
                                row.discrepancy_lower);
    std::string out;
    for (const auto& [sampler, acc] : groups) {
        out += "# " + sampler + " (N, discrepancy)\n";
        for (const auto& [m, a] : acc.per_m)
            out += fmt(a[0] / a[2]) + ' ' + fmt(a[1] / a[2]) + '\n';
        out += '\n';
    }
    return out;
}

std::string format_audit_csv(const NetAuditResult& result) {
    std::string out = "experiment,s,m,t_empirical,fairness,isotropic_estimate,lemma_bound,bound\n";
    for (const NetAuditRow& r : result.rows)
        out += std::string("net-audit,") + std::to_string(r.s) + ',' + std::to_string(r.m) + ',' +
               std::to_string(r.t_empirical) + ',' + (r.fairness_ok ? "pass" : "fail") + ',' +
               fmt(r.isotropic_estimate) + ',' + fmt(r.lemma_bound) + ',' +
               (r.bound_ok ? "pass" : "fail") + '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << contents;
}

std::vector<SlopeFit> refit_csv_text(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("experiment,", 0) != 0)
        throw ParseError("refit: missing CSV header");
    std::map<std::pair<std::string, std::string>, FitAccumulator> groups;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 10)
            throw ParseError("refit: malformed CSV line " + std::to_string(line_no));
        unsigned m = static_cast<unsigned>(std::stoul(fields[2]));
        double n = std::stod(fields[4]);
        double d = std::stod(fields[5]);
        groups[{fields[0], fields[1]}].add(m, n, d);
    }
    std::vector<SlopeFit> slopes;
    for (const auto& [key, acc] : groups) {
        std::size_t points = 0;
        if (auto fit = acc.fit(&points)) {
            SlopeFit s;
            s.experiment = key.first;
            s.sampler = key.second;
            s.points = points;
            s.fit = *fit;
            slopes.push_back(std::move(s));
        }
    }
    return slopes;
}

}  // namespace qmcar

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmcar/densities.hpp"

namespace qmcar {

// Exact sup_t |#{x_n < t}/N - cdf(t)| over a sorted sweep of the points.
// cdf must be a nondecreasing normalized CDF with sup value 1.
double star_discrepancy_1d_exact(std::span<const double> points, const ScalarFn& cdf);

// Same sup with the empirical measure weighted 1/normalizer per point instead
// of 1/N; used when a sample is graded against a different nominal count.
double star_discrepancy_1d_weighted(std::span<const double> points, const ScalarFn& cdf,
                                    double normalizer);

struct DiscrepancyReport {
    double grid_max = 0.0; // max over the delta-cover anchors = lower bound
    double delta = 0.0;
    std::size_t sample_count = 0;
    unsigned grid_m = 0;
    std::string sampler_tag;

    double lower_bound() const { return grid_max; }
    double upper_bound() const { return grid_max + delta; }
};

// Dyadic anchor grid over a density's domain. On the cube the anchors are
// a_j 2^-m; on real space they sit at F_j^{-1}(a_j 2^-m) through the proposal
// marginals. The grid is sample-independent, so build once and evaluate many
// point sets against it. Counting is strict (< t) on the cube and closed
// (<= t) on real space, matching the two test-box conventions.
class DeltaCoverGrid {
public:
    DeltaCoverGrid(const DensityModel& density, unsigned grid_m,
                   const ProposalModel* proposal = nullptr,
                   std::size_t cell_budget = std::size_t{1} << 26);

    // points: row-major, dimension columns.
    DiscrepancyReport evaluate(std::span<const double> points) const;

    double delta() const { return delta_; }
    unsigned grid_m() const { return grid_m_; }
    const std::vector<double>& axis_anchors(unsigned j) const { return axis_anchors_[j]; }

private:
    unsigned dimension_;
    unsigned grid_m_;
    std::size_t resolution_; // 2^grid_m
    Domain domain_;
    double delta_ = 0.0;
    std::vector<std::vector<double>> axis_anchors_; // per axis, resolution_+1 values
    std::vector<double> normalized_mass_;           // anchored-box mass / C, row-major grid
    std::vector<std::size_t> stride_;
};

DiscrepancyReport star_discrepancy_delta_cover(std::span<const double> points,
                                               const DensityModel& density, unsigned grid_m,
                                               const ProposalModel* proposal = nullptr);

struct IsotropicOptions {
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    // When nonzero, additionally sweeps every dyadic anchored box of this
    // resolution so the estimate dominates the matching uniform grid max.
    unsigned anchor_grid_m = 0;
};

// Max deviation |count/N - volume| over randomly generated convex test sets
// (anchored boxes, half-spaces, inscribed balls, simplices). Volumes are
// computed in closed form, so this is a true lower estimate of the isotropic
// discrepancy.
double isotropic_lower_estimate(std::span<const double> points, unsigned dimension,
                                const IsotropicOptions& options);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least squares of log d against log n; slope is the empirical rate exponent.
RateFit fit_rate(std::span<const double> n, std::span<const double> d);

namespace detail {
// Volume of {x in [0,1]^s : normal . x <= offset}.
double halfspace_cube_volume(std::span<const double> normal, double offset);
double ball_volume(unsigned dimension, double radius);
// vertices: dimension+1 rows of dimension coordinates each.
double simplex_volume(const std::vector<std::vector<double>>& vertices);
bool point_in_simplex(std::span<const double> x, const std::vector<std::vector<double>>& vertices);
}  // namespace detail

}  // namespace qmcar

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qmcar {

enum class Domain { unit_cube, real_space };

using DensityFn = std::function<double(std::span<const double>)>;
using ScalarFn = std::function<double(double)>;

// Unnormalized target density psi on [0,1]^dimension or R^dimension together
// with its dominating bound, total mass and anchored-box mass. box_mass
// integrates over [0, t) on the cube and over (-inf, t] on real space.
struct DensityModel {
    std::string name;
    unsigned dimension = 1;
    Domain domain = Domain::unit_cube;
    DensityFn evaluate;
    double bound_L = 1.0;   // psi <= L on the cube, psi <= L * H on real space
    double total_mass = 1.0; // C
    DensityFn box_mass;
    std::vector<double> support_lower; // finite lower corner used by quadrature oracles
    double tail_cut = 60.0;            // finite stand-in for +inf box corners in quadrature
};

// Product-form proposal H with per-coordinate marginal CDFs and inverses.
struct ProposalModel {
    std::string name;
    unsigned dimension = 1;
    DensityFn evaluate;
    std::vector<ScalarFn> marginal_inverse_cdf;    // F_j^{-1} on [0,1]
    std::vector<ScalarFn> marginal_cdf;            // F_j
    std::vector<std::vector<double>> inverse_cdf_breakpoints; // interior u breakpoints
    std::vector<double> support_upper;             // +inf marks an unbounded coordinate
    bool product_form = true;
    double total_mass = 1.0;
};

// Parameters of the pseudo-convexity covering entering the explicit
// deterministic-sampler discrepancy bound.
struct BoundParameters {
    unsigned covering_parts = 1; // p >= 1
    unsigned convex_parts = 0;   // q, with p >= q
    unsigned net_t = 0;
    double bound_L = 1.0;
    double total_mass = 1.0;

    void validate() const;
};

// Explicit bound 8 L C^-1 s b^{t/s} (2p - q) N^{-1/s} on the sampler output
// discrepancy, base b = 2.
double dar_discrepancy_bound(const BoundParameters& params, unsigned s, std::size_t n);

DensityModel example1_density();

struct Example2 {
    DensityModel density;
    ProposalModel proposal;
};
Example2 example2_density_and_proposal();

// Constant density on [0,1]^dimension; handy as a known-answer fixture.
DensityModel uniform_density(unsigned dimension);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// One stage of a sum decomposition psi = sum_l H_l. Stage l peels component
// H_l off the remaining target psi_{k-l+1} = sum_{i>=l} H_i: acceptance-
// rejection runs on accept_region (where the remaining target dips below the
// component) and plain inversion of the component runs on invert_region.
struct DecompositionStage {
    ScalarFn component;                  // H_l
    ScalarFn remaining;                  // psi_{k-l+1}
    std::vector<Interval> accept_region; // S_l
    std::vector<Interval> invert_region; // L_l
    double accept_mass = 0.0;            // integral of the remaining target over S_l
    double invert_mass = 0.0;            // integral of H_l over L_l
    double accept_bound = 1.0;           // remaining <= bound * component on S_l
    ScalarFn accept_proposal_inverse_cdf; // F^{-1} of H_l restricted to S_l
    ScalarFn accept_proposal_cdf;         // normalized CDF of H_l on S_l (bisection fallback)
    ScalarFn invert_inverse_cdf;          // F^{-1} of H_l restricted to L_l
    ScalarFn accept_target_cdf;           // normalized CDF of the remaining target on S_l
    ScalarFn invert_component_cdf;        // normalized CDF of H_l on L_l
};

struct SumDecomposition {
    std::string name;
    Interval domain{0.0, 1.0};
    ScalarFn target;         // psi
    double total_mass = 0.0; // integral of psi over the domain
    ScalarFn target_cdf;     // normalized CDF of psi
    std::vector<DecompositionStage> stages;
};

// psi(x) = sin(4x) + x^2 on [0,1] split against H1 = x^2, H2 = sin(4x):
// acceptance-rejection only on (pi/4, 1], inversion elsewhere.
SumDecomposition example3_decomposition();

// The same psi as a 1-D cube density (exact CDF, numeric sup bound).
DensityModel example3_density();

// Quadrature estimate of the box mass; an oracle for cross-checking closed
// forms, not a hot-path routine.
double numeric_box_mass(const DensityModel& model, std::span<const double> t, double tolerance);

}  // namespace qmcar

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qmcar/densities.hpp"
#include "qmcar/nets.hpp"

namespace qmcar {

enum class SamplerTag { rar, dar_cube, dar_real, drar, drar_embed };
std::string_view to_string(SamplerTag tag);

struct SampleSet {
    unsigned dimension = 1;
    Domain domain = Domain::unit_cube;
    SamplerTag tag = SamplerTag::rar;
    std::vector<double> points;   // row-major, dimension columns
    std::size_t driver_count = 0; // M: driver points consumed
    std::size_t requested_n = 0;
    unsigned resolution_m = 0;    // net resolution when net-driven, else 0

    std::size_t accepted_count() const { return dimension ? points.size() / dimension : 0; }
    std::span<const double> point(std::size_t n) const {
        return {points.data() + n * dimension, dimension};
    }
};

// Classic acceptance-rejection with a seeded pseudo-random driver. A null
// proposal means the uniform proposal on the cube with L = target.bound_L;
// otherwise draws go through the proposal marginals with psi <= L * H.
// Runs until exactly requested_n points are accepted.
SampleSet rar(const DensityModel& target, const ProposalModel* proposal, std::size_t requested_n,
              std::uint64_t seed);

// Deterministic acceptance-rejection on the cube. Picks the smallest net with
// 2^m >= ceil(N / (C/L)), accepts net points under the graph of psi/L and
// projects away the height coordinate. Reruns on the next finer net while the
// yield falls below 0.9 N.
SampleSet dar_cube(const DensityModel& target, std::size_t requested_n,
                   const DirectionNumberTable& table);
// Same acceptance pass at a fixed net resolution (no growth), for sweeps.
SampleSet dar_cube_at_resolution(const DensityModel& target, unsigned m,
                                 const DirectionNumberTable& table);

// Deterministic acceptance-rejection on real space through the inverse
// Rosenblatt transform of the proposal.
SampleSet dar_real(const DensityModel& target, const ProposalModel& proposal,
                   std::size_t requested_n, const DirectionNumberTable& table);
SampleSet dar_real_at_resolution(const DensityModel& target, const ProposalModel& proposal,
                                 unsigned m, const DirectionNumberTable& table);

// Quotas for the reduced sampler: stage l contributes ceil(N * accept_mass /
// total) acceptance-rejection points on S_l and ceil(N * invert_mass / total)
// inversion points on L_l.
struct DrarPlan {
    SumDecomposition decomposition;
    std::size_t requested_n = 0;
    std::vector<std::size_t> accept_quota; // N_{1,l}
    std::vector<std::size_t> invert_quota; // N_{2,l}

    std::size_t total_quota() const;
};

DrarPlan plan_drar(const SumDecomposition& decomposition, std::size_t requested_n);

// Provenance of each slice of a reduced sample, for per-region discrepancy.
struct DrarParts {
    struct Part {
        unsigned stage = 0;
        bool accepted_via_ar = false;
        std::size_t offset = 0;
        std::size_t count = 0;
    };
    std::vector<Part> parts;
};

// Reduced sampler on a deterministic driver: every region consumes a fresh
// prefix of the same 2-D Sobol sequence.
SampleSet drar_sample(const DrarPlan& plan, const DirectionNumberTable& table,
                      DrarParts* parts = nullptr);
// Random-driver variant (one continuous pseudo-random stream).
SampleSet drar_sample_random(const DrarPlan& plan, std::uint64_t seed, DrarParts* parts = nullptr);

}  // namespace qmcar

#include "qmcar/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmcar/errors.hpp"
#include "qmcar/rng.hpp"

namespace qmcar {

std::string_view to_string(SamplerTag tag) {
    switch (tag) {
        case SamplerTag::rar: return "RAR";
        case SamplerTag::dar_cube: return "DAR_CUBE";
        case SamplerTag::dar_real: return "DAR_REAL";
        case SamplerTag::drar: return "DRAR";
        case SamplerTag::drar_embed: return "DRAR_EMBED";
    }
    return "?";
}

namespace {

constexpr std::size_t kRunawayFactor = 1000000;

unsigned smallest_resolution_for(double required) {
    unsigned m = 0;
    while (std::ldexp(1.0, static_cast<int>(m)) < required) {
        ++m;
        if (m > 40) throw ValidationError("required net size exceeds 2^40");
    }
    return m;
}

}  // namespace

SampleSet rar(const DensityModel& target, const ProposalModel* proposal, std::size_t requested_n,
              std::uint64_t seed) {
    if (requested_n == 0) throw ValidationError("rar: requested_n must be >= 1");
    const unsigned dim = target.dimension;
    if (proposal != nullptr && proposal->dimension != dim)
        throw DimensionError("rar: proposal dimension does not match the target");
    if (proposal == nullptr && target.domain != Domain::unit_cube)
        throw ValidationError("rar: a real-space target needs a proposal");

    UniformStream stream(seed);
    SampleSet out;
    out.dimension = dim;
    out.domain = target.domain;
    out.tag = SamplerTag::rar;
    out.requested_n = requested_n;
    out.points.reserve(requested_n * dim);

    const double bound = target.bound_L;
    std::vector<double> x(dim);
    std::size_t draws = 0;
    const std::size_t cap = kRunawayFactor * requested_n;
    while (out.points.size() < requested_n * dim) {
        if (++draws > cap) throw RunawayError("rar: acceptance stalled after " +
                                              std::to_string(draws - 1) + " draws");
        double dominating;
        if (proposal == nullptr) {
            stream.fill(x);
            dominating = bound;
        } else {
            for (unsigned j = 0; j < dim; ++j)
                x[j] = proposal->marginal_inverse_cdf[j](stream.next());
            dominating = bound * proposal->evaluate(x);
        }
        const double u = stream.next();
        const double psi = target.evaluate(x);
        if (psi > dominating * (1.0 + 1e-12))
            throw PreconditionError("rar: psi exceeds the dominating bound at a sampled point");
        if (u * dominating <= psi) out.points.insert(out.points.end(), x.begin(), x.end());
    }
    out.driver_count = draws;
    return out;
}

SampleSet dar_cube_at_resolution(const DensityModel& target, unsigned m,
                                 const DirectionNumberTable& table) {
    if (target.domain != Domain::unit_cube)
        throw ValidationError("dar_cube: target must live on the unit cube");
    const unsigned dim = target.dimension;
    const unsigned s = dim + 1;
    SobolStream stream(s, table);
    const std::size_t count = std::size_t{1} << m;

    SampleSet out;
    out.dimension = dim;
    out.domain = Domain::unit_cube;
    out.tag = SamplerTag::dar_cube;
    out.resolution_m = m;
    out.driver_count = count;

    std::vector<double> u(s);
    const double bound = target.bound_L;
    for (std::size_t n = 0; n < count; ++n) {
        stream.next(u);
        const double psi = target.evaluate(std::span<const double>(u.data(), dim));
        if (psi >= bound * u[dim])
            out.points.insert(out.points.end(), u.begin(), u.begin() + dim);
    }
    return out;
}

SampleSet dar_cube(const DensityModel& target, std::size_t requested_n,
                   const DirectionNumberTable& table) {
    if (requested_n == 0) throw ValidationError("dar_cube: requested_n must be >= 1");
    if (!(target.total_mass > 0)) throw DegenerateDensityError("dar_cube: target has zero mass");
    if (!std::isfinite(target.bound_L) || !(target.bound_L > 0))
        throw ValidationError("dar_cube: bound L must be positive and finite");

    const double acceptance = target.total_mass / target.bound_L;
    unsigned m = smallest_resolution_for(
        std::ceil(static_cast<double>(requested_n) / acceptance));
    // The M formula guarantees the expected yield only asymptotically; grow
    // the net while the deterministic yield falls short.
    while (true) {
        SampleSet out = dar_cube_at_resolution(target, m, table);
        out.requested_n = requested_n;
        if (out.accepted_count() >= static_cast<std::size_t>(0.9 * static_cast<double>(requested_n)) ||
            m >= 30)
            return out;
        ++m;
    }
}

SampleSet dar_real_at_resolution(const DensityModel& target, const ProposalModel& proposal,
                                 unsigned m, const DirectionNumberTable& table) {
    if (target.domain != Domain::real_space)
        throw ValidationError("dar_real: target must live on real space");
    if (!proposal.product_form)
        throw ValidationError("dar_real: proposal must be product-form");
    const unsigned dim = target.dimension;
    if (proposal.dimension != dim)
        throw DimensionError("dar_real: proposal dimension does not match the target");

    const unsigned s = dim + 1;
    SobolStream stream(s, table);
    const std::size_t count = std::size_t{1} << m;

    SampleSet out;
    out.dimension = dim;
    out.domain = Domain::real_space;
    out.tag = SamplerTag::dar_real;
    out.resolution_m = m;
    out.driver_count = count;

    std::vector<double> u(s), z(dim);
    const double bound = target.bound_L;
    for (std::size_t n = 0; n < count; ++n) {
        stream.next(u);
        for (unsigned j = 0; j < dim; ++j) {
            // dyadic net coordinates are strictly below 1, so the marginal
            // inverses stay finite
            z[j] = proposal.marginal_inverse_cdf[j](u[j]);
        }
        const double h = proposal.evaluate(z);
        const double height = u[dim] * h; // z_s of the transform
        const double psi = target.evaluate(z);
        if (psi >= bound * height) out.points.insert(out.points.end(), z.begin(), z.end());
    }
    return out;
}

SampleSet dar_real(const DensityModel& target, const ProposalModel& proposal,
                   std::size_t requested_n, const DirectionNumberTable& table) {
    if (requested_n == 0) throw ValidationError("dar_real: requested_n must be >= 1");
    if (!(target.total_mass > 0)) throw DegenerateDensityError("dar_real: target has zero mass");
    const double required = std::ceil(static_cast<double>(requested_n) * target.bound_L *
                                      proposal.total_mass / target.total_mass);
    unsigned m = smallest_resolution_for(required);
    SampleSet out = dar_real_at_resolution(target, proposal, m, table);
    out.requested_n = requested_n;
    return out;
}

std::size_t DrarPlan::total_quota() const {
    std::size_t total = 0;
    for (std::size_t q : accept_quota) total += q;
    for (std::size_t q : invert_quota) total += q;
    return total;
}

DrarPlan plan_drar(const SumDecomposition& decomposition, std::size_t requested_n) {
    if (requested_n == 0) throw ValidationError("plan_drar: requested_n must be >= 1");
    if (!(decomposition.total_mass > 0))
        throw DegenerateDensityError("plan_drar: decomposition has zero total mass");
    DrarPlan plan;
    plan.decomposition = decomposition;
    plan.requested_n = requested_n;
    const double n = static_cast<double>(requested_n);
    for (const DecompositionStage& stage : decomposition.stages) {
        if (stage.accept_mass < -1e-12 || stage.invert_mass < -1e-12)
            throw DecompositionError("plan_drar: negative region mass in '" +
                                     decomposition.name + "'");
        plan.accept_quota.push_back(static_cast<std::size_t>(
            std::ceil(n * std::max(0.0, stage.accept_mass) / decomposition.total_mass)));
        plan.invert_quota.push_back(static_cast<std::size_t>(
            std::ceil(n * std::max(0.0, stage.invert_mass) / decomposition.total_mass)));
    }
    return plan;
}

namespace {

// Bisection fallback for a region-restricted CDF; 1e-12 on the CDF scale.
double invert_by_bisection(const ScalarFn& cdf, double lo, double hi, double u) {
    double flo = cdf(lo), fhi = cdf(hi);
    if (u <= flo) return lo;
    if (u >= fhi) return hi;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        double fmid = cdf(mid);
        if (std::abs(fmid - u) <= 1e-12) return mid;
        if (fmid < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double region_inverse(const ScalarFn& inverse_cdf, const ScalarFn& cdf,
                      const std::vector<Interval>& region, double u, const char* what) {
    if (inverse_cdf) return inverse_cdf(u);
    if (cdf && region.size() == 1)
        return invert_by_bisection(cdf, region.front().lo, region.front().hi, u);
    throw InversionError(std::string("drar_sample: no usable inverse CDF for ") + what);
}

// One uniform 2-vector per call; Sobol restarts per region, the random stream
// runs on.
struct Driver {
    SobolStream* sobol = nullptr;
    UniformStream* random = nullptr;
    std::size_t consumed = 0;

    void begin_region() {
        if (sobol) sobol->reset();
    }
    void next(std::span<double> u) {
        if (sobol)
            sobol->next(u);
        else
            random->fill(u);
        ++consumed;
    }
};

SampleSet drar_sample_impl(const DrarPlan& plan, Driver driver, DrarParts* parts) {
    const SumDecomposition& dec = plan.decomposition;
    if (dec.stages.size() != plan.accept_quota.size())
        throw ValidationError("drar_sample: plan does not match its decomposition");

    SampleSet out;
    out.dimension = 1;
    out.domain = Domain::unit_cube;
    out.tag = dec.stages.size() > 2 ? SamplerTag::drar_embed : SamplerTag::drar;
    out.requested_n = plan.requested_n;
    out.points.reserve(plan.total_quota());
    if (parts) parts->parts.clear();

    std::array<double, 2> u{};
    for (std::size_t l = 0; l < dec.stages.size(); ++l) {
        const DecompositionStage& stage = dec.stages[l];

        if (std::size_t quota = plan.accept_quota[l]; quota > 0) {
            driver.begin_region();
            std::size_t offset = out.points.size();
            std::size_t accepted = 0;
            const std::size_t cap = kRunawayFactor * quota + 1000;
            std::size_t consumed_before = driver.consumed;
            while (accepted < quota) {
                if (driver.consumed - consumed_before > cap)
                    throw RunawayError("drar_sample: acceptance stalled in stage " +
                                       std::to_string(l + 1));
                driver.next(u);
                double z = region_inverse(stage.accept_proposal_inverse_cdf,
                                          stage.accept_proposal_cdf, stage.accept_region, u[0],
                                          "an acceptance region");
                double remaining = stage.remaining(z);
                double component = stage.component(z);
                if (remaining > stage.accept_bound * component * (1.0 + 1e-9))
                    throw PreconditionError(
                        "drar_sample: remaining target exceeds its stage bound");
                if (remaining >= stage.accept_bound * component * u[1]) {
                    out.points.push_back(z);
                    ++accepted;
                }
            }
            if (parts) parts->parts.push_back({static_cast<unsigned>(l), true, offset, quota});
        }

        if (std::size_t quota = plan.invert_quota[l]; quota > 0) {
            driver.begin_region();
            std::size_t offset = out.points.size();
            for (std::size_t n = 0; n < quota; ++n) {
                driver.next(u);
                out.points.push_back(region_inverse(stage.invert_inverse_cdf,
                                                    stage.invert_component_cdf,
                                                    stage.invert_region, u[0],
                                                    "an inversion region"));
            }
            if (parts) parts->parts.push_back({static_cast<unsigned>(l), false, offset, quota});
        }
    }
    out.driver_count = driver.consumed;
    return out;
}

}  // namespace

SampleSet drar_sample(const DrarPlan& plan, const DirectionNumberTable& table, DrarParts* parts) {
    SobolStream sobol(2, table);
    Driver driver;
    driver.sobol = &sobol;
    return drar_sample_impl(plan, driver, parts);
}

SampleSet drar_sample_random(const DrarPlan& plan, std::uint64_t seed, DrarParts* parts) {
    UniformStream stream(seed);
    Driver driver;
    driver.random = &stream;
    SampleSet out = drar_sample_impl(plan, driver, parts);
    out.tag = SamplerTag::rar; // random driver: the reduced sampler's baseline
    return out;
}

}  // namespace qmcar

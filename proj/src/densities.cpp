#include "qmcar/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmcar/errors.hpp"
#include "qmcar/quadrature.hpp"

namespace qmcar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section maximum of f on [lo, hi], refined from the best point of a
// coarse scan. Deterministic.
double golden_max(const ScalarFn& f, double lo, double hi, int scan = 64) {
    double best_x = lo, best = f(lo);
    for (int i = 1; i <= scan; ++i) {
        double x = lo + (hi - lo) * i / scan;
        double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - (hi - lo) / scan);
    double b = std::min(hi, best_x + (hi - lo) / scan);
    const double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-13 * std::max(1.0, std::abs(a))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return std::max({best, fc, fd});
}

}  // namespace

void BoundParameters::validate() const {
    if (covering_parts < 1) throw ValidationError("covering must have p >= 1 parts");
    if (convex_parts > covering_parts) throw ValidationError("covering requires p >= q");
    if (!(bound_L > 0) || !(total_mass > 0))
        throw ValidationError("bound parameters need positive L and C");
}

double dar_discrepancy_bound(const BoundParameters& params, unsigned s, std::size_t n) {
    params.validate();
    if (s < 2 || n == 0) throw ValidationError("bound requires s >= 2 and n >= 1");
    const double t_term = std::pow(2.0, static_cast<double>(params.net_t) / s);
    const double parts = 2.0 * params.covering_parts - static_cast<double>(params.convex_parts);
    return 8.0 * params.bound_L / params.total_mass * s * t_term * parts *
           std::pow(static_cast<double>(n), -1.0 / s);
}

DensityModel example1_density() {
    DensityModel d;
    d.name = "example1";
    d.dimension = 4;
    d.domain = Domain::unit_cube;
    d.evaluate = [](std::span<const double> x) {
        return 0.25 * (std::exp(-x[0]) + std::exp(-x[1]) + std::exp(-x[2]) + std::exp(-x[3]));
    };
    d.bound_L = 1.0;
    d.total_mass = 1.0 - std::exp(-1.0);
    d.box_mass = [](std::span<const double> t) {
        double total = 0.0;
        for (int i = 0; i < 4; ++i) {
            double term = 1.0 - std::exp(-t[i]);
            for (int j = 0; j < 4; ++j)
                if (j != i) term *= t[j];
            total += term;
        }
        return 0.25 * total;
    };
    d.support_lower.assign(4, 0.0);
    return d;
}

namespace {

// Marginal of the example-2 proposal: h(x) = 1/2 on [0,1], 1/(2x^2) beyond.
double ex2_marginal_pdf(double x) {
    if (x < 0) return 0.0;
    return x <= 1.0 ? 0.5 : 0.5 / (x * x);
}

double ex2_marginal_cdf(double x) {
    if (x <= 0) return 0.0;
    return x <= 1.0 ? 0.5 * x : 1.0 - 0.5 / x;
}

double ex2_marginal_inverse(double u) {
    if (u <= 0.5) return 2.0 * std::max(0.0, u);
    if (u >= 1.0) return kInf;
    return 1.0 / (2.0 * (1.0 - u));
}

// Lower incomplete gamma(3/2, t) = integral of sqrt(x) e^-x over [0, t].
double lower_gamma_3_2(double t) {
    if (t <= 0) return 0.0;
    if (std::isinf(t)) return 0.5 * std::sqrt(kPi);
    double rt = std::sqrt(t);
    return 0.5 * std::sqrt(kPi) * std::erf(rt) - rt * std::exp(-t);
}

}  // namespace

Example2 example2_density_and_proposal() {
    Example2 model;

    DensityModel& d = model.density;
    d.name = "example2";
    d.dimension = 2;
    d.domain = Domain::real_space;
    d.evaluate = [](std::span<const double> x) {
        if (x[0] <= 0 || x[1] <= 0) return 0.0;
        return 4.0 / kPi * std::exp(-(x[0] + x[1])) * std::sqrt(x[0] * x[1]);
    };
    d.total_mass = 1.0; // (4/pi) Gamma(3/2)^2
    d.box_mass = [](std::span<const double> t) {
        return 4.0 / kPi * lower_gamma_3_2(t[0]) * lower_gamma_3_2(t[1]);
    };
    d.support_lower.assign(2, 0.0);

    ProposalModel& h = model.proposal;
    h.name = "example2-proposal";
    h.dimension = 2;
    h.evaluate = [](std::span<const double> x) {
        return ex2_marginal_pdf(x[0]) * ex2_marginal_pdf(x[1]);
    };
    h.marginal_inverse_cdf = {ex2_marginal_inverse, ex2_marginal_inverse};
    h.marginal_cdf = {ex2_marginal_cdf, ex2_marginal_cdf};
    h.inverse_cdf_breakpoints = {{0.5}, {0.5}};
    h.support_upper = {kInf, kInf};
    h.product_form = true;
    h.total_mass = 1.0;

    // The paper asserts a finite L = sup psi/H exists but never states it.
    // The ratio factorizes per coordinate, so maximize the factor numerically
    // on each piece and inflate by 1% to absorb optimizer error.
    auto ratio_factor = [](double x) {
        if (x <= 0) return 0.0;
        double g = std::exp(-x) * std::sqrt(x);
        return x <= 1.0 ? g : g * x * x;
    };
    double factor_max = std::max(golden_max(ratio_factor, 0.0, 1.0),
                                 golden_max(ratio_factor, 1.0, 12.0));
    d.bound_L = 16.0 / kPi * factor_max * factor_max * 1.01;

    return model;
}

DensityModel uniform_density(unsigned dimension) {
    DensityModel d;
    d.name = "uniform";
    d.dimension = dimension;
    d.domain = Domain::unit_cube;
    d.evaluate = [](std::span<const double>) { return 1.0; };
    d.bound_L = 1.0;
    d.total_mass = 1.0;
    d.box_mass = [](std::span<const double> t) {
        double v = 1.0;
        for (double tj : t) v *= std::clamp(tj, 0.0, 1.0);
        return v;
    };
    d.support_lower.assign(dimension, 0.0);
    return d;
}

SumDecomposition example3_decomposition() {
    const double a = kPi / 4.0;  // boundary: sin(4x) changes sign here
    const double a3 = a * a * a;
    const double total = (1.0 - std::cos(4.0)) / 4.0 + 1.0 / 3.0;
    const double psi_mass_below = 0.5 + a3 / 3.0; // integral of psi over [0, a]

    auto psi = [](double x) { return std::sin(4.0 * x) + x * x; };
    auto psi_cum = [](double x) { return (1.0 - std::cos(4.0 * x)) / 4.0 + x * x * x / 3.0; };

    SumDecomposition dec;
    dec.name = "example3";
    dec.domain = {0.0, 1.0};
    dec.target = psi;
    dec.total_mass = total;
    dec.target_cdf = [psi_cum, total](double x) {
        if (x <= 0) return 0.0;
        if (x >= 1) return 1.0;
        return psi_cum(x) / total;
    };

    DecompositionStage s1;
    s1.component = [](double x) { return x * x; };
    s1.remaining = psi;
    s1.accept_region = {{a, 1.0}};
    s1.invert_region = {{0.0, a}};
    s1.accept_mass = total - psi_mass_below;
    s1.invert_mass = a3 / 3.0;
    s1.accept_bound = 1.0; // sin(4x) < 0 on (pi/4, 1], so psi < x^2 there
    s1.accept_proposal_inverse_cdf = [a3](double u) {
        return std::cbrt(a3 + u * (1.0 - a3));
    };
    s1.accept_proposal_cdf = [a, a3](double x) {
        if (x <= a) return 0.0;
        if (x >= 1) return 1.0;
        return (x * x * x - a3) / (1.0 - a3);
    };
    s1.invert_inverse_cdf = [a](double u) { return a * std::cbrt(std::clamp(u, 0.0, 1.0)); };
    s1.accept_target_cdf = [psi_cum, psi_mass_below, total, a](double x) {
        if (x <= a) return 0.0;
        if (x >= 1) return 1.0;
        return (psi_cum(x) - psi_mass_below) / (total - psi_mass_below);
    };
    s1.invert_component_cdf = [a, a3](double x) {
        if (x <= 0) return 0.0;
        if (x >= a) return 1.0;
        return x * x * x / a3;
    };
    dec.stages.push_back(std::move(s1));

    DecompositionStage s2;
    s2.component = [](double x) { return std::sin(4.0 * x); };
    s2.remaining = s2.component;
    s2.accept_region = {};            // sin(4x) never dips below itself
    s2.invert_region = {{0.0, a}};    // remaining mass after stage 1 lives on [0, pi/4]
    s2.accept_mass = 0.0;
    s2.invert_mass = 0.5; // integral of sin(4x) over [0, pi/4]
    s2.invert_inverse_cdf = [](double u) {
        return std::acos(1.0 - 2.0 * std::clamp(u, 0.0, 1.0)) / 4.0;
    };
    s2.invert_component_cdf = [a](double x) {
        if (x <= 0) return 0.0;
        if (x >= a) return 1.0;
        return (1.0 - std::cos(4.0 * x)) / 2.0;
    };
    dec.stages.push_back(std::move(s2));

    return dec;
}

DensityModel example3_density() {
    DensityModel d;
    d.name = "example3";
    d.dimension = 1;
    d.domain = Domain::unit_cube;
    d.evaluate = [](std::span<const double> x) { return std::sin(4.0 * x[0]) + x[0] * x[0]; };
    d.total_mass = (1.0 - std::cos(4.0)) / 4.0 + 1.0 / 3.0;
    d.box_mass = [](std::span<const double> t) {
        double x = std::clamp(t[0], 0.0, 1.0);
        return (1.0 - std::cos(4.0 * x)) / 4.0 + x * x * x / 3.0;
    };
    d.bound_L = golden_max([](double x) { return std::sin(4.0 * x) + x * x; }, 0.0, 1.0) * 1.01;
    d.support_lower.assign(1, 0.0);
    return d;
}

double numeric_box_mass(const DensityModel& model, std::span<const double> t, double tolerance) {
    if (t.size() != model.dimension)
        throw DimensionError("numeric_box_mass: corner dimension mismatch");
    if (!(tolerance > 0)) throw ValidationError("numeric_box_mass: tolerance must be positive");
    std::vector<double> lo(model.dimension, 0.0);
    if (!model.support_lower.empty()) lo = model.support_lower;
    std::vector<double> hi(t.begin(), t.end());
    for (unsigned j = 0; j < model.dimension; ++j) {
        if (model.domain == Domain::unit_cube) hi[j] = std::min(hi[j], 1.0);
        if (std::isinf(hi[j])) hi[j] = lo[j] + model.tail_cut;
        if (hi[j] <= lo[j]) return 0.0;
    }
    return integrate_box(model.evaluate, lo, hi, tolerance);
}

}  // namespace qmcar

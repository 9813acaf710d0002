#include "qmcar/transforms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qmcar/errors.hpp"

namespace qmcar {

TransformContext::TransformContext(ProposalModel p) : proposal(std::move(p)) {
    if (!proposal.product_form)
        throw ValidationError("transform requires a product-form proposal");
    if (proposal.marginal_inverse_cdf.size() != proposal.dimension ||
        proposal.marginal_cdf.size() != proposal.dimension)
        throw ValidationError("proposal is missing marginal CDFs");
    s = proposal.dimension + 1;
}

std::vector<double> transform_forward(const TransformContext& ctx, std::span<const double> u) {
    if (u.size() != ctx.s) throw DimensionError("transform_forward: point dimension mismatch");
    const unsigned d = ctx.proposal.dimension;
    std::vector<double> z(ctx.s);
    for (unsigned j = 0; j < d; ++j) {
        if (u[j] < 0.0 || u[j] > 1.0)
            throw DomainError("transform_forward: u outside the unit cube");
        if (u[j] == 1.0) {
            double upper = ctx.proposal.support_upper.empty()
                               ? std::numeric_limits<double>::infinity()
                               : ctx.proposal.support_upper[j];
            if (std::isinf(upper))
                throw UnboundedImageError("transform_forward: u_" + std::to_string(j + 1) +
                                          " = 1 maps to +inf");
        }
        z[j] = ctx.proposal.marginal_inverse_cdf[j](u[j]);
    }
    z[d] = u[d] * ctx.proposal.evaluate(std::span<const double>(z.data(), d));
    return z;
}

std::vector<double> transform_inverse(const TransformContext& ctx, std::span<const double> z) {
    if (z.size() != ctx.s) throw DimensionError("transform_inverse: point dimension mismatch");
    const unsigned d = ctx.proposal.dimension;
    const double h = ctx.proposal.evaluate(z.subspan(0, d));
    if (!(h > 0)) throw DomainError("transform_inverse: point outside the proposal support");
    if (z[d] < 0.0 || z[d] > h)
        throw DomainError("transform_inverse: height coordinate outside [0, H(z)]");
    std::vector<double> u(ctx.s);
    for (unsigned j = 0; j < d; ++j) u[j] = ctx.proposal.marginal_cdf[j](z[j]);
    u[d] = z[d] / h;
    return u;
}

double jacobian_determinant_check(const TransformContext& ctx, std::span<const double> u,
                                  double step) {
    const unsigned s = ctx.s;
    if (u.size() != s) throw DimensionError("jacobian check: point dimension mismatch");
    if (!(step > 0)) throw ValidationError("jacobian check: step must be positive");
    for (unsigned j = 0; j < s; ++j)
        if (u[j] - step <= 0.0 || u[j] + step >= 1.0)
            throw DomainError("jacobian check: point too close to the cube boundary");
    for (unsigned j = 0; j < ctx.proposal.dimension; ++j) {
        if (j >= ctx.proposal.inverse_cdf_breakpoints.size()) break;
        for (double b : ctx.proposal.inverse_cdf_breakpoints[j])
            if (u[j] - step < b && b < u[j] + step)
                throw BreakpointError("jacobian check: stencil straddles a breakpoint at u_" +
                                      std::to_string(j + 1) + " = " + std::to_string(b));
    }

    std::vector<double> jac(static_cast<std::size_t>(s) * s);
    std::vector<double> probe(u.begin(), u.end());
    for (unsigned col = 0; col < s; ++col) {
        probe[col] = u[col] + step;
        std::vector<double> zp = transform_forward(ctx, probe);
        probe[col] = u[col] - step;
        std::vector<double> zm = transform_forward(ctx, probe);
        probe[col] = u[col];
        for (unsigned row = 0; row < s; ++row)
            jac[row * s + col] = (zp[row] - zm[row]) / (2.0 * step);
    }

    // LU with partial pivoting on the small s x s matrix.
    double det = 1.0;
    for (unsigned k = 0; k < s; ++k) {
        unsigned pivot = k;
        for (unsigned r = k + 1; r < s; ++r)
            if (std::abs(jac[r * s + k]) > std::abs(jac[pivot * s + k])) pivot = r;
        if (pivot != k) {
            for (unsigned c = 0; c < s; ++c) std::swap(jac[k * s + c], jac[pivot * s + c]);
            det = -det;
        }
        double diag = jac[k * s + k];
        if (diag == 0.0) return 0.0;
        det *= diag;
        for (unsigned r = k + 1; r < s; ++r) {
            double f = jac[r * s + k] / diag;
            for (unsigned c = k; c < s; ++c) jac[r * s + c] -= f * jac[k * s + c];
        }
    }
    return std::abs(det);
}

}  // namespace qmcar

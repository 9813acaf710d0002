#pragma once

#include <span>
#include <vector>

#include "qmcar/densities.hpp"

namespace qmcar {

// Inverse Rosenblatt transform associated with a product-form proposal:
// z_j = F_j^{-1}(u_j) for j < s, z_s = u_s * H(z_1..z_{s-1}). Maps the unit
// cube onto the region under the graph of H, preserving volume.
struct TransformContext {
    ProposalModel proposal;
    unsigned s = 2; // proposal.dimension + 1

    explicit TransformContext(ProposalModel p);
};

std::vector<double> transform_forward(const TransformContext& ctx, std::span<const double> u);
std::vector<double> transform_inverse(const TransformContext& ctx, std::span<const double> z);

// Central-difference estimate of |det J_T(u)|; equals 1 for product proposals.
// Throws BreakpointError when the stencil straddles an inverse-CDF breakpoint.
double jacobian_determinant_check(const TransformContext& ctx, std::span<const double> u,
                                  double step);

}  // namespace qmcar

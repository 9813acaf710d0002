#include "qmcar/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmcar/errors.hpp"
#include "qmcar/rng.hpp"

namespace qmcar {

double star_discrepancy_1d_weighted(std::span<const double> points, const ScalarFn& cdf,
                                    double normalizer) {
    if (points.empty()) throw ValidationError("star discrepancy of an empty point set");
    if (!(normalizer > 0)) throw ValidationError("normalizer must be positive");
    std::vector<double> x(points.begin(), points.end());
    std::sort(x.begin(), x.end());
    const std::size_t k = x.size();
    double dmax = std::abs(static_cast<double>(k) / normalizer - 1.0); // t at the domain sup
    for (std::size_t i = 0; i < k; ++i) {
        double f = cdf(x[i]);
        dmax = std::max(dmax, f - static_cast<double>(i) / normalizer);
        dmax = std::max(dmax, static_cast<double>(i + 1) / normalizer - f);
    }
    return dmax;
}

double star_discrepancy_1d_exact(std::span<const double> points, const ScalarFn& cdf) {
    return star_discrepancy_1d_weighted(points, cdf, static_cast<double>(points.size()));
}

DeltaCoverGrid::DeltaCoverGrid(const DensityModel& density, unsigned grid_m,
                               const ProposalModel* proposal, std::size_t cell_budget)
    : dimension_(density.dimension),
      grid_m_(grid_m),
      resolution_(std::size_t{1} << grid_m),
      domain_(density.domain) {
    if (!density.box_mass) throw ValidationError("delta cover requires a box-mass function");
    if (domain_ == Domain::real_space) {
        if (proposal == nullptr)
            throw ValidationError("real-space delta cover needs the proposal marginals");
        if (proposal->dimension != dimension_)
            throw DimensionError("proposal dimension does not match the density");
    }

    double cells = 1.0;
    for (unsigned j = 0; j < dimension_; ++j) cells *= static_cast<double>(resolution_ + 1);
    if (cells > static_cast<double>(cell_budget))
        throw BudgetError("delta-cover grid of " + std::to_string(cells) +
                          " cells exceeds the budget; use a smaller grid m");
    const std::size_t total = static_cast<std::size_t>(cells);

    axis_anchors_.resize(dimension_);
    for (unsigned j = 0; j < dimension_; ++j) {
        auto& anchors = axis_anchors_[j];
        anchors.resize(resolution_ + 1);
        for (std::size_t a = 0; a <= resolution_; ++a) {
            double u = std::ldexp(static_cast<double>(a), -static_cast<int>(grid_m_));
            anchors[a] = domain_ == Domain::unit_cube ? u : proposal->marginal_inverse_cdf[j](u);
        }
    }

    stride_.assign(dimension_, 1);
    for (unsigned j = dimension_; j-- > 1;) stride_[j - 1] = stride_[j] * (resolution_ + 1);

    normalized_mass_.resize(total);
    std::vector<std::size_t> idx(dimension_, 0);
    std::vector<double> t(dimension_);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (unsigned j = 0; j < dimension_; ++j) t[j] = axis_anchors_[j][idx[j]];
        normalized_mass_[flat] = density.box_mass(t) / density.total_mass;
        for (unsigned j = dimension_; j-- > 0;) {
            if (++idx[j] <= resolution_) break;
            idx[j] = 0;
        }
    }

    // Exact delta: the largest mass gap between an anchor box and its
    // all-coordinates successor bounds the cover's bracketing error.
    std::size_t diag = 0;
    for (unsigned j = 0; j < dimension_; ++j) diag += stride_[j];
    std::fill(idx.begin(), idx.end(), 0);
    std::size_t flat = 0;
    delta_ = 0.0;
    while (true) {
        bool interior = true;
        for (unsigned j = 0; j < dimension_; ++j)
            if (idx[j] >= resolution_) {
                interior = false;
                break;
            }
        if (interior)
            delta_ = std::max(delta_, normalized_mass_[flat + diag] - normalized_mass_[flat]);
        unsigned j = dimension_;
        for (; j-- > 0;) {
            ++idx[j];
            flat += stride_[j];
            if (idx[j] <= resolution_) break;
            flat -= stride_[j] * idx[j];
            idx[j] = 0;
        }
        if (j == static_cast<unsigned>(-1)) break;
    }
}

DiscrepancyReport DeltaCoverGrid::evaluate(std::span<const double> points) const {
    if (points.size() % dimension_ != 0)
        throw DimensionError("delta cover: point data is not a multiple of the dimension");
    const std::size_t n = points.size() / dimension_;
    if (n == 0) throw ValidationError("delta cover of an empty point set");

    std::vector<std::uint32_t> counts(normalized_mass_.size(), 0);
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t flat = 0;
        for (unsigned j = 0; j < dimension_; ++j) {
            double x = points[p * dimension_ + j];
            std::size_t cell;
            if (domain_ == Domain::unit_cube) {
                // counted in [0, t) iff t strictly exceeds x
                double scaled = std::ldexp(x, static_cast<int>(grid_m_));
                cell = std::min<std::size_t>(
                    static_cast<std::size_t>(std::max(0.0, std::floor(scaled))) + 1, resolution_ + 0);
                if (x < 0) cell = 0;
                cell = std::min(cell, resolution_);
            } else {
                const auto& anchors = axis_anchors_[j];
                cell = static_cast<std::size_t>(
                    std::lower_bound(anchors.begin(), anchors.end(), x) - anchors.begin());
                cell = std::min(cell, resolution_);
            }
            flat += cell * stride_[j];
        }
        ++counts[flat];
    }

    // In-place inclusive prefix sums turn the cell histogram into anchored-box
    // counts: one pass per axis.
    for (unsigned j = 0; j < dimension_; ++j) {
        const std::size_t stride = stride_[j];
        const std::size_t extent = resolution_ + 1;
        const std::size_t block = stride * extent;
        for (std::size_t base = 0; base < counts.size(); base += block)
            for (std::size_t inner = 0; inner < stride; ++inner)
                for (std::size_t a = 1; a < extent; ++a)
                    counts[base + inner + a * stride] += counts[base + inner + (a - 1) * stride];
    }

    double grid_max = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t flat = 0; flat < counts.size(); ++flat) {
        double local = std::abs(static_cast<double>(counts[flat]) * inv_n - normalized_mass_[flat]);
        grid_max = std::max(grid_max, local);
    }

    DiscrepancyReport report;
    report.grid_max = grid_max;
    report.delta = delta_;
    report.sample_count = n;
    report.grid_m = grid_m_;
    return report;
}

DiscrepancyReport star_discrepancy_delta_cover(std::span<const double> points,
                                               const DensityModel& density, unsigned grid_m,
                                               const ProposalModel* proposal) {
    DeltaCoverGrid grid(density, grid_m, proposal);
    return grid.evaluate(points);
}

namespace detail {

double halfspace_cube_volume(std::span<const double> normal, double offset) {
    // Flip negative axes (x -> 1-x) so all coefficients are nonnegative, then
    // drop near-zero ones; the volume factorizes over dropped axes.
    std::vector<double> a;
    double b = offset;
    a.reserve(normal.size());
    for (double c : normal) {
        if (std::abs(c) < 1e-12) continue;
        if (c < 0) {
            b -= c;
            a.push_back(-c);
        } else {
            a.push_back(c);
        }
    }
    const unsigned k = static_cast<unsigned>(a.size());
    if (k == 0) return b >= 0 ? 1.0 : 0.0;
    double factorial = 1.0, coeff_prod = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        factorial *= static_cast<double>(i + 1);
        coeff_prod *= a[i];
    }
    double sum = 0.0;
    for (std::uint32_t v = 0; v < (1u << k); ++v) {
        double shifted = b;
        int bits = 0;
        for (unsigned i = 0; i < k; ++i)
            if ((v >> i) & 1u) {
                shifted -= a[i];
                ++bits;
            }
        if (shifted <= 0) continue;
        double term = std::pow(shifted, static_cast<double>(k));
        sum += (bits % 2 == 0) ? term : -term;
    }
    double vol = sum / (factorial * coeff_prod);
    return std::clamp(vol, 0.0, 1.0);
}

double ball_volume(unsigned dimension, double radius) {
    double s = static_cast<double>(dimension);
    return std::pow(std::numbers::pi, s / 2.0) / std::tgamma(s / 2.0 + 1.0) *
           std::pow(radius, s);
}

namespace {

// Solves the barycentric system for x against the simplex edge matrix; also
// used for the volume determinant.
bool barycentric(std::span<const double> x, const std::vector<std::vector<double>>& verts,
                 std::vector<double>& lambda, double* det_out) {
    const unsigned s = static_cast<unsigned>(x.size());
    std::vector<double> mat(static_cast<std::size_t>(s) * s);
    std::vector<double> rhs(s);
    for (unsigned r = 0; r < s; ++r) {
        rhs[r] = x[r] - verts[0][r];
        for (unsigned c = 0; c < s; ++c) mat[r * s + c] = verts[c + 1][r] - verts[0][r];
    }
    double det = 1.0;
    std::vector<unsigned> perm(s);
    for (unsigned i = 0; i < s; ++i) perm[i] = i;
    for (unsigned k = 0; k < s; ++k) {
        unsigned pivot = k;
        for (unsigned r = k + 1; r < s; ++r)
            if (std::abs(mat[r * s + k]) > std::abs(mat[pivot * s + k])) pivot = r;
        if (pivot != k) {
            for (unsigned c = 0; c < s; ++c) std::swap(mat[k * s + c], mat[pivot * s + c]);
            std::swap(rhs[k], rhs[pivot]);
            det = -det;
        }
        double diag = mat[k * s + k];
        if (diag == 0.0) {
            if (det_out) *det_out = 0.0;
            return false;
        }
        det *= diag;
        for (unsigned r = k + 1; r < s; ++r) {
            double f = mat[r * s + k] / diag;
            rhs[r] -= f * rhs[k];
            for (unsigned c = k; c < s; ++c) mat[r * s + c] -= f * mat[k * s + c];
        }
    }
    if (det_out) *det_out = det;
    lambda.assign(s, 0.0);
    for (unsigned k = s; k-- > 0;) {
        double v = rhs[k];
        for (unsigned c = k + 1; c < s; ++c) v -= mat[k * s + c] * lambda[c];
        lambda[k] = v / mat[k * s + k];
    }
    return true;
}

}  // namespace

double simplex_volume(const std::vector<std::vector<double>>& vertices) {
    const unsigned s = static_cast<unsigned>(vertices.size() - 1);
    std::vector<double> origin(s, 0.0);
    std::vector<double> lambda;
    double det = 0.0;
    double factorial = 1.0;
    for (unsigned i = 2; i <= s; ++i) factorial *= static_cast<double>(i);
    barycentric(origin, vertices, lambda, &det);
    return std::abs(det) / factorial;
}

bool point_in_simplex(std::span<const double> x, const std::vector<std::vector<double>>& vertices) {
    std::vector<double> lambda;
    if (!barycentric(x, vertices, lambda, nullptr)) return false;
    double sum = 0.0;
    for (double l : lambda) {
        if (l < 0.0) return false;
        sum += l;
    }
    return sum <= 1.0;
}

}  // namespace detail

double isotropic_lower_estimate(std::span<const double> points, unsigned dimension,
                                const IsotropicOptions& options) {
    if (dimension == 0 || points.size() % dimension != 0)
        throw DimensionError("isotropic estimate: bad point data");
    const std::size_t n = points.size() / dimension;
    if (n == 0) throw ValidationError("isotropic estimate of an empty point set");
    if (options.trials < 1) throw ValidationError("isotropic estimate needs >= 1 trial");

    UniformStream rng(options.seed);
    const double inv_n = 1.0 / static_cast<double>(n);
    double best = 0.0;

    auto point = [&](std::size_t p) {
        return std::span<const double>(points.data() + p * dimension, dimension);
    };
    auto consider = [&](double count, double volume) {
        best = std::max(best, std::abs(count * inv_n - volume));
    };

    std::vector<double> direction(dimension), anchor(dimension), center(dimension);
    std::vector<std::vector<double>> verts(dimension + 1, std::vector<double>(dimension));

    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        switch (trial % 4) {
            case 0: { // anchored box [0, t)
                for (double& t : anchor) t = rng.next();
                double vol = 1.0;
                for (double t : anchor) vol *= t;
                std::size_t count = 0;
                for (std::size_t p = 0; p < n; ++p) {
                    auto x = point(p);
                    bool inside = true;
                    for (unsigned j = 0; j < dimension; ++j)
                        if (!(x[j] < anchor[j])) {
                            inside = false;
                            break;
                        }
                    count += inside;
                }
                consider(static_cast<double>(count), vol);
                break;
            }
            case 1: { // half-space
                // Reject directions with a tiny component: the closed-form
                // volume loses digits when a coefficient underflows.
                bool ok = false;
                for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
                    double norm = 0.0;
                    for (double& c : direction) {
                        c = rng.normal();
                        norm += c * c;
                    }
                    norm = std::sqrt(norm);
                    if (norm < 1e-9) continue;
                    ok = true;
                    for (double& c : direction) {
                        c /= norm;
                        if (std::abs(c) < 0.05) ok = false;
                    }
                }
                if (!ok) break;
                double offset = 0.0;
                for (double c : direction) offset += c * rng.next();
                double vol = detail::halfspace_cube_volume(direction, offset);
                std::size_t count = 0;
                for (std::size_t p = 0; p < n; ++p) {
                    auto x = point(p);
                    double dot = 0.0;
                    for (unsigned j = 0; j < dimension; ++j) dot += direction[j] * x[j];
                    count += dot <= offset;
                }
                consider(static_cast<double>(count), vol);
                break;
            }
            case 2: { // ball fully inside the cube
                double radius = 0.05 + 0.4 * rng.next();
                for (double& c : center) c = radius + (1.0 - 2.0 * radius) * rng.next();
                double vol = detail::ball_volume(dimension, radius);
                double r2 = radius * radius;
                std::size_t count = 0;
                for (std::size_t p = 0; p < n; ++p) {
                    auto x = point(p);
                    double d2 = 0.0;
                    for (unsigned j = 0; j < dimension; ++j) {
                        double diff = x[j] - center[j];
                        d2 += diff * diff;
                    }
                    count += d2 <= r2;
                }
                consider(static_cast<double>(count), vol);
                break;
            }
            case 3: { // simplex with vertices inside the cube
                for (auto& v : verts)
                    for (double& c : v) c = rng.next();
                double vol = detail::simplex_volume(verts);
                if (vol < 1e-12) break;
                std::size_t count = 0;
                for (std::size_t p = 0; p < n; ++p)
                    count += detail::point_in_simplex(point(p), verts);
                consider(static_cast<double>(count), vol);
                break;
            }
        }
    }

    if (options.anchor_grid_m > 0) {
        const std::size_t res = std::size_t{1} << options.anchor_grid_m;
        std::vector<std::size_t> idx(dimension, 0);
        while (true) {
            double vol = 1.0;
            for (unsigned j = 0; j < dimension; ++j)
                vol *= std::ldexp(static_cast<double>(idx[j]), -static_cast<int>(options.anchor_grid_m));
            std::size_t count = 0;
            for (std::size_t p = 0; p < n; ++p) {
                auto x = point(p);
                bool inside = true;
                for (unsigned j = 0; j < dimension; ++j) {
                    double t = std::ldexp(static_cast<double>(idx[j]),
                                          -static_cast<int>(options.anchor_grid_m));
                    if (!(x[j] < t)) {
                        inside = false;
                        break;
                    }
                }
                count += inside;
            }
            consider(static_cast<double>(count), vol);
            unsigned j = dimension;
            for (; j-- > 0;) {
                if (++idx[j] <= res) break;
                idx[j] = 0;
            }
            if (j == static_cast<unsigned>(-1)) break;
        }
    }

    return best;
}

RateFit fit_rate(std::span<const double> n, std::span<const double> d) {
    if (n.size() != d.size()) throw DimensionError("fit_rate: size mismatch");
    if (n.size() < 3) throw ValidationError("fit_rate needs at least 3 pairs");
    const std::size_t count = n.size();
    std::vector<double> lx(count), ly(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!(n[i] > 0) || !(d[i] > 0))
            throw ValidationError("fit_rate requires positive values");
        lx[i] = std::log(n[i]);
        ly[i] = std::log(d[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < count; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(count);
    my /= static_cast<double>(count);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < count; ++i) {
        double dx = lx[i] - mx, dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ValidationError("fit_rate: all sample sizes are equal");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = syy - fit.slope * sxy;
    fit.r_squared = syy == 0.0 ? 1.0 : std::max(0.0, 1.0 - ss_res / syy);
    return fit;
}

}  // namespace qmcar

#include "qmcar/quadrature.hpp"

#include <cmath>
#include <vector>

#include "qmcar/errors.hpp"

namespace qmcar {

namespace {

// (G7, K15) node/weight pairs on [-1, 1]; Gauss weight is zero on the
// Kronrod-only nodes.
constexpr double kNodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.000000000000000, 0.204432940075298},
    {0.586087235467691, 0.000000000000000, 0.169004726639267},
    {0.864864423359769, 0.000000000000000, 0.104790010322250},
    {0.991455371120813, 0.000000000000000, 0.022935322010529},
};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double y0 = f(mid);
    double g7 = kNodes[0][1] * y0;
    double k15 = kNodes[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = half * kNodes[i][0];
        double y = f(mid + dx) + f(mid - dx);
        g7 += kNodes[i][1] * y;
        k15 += kNodes[i][2] * y;
    }
    g7 *= half;
    k15 *= half;
    return {k15, std::abs(k15 - g7)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double abs_tol, std::size_t max_panels) {
    if (!(hi > lo)) return 0.0;
    if (!(abs_tol > 0)) throw ValidationError("integrate_adaptive: tolerance must be positive");
    struct Panel {
        double a, b, tol;
    };
    std::vector<Panel> stack{{lo, hi, abs_tol}};
    double sum = 0.0;
    std::size_t panels = 0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        if (++panels > max_panels)
            throw AccuracyError("integrate_adaptive: panel budget exhausted", sum);
        PanelResult r = gk15(f, p.a, p.b);
        if (r.error <= p.tol || (p.b - p.a) < 1e-14 * (hi - lo)) {
            sum += r.value;
            continue;
        }
        double mid = 0.5 * (p.a + p.b);
        stack.push_back({p.a, mid, 0.5 * p.tol});
        stack.push_back({mid, p.b, 0.5 * p.tol});
    }
    return sum;
}

namespace {

double integrate_box_axis(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> lo, std::span<const double> hi,
                          std::vector<double>& point, unsigned axis, double abs_tol) {
    const unsigned dim = static_cast<unsigned>(lo.size());
    if (axis + 1 == dim) {
        return integrate_adaptive(
            [&](double x) {
                point[axis] = x;
                return f(point);
            },
            lo[axis], hi[axis], abs_tol);
    }
    const double width = hi[axis] - lo[axis];
    const double inner_tol = abs_tol / (4.0 * std::max(1.0, width));
    return integrate_adaptive(
        [&](double x) {
            point[axis] = x;
            return integrate_box_axis(f, lo, hi, point, axis + 1, inner_tol);
        },
        lo[axis], hi[axis], 0.5 * abs_tol);
}

}  // namespace

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi, double abs_tol) {
    if (lo.size() != hi.size() || lo.empty())
        throw DimensionError("integrate_box: corner dimensions disagree");
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (hi[j] <= lo[j]) return 0.0;
    std::vector<double> point(lo.size(), 0.0);
    return integrate_box_axis(f, lo, hi, point, 0, abs_tol);
}

}  // namespace qmcar

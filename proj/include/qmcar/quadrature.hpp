#pragma once

#include <functional>
#include <span>

namespace qmcar {

// Adaptive Gauss-Kronrod (G7,K15) integration to an absolute tolerance.
// Throws AccuracyError carrying the best estimate if the panel budget runs out.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double abs_tol, std::size_t max_panels = 20000);

// Iterated adaptive integration of f over the axis-aligned box [lo, hi].
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi, double abs_tol);

}  // namespace qmcar

#pragma once

#include <atomic>
#include <functional>
#include <vector>

#include "devur/error.hpp"

namespace devur {

struct QuadOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-13;
    int max_intervals = 4000;
    const std::atomic<bool>* cancel = nullptr; // cooperative cancellation
};

struct QuadResult {
    double value = 0;
    double abs_error = 0;
    long evaluations = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) on a finite interval. `breakpoints` seeds
/// interval splits at known kinks or singular points inside [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opts = {},
                              const std::vector<double>& breakpoints = {});

/// Single G7/K15 panel; returns the K15 value and |K15 - G7| as error estimate.
void gauss_kronrod_15(const std::function<double(double)>& f, double a, double b,
                      double& value, double& error);

} // namespace devur

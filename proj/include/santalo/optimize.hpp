#pragma once

#include "santalo/linalg.hpp"

#include <functional>

namespace santalo {

struct MinimizeResult {
    Vec x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Nelder-Mead simplex search. Stops when the simplex value spread falls
/// below ftol (absolute) and its diameter below xtol, or after max_evals.
MinimizeResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const Vec& step,
                           double ftol = 1e-12, double xtol = 1e-10, int max_evals = 20000);

}  // namespace santalo

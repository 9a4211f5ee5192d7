#pragma once

#include <functional>
#include <string>

namespace qri {

struct QuadratureConfig {
    std::string method = "adaptive-g7k15";
    double abs_tol = 1e-8;
    int max_subdivisions = 2000;
};

// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b]. Bisects any
// panel whose local error estimate exceeds its share of abs_tol; throws
// QuadratureNonConvergence when the subdivision budget runs out. Nodes are
// strictly interior, so bounded integrands with awkward endpoints are fine.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

}  // namespace qri

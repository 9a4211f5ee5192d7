#include "qri/quadrature.hpp"

#include <cmath>
#include <vector>

#include "qri/error.hpp"

namespace qri {

namespace {

// Kronrod-15 abscissae on [0,1] with Gauss-7 and Kronrod-15 weights; odd rows
// carry zero Gauss weight.
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

struct Panel {
    double a, b;
};

double g7k15(const std::function<double(double)>& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kNodes[0][1] * f0;
    double k15 = kNodes[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kNodes[i][1] * fi;
        k15 += kNodes[i][2] * fi;
    }
    g7 *= half;
    k15 *= half;
    const double diff = 200.0 * std::fabs(g7 - k15);
    err = diff * std::sqrt(diff);
    return k15;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
    if (a == b) return 0.0;
    const double span = std::fabs(b - a);
    std::vector<Panel> stack{{a, b}};
    double total = 0.0;
    int used = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        double err = 0.0;
        const double s = g7k15(f, p.a, p.b, err);
        if (err <= cfg.abs_tol * (std::fabs(p.b - p.a) / span) || err <= 1e-16 * std::fabs(s)) {
            total += s;
            continue;
        }
        if (++used > cfg.max_subdivisions) {
            throw Error("QuadratureNonConvergence",
                        "subdivision budget exhausted near [" + std::to_string(p.a) + ", " +
                            std::to_string(p.b) + "]");
        }
        const double mid = 0.5 * (p.a + p.b);
        stack.push_back({p.a, mid});
        stack.push_back({mid, p.b});
    }
    return total;
}

}  // namespace qri

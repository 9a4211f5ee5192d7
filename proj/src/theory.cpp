#include "qri/theory.hpp"

#include <cmath>
#include <string>

#include "qri/error.hpp"

namespace qri {

double true_r(const DistributionSpec& d, double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error("ProbabilityOutOfRange", "R(p) needs p in (0,1], got " + std::to_string(p));
    }
    const double denom = quantile(d, 1.0 - p / 2.0);
    if (!(denom > 0.0)) {
        throw Error("ZeroDenominator", "Q(1 - p/2) = 0 at p = " + std::to_string(p));
    }
    return quantile(d, p / 2.0) / denom;
}

double true_i(const DistributionSpec& d, const QuadratureConfig& cfg) {
    return integrate([&](double p) { return 1.0 - true_r(d, p); }, 0.0, 1.0, cfg);
}

std::vector<double> true_ik(const DistributionSpec& d, const SymmetricPartition& partition,
                            const QuadratureConfig& cfg) {
    std::vector<double> out;
    out.reserve(partition.members());
    for (std::size_t k = 0; k < partition.members(); ++k) {
        const double ru = integrate([&](double u) { return true_r(d, u); },
                                    2.0 * partition.lower(k), 2.0 * partition.upper(k), cfg);
        out.push_back(1.0 - ru / partition.weights[k]);
    }
    return out;
}

std::pair<double, double> equi_limit_check(const DistributionSpec& d, std::size_t k_members,
                                           double p, const QuadratureConfig& cfg) {
    if (k_members == 0) throw Error("ZeroK", "equi-partition needs K >= 1");
    if (!(p > 0.0 && p < 1.0)) {
        throw Error("ProbabilityOutOfRange", "p=" + std::to_string(p) + " outside (0,1)");
    }
    const double kd = static_cast<double>(k_members);
    auto k = static_cast<std::size_t>(std::ceil(p * kd));
    if (k < 1) k = 1;
    if (k > k_members) k = k_members;
    const double lo = static_cast<double>(k - 1) / kd;
    const double hi = static_cast<double>(k) / kd;
    const double ru = integrate([&](double u) { return true_r(d, u); }, lo, hi, cfg);
    const double ik = 1.0 - kd * ru;
    return {ik, 1.0 - true_r(d, p)};
}

}  // namespace qri

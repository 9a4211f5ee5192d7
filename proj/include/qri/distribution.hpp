#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qri/partition.hpp"
#include "qri/rng.hpp"

namespace qri {

enum class Family {
    Lognormal,         // (mu, sigma) on the log scale
    Beta,              // (alpha, beta)
    ChiSquare,         // (df)
    ParetoII,          // Lomax: (shape a, scale lambda), Q(p) = lambda((1-p)^{-1/a} - 1)
    Exponential,       // (rate)
    Weibull,           // (shape), unit scale
    LognormalFrechet,  // (sigma, tail shape): lognormal below the median,
                       // Frechet above, spliced continuously at p = 1/2
};

// Immutable parametric distribution used as an income model. Construct through
// the named factories, which validate parameter positivity.
struct DistributionSpec {
    Family family;
    double p1 = 0.0;
    double p2 = 0.0;

    static DistributionSpec lognormal(double mu, double sigma);
    static DistributionSpec beta(double alpha, double beta);
    static DistributionSpec chi_square(double df);
    static DistributionSpec pareto2(double shape, double scale);
    static DistributionSpec exponential(double rate);
    static DistributionSpec weibull(double shape);
    static DistributionSpec lognormal_frechet(double sigma, double tail_shape);

    // CLI literal, e.g. "lognormal:0,1" or "pareto2:4,1".
    std::string label() const;
};

// Parse a CLI distribution literal ("lognormal:0,1", "beta:0.5,0.5",
// "chisq:4", "pareto2:4,1", "exp:1", "weibull:2", "lnfrechet:1,2").
DistributionSpec parse_distribution(std::string_view literal);

// Quantile function. Closed form where one exists; Beta and ChiSquare by
// monotone CDF inversion to 1e-10 absolute tolerance in p-space.
// p must lie in [0, 1); families with unbounded support exclude 1.
double quantile(const DistributionSpec& d, double p);

// CDF (used by the quantile inversion and distributional goodness-of-fit tests).
double cdf(const DistributionSpec& d, double x);

// n inverse-transform draws; deterministic for a fixed rng seed.
std::vector<double> sample(const DistributionSpec& d, std::size_t n, SeededRng& rng);

// Closed-form lognormal results (shape sigma, any mu -- the index is scale free):
//   lognormal_partial_integral: integral of the quantile ratio curve over [0, r].
//   lognormal_I:   QRI of the lognormal, strictly increasing in sigma.
//   lognormal_Ik:  per-member conditional QRI for a symmetric partition;
//                  satisfies sum_k w_k I_k = lognormal_I.
double lognormal_partial_integral(double sigma, double r);
double lognormal_I(double sigma);
std::vector<double> lognormal_Ik(double sigma, const SymmetricPartition& partition);

}  // namespace qri

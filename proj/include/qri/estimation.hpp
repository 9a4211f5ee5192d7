#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qri/partition.hpp"
#include "qri/sorted_sample.hpp"

namespace qri {

// Bandwidth choice for the quantile-density estimates feeding the
// delta-method variances. The default 0.15 * n^(-1/5) was calibrated so the
// nominal 95% intervals reproduce published coverage tables; override to
// audit sensitivity.
struct BandwidthPolicy {
    std::optional<double> bandwidth;

    double resolve(std::size_t n) const;
};

// Point estimate with delta-method inference. CI bounds are stored unclipped
// (coverage bookkeeping needs them); use the *_clipped accessors for display.
struct QriEstimate {
    double value = 0.0;
    std::optional<double> se;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    double alpha = 0.05;
    std::optional<std::size_t> grid_j;  // nullopt: exact order-statistic estimator
    bool se_borrowed_from_grid = false;
    std::size_t variance_clamps = 0;  // negative analytic variances clamped to 0

    double ci_low_clipped() const;
    double ci_high_clipped() const;
};

struct DecompositionEstimate {
    enum class Method { Grid, Exact };

    SymmetricPartition partition;
    std::vector<QriEstimate> components;
    QriEstimate total;
    Method method = Method::Grid;
};

// Type-8 sample quantile (plotting position (j - 1/3)/(n + 1/3)); clamps to
// the extreme order statistics outside the defined range.
double quantile_type8(const SortedSample& s, double p);

// Quantile density q(p) = Q'(p) by a finite difference over the window
// [p-h, p+h] with both endpoints clipped into [1/(n+1), n/(n+1)] (so the
// difference is one-sided near the edges). Throws DegenerateWindow when the
// clipped window is empty.
double quantile_density_hat(const SortedSample& s, double p, double h);

// Empirical quantile ratio R(p) = Q8(p/2) / Q8(1 - p/2).
double r_hat(const SortedSample& s, double p);

// Delta-method covariance of R_hat(p) and R_hat(p'), built from the
// Brownian-bridge covariance of sample quantiles
// Cov(Q(u), Q(v)) ~ min(u,v)(1 - max(u,v)) q(u) q(v) / n.
double cov_r_hat(const SortedSample& s, double p, double p_prime,
                 const BandwidthPolicy& policy = {});

// Grid estimator of the QRI on p_j = (j - 1/2)/J with CI from the full
// J x J covariance double sum.
QriEstimate i_hat_grid(const SortedSample& s, std::size_t grid_j = 100, double alpha = 0.05,
                       const BandwidthPolicy& policy = {});

// Per-member grid estimators on p_kj = 2 p_{k-1} + w_k (j - 1/2)/J; the total
// is i_hat_grid on the same sample.
DecompositionEstimate ik_hat_grid(const SortedSample& s, const SymmetricPartition& partition,
                                  std::size_t grid_j = 100, double alpha = 0.05,
                                  const BandwidthPolicy& policy = {});

// Exact order-statistic estimator (2/n) sum_{j<=n/2} (1 - x_j / x_{n-j+1}).
// With with_grid_se the J=100 grid machinery supplies the SE/CI, flagged as
// borrowed.
QriEstimate exact_i(const SortedSample& s, bool with_grid_se = false, double alpha = 0.05,
                    const BandwidthPolicy& policy = {});

// Exact block decomposition; requires every n * p_k to be a (distinct)
// integer, else throws NonIntegerBlockBoundary. The weighted component
// average reproduces exact_i to machine precision.
DecompositionEstimate exact_ik(const SortedSample& s, const SymmetricPartition& partition,
                               bool with_grid_se = false, double alpha = 0.05,
                               const BandwidthPolicy& policy = {});

}  // namespace qri

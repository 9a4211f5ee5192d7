#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qri/distribution.hpp"
#include "qri/partition.hpp"
#include "qri/quadrature.hpp"

namespace qri {

// Quantile ratio curve R(p) = Q(p/2) / Q(1 - p/2) for p in (0, 1].
// Throws ZeroDenominator when at least half the mass sits at zero.
double true_r(const DistributionSpec& d, double p);

// Distribution-level quantile ratio index I = integral of 1 - R(p) over [0,1].
double true_i(const DistributionSpec& d, const QuadratureConfig& cfg = {});

// Conditional QRI per partition member, I_k = 1 - (1/w_k) * int R over the
// member's probability range. Satisfies sum_k w_k I_k = true_i within
// quadrature tolerance and is nonincreasing in k.
std::vector<double> true_ik(const DistributionSpec& d, const SymmetricPartition& partition,
                            const QuadratureConfig& cfg = {});

// Large-K identification: returns (I_k for k = ceil(pK) in the equi-K
// partition, 1 - R(p)). The two converge as K grows.
std::pair<double, double> equi_limit_check(const DistributionSpec& d, std::size_t k_members,
                                           double p, const QuadratureConfig& cfg = {});

}  // namespace qri

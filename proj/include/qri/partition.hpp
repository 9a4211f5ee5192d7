#pragma once

#include <cstddef>
#include <vector>

namespace qri {

// Symmetric K-partition of [0,1]: cut points 0 = p_0 < p_1 < ... < p_K = 1/2.
// Member k is the union [p_{k-1}, p_k) U (1-p_k, 1-p_{k-1}] and carries weight
// w_k = 2(p_k - p_{k-1}). Immutable after construction; build one through
// make_partition / equi_partition, which validate the invariants.
struct SymmetricPartition {
    std::vector<double> cuts;     // size K+1, cuts.front() == 0, cuts.back() == 0.5
    std::vector<double> weights;  // size K, positive, sums to 1

    std::size_t members() const noexcept { return weights.size(); }
    double lower(std::size_t k) const { return cuts[k]; }      // p_{k-1} for member k+1
    double upper(std::size_t k) const { return cuts[k + 1]; }
};

// Build from interior cuts (each in the open interval (0, 1/2), strictly
// increasing). An empty list yields the trivial single-member partition.
SymmetricPartition make_partition(const std::vector<double>& interior_cuts);

// Equi-K-partition: p_k = k/(2K), all weights 1/K.
SymmetricPartition equi_partition(std::size_t k_members);

// Regroup per-member values from a finer partition onto a coarser one whose
// cuts are a subset of the fine cuts: out_j = sum over fine members inside
// coarse member j of (w_fine / w_coarse_j) * value.
std::vector<double> coarsen(const SymmetricPartition& fine, const SymmetricPartition& coarse,
                            const std::vector<double>& fine_values);

}  // namespace qri

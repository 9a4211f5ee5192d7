#pragma once

#include <cstddef>
#include <vector>

namespace qri {

// Nonnegative incomes in nondecreasing order. Built through ingest(), which
// sorts, rejects negatives, and enforces the zero-mass guard (fewer than half
// the observations may be exactly zero). Immutable once constructed.
struct SortedSample {
    std::vector<double> values;
    double zero_fraction = 0.0;

    std::size_t n() const noexcept { return values.size(); }
};

SortedSample ingest(std::vector<double> raw);

}  // namespace qri

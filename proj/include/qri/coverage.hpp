#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qri/distribution.hpp"
#include "qri/estimation.hpp"
#include "qri/partition.hpp"

namespace qri {

struct CoverageConfig {
    DistributionSpec dist;
    std::size_t n = 1000;
    SymmetricPartition partition;
    std::size_t trials = 1000;
    std::size_t grid_j = 100;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    BandwidthPolicy bandwidth;
    unsigned threads = 0;  // 0: hardware concurrency, capped by QRI_THREADS
};

struct ComponentCoverage {
    double true_value = 0.0;
    std::size_t hits = 0;
    double coverage = 0.0;       // hits / trials (failed trials never count as hits)
    double mean_ci_width = 0.0;  // over successful trials
    double mean_estimate = 0.0;
};

struct CoverageReport {
    CoverageConfig config;
    std::vector<ComponentCoverage> per_component;
    std::size_t failed_trials = 0;  // estimator errors, tallied, never retried
};

// Monte-Carlo coverage of the per-member grid-estimator confidence intervals
// against distribution-level truth. Trials are independently seeded
// (seed XOR trial index), so results do not depend on the worker count.
CoverageReport coverage_experiment(const CoverageConfig& cfg);

}  // namespace qri

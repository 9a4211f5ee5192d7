#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qri/rng.hpp"
#include "qri/sorted_sample.hpp"

namespace qri {

// One row of a grouped frequency table. Counts are in table units (the ABS
// tables use thousands of persons/households). upper empty = unbounded class.
struct GroupedBin {
    double lower = 0.0;
    std::optional<double> upper;
    double count = 0.0;

    bool open() const noexcept { return !upper.has_value(); }
};

struct GroupedBins {
    std::vector<GroupedBin> bins;
    double total = 0.0;

    bool has_open() const noexcept { return !bins.empty() && bins.back().open(); }
};

// Parse a lower,upper,count CSV (header optional, '#' comments and blank lines
// skipped, empty upper field = open class). Negative bounds are clipped to
// zero; zero-count rows are dropped.
GroupedBins parse_bins(std::istream& in);
GroupedBins parse_bins_file(const std::string& path);

// Scale parameter for the open class's Lomax tail:
// lambda = x_q / ((1-q)^(-1/a) - 1) with x_q the open bin's lower bound and
// q = 1 - open count / total.
double tail_scale(const GroupedBins& bins, double shape);

struct SynthConfig {
    double tail_shape = 4.0;
    double count_scale = 10.0;  // synthesized persons per table count unit
    SeededRng rng{0};
};

// Explicit population: uniform draws within each closed class, Lomax tail
// draws (all >= x_q) for the open class. Population size is exactly
// round(total * count_scale).
SortedSample synth_population(const GroupedBins& bins, const SynthConfig& cfg);

struct PercentileTable {
    std::vector<std::pair<double, double>> rows;  // (prob, Type-8 quantile)
    double max = 0.0;
};

PercentileTable percentile_table(const SortedSample& s, const std::vector<double>& probs);

// Gaussian-kernel density on an even grid over [0, truncate_at], bandwidth by
// the 0.9 min(sd, IQR/1.34) n^(-1/5) rule. All observations contribute, so the
// curve integrates to roughly the sample fraction below the truncation point.
std::vector<std::pair<double, double>> kde_export(const SortedSample& s, double truncate_at,
                                                  std::size_t grid_points = 512);

}  // namespace qri

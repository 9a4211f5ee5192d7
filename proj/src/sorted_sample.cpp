#include "qri/sorted_sample.hpp"

#include <algorithm>
#include <string>

#include "qri/error.hpp"

namespace qri {

SortedSample ingest(std::vector<double> raw) {
    if (raw.size() < 2) {
        throw Error("TooFewObservations",
                    "need at least 2 observations, got " + std::to_string(raw.size()));
    }
    for (double v : raw) {
        if (v < 0.0) {
            throw Error("NegativeIncome", "negative income " + std::to_string(v) +
                                              "; clip to zero before ingesting");
        }
    }
    std::sort(raw.begin(), raw.end());
    const auto zeros = static_cast<std::size_t>(
        std::upper_bound(raw.begin(), raw.end(), 0.0) - raw.begin());
    SortedSample s;
    s.zero_fraction = static_cast<double>(zeros) / static_cast<double>(raw.size());
    if (s.zero_fraction >= 0.5) {
        throw Error("ZeroMassTooLarge", std::to_string(zeros) + " of " +
                                            std::to_string(raw.size()) + " observations are zero");
    }
    s.values = std::move(raw);
    return s;
}

}  // namespace qri

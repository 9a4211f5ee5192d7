#include "qri/partition.hpp"

#include <cmath>
#include <string>

#include "qri/error.hpp"

namespace qri {

namespace {

constexpr std::size_t kMaxMembers = 10000;  // guards quadratic blowups downstream
constexpr double kCutTol = 1e-12;

SymmetricPartition finish(std::vector<double> cuts) {
    SymmetricPartition p;
    p.weights.reserve(cuts.size() - 1);
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        p.weights.push_back(2.0 * (cuts[k] - cuts[k - 1]));
    }
    p.cuts = std::move(cuts);
    return p;
}

}  // namespace

SymmetricPartition make_partition(const std::vector<double>& interior_cuts) {
    if (interior_cuts.size() + 1 > kMaxMembers) {
        throw Error("PartitionTooFine",
                    "more than " + std::to_string(kMaxMembers) + " members");
    }
    std::vector<double> cuts;
    cuts.reserve(interior_cuts.size() + 2);
    cuts.push_back(0.0);
    for (double c : interior_cuts) {
        if (!(c > 0.0 && c < 0.5)) {
            throw Error("CutOutOfRange",
                        "interior cut " + std::to_string(c) + " not in (0, 0.5)");
        }
        if (c <= cuts.back()) {
            throw Error("NonIncreasingCuts",
                        "cut " + std::to_string(c) + " does not increase past " +
                            std::to_string(cuts.back()));
        }
        cuts.push_back(c);
    }
    cuts.push_back(0.5);
    return finish(std::move(cuts));
}

SymmetricPartition equi_partition(std::size_t k_members) {
    if (k_members == 0) throw Error("ZeroK", "equi-partition needs K >= 1");
    if (k_members > kMaxMembers) {
        throw Error("PartitionTooFine",
                    "more than " + std::to_string(kMaxMembers) + " members");
    }
    std::vector<double> cuts(k_members + 1);
    for (std::size_t k = 0; k <= k_members; ++k) {
        cuts[k] = static_cast<double>(k) / (2.0 * static_cast<double>(k_members));
    }
    return finish(std::move(cuts));
}

std::vector<double> coarsen(const SymmetricPartition& fine, const SymmetricPartition& coarse,
                            const std::vector<double>& fine_values) {
    if (fine_values.size() != fine.members()) {
        throw Error("NotARefinement", "value count does not match the fine partition");
    }
    std::vector<double> out(coarse.members(), 0.0);
    std::size_t i = 0;  // fine cut index
    for (std::size_t j = 0; j < coarse.members(); ++j) {
        if (std::fabs(fine.cuts[i] - coarse.cuts[j]) > kCutTol) {
            throw Error("NotARefinement", "coarse cut " + std::to_string(coarse.cuts[j]) +
                                              " missing from the fine partition");
        }
        const double upper = coarse.cuts[j + 1];
        const std::size_t first = i;
        double acc = 0.0;
        while (i < fine.members() && fine.cuts[i + 1] <= upper + kCutTol) {
            acc += fine.weights[i] * fine_values[i];
            ++i;
        }
        if (std::fabs(fine.cuts[i] - upper) > kCutTol) {
            throw Error("NotARefinement",
                        "coarse cut " + std::to_string(upper) + " missing from the fine partition");
        }
        // Single-member groups pass through untouched so that coarsening a
        // partition onto itself is an exact identity.
        out[j] = (i - first == 1) ? fine_values[first] : acc / coarse.weights[j];
    }
    return out;
}

}  // namespace qri

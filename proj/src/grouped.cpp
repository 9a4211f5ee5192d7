#include "qri/grouped.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "qri/error.hpp"
#include "qri/estimation.hpp"

namespace qri {

namespace {

double round_half_even(double v) {
    const double r = std::nearbyint(v);  // default FE_TONEAREST ties to even
    return r;
}

std::optional<double> parse_field(const std::string& field) {
    std::string t = field;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
            t.end());
    if (t.empty()) return std::nullopt;
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(field);
    return v;
}

}  // namespace

GroupedBins parse_bins(std::istream& in) {
    GroupedBins out;
    std::string line;
    bool first_line = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string f_lower, f_upper, f_count;
        std::getline(ls, f_lower, ',');
        std::getline(ls, f_upper, ',');
        std::getline(ls, f_count, ',');
        std::optional<double> lower, upper, count;
        try {
            lower = parse_field(f_lower);
            upper = parse_field(f_upper);
            count = parse_field(f_count);
        } catch (const std::exception&) {
            if (first_line) {  // header row
                first_line = false;
                continue;
            }
            throw Error("BadBinRow", "unparseable bin row: " + line);
        }
        first_line = false;
        if (!lower || !count) {
            throw Error("BadBinRow", "bin row needs lower and count: " + line);
        }
        GroupedBin bin;
        bin.lower = std::max(*lower, 0.0);  // negative bounds collapse to 0
        if (upper) bin.upper = std::max(*upper, 0.0);
        bin.count = *count;
        if (bin.count < 0.0) {
            throw Error("BadBinRow", "negative count in row: " + line);
        }
        if (bin.count == 0.0) continue;
        if (bin.upper && *bin.upper < bin.lower) {
            throw Error("OverlappingBins", "upper below lower in row: " + line);
        }
        out.bins.push_back(bin);
    }
    if (out.bins.empty()) throw Error("EmptyTable", "no usable bins");

    for (std::size_t i = 0; i + 1 < out.bins.size(); ++i) {
        if (out.bins[i].open()) {
            throw Error("OpenBinNotLast", "unbounded class must be the last row");
        }
        if (out.bins[i + 1].lower < *out.bins[i].upper) {
            throw Error("OverlappingBins",
                        "bin starting at " + std::to_string(out.bins[i + 1].lower) +
                            " overlaps the previous class");
        }
    }
    out.total = std::accumulate(out.bins.begin(), out.bins.end(), 0.0,
                                [](double acc, const GroupedBin& b) { return acc + b.count; });
    if (!(out.total > 0.0)) throw Error("EmptyTable", "table total is zero");
    if (out.has_open() && out.bins.back().count / out.total >= 0.5) {
        throw Error("OpenBinTooHeavy", "open class holds at least half the mass");
    }
    return out;
}

GroupedBins parse_bins_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("FileNotFound", "cannot open " + path);
    return parse_bins(in);
}

double tail_scale(const GroupedBins& bins, double shape) {
    if (!bins.has_open()) throw Error("NoOpenBin", "table has no unbounded class");
    if (!(shape > 0.0)) throw Error("InvalidParameter", "tail shape must be positive");
    const GroupedBin& open = bins.bins.back();
    const double q = 1.0 - open.count / bins.total;
    return open.lower / (std::pow(1.0 - q, -1.0 / shape) - 1.0);
}

SortedSample synth_population(const GroupedBins& bins, const SynthConfig& cfg) {
    if (!(cfg.count_scale >= 1.0)) {
        throw Error("InvalidParameter", "count scale must be >= 1");
    }
    if (!(cfg.tail_shape > 0.0)) {
        throw Error("InvalidParameter", "tail shape must be positive");
    }
    const auto target =
        static_cast<long long>(round_half_even(bins.total * cfg.count_scale));

    std::vector<long long> sizes(bins.bins.size());
    long long assigned = 0;
    for (std::size_t i = 0; i < bins.bins.size(); ++i) {
        sizes[i] = static_cast<long long>(round_half_even(bins.bins[i].count * cfg.count_scale));
        assigned += sizes[i];
    }
    // Rounding residual goes to the largest classes, one count at a time.
    if (assigned != target) {
        std::vector<std::size_t> order(bins.bins.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return bins.bins[a].count > bins.bins[b].count;
        });
        long long delta = target - assigned;
        const long long step = delta > 0 ? 1 : -1;
        std::size_t cursor = 0;
        while (delta != 0) {
            const std::size_t idx = order[cursor % order.size()];
            if (sizes[idx] + step >= 0) {
                sizes[idx] += step;
                delta -= step;
            }
            ++cursor;
        }
    }

    SeededRng rng = cfg.rng;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(target));
    for (std::size_t i = 0; i < bins.bins.size(); ++i) {
        const GroupedBin& bin = bins.bins[i];
        const long long m = sizes[i];
        if (bin.open()) {
            // Lomax tail pinned to the class lower bound: with
            // t = (1-q)^(-1/a), a draw at tail rank u in [q,1) maps to
            // x_q * (t (1-u01)^(-1/a) - 1)/(t - 1), which is exactly x_q at
            // u01 = 0 and increases from there. 1-q is the open-class mass
            // fraction, computed directly to dodge cancellation.
            const double t = std::pow(bin.count / bins.total, -1.0 / cfg.tail_shape);
            for (long long j = 0; j < m; ++j) {
                const double u01 = rng.next_double();
                values.push_back(bin.lower * (t * std::pow(1.0 - u01, -1.0 / cfg.tail_shape) - 1.0) /
                                 (t - 1.0));
            }
        } else if (*bin.upper == bin.lower) {
            values.insert(values.end(), static_cast<std::size_t>(m), bin.lower);
        } else {
            const double width = *bin.upper - bin.lower;
            for (long long j = 0; j < m; ++j) {
                values.push_back(bin.lower + rng.next_double() * width);
            }
        }
    }
    return ingest(std::move(values));
}

PercentileTable percentile_table(const SortedSample& s, const std::vector<double>& probs) {
    PercentileTable t;
    t.rows.reserve(probs.size());
    for (double p : probs) {
        t.rows.emplace_back(p, quantile_type8(s, p));
    }
    t.max = s.values.back();
    return t;
}

std::vector<std::pair<double, double>> kde_export(const SortedSample& s, double truncate_at,
                                                  std::size_t grid_points) {
    if (!(truncate_at > 0.0)) {
        throw Error("InvalidParameter", "truncation point must be positive");
    }
    if (grid_points < 2) {
        throw Error("InvalidParameter", "need at least 2 grid points");
    }
    const auto n = static_cast<double>(s.n());
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : s.values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double iqr = quantile_type8(s, 0.75) - quantile_type8(s, 0.25);

    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) spread = sd;
    if (!(spread > 0.0)) spread = std::fabs(mean);
    if (!(spread > 0.0)) spread = 1.0;
    const double h = 0.9 * spread * std::pow(n, -0.2);

    // Linear binning followed by discrete kernel convolution; accurate to
    // O((delta/h)^2) and fast enough for populations in the hundreds of
    // thousands.
    const double delta = truncate_at / static_cast<double>(grid_points - 1);
    const double cutoff = 8.0 * h;
    const auto pad = static_cast<long long>(std::ceil(cutoff / delta)) + 1;
    const long long lo_bin = -pad;
    const long long hi_bin = static_cast<long long>(grid_points) + pad;
    const auto bins = static_cast<std::size_t>(hi_bin - lo_bin + 1);
    std::vector<double> mass(bins, 0.0);
    for (double v : s.values) {
        if (v > truncate_at + cutoff + delta) continue;  // cannot reach the grid
        const double pos = v / delta - static_cast<double>(lo_bin);
        auto idx = static_cast<std::size_t>(pos);
        if (idx + 1 >= bins) idx = bins - 2;
        const double frac = pos - static_cast<double>(idx);
        mass[idx] += 1.0 - frac;
        mass[idx + 1] += frac;
    }

    const double inv = 1.0 / (n * h * 2.5066282746310005024);
    std::vector<std::pair<double, double>> curve;
    curve.reserve(grid_points);
    const auto reach = static_cast<long long>(std::ceil(cutoff / delta));
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = delta * static_cast<double>(i);
        const auto center = static_cast<long long>(i) - lo_bin;
        double dens = 0.0;
        const long long from = std::max<long long>(0, center - reach);
        const long long to = std::min<long long>(static_cast<long long>(bins) - 1, center + reach);
        for (long long b = from; b <= to; ++b) {
            if (mass[static_cast<std::size_t>(b)] == 0.0) continue;
            const double z = static_cast<double>(center - b) * delta / h;
            dens += mass[static_cast<std::size_t>(b)] * std::exp(-0.5 * z * z);
        }
        curve.emplace_back(x, dens * inv);
    }
    return curve;
}

}  // namespace qri

#include "qri/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qri/error.hpp"
#include "qri/normal.hpp"

namespace qri {

namespace {

// Cached per-grid-point quantities for the covariance double sum.
struct GridPoint {
    double a, b;    // symmetric pair p/2 and 1 - p/2
    double r;       // Q8(a) / Q8(b)
    double ga, gb;  // q(a)/Q(b) and q(b) Q(a)/Q(b)^2
};

double bridge(double u, double v) {
    return std::min(u, v) * (1.0 - std::max(u, v));
}

std::vector<GridPoint> build_grid(const SortedSample& s, const std::vector<double>& probs,
                                  double h) {
    // Density evaluation points outside [1/(n+1), n/(n+1)] are pulled to the
    // boundary so the window always fits; the Brownian-bridge weight keeps
    // using the true grid position, which is what fades those points out.
    const auto n = static_cast<double>(s.n());
    const double lo = 1.0 / (n + 1.0);
    const double hi = n / (n + 1.0);
    std::vector<GridPoint> pts;
    pts.reserve(probs.size());
    for (double p : probs) {
        GridPoint g;
        g.a = p / 2.0;
        g.b = 1.0 - p / 2.0;
        const double qa = quantile_type8(s, g.a);
        const double qb = quantile_type8(s, g.b);
        if (!(qb > 0.0)) {
            throw Error("ZeroDenominator", "Q8(1 - p/2) = 0 at p = " + std::to_string(p));
        }
        const double da = quantile_density_hat(s, std::clamp(g.a, lo, hi), h);
        const double db = quantile_density_hat(s, std::clamp(g.b, lo, hi), h);
        g.r = qa / qb;
        g.ga = da / qb;
        g.gb = db * qa / (qb * qb);
        pts.push_back(g);
    }
    return pts;
}

// (1/J^2) sum_{i,j} Cov(R_hat(p_i), R_hat(p_j)); O(J^2), computed directly.
double grid_variance(const std::vector<GridPoint>& pts, std::size_t n) {
    const std::size_t j_count = pts.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < j_count; ++i) {
        const GridPoint& x = pts[i];
        for (std::size_t j = 0; j < j_count; ++j) {
            const GridPoint& y = pts[j];
            acc += bridge(x.a, y.a) * x.ga * y.ga - bridge(x.a, y.b) * x.ga * y.gb -
                   bridge(x.b, y.a) * x.gb * y.ga + bridge(x.b, y.b) * x.gb * y.gb;
        }
    }
    return acc / (static_cast<double>(n) * static_cast<double>(j_count) *
                  static_cast<double>(j_count));
}

std::vector<double> member_grid(const SymmetricPartition& partition, std::size_t k,
                                std::size_t j_count) {
    std::vector<double> probs(j_count);
    const double w = partition.weights[k];
    const double base = 2.0 * partition.lower(k);
    for (std::size_t j = 1; j <= j_count; ++j) {
        probs[j - 1] = base + w * (static_cast<double>(j) - 0.5) / static_cast<double>(j_count);
    }
    return probs;
}

QriEstimate finish_estimate(double value, double variance, std::optional<std::size_t> grid_j,
                            double alpha) {
    QriEstimate e;
    e.value = value;
    e.alpha = alpha;
    e.grid_j = grid_j;
    if (variance < 0.0) {
        variance = 0.0;
        e.variance_clamps = 1;
    }
    const double se = std::sqrt(variance);
    const double z = normal_quantile(1.0 - alpha / 2.0);
    e.se = se;
    e.ci_low = value - z * se;
    e.ci_high = value + z * se;
    return e;
}

void require_grid(std::size_t grid_j) {
    if (grid_j < 2) {
        throw Error("InvalidParameter", "grid size J must be >= 2, got " + std::to_string(grid_j));
    }
}

}  // namespace

double BandwidthPolicy::resolve(std::size_t n) const {
    if (bandwidth) {
        if (!(*bandwidth > 0.0)) {
            throw Error("DegenerateWindow", "bandwidth must be positive");
        }
        return *bandwidth;
    }
    return 0.15 * std::pow(static_cast<double>(n), -0.2);
}

double QriEstimate::ci_low_clipped() const {
    return std::clamp(ci_low.value_or(value), 0.0, 1.0);
}

double QriEstimate::ci_high_clipped() const {
    return std::clamp(ci_high.value_or(value), 0.0, 1.0);
}

double quantile_type8(const SortedSample& s, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error("ProbabilityOutOfRange", "p=" + std::to_string(p) + " outside [0,1]");
    }
    const auto n = static_cast<double>(s.n());
    const double h = (n + 1.0 / 3.0) * p + 1.0 / 3.0;
    if (h <= 1.0) return s.values.front();
    if (h >= n) return s.values.back();
    const auto j = static_cast<std::size_t>(h);  // 1 <= j <= n-1
    const double g = h - static_cast<double>(j);
    return s.values[j - 1] + g * (s.values[j] - s.values[j - 1]);
}

double quantile_density_hat(const SortedSample& s, double p, double h) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error("ProbabilityOutOfRange", "p=" + std::to_string(p) + " outside (0,1)");
    }
    const auto n = static_cast<double>(s.n());
    const double lo = 1.0 / (n + 1.0);
    const double hi = n / (n + 1.0);
    const double u1 = std::clamp(p - h, lo, hi);
    const double u2 = std::clamp(p + h, lo, hi);
    if (!(u2 > u1)) {
        throw Error("DegenerateWindow",
                    "density window collapsed at p = " + std::to_string(p) +
                        " (n = " + std::to_string(s.n()) + ")");
    }
    const double slope = (quantile_type8(s, u2) - quantile_type8(s, u1)) / (u2 - u1);
    return std::max(slope, 0.0);
}

double r_hat(const SortedSample& s, double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error("ProbabilityOutOfRange", "p=" + std::to_string(p) + " outside (0,1]");
    }
    const double denom = quantile_type8(s, 1.0 - p / 2.0);
    if (!(denom > 0.0)) {
        throw Error("ZeroDenominator", "Q8(1 - p/2) = 0 at p = " + std::to_string(p));
    }
    return quantile_type8(s, p / 2.0) / denom;
}

double cov_r_hat(const SortedSample& s, double p, double p_prime, const BandwidthPolicy& policy) {
    if (p > p_prime) std::swap(p, p_prime);
    const double h = policy.resolve(s.n());
    const auto pts = build_grid(s, {p, p_prime}, h);
    const GridPoint& x = pts[0];
    const GridPoint& y = pts[1];
    double cov = (bridge(x.a, y.a) * x.ga * y.ga - bridge(x.a, y.b) * x.ga * y.gb -
                  bridge(x.b, y.a) * x.gb * y.ga + bridge(x.b, y.b) * x.gb * y.gb) /
                 static_cast<double>(s.n());
    if (p == p_prime && cov < 0.0) cov = 0.0;  // diagonal is a variance
    return cov;
}

QriEstimate i_hat_grid(const SortedSample& s, std::size_t grid_j, double alpha,
                       const BandwidthPolicy& policy) {
    require_grid(grid_j);
    std::vector<double> probs(grid_j);
    for (std::size_t j = 1; j <= grid_j; ++j) {
        probs[j - 1] = (static_cast<double>(j) - 0.5) / static_cast<double>(grid_j);
    }
    const double h = policy.resolve(s.n());
    const auto pts = build_grid(s, probs, h);
    double mean = 0.0;
    for (const GridPoint& g : pts) mean += 1.0 - g.r;
    mean /= static_cast<double>(grid_j);
    return finish_estimate(mean, grid_variance(pts, s.n()), grid_j, alpha);
}

DecompositionEstimate ik_hat_grid(const SortedSample& s, const SymmetricPartition& partition,
                                  std::size_t grid_j, double alpha,
                                  const BandwidthPolicy& policy) {
    require_grid(grid_j);
    const double h = policy.resolve(s.n());
    DecompositionEstimate d;
    d.partition = partition;
    d.method = DecompositionEstimate::Method::Grid;
    d.components.reserve(partition.members());
    for (std::size_t k = 0; k < partition.members(); ++k) {
        const auto pts = build_grid(s, member_grid(partition, k, grid_j), h);
        double mean = 0.0;
        for (const GridPoint& g : pts) mean += 1.0 - g.r;
        mean /= static_cast<double>(grid_j);
        d.components.push_back(finish_estimate(mean, grid_variance(pts, s.n()), grid_j, alpha));
    }
    d.total = i_hat_grid(s, grid_j, alpha, policy);
    return d;
}

QriEstimate exact_i(const SortedSample& s, bool with_grid_se, double alpha,
                    const BandwidthPolicy& policy) {
    const std::size_t n = s.n();
    const std::size_t half = n / 2;
    double sum = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        const double top = s.values[n - 1 - i];
        if (!(top > 0.0)) {
            throw Error("ZeroDenominator", "upper order statistic is zero");
        }
        sum += 1.0 - s.values[i] / top;
    }
    const double value = 2.0 * sum / static_cast<double>(n);
    if (!with_grid_se) {
        QriEstimate e;
        e.value = value;
        e.alpha = alpha;
        return e;
    }
    QriEstimate grid = i_hat_grid(s, 100, alpha, policy);
    QriEstimate e = finish_estimate(value, *grid.se * *grid.se, std::nullopt, alpha);
    e.variance_clamps = grid.variance_clamps;
    e.se_borrowed_from_grid = true;
    return e;
}

DecompositionEstimate exact_ik(const SortedSample& s, const SymmetricPartition& partition,
                               bool with_grid_se, double alpha, const BandwidthPolicy& policy) {
    const std::size_t n = s.n();
    const auto nd = static_cast<double>(n);
    std::vector<std::size_t> bounds{0};
    for (std::size_t k = 1; k <= partition.members(); ++k) {
        const double exact = nd * partition.cuts[k];
        const double rounded = std::round(exact);
        if (std::fabs(exact - rounded) > 1e-9) {
            throw Error("NonIntegerBlockBoundary",
                        "n * p_k = " + std::to_string(exact) + " is not an integer");
        }
        const auto b = static_cast<std::size_t>(rounded);
        if (b <= bounds.back()) {
            throw Error("NonIntegerBlockBoundary",
                        "block boundaries must be distinct increasing integers");
        }
        bounds.push_back(b);
    }

    DecompositionEstimate d;
    d.partition = partition;
    d.method = DecompositionEstimate::Method::Exact;
    d.components.reserve(partition.members());
    for (std::size_t k = 0; k < partition.members(); ++k) {
        double sum = 0.0;
        for (std::size_t j = bounds[k]; j < bounds[k + 1]; ++j) {
            const double top = s.values[n - 1 - j];
            if (!(top > 0.0)) {
                throw Error("ZeroDenominator", "upper order statistic is zero");
            }
            sum += 1.0 - s.values[j] / top;
        }
        const double m_k = static_cast<double>(bounds[k + 1] - bounds[k]);
        QriEstimate e;
        e.value = sum / m_k;
        e.alpha = alpha;
        d.components.push_back(e);
    }
    if (with_grid_se) {
        const double h = policy.resolve(n);
        for (std::size_t k = 0; k < partition.members(); ++k) {
            const auto pts = build_grid(s, member_grid(partition, k, 100), h);
            QriEstimate e =
                finish_estimate(d.components[k].value, grid_variance(pts, n), std::nullopt, alpha);
            e.se_borrowed_from_grid = true;
            d.components[k] = e;
        }
    }
    d.total = exact_i(s, with_grid_se, alpha, policy);
    return d;
}

}  // namespace qri

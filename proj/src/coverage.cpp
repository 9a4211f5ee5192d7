#include "qri/coverage.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

#include "qri/error.hpp"
#include "qri/theory.hpp"

namespace qri {

namespace {

unsigned resolve_threads(unsigned requested) {
    unsigned n = requested ? requested : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* cap = std::getenv("QRI_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v > 0 && static_cast<unsigned>(v) < n) n = static_cast<unsigned>(v);
    }
    return n;
}

}  // namespace

CoverageReport coverage_experiment(const CoverageConfig& cfg) {
    if (cfg.trials == 0) throw Error("InvalidParameter", "trials must be >= 1");
    if (cfg.n < 2) throw Error("InvalidParameter", "sample size must be >= 2");

    std::vector<double> truth;
    if (cfg.dist.family == Family::Lognormal) {
        truth = lognormal_Ik(cfg.dist.p2, cfg.partition);
    } else {
        truth = true_ik(cfg.dist, cfg.partition);
    }
    const std::size_t members = cfg.partition.members();

    // Per-trial outcome slots keep the reduction order-independent.
    std::vector<std::uint8_t> trial_failed(cfg.trials, 0);
    std::vector<std::uint8_t> hit(cfg.trials * members, 0);
    std::vector<double> width(cfg.trials * members, 0.0);
    std::vector<double> estimate(cfg.trials * members, 0.0);

    auto run_trial = [&](std::size_t t) {
        SeededRng rng(cfg.seed ^ static_cast<std::uint64_t>(t));
        try {
            SortedSample s = ingest(sample(cfg.dist, cfg.n, rng));
            DecompositionEstimate d =
                ik_hat_grid(s, cfg.partition, cfg.grid_j, cfg.alpha, cfg.bandwidth);
            for (std::size_t k = 0; k < members; ++k) {
                const QriEstimate& e = d.components[k];
                const std::size_t slot = t * members + k;
                hit[slot] = (*e.ci_low <= truth[k] && truth[k] <= *e.ci_high) ? 1 : 0;
                width[slot] = *e.ci_high - *e.ci_low;
                estimate[slot] = e.value;
            }
        } catch (const Error&) {
            trial_failed[t] = 1;  // counts as non-coverage
        }
    };

    const unsigned workers = resolve_threads(cfg.threads);
    if (workers <= 1 || cfg.trials < 2) {
        for (std::size_t t = 0; t < cfg.trials; ++t) run_trial(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (std::size_t t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1)) {
                    run_trial(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    CoverageReport report;
    report.config = cfg;
    report.per_component.resize(members);
    std::size_t ok_trials = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (trial_failed[t]) {
            ++report.failed_trials;
            continue;
        }
        ++ok_trials;
        for (std::size_t k = 0; k < members; ++k) {
            const std::size_t slot = t * members + k;
            report.per_component[k].hits += hit[slot];
            report.per_component[k].mean_ci_width += width[slot];
            report.per_component[k].mean_estimate += estimate[slot];
        }
    }
    for (std::size_t k = 0; k < members; ++k) {
        ComponentCoverage& c = report.per_component[k];
        c.true_value = truth[k];
        c.coverage = static_cast<double>(c.hits) / static_cast<double>(cfg.trials);
        if (ok_trials > 0) {
            c.mean_ci_width /= static_cast<double>(ok_trials);
            c.mean_estimate /= static_cast<double>(ok_trials);
        }
    }
    return report;
}

}  // namespace qri
